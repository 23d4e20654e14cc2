#include "solarmap/tiling.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

#include "solarmap/error.hpp"
#include "solarmap/random.hpp"

namespace solarmap {

namespace {

constexpr double kContainmentSlack = 1e-9;

std::string make_tile_id(std::size_t row, std::size_t col) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%03zu_c%03zu", row, col);
  return buf;
}

std::vector<std::size_t> sample_indices(std::size_t pool, std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t take = std::min(pool, n);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

RotatedBox TileSpec::footprint() const {
  return RotatedBox{static_cast<double>(origin_x) + (static_cast<double>(width) - 1.0) / 2.0,
                    static_cast<double>(origin_y) + (static_cast<double>(height) - 1.0) / 2.0,
                    static_cast<double>(width), static_cast<double>(height), 0.0};
}

bool TileSpec::fully_contains_local(const RotatedBox& local_box) const {
  const auto b = bounds(local_box);
  return b.min_x >= -0.5 - kContainmentSlack && b.min_y >= -0.5 - kContainmentSlack &&
         b.max_x <= static_cast<double>(width) - 0.5 + kContainmentSlack &&
         b.max_y <= static_cast<double>(height) - 0.5 + kContainmentSlack;
}

const TileSpec* TileGrid::find(const std::string& tile_id) const {
  for (const auto& t : tiles) {
    if (t.tile_id == tile_id) return &t;
  }
  return nullptr;
}

std::vector<std::int64_t> tile_origins(std::int64_t extent, std::int64_t tile_size,
                                       std::int64_t overlap) {
  if (extent <= 0) throw Error(ErrorCode::InvalidConfig, "orthomosaic dimensions must be positive");
  if (overlap < 0 || tile_size <= overlap) {
    throw Error(ErrorCode::InvalidConfig, "tiling requires tile_size > overlap >= 0");
  }
  if (tile_size >= extent) return {0};
  const std::int64_t stride = tile_size - overlap;
  std::vector<std::int64_t> origins;
  for (std::int64_t o = 0;; o += stride) {
    if (o + tile_size >= extent) {
      origins.push_back(extent - tile_size);
      break;
    }
    origins.push_back(o);
  }
  return origins;
}

TileGrid plan_tiles(std::int64_t ortho_w, std::int64_t ortho_h, std::int64_t tile_size,
                    std::int64_t overlap) {
  TileGrid grid{ortho_w, ortho_h, tile_size, overlap, {}};
  const auto xs = tile_origins(ortho_w, tile_size, overlap);
  const auto ys = tile_origins(ortho_h, tile_size, overlap);
  grid.tiles.reserve(xs.size() * ys.size());
  for (std::size_t r = 0; r < ys.size(); ++r) {
    for (std::size_t c = 0; c < xs.size(); ++c) {
      grid.tiles.push_back(TileSpec{make_tile_id(r, c), xs[c], ys[r],
                                    std::min(tile_size, ortho_w), std::min(tile_size, ortho_h)});
    }
  }
  return grid;
}

Detection tile_to_global(const Detection& det, const TileSpec& tile) {
  Detection out = det;
  out.box = translate_box(det.box, static_cast<double>(tile.origin_x),
                          static_cast<double>(tile.origin_y));
  out.tile_id = tile.tile_id;
  return out;
}

std::vector<Detection> stitch(const PerTileDetections& per_tile, const TileGrid& grid,
                              double dedup_iou) {
  for (const auto& [id, dets] : per_tile) {
    if (grid.find(id) == nullptr) {
      throw Error(ErrorCode::UnknownTile, "unknown tile id '" + id + "'");
    }
  }
  std::vector<Detection> lifted;
  for (const auto& tile : grid.tiles) {
    const auto it = per_tile.find(tile.tile_id);
    if (it == per_tile.end()) continue;
    for (const auto& d : it->second) lifted.push_back(tile_to_global(d, tile));
  }
  std::vector<Detection> out;
  for (std::size_t i : rotated_nms(lifted, dedup_iou)) out.push_back(lifted[i]);
  return out;
}

PatchSample sample_patches(const std::vector<PatchEntry>& patch_index, std::size_t n_fg,
                           std::size_t n_bg, std::uint64_t seed) {
  std::vector<const PatchEntry*> fg;
  std::vector<const PatchEntry*> bg;
  std::set<std::string> seen;
  for (const auto& p : patch_index) {
    if (!seen.insert(p.tile_id).second) continue;
    (p.has_panels ? fg : bg).push_back(&p);
  }

  Rng rng(seed);
  PatchSample out;
  for (std::size_t i : sample_indices(fg.size(), n_fg, rng)) out.foreground.push_back(fg[i]->tile_id);
  for (std::size_t i : sample_indices(bg.size(), n_bg, rng)) out.background.push_back(bg[i]->tile_id);

  out.foreground_shortage = fg.size() < n_fg;
  out.background_shortage = bg.size() < n_bg;
  if (out.foreground_shortage) {
    out.warnings.push_back("requested " + std::to_string(n_fg) + " foreground patches, only " +
                           std::to_string(fg.size()) + " available");
  }
  if (out.background_shortage) {
    out.warnings.push_back("requested " + std::to_string(n_bg) + " background patches, only " +
                           std::to_string(bg.size()) + " available");
  }
  return out;
}

std::vector<PatchEntry> build_patch_index(const TileGrid& grid,
                                          const std::vector<RotatedBox>& ground_truth) {
  std::vector<PatchEntry> index;
  index.reserve(grid.tiles.size());
  for (const auto& tile : grid.tiles) {
    const RotatedBox fp = tile.footprint();
    const bool any = std::any_of(ground_truth.begin(), ground_truth.end(), [&](const RotatedBox& g) {
      return intersection_area(fp, g) > kMinArea;
    });
    index.push_back({tile.tile_id, any});
  }
  return index;
}

}  // namespace solarmap
