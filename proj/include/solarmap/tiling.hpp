#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solarmap/geometry.hpp"
#include "solarmap/suppression.hpp"

namespace solarmap {

inline constexpr std::int64_t kDefaultTileSize = 512;
inline constexpr std::int64_t kDefaultOverlap = 64;

struct TileSpec {
  std::string tile_id;
  std::int64_t origin_x = 0;
  std::int64_t origin_y = 0;
  std::int64_t width = 0;
  std::int64_t height = 0;

  /// The tile's footprint in global pixel coordinates (pixel centres are
  /// integers, so the footprint extends half a pixel past the edge centres).
  RotatedBox footprint() const;

  /// True when every vertex of a tile-local box lies inside the tile.
  bool fully_contains_local(const RotatedBox& local_box) const;
};

struct TileGrid {
  std::int64_t ortho_width = 0;
  std::int64_t ortho_height = 0;
  std::int64_t tile_size = kDefaultTileSize;
  std::int64_t overlap = kDefaultOverlap;
  std::vector<TileSpec> tiles;

  const TileSpec* find(const std::string& tile_id) const;
};

/// Origins along one axis: multiples of (tile_size - overlap), with the last
/// one clamped so the final tile ends at the image edge.
std::vector<std::int64_t> tile_origins(std::int64_t extent, std::int64_t tile_size,
                                       std::int64_t overlap);

/// Row-major grid; tile ids are "r<row>_c<col>" with three-digit indices.
TileGrid plan_tiles(std::int64_t ortho_w, std::int64_t ortho_h,
                    std::int64_t tile_size = kDefaultTileSize,
                    std::int64_t overlap = kDefaultOverlap);

/// Translates a tile-local detection into the global frame.
Detection tile_to_global(const Detection& det, const TileSpec& tile);

using PerTileDetections = std::map<std::string, std::vector<Detection>>;

/// Lifts every tile's detections (visited in grid order), then removes
/// cross-tile duplicates with rotated NMS at dedup_iou. Throws
/// Error(UnknownTile) when a key is not part of the grid.
std::vector<Detection> stitch(const PerTileDetections& per_tile, const TileGrid& grid,
                              double dedup_iou);

struct PatchEntry {
  std::string tile_id;
  bool has_panels = false;
};

inline constexpr std::size_t kDefaultForegroundSamples = 10;
inline constexpr std::size_t kDefaultBackgroundSamples = 5;

struct PatchSample {
  /// Selected ids, each list in patch-index order.
  std::vector<std::string> foreground;
  std::vector<std::string> background;
  bool foreground_shortage = false;
  bool background_shortage = false;
  std::vector<std::string> warnings;
};

/// Uniform sampling without replacement from the foreground and background
/// pools separately. A short pool is returned whole and flagged.
PatchSample sample_patches(const std::vector<PatchEntry>& patch_index,
                           std::size_t n_fg = kDefaultForegroundSamples,
                           std::size_t n_bg = kDefaultBackgroundSamples, std::uint64_t seed = 0);

/// A tile is foreground when any ground-truth box overlaps its footprint.
std::vector<PatchEntry> build_patch_index(const TileGrid& grid,
                                          const std::vector<RotatedBox>& ground_truth);

}  // namespace solarmap
