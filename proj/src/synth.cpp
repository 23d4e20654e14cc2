#include "solarmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "solarmap/error.hpp"
#include "solarmap/random.hpp"

namespace solarmap {

namespace {

std::size_t rounded_count(double rate, std::size_t n) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

}  // namespace

void FarmSpec::validate() const {
  const auto bad = [](const char* why) { return Error(ErrorCode::InvalidSpec, why); };
  if (rows == 0 || cols == 0) throw bad("farm needs at least one row and one column");
  if (!(panel_w > 0.0) || !(panel_h > 0.0)) throw bad("panel dimensions must be positive");
  if (!(pitch_x >= panel_w) || !(pitch_y >= panel_h)) {
    throw bad("pitch must be at least the panel size along each axis");
  }
  if (!(jitter_px >= 0.0) || !(jitter_deg >= 0.0)) throw bad("jitter must be non-negative");
  if (!std::isfinite(orientation)) throw bad("orientation must be finite");
  if (canvas_w <= 0 || canvas_h <= 0) throw bad("canvas dimensions must be positive");
}

std::vector<RotatedBox> generate_ground_truth(const FarmSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  // Canvas centre in pixel-centre coordinates.
  const Point centre{(static_cast<double>(spec.canvas_w) - 1.0) / 2.0,
                     (static_cast<double>(spec.canvas_h) - 1.0) / 2.0};
  std::vector<RotatedBox> boxes;
  boxes.reserve(spec.rows * spec.cols);
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const double gx = (static_cast<double>(c) - (static_cast<double>(spec.cols) - 1.0) / 2.0) * spec.pitch_x;
      const double gy = (static_cast<double>(r) - (static_cast<double>(spec.rows) - 1.0) / 2.0) * spec.pitch_y;
      const RotatedBox laid = canonicalize(centre.x + gx, centre.y + gy, spec.panel_w, spec.panel_h, 0.0);
      RotatedBox box = rotate_box(laid, spec.orientation, centre);

      const double dx = rng.uniform(-1.0, 1.0) * spec.jitter_px;
      const double dy = rng.uniform(-1.0, 1.0) * spec.jitter_px;
      const double dt = rng.uniform(-1.0, 1.0) * spec.jitter_deg;
      box = canonicalize(box.cx + dx, box.cy + dy, box.w, box.h, box.theta + dt);

      const auto b = bounds(box);
      if (b.min_x < -0.5 || b.min_y < -0.5 || b.max_x > static_cast<double>(spec.canvas_w) - 0.5 ||
          b.max_y > static_cast<double>(spec.canvas_h) - 0.5) {
        throw Error(ErrorCode::InvalidSpec, "panel (row " + std::to_string(r) + ", col " +
                                                std::to_string(c) + ") escapes the canvas");
      }
      boxes.push_back(box);
    }
  }
  return boxes;
}

Farm generate_farm(const FarmSpec& spec) {
  Farm farm;
  farm.ground_truth = generate_ground_truth(spec);
  farm.raster = Raster(spec.canvas_w, spec.canvas_h, kBackgroundColor);
  for (const auto& box : farm.ground_truth) fill_box(farm.raster, box, kPanelColor);
  return farm;
}

void StubDetectorParams::validate() const {
  if (!(fp_rate >= 0.0 && fp_rate < 1.0) || !(fn_rate >= 0.0 && fn_rate < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "stub detector rates must lie in [0, 1)");
  }
  if (!(score_floor >= 0.0 && score_floor <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "score_floor must lie in [0, 1]");
  }
  if (!(noise_px >= 0.0) || !(noise_deg >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "stub detector noise must be non-negative");
  }
}

std::vector<Detection> stub_detector(const std::vector<RotatedBox>& gt,
                                     const StubDetectorParams& params,
                                     std::optional<AxisAlignedBounds> region) {
  params.validate();
  Rng rng(params.seed);
  const std::size_t n = gt.size();

  // Pick the dropped panels first; partial Fisher-Yates over indices.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t n_drop = std::min(n, rounded_count(params.fn_rate, n));
  for (std::size_t i = 0; i < n_drop; ++i) {
    std::swap(order[i], order[i + static_cast<std::size_t>(rng.below(n - i))]);
  }
  std::vector<bool> dropped(n, false);
  for (std::size_t i = 0; i < n_drop; ++i) dropped[order[i]] = true;

  const auto draw_score = [&] { return 1.0 - rng.uniform() * (1.0 - params.score_floor); };

  std::vector<Detection> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Always consume the same draws so the stream is independent of `dropped`.
    const double dx = rng.uniform(-1.0, 1.0) * params.noise_px;
    const double dy = rng.uniform(-1.0, 1.0) * params.noise_px;
    const double dt = rng.uniform(-1.0, 1.0) * params.noise_deg;
    const double score = draw_score();
    if (dropped[i]) continue;
    const auto& g = gt[i];
    Detection d;
    d.box = params.noise_px == 0.0 && params.noise_deg == 0.0
                ? g
                : canonicalize(g.cx + dx, g.cy + dy, g.w, g.h, g.theta + dt);
    d.score = score;
    out.push_back(std::move(d));
  }

  const std::size_t n_fp = rounded_count(params.fp_rate, n);
  if (n_fp > 0) {
    AxisAlignedBounds area{0, 0, 0, 0};
    if (region) {
      area = *region;
    } else {
      area = bounds(gt.front());
      for (const auto& g : gt) {
        const auto b = bounds(g);
        area = {std::min(area.min_x, b.min_x), std::min(area.min_y, b.min_y),
                std::max(area.max_x, b.max_x), std::max(area.max_y, b.max_y)};
      }
    }
    for (std::size_t k = 0; k < n_fp; ++k) {
      const auto& like = gt[static_cast<std::size_t>(rng.below(n))];
      const double theta = rng.uniform(-90.0, 90.0);
      const double radius = std::hypot(like.w, like.h) / 2.0;
      const double lo_x = area.min_x + radius;
      const double hi_x = area.max_x - radius;
      const double lo_y = area.min_y + radius;
      const double hi_y = area.max_y - radius;
      const double ux = rng.uniform();
      const double uy = rng.uniform();
      const double cx = hi_x > lo_x ? lo_x + ux * (hi_x - lo_x) : (area.min_x + area.max_x) / 2.0;
      const double cy = hi_y > lo_y ? lo_y + uy * (hi_y - lo_y) : (area.min_y + area.max_y) / 2.0;
      Detection d;
      d.box = canonicalize(cx, cy, like.w, like.h, theta);
      d.score = draw_score();
      out.push_back(std::move(d));
    }
  }
  return out;
}

PerTileDetections stub_detector(const std::vector<RotatedBox>& gt, const TileGrid& grid,
                                const StubDetectorParams& params) {
  const AxisAlignedBounds region{-0.5, -0.5, static_cast<double>(grid.ortho_width) - 0.5,
                                 static_cast<double>(grid.ortho_height) - 0.5};
  PerTileDetections per_tile;
  for (const auto& tile : grid.tiles) per_tile[tile.tile_id];

  for (const auto& det : stub_detector(gt, params, region)) {
    bool placed = false;
    for (const auto& tile : grid.tiles) {
      Detection local = det;
      local.box = translate_box(det.box, -static_cast<double>(tile.origin_x),
                                -static_cast<double>(tile.origin_y));
      local.tile_id = tile.tile_id;
      if (tile.fully_contains_local(local.box)) {
        per_tile[tile.tile_id].push_back(std::move(local));
        placed = true;
      }
    }
    if (placed) continue;
    for (const auto& tile : grid.tiles) {
      if (contains(tile.footprint(), {det.box.cx, det.box.cy})) {
        Detection local = det;
        local.box = translate_box(det.box, -static_cast<double>(tile.origin_x),
                                  -static_cast<double>(tile.origin_y));
        local.tile_id = tile.tile_id;
        per_tile[tile.tile_id].push_back(std::move(local));
        break;
      }
    }
  }
  return per_tile;
}

}  // namespace solarmap
