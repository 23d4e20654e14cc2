#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "solarmap/geometry.hpp"
#include "solarmap/raster_io.hpp"
#include "solarmap/suppression.hpp"
#include "solarmap/tiling.hpp"

namespace solarmap {

/// A rows x cols grid of identical panels centred on the canvas, rotated as a
/// whole by `orientation` degrees, then perturbed per panel by uniform jitter.
struct FarmSpec {
  std::size_t rows = 6;
  std::size_t cols = 10;
  double panel_w = 24.0;
  double panel_h = 48.0;
  double pitch_x = 80.0;
  double pitch_y = 80.0;
  double orientation = 0.0;
  double jitter_px = 0.0;
  double jitter_deg = 0.0;
  std::uint64_t seed = 0;
  std::int64_t canvas_w = 2048;
  std::int64_t canvas_h = 2048;

  /// Throws Error(InvalidSpec).
  void validate() const;
};

inline constexpr std::array<std::uint8_t, 3> kBackgroundColor{196, 188, 164};
inline constexpr std::array<std::uint8_t, 3> kPanelColor{28, 38, 72};

/// Ground truth only, row-major over the panel grid. Throws
/// Error(InvalidSpec) naming the first panel that leaves the canvas.
std::vector<RotatedBox> generate_ground_truth(const FarmSpec& spec);

struct Farm {
  Raster raster;
  std::vector<RotatedBox> ground_truth;
};

Farm generate_farm(const FarmSpec& spec);

struct StubDetectorParams {
  double noise_px = 0.0;
  double noise_deg = 0.0;
  /// Scores are drawn uniformly from [score_floor, 1]; 1 gives exact scores.
  double score_floor = 1.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Stand-in for the network, in the global frame. Exactly
/// round(fn_rate * n) panels are dropped and round(fp_rate * n) random boxes
/// are added inside `region` (default: the bounds of the ground truth).
/// The random stream does not depend on the noise magnitudes, so two calls
/// that differ only in noise_px perturb along the same directions.
std::vector<Detection> stub_detector(const std::vector<RotatedBox>& gt,
                                     const StubDetectorParams& params,
                                     std::optional<AxisAlignedBounds> region = std::nullopt);

/// Same detections, handed out per tile in tile-local coordinates: a copy goes
/// to every tile that fully contains it, or to the tile holding its centre
/// when no tile does.
PerTileDetections stub_detector(const std::vector<RotatedBox>& gt, const TileGrid& grid,
                                const StubDetectorParams& params);

}  // namespace solarmap
