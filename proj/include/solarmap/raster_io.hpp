#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "solarmap/suppression.hpp"
#include "solarmap/tiling.hpp"

namespace solarmap {

/// 8-bit RGB, row-major, interleaved.
struct Raster {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::uint8_t> data;

  static constexpr int kChannels = 3;

  Raster() = default;
  Raster(std::int64_t w, std::int64_t h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  std::uint8_t* pixel(std::int64_t x, std::int64_t y) {
    return data.data() + static_cast<std::size_t>((y * width + x) * kChannels);
  }
  const std::uint8_t* pixel(std::int64_t x, std::int64_t y) const {
    return data.data() + static_cast<std::size_t>((y * width + x) * kChannels);
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Container is chosen from the file contents (PNG or binary PPM). PNG
/// palette and grayscale inputs are expanded to RGB and alpha is dropped;
/// 16-bit samples raise Error(UnsupportedDepth).
Raster read_raster(const std::string& path);

/// Reads only the tile window. PNG decodes row by row and PPM seeks, so
/// memory stays bounded by one row plus the window.
Raster read_raster_window(const std::string& path, const TileSpec& tile);

struct RasterSize {
  std::int64_t width = 0;
  std::int64_t height = 0;
};

RasterSize probe_raster(const std::string& path);

/// Container from the extension: .png, or .ppm / .pnm.
void write_raster(const Raster& raster, const std::string& path);

Raster crop_tile(const Raster& raster, const TileSpec& tile);

/// Copies `tile` into `canvas` at the tile's origin.
void paste_tile(Raster& canvas, const Raster& tile, const TileSpec& spec);

struct OverlayStyle {
  double stroke_px = 2.0;
  /// Scores are coloured on a linear ramp from low_color (0) to high_color (1).
  std::array<std::uint8_t, 3> low_color{230, 40, 40};
  std::array<std::uint8_t, 3> high_color{40, 230, 60};
};

std::array<std::uint8_t, 3> score_color(double score, const OverlayStyle& style);

/// Outlines each detection's quad on a copy of `raster`.
Raster render_overlay(const Raster& raster, const std::vector<Detection>& dets,
                      const OverlayStyle& style = {});

/// Sets every pixel whose centre lies inside `box`.
void fill_box(Raster& raster, const RotatedBox& box, std::array<std::uint8_t, 3> color);

}  // namespace solarmap
