#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "solarmap/geometry.hpp"
#include "solarmap/suppression.hpp"

namespace solarmap {

/// Affine pixel-to-world map in world-file layout:
///   X = a*px + b*py + c
///   Y = d*px + e*py + f
/// where (px, py) are pixel-centre coordinates, so (c, f) is the world
/// position of the centre of pixel (0, 0).
struct GeoTransform {
  double a = 1.0;
  double d = 0.0;
  double b = 0.0;
  double e = 1.0;
  double c = 0.0;
  double f = 0.0;

  double determinant() const noexcept { return a * e - b * d; }

  /// Throws Error(SingularTransform) when the linear part is not invertible.
  void validate() const;

  GeoTransform inverse() const;
};

/// Six numbers, one per line, in the order A, D, B, E, C, F.
GeoTransform parse_world_file(std::string_view text);

GeoTransform read_world_file(const std::string& path);

/// Same layout as parse_world_file, %.17g per line.
std::string format_world_file(const GeoTransform& gt);

Point pixel_to_geo(Point pixel, const GeoTransform& gt) noexcept;

Point geo_to_pixel(Point world, const GeoTransform& gt);

struct PanelFeature {
  std::string id;
  /// Closed ring (first == last), counter-clockwise in world coordinates.
  std::array<Point, 5> ring;
  double score = 0.0;
  double theta_deg = 0.0;
  /// Footprint area in squared world units (square metres for metric CRSs).
  double area_m2 = 0.0;
};

/// Ids are "panel-000001", "panel-000002", ... in input order.
std::vector<PanelFeature> project_panels(const std::vector<Detection>& dets,
                                         const GeoTransform& gt);

/// GeoJSON FeatureCollection with one Polygon per panel. Coordinates are
/// written as the shortest exact round-trip text, properties with 9
/// significant digits,
/// and keys in a fixed order, so identical input yields identical bytes.
std::string export_geojson(const std::vector<Detection>& dets, const GeoTransform& gt,
                           const std::string& crs_name);

std::string features_to_geojson(const std::vector<PanelFeature>& features,
                                const std::string& crs_name);

}  // namespace solarmap
