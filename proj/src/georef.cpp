#include "solarmap/georef.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\f\v");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // folds -0 into 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Shortest text that parses back to the same double; negative zero prints as 0.
std::string format_coordinate(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void GeoTransform::validate() const {
  const double det = determinant();
  if (!std::isfinite(det) || std::abs(det) <= 0.0 || !std::isfinite(c) || !std::isfinite(f)) {
    throw Error(ErrorCode::SingularTransform, "geotransform is not invertible");
  }
}

GeoTransform GeoTransform::inverse() const {
  validate();
  const double det = determinant();
  GeoTransform inv;
  inv.a = e / det;
  inv.b = -b / det;
  inv.d = -d / det;
  inv.e = a / det;
  inv.c = -(inv.a * c + inv.b * f);
  inv.f = -(inv.d * c + inv.e * f);
  return inv;
}

GeoTransform parse_world_file(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.size() != 6) {
    throw Error(ErrorCode::WorldFileLineCount,
                "world file must contain 6 numeric lines, found " + std::to_string(lines.size()));
  }
  std::array<double, 6> v{};
  for (std::size_t i = 0; i < 6; ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.front() == '+') line.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v[i]);
    if (ec != std::errc{} || ptr != line.data() + line.size() || !std::isfinite(v[i])) {
      throw Error(ErrorCode::WorldFileNonNumeric,
                  "world file line " + std::to_string(i + 1) + " is not a number: '" +
                      std::string(lines[i]) + "'");
    }
  }
  GeoTransform gt{v[0], v[1], v[2], v[3], v[4], v[5]};
  gt.validate();
  return gt;
}

GeoTransform read_world_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open world file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_world_file(ss.str());
}

std::string format_world_file(const GeoTransform& gt) {
  std::string out;
  char buf[40];
  for (double v : {gt.a, gt.d, gt.b, gt.e, gt.c, gt.f}) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

Point pixel_to_geo(Point pixel, const GeoTransform& gt) noexcept {
  return {gt.a * pixel.x + gt.b * pixel.y + gt.c, gt.d * pixel.x + gt.e * pixel.y + gt.f};
}

Point geo_to_pixel(Point world, const GeoTransform& gt) {
  return pixel_to_geo(world, gt.inverse());
}

std::vector<PanelFeature> project_panels(const std::vector<Detection>& dets,
                                         const GeoTransform& gt) {
  gt.validate();
  std::vector<PanelFeature> features;
  features.reserve(dets.size());
  char id[32];
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const Quad q = to_vertices(dets[i].box);
    std::array<Point, 4> corners;
    for (std::size_t k = 0; k < 4; ++k) corners[k] = pixel_to_geo(q.v[k], gt);
    // A negative determinant (the usual north-up case) mirrors the ring.
    if (signed_area(corners) < 0.0) std::swap(corners[1], corners[3]);

    PanelFeature feat;
    std::snprintf(id, sizeof id, "panel-%06zu", i + 1);
    feat.id = id;
    for (std::size_t k = 0; k < 4; ++k) feat.ring[k] = corners[k];
    feat.ring[4] = corners[0];
    feat.score = dets[i].score;
    feat.theta_deg = dets[i].box.theta;
    feat.area_m2 = signed_area(corners);
    features.push_back(std::move(feat));
  }
  return features;
}

std::string features_to_geojson(const std::vector<PanelFeature>& features,
                                const std::string& crs_name) {
  std::string out = "{\"type\":\"FeatureCollection\",\"crs\":" + nlohmann::json(crs_name).dump() +
                    ",\"features\":[";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& feat = features[i];
    out += i == 0 ? "\n" : ",\n";
    out += "{\"type\":\"Feature\",\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[[";
    for (std::size_t k = 0; k < feat.ring.size(); ++k) {
      if (k) out += ',';
      out += '[' + format_coordinate(feat.ring[k].x) + ',' + format_coordinate(feat.ring[k].y) + ']';
    }
    out += "]]},\"properties\":{\"id\":" + nlohmann::json(feat.id).dump() +
           ",\"score\":" + format_number(feat.score) +
           ",\"theta_deg\":" + format_number(feat.theta_deg) +
           ",\"area_m2\":" + format_number(feat.area_m2) + "}}";
  }
  out += features.empty() ? "]}\n" : "\n]}\n";
  return out;
}

std::string export_geojson(const std::vector<Detection>& dets, const GeoTransform& gt,
                           const std::string& crs_name) {
  return features_to_geojson(project_panels(dets, gt), crs_name);
}

}  // namespace solarmap
