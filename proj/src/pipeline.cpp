#include "solarmap/pipeline.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

AspectRatio parse_ratio(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
      AspectRatio r;
      const char* begin = s.data();
      const auto a = std::from_chars(begin, begin + colon, r.w);
      const auto b = std::from_chars(begin + colon + 1, begin + s.size(), r.h);
      if (a.ec == std::errc{} && a.ptr == begin + colon && b.ec == std::errc{} &&
          b.ptr == begin + s.size()) {
        return r;
      }
    }
  } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::InvalidConfig, "anchor ratio must look like \"1:2\" or [1, 2]");
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidConfig, "config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  const auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidConfig, why); };
  if (tile_size <= 0) throw bad("tile_size must be positive");
  if (overlap < 0 || overlap >= tile_size) throw bad("overlap must satisfy 0 <= overlap < tile_size");
  for (auto [name, v] : {std::pair{"nms_iou", nms_iou}, {"dedup_iou", dedup_iou}, {"score_min", score_min}}) {
    if (!(v >= 0.0 && v <= 1.0)) throw bad(std::string(name) + " must lie in [0, 1]");
  }
  anchors.validate();
  if (eval.iou_thresholds.empty()) throw bad("eval_iou_thresholds must be non-empty");
  for (double t : eval.iou_thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw bad("eval IoU thresholds must lie in (0, 1]");
  }
  if (eval.max_dets == 0) throw bad("max_dets must be positive");
}

PipelineConfig parse_pipeline_config(std::string_view text, PipelineConfig base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config: expected a JSON object");

  PipelineConfig cfg = std::move(base);
  for (const auto& [key, v] : doc.items()) {
    if (key == "tile_size") {
      cfg.tile_size = get_as<std::int64_t>(v, key);
    } else if (key == "overlap") {
      cfg.overlap = get_as<std::int64_t>(v, key);
    } else if (key == "nms_iou") {
      cfg.nms_iou = get_as<double>(v, key);
    } else if (key == "dedup_iou") {
      cfg.dedup_iou = get_as<double>(v, key);
    } else if (key == "score_min") {
      cfg.score_min = get_as<double>(v, key);
    } else if (key == "anchor_angles") {
      cfg.anchors.angles = get_as<std::vector<double>>(v, key);
    } else if (key == "anchor_scales") {
      cfg.anchors.scales = get_as<std::vector<double>>(v, key);
    } else if (key == "anchor_ratios") {
      if (!v.is_array()) throw Error(ErrorCode::InvalidConfig, "anchor_ratios must be an array");
      cfg.anchors.ratios.clear();
      for (const auto& r : v) cfg.anchors.ratios.push_back(parse_ratio(r));
    } else if (key == "anchor_stride") {
      cfg.anchors.stride = get_as<double>(v, key);
    } else if (key == "eval_iou_thresholds") {
      cfg.eval.iou_thresholds = get_as<std::vector<double>>(v, key);
    } else if (key == "max_dets") {
      cfg.eval.max_dets = get_as<std::size_t>(v, key);
    } else if (key == "group_by_tile") {
      cfg.eval.group_by_tile = get_as<bool>(v, key);
    } else if (key == "seed") {
      cfg.seed = get_as<std::uint64_t>(v, key);
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string format_pipeline_config(const PipelineConfig& config) {
  ordered_json doc;
  doc["tile_size"] = config.tile_size;
  doc["overlap"] = config.overlap;
  doc["nms_iou"] = config.nms_iou;
  doc["dedup_iou"] = config.dedup_iou;
  doc["score_min"] = config.score_min;
  doc["anchor_angles"] = config.anchors.angles;
  doc["anchor_scales"] = config.anchors.scales;
  auto ratios = ordered_json::array();
  for (const auto& r : config.anchors.ratios) ratios.push_back({r.w, r.h});
  doc["anchor_ratios"] = std::move(ratios);
  doc["anchor_stride"] = config.anchors.stride;
  doc["eval_iou_thresholds"] = config.eval.iou_thresholds;
  doc["max_dets"] = config.eval.max_dets;
  doc["group_by_tile"] = config.eval.group_by_tile;
  doc["seed"] = config.seed;
  return doc.dump(2) + "\n";
}

std::vector<Detection> assemble_panel_map(const PerTileDetections& per_tile,
                                          const TileGrid& grid, const PipelineConfig& config) {
  PerTileDetections filtered;
  for (const auto& [id, dets] : per_tile) filtered[id] = score_filter(dets, config.score_min);
  const auto stitched = stitch(filtered, grid, config.dedup_iou);
  std::vector<Detection> out;
  for (std::size_t i : rotated_nms(stitched, config.nms_iou)) out.push_back(stitched[i]);
  return out;
}

}  // namespace solarmap
