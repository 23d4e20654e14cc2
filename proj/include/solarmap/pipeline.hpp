#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "solarmap/anchors.hpp"
#include "solarmap/evaluation.hpp"
#include "solarmap/tiling.hpp"

namespace solarmap {

struct PipelineConfig {
  std::int64_t tile_size = kDefaultTileSize;
  std::int64_t overlap = kDefaultOverlap;
  double nms_iou = 0.3;
  double dedup_iou = 0.5;
  double score_min = 0.5;
  AnchorConfig anchors;
  EvalConfig eval;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig).
  void validate() const;
};

/// Applies the flat-key JSON object `text` on top of `base`. Recognised keys:
/// tile_size, overlap, nms_iou, dedup_iou, score_min, anchor_angles,
/// anchor_scales, anchor_ratios (e.g. ["1:2", "1:1"] or [[1, 2], [1, 1]]),
/// anchor_stride, eval_iou_thresholds, max_dets, group_by_tile, seed.
/// Unknown keys are rejected.
PipelineConfig parse_pipeline_config(std::string_view text, PipelineConfig base = {});

std::string format_pipeline_config(const PipelineConfig& config);

/// Score filter, then cross-tile stitching at dedup_iou, then a global
/// rotated NMS at nms_iou. Output is in descending score order.
std::vector<Detection> assemble_panel_map(const PerTileDetections& per_tile,
                                          const TileGrid& grid, const PipelineConfig& config);

}  // namespace solarmap
