#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "solarmap/geometry.hpp"

namespace solarmap {

struct Detection {
  RotatedBox box;
  double score = 1.0;
  /// Source tile; empty when the detection is in the global frame.
  std::string tile_id;
  int class_id = 0;
};

/// Greedy rotated NMS. Returns indices into `dets` in descending score order
/// (ties by ascending index); a candidate is dropped when its IoU with an
/// already kept detection is >= iou_thresh.
std::vector<std::size_t> rotated_nms(const std::vector<Detection>& dets, double iou_thresh);

/// Order-preserving filter keeping detections with score >= min_score.
std::vector<Detection> score_filter(const std::vector<Detection>& dets, double min_score);

/// Indices of `dets` sorted by score descending, ties by ascending index.
std::vector<std::size_t> score_order(const std::vector<Detection>& dets);

}  // namespace solarmap
