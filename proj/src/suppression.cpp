#include "solarmap/suppression.hpp"

#include <algorithm>
#include <numeric>

#include "solarmap/error.hpp"

namespace solarmap {

std::vector<std::size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

std::vector<std::size_t> rotated_nms(const std::vector<Detection>& dets, double iou_thresh) {
  if (!(iou_thresh >= 0.0 && iou_thresh <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "NMS IoU threshold must lie in [0, 1]");
  }
  const auto order = score_order(dets);

  std::vector<AxisAlignedBounds> boxes_bounds;
  boxes_bounds.reserve(dets.size());
  for (const auto& d : dets) boxes_bounds.push_back(bounds(d.box));

  std::vector<bool> suppressed(dets.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const std::size_t i = order[rank];
    if (suppressed[i]) continue;
    kept.push_back(i);
    const auto& bi = boxes_bounds[i];
    for (std::size_t later = rank + 1; later < order.size(); ++later) {
      const std::size_t j = order[later];
      if (suppressed[j]) continue;
      const auto& bj = boxes_bounds[j];
      const bool disjoint = bi.max_x <= bj.min_x || bj.max_x <= bi.min_x ||
                            bi.max_y <= bj.min_y || bj.max_y <= bi.min_y;
      const double iou = disjoint ? 0.0 : rotated_iou(dets[i].box, dets[j].box);
      if (iou >= iou_thresh) suppressed[j] = true;
    }
  }
  return kept;
}

std::vector<Detection> score_filter(const std::vector<Detection>& dets, double min_score) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [&](const Detection& d) { return d.score >= min_score; });
  return out;
}

}  // namespace solarmap
