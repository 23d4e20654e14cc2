#include "solarmap/anchors.hpp"

#include <algorithm>
#include <cmath>

#include "solarmap/error.hpp"

namespace solarmap {

void AnchorConfig::validate() const {
  if (angles.empty() || scales.empty() || ratios.empty()) {
    throw Error(ErrorCode::InvalidConfig, "anchor config lists must be non-empty");
  }
  if (!(stride > 0.0) || !std::isfinite(stride)) {
    throw Error(ErrorCode::InvalidConfig, "anchor stride must be positive");
  }
  for (double a : angles) {
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidConfig, "anchor angle must be finite");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::InvalidConfig, "anchor scale must be positive");
    }
  }
  for (const auto& r : ratios) {
    if (!(r.w > 0.0) || !(r.h > 0.0) || !std::isfinite(r.w) || !std::isfinite(r.h)) {
      throw Error(ErrorCode::InvalidConfig, "anchor ratio terms must be positive");
    }
  }
}

std::vector<RotatedBox> generate_anchors(const AnchorConfig& config, std::size_t fmap_w,
                                         std::size_t fmap_h) {
  config.validate();
  if (fmap_w == 0 || fmap_h == 0) {
    throw Error(ErrorCode::InvalidConfig, "feature map dimensions must be positive");
  }

  // The per-cell template is shared; only the centre moves.
  std::vector<RotatedBox> cell;
  cell.reserve(config.anchors_per_location());
  for (double angle : config.angles) {
    for (double scale : config.scales) {
      for (const auto& ratio : config.ratios) {
        const double root = std::sqrt(ratio.value());
        cell.push_back(canonicalize(0.0, 0.0, scale * root, scale / root, angle));
      }
    }
  }

  std::vector<RotatedBox> anchors;
  anchors.reserve(fmap_w * fmap_h * cell.size());
  for (std::size_t j = 0; j < fmap_h; ++j) {
    const double cy = (static_cast<double>(j) + 0.5) * config.stride;
    for (std::size_t i = 0; i < fmap_w; ++i) {
      const double cx = (static_cast<double>(i) + 0.5) * config.stride;
      for (const auto& a : cell) anchors.push_back(translate_box(a, cx, cy));
    }
  }
  return anchors;
}

BoxDelta encode(const RotatedBox& anchor, const RotatedBox& gt) {
  return BoxDelta{
      (gt.cx - anchor.cx) / anchor.w,
      (gt.cy - anchor.cy) / anchor.h,
      std::log(gt.w / anchor.w),
      std::log(gt.h / anchor.h),
      wrap_half_turn(gt.theta - anchor.theta) / 180.0,
  };
}

DecodeResult decode(const RotatedBox& anchor, const BoxDelta& delta, double max_log_ratio) {
  const double tw = std::clamp(delta.tw, -max_log_ratio, max_log_ratio);
  const double th = std::clamp(delta.th, -max_log_ratio, max_log_ratio);
  DecodeResult result;
  result.clamped = tw != delta.tw || th != delta.th;
  result.box = canonicalize(anchor.cx + delta.tx * anchor.w, anchor.cy + delta.ty * anchor.h,
                            anchor.w * std::exp(tw), anchor.h * std::exp(th),
                            anchor.theta + delta.ttheta * 180.0);
  return result;
}

std::vector<AnchorLabel> match_anchors(const std::vector<RotatedBox>& anchors,
                                       const std::vector<RotatedBox>& gts, double pos_iou,
                                       double neg_iou) {
  if (anchors.empty()) throw Error(ErrorCode::EmptyAnchors, "anchor list is empty");
  if (!(0.0 <= neg_iou && neg_iou <= pos_iou && pos_iou <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "matching requires 0 <= neg_iou <= pos_iou <= 1");
  }

  std::vector<AnchorLabel> labels(anchors.size());
  if (gts.empty()) return labels;

  std::vector<double> best_for_gt(gts.size(), -1.0);
  std::vector<std::size_t> best_anchor(gts.size(), 0);

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = rotated_iou(anchors[a], gts[g]);
      if (iou > best) best = iou, arg = g;
      if (iou > best_for_gt[g]) best_for_gt[g] = iou, best_anchor[g] = a;
    }
    if (best >= pos_iou) {
      labels[a] = {AnchorLabel::Kind::Positive, arg};
    } else if (best < neg_iou) {
      labels[a] = {AnchorLabel::Kind::Negative, 0};
    } else {
      labels[a] = {AnchorLabel::Kind::Ignore, 0};
    }
  }

  for (std::size_t g = 0; g < gts.size(); ++g) {
    auto& label = labels[best_anchor[g]];
    if (label.kind != AnchorLabel::Kind::Positive) label = {AnchorLabel::Kind::Positive, g};
  }
  return labels;
}

}  // namespace solarmap
