#pragma once

#include <cstddef>
#include <vector>

#include "solarmap/geometry.hpp"

namespace solarmap {

/// Aspect ratio expressed as a w:h pair, e.g. {1, 2} for 1:2.
struct AspectRatio {
  double w = 1.0;
  double h = 1.0;

  double value() const noexcept { return w / h; }
  friend bool operator==(const AspectRatio&, const AspectRatio&) = default;
};

struct AnchorConfig {
  std::vector<double> angles{-90, -60, -30, 0, 30, 60, 90};
  /// Each anchor has area scale^2 regardless of its aspect ratio.
  std::vector<double> scales{32, 64, 128, 256, 512};
  std::vector<AspectRatio> ratios{{1, 2}, {1, 1}, {2, 1}};
  double stride = 16.0;

  std::size_t anchors_per_location() const noexcept {
    return angles.size() * scales.size() * ratios.size();
  }

  /// Throws Error(InvalidConfig) on empty lists or non-positive values.
  void validate() const;
};

/// Anchors for a fmap_w x fmap_h feature map. Cells are visited row by row;
/// within a cell the order is angle, then scale, then ratio.
std::vector<RotatedBox> generate_anchors(const AnchorConfig& config, std::size_t fmap_w,
                                         std::size_t fmap_h);

/// Regression target of a ground-truth box relative to an anchor.
struct BoxDelta {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;
  double ttheta = 0.0;
};

inline constexpr double kDefaultMaxLogRatio = 4.0;

BoxDelta encode(const RotatedBox& anchor, const RotatedBox& gt);

struct DecodeResult {
  RotatedBox box;
  /// Set when tw or th was outside [-max_log_ratio, max_log_ratio].
  bool clamped = false;
};

DecodeResult decode(const RotatedBox& anchor, const BoxDelta& delta,
                    double max_log_ratio = kDefaultMaxLogRatio);

struct AnchorLabel {
  enum class Kind { Negative, Ignore, Positive };

  Kind kind = Kind::Negative;
  /// Meaningful only for Positive.
  std::size_t gt_index = 0;

  friend bool operator==(const AnchorLabel&, const AnchorLabel&) = default;
};

inline constexpr double kDefaultPositiveIou = 0.7;
inline constexpr double kDefaultNegativeIou = 0.3;

/// Threshold assignment plus the rule that every gt's best anchor (lowest
/// index on ties) is positive. Such a forced anchor that was not already
/// positive is attributed to the lowest-index gt that selected it.
std::vector<AnchorLabel> match_anchors(const std::vector<RotatedBox>& anchors,
                                       const std::vector<RotatedBox>& gts,
                                       double pos_iou = kDefaultPositiveIou,
                                       double neg_iou = kDefaultNegativeIou);

}  // namespace solarmap
