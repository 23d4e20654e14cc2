#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "solarmap/suppression.hpp"

namespace solarmap {

struct PredictionMatch {
  std::size_t pred_index = 0;
  double score = 0.0;
  bool matched = false;
  std::optional<std::size_t> gt_index;
  double iou = 0.0;
  /// Position among predictions of the same image, by descending score.
  std::size_t rank_in_image = 0;
};

/// Greedy matching result at one IoU threshold. `preds` is in processing
/// order: descending score, ties by ascending input index.
struct MatchResult {
  double iou_threshold = 0.5;
  std::vector<PredictionMatch> preds;
  std::size_t num_gt = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;

  std::size_t false_negatives() const noexcept { return num_gt - true_positives; }
};

/// When group_by_tile is set, predictions only match ground truth carrying
/// the same tile_id (each tile is a separate image); otherwise every box is
/// treated as belonging to one image.
MatchResult match_at_threshold(const std::vector<Detection>& preds,
                               const std::vector<Detection>& gts, double iou_threshold,
                               bool group_by_tile = false);

struct MetricValue {
  double value = 0.0;
  /// False when the metric has no ground truth to measure against.
  bool defined = true;
};

/// 101-point interpolated AP over recall levels 0.00, 0.01, ..., 1.00.
MetricValue average_precision(const MatchResult& match);

inline constexpr std::size_t kDefaultMaxDetections = 300;

/// Recall using at most max_dets top-scoring predictions per image.
MetricValue average_recall(const MatchResult& match,
                           std::size_t max_dets = kDefaultMaxDetections);

/// 0.50, 0.55, ..., 0.95.
std::vector<double> default_iou_thresholds();

struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  std::size_t max_dets = kDefaultMaxDetections;
  bool group_by_tile = false;
};

struct ThresholdMetrics {
  double iou_threshold = 0.0;
  double ap = 0.0;
  double ar = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t num_gt = 0;
};

struct MetricsReport {
  double ap = 0.0;
  double ar = 0.0;
  std::optional<double> ap50;
  std::optional<double> ar50;
  std::optional<double> ap75;
  std::optional<double> ar75;
  bool defined = true;
  std::size_t num_predictions = 0;
  std::size_t num_ground_truth = 0;
  std::vector<ThresholdMetrics> per_threshold;
};

MetricsReport evaluate(const std::vector<Detection>& preds, const std::vector<Detection>& gts,
                       const EvalConfig& config = {});

/// Aligned plain-text table with the AP, AR, AP75, AR75 columns, as
/// percentages with one decimal.
std::string render_metrics_table(const MetricsReport& report, const std::string& label = "");

/// Machine-readable report (pretty-printed JSON).
std::string metrics_to_json(const MetricsReport& report);

}  // namespace solarmap
