#include "solarmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

constexpr std::size_t kRecallSamples = 101;

std::optional<double> value_at(const std::vector<ThresholdMetrics>& rows, double threshold,
                               double ThresholdMetrics::*field) {
  for (const auto& r : rows) {
    if (std::abs(r.iou_threshold - threshold) < 1e-9) return r.*field;
  }
  return std::nullopt;
}

std::string percent_cell(std::optional<double> v) {
  char buf[32];
  if (v) {
    std::snprintf(buf, sizeof buf, "%7.1f%%", *v * 100.0);
  } else {
    std::snprintf(buf, sizeof buf, "%8s", "-");
  }
  return buf;
}

}  // namespace

MatchResult match_at_threshold(const std::vector<Detection>& preds,
                               const std::vector<Detection>& gts, double iou_threshold,
                               bool group_by_tile) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "IoU threshold must lie in (0, 1]");
  }
  const auto key = [&](const Detection& d) -> std::string {
    return group_by_tile ? d.tile_id : std::string{};
  };

  std::map<std::string, std::vector<std::size_t>> gts_by_image;
  for (std::size_t g = 0; g < gts.size(); ++g) gts_by_image[key(gts[g])].push_back(g);

  MatchResult result;
  result.iou_threshold = iou_threshold;
  result.num_gt = gts.size();
  result.preds.reserve(preds.size());

  std::vector<bool> gt_taken(gts.size(), false);
  std::map<std::string, std::size_t> rank_counter;
  for (std::size_t p : score_order(preds)) {
    const std::string image = key(preds[p]);
    PredictionMatch m;
    m.pred_index = p;
    m.score = preds[p].score;
    m.rank_in_image = rank_counter[image]++;

    double best = 0.0;
    std::optional<std::size_t> best_gt;
    if (const auto it = gts_by_image.find(image); it != gts_by_image.end()) {
      for (std::size_t g : it->second) {
        if (gt_taken[g]) continue;
        const double iou = rotated_iou(preds[p].box, gts[g].box);
        if (iou > best) best = iou, best_gt = g;
      }
    }
    if (best_gt && best >= iou_threshold) {
      gt_taken[*best_gt] = true;
      m.matched = true;
      m.gt_index = best_gt;
      m.iou = best;
      ++result.true_positives;
    } else {
      ++result.false_positives;
    }
    result.preds.push_back(m);
  }
  return result;
}

MetricValue average_precision(const MatchResult& match) {
  if (match.num_gt == 0) return {0.0, false};
  const std::size_t n = match.preds.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (match.preds[i].matched) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(match.num_gt);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double sum = 0.0;
  for (std::size_t k = 0; k < kRecallSamples; ++k) {
    const double level = static_cast<double>(k) / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return {sum / static_cast<double>(kRecallSamples), true};
}

MetricValue average_recall(const MatchResult& match, std::size_t max_dets) {
  if (max_dets == 0) throw Error(ErrorCode::InvalidConfig, "max_dets must be positive");
  if (match.num_gt == 0) return {0.0, false};
  const auto recalled = std::count_if(match.preds.begin(), match.preds.end(), [&](const auto& m) {
    return m.matched && m.rank_in_image < max_dets;
  });
  return {static_cast<double>(recalled) / static_cast<double>(match.num_gt), true};
}

std::vector<double> default_iou_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 10; ++k) t.push_back(static_cast<double>(50 + 5 * k) / 100.0);
  return t;
}

MetricsReport evaluate(const std::vector<Detection>& preds, const std::vector<Detection>& gts,
                       const EvalConfig& config) {
  if (config.iou_thresholds.empty()) {
    throw Error(ErrorCode::InvalidConfig, "at least one IoU threshold is required");
  }
  MetricsReport report;
  report.num_predictions = preds.size();
  report.num_ground_truth = gts.size();
  report.defined = !gts.empty();

  // Thresholds are independent; evaluated in the configured order.
  for (double t : config.iou_thresholds) {
    const MatchResult match = match_at_threshold(preds, gts, t, config.group_by_tile);
    ThresholdMetrics row;
    row.iou_threshold = t;
    row.ap = average_precision(match).value;
    row.ar = average_recall(match, config.max_dets).value;
    row.true_positives = match.true_positives;
    row.false_positives = match.false_positives;
    row.num_gt = match.num_gt;
    report.per_threshold.push_back(row);
  }
  double ap_sum = 0.0;
  double ar_sum = 0.0;
  for (const auto& r : report.per_threshold) ap_sum += r.ap, ar_sum += r.ar;
  const auto count = static_cast<double>(report.per_threshold.size());
  report.ap = ap_sum / count;
  report.ar = ar_sum / count;
  report.ap50 = value_at(report.per_threshold, 0.50, &ThresholdMetrics::ap);
  report.ar50 = value_at(report.per_threshold, 0.50, &ThresholdMetrics::ar);
  report.ap75 = value_at(report.per_threshold, 0.75, &ThresholdMetrics::ap);
  report.ar75 = value_at(report.per_threshold, 0.75, &ThresholdMetrics::ar);
  return report;
}

std::string render_metrics_table(const MetricsReport& report, const std::string& label) {
  const std::size_t width = std::max<std::size_t>(label.size(), 8);
  std::string header(width, ' ');
  std::string row = label + std::string(width - label.size(), ' ');
  for (const char* name : {"AP", "AR", "AP75", "AR75"}) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%8s", name);
    header += buf;
  }
  row += percent_cell(report.ap) + percent_cell(report.ar) + percent_cell(report.ap75) +
         percent_cell(report.ar75);
  std::string out = header + "\n" + row + "\n";
  if (!report.defined) out += "(no ground truth: metrics undefined, reported as 0)\n";
  return out;
}

std::string metrics_to_json(const MetricsReport& report) {
  using nlohmann::ordered_json;
  const auto opt = [](std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(); };
  ordered_json doc;
  doc["ap"] = report.ap;
  doc["ar"] = report.ar;
  doc["ap50"] = opt(report.ap50);
  doc["ar50"] = opt(report.ar50);
  doc["ap75"] = opt(report.ap75);
  doc["ar75"] = opt(report.ar75);
  doc["defined"] = report.defined;
  doc["num_predictions"] = report.num_predictions;
  doc["num_ground_truth"] = report.num_ground_truth;
  auto rows = ordered_json::array();
  for (const auto& r : report.per_threshold) {
    ordered_json row;
    row["iou_threshold"] = r.iou_threshold;
    row["ap"] = r.ap;
    row["ar"] = r.ar;
    row["true_positives"] = r.true_positives;
    row["false_positives"] = r.false_positives;
    row["num_gt"] = r.num_gt;
    rows.push_back(std::move(row));
  }
  doc["per_threshold"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace solarmap
