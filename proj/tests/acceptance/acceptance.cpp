// Acceptance suite: one PASS/FAIL line per criterion; exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "solarmap/anchors.hpp"
#include "solarmap/evaluation.hpp"
#include "solarmap/formats.hpp"
#include "solarmap/georef.hpp"
#include "solarmap/pipeline.hpp"
#include "solarmap/suppression.hpp"
#include "solarmap/synth.hpp"
#include "solarmap/tiling.hpp"

using namespace solarmap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

/// Relative field error; theta compared modulo 180.
double box_error(const RotatedBox& got, const RotatedBox& want) {
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  double d = std::fmod(std::abs(got.theta - want.theta), 180.0);
  d = std::min(d, 180.0 - d);
  return std::max({rel(got.cx, want.cx), rel(got.cy, want.cy), rel(got.w, want.w), rel(got.h, want.h),
                   d / std::max(1.0, std::abs(want.theta))});
}

RotatedBox random_canonical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-1e4, 1e4), side(0.5, 200.0), aspect(1.01, 5.0),
      angle(-89.999, 90.0);
  const double w = side(rng);
  return RotatedBox{pos(rng), pos(rng), w, w * aspect(rng), angle(rng)};
}

// --- criteria --------------------------------------------------------------

Verdict geometry_round_trip() {
  Verdict v;
  std::mt19937_64 rng(1001);
  const auto start = Clock::now();
  double worst = 0.0, worst_side = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const RotatedBox b = random_canonical(rng);
    const Quad q = to_vertices(b);
    worst = std::max(worst, box_error(from_vertices(q), b));
    const auto len = [](Point p, Point r) { return std::hypot(p.x - r.x, p.y - r.y); };
    const double diag = std::hypot(b.w, b.h);
    worst_side = std::max({worst_side, std::abs(len(q.v[0], q.v[1]) - b.w) / b.w,
                           std::abs(len(q.v[2], q.v[3]) - b.w) / b.w, std::abs(len(q.v[1], q.v[2]) - b.h) / b.h,
                           std::abs(len(q.v[3], q.v[0]) - b.h) / b.h,
                           std::abs(len(q.v[0], q.v[2]) - diag) / diag,
                           std::abs(len(q.v[1], q.v[3]) - diag) / diag});
  }
  const double elapsed = seconds_since(start);
  v.require(worst <= 1e-6, "round-trip error " + fmt("%.3g", worst));
  v.require(worst_side <= 1e-6, "side/diagonal error " + fmt("%.3g", worst_side));
  v.require(elapsed < 1.0, "runtime " + fmt("%.2f s", elapsed));
  v.detail = v.pass ? "10000 boxes, max rel err " + fmt("%.2g", worst) + ", " + fmt("%.3f s", elapsed) : v.detail;
  return v;
}

Verdict rotated_iou_oracle() {
  Verdict v;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> side(2.0, 60.0), aspect(1.0, 4.0), angle(-89.999, 90.0), unit(-1, 1);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double wa = side(rng), wb = side(rng);
    const RotatedBox a{0.0, 0.0, wa, wa * aspect(rng), angle(rng)};
    RotatedBox b{0.0, 0.0, wb, wb * aspect(rng), angle(rng)};
    // Centre offsets up to the sum of half-diagonals: overlapping, touching
    // and disjoint pairs all occur.
    const double reach = (std::hypot(a.w, a.h) + std::hypot(b.w, b.h)) / 2.0;
    b.cx = unit(rng) * reach;
    b.cy = unit(rng) * reach;
    worst = std::max(worst, std::abs(rotated_iou(a, b) - oracle::raster_iou(a, b, 2000)));
  }
  const double offset = rotated_iou({0, 0, 2, 2, 0}, {1, 0, 2, 2, 0});
  const double diamond = rotated_iou({0, 0, 2, 2, 0}, {0, 0, 2, 2, 45});
  const double elapsed = seconds_since(start);
  v.require(worst <= 2e-3, "max |iou - raster| " + fmt("%.3g", worst));
  v.require(std::abs(offset - 1.0 / 3.0) <= 1e-3, "offset squares " + fmt("%.6f", offset));
  v.require(std::abs(diamond - 0.70711) <= 1e-3, "45-degree square " + fmt("%.6f", diamond));
  v.require(elapsed < 60.0, "runtime " + fmt("%.1f s", elapsed));
  if (v.pass) {
    v.detail = "1000 pairs, max dev " + fmt("%.2g", worst) + ", closed forms " + fmt("%.6f", offset) + " / " +
               fmt("%.6f", diamond) + ", " + fmt("%.2f s", elapsed);
  }
  return v;
}

Verdict anchor_counts() {
  Verdict v;
  const AnchorConfig cfg;
  v.require(cfg.anchors_per_location() == 105, "anchors per location " + std::to_string(cfg.anchors_per_location()));
  for (auto [w, h] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {4, 4}, {13, 7}, {32, 32}}) {
    const auto n = generate_anchors(cfg, w, h).size();
    v.require(n == w * h * 105, "total anchors " + std::to_string(n));
  }
  const auto anchors = generate_anchors(cfg, 8, 8);
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> pick(0, anchors.size() - 1);
  std::uniform_real_distribution<double> log_ratio(-2.0, 2.0), shift(-1.0, 1.0), turn(-89.0, 89.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const RotatedBox& a = anchors[pick(rng)];
    const RotatedBox g = canonicalize(a.cx + shift(rng) * a.w, a.cy + shift(rng) * a.h, a.w * std::exp(log_ratio(rng)),
                                      a.h * std::exp(log_ratio(rng)), a.theta + turn(rng));
    const DecodeResult r = decode(a, encode(a, g));
    v.require(!r.clamped, "unexpected clamp");
    // A near-square box may come back with w and h swapped and theta
    // rotated a quarter turn; that is the same rectangle.
    double err = box_error(r.box, g);
    if (std::abs(g.w - g.h) <= 1e-6 * g.h) err = std::min(err, box_error(r.box, {g.cx, g.cy, g.h, g.w, g.theta + 90}));
    worst = std::max(worst, err);
  }
  v.require(worst <= 1e-6, "encode/decode error " + fmt("%.3g", worst));
  if (v.pass) v.detail = "105 per location, totals exact, 10000 round trips max err " + fmt("%.2g", worst);
  return v;
}

Verdict nms_equivalence() {
  Verdict v;
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<int> count(0, 50);
  std::uniform_real_distribution<double> score(0.0, 1.0), thresh(0.05, 0.95), jitter(-4.0, 4.0), turn(-15, 15);
  std::size_t suppressed = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = count(rng);
    std::vector<Detection> dets;
    for (int i = 0; i < n; ++i) {
      // Half the boxes are perturbed copies of earlier ones, so suppression happens.
      RotatedBox b = (i > 0 && i % 2 == 1) ? dets[static_cast<std::size_t>(i) / 2].box : oracle::random_box(rng, 60.0);
      if (i > 0 && i % 2 == 1) b = canonicalize(b.cx + jitter(rng), b.cy + jitter(rng), b.w, b.h, b.theta + turn(rng));
      // Quantised scores produce ties.
      dets.push_back({b, std::round(score(rng) * 20.0) / 20.0, "", 0});
    }
    const double t = thresh(rng);
    const auto got = rotated_nms(dets, t);
    const auto want = oracle::brute_force_nms(dets, t);
    v.require(got == want, "instance " + std::to_string(inst) + " differs");
    suppressed += dets.size() - got.size();
  }
  if (v.pass) v.detail = "200 instances identical (" + std::to_string(suppressed) + " suppressions)";
  return v;
}

Verdict tiling_coverage() {
  Verdict v;
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<std::int64_t> extent(1, 2500), tile(16, 1024);
  for (int cfg = 0; cfg < 100; ++cfg) {
    const std::int64_t w = extent(rng), h = extent(rng), t = tile(rng);
    const std::int64_t overlap = std::uniform_int_distribution<std::int64_t>(0, t - 1)(rng);
    const TileGrid grid = plan_tiles(w, h, t, overlap);
    // 2D difference array: +1 at each tile's corner, prefix sums give coverage.
    std::vector<std::int32_t> diff(static_cast<std::size_t>((w + 1) * (h + 1)), 0);
    const auto at = [&](std::int64_t x, std::int64_t y) -> std::int32_t& {
      return diff[static_cast<std::size_t>(y * (w + 1) + x)];
    };
    bool inside = true;
    for (const auto& tl : grid.tiles) {
      inside = inside && tl.origin_x >= 0 && tl.origin_y >= 0 && tl.origin_x + tl.width <= w &&
               tl.origin_y + tl.height <= h;
      at(tl.origin_x, tl.origin_y) += 1;
      at(tl.origin_x + tl.width, tl.origin_y) -= 1;
      at(tl.origin_x, tl.origin_y + tl.height) -= 1;
      at(tl.origin_x + tl.width, tl.origin_y + tl.height) += 1;
    }
    v.require(inside, "tile outside the image");
    std::int64_t uncovered = 0;
    for (std::int64_t y = 0; y <= h; ++y)
      for (std::int64_t x = 0; x <= w; ++x) {
        if (x > 0) at(x, y) += at(x - 1, y);
        if (y > 0) at(x, y) += at(x, y - 1);
        if (x > 0 && y > 0) at(x, y) -= at(x - 1, y - 1);
        if (x < w && y < h && at(x, y) <= 0) ++uncovered;
      }
    v.require(uncovered == 0, std::to_string(uncovered) + " uncovered pixels in " + std::to_string(w) + "x" +
                                  std::to_string(h) + " tile " + std::to_string(t) + " overlap " +
                                  std::to_string(overlap));
  }
  const std::size_t nine = plan_tiles(1000, 1000, 512, 64).tiles.size();
  v.require(nine == 9, "1000x1000/512/64 gives " + std::to_string(nine) + " tiles");
  if (v.pass) v.detail = "100 configurations fully covered; 1000x1000/512/64 -> 9 tiles";
  return v;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "solarmap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("solarmap_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Verdict end_to_end() {
  Verdict v;
  std::string summary;
  for (double orientation : {-90.0, -45.0, 0.0, 30.0, 60.0}) {
    const auto start = Clock::now();
    const fs::path dir = scratch("e2e_" + std::to_string(static_cast<int>(orientation)));
    const auto p = [&](const std::string& n) { return (dir / n).string(); };
    write_text_file(p("spec.json"), "{\"orientation\": " + fmt("%.17g", orientation) + "}");
    const std::vector<std::vector<std::string>> steps{
        {"synth", "--spec", p("spec.json"), "--out-dir", p("farm")},
        {"tile", "--ortho", p("farm/ortho.png"), "--out-dir", p("tiles"), "--gt", p("farm/gt.jsonl")},
        {"stub", "--gt", p("farm/gt.jsonl"), "--manifest", p("tiles/manifest.json"), "--out", p("dets.jsonl")},
        {"map", "--detections", p("dets.jsonl"), "--manifest", p("tiles/manifest.json"), "--world-file",
         p("farm/ortho.pgw"), "--crs", "EPSG:32633", "--out", p("panels.geojson"), "--out-detections",
         p("global.jsonl")},
        {"eval", "--pred", p("global.jsonl"), "--gt", p("farm/gt.jsonl"), "--out-json", p("metrics.json")},
    };
    bool ran = true;
    for (const auto& step : steps) {
      const CliRun r = cli(step);
      v.require(r.code == 0, step[0] + " failed at orientation " + fmt("%g", orientation) + ": " + r.err);
      ran = ran && r.code == 0;
    }
    const double elapsed = seconds_since(start);
    if (!ran) continue;
    const auto metrics = nlohmann::json::parse(read_text_file(p("metrics.json")));
    const auto geo = nlohmann::json::parse(read_text_file(p("panels.geojson")));
    const double ap = metrics["ap"], ar = metrics["ar"], ap75 = metrics["ap75"];
    const std::size_t features = geo["features"].size();
    const std::string at = " at orientation " + fmt("%g", orientation);
    v.require(ap == 1.0 && ar == 1.0 && ap75 == 1.0,
              "AP/AR/AP75 " + fmt("%.4f", ap) + "/" + fmt("%.4f", ar) + "/" + fmt("%.4f", ap75) + at);
    v.require(features == 60, std::to_string(features) + " features" + at);
    v.require(elapsed < 10.0, "runtime " + fmt("%.2f s", elapsed) + at);
    summary += (summary.empty() ? "" : ", ") + fmt("%g", orientation) + ":" + fmt("%.2fs", elapsed);
    fs::remove_all(dir);
  }
  if (v.pass) v.detail = "AP=AR=AP75=1, 60 features at each orientation (" + summary + ")";
  return v;
}

Verdict degradation_monotonicity() {
  Verdict v;
  const auto gt = generate_ground_truth(FarmSpec{});
  std::vector<Detection> gt_dets;
  for (const auto& b : gt) gt_dets.push_back({b, 1.0, "", 0});
  const PipelineConfig cfg;
  const TileGrid grid = plan_tiles(2048, 2048, cfg.tile_size, cfg.overlap);

  const std::vector<double> deltas{0, 1, 2, 4, 8};
  std::vector<double> ap50, ap75;
  for (double delta : deltas) {
    StubDetectorParams params;
    params.noise_px = delta;
    params.seed = 7;
    const auto panels = assemble_panel_map(stub_detector(gt, grid, params), grid, cfg);
    const MetricsReport r = evaluate(panels, gt_dets);
    ap50.push_back(*r.ap50);
    ap75.push_back(*r.ap75);
  }
  std::string table;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    table += (i ? ", " : "") + fmt("%g", deltas[i]) + ":" + fmt("%.3f", ap75[i]) + "/" + fmt("%.3f", ap50[i]);
  }
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    v.require(ap75[i] <= ap75[i - 1], "AP75 rises at delta " + fmt("%g", deltas[i]) + " (" + table + ")");
  }
  // First sweep index where AP75 falls below AP50, and where AP50 falls below its start.
  std::size_t split = deltas.size(), ap50_drop = deltas.size();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (split == deltas.size() && ap75[i] < ap50[i]) split = i;
    if (ap50_drop == deltas.size() && ap50[i] < ap50[0]) ap50_drop = i;
  }
  v.require(split < deltas.size(), "AP75 never separates from AP50 (" + table + ")");
  v.require(split < ap50_drop, "AP50 drops no later than AP75 separates (" + table + ")");
  if (v.pass) v.detail = "delta:AP75/AP50 " + table;
  return v;
}

Verdict evaluator_oracle() {
  Verdict v;
  const std::vector<Detection> gts{{{0, 0, 10, 20, 0}, 1, "", 0}, {{100, 0, 10, 20, 0}, 1, "", 0}};
  const std::vector<Detection> preds{{{0, 0, 10, 20, 0}, 0.9, "", 0}, {{500, 0, 10, 20, 0}, 0.8, "", 0}};
  const double ap = average_precision(match_at_threshold(preds, gts, 0.5)).value;
  v.require(std::abs(ap - 51.0 / 101.0) <= 1e-9, "hand PR case AP " + fmt("%.12f", ap));

  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<int> count(0, 10);
  std::uniform_real_distribution<double> score(0, 1), shift(-3, 3), turn(-8, 8);
  double worst = 0.0;
  for (int inst = 0; inst < 500; ++inst) {
    std::vector<Detection> g, p;
    const int ng = count(rng), np = count(rng);
    for (int i = 0; i < ng; ++i) g.push_back({oracle::random_box(rng, 40.0), 1, "", 0});
    for (int i = 0; i < np; ++i) {
      RotatedBox b = (ng > 0 && i % 4 != 3) ? g[static_cast<std::size_t>(i % ng)].box : oracle::random_box(rng, 40.0);
      b = canonicalize(b.cx + shift(rng), b.cy + shift(rng), b.w, b.h, b.theta + turn(rng));
      p.push_back({b, score(rng), "", 0});
    }
    if (g.empty()) continue;
    for (double t : default_iou_thresholds()) {
      const MatchResult m = match_at_threshold(p, g, t);
      const oracle::BruteMetrics want = oracle::brute_force_metrics(p, g, t);
      v.require(m.true_positives == want.tp, "TP count differs in instance " + std::to_string(inst));
      worst = std::max({worst, std::abs(average_precision(m).value - want.ap),
                        std::abs(average_recall(m).value - want.ar)});
    }
  }
  v.require(worst <= 1e-9, "brute-force deviation " + fmt("%.3g", worst));
  if (v.pass) v.detail = "AP = 51/101 (err " + fmt("%.1g", std::abs(ap - 51.0 / 101.0)) +
                         "); 500 instances x 10 thresholds match brute force";
  return v;
}

Verdict georeference_exactness() {
  Verdict v;
  const GeoTransform utm{0.025, 0.0, 0.0, -0.025, 500000.0, 4000000.0};
  const Point p = pixel_to_geo({100, 200}, utm);
  v.require(p.x == 500002.5 && p.y == 3999995.0,
            "pixel (100,200) -> (" + fmt("%.17g", p.x) + ", " + fmt("%.17g", p.y) + ")");

  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> pos(0, 4000), side(4, 80), aspect(1, 3), angle(-89.999, 90);
  std::vector<Detection> dets;
  for (int i = 0; i < 1000; ++i) {
    const double w = side(rng);
    dets.push_back({{pos(rng), pos(rng), w, w * aspect(rng), angle(rng)}, 0.9, "", 0});
  }
  double worst = 0.0;
  for (const GeoTransform& gt : {utm, GeoTransform{0.3, 0.05, -0.02, -0.31, 431000.5, 4420000.25},
                                 GeoTransform{1, 0, 0, 1, 0, 0}, GeoTransform{2e-7, 0, 0, -2e-7, 12.5, 41.9}}) {
    const auto doc = nlohmann::json::parse(export_geojson(dets, gt, "EPSG:32633"));
    const double det = std::abs(gt.a * gt.e - gt.b * gt.d);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto& ring = doc["features"][i]["geometry"]["coordinates"][0];
      double twice = 0.0;
      const double ox = ring[0][0], oy = ring[0][1];
      for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
        const double x1 = double(ring[k][0]) - ox, y1 = double(ring[k][1]) - oy;
        const double x2 = double(ring[k + 1][0]) - ox, y2 = double(ring[k + 1][1]) - oy;
        twice += x1 * y2 - x2 * y1;
      }
      const double want = dets[i].box.w * dets[i].box.h * det;
      v.require(twice > 0.0, "ring not counter-clockwise");
      worst = std::max(worst, std::abs(twice / 2.0 - want) / want);
    }
  }
  v.require(worst <= 1e-6, "area rel err " + fmt("%.3g", worst));
  if (v.pass) v.detail = "worked example exact; 4000 exported rings max area rel err " + fmt("%.2g", worst);
  return v;
}

std::string dir_fingerprint(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + read_text_file(f.string()) + "\n";
  return all;
}

Verdict determinism() {
  Verdict v;
  std::vector<std::string> outputs;
  std::size_t files = 0;
  for (int round = 0; round < 2; ++round) {
    const fs::path dir = scratch("determinism_" + std::to_string(round));
    const auto p = [&](const std::string& n) { return (dir / n).string(); };
    write_text_file(p("spec.json"),
                    R"({"orientation": 30, "jitter_px": 2, "jitter_deg": 3, "seed": 11, "canvas_w": 1400, "canvas_h": 1200})");
    const std::vector<std::vector<std::string>> steps{
        {"synth", "--spec", p("spec.json"), "--out-dir", p("farm")},
        {"tile", "--ortho", p("farm/ortho.png"), "--out-dir", p("tiles"), "--gt", p("farm/gt.jsonl")},
        {"stub", "--gt", p("farm/gt.jsonl"), "--manifest", p("tiles/manifest.json"), "--out", p("dets.jsonl"),
         "--noise-px", "3", "--noise-deg", "4", "--score-floor", "0.3", "--fp-rate", "0.2", "--fn-rate", "0.1",
         "--seed", "5"},
        {"map", "--detections", p("dets.jsonl"), "--manifest", p("tiles/manifest.json"), "--world-file",
         p("farm/ortho.pgw"), "--out", p("panels.geojson"), "--out-detections", p("global.jsonl")},
        {"eval", "--pred", p("global.jsonl"), "--gt", p("farm/gt.jsonl"), "--out-json", p("metrics.json"),
         "--label", "synthetic"},
        {"sample", "--index", p("tiles/patch_index.jsonl"), "--n-fg", "3", "--n-bg", "2", "--seed", "9", "--out",
         p("sample.json")},
        {"render", "--raster", p("farm/ortho.png"), "--detections", p("global.jsonl"), "--out", p("overlay.png")},
        {"anchors", "--fmap-w", "3", "--fmap-h", "2", "--out", p("anchors.jsonl")},
    };
    std::string streams;
    for (const auto& step : steps) {
      const CliRun r = cli(step);
      v.require(r.code == 0, step[0] + " failed: " + r.err);
      streams += step[0] + "\n" + r.out + r.err;
    }
    outputs.push_back(streams + dir_fingerprint(dir));
    files = static_cast<std::size_t>(std::distance(fs::recursive_directory_iterator(dir), {}));
    fs::remove_all(dir);
  }
  v.require(outputs[0] == outputs[1], "outputs differ between identical runs");
  if (v.pass) v.detail = "8 commands re-run, " + std::to_string(files) + " paths byte-identical";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {"geometry round trip", geometry_round_trip},
      {"rotated IoU oracle", rotated_iou_oracle},
      {"anchor counts and encode/decode", anchor_counts},
      {"NMS equivalence", nms_equivalence},
      {"tiling coverage", tiling_coverage},
      {"end-to-end synthetic map", end_to_end},
      {"degradation monotonicity", degradation_monotonicity},
      {"evaluator oracle", evaluator_oracle},
      {"georeference exactness", georeference_exactness},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += v.pass ? 0 : 1;
    std::printf("AC%-2zu %s  %-32s %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
