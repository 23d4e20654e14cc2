#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "solarmap/error.hpp"
#include "solarmap/evaluation.hpp"
#include "solarmap/synth.hpp"

using namespace solarmap;

namespace {

std::vector<Detection> as_detections(const std::vector<RotatedBox>& boxes) {
  std::vector<Detection> out;
  for (const auto& b : boxes) out.push_back({b, 1.0, "", 0});
  return out;
}

}  // namespace

TEST(GroundTruth, DefaultFarmGrid) {
  const auto gt = generate_ground_truth(FarmSpec{});
  ASSERT_EQ(gt.size(), 60u);
  // Canvas centre is 1023.5; the 10 x 6 grid spans +-360 by +-200 around it.
  EXPECT_EQ(gt[0], (RotatedBox{663.5, 823.5, 24, 48, 0}));
  EXPECT_EQ(gt[9], (RotatedBox{1383.5, 823.5, 24, 48, 0}));
  EXPECT_EQ(gt[59], (RotatedBox{1383.5, 1223.5, 24, 48, 0}));
}

TEST(GroundTruth, RotatedGridMatchesIndependentRotation) {
  for (double orientation : {-90.0, -45.0, 0.0, 30.0, 60.0}) {
    FarmSpec spec;
    spec.orientation = orientation;
    const auto gt = generate_ground_truth(spec);
    ASSERT_EQ(gt.size(), 60u);
    const double a = oracle::radians(orientation);
    for (std::size_t r = 0; r < 6; ++r) {
      for (std::size_t c = 0; c < 10; ++c) {
        const double gx = (c - 4.5) * 80.0, gy = (r - 2.5) * 80.0;
        const RotatedBox want{1023.5 + std::cos(a) * gx - std::sin(a) * gy,
                              1023.5 + std::sin(a) * gx + std::cos(a) * gy, 24, 48, orientation};
        EXPECT_TRUE(oracle::same_point_set(oracle::corners(gt[r * 10 + c]), oracle::corners(want), 1e-9));
      }
    }
  }
}

TEST(GroundTruth, PanelsDoNotOverlap) {
  for (double orientation : {-90.0, -45.0, 0.0, 30.0, 60.0}) {
    FarmSpec spec;
    spec.orientation = orientation;
    const auto gt = generate_ground_truth(spec);
    for (std::size_t i = 0; i < gt.size(); ++i)
      for (std::size_t j = i + 1; j < gt.size(); ++j) EXPECT_EQ(intersection_area(gt[i], gt[j]), 0.0);
  }
}

TEST(GroundTruth, DeterministicJitter) {
  FarmSpec spec;
  spec.jitter_px = 3;
  spec.jitter_deg = 5;
  spec.seed = 9;
  EXPECT_EQ(generate_ground_truth(spec), generate_ground_truth(spec));
  FarmSpec other = spec;
  other.seed = 10;
  EXPECT_NE(generate_ground_truth(spec), generate_ground_truth(other));
  const auto base = generate_ground_truth(FarmSpec{});
  const auto jittered = generate_ground_truth(spec);
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_LE(std::abs(jittered[i].cx - base[i].cx), 3.0);
    EXPECT_LE(std::abs(jittered[i].cy - base[i].cy), 3.0);
  }
}

TEST(GroundTruth, EscapeIsNamed) {
  FarmSpec spec;
  spec.canvas_w = 700;
  try {
    generate_ground_truth(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
    EXPECT_NE(std::string(e.what()).find("row 0, col 0"), std::string::npos);
  }
}

TEST(GroundTruth, InvalidSpecs) {
  FarmSpec tight;
  tight.pitch_x = 20;
  EXPECT_THROW(generate_ground_truth(tight), Error);
  FarmSpec empty;
  empty.rows = 0;
  EXPECT_THROW(generate_ground_truth(empty), Error);
  FarmSpec negative;
  negative.jitter_px = -1;
  EXPECT_THROW(generate_ground_truth(negative), Error);
}

TEST(Farm, RenderedPixelsMatchPanelArea) {
  for (double orientation : {0.0, 30.0, -45.0}) {
    FarmSpec spec;
    spec.orientation = orientation;
    const Farm farm = generate_farm(spec);
    std::size_t panel_pixels = 0, other = 0;
    for (std::int64_t y = 0; y < farm.raster.height; ++y) {
      for (std::int64_t x = 0; x < farm.raster.width; ++x) {
        const std::uint8_t* p = farm.raster.pixel(x, y);
        if (p[0] == kPanelColor[0] && p[1] == kPanelColor[1] && p[2] == kPanelColor[2]) ++panel_pixels;
        else if (!(p[0] == kBackgroundColor[0] && p[1] == kBackgroundColor[1] && p[2] == kBackgroundColor[2]))
          ++other;
      }
    }
    EXPECT_EQ(other, 0u);
    const double expected = 60.0 * 24 * 48;
    EXPECT_NEAR(static_cast<double>(panel_pixels), expected, 0.05 * expected) << orientation;
  }
}

TEST(StubDetector, ZeroNoiseReproducesGroundTruth) {
  const auto gt = generate_ground_truth(FarmSpec{});
  const auto dets = stub_detector(gt, StubDetectorParams{});
  ASSERT_EQ(dets.size(), gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    EXPECT_EQ(dets[i].box, gt[i]);
    EXPECT_EQ(dets[i].score, 1.0);
  }
  const MetricsReport r = evaluate(dets, as_detections(gt));
  EXPECT_EQ(r.ap, 1.0);
  EXPECT_EQ(r.ar, 1.0);
  EXPECT_EQ(*r.ap75, 1.0);
}

TEST(StubDetector, ExactDropAndFalsePositiveCounts) {
  std::vector<RotatedBox> gt;
  for (int i = 0; i < 100; ++i) gt.push_back({20.0 * i, 0, 5, 10, 0});
  StubDetectorParams p;
  p.fn_rate = 0.5;
  EXPECT_EQ(stub_detector(gt, p).size(), 50u);
  p.fp_rate = 0.2;
  p.fn_rate = 0.0;
  const auto dets = stub_detector(gt, p);
  EXPECT_EQ(dets.size(), 120u);
  for (const auto& d : dets) EXPECT_TRUE(is_canonical(d.box));
}

TEST(StubDetector, ScoresWithinFloor) {
  const auto gt = generate_ground_truth(FarmSpec{});
  StubDetectorParams p;
  p.score_floor = 0.6;
  p.seed = 4;
  std::set<double> distinct;
  for (const auto& d : stub_detector(gt, p)) {
    EXPECT_GE(d.score, 0.6);
    EXPECT_LE(d.score, 1.0);
    distinct.insert(d.score);
  }
  EXPECT_GT(distinct.size(), 50u);
}

TEST(StubDetector, NoiseBoundedAndDirectionStable) {
  const auto gt = generate_ground_truth(FarmSpec{});
  StubDetectorParams small, large;
  small.noise_px = 1;
  large.noise_px = 4;
  small.seed = large.seed = 12;
  const auto a = stub_detector(gt, small);
  const auto b = stub_detector(gt, large);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double dxa = a[i].box.cx - gt[i].cx, dxb = b[i].box.cx - gt[i].cx;
    EXPECT_LE(std::abs(dxa), 1.0);
    EXPECT_NEAR(dxb, 4 * dxa, 1e-9);
  }
}

TEST(StubDetector, InvalidParams) {
  StubDetectorParams p;
  p.fn_rate = 1.0;
  EXPECT_THROW(stub_detector({}, p), Error);
  p.fn_rate = 0.0;
  p.score_floor = 1.5;
  EXPECT_THROW(stub_detector({}, p), Error);
}

TEST(StubDetector, PerTileCopiesStitchBack) {
  FarmSpec spec;
  spec.orientation = 30;
  const auto gt = generate_ground_truth(spec);
  const TileGrid grid = plan_tiles(2048, 2048, 512, 64);
  const PerTileDetections per_tile = stub_detector(gt, grid, StubDetectorParams{});
  std::size_t copies = 0;
  for (const auto& [id, dets] : per_tile) {
    const TileSpec* tile = grid.find(id);
    ASSERT_NE(tile, nullptr);
    for (const auto& d : dets) {
      EXPECT_EQ(d.tile_id, id);
      EXPECT_TRUE(tile->fully_contains_local(d.box));
    }
    copies += dets.size();
  }
  EXPECT_GE(copies, gt.size());
  const auto stitched = stitch(per_tile, grid, 0.5);
  ASSERT_EQ(stitched.size(), gt.size());
  EXPECT_EQ(evaluate(stitched, as_detections(gt)).ap, 1.0);
}
