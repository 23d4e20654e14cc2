#include "cli.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "solarmap/anchors.hpp"
#include "solarmap/evaluation.hpp"
#include "solarmap/formats.hpp"
#include "solarmap/georef.hpp"
#include "solarmap/pipeline.hpp"
#include "solarmap/raster_io.hpp"
#include "solarmap/synth.hpp"
#include "solarmap/tiling.hpp"

namespace solarmap::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage or configuration error\n"
    "  3  input file missing\n"
    "  4  input file could not be parsed or decoded\n"
    "  5  input data violates a constraint (bad box, unknown tile, singular transform, ...)\n"
    "  6  unsupported raster container or bit depth\n"
    "  7  output could not be written\n"
    "On failure a single JSON line {\"error\", \"exit_code\", \"message\"} is written to stderr.";

void report_error(std::ostream& err, std::string_view code, int exit_code, const std::string& message) {
  nlohmann::ordered_json line;
  line["error"] = code;
  line["exit_code"] = exit_code;
  line["message"] = message;
  err << line.dump() << '\n';
}

/// Pipeline settings: --config file first, explicit flags on top.
struct ConfigFlags {
  std::string config_path;
  std::int64_t tile_size = 0;
  std::int64_t overlap = 0;
  double nms_iou = 0.0;
  double dedup_iou = 0.0;
  double score_min = 0.0;
  std::size_t max_dets = 0;
  std::uint64_t seed = 0;
  std::vector<CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file with flat PipelineConfig keys");
    options = {
        app->add_option("--tile-size", tile_size, "tile edge in pixels (default 512)"),
        app->add_option("--overlap", overlap, "tile overlap in pixels (default 64)"),
        app->add_option("--nms-iou", nms_iou, "global NMS IoU threshold (default 0.3)"),
        app->add_option("--dedup-iou", dedup_iou, "cross-tile dedup IoU threshold (default 0.5)"),
        app->add_option("--score-min", score_min, "minimum detection score (default 0.5)"),
        app->add_option("--max-dets", max_dets, "detections per image counted by AR (default 300)"),
        app->add_option("--seed", seed, "seed for every random choice (default 0)"),
    };
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = parse_pipeline_config(read_text_file(config_path));
    if (options[0]->count()) cfg.tile_size = tile_size;
    if (options[1]->count()) cfg.overlap = overlap;
    if (options[2]->count()) cfg.nms_iou = nms_iou;
    if (options[3]->count()) cfg.dedup_iou = dedup_iou;
    if (options[4]->count()) cfg.score_min = score_min;
    if (options[5]->count()) cfg.eval.max_dets = max_dets;
    if (options[6]->count()) cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

std::vector<RotatedBox> boxes_of(const std::vector<Detection>& dets) {
  std::vector<RotatedBox> boxes;
  boxes.reserve(dets.size());
  for (const auto& d : dets) boxes.push_back(d.box);
  return boxes;
}

std::vector<Detection> flatten(const PerTileDetections& per_tile, const TileGrid& grid) {
  std::vector<Detection> out;
  for (const auto& tile : grid.tiles) {
    const auto it = per_tile.find(tile.tile_id);
    if (it != per_tile.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::WriteFailed, "cannot create directory '" + dir.string() + "'");
}

FarmSpec parse_farm_spec(const std::string& text, GeoTransform& world) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("farm spec: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "farm spec: expected a JSON object");
  FarmSpec spec;
  world = GeoTransform{0.025, 0.0, 0.0, -0.025, 500000.0, 4000000.0};
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "rows") spec.rows = v.get<std::size_t>();
      else if (key == "cols") spec.cols = v.get<std::size_t>();
      else if (key == "panel_w") spec.panel_w = v.get<double>();
      else if (key == "panel_h") spec.panel_h = v.get<double>();
      else if (key == "pitch_x") spec.pitch_x = v.get<double>();
      else if (key == "pitch_y") spec.pitch_y = v.get<double>();
      else if (key == "orientation") spec.orientation = v.get<double>();
      else if (key == "jitter_px") spec.jitter_px = v.get<double>();
      else if (key == "jitter_deg") spec.jitter_deg = v.get<double>();
      else if (key == "seed") spec.seed = v.get<std::uint64_t>();
      else if (key == "canvas_w") spec.canvas_w = v.get<std::int64_t>();
      else if (key == "canvas_h") spec.canvas_h = v.get<std::int64_t>();
      else if (key == "world_file") {
        const auto c = v.get<std::vector<double>>();
        if (c.size() != 6) throw Error(ErrorCode::ParseError, "farm spec: world_file needs 6 numbers");
        world = GeoTransform{c[0], c[1], c[2], c[3], c[4], c[5]};
      } else {
        throw Error(ErrorCode::ParseError, "farm spec: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("farm spec: ") + e.what());
  }
  world.validate();
  return spec;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
      return kUsage;
    case ErrorCode::FileNotFound:
      return kMissingFile;
    case ErrorCode::ParseError:
    case ErrorCode::WorldFileLineCount:
    case ErrorCode::WorldFileNonNumeric:
    case ErrorCode::Unreadable:
      return kParseFailure;
    case ErrorCode::UnsupportedDepth:
    case ErrorCode::UnsupportedFormat:
      return kUnsupportedRaster;
    case ErrorCode::WriteFailed:
      return kWriteFailure;
    case ErrorCode::InvalidBox:
    case ErrorCode::NotARectangle:
    case ErrorCode::InvalidSpec:
    case ErrorCode::UnknownTile:
    case ErrorCode::EmptyAnchors:
    case ErrorCode::SingularTransform:
      return kInvalidData;
  }
  return kInternal;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"solarmap: oriented solar-panel mapping pipeline (tiling, stitching, "
               "georeferencing, evaluation)"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  // tile
  auto* tile_cmd = app.add_subcommand("tile", "Plan a tile grid over an orthomosaic and cut tiles");
  std::string tile_ortho, tile_out_dir, tile_gt;
  bool tile_no_images = false;
  ConfigFlags tile_cfg;
  tile_cmd->add_option("--ortho", tile_ortho, "orthomosaic image (PNG or PPM)")->required();
  tile_cmd->add_option("--out-dir", tile_out_dir, "output directory")->required();
  tile_cmd->add_option("--gt", tile_gt, "ground-truth JSONL; also writes patch_index.jsonl");
  tile_cmd->add_flag("--no-images", tile_no_images, "write the manifest only");
  tile_cfg.attach(tile_cmd);

  // stub
  auto* stub_cmd = app.add_subcommand("stub", "Stub detector: per-tile detections from ground truth");
  std::string stub_gt, stub_manifest, stub_out;
  StubDetectorParams stub;
  ConfigFlags stub_cfg;
  stub_cmd->add_option("--gt", stub_gt, "ground-truth JSONL (global frame)")->required();
  stub_cmd->add_option("--manifest", stub_manifest, "tile manifest JSON")->required();
  stub_cmd->add_option("--out", stub_out, "per-tile detections JSONL")->required();
  stub_cmd->add_option("--noise-px", stub.noise_px, "centroid jitter half-width in pixels");
  stub_cmd->add_option("--noise-deg", stub.noise_deg, "angle jitter half-width in degrees");
  stub_cmd->add_option("--score-floor", stub.score_floor, "scores drawn from [floor, 1]");
  stub_cmd->add_option("--fp-rate", stub.fp_rate, "false positives added, as a fraction of panels");
  stub_cmd->add_option("--fn-rate", stub.fn_rate, "fraction of panels dropped");
  stub_cfg.attach(stub_cmd);

  // map
  auto* map_cmd = app.add_subcommand("map", "Stitch per-tile detections and export a GeoJSON panel map");
  std::string map_dets, map_manifest, map_ortho, map_world, map_out, map_crs = "unknown", map_out_dets;
  ConfigFlags map_cfg;
  map_cmd->add_option("--detections", map_dets, "per-tile detections JSONL (tile-local)")->required();
  auto* map_manifest_opt = map_cmd->add_option("--manifest", map_manifest, "tile manifest JSON");
  auto* map_ortho_opt = map_cmd->add_option("--ortho", map_ortho, "orthomosaic; the grid is re-planned from its size");
  map_cmd->add_option("--world-file", map_world, "6-line world file")->required();
  map_cmd->add_option("--out", map_out, "output GeoJSON")->required();
  map_cmd->add_option("--crs", map_crs, "CRS label recorded in the output");
  map_cmd->add_option("--out-detections", map_out_dets, "also write stitched global detections JSONL");
  map_manifest_opt->excludes(map_ortho_opt);
  map_cfg.attach(map_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Oriented mAP / mAR of predictions against ground truth");
  std::string eval_pred, eval_gt, eval_json, eval_label;
  bool eval_per_tile = false;
  ConfigFlags eval_cfg;
  eval_cmd->add_option("--pred", eval_pred, "prediction JSONL")->required();
  eval_cmd->add_option("--gt", eval_gt, "ground-truth JSONL")->required();
  eval_cmd->add_option("--out-json", eval_json, "machine-readable report");
  eval_cmd->add_option("--label", eval_label, "row label for the table");
  eval_cmd->add_flag("--per-tile", eval_per_tile, "treat each tile_id as a separate image");
  eval_cfg.attach(eval_cmd);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample foreground/background patches for annotation");
  std::string sample_index, sample_out;
  std::size_t n_fg = kDefaultForegroundSamples, n_bg = kDefaultBackgroundSamples;
  ConfigFlags sample_cfg;
  sample_cmd->add_option("--index", sample_index, "patch index JSONL")->required();
  sample_cmd->add_option("--n-fg", n_fg, "foreground patches (default 10)");
  sample_cmd->add_option("--n-bg", n_bg, "background patches (default 5)");
  sample_cmd->add_option("--out", sample_out, "output JSON (default: standard output)");
  sample_cfg.attach(sample_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic solar farm: raster, ground truth, world file");
  std::string synth_spec, synth_out_dir;
  synth_cmd->add_option("--spec", synth_spec, "farm spec JSON")->required();
  synth_cmd->add_option("--out-dir", synth_out_dir, "output directory")->required();

  // render
  auto* render_cmd = app.add_subcommand("render", "Draw detections over a raster");
  std::string render_raster, render_dets, render_out;
  double render_stroke = 2.0;
  render_cmd->add_option("--raster", render_raster, "input raster")->required();
  render_cmd->add_option("--detections", render_dets, "detections JSONL in the raster's frame")->required();
  render_cmd->add_option("--out", render_out, "output image (.png or .ppm)")->required();
  render_cmd->add_option("--stroke", render_stroke, "outline width in pixels (default 2)");

  // anchors
  auto* anchors_cmd = app.add_subcommand("anchors", "Generate the rotated anchor set for a feature map");
  std::size_t fmap_w = 1, fmap_h = 1;
  std::string anchors_out;
  ConfigFlags anchors_cfg;
  anchors_cmd->add_option("--fmap-w", fmap_w, "feature-map width in cells");
  anchors_cmd->add_option("--fmap-h", fmap_h, "feature-map height in cells");
  anchors_cmd->add_option("--out", anchors_out, "write anchors as JSONL");
  anchors_cfg.attach(anchors_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    report_error(err, "usage", kUsage, e.what());
    return kUsage;
  }

  try {
    if (*tile_cmd) {
      const PipelineConfig cfg = tile_cfg.resolve();
      const RasterSize size = probe_raster(tile_ortho);
      const TileGrid grid = plan_tiles(size.width, size.height, cfg.tile_size, cfg.overlap);
      const fs::path dir(tile_out_dir);
      ensure_directory(dir);
      if (!tile_no_images) {
        ensure_directory(dir / "tiles");
        const Raster ortho = read_raster(tile_ortho);
        for (const auto& t : grid.tiles) {
          write_raster(crop_tile(ortho, t), (dir / "tiles" / (t.tile_id + ".png")).string());
        }
      }
      write_text_file((dir / "manifest.json").string(), format_manifest(grid));
      if (!tile_gt.empty()) {
        const auto index = build_patch_index(grid, boxes_of(read_detections_jsonl(tile_gt)));
        write_text_file((dir / "patch_index.jsonl").string(), format_patch_index(index));
      }
      err << "tile: " << grid.tiles.size() << " tiles over " << size.width << "x" << size.height << "\n";
    } else if (*stub_cmd) {
      const PipelineConfig cfg = stub_cfg.resolve();
      stub.seed = cfg.seed;
      const TileGrid grid = read_manifest(stub_manifest);
      const auto per_tile = stub_detector(boxes_of(read_detections_jsonl(stub_gt)), grid, stub);
      const auto flat = flatten(per_tile, grid);
      write_text_file(stub_out, format_detections_jsonl(flat));
      err << "stub: " << flat.size() << " per-tile detections\n";
    } else if (*map_cmd) {
      const PipelineConfig cfg = map_cfg.resolve();
      TileGrid grid;
      if (!map_manifest.empty()) {
        grid = read_manifest(map_manifest);
      } else if (!map_ortho.empty()) {
        const RasterSize size = probe_raster(map_ortho);
        grid = plan_tiles(size.width, size.height, cfg.tile_size, cfg.overlap);
      } else {
        throw Error(ErrorCode::InvalidConfig, "map needs --manifest or --ortho");
      }
      const GeoTransform world = read_world_file(map_world);
      const auto global = assemble_panel_map(group_by_tile(read_detections_jsonl(map_dets)), grid, cfg);
      write_text_file(map_out, features_to_geojson(project_panels(global, world), map_crs));
      if (!map_out_dets.empty()) write_text_file(map_out_dets, format_detections_jsonl(global));
      err << "map: " << global.size() << " panels\n";
    } else if (*eval_cmd) {
      PipelineConfig cfg = eval_cfg.resolve();
      if (eval_per_tile) cfg.eval.group_by_tile = true;
      const auto report = evaluate(read_detections_jsonl(eval_pred), read_detections_jsonl(eval_gt), cfg.eval);
      out << render_metrics_table(report, eval_label);
      if (!eval_json.empty()) write_text_file(eval_json, metrics_to_json(report));
    } else if (*sample_cmd) {
      const PipelineConfig cfg = sample_cfg.resolve();
      const auto sample = sample_patches(read_patch_index(sample_index), n_fg, n_bg, cfg.seed);
      for (const auto& w : sample.warnings) err << "sample: warning: " << w << "\n";
      const std::string doc = format_patch_sample(sample);
      if (sample_out.empty()) {
        out << doc;
      } else {
        write_text_file(sample_out, doc);
      }
    } else if (*synth_cmd) {
      GeoTransform world;
      const FarmSpec spec = parse_farm_spec(read_text_file(synth_spec), world);
      const Farm farm = generate_farm(spec);
      const fs::path dir(synth_out_dir);
      ensure_directory(dir);
      write_raster(farm.raster, (dir / "ortho.png").string());
      std::vector<Detection> gt;
      for (const auto& b : farm.ground_truth) gt.push_back(Detection{b, 1.0, "", 0});
      write_text_file((dir / "gt.jsonl").string(), format_detections_jsonl(gt));
      write_text_file((dir / "ortho.pgw").string(), format_world_file(world));
      err << "synth: " << gt.size() << " panels on " << spec.canvas_w << "x" << spec.canvas_h << "\n";
    } else if (*render_cmd) {
      OverlayStyle style;
      style.stroke_px = render_stroke;
      const Raster overlay = render_overlay(read_raster(render_raster), read_detections_jsonl(render_dets), style);
      write_raster(overlay, render_out);
    } else if (*anchors_cmd) {
      const PipelineConfig cfg = anchors_cfg.resolve();
      const auto anchors = generate_anchors(cfg.anchors, fmap_w, fmap_h);
      out << "anchors per location: " << cfg.anchors.anchors_per_location() << "\n"
          << "total anchors: " << anchors.size() << "\n";
      if (!anchors_out.empty()) {
        std::vector<Detection> as_dets;
        as_dets.reserve(anchors.size());
        for (const auto& a : anchors) as_dets.push_back(Detection{a, 1.0, "", 0});
        write_text_file(anchors_out, format_detections_jsonl(as_dets));
      }
    }
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(err, error_code_name(e.code()), code, e.what());
    return code;
  } catch (const std::exception& e) {
    report_error(err, "internal", kInternal, e.what());
    return kInternal;
  }
  return kOk;
}

}  // namespace solarmap::cli
