#include "solarmap/formats.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) fn(line, line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

json parse_json(std::string_view text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::vector<Detection> parse_detections_jsonl(std::string_view text) {
  std::vector<Detection> dets;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const std::string where = "detection line " + std::to_string(line_no);
    const json obj = parse_json(line, where);
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
    Detection d;
    d.tile_id = obj.contains("tile_id") && !obj["tile_id"].is_null()
                    ? field<std::string>(obj, "tile_id", where)
                    : std::string{};
    d.score = field<double>(obj, "score", where);
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw Error(ErrorCode::ParseError, where + ": score must lie in [0, 1]");
    }
    try {
      d.box = canonicalize(field<double>(obj, "cx", where), field<double>(obj, "cy", where),
                           field<double>(obj, "w", where), field<double>(obj, "h", where),
                           field<double>(obj, "theta_deg", where));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
    dets.push_back(std::move(d));
  });
  return dets;
}

std::vector<Detection> read_detections_jsonl(const std::string& path) {
  return parse_detections_jsonl(read_text_file(path));
}

std::string format_detections_jsonl(const std::vector<Detection>& dets) {
  std::string out;
  for (const auto& d : dets) {
    ordered_json obj;
    obj["tile_id"] = d.tile_id;
    obj["cx"] = d.box.cx;
    obj["cy"] = d.box.cy;
    obj["w"] = d.box.w;
    obj["h"] = d.box.h;
    obj["theta_deg"] = d.box.theta;
    obj["score"] = d.score;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

PerTileDetections group_by_tile(const std::vector<Detection>& dets) {
  PerTileDetections grouped;
  for (const auto& d : dets) grouped[d.tile_id].push_back(d);
  return grouped;
}

std::string format_manifest(const TileGrid& grid) {
  ordered_json doc;
  doc["ortho_width"] = grid.ortho_width;
  doc["ortho_height"] = grid.ortho_height;
  doc["tile_size"] = grid.tile_size;
  doc["overlap"] = grid.overlap;
  auto tiles = ordered_json::array();
  for (const auto& t : grid.tiles) {
    ordered_json tile;
    tile["tile_id"] = t.tile_id;
    tile["origin_x"] = t.origin_x;
    tile["origin_y"] = t.origin_y;
    tile["width"] = t.width;
    tile["height"] = t.height;
    tiles.push_back(std::move(tile));
  }
  doc["tiles"] = std::move(tiles);
  return doc.dump(2) + "\n";
}

TileGrid parse_manifest(std::string_view text) {
  const std::string where = "tile manifest";
  const json doc = parse_json(text, where);
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
  TileGrid grid;
  grid.ortho_width = field<std::int64_t>(doc, "ortho_width", where);
  grid.ortho_height = field<std::int64_t>(doc, "ortho_height", where);
  grid.tile_size = field<std::int64_t>(doc, "tile_size", where);
  grid.overlap = field<std::int64_t>(doc, "overlap", where);
  const auto tiles = field<json>(doc, "tiles", where);
  if (!tiles.is_array()) throw Error(ErrorCode::ParseError, where + ": 'tiles' must be an array");
  std::set<std::string> ids;
  for (const auto& t : tiles) {
    TileSpec spec;
    spec.tile_id = field<std::string>(t, "tile_id", where);
    spec.origin_x = field<std::int64_t>(t, "origin_x", where);
    spec.origin_y = field<std::int64_t>(t, "origin_y", where);
    spec.width = field<std::int64_t>(t, "width", where);
    spec.height = field<std::int64_t>(t, "height", where);
    if (spec.origin_x < 0 || spec.origin_y < 0 || spec.width <= 0 || spec.height <= 0 ||
        spec.origin_x + spec.width > grid.ortho_width ||
        spec.origin_y + spec.height > grid.ortho_height) {
      throw Error(ErrorCode::ParseError,
                  where + ": tile '" + spec.tile_id + "' lies outside the orthomosaic");
    }
    if (!ids.insert(spec.tile_id).second) {
      throw Error(ErrorCode::ParseError, where + ": duplicate tile id '" + spec.tile_id + "'");
    }
    grid.tiles.push_back(std::move(spec));
  }
  return grid;
}

TileGrid read_manifest(const std::string& path) { return parse_manifest(read_text_file(path)); }

std::string format_patch_index(const std::vector<PatchEntry>& index) {
  std::string out;
  for (const auto& p : index) {
    ordered_json obj;
    obj["tile_id"] = p.tile_id;
    obj["has_panels"] = p.has_panels;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<PatchEntry> parse_patch_index(std::string_view text) {
  std::vector<PatchEntry> index;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const std::string where = "patch index line " + std::to_string(line_no);
    const json obj = parse_json(line, where);
    index.push_back({field<std::string>(obj, "tile_id", where), field<bool>(obj, "has_panels", where)});
  });
  return index;
}

std::vector<PatchEntry> read_patch_index(const std::string& path) {
  return parse_patch_index(read_text_file(path));
}

std::string format_patch_sample(const PatchSample& sample) {
  ordered_json doc;
  doc["foreground"] = sample.foreground;
  doc["background"] = sample.background;
  doc["foreground_shortage"] = sample.foreground_shortage;
  doc["background_shortage"] = sample.background_shortage;
  doc["warnings"] = sample.warnings;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::WriteFailed, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::WriteFailed, "cannot write '" + path + "'");
}

}  // namespace solarmap
