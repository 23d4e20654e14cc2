#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "solarmap/suppression.hpp"
#include "solarmap/tiling.hpp"

namespace solarmap {

// Detection interchange: JSON Lines, one object per detection,
//   {"tile_id": str, "cx": f, "cy": f, "w": f, "h": f, "theta_deg": f, "score": f}
// Boxes are canonicalised on read. Blank lines are skipped.

std::vector<Detection> parse_detections_jsonl(std::string_view text);
std::vector<Detection> read_detections_jsonl(const std::string& path);
std::string format_detections_jsonl(const std::vector<Detection>& dets);

/// Groups by tile_id, preserving per-tile input order.
PerTileDetections group_by_tile(const std::vector<Detection>& dets);

// Tile manifest: {"ortho_width", "ortho_height", "tile_size", "overlap",
// "tiles": [{"tile_id", "origin_x", "origin_y", "width", "height"}]}

std::string format_manifest(const TileGrid& grid);
TileGrid parse_manifest(std::string_view text);
TileGrid read_manifest(const std::string& path);

// Patch index: JSON Lines of {"tile_id": str, "has_panels": bool}.

std::string format_patch_index(const std::vector<PatchEntry>& index);
std::vector<PatchEntry> parse_patch_index(std::string_view text);
std::vector<PatchEntry> read_patch_index(const std::string& path);

std::string format_patch_sample(const PatchSample& sample);

/// Whole file as a string; Error(FileNotFound) when it cannot be opened.
std::string read_text_file(const std::string& path);
/// Error(WriteFailed) on failure.
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace solarmap
