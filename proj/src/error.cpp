#include "solarmap/error.hpp"

namespace solarmap {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidBox: return "invalid-box";
    case ErrorCode::NotARectangle: return "not-a-rectangle";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::UnknownTile: return "unknown-tile";
    case ErrorCode::EmptyAnchors: return "empty-anchors";
    case ErrorCode::WorldFileLineCount: return "world-file-line-count";
    case ErrorCode::WorldFileNonNumeric: return "world-file-non-numeric";
    case ErrorCode::SingularTransform: return "singular-transform";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::FileNotFound: return "file-not-found";
    case ErrorCode::Unreadable: return "unreadable";
    case ErrorCode::UnsupportedDepth: return "unsupported-depth";
    case ErrorCode::UnsupportedFormat: return "unsupported-format";
    case ErrorCode::WriteFailed: return "write-failed";
  }
  return "unknown";
}

}  // namespace solarmap
