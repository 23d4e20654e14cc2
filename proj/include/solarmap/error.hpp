#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace solarmap {

enum class ErrorCode {
  InvalidBox,
  NotARectangle,
  InvalidConfig,
  InvalidSpec,
  UnknownTile,
  EmptyAnchors,
  WorldFileLineCount,
  WorldFileNonNumeric,
  SingularTransform,
  ParseError,
  FileNotFound,
  Unreadable,
  UnsupportedDepth,
  UnsupportedFormat,
  WriteFailed,
};

/// Stable kebab-case name, used in the CLI's machine-readable error line.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by from_vertices; carries the relative side/diagonal mismatch that
/// exceeded the rectangle tolerance.
class NotARectangleError : public Error {
 public:
  NotARectangleError(double deviation, const std::string& message)
      : Error(ErrorCode::NotARectangle, message), deviation_(deviation) {}

  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

}  // namespace solarmap
