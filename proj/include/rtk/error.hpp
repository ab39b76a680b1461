#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtk {

enum class ErrorCode {
  InvalidArgument,
  NoLaneNearEgo,
  MergeCollision,
  TemplateOverflow,
  TotalConflict,
  CellCollision,
  AnchorOverflow,
  TooManyKeypoints,
  TooManyEdges,
  InconsistentIndex,
  ShapeMismatch,
  OutOfRange,
  BadMagic,
  TruncatedFile,
  DuplicateName,
  SchemaViolation,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// All toolkit failures surface as rtk::Error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the filesystem or the binary container
  /// framing, as opposed to invalid content.
  bool is_io() const noexcept {
    return code_ == ErrorCode::IoError || code_ == ErrorCode::BadMagic ||
           code_ == ErrorCode::TruncatedFile;
  }

 private:
  ErrorCode code_;
};

}  // namespace rtk
