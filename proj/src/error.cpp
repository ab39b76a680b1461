#include "rtk/error.hpp"

namespace rtk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoLaneNearEgo: return "NoLaneNearEgo";
    case ErrorCode::MergeCollision: return "MergeCollision";
    case ErrorCode::TemplateOverflow: return "TemplateOverflow";
    case ErrorCode::TotalConflict: return "TotalConflict";
    case ErrorCode::CellCollision: return "CellCollision";
    case ErrorCode::AnchorOverflow: return "AnchorOverflow";
    case ErrorCode::TooManyKeypoints: return "TooManyKeypoints";
    case ErrorCode::TooManyEdges: return "TooManyEdges";
    case ErrorCode::InconsistentIndex: return "InconsistentIndex";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rtk
