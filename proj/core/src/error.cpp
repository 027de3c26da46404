#include "coupevo/error.hpp"

namespace coupevo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DanglingRef: return "DanglingRef";
    case ErrorCode::InvalidMetamodel: return "InvalidMetamodel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnresolvedRef: return "UnresolvedRef";
    case ErrorCode::MixedNsUri: return "MixedNsUri";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::InconsistentModel: return "InconsistentModel";
    case ErrorCode::UnknownOperation: return "UnknownOperation";
    case ErrorCode::ArgTypeMismatch: return "ArgTypeMismatch";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::MigrationError: return "MigrationError";
    case ErrorCode::PostConformance: return "PostConformance";
    case ErrorCode::ReleasedHistory: return "ReleasedHistory";
    case ErrorCode::BadSpan: return "BadSpan";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::ReplayError: return "ReplayError";
    case ErrorCode::NothingToUndo: return "NothingToUndo";
    case ErrorCode::UnknownNsUri: return "UnknownNsUri";
    case ErrorCode::EmptyRelease: return "EmptyRelease";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::MissingHook: return "MissingHook";
    case ErrorCode::DuplicateHook: return "DuplicateHook";
    case ErrorCode::InitialNonConformance: return "InitialNonConformance";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string reason)
    : std::runtime_error(message), code_(code), reason_(std::move(reason)) {}

}  // namespace coupevo
