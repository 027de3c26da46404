#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coupevo {

enum class ErrorCode {
  // meta-core
  DanglingRef,
  InvalidMetamodel,
  // instance-core
  ParseError,
  IoError,
  UnresolvedRef,
  MixedNsUri,
  UnknownObject,
  UnknownClass,
  InconsistentModel,
  // op-catalog
  UnknownOperation,
  ArgTypeMismatch,
  ConstraintViolation,
  MigrationError,
  PostConformance,
  // history
  ReleasedHistory,
  BadSpan,
  DuplicateLabel,
  ReplayError,
  NothingToUndo,
  UnknownNsUri,
  EmptyRelease,
  InvalidLabel,
  // migrate
  MissingHook,
  DuplicateHook,
  InitialNonConformance,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the engine.
///
/// `code()` identifies the failure class; `reason()` optionally narrows it
/// (for example "SharedTarget" or "ValueWouldBeLost" on a MigrationError).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string reason = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  ErrorCode code_;
  std::string reason_;
};

}  // namespace coupevo
