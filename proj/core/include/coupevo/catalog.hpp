#pragma once

// The catalog of reusable coupled operations. Each operation pairs a
// metamodel adaptation with the instance migration that keeps models
// conforming, guarded by named applicability constraints.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo {

enum class ParamType {
  ElementRef,      // qualified-name path (JSON string)
  ElementRefList,  // array of paths
  String,
  StringList,
  Literal,         // textual literal, parsed against the target type
  Flag,            // JSON boolean
  Integer,         // JSON integer; -1 stands for unbounded
  LiteralMap,      // object literal -> literal
};

std::string_view to_string(ParamType type) noexcept;

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::ElementRef;
  bool required = true;
  std::string doc;
};

struct OperationSpec {
  std::string name;
  std::vector<ParamSpec> params;
  /// Applicability constraints, named after the problem they rule out.
  std::vector<std::string> constraints;
  std::string documentation;

  const ParamSpec* find_param(std::string_view param) const;
};

struct OperationApplication {
  std::string op;
  nlohmann::json args = nlohmann::json::object();

  friend bool operator==(const OperationApplication&, const OperationApplication&) = default;
};

struct ConstraintResult {
  std::string constraint;
  bool satisfied = false;
  std::string message;
};

bool all_satisfied(const std::vector<ConstraintResult>& results);
std::string format_constraints(const std::vector<ConstraintResult>& results);

/// All 34 operations in a stable order.
const std::vector<OperationSpec>& list_operations();
/// nullptr when unknown.
const OperationSpec* find_operation(std::string_view name);

/// Converts a command-line value ("a,b", "true", "*", "x:y,z:w") into the
/// JSON form expected for `param`. Throws ArgTypeMismatch.
nlohmann::json parse_arg_text(const ParamSpec& param, std::string_view text);

/// Every declared constraint is reported, in declaration order, followed by
/// a final WellFormedResult check that the adapted metamodel validates.
/// Throws UnknownOperation, ArgTypeMismatch.
std::vector<ConstraintResult> check_applicability(const OperationApplication& application,
                                                  const Metamodel& metamodel);

struct CoupledResult {
  Metamodel metamodel;
  std::optional<ResourceSet> model;
};

/// Adapts a copy of `metamodel` and, when `set` is given, migrates a copy of
/// it. `set` is expected to conform to `metamodel`. The inputs are never
/// modified. Throws UnknownOperation, ArgTypeMismatch, ConstraintViolation,
/// MigrationError, PostConformance.
CoupledResult apply_coupled(const OperationApplication& application, const Metamodel& metamodel,
                            const ResourceSet* set = nullptr);

/// Adaptation only, for replaying a history. Constraints are checked.
Metamodel adapt_metamodel(const OperationApplication& application, const Metamodel& metamodel);

}  // namespace coupevo
