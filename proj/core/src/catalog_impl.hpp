#pragma once

// Shared machinery behind the operation catalog. Every operation is a
// CoupledOperation; the catalog_*.cpp files each contribute a group.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/catalog.hpp"
#include "coupevo/error.hpp"
#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo::detail {

/// Typed view on validated arguments.
class Args {
 public:
  explicit Args(const nlohmann::json& args) : args_(args) {}

  bool has(std::string_view name) const;
  std::string str(std::string_view name) const;
  std::optional<std::string> opt_str(std::string_view name) const;
  std::vector<std::string> list(std::string_view name) const;
  bool flag(std::string_view name, bool fallback = false) const;
  std::optional<int> opt_int(std::string_view name) const;
  int integer(std::string_view name, int fallback) const;
  std::map<std::string, std::string> map(std::string_view name) const;

 private:
  const nlohmann::json& args_;
};

/// Collects constraint outcomes. Constraints never reached are reported as
/// unsatisfied with "not evaluated", so the list always lines up with
/// OperationSpec::constraints.
class Checks {
 public:
  explicit Checks(const OperationSpec& spec) : spec_(spec) {}

  /// Records the outcome and returns `ok`.
  bool check(std::string_view constraint, bool ok, std::string message = {});
  bool passed() const noexcept { return failed_ == 0; }
  std::vector<ConstraintResult> finish() const;

 private:
  const OperationSpec& spec_;
  std::map<std::string, ConstraintResult, std::less<>> results_;
  int failed_ = 0;
};

class CoupledOperation {
 public:
  explicit CoupledOperation(OperationSpec spec) : spec_(std::move(spec)) {}
  virtual ~CoupledOperation() = default;

  const OperationSpec& spec() const noexcept { return spec_; }

  virtual void check(const Metamodel& mm, const Args& args, Checks& checks) const = 0;
  virtual void adapt(Metamodel& mm, const Args& args) const = 0;
  /// `before` and `after` are the metamodel around the adaptation.
  virtual void migrate(const Metamodel& before, const Metamodel& after, ResourceSet& set,
                       const Args& args) const {
    (void)before;
    (void)after;
    (void)set;
    (void)args;
  }

 private:
  OperationSpec spec_;
};

using OperationList = std::vector<std::unique_ptr<CoupledOperation>>;

struct OperationFns {
  std::function<void(const Metamodel&, const Args&, Checks&)> check;
  std::function<void(Metamodel&, const Args&)> adapt;
  /// Optional; metamodel-only operations leave it empty.
  std::function<void(const Metamodel&, const Metamodel&, ResourceSet&, const Args&)> migrate;
};

std::unique_ptr<CoupledOperation> make_operation(OperationSpec spec, OperationFns fns);

void add_structure_operations(OperationList& out);
void add_feature_operations(OperationList& out);
void add_annotation_operations(OperationList& out);
void add_enumeration_operations(OperationList& out);

// OperationSpec construction helpers.
ParamSpec param(std::string name, ParamType type, std::string doc, bool required = true);

// ---------------------------------------------------------------------------
// Metamodel helpers

/// Feature at "pkg.Class.feature" declared directly by that class.
const Feature* feature_at(const Metamodel& mm, std::string_view path);
Feature& feature_at(Metamodel& mm, std::string_view path);
/// Class at "pkg.Class"; the mutable variant throws DanglingRef.
const Classifier* class_at(const Metamodel& mm, std::string_view path);
Classifier& class_at(Metamodel& mm, std::string_view path);
/// "pkg" of "pkg.Class[.member]".
std::string package_of(std::string_view path);
/// True when `name` is free as a member of `class_path` and all its subclasses.
bool member_name_free(const Metamodel& mm, std::string_view class_path, std::string_view name);
bool is_direct_supertype(const Metamodel& mm, std::string_view cls, std::string_view sup);
/// Paths of features (anywhere) whose type is `type`.
std::vector<std::string> features_typed_by(const Metamodel& mm, std::string_view type);
/// Path of every feature of the metamodel, in declaration order.
std::vector<std::string> all_feature_paths(const Metamodel& mm);
/// The first feature-name clash in the closure of `cls` or any subclass, as
/// a message; nullopt when clean.
std::optional<std::string> find_name_clash(const Metamodel& mm, std::string_view cls);
/// Features entering the closure of some instantiable class under `cls`
/// when moving from `before` to `after`.
struct EnteringFeature {
  std::string class_name;
  OwnedFeature feature;
};
std::vector<EnteringFeature> entering_features(const Metamodel& before, const Metamodel& after,
                                               std::string_view cls);
/// Features in the closure of `cls` in `before` but not in `after`.
std::vector<OwnedFeature> leaving_features(const Metamodel& before, const Metamodel& after,
                                           std::string_view cls);
bool mandatory_without_default(const Feature& f);
Annotation& ensure_annotation(Annotations& annotations, std::string_view source);
void remove_annotation(Annotations& annotations, std::string_view source);

// ---------------------------------------------------------------------------
// Instance helpers

/// Default value of an attribute as a slot value; nullopt if none.
std::optional<Value> default_value(const Metamodel& mm, const Feature& f);
/// Gives every instance (in `after`) of a class that gained mandatory
/// features with defaults those default values.
void initialize_entering_defaults(const Metamodel& before, const Metamodel& after, ResourceSet& set,
                                  std::string_view cls);
/// Deletes subtrees, first checking that no surviving slot drops below its
/// lower bound in `mm`. Throws MigrationError("LowerBoundBroken").
void delete_subtrees(ResourceSet& set, const Metamodel& mm, const std::vector<ObjectKey>& roots,
                     std::string_view op);
/// Removes the slot `feature` from every given object, deleting contained
/// children when `containment`.
void drop_slot(ResourceSet& set, const Metamodel& mm, const std::vector<ObjectKey>& objects,
               std::string_view feature, bool containment, std::string_view op);
/// Every reference and child value must still match its feature type in
/// `mm`. Throws MigrationError("ReferenceTypeBroken").
void require_reference_types(const ResourceSet& set, const Metamodel& mm, std::string_view op);
[[noreturn]] void migration_error(std::string_view op, const std::string& reason, const std::string& message);

}  // namespace coupevo::detail
