#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "catalog_impl.hpp"
#include "coupevo/conformance.hpp"
#include "coupevo/literal.hpp"
#include "coupevo/model_edit.hpp"

namespace coupevo {

using nlohmann::json;
using namespace detail;

namespace {

// Catalog order: structural operations, then the annotation, enumeration
// and delegation groups.
constexpr std::string_view kCatalogOrder[] = {
    "Add Super Type",
    "Remove Super Type",
    "Create Attribute",
    "Create Class",
    "Create Reference",
    "Delete Feature",
    "Delete Operation",
    "Document Metamodel Element",
    "Drop Attribute Identifier",
    "Extract Super Class",
    "Extract Subclass",
    "Generalize Attribute",
    "Generalize Reference",
    "Inline Super Class",
    "Make Class Abstract when Interface",
    "Make Reference Containment",
    "Not Changeable to Suppressed Set Visibility",
    "Suppressed Set Visibility to Not Changeable",
    "Push Down Feature",
    "Specialize Reference Type",
    "Specialize Super Type",
    "Unfold Super Class",
    "Change Namespace URI",
    "Create Annotation",
    "Delete Annotation",
    "Move Annotation",
    "Create Enumeration",
    "Create GMF Constraint",
    "Change GMF Constraint",
    "Make Feature Volatile",
    "Replace Enumeration",
    "Enumeration to Sub Classes",
    "Sub Classes to Enumeration",
    "Inheritance to Delegation",
};

constexpr std::string_view kWellFormed = "WellFormedResult";

struct Registry {
  OperationList ops;
  std::vector<OperationSpec> specs;

  Registry() {
    OperationList all;
    add_structure_operations(all);
    add_feature_operations(all);
    add_annotation_operations(all);
    add_enumeration_operations(all);
    for (auto name : kCatalogOrder) {
      auto it = std::find_if(all.begin(), all.end(), [&](const auto& op) { return op && op->spec().name == name; });
      if (it == all.end()) throw std::logic_error("catalog lacks " + std::string(name));
      ops.push_back(std::move(*it));
      specs.push_back(ops.back()->spec());
    }
    for (const auto& op : all) {
      if (op) throw std::logic_error("operation outside the catalog order: " + op->spec().name);
    }
  }

  const CoupledOperation& get(std::string_view name) const {
    for (const auto& op : ops) {
      if (op->spec().name == name) return *op;
    }
    throw Error(ErrorCode::UnknownOperation, "unknown operation '" + std::string(name) + "'");
  }
};

const Registry& registry() {
  static const Registry instance;
  return instance;
}

bool is_string_array(const json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); });
}

void validate_args(const OperationSpec& spec, const json& args) {
  auto mismatch = [&](const std::string& message) {
    throw Error(ErrorCode::ArgTypeMismatch, spec.name + ": " + message);
  };
  if (!args.is_object()) mismatch("arguments must be an object");
  for (const auto& [key, value] : args.items()) {
    const ParamSpec* p = spec.find_param(key);
    if (p == nullptr) mismatch("unknown parameter '" + key + "'");
    bool ok = false;
    switch (p->type) {
      case ParamType::ElementRef:
      case ParamType::String:
      case ParamType::Literal: ok = value.is_string(); break;
      case ParamType::ElementRefList:
      case ParamType::StringList: ok = is_string_array(value); break;
      case ParamType::Flag: ok = value.is_boolean(); break;
      case ParamType::Integer: ok = value.is_number_integer(); break;
      case ParamType::LiteralMap:
        ok = value.is_object() &&
             std::all_of(value.begin(), value.end(), [](const json& e) { return e.is_string(); });
        break;
    }
    if (!ok) mismatch("parameter '" + key + "' expects " + std::string(to_string(p->type)));
  }
  for (const auto& p : spec.params) {
    if (p.required && !args.contains(p.name)) mismatch("missing parameter '" + p.name + "'");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(ParamType type) noexcept {
  switch (type) {
    case ParamType::ElementRef: return "element-ref";
    case ParamType::ElementRefList: return "element-ref list";
    case ParamType::String: return "string";
    case ParamType::StringList: return "string list";
    case ParamType::Literal: return "literal";
    case ParamType::Flag: return "flag";
    case ParamType::Integer: return "integer";
    case ParamType::LiteralMap: return "literal map";
  }
  return "?";
}

const ParamSpec* OperationSpec::find_param(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

bool all_satisfied(const std::vector<ConstraintResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.satisfied; });
}

std::string format_constraints(const std::vector<ConstraintResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    out << "  " << (r.satisfied ? "ok  " : "FAIL") << " " << r.constraint;
    if (!r.message.empty()) out << ": " << r.message;
    out << "\n";
  }
  return out.str();
}

const std::vector<OperationSpec>& list_operations() { return registry().specs; }

const OperationSpec* find_operation(std::string_view name) {
  for (const auto& spec : registry().specs) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

json parse_arg_text(const ParamSpec& param, std::string_view text) {
  auto bad = [&]() -> json {
    throw Error(ErrorCode::ArgTypeMismatch, "parameter '" + param.name + "' expects " +
                                                std::string(to_string(param.type)) + ", got '" +
                                                std::string(text) + "'");
  };
  switch (param.type) {
    case ParamType::ElementRef:
    case ParamType::String:
    case ParamType::Literal: return std::string(text);
    case ParamType::ElementRefList:
    case ParamType::StringList: return split_list(text);
    case ParamType::Flag:
      if (text == "true" || text == "yes" || text == "1") return true;
      if (text == "false" || text == "no" || text == "0") return false;
      return bad();
    case ParamType::Integer: {
      if (text == "*") return kUnbounded;
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return bad();
      return value;
    }
    case ParamType::LiteralMap: {
      json out = json::object();
      for (const auto& entry : split_list(text)) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) return bad();
        out[trim(std::string_view(entry).substr(0, colon))] = trim(std::string_view(entry).substr(colon + 1));
      }
      return out;
    }
  }
  return bad();
}

std::vector<ConstraintResult> check_applicability(const OperationApplication& application,
                                                  const Metamodel& metamodel) {
  const CoupledOperation& op = registry().get(application.op);
  validate_args(op.spec(), application.args);
  const Args args(application.args);
  Checks checks(op.spec());
  op.check(metamodel, args, checks);
  if (checks.passed()) {
    try {
      Metamodel copy = metamodel;
      op.adapt(copy, args);
      const auto violations = validate_metamodel(copy);
      checks.check(kWellFormed, violations.empty(),
                   violations.empty() ? std::string()
                                      : violations.front().element + ": " + violations.front().message + " (" +
                                            violations.front().rule + ")");
    } catch (const Error& e) {
      checks.check(kWellFormed, false, e.what());
    }
  }
  return checks.finish();
}

namespace {

const CoupledOperation& checked_operation(const OperationApplication& application, const Metamodel& metamodel) {
  auto results = check_applicability(application, metamodel);
  if (!all_satisfied(results)) {
    std::vector<ConstraintResult> failed;
    std::copy_if(results.begin(), results.end(), std::back_inserter(failed), [](const auto& r) { return !r.satisfied; });
    throw Error(ErrorCode::ConstraintViolation,
                application.op + " is not applicable:\n" + format_constraints(failed), failed.front().constraint);
  }
  return registry().get(application.op);
}

}  // namespace

Metamodel adapt_metamodel(const OperationApplication& application, const Metamodel& metamodel) {
  const CoupledOperation& op = checked_operation(application, metamodel);
  Metamodel out = metamodel;
  op.adapt(out, Args(application.args));
  return out;
}

CoupledResult apply_coupled(const OperationApplication& application, const Metamodel& metamodel,
                            const ResourceSet* set) {
  const CoupledOperation& op = checked_operation(application, metamodel);
  const Args args(application.args);
  CoupledResult out{metamodel, std::nullopt};
  op.adapt(out.metamodel, args);
  if (auto v = validate_metamodel(out.metamodel); !v.empty()) {
    throw Error(ErrorCode::PostConformance,
                application.op + " produced an invalid metamodel: " + v.front().element + ": " + v.front().message);
  }
  if (set != nullptr) {
    ResourceSet model = *set;
    op.migrate(metamodel, out.metamodel, model, args);
    if (auto v = check_conformance(model, out.metamodel); !v.empty()) {
      throw Error(ErrorCode::PostConformance,
                  application.op + " left the model non-conforming:\n" + format_violations(v));
    }
    out.model = std::move(model);
  }
  return out;
}

// ---------------------------------------------------------------------------
// detail

namespace detail {

bool Args::has(std::string_view name) const { return args_.contains(std::string(name)); }

std::string Args::str(std::string_view name) const { return args_.at(std::string(name)).get<std::string>(); }

std::optional<std::string> Args::opt_str(std::string_view name) const {
  if (!has(name)) return std::nullopt;
  return str(name);
}

std::vector<std::string> Args::list(std::string_view name) const {
  if (!has(name)) return {};
  return args_.at(std::string(name)).get<std::vector<std::string>>();
}

bool Args::flag(std::string_view name, bool fallback) const {
  return has(name) ? args_.at(std::string(name)).get<bool>() : fallback;
}

std::optional<int> Args::opt_int(std::string_view name) const {
  if (!has(name)) return std::nullopt;
  return args_.at(std::string(name)).get<int>();
}

int Args::integer(std::string_view name, int fallback) const { return opt_int(name).value_or(fallback); }

std::map<std::string, std::string> Args::map(std::string_view name) const {
  if (!has(name)) return {};
  return args_.at(std::string(name)).get<std::map<std::string, std::string>>();
}

bool Checks::check(std::string_view constraint, bool ok, std::string message) {
  const bool declared = constraint == kWellFormed ||
                        std::find(spec_.constraints.begin(), spec_.constraints.end(), constraint) !=
                            spec_.constraints.end();
  if (!declared) throw std::logic_error(spec_.name + ": undeclared constraint " + std::string(constraint));
  auto it = results_.find(constraint);
  if (it == results_.end()) {
    results_.emplace(std::string(constraint), ConstraintResult{std::string(constraint), ok, std::move(message)});
    if (!ok) ++failed_;
  } else if (!ok && it->second.satisfied) {
    // Checked once per element: the first failure is the one reported.
    it->second = ConstraintResult{std::string(constraint), false, std::move(message)};
    ++failed_;
  }
  return ok;
}

std::vector<ConstraintResult> Checks::finish() const {
  std::vector<ConstraintResult> out;
  auto emit = [&](std::string_view name) {
    if (auto it = results_.find(name); it != results_.end()) {
      out.push_back(it->second);
    } else {
      out.push_back({std::string(name), false, "not evaluated"});
    }
  };
  for (const auto& name : spec_.constraints) emit(name);
  emit(kWellFormed);
  return out;
}

namespace {

class FunctionOperation : public CoupledOperation {
 public:
  FunctionOperation(OperationSpec spec, OperationFns fns) : CoupledOperation(std::move(spec)), fns_(std::move(fns)) {}

  void check(const Metamodel& mm, const Args& args, Checks& checks) const override { fns_.check(mm, args, checks); }
  void adapt(Metamodel& mm, const Args& args) const override { fns_.adapt(mm, args); }
  void migrate(const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& args) const override {
    if (fns_.migrate) fns_.migrate(before, after, set, args);
  }

 private:
  OperationFns fns_;
};

}  // namespace

std::unique_ptr<CoupledOperation> make_operation(OperationSpec spec, OperationFns fns) {
  return std::make_unique<FunctionOperation>(std::move(spec), std::move(fns));
}

ParamSpec param(std::string name, ParamType type, std::string doc, bool required) {
  return ParamSpec{std::move(name), type, required, std::move(doc)};
}

const Feature* feature_at(const Metamodel& mm, std::string_view path) {
  const Classifier* owner = class_at(mm, parent_path(path));
  return owner == nullptr ? nullptr : owner->find_feature(last_segment(path));
}

Feature& feature_at(Metamodel& mm, std::string_view path) {
  Feature* f = class_at(mm, parent_path(path)).find_feature(last_segment(path));
  if (f == nullptr) throw Error(ErrorCode::DanglingRef, "no feature '" + std::string(path) + "'");
  return *f;
}

const Classifier* class_at(const Metamodel& mm, std::string_view path) { return mm.find_class(path); }

Classifier& class_at(Metamodel& mm, std::string_view path) {
  Classifier* c = mm.find_class(path);
  if (c == nullptr) throw Error(ErrorCode::DanglingRef, "no class '" + std::string(path) + "'");
  return *c;
}

std::string package_of(std::string_view path) {
  const auto parts = split_path(path);
  return parts.empty() ? std::string() : parts.front();
}

bool member_name_free(const Metamodel& mm, std::string_view class_path, std::string_view name) {
  for (const auto& sub : subtype_closure(mm, class_path)) {
    for (const auto& owned : feature_closure(mm, sub)) {
      if (owned.feature->name == name) return false;
    }
    for (const auto& sup : supertype_closure(mm, sub)) {
      const Classifier* c = mm.find_class(sup);
      if (c != nullptr && c->find_operation(name) != nullptr) return false;
    }
  }
  return true;
}

bool is_direct_supertype(const Metamodel& mm, std::string_view cls, std::string_view sup) {
  const Classifier* c = mm.find_class(cls);
  return c != nullptr && std::find(c->supertypes.begin(), c->supertypes.end(), sup) != c->supertypes.end();
}

std::vector<std::string> all_feature_paths(const Metamodel& mm) {
  std::vector<std::string> out;
  for (const auto& pkg : mm.packages) {
    for (const auto& c : pkg.classifiers) {
      for (const auto& f : c.features) out.push_back(pkg.name + "." + c.name + "." + f.name);
    }
  }
  return out;
}

std::vector<std::string> features_typed_by(const Metamodel& mm, std::string_view type) {
  std::vector<std::string> out;
  for (const auto& path : all_feature_paths(mm)) {
    if (feature_at(mm, path)->type == type) out.push_back(path);
  }
  return out;
}

std::optional<std::string> find_name_clash(const Metamodel& mm, std::string_view cls) {
  for (const auto& sub : subtype_closure(mm, cls)) {
    std::map<std::string, std::string> seen;
    for (const auto& owned : feature_closure(mm, sub)) {
      auto [it, inserted] = seen.emplace(owned.feature->name, owned.owner);
      if (!inserted) {
        return sub + " would inherit '" + owned.feature->name + "' from both " + it->second + " and " + owned.owner;
      }
    }
  }
  return std::nullopt;
}

namespace {

bool has_owned(const std::vector<OwnedFeature>& closure, const OwnedFeature& f) {
  return std::any_of(closure.begin(), closure.end(), [&](const OwnedFeature& o) {
    return o.owner == f.owner && o.feature->name == f.feature->name;
  });
}

}  // namespace

std::vector<EnteringFeature> entering_features(const Metamodel& before, const Metamodel& after,
                                               std::string_view cls) {
  std::vector<EnteringFeature> out;
  for (const auto& sub : subtype_closure(after, cls)) {
    const Classifier* c = after.find_class(sub);
    if (c == nullptr || !c->instantiable()) continue;
    const auto old_closure = before.find_class(sub) ? feature_closure(before, sub) : std::vector<OwnedFeature>{};
    for (const auto& owned : feature_closure(after, sub)) {
      if (!has_owned(old_closure, owned)) out.push_back({sub, owned});
    }
  }
  return out;
}

std::vector<OwnedFeature> leaving_features(const Metamodel& before, const Metamodel& after,
                                           std::string_view cls) {
  std::vector<OwnedFeature> out;
  const auto new_closure = feature_closure(after, cls);
  for (const auto& owned : feature_closure(before, cls)) {
    if (!has_owned(new_closure, owned)) out.push_back(owned);
  }
  return out;
}

bool mandatory_without_default(const Feature& f) {
  return f.lower > 0 && !f.is_volatile && !(f.is_attribute() && f.default_value);
}

Annotation& ensure_annotation(Annotations& annotations, std::string_view source) {
  if (Annotation* a = find_annotation(annotations, source)) return *a;
  annotations.push_back(Annotation{std::string(source), {}});
  return annotations.back();
}

void remove_annotation(Annotations& annotations, std::string_view source) {
  annotations.erase(std::remove_if(annotations.begin(), annotations.end(),
                                   [&](const Annotation& a) { return a.source == source; }),
                    annotations.end());
}

std::optional<Value> default_value(const Metamodel& mm, const Feature& f) {
  if (!f.is_attribute() || !f.default_value) return std::nullopt;
  const Classifier* type = mm.find_classifier(f.type);
  if (type == nullptr) return std::nullopt;
  if (type->is_enum()) return Value::enum_literal(*f.default_value);
  if (type->is_datatype()) {
    if (auto parsed = parse_literal(type->data_kind, *f.default_value)) return Value::of(*parsed);
  }
  return std::nullopt;
}

void initialize_entering_defaults(const Metamodel& before, const Metamodel& after, ResourceSet& set,
                                  std::string_view cls) {
  std::map<std::string, std::vector<const Feature*>> per_class;
  for (const auto& entering : entering_features(before, after, cls)) {
    const Feature& f = *entering.feature.feature;
    if (f.lower > 0 && !f.is_volatile && f.is_attribute() && f.default_value) {
      per_class[entering.class_name].push_back(&f);
    }
  }
  if (per_class.empty()) return;
  for (const auto& key : instances_of(set, after, cls)) {
    MObject& obj = require_object(set, key);
    auto it = per_class.find(obj.class_name);
    if (it == per_class.end()) continue;
    for (const Feature* f : it->second) {
      if (obj.slot(f->name) != nullptr) continue;
      obj.slots[f->name] = ValueList(static_cast<std::size_t>(f->lower), *default_value(after, *f));
    }
  }
}

void delete_subtrees(ResourceSet& set, const Metamodel& mm, const std::vector<ObjectKey>& roots,
                     std::string_view op) {
  if (roots.empty()) return;
  std::set<ObjectKey> doomed;
  std::vector<ObjectKey> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    ObjectKey key = std::move(stack.back());
    stack.pop_back();
    const MObject* obj = set.find(key);
    if (obj == nullptr || !doomed.insert(key).second) continue;
    for (const auto& [name, values] : obj->slots) {
      for (const auto& v : values) {
        if (v.kind == ValueKind::Child) stack.push_back(v.target);
      }
    }
  }
  for (const auto& r : set.resources) {
    for (const auto& [id, obj] : r.objects()) {
      if (doomed.count({r.uri(), id})) continue;
      for (const auto& [name, values] : obj.slots) {
        const auto lost = std::count_if(values.begin(), values.end(), [&](const Value& v) {
          return v.is_object_value() && doomed.count(v.target);
        });
        if (lost == 0) continue;
        auto owned = find_feature(mm, obj.class_name, name);
        if (owned && !owned->feature->is_volatile &&
            static_cast<int>(values.size() - lost) < owned->feature->lower) {
          migration_error(op, "LowerBoundBroken",
                          "deleting objects would leave " + r.uri() + "#" + id + "." + name + " below its lower bound " +
                              std::to_string(owned->feature->lower));
        }
      }
    }
  }
  for (const auto& key : roots) {
    if (set.find(key) != nullptr) delete_object(set, key);
  }
}

void drop_slot(ResourceSet& set, const Metamodel& mm, const std::vector<ObjectKey>& objects,
               std::string_view feature, bool containment, std::string_view op) {
  std::vector<ObjectKey> children;
  for (const auto& key : objects) {
    MObject* obj = set.find(key);
    if (obj == nullptr) continue;  // gone with an earlier dropped subtree
    auto it = obj->slots.find(std::string(feature));
    if (it == obj->slots.end()) continue;
    if (containment) {
      for (const auto& v : it->second) {
        if (v.kind == ValueKind::Child) children.push_back(v.target);
      }
    }
    obj->slots.erase(it);
  }
  delete_subtrees(set, mm, children, op);
}

void require_reference_types(const ResourceSet& set, const Metamodel& mm, std::string_view op) {
  std::vector<std::string> offenders;
  for (const auto& r : set.resources) {
    for (const auto& [id, obj] : r.objects()) {
      for (const auto& [name, values] : obj.slots) {
        auto owned = find_feature(mm, obj.class_name, name);
        if (!owned || !owned->feature->is_reference()) continue;
        for (const auto& v : values) {
          if (!v.is_object_value()) continue;
          const MObject* target = set.find(v.target);
          if (target != nullptr && mm.find_class(target->class_name) != nullptr &&
              !is_subtype(mm, target->class_name, owned->feature->type)) {
            offenders.push_back(r.uri() + "#" + id + "." + name + " -> " + to_string(v.target) + " (" +
                                target->class_name + ")");
          }
        }
      }
    }
  }
  if (offenders.empty()) return;
  std::string message = "values no longer match their reference type:";
  for (std::size_t i = 0; i < offenders.size() && i < 5; ++i) message += "\n  " + offenders[i];
  if (offenders.size() > 5) message += "\n  ... " + std::to_string(offenders.size() - 5) + " more";
  migration_error(op, "ReferenceTypeBroken", message);
}

void migration_error(std::string_view op, const std::string& reason, const std::string& message) {
  throw Error(ErrorCode::MigrationError, std::string(op) + ": " + message, reason);
}

}  // namespace detail

}  // namespace coupevo
