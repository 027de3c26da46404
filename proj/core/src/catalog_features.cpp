// Operations on features and operation signatures.

#include <algorithm>
#include <map>

#include "catalog_impl.hpp"
#include "coupevo/literal.hpp"
#include "coupevo/model_edit.hpp"

namespace coupevo::detail {

namespace {

using PT = ParamType;

constexpr std::string_view kGenModel = "genmodel";
constexpr std::string_view kSuppressed = "suppressedSetVisibility";

bool bounds_valid(int lower, int upper) {
  return lower >= 0 && (upper == kUnbounded || (upper >= 1 && upper >= lower));
}

/// new bounds admit every multiplicity the old ones did
bool bounds_widen(int old_lower, int old_upper, int new_lower, int new_upper) {
  const bool upper_ok = new_upper == kUnbounded || (old_upper != kUnbounded && new_upper >= old_upper);
  return new_lower <= old_lower && upper_ok;
}

std::string bounds_text(int lower, int upper) {
  return "[" + std::to_string(lower) + ".." + (upper == kUnbounded ? std::string("*") : std::to_string(upper)) + "]";
}

/// Resolves a feature path for a check; records UnknownFeature.
const Feature* checked_feature(const Metamodel& mm, const std::string& path, Checks& c) {
  const Feature* f = feature_at(mm, path);
  c.check("UnknownFeature", f != nullptr, "no feature '" + path + "'");
  return f;
}

std::vector<ObjectKey> owner_instances(const ResourceSet& set, const Metamodel& mm, const std::string& feature_path) {
  return instances_of(set, mm, parent_path(feature_path));
}

bool suppressed(const Feature& f) {
  const Annotation* a = find_annotation(f.annotations, kGenModel);
  if (a == nullptr) return false;
  auto it = a->details.find(std::string(kSuppressed));
  return it != a->details.end() && it->second == "true";
}

// ---------------------------------------------------------------------------

std::unique_ptr<CoupledOperation> create_attribute() {
  return make_operation(
      {"Create Attribute",
       {param("class", PT::ElementRef, "owning class"), param("name", PT::String, "attribute name"),
        param("type", PT::ElementRef, "datatype or enumeration"), param("lower", PT::Integer, "lower bound (0)", false),
        param("upper", PT::Integer, "upper bound (1, -1 for *)", false),
        param("defaultValue", PT::Literal, "default literal, required when lower >= 1", false),
        param("identifier", PT::Flag, "identifier attribute", false)},
       {"UnknownClass", "NameTaken", "InvalidType", "InvalidBounds", "InvalidDefault", "MandatoryWithoutDefault",
        "IdentifierShape"},
       "Adds an attribute; mandatory attributes are initialized with their default."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), name = a.str("name"), type = a.str("type");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         c.check("NameTaken", !name.empty() && member_name_free(mm, cls, name), "'" + name + "' is already a member of " + cls);
         const Classifier* t = mm.find_classifier(type);
         c.check("InvalidType", t != nullptr && !t->is_class(), "'" + type + "' is not a datatype or enumeration");
         const int lower = a.integer("lower", 0), upper = a.integer("upper", 1);
         c.check("InvalidBounds", bounds_valid(lower, upper), "bounds " + bounds_text(lower, upper));
         const auto def = a.opt_str("defaultValue");
         c.check("InvalidDefault", !def || (t != nullptr && valid_default(mm, type, *def)),
                 "'" + def.value_or("") + "' is not a value of " + type);
         c.check("MandatoryWithoutDefault", lower == 0 || def.has_value(), "a mandatory attribute needs a default value");
         const bool scalar = t != nullptr && t->is_datatype() &&
                             (t->data_kind == DataKind::String || t->data_kind == DataKind::Integer);
         c.check("IdentifierShape", !a.flag("identifier") || (scalar && upper == 1 && lower == 0),
                 "a new identifier must be an optional single-valued string or integer");
       },
       [](Metamodel& mm, const Args& a) {
         Feature f;
         f.kind = FeatureKind::Attribute;
         f.name = a.str("name");
         f.type = a.str("type");
         f.lower = a.integer("lower", 0);
         f.upper = a.integer("upper", 1);
         f.default_value = a.opt_str("defaultValue");
         f.identifier = a.flag("identifier");
         class_at(mm, a.str("class")).features.push_back(std::move(f));
       },
       [](const Metamodel&, const Metamodel& after, ResourceSet& set, const Args& a) {
         const Feature& f = *feature_at(after, a.str("class") + "." + a.str("name"));
         if (f.lower == 0) return;
         const Value value = *default_value(after, f);
         for (const auto& key : instances_of(set, after, a.str("class"))) {
           set_slot(set, key, f.name, ValueList(static_cast<std::size_t>(f.lower), value));
         }
       }});
}

std::unique_ptr<CoupledOperation> create_reference() {
  return make_operation(
      {"Create Reference",
       {param("class", PT::ElementRef, "owning class"), param("name", PT::String, "reference name"),
        param("type", PT::ElementRef, "target class"), param("lower", PT::Integer, "lower bound, must be 0", false),
        param("upper", PT::Integer, "upper bound (1, -1 for *)", false),
        param("containment", PT::Flag, "containment reference", false)},
       {"UnknownClass", "NameTaken", "InvalidType", "InvalidBounds", "MandatoryReference"},
       "Adds an optional reference."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), name = a.str("name"), type = a.str("type");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         c.check("NameTaken", !name.empty() && member_name_free(mm, cls, name), "'" + name + "' is already a member of " + cls);
         c.check("InvalidType", class_at(mm, type) != nullptr, "'" + type + "' is not a class");
         const int lower = a.integer("lower", 0), upper = a.integer("upper", 1);
         c.check("InvalidBounds", bounds_valid(lower, upper), "bounds " + bounds_text(lower, upper));
         c.check("MandatoryReference", lower == 0, "a new reference cannot be mandatory; attach a custom migration instead");
       },
       [](Metamodel& mm, const Args& a) {
         Feature f;
         f.kind = FeatureKind::Reference;
         f.name = a.str("name");
         f.type = a.str("type");
         f.lower = a.integer("lower", 0);
         f.upper = a.integer("upper", 1);
         f.containment = a.flag("containment");
         class_at(mm, a.str("class")).features.push_back(std::move(f));
       },
       {}});
}

std::unique_ptr<CoupledOperation> delete_feature() {
  return make_operation(
      {"Delete Feature",
       {param("feature", PT::ElementRef, "feature to delete")},
       {"UnknownFeature", "OppositeFeature"},
       "Deletes a feature together with its values (and contained objects)."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("feature"), c);
         if (f == nullptr) return;
         c.check("OppositeFeature", !f->opposite, a.str("feature") + " has an opposite");
       },
       [](Metamodel& mm, const Args& a) {
         auto& fs = class_at(mm, parent_path(a.str("feature"))).features;
         const auto name = last_segment(a.str("feature"));
         fs.erase(std::remove_if(fs.begin(), fs.end(), [&](const Feature& f) { return f.name == name; }), fs.end());
       },
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto path = a.str("feature");
         const Feature& f = *feature_at(before, path);
         drop_slot(set, after, owner_instances(set, before, path), f.name, f.containment, "Delete Feature");
       }});
}

std::unique_ptr<CoupledOperation> delete_operation() {
  return make_operation(
      {"Delete Operation",
       {param("operation", PT::ElementRef, "operation signature to delete")},
       {"OperationMissing"},
       "Deletes an operation signature."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto path = a.str("operation");
         const Classifier* owner = class_at(mm, parent_path(path));
         c.check("OperationMissing", owner != nullptr && owner->find_operation(last_segment(path)) != nullptr,
                 "no operation '" + path + "'");
       },
       [](Metamodel& mm, const Args& a) {
         auto& ops = class_at(mm, parent_path(a.str("operation"))).operations;
         const auto name = last_segment(a.str("operation"));
         ops.erase(std::remove_if(ops.begin(), ops.end(), [&](const auto& o) { return o.name == name; }), ops.end());
       },
       {}});
}

std::unique_ptr<CoupledOperation> drop_attribute_identifier() {
  return make_operation(
      {"Drop Attribute Identifier",
       {param("attribute", PT::ElementRef, "identifier attribute")},
       {"UnknownFeature", "NotAttribute", "NotIdentifier"},
       "Clears the identifier flag of an attribute."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("attribute"), c);
         if (f == nullptr) return;
         if (!c.check("NotAttribute", f->is_attribute(), a.str("attribute") + " is a reference")) return;
         c.check("NotIdentifier", f->identifier, a.str("attribute") + " is not an identifier");
       },
       [](Metamodel& mm, const Args& a) { feature_at(mm, a.str("attribute")).identifier = false; },
       {}});
}

bool attribute_type_generalizes(const Metamodel& mm, const std::string& from, const std::string& to) {
  if (from == to) return true;
  const Classifier* a = mm.find_classifier(from);
  const Classifier* b = mm.find_classifier(to);
  if (a == nullptr || b == nullptr || !a->is_datatype() || !b->is_datatype()) return false;
  return a->data_kind == b->data_kind || (a->data_kind == DataKind::Integer && b->data_kind == DataKind::Float);
}

void adapt_generalize(Feature& f, const Args& a) {
  if (auto type = a.opt_str("type")) f.type = *type;
  f.lower = a.integer("lower", f.lower);
  f.upper = a.integer("upper", f.upper);
}

std::unique_ptr<CoupledOperation> generalize_attribute() {
  return make_operation(
      {"Generalize Attribute",
       {param("attribute", PT::ElementRef, "attribute to widen"),
        param("type", PT::ElementRef, "wider datatype", false), param("lower", PT::Integer, "new lower bound", false),
        param("upper", PT::Integer, "new upper bound (-1 for *)", false)},
       {"UnknownFeature", "NotAttribute", "TypeNotGeneralized", "BoundsNarrowed", "IdentifierMultiValued"},
       "Widens the type or multiplicity of an attribute; existing values stay valid."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("attribute"), c);
         if (f == nullptr) return;
         if (!c.check("NotAttribute", f->is_attribute(), a.str("attribute") + " is a reference")) return;
         const auto type = a.opt_str("type").value_or(f->type);
         c.check("TypeNotGeneralized", attribute_type_generalizes(mm, f->type, type),
                 type + " does not generalize " + f->type);
         const int lower = a.integer("lower", f->lower), upper = a.integer("upper", f->upper);
         c.check("BoundsNarrowed", bounds_valid(lower, upper) && bounds_widen(f->lower, f->upper, lower, upper),
                 bounds_text(lower, upper) + " does not widen " + bounds_text(f->lower, f->upper));
         c.check("IdentifierMultiValued", !f->identifier || upper == 1, "an identifier must stay single-valued");
       },
       [](Metamodel& mm, const Args& a) { adapt_generalize(feature_at(mm, a.str("attribute")), a); },
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto path = a.str("attribute");
         const Classifier* from = before.find_classifier(feature_at(before, path)->type);
         const Classifier* to = after.find_classifier(feature_at(after, path)->type);
         if (from->data_kind != DataKind::Integer || to->data_kind != DataKind::Float) return;
         const auto name = last_segment(path);
         for (const auto& key : owner_instances(set, before, path)) {
           if (ValueList* values = require_object(set, key).slot(name)) {
             for (auto& v : *values) v.primitive = v.primitive.get<double>();
           }
         }
       }});
}

std::unique_ptr<CoupledOperation> generalize_reference() {
  return make_operation(
      {"Generalize Reference",
       {param("reference", PT::ElementRef, "reference to widen"),
        param("type", PT::ElementRef, "supertype of the current type", false),
        param("lower", PT::Integer, "new lower bound", false),
        param("upper", PT::Integer, "new upper bound (-1 for *)", false)},
       {"UnknownFeature", "NotReference", "TypeNotGeneralized", "BoundsNarrowed", "OppositeTypeChange"},
       "Widens the type or multiplicity of a reference; existing values stay valid."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("reference"), c);
         if (f == nullptr) return;
         if (!c.check("NotReference", f->is_reference(), a.str("reference") + " is an attribute")) return;
         const auto type = a.opt_str("type").value_or(f->type);
         c.check("TypeNotGeneralized", class_at(mm, type) != nullptr && is_subtype(mm, f->type, type),
                 type + " is not a supertype of " + f->type);
         const int lower = a.integer("lower", f->lower), upper = a.integer("upper", f->upper);
         c.check("BoundsNarrowed", bounds_valid(lower, upper) && bounds_widen(f->lower, f->upper, lower, upper),
                 bounds_text(lower, upper) + " does not widen " + bounds_text(f->lower, f->upper));
         c.check("OppositeTypeChange", !f->opposite || type == f->type, "the type of a reference with an opposite is fixed");
       },
       [](Metamodel& mm, const Args& a) { adapt_generalize(feature_at(mm, a.str("reference")), a); },
       {}});
}

std::unique_ptr<CoupledOperation> make_reference_containment() {
  return make_operation(
      {"Make Reference Containment",
       {param("reference", PT::ElementRef, "non-containment reference")},
       {"UnknownFeature", "NotReference", "AlreadyContainment", "OppositeContainment"},
       "Turns a reference into a containment and moves every referenced object under its referrer."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("reference"), c);
         if (f == nullptr) return;
         if (!c.check("NotReference", f->is_reference(), a.str("reference") + " is an attribute")) return;
         c.check("AlreadyContainment", !f->containment, a.str("reference") + " is already a containment");
         const Feature* opp = f->opposite ? feature_at(mm, *f->opposite) : nullptr;
         c.check("OppositeContainment", opp == nullptr || !opp->containment, "the opposite is a containment");
       },
       [](Metamodel& mm, const Args& a) { feature_at(mm, a.str("reference")).containment = true; },
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         constexpr std::string_view op = "Make Reference Containment";
         const auto path = a.str("reference");
         const auto name = last_segment(path);
         std::map<ObjectKey, ObjectKey> claimed;
         for (const auto& owner : owner_instances(set, before, path)) {
           const ValueList* values = set.find(owner)->slot(name);
           if (values == nullptr) continue;
           for (const auto& v : *values) {
             auto [it, inserted] = claimed.emplace(v.target, owner);
             if (!inserted) {
               migration_error(op, "SharedTarget",
                               to_string(v.target) + " is referenced by both " + to_string(it->second) + " and " +
                                   to_string(owner));
             }
           }
         }
         // One value at a time: relocation may rename objects anywhere in the set.
         while (true) {
           std::optional<std::pair<ObjectKey, std::size_t>> next;
           for (const auto& owner : owner_instances(set, after, path)) {
             const ValueList* values = set.find(owner)->slot(name);
             if (values == nullptr) continue;
             for (std::size_t i = 0; i < values->size() && !next; ++i) {
               if ((*values)[i].kind == ValueKind::Ref) next.emplace(owner, i);
             }
             if (next) break;
           }
           if (!next) break;
           const auto& [owner, index] = *next;
           const ObjectKey target = set.find(owner)->slot(name)->at(index).target;
           if (contains_transitively(set, target, owner)) {
             migration_error(op, "ContainmentCycle", to_string(owner) + " is contained in its target " + to_string(target));
           }
           if (auto old = container_of(set, target)) {
             const MObject* holder = set.find(old->container);
             auto owned = find_feature(after, holder->class_name, old->feature);
             if (owned && static_cast<int>(holder->slot(old->feature)->size()) - 1 < owned->feature->lower) {
               migration_error(op, "LowerBoundBroken",
                               "moving " + to_string(target) + " empties mandatory " + to_string(old->container) + "." +
                                   old->feature);
             }
           }
           detach(set, target);
           const ObjectKey moved = relocate(set, target, owner.resource);
           set.find(owner)->slot(name)->at(index) = Value::child(moved);
         }
       }});
}

std::unique_ptr<CoupledOperation> not_changeable_to_ssv() {
  return make_operation(
      {"Not Changeable to Suppressed Set Visibility",
       {param("feature", PT::ElementRef, "non-changeable feature")},
       {"UnknownFeature", "AlreadyChangeable", "AlreadySuppressed"},
       "Makes a feature changeable and hides its setter through a generator annotation."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("feature"), c);
         if (f == nullptr) return;
         c.check("AlreadyChangeable", !f->changeable, a.str("feature") + " is changeable");
         c.check("AlreadySuppressed", !suppressed(*f), a.str("feature") + " already suppresses its setter");
       },
       [](Metamodel& mm, const Args& a) {
         Feature& f = feature_at(mm, a.str("feature"));
         f.changeable = true;
         ensure_annotation(f.annotations, kGenModel).details[std::string(kSuppressed)] = "true";
       },
       {}});
}

std::unique_ptr<CoupledOperation> ssv_to_not_changeable() {
  return make_operation(
      {"Suppressed Set Visibility to Not Changeable",
       {param("feature", PT::ElementRef, "feature with a suppressed setter")},
       {"UnknownFeature", "NotChangeable", "NotSuppressed"},
       "Inverse of Not Changeable to Suppressed Set Visibility."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("feature"), c);
         if (f == nullptr) return;
         c.check("NotChangeable", f->changeable, a.str("feature") + " is already not changeable");
         c.check("NotSuppressed", suppressed(*f), a.str("feature") + " does not suppress its setter");
       },
       [](Metamodel& mm, const Args& a) {
         Feature& f = feature_at(mm, a.str("feature"));
         f.changeable = false;
         Annotation* ann = find_annotation(f.annotations, kGenModel);
         ann->details.erase(std::string(kSuppressed));
         if (ann->details.empty()) remove_annotation(f.annotations, kGenModel);
       },
       {}});
}

void adapt_push_down(Metamodel& mm, const Args& a) {
  const auto path = a.str("feature");
  auto& fs = class_at(mm, parent_path(path)).features;
  auto it = std::find_if(fs.begin(), fs.end(), [&](const Feature& f) { return f.name == last_segment(path); });
  const Feature moved = *it;
  fs.erase(it);
  for (const auto& target : a.list("targets")) {
    auto& tf = class_at(mm, target).features;
    tf.insert(tf.begin(), moved);
  }
}

std::unique_ptr<CoupledOperation> push_down_feature() {
  return make_operation(
      {"Push Down Feature",
       {param("feature", PT::ElementRef, "feature to push down"),
        param("targets", PT::ElementRefList, "direct subclasses receiving a copy")},
       {"UnknownFeature", "NoTargets", "NotADirectSubclass", "OppositeFeature", "FeatureNameClash"},
       "Moves a feature from a class into some of its direct subclasses."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto path = a.str("feature");
         const Feature* f = checked_feature(mm, path, c);
         if (f == nullptr) return;
         const auto targets = a.list("targets");
         c.check("NoTargets", !targets.empty(), "no target classes given");
         const auto owner = parent_path(path);
         for (std::size_t i = 0; i < targets.size(); ++i) {
           const bool unique = std::find(targets.begin(), targets.begin() + static_cast<long>(i), targets[i]) == targets.begin() + static_cast<long>(i);
           c.check("NotADirectSubclass", unique && is_direct_supertype(mm, targets[i], owner),
                   targets[i] + " is not a distinct direct subclass of " + owner);
         }
         c.check("NotADirectSubclass", true);
         c.check("OppositeFeature", !f->opposite, path + " has an opposite");
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_push_down(after, a);
         for (const auto& t : targets) {
           auto clash = find_name_clash(after, t);
           if (!c.check("FeatureNameClash", !clash, clash.value_or(""))) return;
         }
         c.check("FeatureNameClash", true);
       },
       adapt_push_down,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto path = a.str("feature");
         const auto name = last_segment(path);
         const auto targets = a.list("targets");
         for (const auto& key : owner_instances(set, before, path)) {
           const MObject& obj = *set.find(key);
           const bool kept = std::any_of(targets.begin(), targets.end(),
                                         [&](const auto& t) { return is_subtype(after, obj.class_name, t); });
           if (!kept && obj.slot(name) != nullptr) {
             migration_error("Push Down Feature", "ValueWouldBeLost",
                             to_string(key) + " (" + obj.class_name + ") carries a value for '" + name + "'");
           }
         }
       }});
}

std::unique_ptr<CoupledOperation> specialize_reference_type() {
  return make_operation(
      {"Specialize Reference Type",
       {param("reference", PT::ElementRef, "reference to narrow"),
        param("type", PT::ElementRef, "strict subclass of the current type")},
       {"UnknownFeature", "NotReference", "UnknownType", "TypeNotSpecialized", "OppositeFeature"},
       "Narrows the type of a reference; every existing value must already fit."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("reference"), c);
         if (f == nullptr) return;
         if (!c.check("NotReference", f->is_reference(), a.str("reference") + " is an attribute")) return;
         const auto type = a.str("type");
         if (!c.check("UnknownType", class_at(mm, type) != nullptr, "no class '" + type + "'")) return;
         c.check("TypeNotSpecialized", type != f->type && is_subtype(mm, type, f->type),
                 type + " is not a subclass of " + f->type);
         c.check("OppositeFeature", !f->opposite, a.str("reference") + " has an opposite");
       },
       [](Metamodel& mm, const Args& a) { feature_at(mm, a.str("reference")).type = a.str("type"); },
       [](const Metamodel&, const Metamodel& after, ResourceSet& set, const Args&) {
         require_reference_types(set, after, "Specialize Reference Type");
       }});
}

std::unique_ptr<CoupledOperation> make_feature_volatile() {
  return make_operation(
      {"Make Feature Volatile",
       {param("feature", PT::ElementRef, "feature whose values become derived")},
       {"UnknownFeature", "AlreadyVolatile", "OppositeFeature"},
       "Makes a feature volatile and not changeable; stored values are deleted."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Feature* f = checked_feature(mm, a.str("feature"), c);
         if (f == nullptr) return;
         c.check("AlreadyVolatile", !f->is_volatile, a.str("feature") + " is already volatile");
         c.check("OppositeFeature", !f->opposite, a.str("feature") + " has an opposite");
       },
       [](Metamodel& mm, const Args& a) {
         Feature& f = feature_at(mm, a.str("feature"));
         f.is_volatile = true;
         f.changeable = false;
       },
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto path = a.str("feature");
         const Feature& f = *feature_at(before, path);
         drop_slot(set, after, owner_instances(set, before, path), f.name, f.containment, "Make Feature Volatile");
       }});
}

}  // namespace

void add_feature_operations(OperationList& out) {
  out.push_back(create_attribute());
  out.push_back(create_reference());
  out.push_back(delete_feature());
  out.push_back(delete_operation());
  out.push_back(drop_attribute_identifier());
  out.push_back(generalize_attribute());
  out.push_back(generalize_reference());
  out.push_back(make_reference_containment());
  out.push_back(not_changeable_to_ssv());
  out.push_back(ssv_to_not_changeable());
  out.push_back(push_down_feature());
  out.push_back(specialize_reference_type());
  out.push_back(make_feature_volatile());
}

}  // namespace coupevo::detail
