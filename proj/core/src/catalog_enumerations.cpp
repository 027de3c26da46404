// Enumerations and the enumeration/subclass conversions.

#include <algorithm>
#include <cctype>
#include <set>

#include "catalog_impl.hpp"
#include "coupevo/model_edit.hpp"

namespace coupevo::detail {

namespace {

using PT = ParamType;

bool classifier_taken(const Metamodel& mm, const std::string& path) {
  const auto parts = split_path(path);
  if (parts.size() != 2) return true;
  const Package* p = mm.find_package(parts[0]);
  return p == nullptr || p->find_classifier(parts[1]) != nullptr;
}

void erase_classifier(Metamodel& mm, const std::string& path) {
  auto& cs = mm.find_package(package_of(path))->classifiers;
  const auto name = last_segment(path);
  cs.erase(std::remove_if(cs.begin(), cs.end(), [&](const Classifier& c) { return c.name == name; }), cs.end());
}

std::unique_ptr<CoupledOperation> create_enumeration() {
  return make_operation(
      {"Create Enumeration",
       {param("package", PT::ElementRef, "owning package"), param("name", PT::String, "enumeration name"),
        param("literals", PT::StringList, "literals in order", false)},
       {"UnknownPackage", "NameTaken", "DuplicateLiteral"},
       "Creates an enumeration."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto pkg = a.str("package");
         if (!c.check("UnknownPackage", mm.find_package(pkg) != nullptr, "no package '" + pkg + "'")) return;
         c.check("NameTaken", !classifier_taken(mm, pkg + "." + a.str("name")), pkg + "." + a.str("name") + " already exists");
         const auto lits = a.list("literals");
         const std::set<std::string> unique(lits.begin(), lits.end());
         c.check("DuplicateLiteral", unique.size() == lits.size(), "literals must be distinct");
       },
       [](Metamodel& mm, const Args& a) {
         Classifier e;
         e.kind = ClassifierKind::Enumeration;
         e.name = a.str("name");
         e.literals = a.list("literals");
         mm.find_package(a.str("package"))->classifiers.push_back(std::move(e));
       },
       {}});
}

std::unique_ptr<CoupledOperation> replace_enumeration() {
  return make_operation(
      {"Replace Enumeration",
       {param("attribute", PT::ElementRef, "enumeration-typed attribute"),
        param("enumeration", PT::ElementRef, "replacement enumeration"),
        param("mapping", PT::LiteralMap, "old:new literal pairs")},
       {"UnknownFeature", "NotEnumAttribute", "UnknownEnumeration", "UnknownSourceLiteral", "UnknownTargetLiteral",
        "UnmappedDefault"},
       "Retypes an attribute to another enumeration, mapping every value."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto path = a.str("attribute");
         const Feature* f = feature_at(mm, path);
         if (!c.check("UnknownFeature", f != nullptr, "no feature '" + path + "'")) return;
         const Classifier* from = mm.find_classifier(f->type);
         if (!c.check("NotEnumAttribute", f->is_attribute() && from != nullptr && from->is_enum(),
                      path + " is not typed by an enumeration")) {
           return;
         }
         const Classifier* to = mm.find_classifier(a.str("enumeration"));
         if (!c.check("UnknownEnumeration", to != nullptr && to->is_enum(), "no enumeration '" + a.str("enumeration") + "'")) return;
         const auto mapping = a.map("mapping");
         auto has = [](const Classifier* e, const std::string& lit) {
           return std::find(e->literals.begin(), e->literals.end(), lit) != e->literals.end();
         };
         for (const auto& [old_lit, new_lit] : mapping) {
           c.check("UnknownSourceLiteral", has(from, old_lit), "'" + old_lit + "' is not a literal of " + f->type);
           c.check("UnknownTargetLiteral", has(to, new_lit), "'" + new_lit + "' is not a literal of " + a.str("enumeration"));
         }
         c.check("UnknownSourceLiteral", true);
         c.check("UnknownTargetLiteral", true);
         c.check("UnmappedDefault", !f->default_value || mapping.count(*f->default_value),
                 "the default '" + f->default_value.value_or("") + "' has no mapping");
       },
       [](Metamodel& mm, const Args& a) {
         Feature& f = feature_at(mm, a.str("attribute"));
         f.type = a.str("enumeration");
         if (f.default_value) f.default_value = a.map("mapping").at(*f.default_value);
       },
       [](const Metamodel& before, const Metamodel&, ResourceSet& set, const Args& a) {
         const auto path = a.str("attribute");
         const auto name = last_segment(path);
         const auto mapping = a.map("mapping");
         for (const auto& key : instances_of(set, before, parent_path(path))) {
           ValueList* values = require_object(set, key).slot(name);
           if (values == nullptr) continue;
           for (auto& v : *values) {
             auto it = mapping.find(v.literal);
             if (it == mapping.end()) {
               migration_error("Replace Enumeration", "UnmappedLiteral",
                               to_string(key) + "." + name + " holds unmapped literal '" + v.literal + "'");
             }
             v.literal = it->second;
           }
         }
       }});
}

std::string literal_class(const std::string& cls, const std::string& literal) { return cls + "_" + literal; }

void adapt_enum_to_subclasses(Metamodel& mm, const Args& a) {
  const auto cls = a.str("class");
  const auto path = a.str("attribute");
  Classifier& owner = class_at(mm, cls);
  auto it = std::find_if(owner.features.begin(), owner.features.end(),
                         [&](const Feature& f) { return f.name == last_segment(path); });
  const std::string enum_path = it->type;
  owner.features.erase(it);
  owner.is_abstract = true;
  const std::vector<std::string> literals = mm.find_classifier(enum_path)->literals;
  auto& classifiers = mm.find_package(package_of(cls))->classifiers;
  for (const auto& lit : literals) {
    Classifier sub;
    sub.kind = ClassifierKind::Class;
    sub.name = last_segment(literal_class(cls, lit));
    sub.supertypes = {cls};
    classifiers.push_back(std::move(sub));
  }
  if (features_typed_by(mm, enum_path).empty()) erase_classifier(mm, enum_path);
}

std::unique_ptr<CoupledOperation> enumeration_to_sub_classes() {
  return make_operation(
      {"Enumeration to Sub Classes",
       {param("class", PT::ElementRef, "class owning the attribute"),
        param("attribute", PT::ElementRef, "single-valued enumeration attribute of the class")},
       {"UnknownClass", "UnknownFeature", "AttributeNotOwned", "NotEnumAttribute", "EmptyEnumeration", "MultiValued",
        "NameTaken"},
       "Replaces an enumeration attribute by one subclass per literal."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), path = a.str("attribute");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         const Feature* f = feature_at(mm, path);
         if (!c.check("UnknownFeature", f != nullptr, "no feature '" + path + "'")) return;
         if (!c.check("AttributeNotOwned", parent_path(path) == cls, path + " is not declared by " + cls)) return;
         const Classifier* e = mm.find_classifier(f->type);
         if (!c.check("NotEnumAttribute", f->is_attribute() && e != nullptr && e->is_enum(),
                      path + " is not typed by an enumeration")) {
           return;
         }
         c.check("EmptyEnumeration", !e->literals.empty(), f->type + " has no literals");
         c.check("MultiValued", f->upper == 1, path + " is multi-valued");
         for (const auto& lit : e->literals) {
           const auto sub = literal_class(cls, lit);
           if (!c.check("NameTaken", !classifier_taken(mm, sub), sub + " already exists")) return;
         }
         c.check("NameTaken", true);
       },
       adapt_enum_to_subclasses,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         constexpr std::string_view op = "Enumeration to Sub Classes";
         const auto cls = a.str("class");
         const Feature& f = *feature_at(before, a.str("attribute"));
         const auto fallback = default_value(before, f);
         for (const auto& key : instances_of(set, before, cls)) {
           MObject& obj = require_object(set, key);
           const ValueList* values = obj.slot(f.name);
           if (obj.class_name != cls) {
             if (values != nullptr) {
               migration_error(op, "ValueWouldBeLost",
                               to_string(key) + " (" + obj.class_name + ") carries a value for '" + f.name + "'");
             }
             continue;
           }
           std::string literal;
           if (values != nullptr) {
             literal = values->front().literal;
           } else if (fallback) {
             literal = fallback->literal;
           } else {
             migration_error(op, "MissingValue", to_string(key) + " has no value for '" + f.name + "' and there is no default");
           }
           obj.slots.erase(f.name);
           retype_object(set, after, key, literal_class(cls, literal));
         }
       }});
}

std::string enumeration_path(const Args& a) {
  if (auto e = a.opt_str("enumeration")) return *e;
  const auto cls = a.str("class");
  std::string attr = a.str("attribute");
  if (!attr.empty()) attr[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(attr[0])));
  return cls + attr;
}

std::string subclass_literal(const std::string& cls, const std::string& sub) {
  const std::string prefix = last_segment(cls) + "_";
  const std::string name = last_segment(sub);
  if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) return name.substr(prefix.size());
  return name;
}

void adapt_sub_classes_to_enum(Metamodel& mm, const Args& a) {
  const auto cls = a.str("class");
  const auto subs = direct_subclasses(mm, cls);
  const auto enum_path = enumeration_path(a);
  Classifier e;
  e.kind = ClassifierKind::Enumeration;
  e.name = last_segment(enum_path);
  for (const auto& sub : subs) e.literals.push_back(subclass_literal(cls, sub));
  mm.find_package(package_of(enum_path))->classifiers.push_back(std::move(e));
  Feature f;
  f.kind = FeatureKind::Attribute;
  f.name = a.str("attribute");
  f.type = enum_path;
  f.lower = 1;
  f.upper = 1;
  Classifier& owner = class_at(mm, cls);
  owner.features.push_back(std::move(f));
  owner.is_abstract = false;
  for (const auto& sub : subs) erase_classifier(mm, sub);
}

std::unique_ptr<CoupledOperation> sub_classes_to_enumeration() {
  return make_operation(
      {"Sub Classes to Enumeration",
       {param("class", PT::ElementRef, "abstract class whose subclasses become literals"),
        param("attribute", PT::String, "name of the new enumeration attribute"),
        param("enumeration", PT::ElementRef, "qualified name of the new enumeration (default <Class><Attribute>)", false)},
       {"UnknownClass", "NotAbstract", "InterfaceClass", "NoSubclasses", "SubclassNotLeaf", "SubclassHasFeatures",
        "SubclassSupertypes", "SubclassUsedAsType", "NameTaken", "EnumerationTaken"},
       "Replaces the leaf subclasses of an abstract class by an enumeration attribute."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class");
         const Classifier* owner = class_at(mm, cls);
         if (!c.check("UnknownClass", owner != nullptr, "no class '" + cls + "'")) return;
         c.check("NotAbstract", owner->is_abstract, cls + " is not abstract");
         c.check("InterfaceClass", !owner->is_interface, cls + " is an interface");
         const auto subs = direct_subclasses(mm, cls);
         c.check("NoSubclasses", !subs.empty(), cls + " has no subclasses");
         for (const auto& sub : subs) {
           const Classifier* s = class_at(mm, sub);
           c.check("SubclassNotLeaf", direct_subclasses(mm, sub).empty(), sub + " has subclasses");
           c.check("SubclassHasFeatures", s->features.empty() && s->operations.empty(), sub + " declares members");
           c.check("SubclassSupertypes", s->supertypes.size() == 1, sub + " has further supertypes");
           const auto users = features_typed_by(mm, sub);
           c.check("SubclassUsedAsType", users.empty(), users.empty() ? "" : sub + " is the type of " + users.front());
         }
         for (const auto* name : {"SubclassNotLeaf", "SubclassHasFeatures", "SubclassSupertypes", "SubclassUsedAsType"}) {
           c.check(name, true);
         }
         const auto attr = a.str("attribute");
         c.check("NameTaken", !attr.empty() && member_name_free(mm, cls, attr), "'" + attr + "' is already a member of " + cls);
         const auto enum_path = enumeration_path(a);
         c.check("EnumerationTaken", !classifier_taken(mm, enum_path), "'" + enum_path + "' is not a free classifier name");
       },
       adapt_sub_classes_to_enum,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto cls = a.str("class");
         const auto attr = a.str("attribute");
         for (const auto& key : instances_of(set, before, cls)) {
           MObject& obj = require_object(set, key);
           if (obj.class_name == cls) continue;
           const auto literal = subclass_literal(cls, obj.class_name);
           obj.slots[attr] = {Value::enum_literal(literal)};
           retype_object(set, after, key, cls);
         }
       }});
}

}  // namespace

void add_enumeration_operations(OperationList& out) {
  out.push_back(create_enumeration());
  out.push_back(replace_enumeration());
  out.push_back(enumeration_to_sub_classes());
  out.push_back(sub_classes_to_enumeration());
}

}  // namespace coupevo::detail
