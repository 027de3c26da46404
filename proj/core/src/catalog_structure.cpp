// Operations on the class hierarchy.

#include <algorithm>
#include <map>
#include <set>

#include "catalog_impl.hpp"
#include "coupevo/model_edit.hpp"

namespace coupevo::detail {

namespace {

using PT = ParamType;

Package& package_at(Metamodel& mm, std::string_view path) {
  Package* p = mm.find_package(package_of(path));
  if (p == nullptr) throw Error(ErrorCode::DanglingRef, "no package for '" + std::string(path) + "'");
  return *p;
}

void erase_classifier(Metamodel& mm, std::string_view path) {
  auto& cs = package_at(mm, path).classifiers;
  const std::string name = last_segment(path);
  cs.erase(std::remove_if(cs.begin(), cs.end(), [&](const Classifier& c) { return c.name == name; }), cs.end());
}

std::vector<Feature> take_features(Classifier& c, const std::vector<std::string>& names) {
  std::vector<Feature> out;
  for (const auto& name : names) {
    auto it = std::find_if(c.features.begin(), c.features.end(), [&](const Feature& f) { return f.name == name; });
    if (it == c.features.end()) continue;
    out.push_back(std::move(*it));
    c.features.erase(it);
  }
  return out;
}

bool class_name_taken(const Metamodel& mm, std::string_view pkg, std::string_view name) {
  const Package* p = mm.find_package(pkg);
  return p != nullptr && p->find_classifier(name) != nullptr;
}

/// The shared tail of supertype-changing checks.
void check_hierarchy_result(const Metamodel& before, const Metamodel& after, const std::string& cls, Checks& c) {
  auto clash = find_name_clash(after, cls);
  c.check("FeatureNameClash", !clash, clash.value_or(""));
  for (const auto& entering : entering_features(before, after, cls)) {
    const Feature& f = *entering.feature.feature;
    if (mandatory_without_default(f)) {
      c.check("MandatoryFeatureUninitialized", false,
              entering.class_name + " would gain mandatory feature '" + f.name + "' without a default");
      return;
    }
  }
  c.check("MandatoryFeatureUninitialized", true);
}

bool check_opposites(const Metamodel& mm, const std::vector<const Feature*>& features, std::string_view where, Checks& c) {
  for (const Feature* f : features) {
    if (f->opposite) {
      return c.check("OppositeFeature", false, "'" + f->name + "' of " + std::string(where) + " has an opposite");
    }
  }
  (void)mm;
  return c.check("OppositeFeature", true);
}

// ---------------------------------------------------------------------------

void adapt_add_super_type(Metamodel& mm, const Args& a) {
  class_at(mm, a.str("class")).supertypes.push_back(a.str("superType"));
}

std::unique_ptr<CoupledOperation> add_super_type() {
  return make_operation(
      {"Add Super Type",
       {param("class", PT::ElementRef, "class gaining the supertype"),
        param("superType", PT::ElementRef, "new supertype")},
       {"UnknownClass", "UnknownSuperType", "AlreadySuperType", "CyclicInheritance", "FeatureNameClash",
        "MandatoryFeatureUninitialized"},
       "Adds a supertype to a class; inherited features stay unset or take their defaults."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), sup = a.str("superType");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         if (!c.check("UnknownSuperType", class_at(mm, sup) != nullptr, "no class '" + sup + "'")) return;
         c.check("AlreadySuperType", !is_direct_supertype(mm, cls, sup), sup + " is already a supertype of " + cls);
         c.check("CyclicInheritance", !is_subtype(mm, sup, cls), sup + " is a subtype of " + cls);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_add_super_type(after, a);
         check_hierarchy_result(mm, after, cls, c);
       },
       adapt_add_super_type,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         initialize_entering_defaults(before, after, set, a.str("class"));
       }});
}

std::unique_ptr<CoupledOperation> remove_super_type() {
  return make_operation(
      {"Remove Super Type",
       {param("class", PT::ElementRef, "class losing the supertype"),
        param("superType", PT::ElementRef, "supertype to remove")},
       {"UnknownClass", "NotASuperType"},
       "Removes a supertype; values of features no longer inherited are deleted."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), sup = a.str("superType");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         c.check("NotASuperType", is_direct_supertype(mm, cls, sup), sup + " is not a direct supertype of " + cls);
       },
       [](Metamodel& mm, const Args& a) {
         auto& sts = class_at(mm, a.str("class")).supertypes;
         sts.erase(std::remove(sts.begin(), sts.end(), a.str("superType")), sts.end());
       },
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         std::map<std::string, std::vector<ObjectKey>> by_class;
         for (const auto& key : instances_of(set, before, a.str("class"))) {
           by_class[set.find(key)->class_name].push_back(key);
         }
         for (const auto& [cls, keys] : by_class) {
           for (const auto& owned : leaving_features(before, after, cls)) {
             drop_slot(set, after, keys, owned.feature->name, owned.feature->containment, "Remove Super Type");
           }
         }
         require_reference_types(set, after, "Remove Super Type");
       }});
}

void adapt_create_class(Metamodel& mm, const Args& a) {
  Classifier c;
  c.kind = ClassifierKind::Class;
  c.name = a.str("name");
  c.is_abstract = a.flag("abstract");
  c.is_interface = a.flag("interface");
  c.supertypes = a.list("superTypes");
  package_at(mm, a.str("package")).classifiers.push_back(std::move(c));
}

std::unique_ptr<CoupledOperation> create_class() {
  return make_operation(
      {"Create Class",
       {param("package", PT::ElementRef, "owning package"), param("name", PT::String, "class name"),
        param("abstract", PT::Flag, "abstract class", false), param("interface", PT::Flag, "interface", false),
        param("superTypes", PT::ElementRefList, "supertypes", false)},
       {"UnknownPackage", "NameTaken", "UnknownSuperType", "FeatureNameClash"},
       "Creates an empty class."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto pkg = a.str("package"), name = a.str("name");
         if (!c.check("UnknownPackage", mm.find_package(pkg) != nullptr, "no package '" + pkg + "'")) return;
         c.check("NameTaken", !class_name_taken(mm, pkg, name), pkg + "." + name + " already exists");
         for (const auto& sup : a.list("superTypes")) {
           c.check("UnknownSuperType", class_at(mm, sup) != nullptr, "no class '" + sup + "'");
         }
         c.check("UnknownSuperType", true);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_create_class(after, a);
         auto clash = find_name_clash(after, pkg + "." + name);
         c.check("FeatureNameClash", !clash, clash.value_or(""));
       },
       adapt_create_class, {}});
}

void adapt_extract_super_class(Metamodel& mm, const Args& a) {
  const auto path = a.str("newClass");
  const auto classes = a.list("classes");
  const auto names = a.list("features");
  Classifier nc;
  nc.kind = ClassifierKind::Class;
  nc.name = last_segment(path);
  nc.is_abstract = true;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    Classifier& c = class_at(mm, classes[i]);
    auto taken = take_features(c, names);
    if (i == 0) nc.features = std::move(taken);
    c.supertypes.push_back(path);
  }
  package_at(mm, path).classifiers.push_back(std::move(nc));
}

std::unique_ptr<CoupledOperation> extract_super_class() {
  return make_operation(
      {"Extract Super Class",
       {param("newClass", PT::ElementRef, "qualified name of the new abstract superclass"),
        param("classes", PT::ElementRefList, "classes gaining the superclass"),
        param("features", PT::StringList, "names of equal features pulled up from every class", false)},
       {"NoClasses", "UnknownClass", "NameTaken", "FeatureMissing", "FeaturesDiffer", "OppositeFeature",
        "FeatureNameClash"},
       "Creates an abstract superclass of several classes and pulls their common features up."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto path = a.str("newClass");
         const auto classes = a.list("classes");
         const auto names = a.list("features");
         if (!c.check("NoClasses", !classes.empty(), "no classes given")) return;
         for (const auto& cls : classes) {
           if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         }
         c.check("UnknownClass", true);
         const auto parts = split_path(path);
         c.check("NameTaken", parts.size() == 2 && mm.find_package(parts[0]) != nullptr && !class_name_taken(mm, parts[0], parts[1]),
                 "'" + path + "' is not a free class name in an existing package");
         std::vector<const Feature*> features;
         for (const auto& name : names) {
           std::optional<Feature> first;
           for (const auto& cls : classes) {
             const Feature* f = class_at(mm, cls)->find_feature(name);
             if (!c.check("FeatureMissing", f != nullptr, cls + " does not declare '" + name + "'")) return;
             Feature plain = *f;
             plain.annotations.clear();
             if (!first) {
               first = plain;
               features.push_back(f);
             } else {
               c.check("FeaturesDiffer", plain == *first, "'" + name + "' differs between " + classes.front() + " and " + cls);
             }
           }
         }
         c.check("FeatureMissing", true);
         c.check("FeaturesDiffer", true);
         check_opposites(mm, features, "the pulled-up features", c);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_extract_super_class(after, a);
         auto clash = find_name_clash(after, path);
         c.check("FeatureNameClash", !clash, clash.value_or(""));
       },
       adapt_extract_super_class, {}});
}

std::string subclass_path(const Args& a) { return package_of(a.str("class")) + "." + a.str("name"); }

void adapt_extract_subclass(Metamodel& mm, const Args& a) {
  Classifier nc;
  nc.kind = ClassifierKind::Class;
  nc.name = a.str("name");
  nc.supertypes = {a.str("class")};
  nc.features = take_features(class_at(mm, a.str("class")), a.list("features"));
  package_at(mm, a.str("class")).classifiers.push_back(std::move(nc));
}

std::unique_ptr<CoupledOperation> extract_subclass() {
  return make_operation(
      {"Extract Subclass",
       {param("class", PT::ElementRef, "class to split"), param("name", PT::String, "new subclass name"),
        param("features", PT::StringList, "features moved into the subclass", false)},
       {"UnknownClass", "NameTaken", "FeatureMissing", "OppositeFeature", "FeatureNameClash"},
       "Creates a subclass, moves features into it and retypes every direct instance to it."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class");
         const Classifier* owner = class_at(mm, cls);
         if (!c.check("UnknownClass", owner != nullptr, "no class '" + cls + "'")) return;
         c.check("NameTaken", !class_name_taken(mm, package_of(cls), a.str("name")), subclass_path(a) + " already exists");
         std::vector<const Feature*> features;
         for (const auto& name : a.list("features")) {
           const Feature* f = owner->find_feature(name);
           if (!c.check("FeatureMissing", f != nullptr, cls + " does not declare '" + name + "'")) return;
           features.push_back(f);
         }
         c.check("FeatureMissing", true);
         check_opposites(mm, features, cls, c);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_extract_subclass(after, a);
         auto clash = find_name_clash(after, cls);
         c.check("FeatureNameClash", !clash, clash.value_or(""));
       },
       adapt_extract_subclass,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto cls = a.str("class");
         const auto moved = a.list("features");
         for (const auto& key : instances_of(set, before, cls)) {
           MObject& obj = require_object(set, key);
           if (obj.class_name == cls) {
             retype_object(set, after, key, subclass_path(a));
             continue;
           }
           for (const auto& name : moved) {
             if (obj.slot(name) != nullptr) {
               migration_error("Extract Subclass", "ValueWouldBeLost",
                               to_string(key) + " (" + obj.class_name + ") carries a value for moved feature '" + name + "'");
             }
           }
         }
       }});
}

void adapt_inline_super_class(Metamodel& mm, const Args& a) {
  const auto path = a.str("superClass");
  const Classifier sup = class_at(mm, path);
  for (auto& pkg : mm.packages) {
    for (auto& c : pkg.classifiers) {
      auto it = std::find(c.supertypes.begin(), c.supertypes.end(), path);
      if (it == c.supertypes.end()) continue;
      std::vector<std::string> replaced(c.supertypes.begin(), it);
      for (const auto& inherited : sup.supertypes) {
        if (std::find(c.supertypes.begin(), c.supertypes.end(), inherited) == c.supertypes.end()) {
          replaced.push_back(inherited);
        }
      }
      replaced.insert(replaced.end(), std::next(it), c.supertypes.end());
      c.supertypes = std::move(replaced);
      c.features.insert(c.features.begin(), sup.features.begin(), sup.features.end());
    }
  }
  erase_classifier(mm, path);
}

std::unique_ptr<CoupledOperation> inline_super_class() {
  return make_operation(
      {"Inline Super Class",
       {param("superClass", PT::ElementRef, "abstract superclass to dissolve")},
       {"UnknownClass", "NotAbstract", "UsedAsType", "OperationsPresent", "OppositeFeature", "FeatureNameClash"},
       "Copies the features of an abstract superclass into its direct subclasses and deletes it."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto path = a.str("superClass");
         const Classifier* sup = class_at(mm, path);
         if (!c.check("UnknownClass", sup != nullptr, "no class '" + path + "'")) return;
         c.check("NotAbstract", sup->is_abstract || sup->is_interface, path + " can have instances");
         const auto users = features_typed_by(mm, path);
         c.check("UsedAsType", users.empty(), users.empty() ? "" : path + " is the type of " + users.front());
         c.check("OperationsPresent", sup->operations.empty(), path + " declares operations");
         std::vector<const Feature*> features;
         for (const auto& f : sup->features) features.push_back(&f);
         check_opposites(mm, features, path, c);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_inline_super_class(after, a);
         for (const auto& sub : direct_subclasses(mm, path)) {
           auto clash = find_name_clash(after, sub);
           if (!c.check("FeatureNameClash", !clash, clash.value_or(""))) return;
         }
         c.check("FeatureNameClash", true);
       },
       adapt_inline_super_class, {}});
}

std::unique_ptr<CoupledOperation> make_class_abstract_when_interface() {
  return make_operation(
      {"Make Class Abstract when Interface",
       {param("class", PT::ElementRef, "interface class")},
       {"UnknownClass", "NotInterface", "AlreadyAbstract"},
       "Marks an interface class abstract."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class");
         const Classifier* k = class_at(mm, cls);
         if (!c.check("UnknownClass", k != nullptr, "no class '" + cls + "'")) return;
         c.check("NotInterface", k->is_interface, cls + " is not an interface");
         c.check("AlreadyAbstract", !k->is_abstract, cls + " is already abstract");
       },
       [](Metamodel& mm, const Args& a) { class_at(mm, a.str("class")).is_abstract = true; },
       [](const Metamodel& before, const Metamodel&, ResourceSet& set, const Args& a) {
         const auto direct = instances_of(set, before, a.str("class"), false);
         if (!direct.empty()) {
           migration_error("Make Class Abstract when Interface", "DirectInstances",
                           to_string(direct.front()) + " is a direct instance of " + a.str("class"));
         }
       }});
}

void adapt_specialize_super_type(Metamodel& mm, const Args& a) {
  auto& sts = class_at(mm, a.str("class")).supertypes;
  std::replace(sts.begin(), sts.end(), a.str("superType"), a.str("newSuperType"));
}

std::unique_ptr<CoupledOperation> specialize_super_type() {
  return make_operation(
      {"Specialize Super Type",
       {param("class", PT::ElementRef, "class whose supertype changes"),
        param("superType", PT::ElementRef, "current supertype"),
        param("newSuperType", PT::ElementRef, "subclass of the current supertype")},
       {"UnknownClass", "NotASuperType", "UnknownSuperType", "NotASpecialization", "AlreadySuperType",
        "CyclicInheritance", "FeatureNameClash", "MandatoryFeatureUninitialized"},
       "Replaces a supertype by one of its subclasses."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), sup = a.str("superType"), spec = a.str("newSuperType");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         if (!c.check("NotASuperType", is_direct_supertype(mm, cls, sup), sup + " is not a direct supertype of " + cls)) return;
         if (!c.check("UnknownSuperType", class_at(mm, spec) != nullptr, "no class '" + spec + "'")) return;
         c.check("NotASpecialization", spec != sup && is_subtype(mm, spec, sup), spec + " is not a subclass of " + sup);
         c.check("AlreadySuperType", !is_direct_supertype(mm, cls, spec), spec + " is already a supertype of " + cls);
         c.check("CyclicInheritance", !is_subtype(mm, spec, cls), spec + " is a subtype of " + cls);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_specialize_super_type(after, a);
         check_hierarchy_result(mm, after, cls, c);
       },
       adapt_specialize_super_type,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         initialize_entering_defaults(before, after, set, a.str("class"));
       }});
}

void adapt_unfold_super_class(Metamodel& mm, const Args& a) {
  const auto cls = a.str("class"), sup = a.str("superType");
  const Metamodel before = mm;
  auto& sts = class_at(mm, cls).supertypes;
  sts.erase(std::remove(sts.begin(), sts.end(), sup), sts.end());
  std::vector<Feature> copies;
  for (const auto& owned : leaving_features(before, mm, cls)) copies.push_back(*owned.feature);
  Classifier& target = class_at(mm, cls);
  target.features.insert(target.features.begin(), copies.begin(), copies.end());
  const auto kept = supertype_closure(mm, cls);
  for (const auto& ancestor : supertype_closure(before, sup)) {
    if (kept.count(ancestor)) continue;
    for (const auto& op : before.find_class(ancestor)->operations) {
      if (target.find_operation(op.name) == nullptr) target.operations.push_back(op);
    }
  }
}

std::unique_ptr<CoupledOperation> unfold_super_class() {
  return make_operation(
      {"Unfold Super Class",
       {param("class", PT::ElementRef, "class to detach"), param("superType", PT::ElementRef, "supertype to unfold")},
       {"UnknownClass", "NotASuperType", "OppositeFeature", "FeatureNameClash"},
       "Copies the features of a supertype into a class and removes the inheritance link."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), sup = a.str("superType");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         if (!c.check("NotASuperType", is_direct_supertype(mm, cls, sup), sup + " is not a direct supertype of " + cls)) return;
         check_opposites(mm, all_features(mm, sup), sup, c);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_unfold_super_class(after, a);
         auto clash = find_name_clash(after, cls);
         c.check("FeatureNameClash", !clash, clash.value_or(""));
       },
       adapt_unfold_super_class,
       [](const Metamodel&, const Metamodel& after, ResourceSet& set, const Args&) {
         require_reference_types(set, after, "Unfold Super Class");
       }});
}

void adapt_inheritance_to_delegation(Metamodel& mm, const Args& a) {
  Classifier& c = class_at(mm, a.str("class"));
  c.supertypes.erase(std::remove(c.supertypes.begin(), c.supertypes.end(), a.str("superType")), c.supertypes.end());
  Feature ref;
  ref.kind = FeatureKind::Reference;
  ref.name = a.str("reference");
  ref.type = a.str("superType");
  ref.lower = 1;
  ref.upper = 1;
  ref.containment = true;
  c.features.push_back(std::move(ref));
}

std::unique_ptr<CoupledOperation> inheritance_to_delegation() {
  return make_operation(
      {"Inheritance to Delegation",
       {param("class", PT::ElementRef, "inheriting class"), param("superType", PT::ElementRef, "direct supertype"),
        param("reference", PT::String, "name of the new delegate containment")},
       {"UnknownClass", "NotASuperType", "AbstractSuperType", "NameTaken", "OppositeFeature", "FeatureNameClash"},
       "Replaces inheritance from a concrete supertype by a mandatory containment of a delegate."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const auto cls = a.str("class"), sup = a.str("superType"), ref = a.str("reference");
         if (!c.check("UnknownClass", class_at(mm, cls) != nullptr, "no class '" + cls + "'")) return;
         if (!c.check("NotASuperType", is_direct_supertype(mm, cls, sup), sup + " is not a direct supertype of " + cls)) return;
         c.check("AbstractSuperType", class_at(mm, sup)->instantiable(), sup + " cannot be instantiated");
         c.check("NameTaken", !ref.empty() && member_name_free(mm, cls, ref), "'" + ref + "' is already a member of " + cls);
         check_opposites(mm, all_features(mm, sup), sup, c);
         if (!c.passed()) return;
         Metamodel after = mm;
         adapt_inheritance_to_delegation(after, a);
         auto clash = find_name_clash(after, cls);
         c.check("FeatureNameClash", !clash, clash.value_or(""));
       },
       adapt_inheritance_to_delegation,
       [](const Metamodel& before, const Metamodel& after, ResourceSet& set, const Args& a) {
         const auto sup = a.str("superType"), ref = a.str("reference");
         std::map<std::string, std::vector<std::string>> leaving;
         for (const auto& key : instances_of(set, before, a.str("class"))) {
           const std::string cls = set.find(key)->class_name;
           if (!leaving.count(cls)) {
             for (const auto& owned : leaving_features(before, after, cls)) leaving[cls].push_back(owned.feature->name);
           }
           const ObjectKey delegate = create_object(set, key.resource, sup, key.id + "_" + ref);
           MObject& owner = require_object(set, key);
           MObject& target = require_object(set, delegate);
           for (const auto& name : leaving[cls]) {
             auto it = owner.slots.find(name);
             if (it == owner.slots.end()) continue;
             target.slots.emplace(name, std::move(it->second));
             owner.slots.erase(it);
           }
           // Mandatory attributes the owner still inherits along another path
           // stay with the owner; the delegate gets a copy, or the default.
           for (const auto& owned : feature_closure(after, sup)) {
             const Feature& f = *owned.feature;
             if (!f.is_attribute() || f.lower == 0 || f.is_volatile || target.slots.count(f.name)) continue;
             if (const ValueList* kept = owner.slot(f.name)) {
               target.slots[f.name] = *kept;
             } else if (auto value = default_value(after, f)) {
               target.slots[f.name] = {*value};
             } else {
               migration_error("Inheritance to Delegation", "MandatoryUnset",
                               to_string(delegate) + " would lack a value for " + f.name);
             }
           }
           attach_child(set, key, ref, delegate);
         }
         require_reference_types(set, after, "Inheritance to Delegation");
       }});
}

}  // namespace

void add_structure_operations(OperationList& out) {
  out.push_back(add_super_type());
  out.push_back(remove_super_type());
  out.push_back(create_class());
  out.push_back(extract_super_class());
  out.push_back(extract_subclass());
  out.push_back(inline_super_class());
  out.push_back(make_class_abstract_when_interface());
  out.push_back(specialize_super_type());
  out.push_back(unfold_super_class());
  out.push_back(inheritance_to_delegation());
}

}  // namespace coupevo::detail
