#include <algorithm>
#include <map>
#include <set>

#include "coupevo/literal.hpp"
#include "coupevo/metamodel.hpp"

namespace coupevo {

namespace {

class Validator {
 public:
  explicit Validator(const Metamodel& metamodel) : mm_(metamodel) {}

  std::vector<MetaViolation> run() {
    std::set<std::string> package_names;
    for (const auto& pkg : mm_.packages) {
      if (pkg.name.empty()) report(pkg.name, "EmptyName", "package without a name");
      if (!package_names.insert(pkg.name).second) {
        report(pkg.name, "DuplicatePackage", "package name '" + pkg.name + "' used twice");
      }
      if (pkg.ns_uri.empty()) report(pkg.name, "EmptyNsUri", "package has no namespace URI");
      check_annotations(pkg.name, pkg.annotations);

      std::set<std::string> classifier_names;
      for (const auto& c : pkg.classifiers) {
        const std::string qn = join_path(pkg.name, c.name);
        if (c.name.empty()) report(qn, "EmptyName", "classifier without a name");
        if (!classifier_names.insert(c.name).second) {
          report(qn, "DuplicateClassifier", "classifier name '" + c.name + "' used twice");
        }
        check_annotations(qn, c.annotations);
        if (c.is_enum()) check_enum(qn, c);
        if (c.is_class()) check_class(qn, c);
      }
    }
    return std::move(out_);
  }

 private:
  void report(const std::string& element, std::string rule, std::string message) {
    out_.push_back({element, std::move(rule), std::move(message)});
  }

  void check_annotations(const std::string& element, const Annotations& annotations) {
    std::set<std::string> sources;
    for (const auto& a : annotations) {
      if (!sources.insert(a.source).second) {
        report(element, "DuplicateAnnotation", "annotation source '" + a.source + "' used twice");
      }
    }
  }

  void check_enum(const std::string& qn, const Classifier& c) {
    std::set<std::string> seen;
    for (const auto& lit : c.literals) {
      if (lit.empty()) report(qn, "EmptyName", "empty enumeration literal");
      if (!seen.insert(lit).second) {
        report(qn, "DuplicateLiteral", "literal '" + lit + "' used twice");
      }
    }
  }

  bool cyclic(const std::string& qn) const {
    std::set<std::string> seen;
    std::vector<std::string> stack;
    if (const Classifier* c = mm_.find_class(qn)) stack = c->supertypes;
    while (!stack.empty()) {
      std::string next = std::move(stack.back());
      stack.pop_back();
      if (next == qn) return true;
      if (!seen.insert(next).second) continue;
      if (const Classifier* c = mm_.find_class(next)) {
        stack.insert(stack.end(), c->supertypes.begin(), c->supertypes.end());
      }
    }
    return false;
  }

  void check_class(const std::string& qn, const Classifier& c) {
    std::set<std::string> sups;
    for (const auto& sup : c.supertypes) {
      if (mm_.find_class(sup) == nullptr) {
        report(qn, "DanglingSupertype", "supertype '" + sup + "' is not a class");
      }
      if (!sups.insert(sup).second) {
        report(qn, "DuplicateSupertype", "supertype '" + sup + "' listed twice");
      }
    }
    if (cyclic(qn)) {
      report(qn, "CyclicInheritance", "class inherits from itself");
    } else {
      std::map<std::string, std::string> owners;
      for (const auto& owned : feature_closure(mm_, qn)) {
        auto [it, inserted] = owners.emplace(owned.feature->name, owned.owner);
        if (!inserted && it->second != owned.owner) {
          report(qn, "FeatureNameClash",
                 "feature '" + owned.feature->name + "' declared by both " + it->second + " and " +
                     owned.owner);
        } else if (!inserted) {
          report(qn, "FeatureNameClash",
                 "feature '" + owned.feature->name + "' declared twice in " + owned.owner);
        }
      }
    }

    std::set<std::string> op_names;
    for (const auto& op : c.operations) {
      const std::string path = join_path(qn, op.name);
      if (!op_names.insert(op.name).second) {
        report(path, "DuplicateOperation", "operation '" + op.name + "' declared twice");
      }
      if (c.find_feature(op.name) != nullptr) {
        report(path, "MemberNameClash", "operation shares its name with a feature");
      }
      check_annotations(path, op.annotations);
    }

    for (const auto& f : c.features) check_feature(qn, f);
  }

  void check_feature(const std::string& owner, const Feature& f) {
    const std::string path = join_path(owner, f.name);
    if (f.name.empty()) report(path, "EmptyName", "feature without a name");
    check_annotations(path, f.annotations);
    if (f.lower < 0 || (f.upper != kUnbounded && f.upper < 1) ||
        (f.upper != kUnbounded && f.lower > f.upper)) {
      report(path, "InvalidBounds",
             "bounds [" + std::to_string(f.lower) + ".." + std::to_string(f.upper) + "] are invalid");
    }
    const Classifier* type = mm_.find_classifier(f.type);
    if (type == nullptr) {
      report(path, "DanglingType", "type '" + f.type + "' does not resolve");
    }

    if (f.is_attribute()) {
      if (type != nullptr && type->is_class()) {
        report(path, "AttributeType", "attribute typed by a class");
      }
      if (f.containment || f.opposite) {
        report(path, "MisplacedFlag", "attribute carries reference-only settings");
      }
      if (f.identifier) {
        const bool scalar = type != nullptr && type->is_datatype() &&
                            (type->data_kind == DataKind::String || type->data_kind == DataKind::Integer);
        if (!scalar || f.upper != 1) {
          report(path, "InvalidIdentifier",
                 "identifier must be a single-valued string or integer attribute");
        }
      }
      if (f.default_value && type != nullptr && !type->is_class() &&
          !valid_default(mm_, f.type, *f.default_value)) {
        report(path, "InvalidDefault", "default '" + *f.default_value + "' does not fit " + f.type);
      }
      return;
    }

    if (type != nullptr && !type->is_class()) {
      report(path, "ReferenceType", "reference typed by a non-class");
    }
    if (f.identifier || f.default_value) {
      report(path, "MisplacedFlag", "reference carries attribute-only settings");
    }
    if (!f.opposite) return;
    auto opposite = try_resolve(mm_, *f.opposite);
    if (!opposite || opposite->kind != ElementKind::Feature || !opposite->feature->is_reference()) {
      report(path, "DanglingOpposite", "opposite '" + *f.opposite + "' is not a reference");
      return;
    }
    const Feature& other = *opposite->feature;
    const std::string other_owner = parent_path(*f.opposite);
    if (other.opposite != path || other.type != owner || f.type != other_owner) {
      report(path, "OppositeAsymmetric", "opposite '" + *f.opposite + "' does not point back");
    }
    if (f.containment && other.containment) {
      report(path, "OppositeContainment", "both ends of an opposite pair are containments");
    }
  }

  const Metamodel& mm_;
  std::vector<MetaViolation> out_;
};

}  // namespace

std::vector<MetaViolation> validate_metamodel(const Metamodel& metamodel) {
  return Validator(metamodel).run();
}

}  // namespace coupevo
