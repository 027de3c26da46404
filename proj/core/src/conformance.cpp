#include "coupevo/conformance.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "coupevo/literal.hpp"

namespace coupevo {

namespace {

class ConformanceChecker {
 public:
  ConformanceChecker(const ResourceSet& set, const Metamodel& mm, ConformanceOptions options)
      : set_(set), mm_(mm), options_(options) {}

  std::vector<Violation> run() {
    bool ns_known = false;
    for (const auto& pkg : mm_.packages) ns_known |= pkg.ns_uri == set_.ns_uri;
    if (!ns_known) {
      out_.push_back({"", "", "NsUriMismatch",
                      "namespace URI '" + set_.ns_uri + "' is not declared by the metamodel"});
    }
    for (const auto& r : set_.resources) check_containment(r);
    for (const auto& key : document_order(set_)) check_object(key, *set_.find(key));
    return std::move(out_);
  }

 private:
  void report(const ObjectKey& key, std::string rule, std::string message) {
    out_.push_back({key.id, key.resource, std::move(rule), std::move(message)});
  }

  void check_containment(const Resource& r) {
    std::map<std::string, std::vector<std::string>> containers;
    for (const auto& [id, obj] : r.objects()) {
      for (const auto& [name, values] : obj.slots) {
        for (const auto& v : values) {
          if (v.kind != ValueKind::Child) continue;
          if (v.target.resource != r.uri()) {
            report({r.uri(), id}, "CrossResourceChild",
                   "slot '" + name + "' contains " + to_string(v.target) + " from another resource");
          } else if (!r.contains(v.target.id)) {
            report({r.uri(), id}, "DanglingChild", "slot '" + name + "' contains missing object '" + v.target.id + "'");
          } else {
            containers[v.target.id].push_back(id);
          }
        }
      }
    }
    std::set<std::string> roots;
    for (const auto& id : r.roots) {
      if (!r.contains(id)) {
        report({r.uri(), id}, "DanglingRoot", "root '" + id + "' does not exist");
        continue;
      }
      if (!roots.insert(id).second) report({r.uri(), id}, "DuplicateRoot", "listed twice as a root");
      if (containers.count(id)) report({r.uri(), id}, "RootContained", "root is also contained by " + containers[id].front());
    }
    for (const auto& [child, owners] : containers) {
      if (owners.size() > 1) {
        report({r.uri(), child}, "MultipleContainers",
               "contained by " + std::to_string(owners.size()) + " slots (first: " + owners.front() + ")");
      }
    }
    // Reachability from the roots detects orphans and containment cycles.
    std::set<std::string> reached;
    std::vector<std::string> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
      std::string id = std::move(stack.back());
      stack.pop_back();
      if (!reached.insert(id).second) continue;
      const MObject* obj = r.find(id);
      for (const auto& [name, values] : obj->slots) {
        for (const auto& v : values) {
          if (v.kind == ValueKind::Child && v.target.resource == r.uri() && r.contains(v.target.id)) {
            stack.push_back(v.target.id);
          }
        }
      }
    }
    for (const auto& [id, obj] : r.objects()) {
      if (reached.count(id)) continue;
      if (!containers.count(id)) {
        report({r.uri(), id}, "Orphan", "object is neither a root nor contained");
        continue;
      }
      std::set<std::string> chain{id};
      std::string cur = id;
      bool cycle = false;
      while (containers.count(cur)) {
        cur = containers[cur].front();
        if (!chain.insert(cur).second) {
          cycle = true;
          break;
        }
      }
      if (cycle) report({r.uri(), id}, "ContainmentCycle", "object is its own transitive container");
    }
  }

  void check_object(const ObjectKey& key, const MObject& obj) {
    const Classifier* cls = mm_.find_class(obj.class_name);
    if (cls == nullptr) {
      report(key, "UnknownClass", "class '" + obj.class_name + "' does not exist");
      return;
    }
    if (!cls->instantiable() && !options_.soften) {
      report(key, "AbstractInstantiation", "instance of abstract class " + obj.class_name);
    }
    const auto closure = feature_closure(mm_, obj.class_name);
    auto lookup = [&](const std::string& name) -> const OwnedFeature* {
      for (const auto& owned : closure) {
        if (owned.feature->name == name) return &owned;
      }
      return nullptr;
    };

    for (const auto& [name, values] : obj.slots) {
      const OwnedFeature* owned = lookup(name);
      if (owned == nullptr) {
        if (!options_.soften) {
          report(key, "UnknownFeature", "slot '" + name + "' is not a feature of " + obj.class_name);
        }
        continue;
      }
      const Feature& f = *owned->feature;
      if (f.is_volatile) {
        report(key, "VolatileSlot", "volatile feature '" + name + "' carries values");
        continue;
      }
      if (values.empty()) report(key, "EmptySlot", "slot '" + name + "' is present but empty");
      if (f.upper != kUnbounded && static_cast<int>(values.size()) > f.upper) {
        report(key, "MultiplicityUpper",
               "slot '" + name + "' holds " + std::to_string(values.size()) + " values, upper bound " +
                   std::to_string(f.upper));
      }
      for (const auto& v : values) check_value(key, f, v);
    }

    for (const auto& owned : closure) {
      const Feature& f = *owned.feature;
      if (f.is_volatile) continue;
      const ValueList* values = obj.slot(f.name);
      const int count = values == nullptr ? 0 : static_cast<int>(values->size());
      if (count < f.lower && !options_.soften) {
        report(key, "MultiplicityLower",
               "feature '" + f.name + "' needs " + std::to_string(f.lower) + " values, has " +
                   std::to_string(count));
      }
      if (f.identifier && values != nullptr && !values->empty()) {
        const std::string id_key = owned.owner + "." + f.name + "=" + to_string(values->front());
        auto [it, inserted] = identifiers_.emplace(id_key, key);
        if (!inserted) {
          report(key, "DuplicateIdentifier",
                 "identifier " + f.name + "=" + to_string(values->front()) + " already used by " +
                     to_string(it->second));
        }
      }
    }
  }

  void check_value(const ObjectKey& key, const Feature& f, const Value& v) {
    const Classifier* type = mm_.find_classifier(f.type);
    if (type == nullptr) return;  // metamodel validation reports dangling types
    if (f.is_attribute()) {
      if (type->is_datatype()) {
        if (v.kind != ValueKind::Primitive || !matches_kind(v.primitive, type->data_kind)) {
          report(key, "TypeMismatch",
                 "'" + f.name + "' value " + to_string(v) + " is not a " + std::string(to_string(type->data_kind)));
        }
      } else if (type->is_enum()) {
        if (v.kind != ValueKind::Enum) {
          report(key, "TypeMismatch", "'" + f.name + "' value " + to_string(v) + " is not an enum literal");
        } else if (std::find(type->literals.begin(), type->literals.end(), v.literal) == type->literals.end()) {
          report(key, "UnknownLiteral", "'" + v.literal + "' is not a literal of " + f.type);
        }
      }
      return;
    }
    const ValueKind expected = f.containment ? ValueKind::Child : ValueKind::Ref;
    if (v.kind != expected) {
      report(key, "ValueKindMismatch",
             "'" + f.name + "' expects " + (f.containment ? "contained objects" : "references") + ", got " +
                 to_string(v));
      return;
    }
    const MObject* target = set_.find(v.target);
    if (target == nullptr) {
      if (v.kind == ValueKind::Ref) report(key, "DanglingRef", "'" + f.name + "' refers to missing " + to_string(v.target));
      return;
    }
    if (mm_.find_class(target->class_name) != nullptr && !is_subtype(mm_, target->class_name, f.type)) {
      report(key, "TypeMismatch",
             "'" + f.name + "' value " + to_string(v.target) + " is a " + target->class_name + ", not a " + f.type);
    }
    if (f.opposite) {
      const std::string back = last_segment(*f.opposite);
      const ValueList* back_values = target->slot(back);
      const bool linked = back_values != nullptr &&
                          std::any_of(back_values->begin(), back_values->end(),
                                      [&](const Value& bv) { return bv.is_object_value() && bv.target == key; });
      if (!linked) {
        report(key, "OppositeMismatch",
               "'" + f.name + "' -> " + to_string(v.target) + " is not mirrored by '" + back + "'");
      }
    }
  }

  const ResourceSet& set_;
  const Metamodel& mm_;
  ConformanceOptions options_;
  std::vector<Violation> out_;
  std::map<std::string, ObjectKey> identifiers_;
};

}  // namespace

std::vector<Violation> check_conformance(const ResourceSet& set, const Metamodel& metamodel,
                                         ConformanceOptions options) {
  return ConformanceChecker(set, metamodel, options).run();
}

std::string format_violations(const std::vector<Violation>& violations, std::size_t limit) {
  std::ostringstream out;
  std::size_t shown = 0;
  for (const auto& v : violations) {
    if (shown++ == limit) {
      out << "  ... and " << (violations.size() - limit) << " more\n";
      break;
    }
    out << "  [" << v.rule << "] ";
    if (!v.object_id.empty()) out << v.resource_uri << "#" << v.object_id << ": ";
    out << v.message << "\n";
  }
  return out.str();
}

}  // namespace coupevo
