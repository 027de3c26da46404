#include "fixtures.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "coupevo/conformance.hpp"
#include "coupevo/error.hpp"
#include "coupevo/literal.hpp"
#include "coupevo/metamodel_io.hpp"
#include "coupevo/model_edit.hpp"
#include "coupevo/model_io.hpp"

namespace coupevo::testing {

namespace fs = std::filesystem;
using json = nlohmann::json;

fs::path scenario_dir() {
  if (const char* env = std::getenv("COUPEVO_SCENARIO_DIR")) return env;
  return COUPEVO_TEST_SCENARIO_DIR;
}

fs::path acceptance_data_dir() { return COUPEVO_TEST_DATA_DIR; }

fs::path fresh_temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("coupevo-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937& rng) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

template <typename T>
T& pick(std::vector<T>& items, std::mt19937& rng) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

template <typename T>
std::vector<T> pick_some(const std::vector<T>& items, std::mt19937& rng, int at_least, int at_most) {
  std::vector<T> copy = items;
  std::shuffle(copy.begin(), copy.end(), rng);
  const int n = std::min<int>(static_cast<int>(copy.size()), uniform(rng, at_least, std::max(at_least, at_most)));
  copy.resize(static_cast<std::size_t>(std::max(0, n)));
  return copy;
}

const std::vector<std::string> kValueTypes = {"p.String", "p.Int", "p.Bool", "p.Real", "p.Color", "p.Size"};

std::string default_for(const std::string& type) {
  if (type == "p.String") return "x";
  if (type == "p.Int") return "7";
  if (type == "p.Bool") return "true";
  if (type == "p.Real") return "1.5";
  if (type == "p.Color") return "green";
  return "small";
}

Classifier datatype(std::string name, DataKind kind) {
  Classifier c;
  c.kind = ClassifierKind::DataType;
  c.name = std::move(name);
  c.data_kind = kind;
  return c;
}

Classifier enumeration(std::string name, std::vector<std::string> literals) {
  Classifier c;
  c.kind = ClassifierKind::Enumeration;
  c.name = std::move(name);
  c.literals = std::move(literals);
  return c;
}

Annotations& annotations_of(Metamodel& mm, const std::string& path) {
  return resolve(mm, ElementRef{path}).annotations();
}

std::vector<std::string> element_paths(const Metamodel& mm) {
  std::vector<std::string> out;
  for (const auto& p : mm.packages) {
    out.push_back(p.name);
    for (const auto& c : p.classifiers) {
      const auto cp = join_path(p.name, c.name);
      out.push_back(cp);
      for (const auto& f : c.features) out.push_back(join_path(cp, f.name));
      for (const auto& o : c.operations) out.push_back(join_path(cp, o.name));
    }
  }
  return out;
}

Metamodel random_metamodel_once(std::mt19937& rng, const FixtureLimits& limits) {
  Package p;
  p.name = "p";
  p.ns_uri = "urn:test:p/1";
  p.classifiers.push_back(datatype("String", DataKind::String));
  p.classifiers.push_back(datatype("Int", DataKind::Integer));
  p.classifiers.push_back(datatype("Bool", DataKind::Boolean));
  p.classifiers.push_back(datatype("Real", DataKind::Float));
  p.classifiers.push_back(enumeration("Color", {"red", "green", "blue"}));
  p.classifiers.push_back(enumeration("Size", {"small", "large"}));

  const bool family = limits.max_classes >= 5 && chance(rng, 0.3);
  const int plain = uniform(rng, 2, limits.max_classes - (family ? 3 : 0));
  std::vector<std::string> names;
  for (int i = 0; i < plain; ++i) names.push_back("C" + std::to_string(i));

  int counter = 0;
  std::vector<Classifier> classes;
  for (int i = 0; i < plain; ++i) {
    Classifier c;
    c.name = names[static_cast<std::size_t>(i)];
    c.is_interface = chance(rng, 0.15);
    c.is_abstract = chance(rng, c.is_interface ? 0.4 : 0.25);
    for (int j = 0; j < i && c.supertypes.size() < 2; ++j) {
      if (chance(rng, 0.3)) c.supertypes.push_back("p." + names[static_cast<std::size_t>(j)]);
    }
    const int nf = uniform(rng, 0, 3);
    for (int k = 0; k < nf; ++k) {
      Feature f;
      if (chance(rng, 0.6)) {
        f.kind = FeatureKind::Attribute;
        f.name = "a" + std::to_string(counter++);
        f.type = pick(kValueTypes, rng);
        f.upper = chance(rng, 0.25) ? kUnbounded : 1;
        if (chance(rng, 0.2)) {
          f.lower = 1;
          f.default_value = default_for(f.type);
        } else if (chance(rng, 0.2)) {
          f.default_value = default_for(f.type);
        }
      } else {
        f.kind = FeatureKind::Reference;
        f.name = "r" + std::to_string(counter++);
        f.type = "p." + pick(names, rng);
        f.containment = chance(rng, 0.4);
        f.upper = chance(rng, 0.5) ? kUnbounded : 1;
      }
      if (chance(rng, 0.12)) f.changeable = false;
      if (chance(rng, 0.05)) {
        f.is_volatile = true;
        f.changeable = false;
      }
      if (f.changeable && chance(rng, 0.1)) {
        f.annotations.push_back(Annotation{"genmodel", {{"suppressedSetVisibility", "true"}}});
      }
      c.features.push_back(std::move(f));
    }
    classes.push_back(std::move(c));
  }

  auto unrelated = [&](int i, int j) {
    // Loose test; validation weeds out the rest.
    const auto& ci = classes[static_cast<std::size_t>(i)];
    const auto& cj = classes[static_cast<std::size_t>(j)];
    auto has = [](const Classifier& c, const std::string& s) {
      return std::find(c.supertypes.begin(), c.supertypes.end(), s) != c.supertypes.end();
    };
    return i != j && !has(ci, "p." + cj.name) && !has(cj, "p." + ci.name);
  };

  // Twin features for Extract Super Class.
  if (plain >= 2 && chance(rng, 0.5)) {
    const int i = uniform(rng, 0, plain - 1);
    const int j = uniform(rng, 0, plain - 1);
    if (unrelated(i, j)) {
      Feature f;
      f.name = "t" + std::to_string(counter++);
      f.type = chance(rng, 0.5) ? "p.String" : "p.Int";
      classes[static_cast<std::size_t>(i)].features.push_back(f);
      classes[static_cast<std::size_t>(j)].features.push_back(f);
    }
  }
  // At most one identifier.
  if (chance(rng, 0.35)) {
    Feature f;
    f.name = "a" + std::to_string(counter++);
    f.type = chance(rng, 0.7) ? "p.String" : "p.Int";
    f.identifier = true;
    pick(classes, rng).features.push_back(f);
  }
  // Opposite pair.
  if (chance(rng, 0.3)) {
    const int i = uniform(rng, 0, plain - 1);
    const int j = uniform(rng, 0, plain - 1);
    Feature f, g;
    f.kind = g.kind = FeatureKind::Reference;
    f.name = "o" + std::to_string(counter++);
    g.name = "o" + std::to_string(counter++);
    f.type = "p." + names[static_cast<std::size_t>(j)];
    g.type = "p." + names[static_cast<std::size_t>(i)];
    f.upper = chance(rng, 0.5) ? kUnbounded : 1;
    g.upper = chance(rng, 0.5) ? kUnbounded : 1;
    f.opposite = "p." + names[static_cast<std::size_t>(j)] + "." + g.name;
    g.opposite = "p." + names[static_cast<std::size_t>(i)] + "." + f.name;
    classes[static_cast<std::size_t>(i)].features.push_back(f);
    classes[static_cast<std::size_t>(j)].features.push_back(g);
  }
  for (int k = uniform(rng, 0, 2); k > 0; --k) {
    OperationSignature op;
    op.name = "op" + std::to_string(counter++);
    if (chance(rng, 0.5)) op.params.push_back("x");
    pick(classes, rng).operations.push_back(op);
  }
  if (family) {
    Classifier k;
    k.name = "K";
    k.is_abstract = true;
    if (chance(rng, 0.5)) {
      Feature f;
      f.name = "a" + std::to_string(counter++);
      f.type = "p.String";
      k.features.push_back(f);
    }
    classes.push_back(k);
    for (const char* leaf : {"K_a", "K_b"}) {
      Classifier c;
      c.name = leaf;
      c.supertypes.push_back("p.K");
      classes.push_back(c);
    }
    if (chance(rng, 0.7)) {
      Feature f;
      f.kind = FeatureKind::Reference;
      f.name = "r" + std::to_string(counter++);
      f.type = "p.K";
      f.containment = chance(rng, 0.6);
      f.upper = kUnbounded;
      classes.front().features.push_back(f);
    }
  }
  for (auto& c : classes) p.classifiers.push_back(std::move(c));
  if (chance(rng, 0.3)) p.classifiers.push_back(enumeration("Shade", {"light", "dark"}));

  Metamodel mm;
  mm.packages.push_back(std::move(p));

  const auto paths = element_paths(mm);
  if (chance(rng, 0.3)) {
    annotations_of(mm, pick(paths, rng)).push_back(Annotation{"documentation", {{"value", "doc"}}});
  }
  if (chance(rng, 0.35)) {
    annotations_of(mm, pick(paths, rng)).push_back(Annotation{"gmf.constraint", {{"body", "self.x <> null"}}});
  }
  for (int k = uniform(rng, 0, 2); k > 0; --k) {
    auto& anns = annotations_of(mm, pick(paths, rng));
    if (find_annotation(anns, "note") == nullptr) anns.push_back(Annotation{"note", {{"text", "n"}}});
  }
  return mm;
}

json random_scalar(const Classifier& type, std::mt19937& rng) {
  switch (type.data_kind) {
    case DataKind::String: return std::string(1, static_cast<char>('a' + uniform(rng, 0, 5)));
    case DataKind::Integer: return uniform(rng, -3, 9);
    case DataKind::Boolean: return chance(rng, 0.5);
    case DataKind::Float: return uniform(rng, 0, 8) * 0.5;
  }
  return nullptr;
}

std::optional<ResourceSet> random_model_once(const Metamodel& mm, std::mt19937& rng, const FixtureLimits& limits) {
  ResourceSet set;
  set.ns_uri = mm.packages.front().ns_uri;
  const int files = chance(rng, 0.5) ? 2 : 1;
  for (int i = 0; i < files; ++i) set.resources.emplace_back("m" + std::to_string(i) + ".model.json");

  std::vector<std::string> concrete;
  for (const auto& c : all_classes(mm)) {
    if (mm.find_class(c)->instantiable()) concrete.push_back(c);
  }
  if (concrete.empty()) return set;

  const int count = uniform(rng, 1, limits.max_objects);
  std::vector<ObjectKey> keys;
  std::map<std::string, int> id_values;
  int next_id_value = 0;
  for (int n = 0; n < count; ++n) {
    const std::string cls = pick(concrete, rng);
    const std::string uri = pick(set.resources, rng).uri();
    MObject obj;
    obj.id = "o" + std::to_string(n);
    obj.class_name = cls;
    for (const auto& owned : feature_closure(mm, cls)) {
      const Feature& f = *owned.feature;
      if (!f.is_attribute() || f.is_volatile) continue;
      if (f.lower == 0 && !f.identifier && !chance(rng, 0.5)) continue;
      if (f.identifier && !chance(rng, 0.8)) continue;
      const Classifier* type = mm.find_classifier(f.type);
      ValueList values;
      const int n_values = f.many() ? uniform(rng, std::max(1, f.lower), 3) : 1;
      for (int v = 0; v < n_values; ++v) {
        if (f.identifier) {
          const int val = next_id_value++;
          values.push_back(type->data_kind == DataKind::Integer ? Value::of(val) : Value::of("k" + std::to_string(val)));
        } else if (type->is_enum()) {
          values.push_back(Value::enum_literal(pick(type->literals, rng)));
        } else {
          values.push_back(Value::of(random_scalar(*type, rng)));
        }
      }
      obj.slots[f.name] = std::move(values);
    }
    set.find_resource(uri)->insert(std::move(obj));
    const ObjectKey key{uri, "o" + std::to_string(n)};

    // Place under an earlier object of the same resource, or as a root.
    std::vector<std::pair<ObjectKey, std::string>> slots;
    for (const auto& other : keys) {
      if (other.resource != uri) continue;
      const MObject* o = set.find(other);
      for (const auto& owned : feature_closure(mm, o->class_name)) {
        const Feature& f = *owned.feature;
        if (!f.is_reference() || !f.containment || f.is_volatile || !is_subtype(mm, cls, f.type)) continue;
        const ValueList* cur = o->slot(f.name);
        const int used = cur ? static_cast<int>(cur->size()) : 0;
        if (f.upper != kUnbounded && used >= f.upper) continue;
        slots.emplace_back(other, f.name);
      }
    }
    if (!slots.empty() && chance(rng, 0.65)) {
      const auto& [container, feature] = pick(slots, rng);
      attach_child(set, container, feature, key);
    } else {
      add_root(set, key);
    }
    keys.push_back(key);
  }

  auto room = [&](const ObjectKey& k, const Feature& f) {
    const ValueList* cur = set.find(k)->slot(f.name);
    return f.upper == kUnbounded || (cur ? static_cast<int>(cur->size()) : 0) < f.upper;
  };
  auto holds = [&](const ObjectKey& k, const std::string& feature, const ObjectKey& t) {
    const ValueList* cur = set.find(k)->slot(feature);
    return cur && std::find(cur->begin(), cur->end(), Value::ref(t)) != cur->end();
  };

  for (const auto& key : keys) {
    const std::string cls = set.find(key)->class_name;
    for (const auto& owned : feature_closure(mm, cls)) {
      const Feature& f = *owned.feature;
      if (!f.is_reference() || f.containment || f.is_volatile) continue;
      const std::string path = join_path(owned.owner, f.name);
      if (f.opposite && *f.opposite < path) continue;  // filled from the other end
      if (!chance(rng, 0.55)) continue;
      const Feature* g = nullptr;
      if (f.opposite) {
        g = resolve(mm, ElementRef{*f.opposite}).feature;
        if (g->containment || g->is_volatile) continue;
      }
      std::vector<ObjectKey> targets;
      for (const auto& t : keys) {
        if (is_subtype(mm, set.find(t)->class_name, f.type)) targets.push_back(t);
      }
      std::shuffle(targets.begin(), targets.end(), rng);
      int wanted = f.many() ? uniform(rng, 1, 3) : 1;
      for (const auto& t : targets) {
        if (wanted == 0 || !room(key, f)) break;
        if (holds(key, f.name, t)) continue;
        if (g != nullptr) {
          if (!room(t, *g) || holds(t, g->name, key)) continue;
          add_value(set, t, g->name, Value::ref(key));
        }
        add_value(set, key, f.name, Value::ref(t));
        --wanted;
      }
    }
  }
  if (!check_conformance(set, mm).empty()) return std::nullopt;
  return set;
}

}  // namespace

Fixture random_fixture(std::mt19937& rng, const FixtureLimits& limits) {
  for (;;) {
    Metamodel mm = random_metamodel_once(rng, limits);
    if (!validate_metamodel(mm).empty()) continue;
    for (int tries = 0; tries < 8; ++tries) {
      if (auto set = random_model_once(mm, rng, limits)) return Fixture{std::move(mm), std::move(*set)};
    }
  }
}

// ---------------------------------------------------------------------------
// Arguments

namespace {

struct Catalogue {
  std::vector<std::string> elements, classes, concrete, abstract, interfaces, features, attributes, references,
      operations, enums, value_types;
  std::vector<std::pair<std::string, std::string>> annotated;  // (element, source)

  explicit Catalogue(const Metamodel& mm) {
    elements = element_paths(mm);
    for (const auto& path : elements) {
      const auto el = *try_resolve(mm, path);
      for (const auto& a : el.annotations()) annotated.emplace_back(path, a.source);
      switch (el.kind) {
        case ElementKind::Classifier:
          if (el.classifier->is_class()) {
            classes.push_back(path);
            if (el.classifier->instantiable()) concrete.push_back(path);
            if (el.classifier->is_abstract) abstract.push_back(path);
            if (el.classifier->is_interface) interfaces.push_back(path);
          } else {
            value_types.push_back(path);
            if (el.classifier->is_enum()) enums.push_back(path);
          }
          break;
        case ElementKind::Feature:
          features.push_back(path);
          (el.feature->is_attribute() ? attributes : references).push_back(path);
          break;
        case ElementKind::Operation: operations.push_back(path); break;
        case ElementKind::Package: break;
      }
    }
  }
};

using Pred = std::function<bool(const std::string&)>;

std::vector<std::string> filter(const std::vector<std::string>& items, const Pred& keep) {
  std::vector<std::string> out;
  std::copy_if(items.begin(), items.end(), std::back_inserter(out), keep);
  return out;
}

json paths_json(const std::vector<std::string>& paths) { return json(paths); }

}  // namespace

std::optional<OperationApplication> random_application(const std::string& op, const Fixture& fixture, std::mt19937& rng,
                                                       bool wild) {
  const Metamodel& mm = fixture.mm;
  const Catalogue cat(mm);
  OperationApplication app;
  app.op = op;
  json& a = app.args;

  std::vector<std::string> any = cat.elements;
  any.push_back("p.Nope");
  // In wild mode every choice is drawn from `any`; otherwise from `good`,
  // falling back to nothing when the metamodel offers no candidate.
  bool missing = false;
  auto choose = [&](const std::vector<std::string>& good) -> std::string {
    if (wild) return pick(any, rng);
    if (good.empty()) {
      missing = true;
      return {};
    }
    return pick(good, rng);
  };
  auto feature_of = [&](const std::string& path) { return resolve(mm, ElementRef{path}).feature; };
  auto name = [&](const std::vector<std::string>& pool) { return pick(pool, rng); };

  if (op == "Add Super Type") {
    a["class"] = choose(cat.classes);
    a["superType"] = choose(cat.classes);
  } else if (op == "Remove Super Type") {
    const auto c = choose(filter(cat.classes, [&](const auto& p) { return !mm.find_class(p)->supertypes.empty(); }));
    a["class"] = c;
    const Classifier* cls = wild || missing ? nullptr : mm.find_class(c);
    a["superType"] = cls ? pick(cls->supertypes, rng) : choose(cat.classes);
  } else if (op == "Create Attribute") {
    a["class"] = choose(cat.classes);
    a["name"] = name({"n0", "n1", "a0", "t0"});
    const auto type = choose(cat.value_types);
    a["type"] = type;
    const bool mandatory = chance(rng, 0.3);
    if (mandatory) a["lower"] = 1;
    if (chance(rng, 0.3)) a["upper"] = -1;
    if (!missing && (mandatory || chance(rng, 0.2))) {
      const Classifier* t = mm.find_classifier(type);
      if (t && t->is_enum() && !t->literals.empty()) {
        a["defaultValue"] = pick(t->literals, rng);
      } else if (t && t->is_datatype()) {
        a["defaultValue"] = t->data_kind == DataKind::String    ? "x"
                            : t->data_kind == DataKind::Integer ? "3"
                            : t->data_kind == DataKind::Boolean ? "false"
                                                                : "0.5";
      }
    }
    if (chance(rng, 0.15)) a["identifier"] = true;
  } else if (op == "Create Class") {
    a["package"] = wild ? pick(any, rng) : "p";
    a["name"] = name({"N", "M", "C0"});
    if (chance(rng, 0.3)) a["abstract"] = true;
    if (chance(rng, 0.2)) a["interface"] = true;
    if (chance(rng, 0.5) && !cat.classes.empty()) a["superTypes"] = paths_json(pick_some(cat.classes, rng, 1, 2));
  } else if (op == "Create Reference") {
    a["class"] = choose(cat.classes);
    a["name"] = name({"n0", "n1", "r0"});
    a["type"] = choose(cat.classes);
    if (chance(rng, 0.5)) a["upper"] = -1;
    if (chance(rng, 0.4)) a["containment"] = true;
    if (chance(rng, 0.1)) a["lower"] = 1;
  } else if (op == "Delete Feature") {
    a["feature"] = choose(cat.features);
  } else if (op == "Delete Operation") {
    a["operation"] = choose(cat.operations);
  } else if (op == "Document Metamodel Element") {
    a["element"] = choose(cat.elements);
    a["documentation"] = name({"First.", "Second."});
  } else if (op == "Drop Attribute Identifier") {
    a["attribute"] = choose(filter(cat.attributes, [&](const auto& p) { return feature_of(p)->identifier; }));
  } else if (op == "Extract Super Class") {
    a["newClass"] = name({"p.X", "p.Y", "p.C0"});
    std::map<std::string, std::vector<std::string>> twins;
    for (const auto& f : cat.features) twins[last_segment(f)].push_back(parent_path(f));
    std::vector<std::string> twin_names;
    for (const auto& [n, owners] : twins) {
      if (owners.size() > 1) twin_names.push_back(n);
    }
    if (!wild && !twin_names.empty() && chance(rng, 0.6)) {
      const auto n = pick(twin_names, rng);
      a["classes"] = paths_json(twins[n]);
      a["features"] = json::array({n});
    } else {
      a["classes"] = paths_json(wild ? pick_some(any, rng, 1, 2) : pick_some(cat.classes, rng, 1, 3));
    }
  } else if (op == "Extract Subclass") {
    const auto c = choose(cat.classes);
    a["class"] = c;
    a["name"] = name({"Sub", "Part", "C0"});
    const Classifier* cls = missing ? nullptr : mm.find_class(c);
    if (cls && !cls->features.empty() && chance(rng, 0.7)) {
      std::vector<std::string> own;
      for (const auto& f : cls->features) own.push_back(f.name);
      a["features"] = pick_some(own, rng, 1, 2);
    } else if (wild) {
      a["features"] = json::array({"a0"});
    }
  } else if (op == "Generalize Attribute") {
    const auto attr = choose(cat.attributes);
    a["attribute"] = attr;
    const Feature* f = missing || wild ? nullptr : feature_of(attr);
    const int variant = uniform(rng, 0, 2);
    if (variant == 0) a["upper"] = -1;
    if (variant == 1) a["lower"] = 0;
    if (variant == 2) a["type"] = f ? f->type : choose(cat.value_types);
    if (wild && chance(rng, 0.5)) a["upper"] = 1;
  } else if (op == "Generalize Reference") {
    const auto ref = choose(cat.references);
    a["reference"] = ref;
    const Feature* f = missing || wild ? nullptr : feature_of(ref);
    if (f) {
      std::vector<std::string> supers;
      for (const auto& s : supertype_closure(mm, f->type)) supers.push_back(s);
      if (chance(rng, 0.6)) a["type"] = pick(supers, rng);
    } else {
      a["type"] = choose(cat.classes);
    }
    if (chance(rng, 0.5)) a["upper"] = -1;
  } else if (op == "Inline Super Class") {
    a["superClass"] = choose(filter(cat.abstract, [&](const auto& p) { return !direct_subclasses(mm, p).empty(); }));
  } else if (op == "Make Class Abstract when Interface") {
    a["class"] = choose(filter(cat.interfaces, [&](const auto& p) { return !mm.find_class(p)->is_abstract; }));
  } else if (op == "Make Reference Containment") {
    a["reference"] = choose(filter(cat.references, [&](const auto& p) { return !feature_of(p)->containment; }));
  } else if (op == "Not Changeable to Suppressed Set Visibility") {
    a["feature"] = choose(filter(cat.features, [&](const auto& p) { return !feature_of(p)->changeable; }));
  } else if (op == "Suppressed Set Visibility to Not Changeable") {
    a["feature"] = choose(filter(cat.features, [&](const auto& p) {
      const Annotation* g = find_annotation(feature_of(p)->annotations, "genmodel");
      return g != nullptr && g->details.count("suppressedSetVisibility") && feature_of(p)->changeable;
    }));
  } else if (op == "Push Down Feature") {
    const auto f = choose(filter(cat.features, [&](const auto& p) { return !direct_subclasses(mm, parent_path(p)).empty(); }));
    a["feature"] = f;
    if (wild || missing) {
      a["targets"] = paths_json(pick_some(any, rng, 1, 2));
    } else {
      a["targets"] = paths_json(pick_some(direct_subclasses(mm, parent_path(f)), rng, 1, 3));
    }
  } else if (op == "Specialize Reference Type") {
    const auto r = choose(filter(cat.references, [&](const auto& p) { return subtype_closure(mm, feature_of(p)->type).size() > 1; }));
    a["reference"] = r;
    if (wild || missing) {
      a["type"] = choose(cat.classes);
    } else {
      auto subs = subtype_closure(mm, feature_of(r)->type);
      subs.erase(subs.begin());
      a["type"] = pick(subs, rng);
    }
  } else if (op == "Specialize Super Type") {
    std::vector<std::array<std::string, 3>> options;
    for (const auto& c : cat.classes) {
      for (const auto& s : mm.find_class(c)->supertypes) {
        for (const auto& t : subtype_closure(mm, s)) {
          if (t != s && t != c && !is_subtype(mm, t, c)) options.push_back({c, s, t});
        }
      }
    }
    if (wild) {
      a["class"] = pick(any, rng);
      a["superType"] = pick(any, rng);
      a["newSuperType"] = pick(any, rng);
    } else if (options.empty()) {
      return std::nullopt;
    } else {
      const auto& o = pick(options, rng);
      a["class"] = o[0];
      a["superType"] = o[1];
      a["newSuperType"] = o[2];
    }
  } else if (op == "Unfold Super Class" || op == "Inheritance to Delegation") {
    const bool delegation = op == "Inheritance to Delegation";
    const auto c = choose(filter(cat.classes, [&](const auto& p) {
      for (const auto& s : mm.find_class(p)->supertypes) {
        if (!delegation || !mm.find_class(s)->is_abstract) return true;
      }
      return false;
    }));
    a["class"] = c;
    if (wild || missing) {
      a["superType"] = choose(cat.classes);
    } else {
      auto supers = mm.find_class(c)->supertypes;
      if (delegation) supers = filter(supers, [&](const auto& s) { return !mm.find_class(s)->is_abstract; });
      a["superType"] = pick(supers, rng);
    }
    if (delegation) a["reference"] = name({"delegate", "base", "a0"});
  } else if (op == "Change Namespace URI") {
    a["package"] = wild ? pick(any, rng) : "p";
    a["nsUri"] = wild ? name({"urn:test:p/1", "", "urn:test:p/3"}) : "urn:test:p/2";
  } else if (op == "Create Annotation") {
    a["element"] = choose(cat.elements);
    a["source"] = name({"extra", "more", "note"});
    if (chance(rng, 0.5)) a["details"] = {{"k", "v"}};
  } else if (op == "Delete Annotation" || op == "Move Annotation") {
    if (wild) {
      a["element"] = pick(any, rng);
      a["source"] = name({"note", "documentation", "nothing"});
    } else if (cat.annotated.empty()) {
      return std::nullopt;
    } else {
      const auto& [el, src] = pick(cat.annotated, rng);
      a["element"] = el;
      a["source"] = src;
    }
    if (op == "Move Annotation") a["target"] = wild ? pick(any, rng) : pick(cat.elements, rng);
  } else if (op == "Create Enumeration") {
    a["package"] = wild ? pick(any, rng) : "p";
    a["name"] = name({"E", "F", "Color"});
    a["literals"] = wild && chance(rng, 0.5) ? json::array({"u", "u"}) : json::array({"u", "v"});
  } else if (op == "Create GMF Constraint") {
    a["element"] = choose(cat.elements);
    a["body"] = "true";
  } else if (op == "Change GMF Constraint") {
    std::vector<std::string> holders;
    for (const auto& [el, src] : cat.annotated) {
      if (src == "gmf.constraint") holders.push_back(el);
    }
    a["element"] = choose(holders);
    a["body"] = "false";
  } else if (op == "Make Feature Volatile") {
    a["feature"] = choose(filter(cat.features, [&](const auto& p) { return !feature_of(p)->is_volatile; }));
  } else if (op == "Replace Enumeration") {
    auto enum_attrs = filter(cat.attributes, [&](const auto& p) {
      const Classifier* t = mm.find_classifier(feature_of(p)->type);
      return t && t->is_enum();
    });
    const auto attr = choose(enum_attrs);
    a["attribute"] = attr;
    const auto target = choose(cat.enums);
    a["enumeration"] = target;
    json mapping = json::object();
    if (!wild && !missing) {
      const Classifier* from = mm.find_classifier(feature_of(attr)->type);
      const Classifier* to = mm.find_classifier(target);
      for (const auto& lit : from->literals) mapping[lit] = pick(to->literals, rng);
      if (chance(rng, 0.1)) mapping.erase(mapping.begin());
    } else {
      mapping["red"] = "small";
    }
    a["mapping"] = mapping;
  } else if (op == "Enumeration to Sub Classes") {
    auto enum_attrs = filter(cat.attributes, [&](const auto& p) {
      const Classifier* t = mm.find_classifier(feature_of(p)->type);
      return t && t->is_enum() && !feature_of(p)->many();
    });
    const auto attr = choose(enum_attrs);
    a["attribute"] = attr;
    a["class"] = wild ? pick(any, rng) : parent_path(attr);
  } else if (op == "Sub Classes to Enumeration") {
    a["class"] = choose(filter(cat.abstract, [&](const auto& p) { return !direct_subclasses(mm, p).empty(); }));
    a["attribute"] = name({"kind", "variant", "a0"});
    if (chance(rng, 0.3)) a["enumeration"] = name({"p.Kind", "p.Color"});
  } else {
    return std::nullopt;
  }
  if (missing) return std::nullopt;
  return app;
}

// ---------------------------------------------------------------------------
// Property

PropertyStats run_transaction_property(const std::string& op, std::uint32_t seed, int wanted, int max_attempts) {
  PropertyStats stats;
  std::mt19937 rng(seed);
  constexpr int kWantedRejections = 5;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (stats.applied >= wanted && stats.rejected >= kWantedRejections) break;
    const bool wild = attempt % 3 == 2;
    const Fixture fixture = random_fixture(rng);
    const auto app = random_application(op, fixture, rng, wild);
    if (!app) continue;
    ++stats.attempts;

    const Metamodel mm_before = fixture.mm;
    const ResourceSet set_before = fixture.set;
    auto fail = [&](const std::string& what) {
      std::ostringstream out;
      out << op << " seed " << seed << " attempt " << attempt << ": " << what << "\n  args " << app->args.dump();
      stats.failures.push_back(out.str());
    };
    auto inputs_unchanged = [&](const char* outcome) {
      if (!(fixture.mm == mm_before) || !(fixture.set == set_before)) fail(std::string(outcome) + " modified its inputs");
    };

    std::vector<ConstraintResult> results;
    try {
      results = check_applicability(*app, fixture.mm);
    } catch (const Error& e) {
      fail(std::string("check_applicability threw ") + e.what());
      continue;
    }
    if (!all_satisfied(results)) {
      ++stats.rejected;
      try {
        apply_coupled(*app, fixture.mm, &fixture.set);
        fail("applied although a constraint failed");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ConstraintViolation) fail(std::string("rejected with ") + e.what());
      }
      inputs_unchanged("rejection");
      continue;
    }
    try {
      const auto result = apply_coupled(*app, fixture.mm, &fixture.set);
      const auto meta = validate_metamodel(result.metamodel);
      const auto violations = check_conformance(*result.model, result.metamodel);
      if (!meta.empty()) fail("invalid metamodel: " + meta.front().rule + " " + meta.front().message);
      if (!violations.empty()) fail("non-conforming model:\n" + format_violations(violations, 5));
      if (meta.empty() && violations.empty()) ++stats.applied;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MigrationError) {
        ++stats.refused;
        ++stats.refusal_reasons[e.reason()];
      } else {
        fail(std::string("constraints held but apply failed: ") + e.what());
      }
    }
    inputs_unchanged("application");
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Scenario

Scenario load_scenario() {
  const fs::path dir = scenario_dir() / "mini-gmf";
  auto files = [&](const fs::path& sub) {
    return std::vector<fs::path>{dir / sub / "figures.model.json", dir / sub / "diagram.model.json"};
  };
  Scenario s{load_history(dir / "history.json"), load_resource_set(files("models/v1.0")),
             load_resource_set(files("expected/v2.0")), load_resource_set(files("expected/v2.1")), {}};
  for (const char* v : {"1.0", "2.0", "2.1"}) {
    s.snapshots.push_back(load_metamodel(dir / "metamodels" / (std::string("gmfgraph-") + v + ".mm.json")));
  }
  return s;
}

}  // namespace coupevo::testing

namespace coupevo::testing {

Metamodel library_metamodel() {
  return metamodel_from_json(json::parse(R"({"packages": [{"name": "lib", "nsUri": "urn:lib/1", "classifiers": [
    {"kind": "datatype", "name": "String", "type": "string"},
    {"kind": "datatype", "name": "Int", "type": "integer"},
    {"kind": "enum", "name": "Genre", "literals": ["novel", "poem"]},
    {"kind": "class", "name": "Item", "abstract": true, "features": [
      {"kind": "attribute", "name": "code", "type": "lib.String", "identifier": true}]},
    {"kind": "class", "name": "Book", "supertypes": ["lib.Item"], "features": [
      {"kind": "attribute", "name": "title", "type": "lib.String", "lower": 1, "defaultValue": "untitled"},
      {"kind": "attribute", "name": "genre", "type": "lib.Genre"},
      {"kind": "reference", "name": "authors", "type": "lib.Person", "upper": -1, "opposite": "lib.Person.wrote"}]},
    {"kind": "class", "name": "Person", "features": [
      {"kind": "attribute", "name": "name", "type": "lib.String"},
      {"kind": "reference", "name": "wrote", "type": "lib.Book", "upper": -1, "opposite": "lib.Book.authors"}]},
    {"kind": "class", "name": "Library", "features": [
      {"kind": "attribute", "name": "name", "type": "lib.String"},
      {"kind": "reference", "name": "books", "type": "lib.Book", "upper": -1, "containment": true},
      {"kind": "reference", "name": "members", "type": "lib.Person", "upper": -1, "containment": true}]}
  ]}]})"));
}

ResourceSet library_model() {
  ResourceSet set;
  set.ns_uri = "urn:lib/1";
  set.resources.push_back(resource_from_json(json::parse(R"({"header": {"nsUri": "urn:lib/1"}, "roots": [
    {"id": "city", "class": "lib.Library", "slots": {"name": ["City"], "books": [
      {"id": "b1", "class": "lib.Book", "slots": {"code": ["B-1"], "title": ["Dune"], "genre": [{"literal": "novel"}],
        "authors": [{"ref": "people.model.json#p1"}]}},
      {"id": "b2", "class": "lib.Book", "slots": {"code": ["B-2"], "title": ["Odes"], "genre": [{"literal": "poem"}],
        "authors": [{"ref": "people.model.json#p1"}, {"ref": "people.model.json#p2"}]}}]}}]})"),
                                             "lib.model.json", nullptr));
  set.resources.push_back(resource_from_json(json::parse(R"({"header": {"nsUri": "urn:lib/1"}, "roots": [
    {"id": "club", "class": "lib.Library", "slots": {"name": ["Club"], "members": [
      {"id": "p1", "class": "lib.Person", "slots": {"name": ["Ann"],
        "wrote": [{"ref": "lib.model.json#b1"}, {"ref": "lib.model.json#b2"}]}},
      {"id": "p2", "class": "lib.Person", "slots": {"name": ["Bo"], "wrote": [{"ref": "lib.model.json#b2"}]}}]}}]})"),
                                             "people.model.json", nullptr));
  return set;
}

}  // namespace coupevo::testing
