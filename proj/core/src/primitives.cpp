#include "coupevo/primitive.hpp"

#include <algorithm>

#include "coupevo/error.hpp"
#include "coupevo/metamodel_io.hpp"

namespace coupevo {

using nlohmann::json;

std::string_view to_string(PrimitiveKind kind) noexcept {
  switch (kind) {
    case PrimitiveKind::Create: return "create";
    case PrimitiveKind::Delete: return "delete";
    case PrimitiveKind::Set: return "set";
    case PrimitiveKind::Add: return "add";
    case PrimitiveKind::Remove: return "remove";
  }
  return "?";
}

std::optional<PrimitiveKind> parse_primitive_kind(std::string_view text) noexcept {
  for (auto k : {PrimitiveKind::Create, PrimitiveKind::Delete, PrimitiveKind::Set, PrimitiveKind::Add,
                 PrimitiveKind::Remove}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const PrimitiveChange& change, const std::string& message) {
  throw Error(ErrorCode::ReplayError, describe(change) + ": " + message);
}

Element target_element(Metamodel& mm, const PrimitiveChange& change) {
  try {
    return resolve(mm, ElementRef{change.target});
  } catch (const Error& e) {
    fail(change, e.what());
  }
}

const json& payload_field(const PrimitiveChange& change, const char* key) {
  if (!change.payload.is_object() || !change.payload.contains(key)) fail(change, std::string("payload lacks '") + key + "'");
  return change.payload.at(key);
}

std::string payload_string(const PrimitiveChange& change, const char* key) {
  const json& v = payload_field(change, key);
  if (!v.is_string()) fail(change, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

template <typename T, typename Pred>
void erase_one(std::vector<T>& items, Pred pred, const PrimitiveChange& change) {
  auto it = std::find_if(items.begin(), items.end(), pred);
  if (it == items.end()) fail(change, "nothing to delete");
  items.erase(it);
}

void apply_create(Metamodel& mm, const PrimitiveChange& change) {
  const std::string element = payload_string(change, "element");
  const json& doc = payload_field(change, "document");
  const std::string where = "primitive.document";
  try {
    if (element == "package") {
      if (!change.target.empty()) fail(change, "packages are created at the root");
      mm.packages.push_back(package_from_json(doc, where));
      return;
    }
    if (element == "annotation") {
      target_element(mm, change).annotations().push_back(annotation_from_json(doc, where));
      return;
    }
    Element owner = target_element(mm, change);
    if (element == "classifier") {
      if (owner.kind != ElementKind::Package) fail(change, "classifiers belong to packages");
      owner.package->classifiers.push_back(classifier_from_json(doc, where));
    } else if (element == "feature" || element == "operation") {
      if (owner.kind != ElementKind::Classifier || !owner.classifier->is_class()) fail(change, element + "s belong to classes");
      if (element == "feature") {
        owner.classifier->features.push_back(feature_from_json(doc, where));
      } else {
        owner.classifier->operations.push_back(operation_from_json(doc, where));
      }
    } else {
      fail(change, "unknown element kind '" + element + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ReplayError) throw;
    fail(change, e.what());
  }
}

void apply_delete(Metamodel& mm, const PrimitiveChange& change) {
  if (change.payload.is_object() && change.payload.contains("annotation")) {
    const std::string source = payload_string(change, "annotation");
    erase_one(target_element(mm, change).annotations(), [&](const Annotation& a) { return a.source == source; }, change);
    return;
  }
  Element e = target_element(mm, change);
  const std::string name = last_segment(change.target);
  switch (e.kind) {
    case ElementKind::Package:
      erase_one(mm.packages, [&](const Package& p) { return p.name == name; }, change);
      break;
    case ElementKind::Classifier: {
      Package* pkg = mm.find_package(parent_path(change.target));
      erase_one(pkg->classifiers, [&](const Classifier& c) { return c.name == name; }, change);
      break;
    }
    case ElementKind::Feature: {
      Classifier* owner = mm.find_classifier(parent_path(change.target));
      erase_one(owner->features, [&](const Feature& f) { return f.name == name; }, change);
      break;
    }
    case ElementKind::Operation: {
      Classifier* owner = mm.find_classifier(parent_path(change.target));
      erase_one(owner->operations, [&](const OperationSignature& o) { return o.name == name; }, change);
      break;
    }
  }
}

bool get_bool(const PrimitiveChange& change, const json& v) {
  if (!v.is_boolean()) fail(change, "expected a boolean value");
  return v.get<bool>();
}

int get_int(const PrimitiveChange& change, const json& v) {
  if (!v.is_number_integer()) fail(change, "expected an integer value");
  return v.get<int>();
}

std::optional<std::string> get_opt_string(const PrimitiveChange& change, const json& v) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) fail(change, "expected a string or null value");
  return v.get<std::string>();
}

void apply_set(Metamodel& mm, const PrimitiveChange& change) {
  const std::string property = payload_string(change, "property");
  const json& v = payload_field(change, "value");
  Element e = target_element(mm, change);
  switch (e.kind) {
    case ElementKind::Package:
      if (property == "nsUri") {
        e.package->ns_uri = get_opt_string(change, v).value_or("");
        return;
      }
      break;
    case ElementKind::Classifier: {
      Classifier& c = *e.classifier;
      if (property == "abstract") return void(c.is_abstract = get_bool(change, v));
      if (property == "interface") return void(c.is_interface = get_bool(change, v));
      if (property == "type" && c.is_datatype()) {
        auto kind = parse_data_kind(get_opt_string(change, v).value_or(""));
        if (!kind) fail(change, "unknown datatype kind");
        c.data_kind = *kind;
        return;
      }
      break;
    }
    case ElementKind::Feature: {
      Feature& f = *e.feature;
      if (property == "lower") return void(f.lower = get_int(change, v));
      if (property == "upper") return void(f.upper = get_int(change, v));
      if (property == "type") {
        auto t = get_opt_string(change, v);
        if (!t) fail(change, "type cannot be cleared");
        f.type = *t;
        return;
      }
      if (property == "changeable") return void(f.changeable = get_bool(change, v));
      if (property == "volatile") return void(f.is_volatile = get_bool(change, v));
      if (property == "ordered") return void(f.ordered = get_bool(change, v));
      if (property == "identifier") return void(f.identifier = get_bool(change, v));
      if (property == "containment") return void(f.containment = get_bool(change, v));
      if (property == "defaultValue") return void(f.default_value = get_opt_string(change, v));
      if (property == "opposite") return void(f.opposite = get_opt_string(change, v));
      break;
    }
    case ElementKind::Operation:
      break;
  }
  fail(change, "property '" + property + "' cannot be set on a " + std::string(to_string(e.kind)));
}

std::vector<std::string>* list_property(Element& e, const std::string& property) {
  if (e.kind == ElementKind::Classifier && property == "supertypes" && e.classifier->is_class()) return &e.classifier->supertypes;
  if (e.kind == ElementKind::Classifier && property == "literals" && e.classifier->is_enum()) return &e.classifier->literals;
  if (e.kind == ElementKind::Operation && property == "params") return &e.operation->params;
  return nullptr;
}

void apply_list_edit(Metamodel& mm, const PrimitiveChange& change) {
  const std::string property = payload_string(change, "property");
  const std::string value = payload_string(change, "value");
  Element e = target_element(mm, change);
  auto* list = list_property(e, property);
  if (list == nullptr) fail(change, "no list property '" + property + "' on " + change.target);
  if (change.kind == PrimitiveKind::Add) {
    list->push_back(value);
  } else {
    erase_one(*list, [&](const std::string& s) { return s == value; }, change);
  }
}

}  // namespace

void apply_primitive(Metamodel& metamodel, const PrimitiveChange& change) {
  switch (change.kind) {
    case PrimitiveKind::Create: apply_create(metamodel, change); break;
    case PrimitiveKind::Delete: apply_delete(metamodel, change); break;
    case PrimitiveKind::Set: apply_set(metamodel, change); break;
    case PrimitiveKind::Add:
    case PrimitiveKind::Remove: apply_list_edit(metamodel, change); break;
  }
}

std::string describe(const PrimitiveChange& change) {
  std::string out = std::string(to_string(change.kind)) + " " + (change.target.empty() ? "<root>" : change.target);
  if (change.payload.is_object()) {
    if (change.payload.contains("property")) out += "." + change.payload.value("property", std::string());
    if (change.payload.contains("value")) out += " = " + change.payload.at("value").dump();
    if (change.payload.contains("element")) {
      out += " " + change.payload.value("element", std::string());
      const json& doc = change.payload.value("document", json());
      if (doc.is_object() && doc.contains("name")) out += " " + doc.at("name").dump();
      if (doc.is_object() && doc.contains("source")) out += " " + doc.at("source").dump();
    }
    if (change.payload.contains("annotation")) out += " annotation " + change.payload.at("annotation").dump();
  }
  return out;
}

}  // namespace coupevo
