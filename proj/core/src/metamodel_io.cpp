#include "coupevo/metamodel_io.hpp"

#include "coupevo/io.hpp"
#include "json_reader.hpp"

namespace coupevo {

using nlohmann::json;
using namespace detail;

namespace {

void put_annotations(json& out, const Annotations& annotations) {
  if (annotations.empty()) return;
  json arr = json::array();
  for (const auto& a : annotations) arr.push_back(to_json(a));
  out["annotations"] = std::move(arr);
}

Annotations read_annotations(const json& doc, const std::string& where) {
  Annotations out;
  const auto& arr = opt_array(doc, "annotations", where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(annotation_from_json(arr[i], at(where, "annotations", i)));
  }
  return out;
}

}  // namespace

json to_json(const Annotation& annotation) {
  json details = json::object();
  for (const auto& [k, v] : annotation.details) details[k] = v;
  return json{{"source", annotation.source}, {"details", std::move(details)}};
}

json to_json(const OperationSignature& operation) {
  json out{{"name", operation.name}, {"params", operation.params}};
  put_annotations(out, operation.annotations);
  return out;
}

json to_json(const Feature& feature) {
  json out{
      {"kind", feature.is_attribute() ? "attribute" : "reference"},
      {"name", feature.name},
      {"type", feature.type},
      {"lower", feature.lower},
      {"upper", feature.upper},
      {"changeable", feature.changeable},
      {"volatile", feature.is_volatile},
      {"ordered", feature.ordered},
  };
  if (feature.is_attribute()) {
    out["identifier"] = feature.identifier;
    if (feature.default_value) out["defaultValue"] = *feature.default_value;
  } else {
    out["containment"] = feature.containment;
    if (feature.opposite) out["opposite"] = *feature.opposite;
  }
  put_annotations(out, feature.annotations);
  return out;
}

json to_json(const Classifier& classifier) {
  json out{{"name", classifier.name}};
  switch (classifier.kind) {
    case ClassifierKind::Class: {
      out["kind"] = "class";
      out["abstract"] = classifier.is_abstract;
      out["interface"] = classifier.is_interface;
      out["supertypes"] = classifier.supertypes;
      json features = json::array();
      for (const auto& f : classifier.features) features.push_back(to_json(f));
      out["features"] = std::move(features);
      json ops = json::array();
      for (const auto& op : classifier.operations) ops.push_back(to_json(op));
      out["operations"] = std::move(ops);
      break;
    }
    case ClassifierKind::Enumeration:
      out["kind"] = "enum";
      out["literals"] = classifier.literals;
      break;
    case ClassifierKind::DataType:
      out["kind"] = "datatype";
      out["type"] = std::string(to_string(classifier.data_kind));
      break;
  }
  put_annotations(out, classifier.annotations);
  return out;
}

json to_json(const Package& package) {
  json classifiers = json::array();
  for (const auto& c : package.classifiers) classifiers.push_back(to_json(c));
  json out{{"name", package.name}, {"nsUri", package.ns_uri}, {"classifiers", std::move(classifiers)}};
  put_annotations(out, package.annotations);
  return out;
}

json to_json(const Metamodel& metamodel) {
  json packages = json::array();
  for (const auto& p : metamodel.packages) packages.push_back(to_json(p));
  return json{{"packages", std::move(packages)}};
}

// ---------------------------------------------------------------------------

Annotation annotation_from_json(const json& doc, const std::string& where) {
  Annotation a;
  a.source = require_string(doc, "source", where);
  if (auto it = doc.find("details"); it != doc.end()) {
    if (!it->is_object()) parse_fail(where + ".details", "expected an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) parse_fail(where + ".details." + k, "expected a string");
      a.details[k] = v.get<std::string>();
    }
  }
  return a;
}

OperationSignature operation_from_json(const json& doc, const std::string& where) {
  OperationSignature op;
  op.name = require_string(doc, "name", where);
  op.params = opt_string_list(doc, "params", where);
  op.annotations = read_annotations(doc, where);
  return op;
}

Feature feature_from_json(const json& doc, const std::string& where) {
  Feature f;
  const std::string kind = require_string(doc, "kind", where);
  if (kind == "attribute") {
    f.kind = FeatureKind::Attribute;
  } else if (kind == "reference") {
    f.kind = FeatureKind::Reference;
  } else {
    parse_fail(where + ".kind", "unknown feature kind '" + kind + "'");
  }
  f.name = require_string(doc, "name", where);
  f.type = require_string(doc, "type", where);
  f.lower = opt_int(doc, "lower", where, 0);
  f.upper = opt_int(doc, "upper", where, 1);
  f.changeable = opt_bool(doc, "changeable", where, true);
  f.is_volatile = opt_bool(doc, "volatile", where, false);
  f.ordered = opt_bool(doc, "ordered", where, true);
  f.identifier = opt_bool(doc, "identifier", where, false);
  if (doc.contains("defaultValue")) f.default_value = require_string(doc, "defaultValue", where);
  f.containment = opt_bool(doc, "containment", where, false);
  if (doc.contains("opposite")) f.opposite = require_string(doc, "opposite", where);
  f.annotations = read_annotations(doc, where);
  return f;
}

Classifier classifier_from_json(const json& doc, const std::string& where) {
  Classifier c;
  const std::string kind = require_string(doc, "kind", where);
  c.name = require_string(doc, "name", where);
  if (kind == "class") {
    c.kind = ClassifierKind::Class;
    c.is_abstract = opt_bool(doc, "abstract", where, false);
    c.is_interface = opt_bool(doc, "interface", where, false);
    c.supertypes = opt_string_list(doc, "supertypes", where);
    const auto& features = opt_array(doc, "features", where);
    for (std::size_t i = 0; i < features.size(); ++i) {
      c.features.push_back(feature_from_json(features[i], at(where, "features", i)));
    }
    const auto& ops = opt_array(doc, "operations", where);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      c.operations.push_back(operation_from_json(ops[i], at(where, "operations", i)));
    }
  } else if (kind == "enum") {
    c.kind = ClassifierKind::Enumeration;
    c.literals = opt_string_list(doc, "literals", where);
  } else if (kind == "datatype") {
    c.kind = ClassifierKind::DataType;
    const std::string type = require_string(doc, "type", where);
    auto parsed = parse_data_kind(type);
    if (!parsed) parse_fail(where + ".type", "unknown data kind '" + type + "'");
    c.data_kind = *parsed;
  } else {
    parse_fail(where + ".kind", "unknown classifier kind '" + kind + "'");
  }
  c.annotations = read_annotations(doc, where);
  return c;
}

Package package_from_json(const json& doc, const std::string& where) {
  Package p;
  p.name = require_string(doc, "name", where);
  p.ns_uri = require_string(doc, "nsUri", where);
  const auto& classifiers = opt_array(doc, "classifiers", where);
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    p.classifiers.push_back(classifier_from_json(classifiers[i], at(where, "classifiers", i)));
  }
  p.annotations = read_annotations(doc, where);
  return p;
}

Metamodel metamodel_from_json(const json& doc, const std::string& where) {
  Metamodel mm;
  const auto& packages = require(doc, "packages", where);
  if (!packages.is_array()) parse_fail(where + ".packages", "expected an array");
  for (std::size_t i = 0; i < packages.size(); ++i) {
    mm.packages.push_back(package_from_json(packages[i], at(where, "packages", i)));
  }
  return mm;
}

Metamodel load_metamodel(const std::filesystem::path& path) {
  return metamodel_from_json(parse_json_file(path), path.filename().string());
}

void save_metamodel(const Metamodel& metamodel, const std::filesystem::path& path) {
  write_file_atomic(path, dump_canonical(to_json(metamodel)));
}

}  // namespace coupevo
