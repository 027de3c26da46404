#include "coupevo/history.hpp"

#include "coupevo/io.hpp"
#include "coupevo/metamodel_io.hpp"
#include "json_reader.hpp"

namespace coupevo {

using nlohmann::json;
using namespace detail;

namespace {

json change_to_json(const Change& change) {
  if (const auto* op = std::get_if<OperationApplication>(&change)) {
    return json{{"kind", "op"}, {"op", op->op}, {"args", op->args.is_null() ? json::object() : op->args}};
  }
  if (const auto* p = std::get_if<PrimitiveChange>(&change)) {
    return json{{"kind", "primitive"}, {"primitive", to_string(p->kind)}, {"target", p->target}, {"payload", p->payload}};
  }
  const auto& c = std::get<CustomMigration>(change);
  json out{{"kind", "custom"}, {"hook", c.hook}, {"span", c.span}};
  if (!c.label.empty()) out["label"] = c.label;
  return out;
}

Change change_from_json(const json& doc, const std::string& where) {
  const std::string kind = require_string(doc, "kind", where);
  if (kind == "op") {
    OperationApplication app;
    app.op = require_string(doc, "op", where);
    if (find_operation(app.op) == nullptr) {
      throw Error(ErrorCode::UnknownOperation, where + ": unknown operation '" + app.op + "'");
    }
    app.args = doc.value("args", json::object());
    if (!app.args.is_object()) parse_fail(where + ".args", "expected an object");
    return app;
  }
  if (kind == "primitive") {
    PrimitiveChange p;
    const std::string name = require_string(doc, "primitive", where);
    auto parsed = parse_primitive_kind(name);
    if (!parsed) parse_fail(where + ".primitive", "unknown primitive '" + name + "'");
    p.kind = *parsed;
    p.target = opt_string(doc, "target", where);
    p.payload = doc.value("payload", json());
    return p;
  }
  if (kind == "custom") {
    CustomMigration c;
    c.hook = require_string(doc, "hook", where);
    c.span = opt_int(doc, "span", where, 0);
    c.label = opt_string(doc, "label", where);
    return c;
  }
  parse_fail(where + ".kind", "unknown change kind '" + kind + "'");
}

}  // namespace

json to_json(const History& history) {
  json releases = json::array();
  for (const auto& r : history.releases()) {
    json changes = json::array();
    for (const auto& c : r.changes) changes.push_back(change_to_json(c));
    releases.push_back(json{{"label", r.label}, {"released", r.released}, {"changes", std::move(changes)}});
  }
  return json{{"initialMetamodel", to_json(history.initial())}, {"releases", std::move(releases)}};
}

History history_from_json(const json& doc, const std::string& where) {
  Metamodel initial = metamodel_from_json(require(doc, "initialMetamodel", where), where + ".initialMetamodel");
  std::vector<Release> releases;
  const auto& arr = opt_array(doc, "releases", where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string rw = at(where, "releases", i);
    Release r;
    r.label = require_string(arr[i], "label", rw);
    r.released = opt_bool(arr[i], "released", rw, false);
    const auto& changes = opt_array(arr[i], "changes", rw);
    for (std::size_t j = 0; j < changes.size(); ++j) r.changes.push_back(change_from_json(changes[j], at(rw, "changes", j)));
    releases.push_back(std::move(r));
  }
  if (releases.empty()) releases.push_back(Release{"0", false, {}});
  return History(std::move(initial), std::move(releases));
}

History load_history(const std::filesystem::path& path) {
  return history_from_json(parse_json_file(path), path.filename().string());
}

void save_history(const History& history, const std::filesystem::path& path) {
  write_file_atomic(path, dump_canonical(to_json(history)));
}

}  // namespace coupevo
