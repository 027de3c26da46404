#include "coupevo/model_io.hpp"

#include <deque>
#include <set>

#include "coupevo/error.hpp"
#include "coupevo/io.hpp"
#include "json_reader.hpp"

namespace coupevo {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace detail;

namespace {

std::string normalize_uri(const fs::path& p) {
  return p.lexically_normal().generic_string();
}

/// uri of `ref_path` (as written inside `from_uri`) relative to the set base.
std::string resolve_resource_uri(const std::string& from_uri, const std::string& ref_path) {
  return normalize_uri(fs::path(from_uri).parent_path() / ref_path);
}

std::string relative_ref(const std::string& from_uri, const std::string& to_uri) {
  const fs::path from_dir = fs::path(from_uri).parent_path();
  return fs::path(to_uri).lexically_relative(from_dir.empty() ? fs::path(".") : from_dir).generic_string();
}

class ResourceParser {
 public:
  ResourceParser(Resource& resource) : resource_(resource) {}

  std::string parse_object(const json& doc, const std::string& where) {
    MObject obj;
    obj.id = require_string(doc, "id", where);
    obj.class_name = require_string(doc, "class", where);
    if (auto it = doc.find("slots"); it != doc.end()) {
      if (!it->is_object()) parse_fail(where + ".slots", "expected an object");
      for (const auto& [name, values] : it->items()) {
        const std::string slot_where = where + ".slots." + name;
        if (!values.is_array()) parse_fail(slot_where, "expected an array");
        ValueList list;
        for (std::size_t i = 0; i < values.size(); ++i) {
          list.push_back(parse_value(values[i], slot_where + "[" + std::to_string(i) + "]"));
        }
        if (!list.empty()) obj.slots.emplace(name, std::move(list));
      }
    }
    std::string id = obj.id;
    if (resource_.contains(id)) parse_fail(where, "duplicate object id '" + id + "'");
    resource_.insert(std::move(obj));
    return id;
  }

 private:
  Value parse_value(const json& v, const std::string& where) {
    if (v.is_string() || v.is_number() || v.is_boolean()) return Value::of(v);
    if (!v.is_object()) parse_fail(where, "unsupported value");
    if (v.contains("literal")) return Value::enum_literal(require_string(v, "literal", where));
    if (v.contains("ref")) {
      const std::string text = require_string(v, "ref", where);
      const auto hash = text.find('#');
      if (hash == std::string::npos || hash + 1 == text.size()) {
        parse_fail(where, "reference '" + text + "' lacks '#id'");
      }
      ObjectKey key;
      key.id = text.substr(hash + 1);
      key.resource = hash == 0 ? resource_.uri() : resolve_resource_uri(resource_.uri(), text.substr(0, hash));
      return Value::ref(std::move(key));
    }
    if (v.contains("id") && v.contains("class")) {
      std::string id = parse_object(v, where);
      return Value::child({resource_.uri(), std::move(id)});
    }
    parse_fail(where, "unrecognised value object");
  }

  Resource& resource_;
};

void object_to_json(const ResourceSet& set, const Resource& resource, const MObject& obj,
                    std::set<std::string, std::less<>>& written, json& out) {
  if (!written.insert(obj.id).second) {
    throw Error(ErrorCode::InconsistentModel,
                "object '" + obj.id + "' in " + resource.uri() + " is contained twice");
  }
  out = json{{"id", obj.id}, {"class", obj.class_name}};
  if (obj.slots.empty()) return;
  json slots = json::object();
  for (const auto& [name, values] : obj.slots) {
    json arr = json::array();
    for (const auto& v : values) {
      switch (v.kind) {
        case ValueKind::Primitive: arr.push_back(v.primitive); break;
        case ValueKind::Enum: arr.push_back(json{{"literal", v.literal}}); break;
        case ValueKind::Ref: {
          const std::string prefix =
              v.target.resource == resource.uri() ? std::string() : relative_ref(resource.uri(), v.target.resource);
          arr.push_back(json{{"ref", prefix + "#" + v.target.id}});
          break;
        }
        case ValueKind::Child: {
          const MObject* child = v.target.resource == resource.uri() ? resource.find(v.target.id) : nullptr;
          if (child == nullptr) {
            throw Error(ErrorCode::InconsistentModel,
                        "child '" + to_string(v.target) + "' of " + obj.id + " is missing");
          }
          json nested;
          object_to_json(set, resource, *child, written, nested);
          arr.push_back(std::move(nested));
          break;
        }
      }
    }
    slots[name] = std::move(arr);
  }
  out["slots"] = std::move(slots);
}

}  // namespace

Resource resource_from_json(const json& doc, const std::string& uri, std::string* ns_uri) {
  Resource resource(uri);
  const auto& header = require(doc, "header", uri);
  const std::string ns = require_string(header, "nsUri", uri + ".header");
  if (ns_uri != nullptr) *ns_uri = ns;
  for (const auto& member : opt_string_list(header, "members", uri + ".header")) {
    resource.members.push_back(member);
  }
  const auto& roots = require(doc, "roots", uri);
  if (!roots.is_array()) parse_fail(uri + ".roots", "expected an array");
  ResourceParser parser(resource);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    resource.roots.push_back(parser.parse_object(roots[i], at(uri, "roots", i)));
  }
  return resource;
}

ResourceSet load_resource_set(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw Error(ErrorCode::IoError, "no model files given");
  ResourceSet set;
  const fs::path first = fs::absolute(paths.front()).lexically_normal();
  set.base_dir = first.parent_path();

  std::deque<std::string> queue;
  for (const auto& p : paths) {
    queue.push_back(normalize_uri(fs::absolute(p).lexically_normal().lexically_relative(set.base_dir)));
  }
  bool have_ns = false;
  while (!queue.empty()) {
    const std::string uri = queue.front();
    queue.pop_front();
    if (set.find_resource(uri) != nullptr) continue;
    const fs::path file = set.base_dir / uri;
    if (!fs::exists(file)) {
      throw Error(ErrorCode::UnresolvedRef, "referenced file " + file.string() + " does not exist");
    }
    std::string ns;
    Resource resource = resource_from_json(parse_json_file(file), uri, &ns);
    if (!have_ns) {
      set.ns_uri = ns;
      have_ns = true;
    } else if (ns != set.ns_uri) {
      throw Error(ErrorCode::MixedNsUri,
                  uri + " declares " + ns + " but the set uses " + set.ns_uri);
    }
    for (const auto& member : resource.members) queue.push_back(resolve_resource_uri(uri, member));
    for (const auto& [id, obj] : resource.objects()) {
      for (const auto& [name, values] : obj.slots) {
        for (const auto& v : values) {
          if (v.kind == ValueKind::Ref && v.target.resource != uri) queue.push_back(v.target.resource);
        }
      }
    }
    set.resources.push_back(std::move(resource));
  }

  for (const auto& r : set.resources) {
    for (const auto& [id, obj] : r.objects()) {
      for (const auto& [name, values] : obj.slots) {
        for (const auto& v : values) {
          if (v.kind == ValueKind::Ref && set.find(v.target) == nullptr) {
            throw Error(ErrorCode::UnresolvedRef,
                        r.uri() + "#" + id + "." + name + " refers to missing object '" + v.target.id +
                            "' in " + v.target.resource);
          }
        }
      }
    }
  }
  return set;
}

json resource_to_json(const ResourceSet& set, const Resource& resource) {
  json header{{"nsUri", set.ns_uri}};
  if (!resource.members.empty()) header["members"] = resource.members;
  json roots = json::array();
  std::set<std::string, std::less<>> written;
  for (const auto& id : resource.roots) {
    const MObject* obj = resource.find(id);
    if (obj == nullptr) {
      throw Error(ErrorCode::InconsistentModel, "root '" + id + "' of " + resource.uri() + " is missing");
    }
    json doc;
    object_to_json(set, resource, *obj, written, doc);
    roots.push_back(std::move(doc));
  }
  if (written.size() != resource.objects().size()) {
    for (const auto& [id, obj] : resource.objects()) {
      if (!written.count(id)) {
        throw Error(ErrorCode::InconsistentModel,
                    "object '" + id + "' in " + resource.uri() + " is neither a root nor contained");
      }
    }
  }
  return json{{"header", std::move(header)}, {"roots", std::move(roots)}};
}

std::vector<fs::path> save_resource_set(const ResourceSet& set, const fs::path& out_dir) {
  std::vector<std::pair<fs::path, std::string>> rendered;
  for (const auto& r : set.resources) {
    rendered.emplace_back(out_dir / r.uri(), dump_canonical(resource_to_json(set, r)));
  }
  std::vector<fs::path> written;
  for (auto& [path, text] : rendered) {
    write_file_atomic(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace coupevo
