#include "coupevo/model_edit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coupevo/error.hpp"

namespace coupevo {

std::vector<ObjectKey> instances_of(const ResourceSet& set, const Metamodel& metamodel,
                                    std::string_view class_name, bool include_subtypes) {
  std::vector<ObjectKey> out;
  for (auto& key : document_order(set)) {
    const MObject* obj = set.find(key);
    const bool match = include_subtypes ? is_subtype(metamodel, obj->class_name, class_name)
                                        : obj->class_name == class_name;
    if (match) out.push_back(std::move(key));
  }
  return out;
}

MObject& require_object(ResourceSet& set, const ObjectKey& key) {
  MObject* obj = set.find(key);
  if (obj == nullptr) throw Error(ErrorCode::UnknownObject, "no object " + to_string(key));
  return *obj;
}

const MObject& require_object(const ResourceSet& set, const ObjectKey& key) {
  const MObject* obj = set.find(key);
  if (obj == nullptr) throw Error(ErrorCode::UnknownObject, "no object " + to_string(key));
  return *obj;
}

void set_slot(ResourceSet& set, const ObjectKey& key, std::string_view feature, ValueList values) {
  MObject& obj = require_object(set, key);
  if (values.empty()) {
    obj.slots.erase(std::string(feature));
  } else {
    obj.slots[std::string(feature)] = std::move(values);
  }
}

void unset_slot(ResourceSet& set, const ObjectKey& key, std::string_view feature) {
  require_object(set, key).slots.erase(std::string(feature));
}

void add_value(ResourceSet& set, const ObjectKey& key, std::string_view feature, Value value) {
  require_object(set, key).slots[std::string(feature)].push_back(std::move(value));
}

void remove_value(ResourceSet& set, const ObjectKey& key, std::string_view feature, const Value& value) {
  MObject& obj = require_object(set, key);
  auto it = obj.slots.find(std::string(feature));
  if (it == obj.slots.end()) return;
  auto& values = it->second;
  values.erase(std::remove(values.begin(), values.end(), value), values.end());
  if (values.empty()) obj.slots.erase(it);
}

ObjectKey create_object(ResourceSet& set, std::string_view resource, std::string class_name,
                        std::string_view id_hint) {
  Resource* r = set.find_resource(resource);
  if (r == nullptr) throw Error(ErrorCode::UnknownObject, "no resource " + std::string(resource));
  MObject obj;
  obj.id = r->fresh_id(id_hint.empty() ? std::string_view("obj") : id_hint);
  obj.class_name = std::move(class_name);
  ObjectKey key{r->uri(), obj.id};
  r->insert(std::move(obj));
  return key;
}

void add_root(ResourceSet& set, const ObjectKey& key) {
  require_object(set, key);
  set.find_resource(key.resource)->roots.push_back(key.id);
}

void attach_child(ResourceSet& set, const ObjectKey& container, std::string_view feature,
                  const ObjectKey& child) {
  require_object(set, child);
  if (child.resource != container.resource) {
    throw Error(ErrorCode::InconsistentModel,
                "cannot contain " + to_string(child) + " from another resource in " + to_string(container));
  }
  add_value(set, container, feature, Value::child(child));
}

std::optional<ContainerInfo> container_of(const ResourceSet& set, const ObjectKey& key) {
  const Resource* r = set.find_resource(key.resource);
  if (r == nullptr) return std::nullopt;
  for (const auto& [id, obj] : r->objects()) {
    for (const auto& [name, values] : obj.slots) {
      for (const auto& v : values) {
        if (v.kind == ValueKind::Child && v.target == key) return ContainerInfo{{r->uri(), id}, name};
      }
    }
  }
  return std::nullopt;
}

bool contains_transitively(const ResourceSet& set, const ObjectKey& ancestor, const ObjectKey& key) {
  ObjectKey cur = key;
  std::set<ObjectKey> seen;
  while (seen.insert(cur).second) {
    if (cur == ancestor) return true;
    auto parent = container_of(set, cur);
    if (!parent) return false;
    cur = parent->container;
  }
  return false;
}

void detach(ResourceSet& set, const ObjectKey& key) {
  require_object(set, key);
  Resource* r = set.find_resource(key.resource);
  auto& roots = r->roots;
  roots.erase(std::remove(roots.begin(), roots.end(), key.id), roots.end());
  if (auto parent = container_of(set, key)) {
    remove_value(set, parent->container, parent->feature, Value::child(key));
  }
}

namespace {

std::vector<ObjectKey> subtree(const ResourceSet& set, const ObjectKey& root) {
  std::vector<ObjectKey> out;
  std::set<ObjectKey> seen;
  std::vector<ObjectKey> stack{root};
  while (!stack.empty()) {
    ObjectKey key = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(key).second) continue;
    const MObject* obj = set.find(key);
    if (obj == nullptr) continue;
    out.push_back(key);
    for (const auto& [name, values] : obj->slots) {
      for (const auto& v : values) {
        if (v.kind == ValueKind::Child) stack.push_back(v.target);
      }
    }
  }
  return out;
}

void rewrite_values(ResourceSet& set, const std::map<ObjectKey, ObjectKey>& renames) {
  if (renames.empty()) return;
  for (auto& r : set.resources) {
    for (auto& [id, obj] : r.objects()) {
      for (auto& [name, values] : obj.slots) {
        for (auto& v : values) {
          if (!v.is_object_value()) continue;
          if (auto it = renames.find(v.target); it != renames.end()) v.target = it->second;
        }
      }
    }
  }
}

}  // namespace

ObjectKey relocate(ResourceSet& set, const ObjectKey& key, std::string_view resource) {
  if (key.resource == resource) return key;
  Resource* dest = set.find_resource(resource);
  if (dest == nullptr) throw Error(ErrorCode::UnknownObject, "no resource " + std::string(resource));
  if (container_of(set, key)) {
    throw Error(ErrorCode::InconsistentModel, "relocate requires a detached object: " + to_string(key));
  }
  Resource* src = set.find_resource(key.resource);
  auto& roots = src->roots;
  roots.erase(std::remove(roots.begin(), roots.end(), key.id), roots.end());

  std::map<ObjectKey, ObjectKey> renames;
  for (const auto& old_key : subtree(set, key)) {
    MObject obj = *src->find(old_key.id);
    src->erase(old_key.id);
    obj.id = dest->fresh_id(obj.id);
    ObjectKey new_key{dest->uri(), obj.id};
    dest->insert(std::move(obj));
    renames.emplace(old_key, std::move(new_key));
  }
  rewrite_values(set, renames);
  return renames.at(key);
}

ObjectKey move_into(ResourceSet& set, const ObjectKey& object, const ObjectKey& container,
                    std::string_view feature) {
  require_object(set, container);
  detach(set, object);
  ObjectKey moved = relocate(set, object, container.resource);
  attach_child(set, container, feature, moved);
  return moved;
}

std::vector<ObjectKey> delete_object(ResourceSet& set, const ObjectKey& key) {
  require_object(set, key);
  detach(set, key);
  std::vector<ObjectKey> doomed = subtree(set, key);
  const std::set<ObjectKey> doomed_set(doomed.begin(), doomed.end());
  for (const auto& k : doomed) set.find_resource(k.resource)->erase(k.id);
  for (auto& r : set.resources) {
    for (auto& [id, obj] : r.objects()) {
      for (auto it = obj.slots.begin(); it != obj.slots.end();) {
        auto& values = it->second;
        values.erase(std::remove_if(values.begin(), values.end(),
                                    [&](const Value& v) { return v.is_object_value() && doomed_set.count(v.target); }),
                     values.end());
        it = values.empty() ? obj.slots.erase(it) : std::next(it);
      }
    }
  }
  return doomed;
}

void retype_object(ResourceSet& set, const Metamodel& metamodel, const ObjectKey& key,
                   std::string class_name) {
  MObject& obj = require_object(set, key);
  if (metamodel.find_class(class_name) == nullptr) {
    throw Error(ErrorCode::UnknownClass, "no class '" + class_name + "'");
  }
  obj.class_name = std::move(class_name);
}

void replace_references(ResourceSet& set, const ObjectKey& from, const ObjectKey& to) {
  for (auto& r : set.resources) {
    for (auto& [id, obj] : r.objects()) {
      for (auto& [name, values] : obj.slots) {
        for (auto& v : values) {
          if (v.kind == ValueKind::Ref && v.target == from) v.target = to;
        }
      }
    }
  }
}

}  // namespace coupevo
