#include "coupevo/model.hpp"

#include <algorithm>
#include <set>

#include "coupevo/error.hpp"

namespace coupevo {

std::string to_string(const ObjectKey& key) {
  return key.resource + "#" + key.id;
}

Value Value::of(nlohmann::json scalar) {
  Value v;
  v.kind = ValueKind::Primitive;
  v.primitive = std::move(scalar);
  return v;
}

Value Value::enum_literal(std::string literal) {
  Value v;
  v.kind = ValueKind::Enum;
  v.literal = std::move(literal);
  return v;
}

Value Value::ref(ObjectKey target) {
  Value v;
  v.kind = ValueKind::Ref;
  v.target = std::move(target);
  return v;
}

Value Value::child(ObjectKey target) {
  Value v;
  v.kind = ValueKind::Child;
  v.target = std::move(target);
  return v;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Primitive: return a.primitive == b.primitive;
    case ValueKind::Enum: return a.literal == b.literal;
    case ValueKind::Ref:
    case ValueKind::Child: return a.target == b.target;
  }
  return false;
}

std::string to_string(const Value& value) {
  switch (value.kind) {
    case ValueKind::Primitive: return value.primitive.dump();
    case ValueKind::Enum: return value.literal;
    case ValueKind::Ref: return "->" + to_string(value.target);
    case ValueKind::Child: return "<>" + to_string(value.target);
  }
  return {};
}

const ValueList* MObject::slot(std::string_view feature) const {
  for (const auto& [name, values] : slots) {
    if (name == feature) return &values;
  }
  return nullptr;
}

ValueList* MObject::slot(std::string_view feature) {
  for (auto& [name, values] : slots) {
    if (name == feature) return &values;
  }
  return nullptr;
}

const MObject* Resource::find(std::string_view id) const {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

MObject* Resource::find(std::string_view id) {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

MObject& Resource::insert(MObject object) {
  if (object.id.empty()) {
    throw Error(ErrorCode::InconsistentModel, "object without id in " + uri_);
  }
  auto [it, inserted] = objects_.emplace(object.id, std::move(object));
  if (!inserted) {
    throw Error(ErrorCode::InconsistentModel, "duplicate object id '" + it->first + "' in " + uri_);
  }
  return it->second;
}

void Resource::erase(std::string_view id) {
  auto it = objects_.find(id);
  if (it != objects_.end()) objects_.erase(it);
}

std::string Resource::fresh_id(std::string_view base) const {
  std::string candidate(base);
  for (int n = 2; contains(candidate); ++n) {
    candidate = std::string(base) + "_" + std::to_string(n);
  }
  return candidate;
}

Resource* ResourceSet::find_resource(std::string_view uri) {
  for (auto& r : resources) {
    if (r.uri() == uri) return &r;
  }
  return nullptr;
}

const Resource* ResourceSet::find_resource(std::string_view uri) const {
  for (const auto& r : resources) {
    if (r.uri() == uri) return &r;
  }
  return nullptr;
}

const MObject* ResourceSet::find(const ObjectKey& key) const {
  const Resource* r = find_resource(key.resource);
  return r == nullptr ? nullptr : r->find(key.id);
}

MObject* ResourceSet::find(const ObjectKey& key) {
  Resource* r = find_resource(key.resource);
  return r == nullptr ? nullptr : r->find(key.id);
}

std::size_t ResourceSet::object_count() const {
  std::size_t n = 0;
  for (const auto& r : resources) n += r.objects().size();
  return n;
}

std::vector<const MObject*> document_order(const Resource& resource) {
  std::vector<const MObject*> out;
  std::set<std::string, std::less<>> seen;
  std::vector<const MObject*> stack;
  auto visit_from = [&](const MObject* start) {
    stack.push_back(start);
    while (!stack.empty()) {
      const MObject* obj = stack.back();
      stack.pop_back();
      if (!seen.insert(obj->id).second) continue;
      out.push_back(obj);
      std::vector<const MObject*> children;
      for (const auto& [name, values] : obj->slots) {
        for (const auto& v : values) {
          if (v.kind != ValueKind::Child || v.target.resource != resource.uri()) continue;
          if (const MObject* c = resource.find(v.target.id)) children.push_back(c);
        }
      }
      stack.insert(stack.end(), children.rbegin(), children.rend());
    }
  };
  for (const auto& id : resource.roots) {
    if (const MObject* obj = resource.find(id)) visit_from(obj);
  }
  for (const auto& [id, obj] : resource.objects()) {
    if (!seen.count(id)) visit_from(&obj);
  }
  return out;
}

std::vector<ObjectKey> document_order(const ResourceSet& set) {
  std::vector<ObjectKey> out;
  for (const auto& r : set.resources) {
    for (const MObject* obj : document_order(r)) out.push_back({r.uri(), obj->id});
  }
  return out;
}

std::map<ObjectKey, ContainerInfo> container_index(const ResourceSet& set) {
  std::map<ObjectKey, ContainerInfo> out;
  for (const auto& r : set.resources) {
    for (const auto& [id, obj] : r.objects()) {
      for (const auto& [name, values] : obj.slots) {
        for (const auto& v : values) {
          if (v.kind == ValueKind::Child) {
            out.emplace(v.target, ContainerInfo{{r.uri(), id}, name});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace coupevo
