#pragma once

// Instance models: typed objects spread over one or more resources (files).
//
// In memory every object lives flat in its resource, keyed by id. Containment
// is expressed by Child values naming an object of the same resource; the
// file format nests those children inline. References always carry the
// target's resource uri, so local and cross-file references share one
// representation and only differ when serialized ("#id" vs "file#id").

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace coupevo {

struct ObjectKey {
  std::string resource;
  std::string id;

  friend auto operator<=>(const ObjectKey&, const ObjectKey&) = default;
  friend bool operator==(const ObjectKey&, const ObjectKey&) = default;
};

std::string to_string(const ObjectKey& key);

enum class ValueKind { Primitive, Enum, Ref, Child };

struct Value {
  ValueKind kind = ValueKind::Primitive;
  nlohmann::json primitive;  // Primitive
  std::string literal;       // Enum
  ObjectKey target;          // Ref, Child

  static Value of(nlohmann::json scalar);
  static Value enum_literal(std::string literal);
  static Value ref(ObjectKey target);
  static Value child(ObjectKey target);

  bool is_object_value() const noexcept { return kind == ValueKind::Ref || kind == ValueKind::Child; }

  friend bool operator==(const Value& a, const Value& b);
};

std::string to_string(const Value& value);

using ValueList = std::vector<Value>;

struct MObject {
  std::string id;
  std::string class_name;  // qualified
  std::map<std::string, ValueList> slots;  // unset slots are absent, never empty

  const ValueList* slot(std::string_view feature) const;
  ValueList* slot(std::string_view feature);

  friend bool operator==(const MObject&, const MObject&) = default;
};

class Resource {
 public:
  Resource() = default;
  explicit Resource(std::string uri) : uri_(std::move(uri)) {}

  const std::string& uri() const noexcept { return uri_; }

  /// Top-level objects in document order.
  std::vector<std::string> roots;
  /// Further files declared to belong to the same set (header "members").
  std::vector<std::string> members;

  const MObject* find(std::string_view id) const;
  MObject* find(std::string_view id);
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  /// Adds a detached object (neither root nor child yet). Throws
  /// InconsistentModel on duplicate id.
  MObject& insert(MObject object);
  /// Removes the object record only; callers fix up roots and values.
  void erase(std::string_view id);

  const std::map<std::string, MObject, std::less<>>& objects() const noexcept { return objects_; }
  /// Mutable iteration. Object ids must not be modified through this view.
  std::map<std::string, MObject, std::less<>>& objects() noexcept { return objects_; }

  /// `base` if free, else `base_2`, `base_3`, ...
  std::string fresh_id(std::string_view base) const;

  friend bool operator==(const Resource&, const Resource&) = default;

 private:
  std::string uri_;
  std::map<std::string, MObject, std::less<>> objects_;
};

struct ResourceSet {
  std::string ns_uri;
  std::vector<Resource> resources;
  /// Directory the resource uris are relative to. Not part of equality.
  std::filesystem::path base_dir;

  Resource* find_resource(std::string_view uri);
  const Resource* find_resource(std::string_view uri) const;
  const MObject* find(const ObjectKey& key) const;
  MObject* find(const ObjectKey& key);
  std::size_t object_count() const;

  friend bool operator==(const ResourceSet& a, const ResourceSet& b) {
    return a.ns_uri == b.ns_uri && a.resources == b.resources;
  }
};

struct ContainerInfo {
  ObjectKey container;
  std::string feature;
};

/// Objects of a resource in document order: depth-first from the roots,
/// slots in name order, values in list order. Objects that are neither roots
/// nor contained follow, sorted by id.
std::vector<const MObject*> document_order(const Resource& resource);
/// Keys of every object in the set: resource order, then document order.
std::vector<ObjectKey> document_order(const ResourceSet& set);

/// Container of every contained object (first occurrence wins).
std::map<ObjectKey, ContainerInfo> container_index(const ResourceSet& set);

}  // namespace coupevo
