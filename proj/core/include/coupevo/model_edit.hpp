#pragma once

// In-place editing of resource sets. These are the building blocks of both
// catalog migrations and custom migration hooks. None of them checks
// conformance; that happens at transaction boundaries.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo {

/// Instances of `class_name` (and of its subclasses when requested), in
/// resource order then document order.
std::vector<ObjectKey> instances_of(const ResourceSet& set, const Metamodel& metamodel,
                                    std::string_view class_name, bool include_subtypes = true);

/// Throws UnknownObject.
MObject& require_object(ResourceSet& set, const ObjectKey& key);
const MObject& require_object(const ResourceSet& set, const ObjectKey& key);

/// Replaces a slot; an empty list unsets it.
void set_slot(ResourceSet& set, const ObjectKey& key, std::string_view feature, ValueList values);
void unset_slot(ResourceSet& set, const ObjectKey& key, std::string_view feature);
/// Appends to a slot.
void add_value(ResourceSet& set, const ObjectKey& key, std::string_view feature, Value value);
/// Removes every occurrence of `value`; drops the slot when it empties.
void remove_value(ResourceSet& set, const ObjectKey& key, std::string_view feature, const Value& value);

/// Creates a detached object with a fresh id derived from `id_hint`.
ObjectKey create_object(ResourceSet& set, std::string_view resource, std::string class_name,
                        std::string_view id_hint);
void add_root(ResourceSet& set, const ObjectKey& key);
/// Appends a detached object of the same resource to a containment slot.
void attach_child(ResourceSet& set, const ObjectKey& container, std::string_view feature,
                  const ObjectKey& child);
/// Removes the object from its container slot or from the root list.
void detach(ResourceSet& set, const ObjectKey& key);
std::optional<ContainerInfo> container_of(const ResourceSet& set, const ObjectKey& key);
/// True when `ancestor` transitively contains `key` (or equals it).
bool contains_transitively(const ResourceSet& set, const ObjectKey& ancestor, const ObjectKey& key);

/// Moves a detached subtree into another resource, renaming ids that clash
/// there and rewriting every reference to the moved objects. Returns the
/// new key of the subtree root.
ObjectKey relocate(ResourceSet& set, const ObjectKey& key, std::string_view resource);
/// Detaches `object`, relocates it into the container's resource when
/// needed, and appends it to `container.feature`. Returns its (new) key.
ObjectKey move_into(ResourceSet& set, const ObjectKey& object, const ObjectKey& container,
                    std::string_view feature);

/// Deletes the object and everything it contains, and removes references
/// to the deleted objects from the rest of the set. Returns deleted keys.
std::vector<ObjectKey> delete_object(ResourceSet& set, const ObjectKey& key);

/// Replaces the class of an object; slots are untouched.
/// Throws UnknownObject, UnknownClass.
void retype_object(ResourceSet& set, const Metamodel& metamodel, const ObjectKey& key,
                   std::string class_name);

/// Rewrites every Ref value pointing at `from` to point at `to`.
void replace_references(ResourceSet& set, const ObjectKey& from, const ObjectKey& to);

}  // namespace coupevo
