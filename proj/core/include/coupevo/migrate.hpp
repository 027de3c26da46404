#pragma once

// Forward migration of a resource set from the release it was written
// against to the head of a history.

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coupevo/history.hpp"
#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo {

/// What a custom migration hook sees: the metamodel before and after its
/// primitive span, and the set being migrated. Class names resolve against
/// `after()` first, then `before()`.
class MigrationContext {
 public:
  MigrationContext(const Metamodel& before, const Metamodel& after, ResourceSet& set)
      : before_(before), after_(after), set_(set) {}

  const Metamodel& before() const noexcept { return before_; }
  const Metamodel& after() const noexcept { return after_; }
  ResourceSet& set() noexcept { return set_; }

  std::vector<ObjectKey> instances_of(std::string_view class_name, bool include_subtypes = true) const;
  const MObject& object(const ObjectKey& key) const;

  /// nullptr when unset.
  const ValueList* get(const ObjectKey& key, std::string_view feature) const;
  void set(const ObjectKey& key, std::string_view feature, ValueList values);
  void unset(const ObjectKey& key, std::string_view feature);
  void add(const ObjectKey& key, std::string_view feature, Value value);

  /// A new object contained in `container.feature`.
  ObjectKey create_child(const ObjectKey& container, std::string_view feature, std::string class_name,
                         std::string_view id_hint);
  ObjectKey create_root(std::string_view resource, std::string class_name, std::string_view id_hint);
  void remove(const ObjectKey& key);
  void retype(const ObjectKey& key, std::string class_name);
  /// Re-parents a subtree, across files if needed. Returns its new key.
  ObjectKey move(const ObjectKey& object, const ObjectKey& container, std::string_view feature);
  std::optional<ContainerInfo> container(const ObjectKey& key) const;

 private:
  const Metamodel& before_;
  const Metamodel& after_;
  ResourceSet& set_;
};

using Hook = std::function<void(MigrationContext&)>;

class HookRegistry {
 public:
  /// Throws DuplicateHook.
  void register_hook(std::string name, Hook hook);
  const Hook* find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Hook, std::less<>> hooks_;
};

struct MigrationReport {
  std::size_t source = 0;
  std::string source_label;
  /// One descriptor per change replayed, in order.
  std::vector<std::string> applied;
  /// One line per transaction boundary whose conformance was confirmed.
  std::vector<std::string> boundaries;
  std::chrono::duration<double, std::milli> duration{};
};

std::string format_report(const MigrationReport& report);

struct MigrationResult {
  ResourceSet model;
  MigrationReport report;
};

/// Migrates a copy of `set` to the head of `history`; `set` itself is never
/// touched. Throws UnknownNsUri, MissingHook, InitialNonConformance,
/// MigrationError, PostConformance, ReplayError.
MigrationResult migrate(const ResourceSet& set, const History& history, const HookRegistry& registry);

/// Hooks compiled in for a bundled scenario. Throws MissingHook for an
/// unknown scenario name.
HookRegistry scenario_hooks(std::string_view scenario);
std::vector<std::string> scenario_names();

}  // namespace coupevo
