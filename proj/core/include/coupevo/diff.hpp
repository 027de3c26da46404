#pragma once

// Structural differences between two metamodels or two resource sets.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo {

enum class DiffKind { Added, Removed, Changed, Moved };

std::string_view to_string(DiffKind kind) noexcept;

struct DiffEntry {
  DiffKind kind = DiffKind::Changed;
  std::string a;  // path on side A, empty when added
  std::string b;  // path on side B, empty when removed
  std::string detail;

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct DiffModel {
  std::vector<DiffEntry> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
};

struct MatchPolicy {
  /// Multi-valued references compare as multisets. Attribute order always
  /// counts.
  bool ignore_reference_order = false;
  /// Enables matching by identifier attribute.
  const Metamodel* metamodel = nullptr;
};

/// Elements match by qualified name. Classifier order is ignored; a change
/// in feature order is reported as `moved`.
DiffModel diff_metamodels(const Metamodel& a, const Metamodel& b);
/// The same comparison, from the authoring side: how far `current` still is
/// from `target`.
DiffModel convergence(const Metamodel& current, const Metamodel& target);

/// Objects are matched per resource and containment slot, by identifier
/// value, then by id, then by equal attribute values. Throws MixedNsUri.
DiffModel diff_models(const ResourceSet& a, const ResourceSet& b, const MatchPolicy& policy = {});

std::string format_diff(const DiffModel& diff);
nlohmann::json to_json(const DiffModel& diff);
/// Writes the ".diff.json" document.
void save_diff(const DiffModel& diff, const std::filesystem::path& path);

}  // namespace coupevo
