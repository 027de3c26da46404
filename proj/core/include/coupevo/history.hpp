#pragma once

// The history model: an initial metamodel plus ordered releases of recorded
// changes. Every metamodel version can be rebuilt by replaying a prefix.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/catalog.hpp"
#include "coupevo/metamodel.hpp"
#include "coupevo/primitive.hpp"

namespace coupevo {

/// Attaches a hook to the `span` primitive changes right before it.
struct CustomMigration {
  std::string hook;
  int span = 0;
  /// Display name, e.g. for the stats table; the hook name when empty.
  std::string label;

  friend bool operator==(const CustomMigration&, const CustomMigration&) = default;
};

using Change = std::variant<OperationApplication, PrimitiveChange, CustomMigration>;

std::string describe(const Change& change);

struct Release {
  std::string label;
  bool released = false;
  std::vector<Change> changes;

  friend bool operator==(const Release&, const Release&) = default;
};

struct StatsRow {
  std::string operation;
  std::string kind;  // "Reusable" or "Custom"
  int number = 0;
};

class History {
 public:
  /// Fresh history with one open, empty release labeled "0".
  /// Throws InvalidMetamodel.
  static History create(const Metamodel& metamodel);
  /// Rebuilds a history from stored parts, replaying it once to validate.
  /// Throws ReplayError.
  History(Metamodel initial, std::vector<Release> releases);

  const Metamodel& initial() const noexcept { return initial_; }
  const std::vector<Release>& releases() const noexcept { return releases_; }
  /// Metamodel after every recorded change.
  const Metamodel& head() const noexcept { return head_; }
  bool has_open_release() const noexcept { return !releases_.empty() && !releases_.back().released; }

  /// Throws ReleasedHistory, UnknownOperation, ArgTypeMismatch,
  /// ConstraintViolation. The history is unchanged on error.
  void record_application(OperationApplication application);
  /// The edited head must stay valid. Throws ReleasedHistory, ReplayError,
  /// InvalidMetamodel.
  void record_primitive(PrimitiveChange change);
  /// Throws ReleasedHistory, BadSpan.
  void attach_migration(std::string hook, int span, std::string label = {});
  /// Seals the open release and opens the next one. Throws ReleasedHistory,
  /// InvalidLabel, DuplicateLabel, EmptyRelease (unless `force`).
  void release(std::string label, bool force = false);
  /// Removes the last change of the open release and replays the rest.
  /// Throws NothingToUndo, ReleasedHistory.
  void undo_last();

  /// Initial metamodel plus the changes of releases 0..point; the whole
  /// history when `point` is empty. Throws ReplayError.
  Metamodel reconstruct(std::optional<std::size_t> point = std::nullopt) const;
  /// Earliest sealed release whose metamodel declares `ns_uri`.
  /// Throws UnknownNsUri naming the closest known URIs.
  std::size_t detect_release(std::string_view ns_uri) const;
  /// Hook names referenced by custom migrations, in order of appearance.
  std::vector<std::string> hooks() const;

  /// Operation name -> applications, plus "Custom" -> custom migrations.
  std::map<std::string, int> stats() const;
  /// Reusable operations alphabetically, then one row per custom migration.
  std::vector<StatsRow> stats_rows() const;
  std::string stats_table() const;

  friend bool operator==(const History& a, const History& b) {
    return a.initial_ == b.initial_ && a.releases_ == b.releases_;
  }

 private:
  History() = default;
  Release& open_release();

  Metamodel initial_;
  std::vector<Release> releases_;
  Metamodel head_;
};

/// Applies one change to a metamodel as replay does: operations are checked
/// and adapted, primitives edited in, custom migrations ignored. The result
/// is validated. Throws ReplayError.
void replay_change(Metamodel& metamodel, const Change& change);

nlohmann::json to_json(const History& history);
History history_from_json(const nlohmann::json& doc, const std::string& where = "$");
History load_history(const std::filesystem::path& path);
void save_history(const History& history, const std::filesystem::path& path);

}  // namespace coupevo
