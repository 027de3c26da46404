#include "coupevo/history.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "coupevo/error.hpp"

namespace coupevo {

namespace {

std::string first_violation(const std::vector<MetaViolation>& v) {
  return v.front().element + ": " + v.front().message + " (" + v.front().rule + ")";
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::string describe(const Change& change) {
  if (const auto* op = std::get_if<OperationApplication>(&change)) {
    std::string out = op->op;
    if (!op->args.empty()) out += " " + op->args.dump();
    return out;
  }
  if (const auto* p = std::get_if<PrimitiveChange>(&change)) return describe(*p);
  const auto& c = std::get<CustomMigration>(change);
  return "custom " + (c.label.empty() ? c.hook : c.label) + " [hook " + c.hook + ", span " + std::to_string(c.span) + "]";
}

void replay_change(Metamodel& metamodel, const Change& change) {
  if (std::holds_alternative<CustomMigration>(change)) return;
  try {
    if (const auto* op = std::get_if<OperationApplication>(&change)) {
      metamodel = adapt_metamodel(*op, metamodel);
    } else {
      apply_primitive(metamodel, std::get<PrimitiveChange>(change));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ReplayError) throw;
    throw Error(ErrorCode::ReplayError, describe(change) + " no longer applies: " + e.what());
  }
  if (auto v = validate_metamodel(metamodel); !v.empty()) {
    throw Error(ErrorCode::ReplayError, describe(change) + " leaves an invalid metamodel: " + first_violation(v));
  }
}

History History::create(const Metamodel& metamodel) {
  if (auto v = validate_metamodel(metamodel); !v.empty()) {
    throw Error(ErrorCode::InvalidMetamodel, "cannot create a history: " + first_violation(v));
  }
  History h;
  h.initial_ = metamodel;
  h.head_ = metamodel;
  h.releases_.push_back(Release{"0", false, {}});
  return h;
}

History::History(Metamodel initial, std::vector<Release> releases)
    : initial_(std::move(initial)), releases_(std::move(releases)) {
  if (auto v = validate_metamodel(initial_); !v.empty()) {
    throw Error(ErrorCode::ReplayError, "the initial metamodel is invalid: " + first_violation(v));
  }
  for (std::size_t i = 0; i + 1 < releases_.size(); ++i) {
    if (!releases_[i].released) {
      throw Error(ErrorCode::ReplayError, "release " + std::to_string(i) + " is open but not the last one");
    }
  }
  head_ = reconstruct();
}

Release& History::open_release() {
  if (!has_open_release()) throw Error(ErrorCode::ReleasedHistory, "every release is sealed");
  return releases_.back();
}

void History::record_application(OperationApplication application) {
  Release& open = open_release();
  Metamodel next = adapt_metamodel(application, head_);
  if (auto v = validate_metamodel(next); !v.empty()) {
    throw Error(ErrorCode::PostConformance, application.op + " produced an invalid metamodel: " + first_violation(v));
  }
  open.changes.emplace_back(std::move(application));
  head_ = std::move(next);
}

void History::record_primitive(PrimitiveChange change) {
  Release& open = open_release();
  Metamodel next = head_;
  apply_primitive(next, change);
  if (auto v = validate_metamodel(next); !v.empty()) {
    throw Error(ErrorCode::InvalidMetamodel, describe(change) + " would make the metamodel invalid: " + first_violation(v));
  }
  open.changes.emplace_back(std::move(change));
  head_ = std::move(next);
}

void History::attach_migration(std::string hook, int span, std::string label) {
  Release& open = open_release();
  if (hook.empty()) throw Error(ErrorCode::BadSpan, "a custom migration needs a hook name");
  int trailing = 0;
  for (auto it = open.changes.rbegin(); it != open.changes.rend() && std::holds_alternative<PrimitiveChange>(*it); ++it) {
    ++trailing;
  }
  if (span < 1 || span > trailing) {
    throw Error(ErrorCode::BadSpan, "span " + std::to_string(span) + " does not fit the " + std::to_string(trailing) +
                                        " trailing primitive change(s) of the open release");
  }
  open.changes.emplace_back(CustomMigration{std::move(hook), span, std::move(label)});
}

void History::release(std::string label, bool force) {
  Release& open = open_release();
  if (label.empty()) throw Error(ErrorCode::InvalidLabel, "a release label must not be empty");
  for (const auto& r : releases_) {
    if (r.released && r.label == label) throw Error(ErrorCode::DuplicateLabel, "release '" + label + "' already exists");
  }
  if (open.changes.empty() && !force) {
    throw Error(ErrorCode::EmptyRelease, "the open release has no changes; force to seal it anyway");
  }
  open.label = std::move(label);
  open.released = true;
  releases_.push_back(Release{std::to_string(releases_.size()), false, {}});
}

void History::undo_last() {
  if (!has_open_release()) throw Error(ErrorCode::ReleasedHistory, "every release is sealed");
  Release& open = releases_.back();
  if (open.changes.empty()) {
    const bool sealed_work = std::any_of(releases_.begin(), releases_.end() - 1,
                                         [](const Release& r) { return !r.changes.empty(); });
    if (sealed_work) throw Error(ErrorCode::ReleasedHistory, "the open release is empty and sealed releases cannot be undone");
    throw Error(ErrorCode::NothingToUndo, "the history has no changes");
  }
  open.changes.pop_back();
  head_ = reconstruct();
}

Metamodel History::reconstruct(std::optional<std::size_t> point) const {
  const std::size_t last = point.value_or(releases_.empty() ? 0 : releases_.size() - 1);
  if (point && *point >= releases_.size()) {
    throw Error(ErrorCode::ReplayError, "no release " + std::to_string(*point) + " (history has " +
                                            std::to_string(releases_.size()) + ")");
  }
  Metamodel mm = initial_;
  for (std::size_t i = 0; i <= last && i < releases_.size(); ++i) {
    for (const auto& change : releases_[i].changes) replay_change(mm, change);
  }
  return mm;
}

std::size_t History::detect_release(std::string_view ns_uri) const {
  Metamodel mm = initial_;
  std::vector<std::string> known;
  for (std::size_t i = 0; i < releases_.size() && releases_[i].released; ++i) {
    for (const auto& change : releases_[i].changes) replay_change(mm, change);
    for (const auto& pkg : mm.packages) {
      if (pkg.ns_uri == ns_uri) return i;
      if (std::find(known.begin(), known.end(), pkg.ns_uri) == known.end()) known.push_back(pkg.ns_uri);
    }
  }
  std::stable_sort(known.begin(), known.end(), [&](const auto& a, const auto& b) {
    return levenshtein(a, ns_uri) < levenshtein(b, ns_uri);
  });
  std::string message = "unknown release: no sealed release declares '" + std::string(ns_uri) + "'";
  if (!known.empty()) {
    message += "; closest:";
    for (std::size_t i = 0; i < known.size() && i < 3; ++i) message += " " + known[i];
  }
  throw Error(ErrorCode::UnknownNsUri, message);
}

std::vector<std::string> History::hooks() const {
  std::vector<std::string> out;
  for (const auto& r : releases_) {
    for (const auto& change : r.changes) {
      if (const auto* c = std::get_if<CustomMigration>(&change)) {
        if (std::find(out.begin(), out.end(), c->hook) == out.end()) out.push_back(c->hook);
      }
    }
  }
  return out;
}

std::map<std::string, int> History::stats() const {
  std::map<std::string, int> out;
  for (const auto& r : releases_) {
    for (const auto& change : r.changes) {
      if (const auto* op = std::get_if<OperationApplication>(&change)) {
        ++out[op->op];
      } else if (std::holds_alternative<CustomMigration>(change)) {
        ++out["Custom"];
      }
    }
  }
  return out;
}

std::vector<StatsRow> History::stats_rows() const {
  std::map<std::string, int> reusable;
  std::vector<StatsRow> custom;
  for (const auto& r : releases_) {
    for (const auto& change : r.changes) {
      if (const auto* op = std::get_if<OperationApplication>(&change)) {
        ++reusable[op->op];
      } else if (const auto* c = std::get_if<CustomMigration>(&change)) {
        const std::string name = c->label.empty() ? c->hook : c->label;
        auto it = std::find_if(custom.begin(), custom.end(), [&](const StatsRow& row) { return row.operation == name; });
        if (it == custom.end()) {
          custom.push_back({name, "Custom", 1});
        } else {
          ++it->number;
        }
      }
    }
  }
  std::vector<StatsRow> out;
  for (const auto& [name, n] : reusable) out.push_back({name, "Reusable", n});
  out.insert(out.end(), custom.begin(), custom.end());
  return out;
}

std::string History::stats_table() const {
  const auto rows = stats_rows();
  std::size_t w_op = std::string_view("Operation").size(), w_kind = std::string_view("Kind").size();
  for (const auto& row : rows) {
    w_op = std::max(w_op, row.operation.size());
    w_kind = std::max(w_kind, row.kind.size());
  }
  std::ostringstream out;
  auto line = [&](const std::string& op, const std::string& kind, const std::string& n) {
    out << op << std::string(w_op - op.size(), ' ') << " | " << kind << std::string(w_kind - kind.size(), ' ') << " | " << n
        << "\n";
  };
  line("Operation", "Kind", "Number");
  out << std::string(w_op, '-') << "-|-" << std::string(w_kind, '-') << "-|-------\n";
  for (const auto& row : rows) line(row.operation, row.kind, std::to_string(row.number));
  return out.str();
}

}  // namespace coupevo
