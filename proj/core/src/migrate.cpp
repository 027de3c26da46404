#include "coupevo/migrate.hpp"

#include <sstream>

#include "coupevo/catalog.hpp"
#include "coupevo/conformance.hpp"
#include "coupevo/error.hpp"
#include "coupevo/model_edit.hpp"

namespace coupevo {

std::vector<ObjectKey> MigrationContext::instances_of(std::string_view class_name, bool include_subtypes) const {
  const Metamodel& mm = after_.find_class(class_name) != nullptr ? after_ : before_;
  return coupevo::instances_of(set_, mm, class_name, include_subtypes);
}

const MObject& MigrationContext::object(const ObjectKey& key) const { return require_object(std::as_const(set_), key); }

const ValueList* MigrationContext::get(const ObjectKey& key, std::string_view feature) const {
  return object(key).slot(feature);
}

void MigrationContext::set(const ObjectKey& key, std::string_view feature, ValueList values) {
  set_slot(set_, key, feature, std::move(values));
}

void MigrationContext::unset(const ObjectKey& key, std::string_view feature) { unset_slot(set_, key, feature); }

void MigrationContext::add(const ObjectKey& key, std::string_view feature, Value value) {
  add_value(set_, key, feature, std::move(value));
}

ObjectKey MigrationContext::create_child(const ObjectKey& container, std::string_view feature, std::string class_name,
                                         std::string_view id_hint) {
  require_object(set_, container);
  ObjectKey key = create_object(set_, container.resource, std::move(class_name), id_hint);
  attach_child(set_, container, feature, key);
  return key;
}

ObjectKey MigrationContext::create_root(std::string_view resource, std::string class_name, std::string_view id_hint) {
  ObjectKey key = create_object(set_, resource, std::move(class_name), id_hint);
  add_root(set_, key);
  return key;
}

void MigrationContext::remove(const ObjectKey& key) { delete_object(set_, key); }

void MigrationContext::retype(const ObjectKey& key, std::string class_name) {
  retype_object(set_, after_, key, std::move(class_name));
}

ObjectKey MigrationContext::move(const ObjectKey& object, const ObjectKey& container, std::string_view feature) {
  return move_into(set_, object, container, feature);
}

std::optional<ContainerInfo> MigrationContext::container(const ObjectKey& key) const { return container_of(set_, key); }

void HookRegistry::register_hook(std::string name, Hook hook) {
  if (hooks_.count(name) != 0) throw Error(ErrorCode::DuplicateHook, "hook '" + name + "' is already registered");
  hooks_.emplace(std::move(name), std::move(hook));
}

const Hook* HookRegistry::find(std::string_view name) const {
  auto it = hooks_.find(name);
  return it == hooks_.end() ? nullptr : &it->second;
}

std::vector<std::string> HookRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, hook] : hooks_) out.push_back(name);
  return out;
}

std::string format_report(const MigrationReport& report) {
  std::ostringstream out;
  out << "source release: " << report.source << " (" << report.source_label << ")\n";
  out << "applied changes: " << report.applied.size() << "\n";
  for (std::size_t i = 0; i < report.applied.size(); ++i) out << "  " << i + 1 << ". " << report.applied[i] << "\n";
  out << "conformant boundaries: " << report.boundaries.size() << "\n";
  for (const auto& b : report.boundaries) out << "  " << b << "\n";
  out.precision(3);
  out << "duration: " << std::fixed << report.duration.count() << " ms\n";
  return out.str();
}

namespace {

struct Step {
  std::size_t release;
  std::size_t index;
  const Change* change;
};

std::string where(const History& history, const Step& step) {
  return "release " + history.releases()[step.release].label + " change " + std::to_string(step.index + 1) + " (" +
         describe(*step.change) + ")";
}

class Migrator {
 public:
  Migrator(const History& history, const HookRegistry& registry, ResourceSet set)
      : history_(history), registry_(registry), set_(std::move(set)) {}

  MigrationResult run() {
    const auto started = std::chrono::steady_clock::now();
    report_.source = history_.detect_release(set_.ns_uri);
    report_.source_label = history_.releases()[report_.source].label;

    std::vector<Step> steps;
    for (std::size_t r = report_.source + 1; r < history_.releases().size(); ++r) {
      const auto& changes = history_.releases()[r].changes;
      for (std::size_t i = 0; i < changes.size(); ++i) steps.push_back({r, i, &changes[i]});
    }
    for (const auto& step : steps) {
      if (const auto* c = std::get_if<CustomMigration>(step.change); c && registry_.find(c->hook) == nullptr) {
        throw Error(ErrorCode::MissingHook, where(history_, step) + ": hook '" + c->hook + "' is not registered");
      }
    }

    mm_ = history_.reconstruct(report_.source);
    if (auto v = check_conformance(set_, mm_); !v.empty()) {
      throw Error(ErrorCode::InitialNonConformance,
                  "the model does not conform to release " + report_.source_label + ":\n" + format_violations(v));
    }
    for (const auto& pkg : mm_.packages) {
      if (pkg.ns_uri == set_.ns_uri) package_ = pkg.name;
    }

    for (const auto& step : steps) {
      if (const auto* op = std::get_if<OperationApplication>(step.change)) {
        flush_default(pending_.size());
        apply_operation(step, *op);
      } else if (std::holds_alternative<PrimitiveChange>(*step.change)) {
        pending_.push_back({mm_, step});
        replay_change(mm_, *step.change);
      } else {
        apply_custom(step, std::get<CustomMigration>(*step.change));
      }
      report_.applied.push_back(describe(*step.change));
    }
    flush_default(pending_.size());

    if (auto v = check_conformance(set_, mm_); !v.empty()) {
      throw Error(ErrorCode::PostConformance, "the migrated model does not conform to the head metamodel:\n" +
                                                  format_violations(v));
    }
    report_.duration = std::chrono::steady_clock::now() - started;
    return {std::move(set_), std::move(report_)};
  }

 private:
  struct Pending {
    Metamodel before;
    Step step;
  };

  void sync_ns_uri() {
    for (const auto& pkg : mm_.packages) {
      if (pkg.name == package_) set_.ns_uri = pkg.ns_uri;
    }
  }

  void apply_operation(const Step& step, const OperationApplication& op) {
    try {
      CoupledResult result = apply_coupled(op, mm_, &set_);
      mm_ = std::move(result.metamodel);
      set_ = std::move(*result.model);
    } catch (const Error& e) {
      throw Error(e.code(), where(history_, step) + ": " + e.what(), e.reason());
    }
    sync_ns_uri();
    report_.boundaries.push_back("after " + where(history_, step));
  }

  // The first `count` pending primitives have no hook: drop slots whose
  // feature is gone or volatile, then require strict conformance.
  void flush_default(std::size_t count) {
    if (count == 0) return;
    const Metamodel& after = count == pending_.size() ? mm_ : pending_[count].before;
    const std::string span = span_text(0, count);
    for (const auto& key : document_order(set_)) {
      const MObject* obj = set_.find(key);
      if (obj == nullptr) continue;  // deleted with a dropped containment slot
      if (after.find_class(obj->class_name) == nullptr) {
        throw Error(ErrorCode::MigrationError,
                    span + ": class '" + obj->class_name + "' of " + to_string(key) + " no longer exists; attach a custom migration",
                    "UnknownClass");
      }
      std::vector<std::string> doomed;
      for (const auto& [name, values] : obj->slots) {
        auto feature = find_feature(after, obj->class_name, name);
        if (!feature || feature->feature->is_volatile) doomed.push_back(name);
      }
      for (const auto& name : doomed) {
        const ValueList values = *set_.find(key)->slot(name);
        unset_slot(set_, key, name);
        for (const auto& v : values) {
          if (v.kind == ValueKind::Child && set_.find(v.target) != nullptr) delete_object(set_, v.target);
        }
      }
    }
    Metamodel keep = mm_;
    mm_ = after;
    sync_ns_uri();
    if (auto v = check_conformance(set_, mm_); !v.empty()) {
      throw Error(ErrorCode::MigrationError,
                  span + " cannot be migrated by the default rule; attach a custom migration:\n" + format_violations(v),
                  "DefaultRuleFailed");
    }
    mm_ = std::move(keep);
    report_.boundaries.push_back("after " + span);
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(count));
  }

  void apply_custom(const Step& step, const CustomMigration& custom) {
    const auto span = static_cast<std::size_t>(custom.span);
    if (span < 1 || span > pending_.size()) {
      throw Error(ErrorCode::MigrationError, where(history_, step) + ": span does not cover recorded primitive changes",
                  "BadSpan");
    }
    flush_default(pending_.size() - span);
    const Metamodel before = pending_.front().before;
    const std::string text = span_text(0, pending_.size());
    const std::string name = custom.label.empty() ? custom.hook : custom.label;
    try {
      MigrationContext context(before, mm_, set_);
      (*registry_.find(custom.hook))(context);
    } catch (const Error& e) {
      throw Error(e.code(), where(history_, step) + ": " + e.what(), e.reason());
    }
    sync_ns_uri();
    if (auto v = check_conformance(set_, mm_, {.soften = true}); !v.empty()) {
      throw Error(ErrorCode::PostConformance, where(history_, step) + " broke the model structure:\n" + format_violations(v),
                  "StructureBroken");
    }
    if (auto v = check_conformance(set_, mm_); !v.empty()) {
      throw Error(ErrorCode::PostConformance, where(history_, step) + " left the model non-conforming:\n" +
                                                  format_violations(v),
                  "NotConforming");
    }
    pending_.clear();
    report_.boundaries.push_back("after custom migration " + name + " over " + text);
  }

  std::string span_text(std::size_t from, std::size_t to) const {
    const Step& a = pending_[from].step;
    const Step& b = pending_[to - 1].step;
    std::string out = "primitive changes " + std::to_string(a.index + 1);
    if (to - from > 1) out += ".." + std::to_string(b.index + 1);
    return out + " of release " + history_.releases()[a.release].label;
  }

  const History& history_;
  const HookRegistry& registry_;
  ResourceSet set_;
  Metamodel mm_;
  std::string package_;
  std::vector<Pending> pending_;
  MigrationReport report_;
};

}  // namespace

MigrationResult migrate(const ResourceSet& set, const History& history, const HookRegistry& registry) {
  return Migrator(history, registry, set).run();
}

}  // namespace coupevo
