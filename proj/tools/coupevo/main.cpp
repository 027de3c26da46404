// coupevo: author metamodel histories and migrate models along them.
//
// Exit codes: 0 success, 1 domain error (or a non-empty diff), 2 usage error.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coupevo/catalog.hpp"
#include "coupevo/conformance.hpp"
#include "coupevo/diff.hpp"
#include "coupevo/error.hpp"
#include "coupevo/history.hpp"
#include "coupevo/io.hpp"
#include "coupevo/metamodel_io.hpp"
#include "coupevo/migrate.hpp"
#include "coupevo/model_io.hpp"

namespace fs = std::filesystem;
using namespace coupevo;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool use_color() {
  const char* env = std::getenv("COUPEVO_COLOR");
  if (env != nullptr && std::string(env) == "never") return false;
  return isatty(fileno(stdout)) != 0;
}

std::string paint(const std::string& text, const char* code) {
  static const bool color = use_color();
  return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
}

void refuse_overwrite(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    throw Error(ErrorCode::IoError, path.string() + " already exists (use --force to overwrite)");
  }
}

std::string colored_constraints(const std::vector<ConstraintResult>& results) {
  std::string out;
  for (const auto& r : results) {
    out += "  " + (r.satisfied ? paint("ok  ", "32") : paint("FAIL", "31")) + " " + r.constraint;
    if (!r.message.empty()) out += ": " + r.message;
    out += "\n";
  }
  return out;
}

void print_diff(const DiffModel& diff) {
  for (const auto& e : diff.entries) {
    const char* code = e.kind == DiffKind::Added ? "32" : e.kind == DiffKind::Removed ? "31" : "33";
    std::cout << paint(std::string(to_string(e.kind)), code) << " " << (e.a.empty() ? "-" : e.a);
    if (e.b != e.a) std::cout << " => " << (e.b.empty() ? "-" : e.b);
    if (!e.detail.empty()) std::cout << ": " << e.detail;
    std::cout << "\n";
  }
  std::cout << diff.size() << " difference(s)\n";
}

OperationApplication build_application(const std::string& op, const std::vector<std::string>& raw_args) {
  const OperationSpec* spec = find_operation(op);
  if (spec == nullptr) throw Error(ErrorCode::UnknownOperation, "unknown operation '" + op + "' (see `coupevo ops list`)");
  OperationApplication app{op, nlohmann::json::object()};
  for (const auto& raw : raw_args) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--arg expects k=v, got '" + raw + "'");
    const std::string key = raw.substr(0, eq);
    const std::string text = raw.substr(eq + 1);
    const ParamSpec* param = spec->find_param(key);
    if (param == nullptr) throw Error(ErrorCode::ArgTypeMismatch, op + " has no parameter '" + key + "'");
    app.args[key] = parse_arg_text(*param, text);
  }
  return app;
}

void show_history(const History& h) {
  std::cout << "initial metamodel: ";
  for (const auto& p : h.initial().packages) std::cout << p.name << " <" << p.ns_uri << "> ";
  std::cout << "\n";
  for (std::size_t i = 0; i < h.releases().size(); ++i) {
    const Release& r = h.releases()[i];
    std::cout << "release " << i << " '" << r.label << "' " << (r.released ? "sealed" : "open") << ", "
              << r.changes.size() << " change(s)\n";
    for (std::size_t j = 0; j < r.changes.size(); ++j) std::cout << "  " << j + 1 << ". " << describe(r.changes[j]) << "\n";
  }
}

void describe_operation(const OperationSpec& spec) {
  std::cout << spec.name << "\n  " << spec.documentation << "\n  parameters:\n";
  for (const auto& p : spec.params) {
    std::cout << "    " << p.name << " : " << to_string(p.type) << (p.required ? "" : " (optional)");
    if (!p.doc.empty()) std::cout << " - " << p.doc;
    std::cout << "\n";
  }
  std::cout << "  constraints:\n";
  for (const auto& c : spec.constraints) std::cout << "    " << c << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Coupled metamodel/model evolution"};
  app.require_subcommand(1);
  int status = 0;

  // history ------------------------------------------------------------------
  auto* history = app.add_subcommand("history", "Author a metamodel history");
  history->require_subcommand(1);

  struct {
    std::string mm, out, file, op, hook, label, kind, target, payload = "null";
    std::vector<std::string> args;
    std::optional<std::string> against;
    int span = 1;
    std::size_t at = 0;
    bool force = false;
  } o;

  auto* create = history->add_subcommand("create", "Start a history from a metamodel");
  create->add_option("metamodel", o.mm)->required()->check(CLI::ExistingFile);
  create->add_option("-o,--output", o.out)->required();
  create->add_flag("--force", o.force, "Overwrite an existing output file");
  create->callback([&] {
    refuse_overwrite(o.out, o.force);
    save_history(History::create(load_metamodel(o.mm)), o.out);
    std::cout << "created " << o.out << "\n";
  });

  auto* apply = history->add_subcommand("apply", "Record a coupled operation");
  apply->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  apply->add_option("operation", o.op)->required();
  apply->add_option("--arg", o.args, "Operation argument k=v");
  apply->add_option("--target", o.against, "Target metamodel for the convergence diff")->check(CLI::ExistingFile);
  apply->callback([&] {
    History h = load_history(o.file);
    OperationApplication application = build_application(o.op, o.args);
    if (!h.has_open_release()) throw Error(ErrorCode::ReleasedHistory, "every release is sealed");
    const auto results = check_applicability(application, h.head());
    if (!all_satisfied(results)) {
      std::cout << o.op << " is not applicable:\n" << colored_constraints(results);
      status = 1;
      return;
    }
    h.record_application(std::move(application));
    save_history(h, o.file);
    std::cout << "constraints: all satisfied\n";
    if (o.against) std::cout << "diff entries: " << convergence(h.head(), load_metamodel(*o.against)).size() << "\n";
  });

  auto* primitive = history->add_subcommand("primitive", "Record a primitive metamodel change");
  primitive->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  primitive->add_option("kind", o.kind, "create|delete|set|add|remove")->required();
  primitive->add_option("target", o.target, "Element path (empty for a new package)")->required();
  primitive->add_option("--payload", o.payload, "JSON payload");
  primitive->callback([&] {
    History h = load_history(o.file);
    auto kind = parse_primitive_kind(o.kind);
    if (!kind) throw UsageError("unknown primitive kind '" + o.kind + "'");
    nlohmann::json payload;
    try {
      payload = nlohmann::json::parse(o.payload);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("--payload is not JSON: ") + e.what());
    }
    PrimitiveChange change{*kind, o.target, std::move(payload)};
    const std::string text = describe(change);
    h.record_primitive(std::move(change));
    save_history(h, o.file);
    std::cout << "recorded " << text << "\n";
  });

  auto* attach = history->add_subcommand("attach", "Attach a custom migration to trailing primitive changes");
  attach->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  attach->add_option("hook", o.hook)->required();
  attach->add_option("--span", o.span, "Number of primitive changes covered")->default_val(1);
  attach->add_option("--label", o.label, "Display name");
  attach->callback([&] {
    History h = load_history(o.file);
    h.attach_migration(o.hook, o.span, o.label);
    save_history(h, o.file);
    std::cout << "attached " << o.hook << " over " << o.span << " change(s)\n";
  });

  auto* undo = history->add_subcommand("undo", "Remove the last recorded change");
  undo->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  undo->callback([&] {
    History h = load_history(o.file);
    const std::string last = describe(h.releases().back().changes.empty() ? Change{} : h.releases().back().changes.back());
    h.undo_last();
    save_history(h, o.file);
    std::cout << "undid " << last << "\n";
  });

  auto* release = history->add_subcommand("release", "Seal the open release");
  release->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  release->add_option("label", o.label)->required();
  release->add_flag("--force", o.force, "Allow sealing an empty release");
  release->callback([&] {
    History h = load_history(o.file);
    h.release(o.label, o.force);
    save_history(h, o.file);
    std::cout << "released " << o.label << "\n";
  });

  auto* show = history->add_subcommand("show", "List releases and changes");
  show->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  show->callback([&] { show_history(load_history(o.file)); });

  auto* stats = history->add_subcommand("stats", "Count applications per operation");
  stats->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  stats->callback([&] { std::cout << load_history(o.file).stats_table(); });

  auto* reconstruct = history->add_subcommand("reconstruct", "Rebuild the metamodel of a release");
  reconstruct->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--at", o.at, "Release ordinal")->required();
  reconstruct->add_option("-o,--output", o.out)->required();
  reconstruct->add_flag("--force", o.force, "Overwrite an existing output file");
  reconstruct->callback([&] {
    Metamodel mm = load_history(o.file).reconstruct(o.at);
    refuse_overwrite(o.out, o.force);
    save_metamodel(mm, o.out);
    std::cout << "wrote " << o.out << "\n";
  });

  // ops ------------------------------------------------------------------------
  auto* ops = app.add_subcommand("ops", "Inspect the operation catalog");
  ops->require_subcommand(1);
  ops->add_subcommand("list", "List operation names")->callback([] {
    for (const auto& spec : list_operations()) std::cout << spec.name << "\n";
  });
  auto* describe_cmd = ops->add_subcommand("describe", "Show parameters and constraints");
  describe_cmd->add_option("operation", o.op)->required();
  describe_cmd->callback([&] {
    const OperationSpec* spec = find_operation(o.op);
    if (spec == nullptr) throw Error(ErrorCode::UnknownOperation, "unknown operation '" + o.op + "'");
    describe_operation(*spec);
  });

  // migrate ---------------------------------------------------------------------
  std::vector<std::string> files, against_files;
  std::string scenario;
  auto* migrate_cmd = app.add_subcommand("migrate", "Migrate model files to the head of a history");
  migrate_cmd->add_option("history", o.file)->required()->check(CLI::ExistingFile);
  migrate_cmd->add_option("models", files)->required()->check(CLI::ExistingFile);
  migrate_cmd->add_option("-o,--output", o.out, "Output directory")->required();
  migrate_cmd->add_option("--scenario", scenario, "Compiled-in hook registry");
  migrate_cmd->callback([&] {
    const History h = load_history(o.file);
    const HookRegistry registry = scenario.empty() ? HookRegistry{} : scenario_hooks(scenario);
    std::vector<fs::path> paths(files.begin(), files.end());
    const MigrationResult result = migrate(load_resource_set(paths), h, registry);
    fs::create_directories(o.out);
    for (const auto& p : save_resource_set(result.model, o.out)) std::cout << "wrote " << p.string() << "\n";
    std::cout << format_report(result.report);
  });

  // validate / diff ------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "Check a metamodel and, optionally, models against it");
  validate->add_option("metamodel", o.mm)->required()->check(CLI::ExistingFile);
  validate->add_option("models", files)->check(CLI::ExistingFile);
  validate->callback([&] {
    const Metamodel mm = load_metamodel(o.mm);
    if (auto v = validate_metamodel(mm); !v.empty()) {
      for (const auto& m : v) std::cout << m.element << ": " << m.message << " (" << m.rule << ")\n";
      status = 1;
      return;
    }
    if (!files.empty()) {
      const auto v = check_conformance(load_resource_set({files.begin(), files.end()}), mm);
      if (!v.empty()) {
        std::cout << format_violations(v, v.size());
        status = 1;
        return;
      }
    }
    std::cout << "ok\n";
  });

  std::string json_out;
  bool ignore_order = false;
  auto* diff_mm = app.add_subcommand("diff-mm", "Compare two metamodels");
  diff_mm->add_option("a", o.mm)->required()->check(CLI::ExistingFile);
  diff_mm->add_option("b", o.target)->required()->check(CLI::ExistingFile);
  diff_mm->add_option("--json", json_out, "Also write a .diff.json document");
  diff_mm->callback([&] {
    const DiffModel d = diff_metamodels(load_metamodel(o.mm), load_metamodel(o.target));
    print_diff(d);
    if (!json_out.empty()) save_diff(d, json_out);
    status = d.empty() ? 0 : 1;
  });

  auto* diff_model = app.add_subcommand("diff-model", "Compare two model sets");
  diff_model->add_option("models", files)->required()->check(CLI::ExistingFile);
  diff_model->add_option("--against", against_files)->required()->check(CLI::ExistingFile);
  diff_model->add_flag("--ignore-ref-order", ignore_order, "Compare reference slots as multisets");
  diff_model->add_option("--mm", o.mm, "Metamodel enabling identifier matching")->check(CLI::ExistingFile);
  diff_model->add_option("--json", json_out, "Also write a .diff.json document");
  diff_model->callback([&] {
    std::optional<Metamodel> mm;
    if (!o.mm.empty()) mm = load_metamodel(o.mm);
    const MatchPolicy policy{ignore_order, mm ? &*mm : nullptr};
    const DiffModel d = diff_models(load_resource_set({files.begin(), files.end()}),
                                    load_resource_set({against_files.begin(), against_files.end()}), policy);
    print_diff(d);
    if (!json_out.empty()) save_diff(d, json_out);
    status = d.empty() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
