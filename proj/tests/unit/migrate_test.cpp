#include <gtest/gtest.h>

#include "coupevo/conformance.hpp"
#include "coupevo/diff.hpp"
#include "coupevo/error.hpp"
#include "coupevo/io.hpp"
#include "coupevo/migrate.hpp"
#include "coupevo/model_edit.hpp"
#include "coupevo/model_io.hpp"
#include "fixtures.hpp"

namespace coupevo {
namespace {

using testing::library_metamodel;
using testing::library_model;
using json = nlohmann::json;

const ObjectKey kB1{"lib.model.json", "b1"};
const ObjectKey kB2{"lib.model.json", "b2"};

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::IoError, "none");
}

PrimitiveChange mandatory_pages() {
  return {PrimitiveKind::Create, "lib.Book",
          {{"element", "feature"},
           {"document", {{"kind", "attribute"}, {"name", "pages"}, {"type", "lib.Int"}, {"lower", 1}, {"upper", 1}}}}};
}

// 1.0 = library; 2.0 adds Book.pages [1] through a primitive.
History pages_history(bool with_hook) {
  auto h = History::create(library_metamodel());
  h.release("1.0", true);
  h.record_application({"Change Namespace URI", {{"package", "lib"}, {"nsUri", "urn:lib/2"}}});
  h.record_primitive(mandatory_pages());
  if (with_hook) h.attach_migration("count_pages", 1, "Count pages");
  h.release("2.0");
  return h;
}

HookRegistry pages_hooks() {
  HookRegistry registry;
  registry.register_hook("count_pages", [](MigrationContext& ctx) {
    EXPECT_EQ(ctx.before().find_class("lib.Book")->find_feature("pages"), nullptr);
    EXPECT_NE(ctx.after().find_class("lib.Book")->find_feature("pages"), nullptr);
    int n = 100;
    for (const auto& key : ctx.instances_of("lib.Book")) ctx.set(key, "pages", {Value::of(n++)});
  });
  return registry;
}

TEST(Hooks, RegistryRejectsDuplicates) {
  HookRegistry registry;
  registry.register_hook("a", [](MigrationContext&) {});
  EXPECT_EQ(error_of([&] { registry.register_hook("a", [](MigrationContext&) {}); }).code(), ErrorCode::DuplicateHook);
  EXPECT_NE(registry.find("a"), nullptr);
  EXPECT_EQ(registry.find("b"), nullptr);
  EXPECT_EQ(registry.names(), std::vector<std::string>{"a"});
}

TEST(Hooks, UnknownScenario) {
  EXPECT_EQ(error_of([] { scenario_hooks("nope"); }).code(), ErrorCode::MissingHook);
  EXPECT_EQ(scenario_names(), std::vector<std::string>{"mini-gmf"});
}

TEST(Migrate, CustomHookFillsMandatoryFeature) {
  const auto set = library_model();
  const auto result = migrate(set, pages_history(true), pages_hooks());
  EXPECT_EQ(result.model.ns_uri, "urn:lib/2");
  EXPECT_EQ(*result.model.find(kB1)->slot("pages"), ValueList{Value::of(100)});
  EXPECT_EQ(*result.model.find(kB2)->slot("pages"), ValueList{Value::of(101)});
  EXPECT_EQ(result.report.source, 0u);
  EXPECT_EQ(result.report.source_label, "1.0");
  EXPECT_EQ(result.report.applied.size(), 3u);
  EXPECT_EQ(set, library_model());
}

TEST(Migrate, MissingHookFailsBeforeWork) {
  const auto e = error_of([] { migrate(library_model(), pages_history(true), HookRegistry{}); });
  EXPECT_EQ(e.code(), ErrorCode::MissingHook);
  EXPECT_NE(std::string(e.what()).find("count_pages"), std::string::npos);
}

TEST(Migrate, DefaultRuleCannotInventMandatoryValues) {
  const auto e = error_of([] { migrate(library_model(), pages_history(false), HookRegistry{}); });
  EXPECT_EQ(e.code(), ErrorCode::MigrationError);
  EXPECT_EQ(e.reason(), "DefaultRuleFailed");
}

TEST(Migrate, DefaultRuleDropsDeletedFeatureValues) {
  auto h = History::create(library_metamodel());
  h.release("1.0", true);
  h.record_primitive({PrimitiveKind::Delete, "lib.Library.name", nullptr});
  h.record_primitive({PrimitiveKind::Set, "lib", {{"property", "nsUri"}, {"value", "urn:lib/2"}}});
  h.release("2.0");
  const auto result = migrate(library_model(), h, HookRegistry{});
  EXPECT_EQ(result.model.find({"lib.model.json", "city"})->slot("name"), nullptr);
  EXPECT_EQ(result.model.ns_uri, "urn:lib/2");
  EXPECT_TRUE(check_conformance(result.model, h.head()).empty());
}

TEST(Migrate, BrokenHookIsPostConformance) {
  HookRegistry registry;
  registry.register_hook("count_pages", [](MigrationContext&) {});
  const auto e = error_of([&] { migrate(library_model(), pages_history(true), registry); });
  EXPECT_EQ(e.code(), ErrorCode::PostConformance);
}

TEST(Migrate, UnknownNamespaceFailsFirst) {
  auto set = library_model();
  set.ns_uri = "urn:lib/9";
  const auto e = error_of([&] { migrate(set, pages_history(true), HookRegistry{}); });
  EXPECT_EQ(e.code(), ErrorCode::UnknownNsUri);
}

TEST(Migrate, NonConformingInputIsRejected) {
  auto set = library_model();
  unset_slot(set, kB1, "title");
  const auto e = error_of([&] { migrate(set, pages_history(true), pages_hooks()); });
  EXPECT_EQ(e.code(), ErrorCode::InitialNonConformance);
}

TEST(Migrate, AtHeadIsIdentity) {
  const auto h = pages_history(true);
  auto set = migrate(library_model(), h, pages_hooks()).model;
  const auto again = migrate(set, h, pages_hooks());
  EXPECT_EQ(again.model, set);
  EXPECT_TRUE(again.report.applied.empty());
  EXPECT_EQ(again.report.source, 1u);
}

TEST(Scenario, MigratesToExpectedFiles) {
  const auto s = testing::load_scenario();
  const auto result = migrate(s.v10, s.history, scenario_hooks("mini-gmf"));
  const auto head = s.history.head();
  const auto d = diff_models(result.model, s.expected_v21, {.ignore_reference_order = false, .metamodel = &head});
  EXPECT_TRUE(d.empty()) << format_diff(d);
  EXPECT_EQ(result.model, s.expected_v21);
  EXPECT_TRUE(check_conformance(result.model, head).empty());
}

TEST(Scenario, IntermediateReleaseMigratesToo) {
  const auto s = testing::load_scenario();
  const auto result = migrate(s.expected_v20, s.history, scenario_hooks("mini-gmf"));
  EXPECT_EQ(result.report.source_label, "2.0");
  EXPECT_EQ(result.model, s.expected_v21);
}

TEST(Scenario, OutputFilesKeepNamesAndBytes) {
  const auto s = testing::load_scenario();
  const auto result = migrate(s.v10, s.history, scenario_hooks("mini-gmf"));
  const auto out = testing::fresh_temp_dir("scenario-out");
  const auto files = save_resource_set(result.model, out);
  ASSERT_EQ(files.size(), 2u);
  const auto expected = testing::scenario_dir() / "mini-gmf" / "expected" / "v2.1";
  for (const auto& f : files) {
    EXPECT_EQ(read_file(f), read_file(expected / f.filename())) << f;
  }
  // Cross-file references resolve after reloading.
  const auto back = load_resource_set({out / "diagram.model.json"});
  EXPECT_EQ(back.resources.size(), 2u);
  EXPECT_TRUE(check_conformance(back, s.history.head()).empty());
}

}  // namespace
}  // namespace coupevo
