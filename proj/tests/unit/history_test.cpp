#include <gtest/gtest.h>

#include "coupevo/diff.hpp"
#include "coupevo/error.hpp"
#include "coupevo/history.hpp"
#include "coupevo/io.hpp"
#include "fixtures.hpp"

namespace coupevo {
namespace {

using testing::library_metamodel;
using json = nlohmann::json;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

OperationApplication rename_uri(const std::string& uri) {
  return {"Change Namespace URI", {{"package", "lib"}, {"nsUri", uri}}};
}

PrimitiveChange add_note() {
  return {PrimitiveKind::Create, "lib.Book",
          {{"element", "annotation"}, {"document", {{"source", "note"}, {"details", {{"text", "x"}}}}}}};
}

History two_releases() {
  auto h = History::create(library_metamodel());
  h.release("1.0", true);
  h.record_application(rename_uri("urn:lib/2"));
  h.record_application({"Create Class", {{"package", "lib"}, {"name", "Shelf"}}});
  h.release("2.0");
  return h;
}

TEST(History, CreateStartsWithOpenRelease) {
  const auto h = History::create(library_metamodel());
  ASSERT_EQ(h.releases().size(), 1u);
  EXPECT_EQ(h.releases()[0].label, "0");
  EXPECT_TRUE(h.has_open_release());
  EXPECT_EQ(h.head(), library_metamodel());
}

TEST(History, CreateRejectsInvalidMetamodel) {
  auto mm = library_metamodel();
  mm.find_class("lib.Item")->supertypes.push_back("lib.Book");
  EXPECT_EQ(code_of([&] { History::create(mm); }), ErrorCode::InvalidMetamodel);
}

TEST(History, RecordAndReconstruct) {
  const auto h = two_releases();
  EXPECT_EQ(h.reconstruct(0), library_metamodel());
  EXPECT_EQ(h.reconstruct(1).packages[0].ns_uri, "urn:lib/2");
  EXPECT_NE(h.reconstruct(1).find_class("lib.Shelf"), nullptr);
  EXPECT_EQ(h.reconstruct(), h.head());
}

TEST(History, RecordRejectsInapplicableOperation) {
  auto h = History::create(library_metamodel());
  const auto before = h;
  EXPECT_EQ(code_of([&] { h.record_application({"Delete Feature", {{"feature", "lib.Book.isbn"}}}); }),
            ErrorCode::ConstraintViolation);
  EXPECT_EQ(h, before);
}

TEST(History, PrimitiveMustKeepHeadValid) {
  auto h = History::create(library_metamodel());
  h.record_primitive(add_note());
  EXPECT_NE(find_annotation(h.head().find_class("lib.Book")->annotations, "note"), nullptr);
  EXPECT_EQ(code_of([&] {
              h.record_primitive({PrimitiveKind::Set, "lib.Book.title", {{"property", "type"}, {"value", "lib.Nope"}}});
            }),
            ErrorCode::InvalidMetamodel);
  EXPECT_EQ(code_of([&] { h.record_primitive({PrimitiveKind::Delete, "lib.Ghost", nullptr}); }), ErrorCode::ReplayError);
}

TEST(History, UndoRestoresEquality) {
  auto h = History::create(library_metamodel());
  h.record_application(rename_uri("urn:lib/2"));
  const auto snapshot = h;
  h.record_application({"Create Class", {{"package", "lib"}, {"name", "Shelf"}}});
  h.undo_last();
  EXPECT_EQ(h, snapshot);
  EXPECT_EQ(h.head(), snapshot.head());
  h.record_primitive(add_note());
  h.undo_last();
  EXPECT_EQ(h, snapshot);
}

TEST(History, UndoStopsAtRelease) {
  auto h = History::create(library_metamodel());
  EXPECT_EQ(code_of([&] { h.undo_last(); }), ErrorCode::NothingToUndo);
  auto released = two_releases();
  EXPECT_EQ(code_of([&] { released.undo_last(); }), ErrorCode::ReleasedHistory);
}

TEST(History, ReleaseRules) {
  auto h = History::create(library_metamodel());
  EXPECT_EQ(code_of([&] { h.release("1.0"); }), ErrorCode::EmptyRelease);
  EXPECT_EQ(code_of([&] { h.release(""); }), ErrorCode::InvalidLabel);
  h.release("1.0", true);
  h.record_application(rename_uri("urn:lib/2"));
  EXPECT_EQ(code_of([&] { h.release("1.0"); }), ErrorCode::DuplicateLabel);
  h.release("2.0");
  EXPECT_EQ(h.releases().size(), 3u);
  EXPECT_TRUE(h.releases()[1].released);
  EXPECT_TRUE(h.has_open_release());
}

TEST(History, AttachSpanMustCoverTrailingPrimitives) {
  auto h = History::create(library_metamodel());
  h.record_primitive(add_note());
  EXPECT_EQ(code_of([&] { h.attach_migration("fix", 2); }), ErrorCode::BadSpan);
  EXPECT_EQ(code_of([&] { h.attach_migration("fix", 0); }), ErrorCode::BadSpan);
  h.attach_migration("fix", 1, "Fix notes");
  EXPECT_EQ(h.hooks(), std::vector<std::string>{"fix"});
  // The primitive is now covered; nothing trails the custom migration.
  EXPECT_EQ(code_of([&] { h.attach_migration("again", 1); }), ErrorCode::BadSpan);
}

TEST(History, DetectRelease) {
  const auto h = two_releases();
  EXPECT_EQ(h.detect_release("urn:lib/1"), 0u);
  EXPECT_EQ(h.detect_release("urn:lib/2"), 1u);
  try {
    h.detect_release("urn:lib/3");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownNsUri);
    EXPECT_NE(std::string(e.what()).find("urn:lib/2"), std::string::npos) << e.what();
  }
}

TEST(History, JsonRoundTrip) {
  auto h = two_releases();
  h.record_primitive(add_note());
  h.attach_migration("fix", 1, "Fix notes");
  const auto dir = testing::fresh_temp_dir("history-io");
  save_history(h, dir / "h.json");
  const auto back = load_history(dir / "h.json");
  EXPECT_EQ(back, h);
  save_history(back, dir / "again.json");
  EXPECT_EQ(read_file(dir / "h.json"), read_file(dir / "again.json"));
}

TEST(History, LoadRejectsUnknownOperation) {
  auto doc = to_json(two_releases());
  doc["releases"][1]["changes"][0]["op"] = "Teleport Class";
  EXPECT_EQ(code_of([&] { history_from_json(doc); }), ErrorCode::UnknownOperation);
}

TEST(History, StatsCountsOperationsAndCustoms) {
  auto h = two_releases();
  h.record_application(rename_uri("urn:lib/3"));
  h.record_primitive(add_note());
  h.attach_migration("fix", 1, "Fix notes");
  const auto stats = h.stats();
  EXPECT_EQ(stats.at("Change Namespace URI"), 2);
  EXPECT_EQ(stats.at("Create Class"), 1);
  EXPECT_EQ(stats.at("Custom"), 1);
  const auto rows = h.stats_rows();
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].operation, "Change Namespace URI");
  EXPECT_EQ(rows[2].operation, "Fix notes");
  EXPECT_EQ(rows[2].kind, "Custom");
  EXPECT_EQ(h.stats_table().substr(0, 9), "Operation");
}

TEST(History, ScenarioSnapshotsReconstruct) {
  const auto s = testing::load_scenario();
  ASSERT_EQ(s.snapshots.size(), 3u);
  for (std::size_t i = 0; i < s.snapshots.size(); ++i) {
    const auto d = diff_metamodels(s.history.reconstruct(i), s.snapshots[i]);
    EXPECT_TRUE(d.empty()) << "release " << i << "\n" << format_diff(d);
  }
  EXPECT_EQ(s.history.detect_release("urn:mini:gmfgraph/2.0"), 1u);
}

}  // namespace
}  // namespace coupevo
