// Drives the coupevo binary through a shell.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coupevo/io.hpp"
#include "fixtures.hpp"

namespace coupevo {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run cli(const std::vector<std::string>& args) {
  std::string cmd = "COUPEVO_COLOR=never " + quote(COUPEVO_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return run;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) run.out.append(buf, n);
  const int raw = pclose(pipe);
  run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return run;
}

fs::path gmf() { return testing::scenario_dir() / "mini-gmf"; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Cli, OpsListMatchesCommittedNames) {
  const auto run = cli({"ops", "list"});
  ASSERT_EQ(run.status, 0);
  auto names = lines(run.out);
  EXPECT_EQ(names.size(), 34u);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, lines(read_file(testing::acceptance_data_dir() / "operations.txt")));
}

TEST(Cli, OpsDescribe) {
  const auto run = cli({"ops", "describe", "Make Reference Containment"});
  EXPECT_EQ(run.status, 0);
  EXPECT_NE(run.out.find("OppositeContainment"), std::string::npos);
  const auto bad = cli({"ops", "describe", "Nope"});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("error [UnknownOperation]"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).status, 2);
  EXPECT_EQ(cli({"frobnicate"}).status, 2);
  EXPECT_EQ(cli({"history", "apply"}).status, 2);
}

TEST(Cli, Validate) {
  const auto v10 = gmf() / "models" / "v1.0";
  const auto ok = cli({"validate", (gmf() / "metamodels" / "gmfgraph-1.0.mm.json").string(),
                       (v10 / "figures.model.json").string(), (v10 / "diagram.model.json").string()});
  EXPECT_EQ(ok.status, 0) << ok.out;
  const auto bad = cli({"validate", (gmf() / "metamodels" / "gmfgraph-2.1.mm.json").string(),
                        (v10 / "figures.model.json").string(), (v10 / "diagram.model.json").string()});
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.out.find("NsUriMismatch"), std::string::npos);
}

TEST(Cli, HistoryAuthoringRoundTrip) {
  const auto dir = testing::fresh_temp_dir("cli-history");
  const auto h = (dir / "h.json").string();
  const auto mm = (gmf() / "metamodels" / "gmfgraph-1.0.mm.json").string();
  ASSERT_EQ(cli({"history", "create", mm, "-o", h}).status, 0);
  EXPECT_EQ(cli({"history", "create", mm, "-o", h}).status, 1);  // exists, no --force
  ASSERT_EQ(cli({"history", "release", h, "1.0", "--force"}).status, 0);

  const auto refused = cli({"history", "apply", h, "Delete Feature", "--arg", "feature=gmfgraph.Nope"});
  EXPECT_EQ(refused.status, 1);
  EXPECT_NE(refused.out.find("not applicable"), std::string::npos);
  EXPECT_NE(refused.out.find("UnknownFeature"), std::string::npos);

  const auto applied = cli({"history", "apply", h, "Change Namespace URI", "--arg", "package=gmfgraph", "--arg",
                            "nsUri=urn:mini:gmfgraph/2.0"});
  EXPECT_EQ(applied.status, 0) << applied.out;
  EXPECT_NE(applied.out.find("constraints: all satisfied"), std::string::npos);
  EXPECT_EQ(cli({"history", "undo", h}).status, 0);
  EXPECT_EQ(cli({"history", "release", h, "2.0"}).status, 1);  // nothing recorded
  EXPECT_EQ(cli({"history", "apply", h, "Change Namespace URI", "--arg", "package=gmfgraph", "--arg",
                 "nsUri=urn:mini:gmfgraph/2.0"})
                .status,
            0);
  EXPECT_EQ(cli({"history", "release", h, "2.0"}).status, 0);

  const auto out = (dir / "r1.mm.json").string();
  ASSERT_EQ(cli({"history", "reconstruct", h, "--at", "1", "-o", out}).status, 0);
  EXPECT_NE(read_file(out).find("urn:mini:gmfgraph/2.0"), std::string::npos);
  const auto show = cli({"history", "show", h});
  EXPECT_EQ(show.status, 0);
  EXPECT_NE(show.out.find("2.0"), std::string::npos);
}

TEST(Cli, StatsMatchCommittedTable) {
  const auto run = cli({"history", "stats", (gmf() / "history.json").string()});
  ASSERT_EQ(run.status, 0);
  EXPECT_EQ(run.out, read_file(gmf() / "stats.txt"));
}

TEST(Cli, MigrateAndDiff) {
  const auto out = testing::fresh_temp_dir("cli-migrate");
  const auto v10 = gmf() / "models" / "v1.0";
  const auto run = cli({"migrate", (gmf() / "history.json").string(), (v10 / "figures.model.json").string(),
                        (v10 / "diagram.model.json").string(), "-o", out.string(), "--scenario", "mini-gmf"});
  ASSERT_EQ(run.status, 0) << run.out;
  EXPECT_NE(run.out.find("source release: 0 (1.0)"), std::string::npos);
  const auto expected = gmf() / "expected" / "v2.1";
  for (const char* f : {"figures.model.json", "diagram.model.json"}) {
    EXPECT_EQ(read_file(out / f), read_file(expected / f)) << f;
  }
  const auto same = cli({"diff-model", (out / "figures.model.json").string(), (out / "diagram.model.json").string(),
                         "--against", (expected / "figures.model.json").string(), (expected / "diagram.model.json").string()});
  EXPECT_EQ(same.status, 0) << same.out;
  const auto differ = cli({"diff-model", (out / "figures.model.json").string(), (out / "diagram.model.json").string(),
                           "--against", (gmf() / "expected" / "v2.0" / "figures.model.json").string(),
                           (gmf() / "expected" / "v2.0" / "diagram.model.json").string()});
  EXPECT_EQ(differ.status, 1);
}

TEST(Cli, MigrateWithoutHooksFails) {
  const auto out = testing::fresh_temp_dir("cli-migrate-nohooks");
  const auto v10 = gmf() / "models" / "v1.0";
  const auto run = cli({"migrate", (gmf() / "history.json").string(), (v10 / "figures.model.json").string(), "-o",
                        out.string()});
  EXPECT_EQ(run.status, 1);
  EXPECT_NE(run.out.find("MissingHook"), std::string::npos);
  EXPECT_TRUE(fs::is_empty(out));
}

TEST(Cli, DiffMetamodels) {
  const auto mm = gmf() / "metamodels";
  EXPECT_EQ(cli({"diff-mm", (mm / "gmfgraph-1.0.mm.json").string(), (mm / "gmfgraph-1.0.mm.json").string()}).status, 0);
  const auto doc = testing::fresh_temp_dir("cli-diff-mm") / "d.diff.json";
  const auto run = cli({"diff-mm", (mm / "gmfgraph-1.0.mm.json").string(), (mm / "gmfgraph-2.0.mm.json").string(),
                        "--json", doc.string()});
  EXPECT_EQ(run.status, 1);
  const auto parsed = nlohmann::json::parse(read_file(doc));
  EXPECT_FALSE(parsed["entries"].empty());
}

}  // namespace
}  // namespace coupevo
