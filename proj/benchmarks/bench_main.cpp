// Timings for the scenario paths: replay, migration, diffing.

#include <benchmark/benchmark.h>

#include "coupevo/diff.hpp"
#include "coupevo/history.hpp"
#include "coupevo/metamodel_io.hpp"
#include "coupevo/migrate.hpp"
#include "coupevo/model_io.hpp"

namespace fs = std::filesystem;
using namespace coupevo;

namespace {

const fs::path kGmf = fs::path(COUPEVO_BENCH_SCENARIO_DIR) / "mini-gmf";

ResourceSet models(const char* release) {
  const auto dir = release == std::string("v1.0") ? kGmf / "models" / release : kGmf / "expected" / release;
  return load_resource_set({dir / "figures.model.json", dir / "diagram.model.json"});
}

void BM_LoadHistory(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_history(kGmf / "history.json"));
}
BENCHMARK(BM_LoadHistory);

void BM_Reconstruct(benchmark::State& state) {
  const auto h = load_history(kGmf / "history.json");
  const auto at = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(h.reconstruct(at));
}
BENCHMARK(BM_Reconstruct)->DenseRange(0, 2);

void BM_MigrateScenario(benchmark::State& state) {
  const auto h = load_history(kGmf / "history.json");
  const auto hooks = scenario_hooks("mini-gmf");
  const auto v10 = models("v1.0");
  for (auto _ : state) benchmark::DoNotOptimize(migrate(v10, h, hooks));
}
BENCHMARK(BM_MigrateScenario)->Unit(benchmark::kMicrosecond);

void BM_DiffModels(benchmark::State& state) {
  const auto a = models("v2.0");
  const auto b = models("v2.1");
  const auto h = load_history(kGmf / "history.json");
  const auto migrated = migrate(a, h, scenario_hooks("mini-gmf")).model;
  const auto head = h.head();
  for (auto _ : state) benchmark::DoNotOptimize(diff_models(migrated, b, {.ignore_reference_order = true, .metamodel = &head}));
}
BENCHMARK(BM_DiffModels);

void BM_DiffMetamodels(benchmark::State& state) {
  const auto a = load_metamodel(kGmf / "metamodels" / "gmfgraph-1.0.mm.json");
  const auto b = load_metamodel(kGmf / "metamodels" / "gmfgraph-2.1.mm.json");
  for (auto _ : state) benchmark::DoNotOptimize(diff_metamodels(a, b));
}
BENCHMARK(BM_DiffMetamodels);

}  // namespace

BENCHMARK_MAIN();
