// Serial reference kernel against the OpenMP one on the bundled fixtures.

#include <benchmark/benchmark.h>

#include "spalign/engine.hpp"
#include "spalign/fixtures.hpp"

using namespace spalign;

namespace {

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel;
}

template <Fixture (*Make)()>
void BM_BuildAlignments(benchmark::State& state) {
  const auto store = Make().store();
  const auto model = build_cost_model(store);
  BuildParams p;
  p.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_alignments(store, model, p));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

// One wide stage: every alignment with two Old rows, extended by every Old pattern.
template <Fixture (*Make)()>
void BM_ExpandStage(benchmark::State& state) {
  const auto store = Make().store();
  const auto model = build_cost_model(store);
  const MatchParams match;
  auto live = expand_stage({seed_alignment(store)}, store, model, match, ExecPolicy::Serial).alignments;
  live = expand_stage(live, store, model, match, ExecPolicy::Serial).alignments;
  if (live.size() > 200) live.erase(live.begin() + 200, live.end());
  for (auto _ : state) benchmark::DoNotOptimize(expand_stage(live, store, model, match, policy(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
  state.counters["live"] = static_cast<double>(live.size());
}

}  // namespace

BENCHMARK(BM_BuildAlignments<fruit_flies_fixture>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildAlignments<diagnosis_fixture>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpandStage<fruit_flies_fixture>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExpandStage<diagnosis_fixture>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
