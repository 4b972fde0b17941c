#include <benchmark/benchmark.h>

#include "adatest/profile.hpp"
#include "adatest/rng.hpp"
#include "adatest/sat.hpp"
#include "adatest/tpg.hpp"

namespace {

using namespace adatest;

struct Fixture {
  Netlist netlist;
  Profile profile;
};

const Fixture& c880() {
  static const Fixture f = [] {
    Netlist n = read_bench_file(ADATEST_BENCH_DATA_DIR "/c880_resyn.bench");
    Profile p = profile_circuit(n, 0.1, 20000, 1);
    return Fixture{std::move(n), std::move(p)};
  }();
  return f;
}

void BM_Reward(benchmark::State& state) {
  const Fixture& f = c880();
  const std::size_t width = f.netlist.primary_inputs().size();
  Rng rng(3);
  std::vector<PatternVector> hist(static_cast<std::size_t>(state.range(0)), PatternVector{BitVector(width)});
  for (auto& v : hist) {
    for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
  }
  const TestSet ts = make_test_set(f.netlist, f.profile, hist);
  const RareView rare(f.netlist, f.profile);
  const AdaTestConfig cfg;
  const DagState cand = simulate(f.netlist, hist.front());
  for (auto _ : state) {
    benchmark::DoNotOptimize(reward_of_state(cand, ts, f.profile, rare, cfg));
  }
}
BENCHMARK(BM_Reward)->Arg(80)->Arg(800);

void BM_SmartInit(benchmark::State& state) {
  const Fixture& f = c880();
  for (auto _ : state) {
    benchmark::DoNotOptimize(smart_initialize(f.netlist, f.profile.rare_set, 80, 1));
  }
}
BENCHMARK(BM_SmartInit)->Unit(benchmark::kMillisecond);

void BM_AdaTestIterations(benchmark::State& state) {
  const Fixture& f = c880();
  AdaTestConfig cfg;
  cfg.max_iterations = static_cast<std::size_t>(state.range(0));
  cfg.coverage_percent = 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_adatest(f.netlist, f.profile, cfg));
  }
}
BENCHMARK(BM_AdaTestIterations)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
