#include <benchmark/benchmark.h>

#include "adatest/netlist.hpp"
#include "adatest/rng.hpp"
#include "adatest/sim.hpp"

namespace {

using namespace adatest;

const Netlist& circuit(int which) {
  static const Netlist c432 = read_bench_file(ADATEST_BENCH_DATA_DIR "/c432.bench");
  static const Netlist c3540 = read_bench_file(ADATEST_BENCH_DATA_DIR "/c3540_resyn.bench");
  return which == 0 ? c432 : c3540;
}

std::vector<PatternVector> random_vectors(std::size_t width, std::size_t count) {
  Rng rng(1);
  std::vector<PatternVector> out(count, PatternVector{BitVector(width)});
  for (auto& v : out) {
    for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
  }
  return out;
}

void BM_SimulateScalar(benchmark::State& state) {
  const Netlist& n = circuit(static_cast<int>(state.range(0)));
  const auto v = random_vectors(n.primary_inputs().size(), 64);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(n, v[k++ % v.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulateScalar)->Arg(0)->Arg(1);

void BM_SimulateBatch(benchmark::State& state) {
  const Netlist& n = circuit(static_cast<int>(state.range(0)));
  const auto v = random_vectors(n.primary_inputs().size(), 4096);
  const PatternBatch batch(v, n.primary_inputs().size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_batch(n, batch));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}
BENCHMARK(BM_SimulateBatch)->Arg(0)->Arg(1);

void BM_WordSimulator(benchmark::State& state) {
  const Netlist& n = circuit(static_cast<int>(state.range(0)));
  WordSimulator sim(n);
  Rng rng(2);
  std::vector<std::uint64_t> words(n.primary_inputs().size());
  for (auto& w : words) w = rng.next();
  for (auto _ : state) {
    sim.run(words);
    benchmark::DoNotOptimize(sim.values().data());
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_WordSimulator)->Arg(0)->Arg(1);

}  // namespace
