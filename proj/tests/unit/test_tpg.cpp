#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "adatest/error.hpp"
#include "adatest/rng.hpp"
#include "adatest/tpg.hpp"
#include "oracles.hpp"
#include "paths.hpp"

namespace adatest {
namespace {

DagState state_of(std::string_view bits) { return {BitVector::from_string(bits)}; }

TEST(Reward, RareTerm) {
  const std::vector<std::uint64_t> at{20, 20};
  const std::vector<std::uint64_t> zero{0, 0};
  const std::vector<std::uint64_t> mixed{5, 30};
  EXPECT_EQ(v_rare(at, 20), 0.0);
  EXPECT_EQ(v_rare(zero, 20), -40.0);
  EXPECT_EQ(v_rare(mixed, 20), -25.0);
}

TEST(Reward, ScoapTerm) {
  std::vector<Scoap> scoap(3);
  scoap[1] = {5, 3, 2};
  scoap[2] = {7, 1, 4};
  EXPECT_EQ(v_scoap({}, scoap), 0.0);
  const std::vector<RareNode> one{{NodeId{1}, true, 0, 0}};
  EXPECT_EQ(v_scoap(one, scoap), 5.0);
  const std::vector<RareNode> two{{NodeId{1}, true, 0, 0}, {NodeId{2}, false, 0, 0}};
  EXPECT_EQ(v_scoap(two, scoap), 16.0);
  scoap[2].co = kUnobservable;
  EXPECT_EQ(v_scoap(two, scoap), 12.0);
}

TEST(Reward, DagTerm) {
  const DagState a = state_of("10110010");
  const std::vector<DagState> self{a};
  EXPECT_EQ(v_dag(a, self), 0.0);
  const std::vector<DagState> comp{DagState{~a.bits}};
  EXPECT_EQ(v_dag(a, comp), 1.0);
  const std::vector<DagState> halves{state_of("10111101"), state_of("01000010")};
  EXPECT_DOUBLE_EQ(v_dag(a, halves), 0.5);
  EXPECT_EQ(v_dag(a, {}), 0.0);
  const DagState b = state_of("00011110");
  const std::vector<DagState> hb{b};
  const std::vector<DagState> ha{a};
  EXPECT_EQ(v_dag(a, hb), v_dag(b, ha));
}

TEST(Reward, Combination) {
  const AdaTestConfig c;
  EXPECT_NEAR(combine_reward(-25, 5, 0.5, c), -1.249375, 1e-15);
  AdaTestConfig zero;
  zero.lambda1 = zero.lambda2 = zero.lambda3 = 0;
  EXPECT_EQ(combine_reward(-25, 5, 0.5, zero), 0.0);
}

// Naive recomputation: simulate, scan every rare node and every history
// state directly.
TEST(Reward, MatchesNaiveRecomputationOnExhaustiveSweep) {
  const auto rc = testing::random_circuit({.inputs = 4, .gates = 20, .outputs = 2}, 77);
  const Netlist n = rc.netlist();
  Profile p = profile_circuit(n, 0.2, 4096, 3);
  ASSERT_FALSE(p.rare_set.empty());
  AdaTestConfig cfg;
  cfg.target_activations = 3;
  std::vector<PatternVector> hist;
  for (const char* s : {"0000", "1011", "1111", "0110", "1011"}) {
    hist.push_back({BitVector::from_string(s)});
  }
  const TestSet ts = make_test_set(n, p, hist);
  for (std::uint64_t m = 0; m < 16; ++m) {
    PatternVector cand{BitVector(4)};
    for (int i = 0; i < 4; ++i) cand.bits.set(i, (m >> i) & 1U);
    const RewardBreakdown got = reward(cand, ts, p, n, cfg);

    const DagState cs = simulate(n, cand);
    double vr = 0;
    double vs = 0;
    for (const RareNode& r : p.rare_set) {
      std::uint64_t count = 0;
      for (const auto& h : hist) count += node_value(simulate(n, h), n, r.node) == r.rare_value;
      const bool act = node_value(cs, n, r.node) == r.rare_value;
      count += act;
      vr -= std::abs(static_cast<double>(count) - 3.0);
      if (act) {
        const Scoap& s = p.scoap[r.node.index];
        vs += static_cast<double>(r.rare_value ? s.cc1 : s.cc0) +
              (s.observable() ? static_cast<double>(s.co) : 0.0);
      }
    }
    double vd = 0;
    for (const auto& h : hist) {
      const DagState hs = simulate(n, h);
      vd += static_cast<double>(cs.bits.hamming_distance(hs.bits)) /
            static_cast<double>(cs.bits.size());
    }
    vd /= static_cast<double>(hist.size());
    EXPECT_DOUBLE_EQ(got.v_rare, vr);
    EXPECT_DOUBLE_EQ(got.v_scoap, vs);
    EXPECT_NEAR(got.v_dag, vd, 1e-12);
    EXPECT_NEAR(got.total, 0.05 * vr + 0.0001 * vs + 0.00025 * vd, 1e-12);
  }
}

TestSet toy_set(std::size_t count, std::size_t width) {
  TestSet s;
  Rng rng(3);
  for (std::size_t k = 0; k < count; ++k) {
    PatternVector v{BitVector(width)};
    for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
    s.vectors.push_back(v);
  }
  s.masses.assign(count, 1.0);
  s.sampling_weights.assign(count, 1.0 / static_cast<double>(count));
  return s;
}

TEST(Candidates, DegenerateMutation) {
  const TestSet s = toy_set(5, 16);
  AdaTestConfig c;
  c.explore_fraction = 0;
  c.mutation_rate = 0;
  for (const auto& v : generate_candidates(s, 50, c, 1)) {
    EXPECT_NE(std::find(s.vectors.begin(), s.vectors.end(), v), s.vectors.end());
  }
  c.mutation_rate = 1;
  for (const auto& v : generate_candidates(s, 50, c, 1)) {
    EXPECT_NE(std::find(s.vectors.begin(), s.vectors.end(), PatternVector{~v.bits}),
              s.vectors.end());
  }
}

TEST(Candidates, ConcentratedWeight) {
  TestSet s = toy_set(4, 16);
  s.sampling_weights = {0, 0, 1, 0};
  AdaTestConfig c;
  c.mutation_rate = 0;
  c.explore_fraction = 0.2;
  std::size_t copies = 0;
  const auto out = generate_candidates(s, 10000, c, 3);
  for (const auto& v : out) copies += v == s.vectors[2];
  // Non-explore draws all pick parent 2; explore draws are random vectors.
  EXPECT_GT(copies, 7500U);
  EXPECT_LT(copies, 8500U);
  for (const auto& v : out) {
    if (v == s.vectors[0] || v == s.vectors[1] || v == s.vectors[3]) ADD_FAILURE();
  }
}

TEST(Candidates, DeterministicPerIterationStream) {
  const TestSet s = toy_set(6, 20);
  const AdaTestConfig c;
  EXPECT_EQ(generate_candidates(s, 30, c, 4), generate_candidates(s, 30, c, 4));
  EXPECT_NE(generate_candidates(s, 30, c, 4), generate_candidates(s, 30, c, 5));
  const auto more = generate_candidates(s, 60, c, 4);
  EXPECT_EQ(std::vector<PatternVector>(more.begin(), more.begin() + 30),
            generate_candidates(s, 30, c, 4));
}

TEST(Select, TopIndices) {
  const std::vector<double> r{3, 1, 2};
  EXPECT_EQ(select_top(r, 2), (std::vector<std::size_t>{0, 2}));
  const std::vector<double> eq{1, 1, 1};
  EXPECT_EQ(select_top(eq, 2), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(select_top(r, 3), (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_THROW(select_top(r, 4), UsageError);
}

TEST(Weights, EqualAndOrdered) {
  TestSet s = toy_set(2, 4);
  s.masses.clear();
  const std::vector<double> eq{-3.0, -3.0};
  update_weights(s, eq);
  EXPECT_DOUBLE_EQ(s.sampling_weights[0], 0.5);
  EXPECT_DOUBLE_EQ(s.sampling_weights[1], 0.5);
  const std::vector<double> ordered{-3.0, -2.5};
  update_weights(s, ordered);
  EXPECT_GT(s.sampling_weights[1], s.sampling_weights[0]);
}

TEST(Weights, AlwaysADistribution) {
  Rng rng(8);
  TestSet s;
  for (int round = 0; round < 200; ++round) {
    const std::size_t add = 1 + rng.below(10);
    std::vector<double> rewards;
    for (std::size_t k = 0; k < add; ++k) {
      s.vectors.push_back({BitVector(3)});
      rewards.push_back((rng.uniform01() - 0.5) * 100);
    }
    update_weights(s, rewards);
    double sum = 0;
    for (double w : s.sampling_weights) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  std::vector<double> bad{NAN};
  EXPECT_THROW(update_weights(s, bad), UsageError);
}

TEST(Termination, Conditions) {
  AdaTestConfig c;
  TestSet s;
  s.counters.assign(100, 20);
  s.counters[0] = 1;
  s.counters[1] = 5;
  s.counters[2] = 5;
  s.counters[3] = 5;
  EXPECT_EQ(check_termination(s, 1, false, c), StopReason::Coverage);
  s.counters[0] = 0;
  EXPECT_EQ(check_termination(s, 1, false, c), StopReason::None);
  EXPECT_EQ(check_termination(s, 500, false, c), StopReason::Budget);
  EXPECT_EQ(check_termination(s, 500, true, c), StopReason::Trojan);
}

TEST(Config, Validation) {
  AdaTestConfig c;
  EXPECT_NO_THROW(c.validate());
  c.select_count = 300;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.coverage_percent = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.target_activations = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.lambda2 = -1;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.mutation_rate = 1.5;
  EXPECT_THROW(c.validate(), UsageError);
  EXPECT_EQ(parse_init_mode("random"), InitMode::Random);
  EXPECT_THROW(parse_init_mode("magic"), UsageError);
}

TEST(RunAdaTest, C432TraceMonotoneAndSetInvariants) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const Profile p = profile_circuit(n, 0.1, 20000, 1);
  for (InitMode mode : {InitMode::Sat, InitMode::Random}) {
    AdaTestConfig c;
    c.init = mode;
    c.seed = 3;
    const auto r = run_adatest(n, p, c);
    EXPECT_NE(r.reason, StopReason::None);
    EXPECT_EQ(r.test_set.size(), c.select_count * (r.iterations + 1));
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_GE(r.trace[i].coverage_pct, r.trace[i - 1].coverage_pct);
      EXPECT_GE(r.trace[i].min_counter, r.trace[i - 1].min_counter);
    }
    const RareView rv(n, p);
    for (std::size_t k = 0; k < r.test_set.size(); ++k) {
      EXPECT_EQ(r.test_set.dag_cache[k], simulate(n, r.test_set.vectors[k]));
    }
    for (std::size_t j = 0; j < p.rare_set.size(); ++j) {
      std::uint64_t count = 0;
      for (const auto& st : r.test_set.dag_cache) count += rv.active(st, j);
      EXPECT_EQ(r.test_set.counters[j], count);
    }
    double sum = std::accumulate(r.test_set.sampling_weights.begin(),
                                 r.test_set.sampling_weights.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(RunAdaTest, DeterministicAcrossJobs) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const Profile p = profile_circuit(n, 0.1, 20000, 1);
  AdaTestConfig c;
  c.init = InitMode::Random;
  const auto a = run_adatest(n, p, c, {}, 1);
  const auto b = run_adatest(n, p, c, {}, 3);
  EXPECT_EQ(a.test_set.vectors, b.test_set.vectors);
  EXPECT_EQ(trace_csv(a.trace), trace_csv(b.trace));
}

// A 4-PI circuit whose trigger (two rare AND nodes) is activatable; the
// exhaustive sweep proves an activating input exists.
TEST(RunAdaTest, ToyTriggerIsActivated) {
  const Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(o)\n"
      "x = AND(a, b, c)\ny = NOR(b, d)\nz = AND(a, c, d)\no = OR(x, y, z)\n");
  const Profile p = profile_circuit(n, 0.2, 4096, 1);
  const NodeId x = n.at("x");
  const NodeId z = n.at("z");
  bool exists = false;
  for (std::uint64_t m = 0; m < 16; ++m) {
    PatternVector v{BitVector(4)};
    for (int i = 0; i < 4; ++i) v.bits.set(i, (m >> i) & 1U);
    const DagState s = simulate(n, v);
    exists |= node_value(s, n, x) && node_value(s, n, z);
  }
  ASSERT_TRUE(exists);
  AdaTestConfig c;
  c.candidate_count = 20;
  c.select_count = 8;
  const auto r = run_adatest(n, p, c);
  bool hit = false;
  for (const auto& s : r.test_set.dag_cache) hit |= node_value(s, n, x) && node_value(s, n, z);
  EXPECT_TRUE(hit);
}

TEST(RunAdaTest, OracleStopsTheLoop) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const Profile p = profile_circuit(n, 0.1, 20000, 1);
  AdaTestConfig c;
  c.init = InitMode::Random;
  int calls = 0;
  const auto r = run_adatest(n, p, c, [&](std::span<const PatternVector>) {
    return ++calls == 2;
  });
  EXPECT_EQ(r.reason, StopReason::Trojan);
  EXPECT_EQ(r.iterations, 1U);
}

TEST(Trace, CsvFormat) {
  std::vector<TraceRow> t{{0, 50.0, 1, 3}, {1, 100.0, 20, 25}};
  EXPECT_EQ(trace_csv(t),
            "iteration,coverage_pct,min_counter,median_counter\n0,50.0000,1,3\n"
            "1,100.0000,20,25\n");
}

}  // namespace
}  // namespace adatest
