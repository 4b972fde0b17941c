#include <gtest/gtest.h>

#include <cmath>

#include "adatest/error.hpp"
#include "adatest/profile.hpp"
#include "adatest/sim.hpp"
#include "oracles.hpp"
#include "paths.hpp"

namespace adatest {
namespace {

TEST(Profile, PrimaryInputsNearHalf) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  const auto p = estimate_transition_probabilities(n, 100000, 3);
  const double sigma = std::sqrt(0.25 / 100000);
  EXPECT_NEAR(p.p_one[n.at("a").index], 0.5, 4 * sigma);
  EXPECT_NEAR(p.p_one[n.at("c").index], 0.25, 4 * std::sqrt(0.1875 / 100000));
  EXPECT_NEAR(p.p_trans[n.at("c").index], 0.1875, 0.01);
  EXPECT_THROW(estimate_transition_probabilities(n, 0, 1), UsageError);
}

TEST(Profile, MatchesExhaustiveProbabilitiesWithinThreeSigma) {
  const std::uint64_t trials = 20000;
  std::size_t nodes = 0;
  std::size_t outside = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rc = testing::random_circuit({.inputs = 8, .gates = 40, .outputs = 3}, seed);
    const Netlist n = rc.netlist();
    std::map<std::string, int> ones;
    for (std::uint64_t m = 0; m < 256; ++m) {
      for (const auto& [name, v] : testing::recursive_eval(rc, testing::bits_of(m, 8))) {
        ones[name] += v;
      }
    }
    const auto est = estimate_transition_probabilities(n, trials, seed);
    for (const auto& [name, count] : ones) {
      const double p = count / 256.0;
      const double sigma = std::sqrt(p * (1 - p) / trials);
      const double err = std::abs(est.p_one[n.at(name).index] - p);
      // Hard bound with a multiple-comparison margin; 3 sigma holds for
      // nearly all nodes. 1e-9 covers constant nodes.
      EXPECT_LE(err, 4.5 * sigma + 1e-9) << name;
      ++nodes;
      outside += err > 3 * sigma + 1e-9;
    }
  }
  EXPECT_LE(outside, nodes / 50 + 1);
}

TEST(Profile, IndependentOfJobCount) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const auto a = estimate_transition_probabilities(n, 10000, 4, 1);
  const auto b = estimate_transition_probabilities(n, 10000, 4, 3);
  EXPECT_EQ(a.ones, b.ones);
}

TEST(Profile, RareNodeIdentification) {
  const Netlist n =
      parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(y)\ny = AND(a, b, c, d)\n");
  SignalProbabilities p;
  p.trials = 16;
  p.p_one = {0.5, 0.5, 0.5, 0.5, 1.0 / 16};
  for (double x : p.p_one) p.p_trans.push_back(x * (1 - x));
  const auto rare = identify_rare_nodes(p, 0.1);
  ASSERT_EQ(rare.size(), 1U);
  EXPECT_EQ(rare[0].node, n.at("y"));
  EXPECT_TRUE(rare[0].rare_value);
  EXPECT_NEAR(rare[0].p_trans, 15.0 / 256, 1e-12);
  EXPECT_EQ(identify_rare_nodes(p, 0.2500001).size(), 5U);
  EXPECT_THROW(identify_rare_nodes(p, 0.0), UsageError);
}

TEST(Profile, RareSetMonotoneInTheta) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const auto p = estimate_transition_probabilities(n, 20000, 1);
  std::size_t last = 0;
  for (double theta : {0.01, 0.05, 0.1, 0.15, 0.2, 0.25}) {
    const auto r = identify_rare_nodes(p, theta);
    EXPECT_GE(r.size(), last);
    last = r.size();
    for (const RareNode& x : r) {
      EXPECT_LT(x.p_trans, theta);
      EXPECT_EQ(x.rare_value, x.p_one < 0.5);
      EXPECT_NEAR(x.p_trans, x.p_one * (1 - x.p_one), 1e-12);
    }
  }
}

TEST(Scoap, AndAndInverterExamples) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n");
  const auto s = compute_scoap(n);
  EXPECT_EQ(s[n.at("c").index].cc1, 3U);
  EXPECT_EQ(s[n.at("c").index].cc0, 2U);
  EXPECT_EQ(s[n.at("c").index].co, 0U);
  EXPECT_EQ(s[n.at("a").index].co, 2U);
  EXPECT_EQ(s[n.at("b").index].co, 2U);

  const Netlist inv = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n");
  const auto t = compute_scoap(inv);
  EXPECT_EQ(t[inv.at("y").index].cc0, 2U);
  EXPECT_EQ(t[inv.at("y").index].cc1, 2U);
  EXPECT_EQ(t[inv.at("a").index].co, 1U);
}

TEST(Scoap, DanglingNodeIsUnobservable) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOT(a)\nz = AND(a, b)\n");
  const auto s = compute_scoap(n);
  EXPECT_FALSE(s[n.at("z").index].observable());
  EXPECT_FALSE(s[n.at("b").index].observable());
  EXPECT_TRUE(s[n.at("a").index].observable());
}

TEST(Scoap, MatchesFixedPointOracle) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto rc = testing::random_circuit(
        {.inputs = 6, .gates = 50, .outputs = 1 + seed % 5, .max_fanin = 4}, seed);
    const Netlist n = rc.netlist();
    const auto got = compute_scoap(n);
    const auto want = testing::fixed_point_scoap(rc);
    for (const auto& [name, w] : want) {
      const Scoap& g = got[n.at(name).index];
      EXPECT_EQ(g.cc0, w.cc0) << name;
      EXPECT_EQ(g.cc1, w.cc1) << name;
      EXPECT_EQ(g.co, w.co == testing::kRefInf ? kUnobservable : w.co) << name;
      EXPECT_GE(g.cc0, 1U);
      EXPECT_GE(g.cc1, 1U);
    }
  }
}

TEST(Profile, ReproducibleForFixedSeed) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  const Profile a = profile_circuit(n, 0.1, 20000, 11, 1);
  const Profile b = profile_circuit(n, 0.1, 20000, 11, 2);
  EXPECT_EQ(a.p_one, b.p_one);
  EXPECT_EQ(a.rare_set, b.rare_set);
  EXPECT_EQ(a.scoap, b.scoap);
  for (NodeId po : n.primary_outputs()) EXPECT_EQ(a.scoap[po.index].co, 0U);
}

}  // namespace
}  // namespace adatest
