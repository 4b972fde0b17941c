#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "adatest/error.hpp"
#include "adatest/netlist.hpp"
#include "adatest/rng.hpp"
#include "adatest/sim.hpp"
#include "oracles.hpp"
#include "paths.hpp"

namespace adatest {
namespace {

using testing::random_circuit;
using testing::RandomCircuitOptions;

constexpr const char* kAnd = "INPUT(a)\nINPUT(b)\nOUTPUT(c)\nc = AND(a, b)\n";

std::vector<std::string> names(const Netlist& n, std::span<const NodeId> ids) {
  std::vector<std::string> out;
  for (NodeId id : ids) out.push_back(n.node_name(id));
  return out;
}

TEST(Netlist, ParsesMinimalAnd) {
  const Netlist n = parse_bench(kAnd);
  EXPECT_EQ(n.primary_inputs().size(), 2U);
  EXPECT_EQ(n.primary_outputs().size(), 1U);
  EXPECT_EQ(n.gate_count(), 1U);
  EXPECT_EQ(n.level(n.at("a")), 0);
  EXPECT_EQ(n.level(n.at("b")), 0);
  EXPECT_EQ(n.level(n.at("c")), 1);
  EXPECT_FALSE(n.is_sequential());
  EXPECT_EQ(names(n, n.flatten_order()), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Netlist, C432HasPublishedStatistics) {
  const Netlist n = read_bench_file(test_data_dir() / "c432.bench");
  EXPECT_EQ(n.primary_inputs().size(), 36U);
  EXPECT_EQ(n.primary_outputs().size(), 7U);
  EXPECT_EQ(n.gate_count(), 160U);
}

TEST(Netlist, UndefinedSignalReportsNameAndLine) {
  try {
    parse_bench("INPUT(b)\nOUTPUT(c)\nc = AND(a)\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(Netlist, RejectsMalformedInput) {
  EXPECT_THROW(parse_bench("INPUT(a)\nINPUT(a)\n"), ParseError);
  EXPECT_THROW(parse_bench("INPUT(a)\nb = MUX(a, a)\n"), ParseError);
  EXPECT_THROW(parse_bench("INPUT(a)\nb = AND(a)\n"), ParseError);
  EXPECT_THROW(parse_bench("INPUT(a)\nb = NOT(a, a)\n"), ParseError);
  EXPECT_THROW(parse_bench("INPUT(a)\nb = AND(a, c)\nc = AND(a, b)\n"), ParseError);
  EXPECT_THROW(parse_bench("INPUT(a\n"), ParseError);
  EXPECT_THROW(parse_bench("OUTPUT(z)\n"), ParseError);
}

TEST(Netlist, AcceptsCommentsCrlfAndBuff) {
  const Netlist n = parse_bench("# hdr\r\nINPUT(a)\r\n\r\nOUTPUT(y) # out\r\ny = buff(a)\r\n");
  EXPECT_EQ(n.gates()[0].kind, GateKind::Buf);
  EXPECT_EQ(n.node_name(n.primary_outputs()[0]), "y");
}

TEST(Netlist, NamesAreCaseSensitive) {
  const Netlist n = parse_bench("INPUT(a)\nINPUT(A)\nOUTPUT(y)\ny = XOR(a, A)\n");
  EXPECT_NE(n.at("a"), n.at("A"));
}

TEST(Netlist, ChainFlattensInChainOrder) {
  const Netlist n = parse_bench("INPUT(x)\nOUTPUT(out)\nout = NOT(m)\nm = NOT(x)\n");
  EXPECT_EQ(names(n, n.flatten_order()), (std::vector<std::string>{"x", "m", "out"}));
}

TEST(Netlist, SequentialNetlistRejectedDownstream) {
  const Netlist s27 = read_bench_file(test_data_dir() / "s27.bench");
  EXPECT_TRUE(s27.is_sequential());
  EXPECT_EQ(s27.flip_flop_count(), 3U);
  EXPECT_THROW((void)s27.flatten_order(), SequentialNetlistError);
  EXPECT_THROW(simulate(s27, PatternVector{BitVector(4)}), SequentialNetlistError);
}

// Independent topological check: Kahn's algorithm over the parsed gates
// defines which orders are legal; flatten_order must be one of them and
// must be level-major with NodeId tie-breaks.
TEST(Netlist, FlattenOrderIsLevelMajorTopologicalPermutation) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto rc = random_circuit({.inputs = 5, .gates = 40, .outputs = 4}, seed);
    const Netlist n = rc.netlist();
    const auto order = n.flatten_order();
    ASSERT_EQ(order.size(), n.node_count());
    std::set<std::uint32_t> seen;
    std::vector<std::size_t> pos(n.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) {
      seen.insert(order[i].index);
      pos[order[i].index] = i;
    }
    EXPECT_EQ(seen.size(), n.node_count());
    for (const Gate& g : n.gates()) {
      for (NodeId in : g.inputs) EXPECT_LT(pos[in.index], pos[g.output.index]);
      int lvl = 0;
      for (NodeId in : g.inputs) lvl = std::max(lvl, n.level(in) + 1);
      EXPECT_EQ(n.level(g.output), lvl);
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      const int a = n.level(order[i - 1]);
      const int b = n.level(order[i]);
      EXPECT_TRUE(a < b || (a == b && order[i - 1] < order[i]));
    }
  }
}

TEST(Netlist, WriteParseRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Netlist a = random_circuit({.inputs = 6, .gates = 30, .flip_flops = seed % 3}, seed)
                          .netlist();
    const Netlist b = parse_bench(write_bench(a), a.name());
    ASSERT_EQ(a.node_count(), b.node_count());
    EXPECT_EQ(write_bench(a), write_bench(b));
    for (std::size_t g = 0; g < a.gate_count(); ++g) {
      EXPECT_EQ(a.gates()[g].kind, b.gates()[g].kind);
      EXPECT_EQ(a.gates()[g].inputs, b.gates()[g].inputs);
    }
  }
}

TEST(Netlist, FanoutListsMatchGateInputs) {
  const auto rc = random_circuit({.inputs = 6, .gates = 50}, 7);
  const Netlist n = rc.netlist();
  std::map<std::uint32_t, std::set<std::uint32_t>> expected;
  for (std::uint32_t gi = 0; gi < n.gate_count(); ++gi) {
    for (NodeId in : n.gates()[gi].inputs) expected[in.index].insert(gi);
  }
  for (std::uint32_t i = 0; i < n.node_count(); ++i) {
    auto f = n.fanout_gates(NodeId{i});
    EXPECT_EQ(std::set<std::uint32_t>(f.begin(), f.end()), expected[i]);
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
  }
}

TEST(Unroll, StructuralCounts) {
  const Netlist s27 = read_bench_file(test_data_dir() / "s27.bench");
  const std::size_t g = s27.combinational_gate_count();
  const Netlist one = unroll_sequential(s27, 1);
  EXPECT_FALSE(one.is_sequential());
  EXPECT_EQ(one.gate_count(), g);
  EXPECT_EQ(one.primary_inputs().size(), 4U + 3U);
  const Netlist two = unroll_sequential(s27, 2);
  EXPECT_EQ(two.gate_count(), 2 * g);
  EXPECT_EQ(two.primary_inputs().size(), 2 * 4U + 3U);
  EXPECT_EQ(two.primary_outputs().size(), 2U);
  EXPECT_THROW(unroll_sequential(s27, 0), UsageError);
}

// Unrolled simulation against a cycle-by-cycle sequential reference with
// the same initial flip-flop values.
void check_unroll(const testing::RefCircuit& rc, std::size_t frames, std::uint64_t seed) {
  const Netlist seq = rc.netlist();
  const Netlist flat = unroll_sequential(seq, frames);
  std::map<std::string, std::size_t> pi_pos;
  for (std::size_t i = 0; i < flat.primary_inputs().size(); ++i) {
    pi_pos[flat.node_name(flat.primary_inputs()[i])] = i;
  }
  Rng rng(seed);
  const std::size_t pis = rc.inputs.size();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<bool>> per_cycle(frames, std::vector<bool>(pis));
    std::map<std::string, bool> state;
    PatternVector v{BitVector(flat.primary_inputs().size())};
    for (std::size_t k = 0; k < frames; ++k) {
      for (std::size_t i = 0; i < pis; ++i) {
        per_cycle[k][i] = rng.next() & 1U;
        v.bits.set(pi_pos.at(frame_name(rc.inputs[i], k)), per_cycle[k][i]);
      }
    }
    for (const auto& g : rc.gates) {
      if (g.kind != "DFF") continue;
      state[g.output] = rng.next() & 1U;
      v.bits.set(pi_pos.at(initial_state_name(g.output)), state[g.output]);
    }
    const auto expected = testing::sequential_run(rc, per_cycle, state);
    const BitVector got = primary_outputs_of(simulate(flat, v), flat);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(got.get(i), expected[i]);
  }
}

TEST(Unroll, S27MatchesSequentialSimulation) {
  const Netlist s27 = read_bench_file(test_data_dir() / "s27.bench");
  testing::RefCircuit rc;
  rc.name = "s27";
  for (NodeId id : s27.primary_inputs()) rc.inputs.push_back(s27.node_name(id));
  for (NodeId id : s27.primary_outputs()) rc.outputs.push_back(s27.node_name(id));
  for (const Gate& g : s27.gates()) {
    testing::RefGate r{std::string(gate_kind_name(g.kind)), s27.node_name(g.output), {}};
    for (NodeId in : g.inputs) r.inputs.push_back(s27.node_name(in));
    rc.gates.push_back(r);
  }
  for (std::size_t frames : {1, 2, 3, 5}) check_unroll(rc, frames, frames);
}

TEST(Unroll, RandomSequentialMatchesSequentialSimulation) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rc = random_circuit({.inputs = 4, .gates = 25, .outputs = 3, .flip_flops = 4},
                                   seed);
    check_unroll(rc, 2 + seed % 3, seed);
  }
}

}  // namespace
}  // namespace adatest
