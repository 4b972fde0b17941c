#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "adatest/error.hpp"
#include "adatest/hwgen.hpp"
#include "adatest/rng.hpp"
#include "hw_replay.hpp"
#include "oracles.hpp"

namespace adatest {
namespace {

std::vector<PatternVector> random_set(std::size_t width, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PatternVector> out(length, PatternVector{BitVector(width)});
  for (auto& v : out) {
    for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.bernoulli(0.5));
  }
  return out;
}

std::vector<BitVector> bits(const std::vector<PatternVector>& v) {
  std::vector<BitVector> out;
  for (const auto& p : v) out.push_back(p.bits);
  return out;
}

std::vector<PatternVector> from_strings(std::initializer_list<const char*> rows) {
  std::vector<PatternVector> out;
  for (const char* r : rows) out.push_back({BitVector::from_string(r)});
  return out;
}

TEST(TapMatrix, FourVectorExample) {
  const auto set = from_strings({"110", "010", "011", "101"});
  const TapMatrix tap = derive_tap_matrix(set, 3);
  ASSERT_EQ(tap.cols(), 4u);
  ASSERT_EQ(tap.rows, 3u);
  EXPECT_EQ(tap.columns[2], set[0].bits);
  EXPECT_EQ(tap.columns[3], set[1].bits);
  EXPECT_EQ(tap.columns[0], set[2].bits);
  EXPECT_EQ(tap.columns[1], set[3].bits);
  EXPECT_EQ(tap.tap_count(), 7u);
  EXPECT_EQ(simulate_tpg(tap, 4), bits(set));
  EXPECT_EQ(tap.init_state().to_string(), "0010");
}

TEST(TapMatrix, AllZeroVectorHasNoTaps) {
  const auto set = from_strings({"000", "111"});
  const TapMatrix tap = derive_tap_matrix(set, 1);
  EXPECT_EQ(tap.columns[0].popcount(), 0u);
  EXPECT_EQ(simulate_tpg(tap, 2), bits(set));
}

TEST(TapMatrix, RoundTripEveryInitPosition) {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t width = 1 + rng.below(64);
    const std::size_t length = 1 + rng.below(40);
    const auto set = random_set(width, length, 1000 + trial);
    for (std::size_t k0 = 1; k0 <= length; ++k0) {
      const TapMatrix tap = derive_tap_matrix(set, k0);
      ASSERT_EQ(simulate_tpg(tap, length), bits(set)) << width << "x" << length << " k0=" << k0;
    }
  }
}

TEST(TapMatrix, PeriodicWithRegisterLength) {
  const auto set = random_set(9, 7, 5);
  const auto seq = simulate_tpg(derive_tap_matrix(set, 4), 14);
  for (std::size_t t = 0; t < 7; ++t) EXPECT_EQ(seq[t], seq[t + 7]);
}

TEST(TapMatrix, Errors) {
  std::vector<PatternVector> none;
  EXPECT_THROW(derive_tap_matrix(none, 1), UsageError);
  const auto set = random_set(4, 3, 1);
  EXPECT_THROW(derive_tap_matrix(set, 0), UsageError);
  EXPECT_THROW(derive_tap_matrix(set, 4), UsageError);
  auto ragged = set;
  ragged[1].bits = BitVector(5);
  EXPECT_THROW(derive_tap_matrix(ragged, 1), InputError);
}

TEST(Plan, ChunkedReplay) {
  const auto set = random_set(6, 8, 11);
  const TpgPlan plan = plan_chunked(set, 4);
  EXPECT_EQ(plan.segments.size(), 2u);
  EXPECT_EQ(plan.chunk_size, 4u);
  EXPECT_FALSE(plan.note.empty());
  EXPECT_EQ(replay(plan), bits(set));

  const TpgPlan uneven = plan_chunked(set, 3);
  ASSERT_EQ(uneven.segments.size(), 3u);
  EXPECT_EQ(uneven.segments.back().count, 2u);
  EXPECT_EQ(replay(uneven), bits(set));
  EXPECT_THROW(plan_chunked(set, 0), UsageError);
  EXPECT_THROW(plan_chunked(set, 9), UsageError);
}

TEST(Plan, SingleSegment) {
  const auto set = random_set(5, 6, 2);
  const TpgPlan plan = plan_single(set, 2);
  ASSERT_EQ(plan.segments.size(), 1u);
  EXPECT_EQ(plan.chunk_size, 6u);
  EXPECT_EQ(replay(plan), bits(set));
}

constexpr const char* kTwoBlocks =
    "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nINPUT(e)\n"
    "OUTPUT(o1)\nOUTPUT(o2)\n"
    "o1 = AND(a, c)\no2 = OR(b, d, e)\n";

TEST(Plan, ClustersFollowConnectedComponents) {
  const Netlist n = parse_bench(kTwoBlocks);
  const auto set = random_set(5, 10, 3);
  const TpgPlan plan = plan_clustered(n, set);
  ASSERT_EQ(plan.clusters.size(), 2u);
  EXPECT_EQ(plan.clusters[0].inputs, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(plan.clusters[1].inputs, (std::vector<std::size_t>{1, 3, 4}));
  const auto out = replay(plan);
  EXPECT_EQ(out, bits(set));
  // Each cluster register carries only its own columns.
  EXPECT_EQ(plan.clusters[0].tap.rows, 2u);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(plan.clusters[0].tap.columns[t].get(1), set[t].bits.get(2));
  }
}

TEST(Cost, SingleRing) {
  const auto set = from_strings({"1100", "0110", "1011", "0001"});
  const CostEstimate c = estimate_cost(plan_single(set));
  EXPECT_EQ(c.ff_count, 4u);
  EXPECT_EQ(c.or_tap_count, 8u);
  EXPECT_EQ(c.counter_bits, 0u);
  EXPECT_EQ(c.mux_2to1_count, 0u);
  EXPECT_EQ(c.cycles_total, 4u);
  EXPECT_EQ(c.total(), 12u);
}

TEST(Cost, CounterBits) {
  EXPECT_EQ(counter_bits_for(1), 0u);
  EXPECT_EQ(counter_bits_for(2), 1u);
  EXPECT_EQ(counter_bits_for(3), 2u);
  EXPECT_EQ(counter_bits_for(4), 2u);
  EXPECT_EQ(counter_bits_for(5), 3u);
}

TEST(Cost, DistributedIsHalfOfCentralizedForEqualClusters) {
  const Netlist n = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(o1)\nOUTPUT(o2)\n"
      "o1 = AND(a, b)\no2 = OR(c, d)\n");
  const auto set = random_set(4, 12, 8);
  const CostEstimate dist = estimate_cost(plan_clustered(n, set, TestMode::Distributed));
  const CostEstimate cent = estimate_cost(plan_clustered(n, set, TestMode::Centralized));
  EXPECT_EQ(dist.cycles_total * 2, cent.cycles_total);
  EXPECT_EQ(dist.ff_count, cent.ff_count);
  EXPECT_EQ(dist.ff_count, 24u);
}

TEST(Cost, SweepFindsBruteForceMinimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto set = random_set(3 + seed, 5 + 3 * seed, 40 + seed);
    std::size_t best = 0;
    const auto points = sweep_chunk_sizes(set, &best);
    ASSERT_EQ(points.size(), set.size());
    std::size_t min_total = std::numeric_limits<std::size_t>::max();
    std::size_t argmin = 0;
    for (std::size_t chunk = 1; chunk <= set.size(); ++chunk) {
      const CostEstimate c = estimate_cost(plan_chunked(set, chunk));
      EXPECT_EQ(c.total(), points[chunk - 1].cost.total());
      if (c.total() < min_total) {
        min_total = c.total();
        argmin = chunk;
      }
    }
    EXPECT_EQ(best, argmin);
  }
}

TEST(ResponseBuffer, Sizing) {
  EXPECT_EQ(size_response_buffer(245, 32).cycles_per_comparison, 8u);
  EXPECT_TRUE(size_response_buffer(245, 32).buffer_needed);
  EXPECT_EQ(size_response_buffer(32, 32).cycles_per_comparison, 1u);
  EXPECT_FALSE(size_response_buffer(32, 32).buffer_needed);
  EXPECT_EQ(size_response_buffer(33, 32).cycles_per_comparison, 2u);
  EXPECT_THROW(size_response_buffer(0, 32), UsageError);
  EXPECT_THROW(size_response_buffer(5, 0), UsageError);
}

TEST(Rom, HexWords) {
  std::vector<BitVector> r = {BitVector::from_string("10000"), BitVector::from_string("01011")};
  // Bit 0 is the least significant bit of the first word.
  EXPECT_EQ(rom_image(r, 4), "1\n0\na\n1\n");
  EXPECT_EQ(rom_image(r, 8), "01\n1a\n");
  EXPECT_THROW(rom_image(r, 0), UsageError);
}

TEST(Emit, SingleRingReproducesSequence) {
  const auto set = from_strings({"110", "010", "011", "101"});
  const TpgPlan plan = plan_single(set, 3);
  EXPECT_EQ(testing::run_emitted(plan, 4), bits(set));
}

TEST(Emit, RandomSetsAllPlanKinds) {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t width = 1 + rng.below(12);
    const std::size_t length = 1 + rng.below(12);
    const auto set = random_set(width, length, 300 + trial);
    EXPECT_EQ(testing::run_emitted(plan_single(set, 1 + rng.below(length)), length), bits(set));
    const std::size_t chunk = 1 + rng.below(length);
    // Two passes over the set check the wrap back to segment 0.
    const auto once = bits(set);
    auto twice = once;
    twice.insert(twice.end(), once.begin(), once.end());
    EXPECT_EQ(testing::run_emitted(plan_chunked(set, chunk), 2 * length), twice)
        << width << "x" << length << " chunk " << chunk;
  }
}

TEST(Emit, Clusters) {
  const Netlist n = parse_bench(kTwoBlocks);
  const auto set = random_set(5, 7, 17);
  EXPECT_EQ(testing::run_emitted(plan_clustered(n, set), 7), bits(set));
}

TEST(Emit, InitialStateIsOneHot) {
  const auto set = random_set(4, 6, 1);
  const auto state = initial_register_state(plan_chunked(set, 4));
  std::size_t ones = 0;
  for (const auto& [name, v] : state) {
    if (name.rfind("cnt", 0) == 0) EXPECT_FALSE(v);
    if (name.rfind("q", 0) == 0) ones += v;
  }
  EXPECT_EQ(ones, 1u);
}

}  // namespace
}  // namespace adatest
