#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adatest/netlist.hpp"
#include "adatest/profile.hpp"
#include "adatest/sat.hpp"
#include "adatest/sim.hpp"

namespace adatest {

enum class InitMode { Sat, Random };

struct AdaTestConfig {
  double theta = 0.1;
  std::uint64_t trials = 100000;
  std::size_t candidate_count = 200;  // M
  std::size_t select_count = 80;      // L
  std::size_t max_iterations = 500;
  double coverage_percent = 95.0;
  std::uint64_t target_activations = 20;  // N
  double lambda1 = 0.05;
  double lambda2 = 0.0001;
  double lambda3 = 0.00025;
  double mutation_rate = 0.05;
  double explore_fraction = 0.2;
  InitMode init = InitMode::Sat;
  std::uint64_t seed = 1;

  // Throws UsageError naming the first violated constraint.
  void validate() const;
};

std::string_view init_mode_name(InitMode mode) noexcept;
InitMode parse_init_mode(std::string_view text);

// Ordered test vectors with their cached DAG states, per-rare-node
// activation counters (indexed like Profile::rare_set) and sampling weights.
struct TestSet {
  std::vector<PatternVector> vectors;
  std::vector<DagState> dag_cache;
  std::vector<std::uint64_t> counters;
  std::vector<double> masses;
  std::vector<double> sampling_weights;
  // Number of cached states with a 1 at each flatten position.
  std::vector<std::uint64_t> position_ones;

  std::size_t size() const noexcept { return vectors.size(); }
};

// Flatten positions and rare values of the profile's rare nodes.
struct RareView {
  std::vector<std::uint32_t> positions;
  std::vector<std::uint8_t> values;

  RareView(const Netlist& netlist, const Profile& profile);
  bool active(const DagState& state, std::size_t r) const {
    return state.bits.get(positions[r]) == (values[r] != 0);
  }
};

// Simulates `vectors` and builds a test set with uniform weights.
TestSet make_test_set(const Netlist& netlist, const Profile& profile,
                      std::vector<PatternVector> vectors, unsigned jobs = 1);
// Appends simulated vectors; weights are left for update_weights.
void append_vectors(TestSet& set, const RareView& rare, std::vector<PatternVector> vectors,
                    std::vector<DagState> states);

struct RewardBreakdown {
  double v_rare = 0.0;
  double v_scoap = 0.0;
  double v_dag = 0.0;
  double total = 0.0;
};

double v_rare(std::span<const std::uint64_t> counters, std::uint64_t target);
// Unobservable nodes contribute CO = 0.
double v_scoap(std::span<const RareNode> activated, std::span<const Scoap> scoap);
// Mean normalized Hamming distance to the history; 0 for an empty history.
double v_dag(const DagState& candidate, std::span<const DagState> history);
double combine_reward(double v_rare, double v_scoap, double v_dag, const AdaTestConfig& config);

RewardBreakdown reward(const PatternVector& candidate, const TestSet& state,
                       const Profile& profile, const Netlist& netlist,
                       const AdaTestConfig& config);
// Same as reward() for an already simulated candidate.
RewardBreakdown reward_of_state(const DagState& candidate, const TestSet& state,
                                const Profile& profile, const RareView& rare,
                                const AdaTestConfig& config);

// Candidate m draws from its own stream keyed by (seed, iteration, m).
std::vector<PatternVector> generate_candidates(const TestSet& state, std::size_t count,
                                               const AdaTestConfig& config,
                                               std::uint64_t iteration);

// Indices of the `count` highest rewards, descending; ties keep index order.
std::vector<std::size_t> select_top(std::span<const double> rewards, std::size_t count);

// The last rewards.size() vectors of `state` are the new batch. Each batch
// receives total mass 1 split in proportion to (reward - batch min + 1e-6);
// weights are the masses renormalized over the whole set.
void update_weights(TestSet& state, std::span<const double> rewards);

enum class StopReason { None, Trojan, Coverage, Budget };
std::string_view stop_reason_name(StopReason reason) noexcept;

// Checked in order: Trojan oracle, coverage, iteration budget.
StopReason check_termination(const TestSet& state, std::size_t iteration, bool oracle_fired,
                             const AdaTestConfig& config);

struct TraceRow {
  std::size_t iteration = 0;
  double coverage_pct = 0.0;  // rare nodes activated at least N times
  std::uint64_t min_counter = 0;
  std::uint64_t median_counter = 0;  // lower median
};

TraceRow trace_row(const TestSet& state, std::size_t iteration, const AdaTestConfig& config);

// Called with each newly added batch; returns true when the Trojan fired.
using TrojanOracle = std::function<bool(std::span<const PatternVector>)>;

struct AdaTestResult {
  TestSet test_set;
  std::vector<TraceRow> trace;
  StopReason reason = StopReason::None;
  std::size_t iterations = 0;
  SmartInitResult init;
};

AdaTestResult run_adatest(const Netlist& netlist, const Profile& profile,
                          const AdaTestConfig& config, const TrojanOracle& oracle = {},
                          unsigned jobs = 1);

std::string trace_csv(std::span<const TraceRow> trace);

}  // namespace adatest
