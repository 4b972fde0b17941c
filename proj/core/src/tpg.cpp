#include "adatest/tpg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "adatest/error.hpp"
#include "adatest/parallel.hpp"
#include "adatest/rng.hpp"

namespace adatest {
namespace {

constexpr double kWeightShift = 1e-6;

void require(bool ok, const char* message) {
  if (!ok) throw UsageError(message);
}

PatternVector random_vector(Rng& rng, std::size_t width) {
  PatternVector v{BitVector(width)};
  for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
  return v;
}

}  // namespace

void AdaTestConfig::validate() const {
  require(theta > 0.0, "theta must be positive");
  require(trials >= 1, "trials must be at least 1");
  require(select_count >= 1, "select_count (L) must be at least 1");
  require(select_count <= candidate_count, "select_count (L) must not exceed candidate_count (M)");
  require(coverage_percent > 0.0 && coverage_percent <= 100.0,
          "coverage_percent must be in (0, 100]");
  require(target_activations >= 1, "target_activations (N) must be at least 1");
  require(lambda1 >= 0.0 && lambda2 >= 0.0 && lambda3 >= 0.0, "lambdas must be non-negative");
  require(mutation_rate >= 0.0 && mutation_rate <= 1.0, "mutation_rate must be in [0, 1]");
  require(explore_fraction >= 0.0 && explore_fraction <= 1.0,
          "explore_fraction must be in [0, 1]");
}

std::string_view init_mode_name(InitMode mode) noexcept {
  return mode == InitMode::Sat ? "sat" : "random";
}

InitMode parse_init_mode(std::string_view text) {
  if (text == "sat") return InitMode::Sat;
  if (text == "random") return InitMode::Random;
  throw UsageError("init must be 'sat' or 'random', got '" + std::string(text) + "'");
}

RareView::RareView(const Netlist& netlist, const Profile& profile) {
  positions.reserve(profile.rare_set.size());
  for (const RareNode& r : profile.rare_set) {
    if (r.node.index >= netlist.node_count()) {
      throw InputError("profile does not belong to netlist '" + netlist.name() + "'");
    }
    positions.push_back(netlist.flat_position(r.node));
    values.push_back(r.rare_value ? 1 : 0);
  }
}

void append_vectors(TestSet& set, const RareView& rare, std::vector<PatternVector> vectors,
                    std::vector<DagState> states) {
  if (vectors.size() != states.size()) throw InvariantError("vector/state count mismatch");
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const DagState& s = states[k];
    if (set.position_ones.empty()) set.position_ones.assign(s.bits.size(), 0);
    for (std::size_t r = 0; r < rare.positions.size(); ++r) {
      if (rare.active(s, r)) ++set.counters[r];
    }
    const auto words = s.bits.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        ++set.position_ones[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))];
        bits &= bits - 1;
      }
    }
    set.vectors.push_back(std::move(vectors[k]));
    set.dag_cache.push_back(std::move(states[k]));
  }
}

TestSet make_test_set(const Netlist& netlist, const Profile& profile,
                      std::vector<PatternVector> vectors, unsigned jobs) {
  TestSet set;
  set.counters.assign(profile.rare_set.size(), 0);
  set.position_ones.assign(netlist.node_count(), 0);
  auto states = simulate_batch(netlist, vectors, jobs);
  append_vectors(set, RareView(netlist, profile), std::move(vectors), std::move(states));
  update_weights(set, std::vector<double>(set.size(), 0.0));
  return set;
}

double v_rare(std::span<const std::uint64_t> counters, std::uint64_t target) {
  double sum = 0.0;
  for (std::uint64_t c : counters) {
    sum += static_cast<double>(c > target ? c - target : target - c);
  }
  return -sum;
}

double v_scoap(std::span<const RareNode> activated, std::span<const Scoap> scoap) {
  double sum = 0.0;
  for (const RareNode& r : activated) {
    const Scoap& s = scoap[r.node.index];
    sum += static_cast<double>(s.cc(r.rare_value)) +
           (s.observable() ? static_cast<double>(s.co) : 0.0);
  }
  return sum;
}

double v_dag(const DagState& candidate, std::span<const DagState> history) {
  if (history.empty() || candidate.bits.empty()) return 0.0;
  std::uint64_t distance = 0;
  for (const DagState& s : history) {
    if (s.bits.size() != candidate.bits.size()) {
      throw UsageError("DAG states of different lengths");
    }
    distance += candidate.bits.hamming_distance(s.bits);
  }
  return static_cast<double>(distance) /
         (static_cast<double>(history.size()) * static_cast<double>(candidate.bits.size()));
}

double combine_reward(double v_rare, double v_scoap, double v_dag,
                      const AdaTestConfig& config) {
  return config.lambda1 * v_rare + config.lambda2 * v_scoap + config.lambda3 * v_dag;
}

RewardBreakdown reward_of_state(const DagState& candidate, const TestSet& state,
                                const Profile& profile, const RareView& rare,
                                const AdaTestConfig& config) {
  RewardBreakdown b;
  const std::uint64_t target = config.target_activations;
  double rare_sum = 0.0;
  double scoap_sum = 0.0;
  for (std::size_t r = 0; r < rare.positions.size(); ++r) {
    std::uint64_t c = state.counters[r];
    if (rare.active(candidate, r)) {
      ++c;
      const Scoap& s = profile.scoap[profile.rare_set[r].node.index];
      scoap_sum += static_cast<double>(s.cc(rare.values[r] != 0)) +
                   (s.observable() ? static_cast<double>(s.co) : 0.0);
    }
    rare_sum += static_cast<double>(c > target ? c - target : target - c);
  }
  b.v_rare = -rare_sum;
  b.v_scoap = scoap_sum;

  // Sum of Hamming distances to every cached state, from per-position counts.
  const std::size_t n = candidate.bits.size();
  const std::size_t h = state.size();
  if (h > 0 && n > 0) {
    std::uint64_t distance = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::uint64_t ones = state.position_ones[pos];
      distance += candidate.bits.get(pos) ? h - ones : ones;
    }
    b.v_dag = static_cast<double>(distance) / (static_cast<double>(h) * static_cast<double>(n));
  }
  b.total = combine_reward(b.v_rare, b.v_scoap, b.v_dag, config);
  return b;
}

RewardBreakdown reward(const PatternVector& candidate, const TestSet& state,
                       const Profile& profile, const Netlist& netlist,
                       const AdaTestConfig& config) {
  const DagState s = simulate(netlist, candidate);
  if (state.counters.size() != profile.rare_set.size()) {
    throw UsageError("test set counters do not match the profile's rare set");
  }
  return reward_of_state(s, state, profile, RareView(netlist, profile), config);
}

std::vector<PatternVector> generate_candidates(const TestSet& state, std::size_t count,
                                               const AdaTestConfig& config,
                                               std::uint64_t iteration) {
  if (state.size() == 0) throw UsageError("cannot generate candidates from an empty test set");
  const std::size_t width = state.vectors.front().width();
  std::vector<double> cumulative(state.size());
  std::partial_sum(state.sampling_weights.begin(), state.sampling_weights.end(),
                   cumulative.begin());
  const double total = cumulative.back();

  std::vector<PatternVector> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    Rng rng(derive_seed(config.seed, Stream::kCandidates, {iteration, m}));
    if (rng.uniform01() < config.explore_fraction) {
      out.push_back(random_vector(rng, width));
      continue;
    }
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t parent = static_cast<std::size_t>(it - cumulative.begin());
    if (parent >= state.size()) parent = state.size() - 1;
    // Skip zero-weight parents that upper_bound can land on at the end.
    while (parent > 0 && state.sampling_weights[parent] == 0.0) --parent;
    PatternVector child = state.vectors[parent];
    if (config.mutation_rate > 0.0) {
      for (std::size_t i = 0; i < width; ++i) {
        if (rng.bernoulli(config.mutation_rate)) child.bits.flip(i);
      }
    }
    out.push_back(std::move(child));
  }
  return out;
}

std::vector<std::size_t> select_top(std::span<const double> rewards, std::size_t count) {
  if (count > rewards.size()) {
    throw UsageError("cannot select " + std::to_string(count) + " of " +
                     std::to_string(rewards.size()) + " candidates");
  }
  std::vector<std::size_t> index(rewards.size());
  std::iota(index.begin(), index.end(), 0);
  std::stable_sort(index.begin(), index.end(),
                   [&](std::size_t a, std::size_t b) { return rewards[a] > rewards[b]; });
  index.resize(count);
  return index;
}

void update_weights(TestSet& state, std::span<const double> rewards) {
  if (rewards.size() > state.size()) throw UsageError("more rewards than vectors");
  if (rewards.empty()) return;
  for (double r : rewards) {
    if (!std::isfinite(r)) throw UsageError("rewards must be finite");
  }
  const double lo = *std::min_element(rewards.begin(), rewards.end());
  double batch = 0.0;
  for (double r : rewards) batch += r - lo + kWeightShift;
  state.masses.resize(state.size(), 0.0);
  const std::size_t first = state.size() - rewards.size();
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    state.masses[first + k] = (rewards[k] - lo + kWeightShift) / batch;
  }
  const double total = std::accumulate(state.masses.begin(), state.masses.end(), 0.0);
  state.sampling_weights.resize(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    state.sampling_weights[k] = state.masses[k] / total;
  }
}

std::string_view stop_reason_name(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::None:
      return "none";
    case StopReason::Trojan:
      return "trojan";
    case StopReason::Coverage:
      return "coverage";
    case StopReason::Budget:
      return "budget";
  }
  return "none";
}

StopReason check_termination(const TestSet& state, std::size_t iteration, bool oracle_fired,
                             const AdaTestConfig& config) {
  if (oracle_fired) return StopReason::Trojan;
  const auto& ctr = state.counters;
  std::size_t reached = 0;
  std::uint64_t lowest = ctr.empty() ? 0 : *std::min_element(ctr.begin(), ctr.end());
  for (std::uint64_t c : ctr) reached += c >= config.target_activations ? 1 : 0;
  if (ctr.empty() || (100.0 * static_cast<double>(reached) >=
                          config.coverage_percent * static_cast<double>(ctr.size()) &&
                      lowest >= 1)) {
    return StopReason::Coverage;
  }
  if (iteration >= config.max_iterations) return StopReason::Budget;
  return StopReason::None;
}

TraceRow trace_row(const TestSet& state, std::size_t iteration, const AdaTestConfig& config) {
  TraceRow row;
  row.iteration = iteration;
  std::vector<std::uint64_t> c = state.counters;
  if (c.empty()) {
    row.coverage_pct = 100.0;
    return row;
  }
  std::size_t reached = 0;
  for (std::uint64_t v : c) reached += v >= config.target_activations ? 1 : 0;
  row.coverage_pct = 100.0 * static_cast<double>(reached) / static_cast<double>(c.size());
  std::sort(c.begin(), c.end());
  row.min_counter = c.front();
  row.median_counter = c[(c.size() - 1) / 2];
  return row;
}

AdaTestResult run_adatest(const Netlist& netlist, const Profile& profile,
                          const AdaTestConfig& config, const TrojanOracle& oracle,
                          unsigned jobs) {
  config.validate();
  netlist.require_combinational();
  const RareView rare(netlist, profile);
  const std::size_t width = netlist.primary_inputs().size();
  AdaTestResult result;

  std::vector<PatternVector> initial;
  if (config.init == InitMode::Sat && !profile.rare_set.empty()) {
    result.init = smart_initialize(netlist, profile.rare_set, config.select_count, config.seed);
    initial = result.init.vectors;
  } else {
    Rng rng(derive_seed(config.seed, Stream::kRandomInit));
    for (std::size_t k = 0; k < config.select_count; ++k) {
      initial.push_back(random_vector(rng, width));
    }
  }
  bool fired = oracle && oracle(initial);
  result.test_set = make_test_set(netlist, profile, std::move(initial), jobs);
  TestSet& set = result.test_set;

  std::size_t iteration = 0;
  result.trace.push_back(trace_row(set, iteration, config));
  while ((result.reason = check_termination(set, iteration, fired, config)) ==
         StopReason::None) {
    ++iteration;
    auto candidates = generate_candidates(set, config.candidate_count, config, iteration);
    auto states = simulate_batch(netlist, candidates, jobs);
    std::vector<double> rewards(candidates.size());
    parallel_for(candidates.size(), jobs, [&](std::size_t m) {
      rewards[m] = reward_of_state(states[m], set, profile, rare, config).total;
    });
    const auto top = select_top(rewards, config.select_count);
    std::vector<PatternVector> chosen;
    std::vector<DagState> chosen_states;
    std::vector<double> chosen_rewards;
    for (std::size_t m : top) {
      chosen.push_back(std::move(candidates[m]));
      chosen_states.push_back(std::move(states[m]));
      chosen_rewards.push_back(rewards[m]);
    }
    if (oracle) fired = oracle(chosen);
    append_vectors(set, rare, std::move(chosen), std::move(chosen_states));
    update_weights(set, chosen_rewards);
    result.trace.push_back(trace_row(set, iteration, config));
  }
  result.iterations = iteration;
  return result;
}

std::string trace_csv(std::span<const TraceRow> trace) {
  std::ostringstream out;
  out << "iteration,coverage_pct,min_counter,median_counter\n";
  for (const TraceRow& r : trace) {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.4f", r.coverage_pct);
    out << r.iteration << ',' << pct << ',' << r.min_counter << ',' << r.median_counter
        << '\n';
  }
  return out.str();
}

}  // namespace adatest
