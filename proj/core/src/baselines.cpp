#include <algorithm>
#include <numeric>
#include <set>

#include "adatest/error.hpp"
#include "adatest/eval.hpp"
#include "adatest/rng.hpp"

namespace adatest {
namespace {

PatternVector random_vector(Rng& rng, std::size_t width) {
  PatternVector v{BitVector(width)};
  for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
  return v;
}

// Lane-0 evaluation of one vector; rare node activations as a bit mask per node.
class SingleEvaluator {
 public:
  SingleEvaluator(const Netlist& netlist, const Profile& profile)
      : sim_(netlist), profile_(profile), words_(netlist.primary_inputs().size()) {}

  void run(const PatternVector& v) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = v.bits.get(i) ? 1U : 0U;
    sim_.run(words_);
  }
  bool active(std::size_t r) const {
    const RareNode& node = profile_.rare_set[r];
    return (sim_.value(node.node) & 1U) == (node.rare_value ? 1U : 0U);
  }

 private:
  WordSimulator sim_;
  const Profile& profile_;
  std::vector<std::uint64_t> words_;
};

}  // namespace

BaselineResult run_mero(const Netlist& netlist, const Profile& profile, const MeroConfig& config,
                        std::uint64_t seed) {
  netlist.require_combinational();
  const std::size_t width = netlist.primary_inputs().size();
  const std::size_t rare = profile.rare_set.size();
  const std::uint64_t target = config.target_activations;
  BaselineResult result;

  Rng rng(derive_seed(seed, Stream::kMero));
  std::vector<PatternVector> pool;
  pool.reserve(config.random_pool);
  for (std::size_t k = 0; k < config.random_pool; ++k) pool.push_back(random_vector(rng, width));

  const RareView view(netlist, profile);
  const auto states = simulate_batch(netlist, pool);
  result.evaluated += pool.size();
  std::vector<std::size_t> score(pool.size(), 0);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    for (std::size_t r = 0; r < rare; ++r) score[k] += view.active(states[k], r) ? 1 : 0;
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

  std::vector<std::uint64_t> counters(rare, 0);
  auto done = [&] {
    return std::all_of(counters.begin(), counters.end(),
                       [&](std::uint64_t c) { return c >= target; });
  };
  SingleEvaluator eval(netlist, profile);
  auto contribution = [&](const PatternVector& v) {
    eval.run(v);
    ++result.evaluated;
    std::size_t c = 0;
    for (std::size_t r = 0; r < rare; ++r) c += (counters[r] < target && eval.active(r)) ? 1 : 0;
    return c;
  };

  for (std::size_t k : order) {
    if (done()) break;
    PatternVector v = pool[k];
    std::size_t best = contribution(v);
    for (std::size_t i = 0; i < width; ++i) {
      v.bits.flip(i);
      const std::size_t c = contribution(v);
      if (c >= best) {
        best = c;
      } else {
        v.bits.flip(i);
      }
    }
    if (best == 0) continue;
    eval.run(v);
    for (std::size_t r = 0; r < rare; ++r) counters[r] += eval.active(r) ? 1 : 0;
    result.vectors.push_back(std::move(v));
  }
  return result;
}

double triage_fitness(const DagState& state, const Profile& profile, const RareView& rare) {
  double total = 0.0;
  double hit = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < rare.positions.size(); ++r) {
    const RareNode& node = profile.rare_set[r];
    const Scoap& s = profile.scoap[node.node.index];
    const double w = static_cast<double>(s.cc(node.rare_value)) +
                     (s.observable() ? static_cast<double>(s.co) : 0.0);
    total += w;
    if (rare.active(state, r)) {
      ++count;
      hit += w;
    }
  }
  return static_cast<double>(count) + (total > 0.0 ? hit / total : 0.0);
}

BaselineResult run_triage(const Netlist& netlist, const Profile& profile,
                          const TriageConfig& config, std::uint64_t seed,
                          std::span<const PatternVector> initial) {
  if (config.population == 0 || config.select == 0 || config.select > config.population) {
    throw UsageError("TRIAGE needs 0 < select <= population");
  }
  netlist.require_combinational();
  const std::size_t width = netlist.primary_inputs().size();
  const RareView view(netlist, profile);
  Rng rng(derive_seed(seed, Stream::kTriage));
  BaselineResult result;

  std::vector<PatternVector> population;
  if (!initial.empty()) {
    if (initial.size() != config.population) {
      throw UsageError("initial population has the wrong size");
    }
    population.assign(initial.begin(), initial.end());
  } else {
    for (std::size_t k = 0; k < config.population; ++k) {
      population.push_back(random_vector(rng, width));
    }
  }

  std::set<BitVector> retained_seen;
  double best = -1.0;
  std::size_t stagnant = 0;
  while (result.generations < config.max_generations) {
    const auto states = simulate_batch(netlist, population);
    result.evaluated += population.size();
    std::vector<double> fitness(population.size());
    for (std::size_t k = 0; k < population.size(); ++k) {
      fitness[k] = triage_fitness(states[k], profile, view);
    }
    const auto top = select_top(fitness, config.select);
    ++result.generations;
    const double gen_best = fitness[top.front()];
    result.best_fitness.push_back(gen_best);

    std::vector<PatternVector> elites;
    for (std::size_t k : top) {
      elites.push_back(population[k]);
      if (retained_seen.insert(population[k].bits).second) {
        result.vectors.push_back(population[k]);
      }
    }
    if (gen_best > best) {
      best = gen_best;
      stagnant = 0;
    } else if (++stagnant >= config.stagnation_window) {
      break;
    }
    if (result.generations >= config.max_generations) break;

    std::vector<PatternVector> next = elites;
    while (next.size() < config.population) {
      const PatternVector& a = elites[rng.below(elites.size())];
      const PatternVector& b = elites[rng.below(elites.size())];
      PatternVector child = a;
      if (width > 1 && rng.bernoulli(config.p_cross)) {
        const std::size_t point = 1 + rng.below(width - 1);
        for (std::size_t i = point; i < width; ++i) child.bits.set(i, b.bits.get(i));
      }
      if (config.p_mut > 0.0) {
        for (std::size_t i = 0; i < width; ++i) {
          if (rng.bernoulli(config.p_mut)) child.bits.flip(i);
        }
      }
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  return result;
}

}  // namespace adatest
