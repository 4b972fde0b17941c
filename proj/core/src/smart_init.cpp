#include <algorithm>
#include <numeric>

#include "adatest/error.hpp"
#include "adatest/rng.hpp"
#include "adatest/sat.hpp"

namespace adatest {

SmartInitResult smart_initialize(const Netlist& netlist, std::span<const RareNode> rare_set,
                                 std::size_t count, std::uint64_t seed) {
  if (count == 0) throw UsageError("smart initialization needs at least one vector");
  if (rare_set.empty()) throw UsageError("smart initialization needs a non-empty rare set");
  const Cnf cnf = encode_cnf(netlist);
  const std::size_t width = netlist.primary_inputs().size();

  SmartInitResult out;
  std::vector<std::size_t> activations(rare_set.size(), 0);
  std::vector<std::uint8_t> skipped(rare_set.size(), 0);
  std::uint64_t query = 0;

  auto try_solve = [&](const std::vector<std::size_t>& group) -> std::optional<PatternVector> {
    std::vector<Literal> assumptions;
    for (std::size_t r : group) {
      assumptions.push_back(cnf.literal(rare_set[r].node, rare_set[r].rare_value));
    }
    SolveOptions options;
    options.phase_seed = derive_seed(seed, Stream::kSmartInit, {query++});
    auto a = solve(cnf, assumptions, options);
    if (!a) {
      ++out.unsat_queries;
      return std::nullopt;
    }
    ++out.sat_queries;
    return input_vector(netlist, cnf, *a);
  };

  std::vector<std::size_t> order(rare_set.size());
  while (out.vectors.size() < count) {
    order.clear();
    for (std::size_t r = 0; r < rare_set.size(); ++r) {
      if (!skipped[r]) order.push_back(r);
    }
    if (order.empty()) break;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return activations[a] < activations[b];
    });

    std::vector<std::size_t> group(order.begin(),
                                   order.begin() + std::min<std::size_t>(3, order.size()));
    auto vector = try_solve(group);
    if (!vector && group.size() > 1) {
      group.resize(1);
      vector = try_solve(group);
    }
    if (!vector) {
      skipped[group.front()] = 1;
      out.skipped.push_back(group.front());
      continue;
    }

    const DagState state = simulate(netlist, *vector);
    for (std::size_t r : group) {
      if (node_value(state, netlist, rare_set[r].node) != rare_set[r].rare_value) {
        throw InvariantError("smart initialization vector misses its target '" +
                             netlist.node_name(rare_set[r].node) + "'");
      }
    }
    for (std::size_t r = 0; r < rare_set.size(); ++r) {
      if (node_value(state, netlist, rare_set[r].node) == rare_set[r].rare_value) {
        ++activations[r];
      }
    }
    std::sort(group.begin(), group.end());
    out.vectors.push_back(std::move(*vector));
    out.targets.push_back(std::move(group));
  }

  if (out.vectors.size() < count) {
    out.random_fallback = true;
    Rng rng(derive_seed(seed, Stream::kRandomInit));
    while (out.vectors.size() < count) {
      PatternVector v{BitVector(width)};
      for (std::size_t i = 0; i < width; ++i) v.bits.set(i, rng.next() & 1U);
      out.vectors.push_back(std::move(v));
      out.targets.emplace_back();
    }
  }
  return out;
}

}  // namespace adatest
