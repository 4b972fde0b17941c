#include "adatest/profile.hpp"

#include <algorithm>
#include <bit>

#include "adatest/error.hpp"
#include "adatest/parallel.hpp"
#include "adatest/rng.hpp"
#include "adatest/sim.hpp"

namespace adatest {

std::optional<std::size_t> Profile::rare_index(NodeId id) const {
  auto it = std::lower_bound(rare_set.begin(), rare_set.end(), id,
                             [](const RareNode& r, NodeId n) { return r.node < n; });
  if (it == rare_set.end() || it->node != id) return std::nullopt;
  return static_cast<std::size_t>(it - rare_set.begin());
}

SignalProbabilities estimate_transition_probabilities(const Netlist& netlist,
                                                      std::uint64_t trials,
                                                      std::uint64_t seed, unsigned jobs) {
  if (trials == 0) throw UsageError("trials must be at least 1");
  netlist.require_combinational();
  const std::size_t n = netlist.node_count();
  const std::size_t pis = netlist.primary_inputs().size();
  const std::uint64_t blocks = (trials + 63) / 64;
  const std::size_t chunks = std::min<std::uint64_t>(std::max(1U, jobs), blocks);

  // Block b always draws from its own stream, so chunking only changes which
  // thread sums it. Integer sums are order-independent.
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(n, 0));
  parallel_for(chunks, jobs, [&](std::size_t c) {
    WordSimulator sim(netlist);
    std::vector<std::uint64_t> words(pis);
    auto& counts = partial[c];
    const std::uint64_t begin = blocks * c / chunks;
    const std::uint64_t end = blocks * (c + 1) / chunks;
    for (std::uint64_t b = begin; b < end; ++b) {
      Rng rng(derive_seed(seed, Stream::kProfile, {b}));
      for (auto& w : words) w = rng.next();
      sim.run(words);
      const std::uint64_t lanes = std::min<std::uint64_t>(64, trials - b * 64);
      const std::uint64_t mask = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
      const auto values = sim.values();
      for (std::size_t i = 0; i < n; ++i) counts[i] += std::popcount(values[i] & mask);
    }
  });

  SignalProbabilities out;
  out.trials = trials;
  out.ones.assign(n, 0);
  for (const auto& counts : partial) {
    for (std::size_t i = 0; i < n; ++i) out.ones[i] += counts[i];
  }
  out.p_one.resize(n);
  out.p_trans.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(out.ones[i]) / static_cast<double>(trials);
    out.p_one[i] = p;
    out.p_trans[i] = p * (1.0 - p);
  }
  return out;
}

std::vector<RareNode> identify_rare_nodes(const SignalProbabilities& probabilities,
                                          double theta) {
  if (!(theta > 0.0)) throw UsageError("theta must be positive");
  std::vector<RareNode> rare;
  for (std::size_t i = 0; i < probabilities.p_trans.size(); ++i) {
    if (probabilities.p_trans[i] < theta) {
      const double p = probabilities.p_one[i];
      rare.push_back(RareNode{NodeId{static_cast<std::uint32_t>(i)}, p < 0.5, p,
                              probabilities.p_trans[i]});
    }
  }
  return rare;
}

std::vector<Scoap> compute_scoap(const Netlist& netlist) {
  netlist.require_combinational();
  std::vector<Scoap> s(netlist.node_count());
  const auto gates = netlist.gates();
  const auto order = netlist.evaluation_order();

  for (std::uint32_t gi : order) {
    const Gate& g = gates[gi];
    Scoap& o = s[g.output.index];
    const Scoap& first = s[g.inputs[0].index];
    std::uint64_t c0 = 0;
    std::uint64_t c1 = 0;
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Nand:
        c0 = first.cc0;
        for (NodeId in : g.inputs) {
          c0 = std::min(c0, s[in.index].cc0);
          c1 += s[in.index].cc1;
        }
        break;
      case GateKind::Or:
      case GateKind::Nor:
        c1 = first.cc1;
        for (NodeId in : g.inputs) {
          c1 = std::min(c1, s[in.index].cc1);
          c0 += s[in.index].cc0;
        }
        break;
      case GateKind::Xor:
      case GateKind::Xnor: {
        // Cheapest input assignment of each output parity.
        c0 = first.cc0;
        c1 = first.cc1;
        for (std::size_t k = 1; k < g.inputs.size(); ++k) {
          const Scoap& b = s[g.inputs[k].index];
          const std::uint64_t n0 = std::min(c0 + b.cc0, c1 + b.cc1);
          const std::uint64_t n1 = std::min(c0 + b.cc1, c1 + b.cc0);
          c0 = n0;
          c1 = n1;
        }
        break;
      }
      case GateKind::Not:
        c0 = first.cc1;
        c1 = first.cc0;
        break;
      case GateKind::Buf:
      case GateKind::Dff:
        c0 = first.cc0;
        c1 = first.cc1;
        break;
    }
    const bool inverting = g.kind == GateKind::Nand || g.kind == GateKind::Nor ||
                           g.kind == GateKind::Xnor;
    o.cc0 = (inverting ? c1 : c0) + 1;
    o.cc1 = (inverting ? c0 : c1) + 1;
  }

  for (NodeId po : netlist.primary_outputs()) s[po.index].co = 0;
  // Reverse evaluation order: every reader of a gate's output comes later in
  // the forward order, so the output CO is final when the gate is visited.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Gate& g = gates[*it];
    const std::uint64_t co_out = s[g.output.index].co;
    if (co_out == kUnobservable) continue;
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      std::uint64_t side = 0;
      for (std::size_t j = 0; j < g.inputs.size(); ++j) {
        if (j == i) continue;
        const Scoap& b = s[g.inputs[j].index];
        switch (g.kind) {
          case GateKind::And:
          case GateKind::Nand:
            side += b.cc1;
            break;
          case GateKind::Or:
          case GateKind::Nor:
            side += b.cc0;
            break;
          default:
            side += std::min(b.cc0, b.cc1);
            break;
        }
      }
      std::uint64_t& co_in = s[g.inputs[i].index].co;
      co_in = std::min(co_in, co_out + side + 1);
    }
  }
  return s;
}

Profile profile_circuit(const Netlist& netlist, double theta, std::uint64_t trials,
                        std::uint64_t seed, unsigned jobs) {
  auto probabilities = estimate_transition_probabilities(netlist, trials, seed, jobs);
  Profile p;
  p.circuit = netlist.name();
  p.theta = theta;
  p.trials = trials;
  p.seed = seed;
  p.rare_set = identify_rare_nodes(probabilities, theta);
  p.p_one = std::move(probabilities.p_one);
  p.p_trans = std::move(probabilities.p_trans);
  p.scoap = compute_scoap(netlist);
  return p;
}

}  // namespace adatest
