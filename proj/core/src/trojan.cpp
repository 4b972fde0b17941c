#include "adatest/trojan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "adatest/error.hpp"
#include "adatest/eval.hpp"
#include "adatest/parallel.hpp"
#include "adatest/rng.hpp"
#include "adatest/sat.hpp"

namespace adatest {
namespace {

std::string unique_name(const Netlist& netlist, std::string name) {
  while (netlist.find(name)) name += "_";
  return name;
}

std::string prefix(const TrojanSpec& spec) { return "ht_" + spec.id + "_"; }

}  // namespace

std::vector<std::uint8_t> transitive_fanin(const Netlist& netlist,
                                           std::span<const NodeId> roots) {
  std::vector<std::uint8_t> mark(netlist.node_count(), 0);
  std::vector<NodeId> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (mark[id.index]) continue;
    mark[id.index] = 1;
    if (const Gate* g = netlist.driver(id)) {
      for (NodeId in : g->inputs) {
        if (!mark[in.index]) stack.push_back(in);
      }
    }
  }
  return mark;
}

void validate_trojan(const Netlist& netlist, const TrojanSpec& spec) {
  const std::size_t n = netlist.node_count();
  if (spec.trigger.empty()) throw InputError("trojan '" + spec.id + "' has an empty trigger");
  if (spec.payload.index >= n) {
    throw InputError("trojan '" + spec.id + "' payload is not a node of the netlist");
  }
  std::vector<NodeId> roots;
  for (const TriggerLiteral& t : spec.trigger) {
    if (t.node.index >= n) {
      throw InputError("trojan '" + spec.id + "' trigger node is not in the netlist");
    }
    if (std::find(roots.begin(), roots.end(), t.node) != roots.end()) {
      throw InputError("trojan '" + spec.id + "' repeats trigger node '" +
                       netlist.node_name(t.node) + "'");
    }
    roots.push_back(t.node);
  }
  if (transitive_fanin(netlist, roots)[spec.payload.index]) {
    throw InputError("trojan '" + spec.id + "': payload '" + netlist.node_name(spec.payload) +
                     "' lies in the trigger's fanin cone (would create a cycle)");
  }
}

std::string payload_xor_name(const Netlist& netlist, const TrojanSpec& spec) {
  return unique_name(netlist, prefix(spec) + "xor");
}

Netlist insert_trojan(const Netlist& netlist, const TrojanSpec& spec) {
  validate_trojan(netlist, spec);
  const std::string xor_name = payload_xor_name(netlist, spec);
  const std::string& payload = netlist.node_name(spec.payload);
  auto rename = [&](NodeId id) -> const std::string& {
    return id == spec.payload ? xor_name : netlist.node_name(id);
  };

  NetlistBuilder b(netlist.name() + "_" + spec.id);
  for (std::uint32_t i = 0; i < netlist.node_count(); ++i) {
    const NodeId id{i};
    const Gate* g = netlist.driver(id);
    if (g == nullptr) {
      b.add_input(netlist.node_name(id));
      continue;
    }
    std::vector<std::string> inputs;
    for (NodeId in : g->inputs) inputs.push_back(rename(in));
    b.add_gate(g->kind, netlist.node_name(id), std::move(inputs));
  }

  // Trigger literals read the original signals; the payload is outside their
  // fanin cone, so none of them sees the XOR.
  std::vector<std::string> literals;
  for (std::size_t k = 0; k < spec.trigger.size(); ++k) {
    const TriggerLiteral& t = spec.trigger[k];
    if (t.value) {
      literals.push_back(netlist.node_name(t.node));
    } else {
      std::string inv = unique_name(netlist, prefix(spec) + "n" + std::to_string(k));
      b.add_gate(GateKind::Not, inv, {netlist.node_name(t.node)});
      literals.push_back(std::move(inv));
    }
  }
  std::string trigger = literals[0];
  for (std::size_t k = 1; k < literals.size(); ++k) {
    std::string t = unique_name(netlist, prefix(spec) + "and" + std::to_string(k));
    b.add_gate(GateKind::And, t, {trigger, literals[k]});
    trigger = std::move(t);
  }
  b.add_gate(GateKind::Xor, xor_name, {payload, trigger});

  for (NodeId po : netlist.primary_outputs()) b.add_output(rename(po));
  return std::move(b).build();
}

Netlist build_miter(const Netlist& golden, const Netlist& trojaned) {
  const auto gi = golden.primary_inputs();
  const auto ti = trojaned.primary_inputs();
  const auto go = golden.primary_outputs();
  const auto to = trojaned.primary_outputs();
  if (gi.size() != ti.size() || go.size() != to.size()) {
    throw InputError("miter needs netlists with matching interfaces");
  }
  NetlistBuilder b(golden.name() + "_miter");
  for (NodeId pi : gi) b.add_input(golden.node_name(pi));
  auto copy = [&](const Netlist& n, std::span<const NodeId> pis, const std::string& tag) {
    std::vector<std::string> name(n.node_count());
    for (std::uint32_t k = 0; k < n.node_count(); ++k) name[k] = tag + n.node_name(NodeId{k});
    for (std::size_t k = 0; k < pis.size(); ++k) name[pis[k].index] = golden.node_name(gi[k]);
    for (const Gate& g : n.gates()) {
      std::vector<std::string> in;
      for (NodeId x : g.inputs) in.push_back(name[x.index]);
      b.add_gate(g.kind, name[g.output.index], std::move(in));
    }
    return name;
  };
  const auto gn = copy(golden, gi, "g$");
  const auto tn = copy(trojaned, ti, "t$");
  std::vector<std::string> diffs;
  for (std::size_t k = 0; k < go.size(); ++k) {
    diffs.push_back("d$" + std::to_string(k));
    b.add_gate(GateKind::Xor, diffs.back(), {gn[go[k].index], tn[to[k].index]});
  }
  if (diffs.size() == 1) {
    b.add_gate(GateKind::Buf, "miter", diffs);
  } else {
    b.add_gate(GateKind::Or, "miter", diffs);
  }
  b.add_output("miter");
  return std::move(b).build();
}

std::optional<BitVector> find_detecting_input(const Netlist& golden, const TrojanSpec& spec,
                                              std::uint64_t phase_seed) {
  const Netlist miter = build_miter(golden, insert_trojan(golden, spec));
  const Cnf cnf = encode_cnf(miter);
  const Literal goal = cnf.literal(miter.at("miter"), true);
  SolveOptions options;
  options.phase_seed = phase_seed;
  const auto a = solve(cnf, std::span<const Literal>(&goal, 1), options);
  if (!a) return std::nullopt;
  return input_vector(miter, cnf, *a).bits;
}

bool trigger_active(const DagState& state, const Netlist& netlist, const TrojanSpec& spec) {
  return std::all_of(spec.trigger.begin(), spec.trigger.end(), [&](const TriggerLiteral& t) {
    return node_value(state, netlist, t.node) == t.value;
  });
}

std::vector<TrojanSpec> sample_trojans(const Netlist& netlist, const Profile& profile,
                                       std::size_t count, std::size_t q, std::uint64_t seed,
                                       const TrojanSampling& options) {
  if (q == 0) throw UsageError("trigger size must be at least 1");
  std::vector<RareNode> pool;
  if (options.prefer_rare_one) {
    for (const RareNode& r : profile.rare_set) {
      if (r.rare_value) pool.push_back(r);
    }
  }
  if (pool.size() < q) pool = profile.rare_set;
  if (pool.size() < q) {
    throw InputError("circuit '" + netlist.name() + "' has " +
                     std::to_string(profile.rare_set.size()) +
                     " rare nodes; a trigger needs " + std::to_string(q));
  }

  const Cnf cnf = encode_cnf(netlist);
  std::vector<TrojanSpec> out;
  std::set<std::pair<std::vector<std::uint32_t>, std::uint32_t>> seen;
  for (std::size_t i = 0; i < count; ++i) {
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < options.max_attempts && !accepted; ++attempt) {
      Rng rng(derive_seed(seed, Stream::kTrojanSample, {i, attempt}));
      // Partial Fisher-Yates over the candidate pool.
      std::vector<std::size_t> pick(pool.size());
      for (std::size_t k = 0; k < pick.size(); ++k) pick[k] = k;
      for (std::size_t k = 0; k < q; ++k) {
        std::swap(pick[k], pick[k + rng.below(pick.size() - k)]);
      }
      pick.resize(q);
      std::sort(pick.begin(), pick.end());

      TrojanSpec spec;
      spec.id = "t" + std::to_string(i);
      std::vector<NodeId> roots;
      std::vector<Literal> assumptions;
      std::vector<std::uint32_t> key;
      for (std::size_t k : pick) {
        spec.trigger.push_back({pool[k].node, pool[k].rare_value});
        roots.push_back(pool[k].node);
        assumptions.push_back(cnf.literal(pool[k].node, pool[k].rare_value));
        key.push_back(pool[k].node.index);
      }

      const auto cone = transitive_fanin(netlist, roots);
      std::vector<NodeId> payloads;
      for (const Gate& g : netlist.gates()) {
        if (!cone[g.output.index] && profile.scoap[g.output.index].observable()) {
          payloads.push_back(g.output);
        }
      }
      if (payloads.empty()) continue;
      spec.payload = payloads[rng.below(payloads.size())];
      if (seen.count({key, spec.payload.index})) continue;

      // Cheap activation check first, then the output-difference check.
      SolveOptions so;
      so.phase_seed = rng.next();
      const auto activation = solve(cnf, assumptions, so);
      if (!activation) continue;
      // The activating vector usually propagates the payload flip already;
      // the miter query is only needed when it does not.
      PatternVector probe = input_vector(netlist, cnf, *activation);
      const Netlist trojaned = insert_trojan(netlist, spec);
      if (outputs_differ(netlist, trojaned, std::span<const PatternVector>(&probe, 1))) {
        spec.witness = std::move(probe.bits);
      } else {
        auto witness = find_detecting_input(netlist, spec, rng.next());
        if (!witness) continue;
        spec.witness = std::move(*witness);
      }
      if (!trigger_active(simulate(netlist, PatternVector{spec.witness}), netlist, spec)) {
        throw InvariantError("SAT witness does not activate trigger of '" + spec.id + "'");
      }
      seen.insert({key, spec.payload.index});
      out.push_back(std::move(spec));
      accepted = true;
    }
    if (!accepted) {
      throw InputError("no jointly satisfiable " + std::to_string(q) +
                       "-node trigger found for trojan " + std::to_string(i) + " after " +
                       std::to_string(options.max_attempts) + " attempts");
    }
  }
  return out;
}

ActivationEstimate estimate_activation_probability(const Netlist& netlist,
                                                   const TrojanSpec& spec,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   unsigned jobs) {
  if (trials == 0) throw UsageError("trials must be at least 1");
  validate_trojan(netlist, spec);
  netlist.require_combinational();
  const std::size_t pis = netlist.primary_inputs().size();
  const std::uint64_t blocks = (trials + 63) / 64;
  std::vector<std::uint64_t> hits(blocks, 0);
  const std::size_t chunks = std::min<std::uint64_t>(std::max(1U, jobs), blocks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    WordSimulator sim(netlist);
    std::vector<std::uint64_t> words(pis);
    for (std::uint64_t b = blocks * c / chunks; b < blocks * (c + 1) / chunks; ++b) {
      Rng rng(derive_seed(seed, Stream::kActivation, {b}));
      for (auto& w : words) w = rng.next();
      sim.run(words);
      const std::uint64_t lanes = std::min<std::uint64_t>(64, trials - b * 64);
      std::uint64_t active = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
      for (const TriggerLiteral& t : spec.trigger) {
        active &= t.value ? sim.value(t.node) : ~sim.value(t.node);
      }
      hits[b] = static_cast<std::uint64_t>(std::popcount(active));
    }
  });
  ActivationEstimate e;
  e.trials = trials;
  for (std::uint64_t h : hits) e.activations += h;
  e.probability = static_cast<double>(e.activations) / static_cast<double>(trials);
  e.standard_error = std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(trials));
  return e;
}

}  // namespace adatest
