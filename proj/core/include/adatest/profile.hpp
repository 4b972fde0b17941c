#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "adatest/netlist.hpp"

namespace adatest {

// CO of a node with no path to any primary output.
inline constexpr std::uint64_t kUnobservable = std::numeric_limits<std::uint64_t>::max();

struct Scoap {
  std::uint64_t cc0 = 1;
  std::uint64_t cc1 = 1;
  std::uint64_t co = kUnobservable;

  bool observable() const noexcept { return co != kUnobservable; }
  std::uint64_t cc(bool value) const noexcept { return value ? cc1 : cc0; }
  friend bool operator==(const Scoap&, const Scoap&) = default;
};

struct RareNode {
  NodeId node;
  bool rare_value = true;
  double p_one = 0.0;
  double p_trans = 0.0;

  friend bool operator==(const RareNode&, const RareNode&) = default;
};

struct SignalProbabilities {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> ones;  // by NodeId
  std::vector<double> p_one;
  std::vector<double> p_trans;
};

struct Profile {
  std::string circuit;
  double theta = 0.1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> p_one;    // by NodeId
  std::vector<double> p_trans;  // by NodeId
  std::vector<RareNode> rare_set;  // ascending NodeId
  std::vector<Scoap> scoap;     // by NodeId

  // Index into rare_set, or nullopt.
  std::optional<std::size_t> rare_index(NodeId id) const;
};

// Monte-Carlo estimate over `trials` uniform random input vectors. The
// result depends only on (netlist, trials, seed), not on `jobs`.
SignalProbabilities estimate_transition_probabilities(const Netlist& netlist,
                                                      std::uint64_t trials,
                                                      std::uint64_t seed, unsigned jobs = 1);

// Nodes with p_trans < theta, ascending NodeId. rare_value is the minority value.
std::vector<RareNode> identify_rare_nodes(const SignalProbabilities& probabilities,
                                          double theta);

// Combinational Goldstein SCOAP, indexed by NodeId.
std::vector<Scoap> compute_scoap(const Netlist& netlist);

Profile profile_circuit(const Netlist& netlist, double theta, std::uint64_t trials,
                        std::uint64_t seed, unsigned jobs = 1);

}  // namespace adatest
