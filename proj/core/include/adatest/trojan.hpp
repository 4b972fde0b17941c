#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adatest/netlist.hpp"
#include "adatest/profile.hpp"
#include "adatest/sim.hpp"

namespace adatest {

// The trigger literal holds when `node` carries `value` (its rare value).
struct TriggerLiteral {
  NodeId node;
  bool value = true;

  friend bool operator==(const TriggerLiteral&, const TriggerLiteral&) = default;
};

struct TrojanSpec {
  std::string id;
  std::vector<TriggerLiteral> trigger;  // ascending NodeId
  NodeId payload;
  // Input vector that activates the full trigger (empty when unknown).
  BitVector witness;

  friend bool operator==(const TrojanSpec&, const TrojanSpec&) = default;
};

// Nodes in the transitive fanin of `roots`, roots included; indexed by NodeId.
std::vector<std::uint8_t> transitive_fanin(const Netlist& netlist, std::span<const NodeId> roots);

// Throws InputError when the spec does not fit the netlist.
void validate_trojan(const Netlist& netlist, const TrojanSpec& spec);

// Appends an AND-chain trigger (inverting literals whose value is 0) and an
// XOR on the payload. The XOR takes over every fanout and output position of
// the payload; all original NodeIds are preserved.
Netlist insert_trojan(const Netlist& netlist, const TrojanSpec& spec);

// Name of the XOR node that replaces the payload in the trojaned netlist.
std::string payload_xor_name(const Netlist& netlist, const TrojanSpec& spec);

bool trigger_active(const DagState& state, const Netlist& netlist, const TrojanSpec& spec);

// Golden and trojaned copies over shared primary inputs, with a single
// output "miter" that is 1 iff some primary output differs.
Netlist build_miter(const Netlist& golden, const Netlist& trojaned);

// An input on which the trojaned circuit's outputs differ from the golden
// ones; nullopt when the Trojan is functionally invisible.
std::optional<BitVector> find_detecting_input(const Netlist& golden, const TrojanSpec& spec,
                                              std::uint64_t phase_seed = 0);

struct TrojanSampling {
  bool prefer_rare_one = true;
  std::size_t max_attempts = 2000;
};

// `count` distinct specs with q-node triggers over rare nodes and payloads
// drawn uniformly from observable gate outputs outside the trigger's
// transitive fanin. Each spec is SAT-validated: its witness activates the
// trigger and flips at least one primary output.
std::vector<TrojanSpec> sample_trojans(const Netlist& netlist, const Profile& profile,
                                       std::size_t count, std::size_t q, std::uint64_t seed,
                                       const TrojanSampling& options = {});

struct ActivationEstimate {
  std::uint64_t trials = 0;
  std::uint64_t activations = 0;
  double probability = 0.0;
  double standard_error = 0.0;
};

ActivationEstimate estimate_activation_probability(const Netlist& netlist,
                                                   const TrojanSpec& spec,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   unsigned jobs = 1);

}  // namespace adatest
