#pragma once

// Independent reference models used by the tests. Nothing here calls into
// the simulator, the SCOAP pass or the solver under test.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "adatest/bitvec.hpp"
#include "adatest/netlist.hpp"
#include "adatest/rng.hpp"

namespace adatest {

// gtest printer.
inline void PrintTo(const BitVector& b, std::ostream* os) { *os << b.to_string(); }

}  // namespace adatest

namespace adatest::testing {

struct RefGate {
  std::string kind;  // bench keyword
  std::string output;
  std::vector<std::string> inputs;
};

// A circuit description kept apart from Netlist so oracles never depend on
// the parser or levelizer.
struct RefCircuit {
  std::string name = "rand";
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<RefGate> gates;  // DFFs included for sequential circuits

  std::string bench() const;
  Netlist netlist() const;
};

struct RandomCircuitOptions {
  std::size_t inputs = 6;
  std::size_t gates = 30;
  std::size_t outputs = 3;
  std::size_t flip_flops = 0;
  std::size_t max_fanin = 3;
};

RefCircuit random_circuit(const RandomCircuitOptions& options, std::uint64_t seed);

// Copies the structure of a parsed netlist (names, kinds, connections).
RefCircuit ref_from_netlist(const Netlist& netlist);

// Naive recursive evaluation from the gate definitions; values by name.
std::map<std::string, bool> recursive_eval(const RefCircuit& c, const std::vector<bool>& pis,
                                           const std::map<std::string, bool>& state = {});

// Cycle-by-cycle simulation of a sequential RefCircuit. Returns PO values of
// every cycle, frame-major.
std::vector<bool> sequential_run(const RefCircuit& c,
                                 const std::vector<std::vector<bool>>& pis_per_cycle,
                                 std::map<std::string, bool> state);

struct RefScoap {
  std::uint64_t cc0, cc1, co;
};
constexpr std::uint64_t kRefInf = ~std::uint64_t{0};
// Fixed-point relaxation of the Goldstein rules, by name.
std::map<std::string, RefScoap> fixed_point_scoap(const RefCircuit& c);

// All input combinations of a <= 20 PI circuit, PI order.
std::vector<bool> bits_of(std::uint64_t value, std::size_t width);

// Exhaustive satisfiability of DIMACS-style clauses.
bool brute_force_sat(int vars, const std::vector<std::vector<int>>& clauses,
                     const std::vector<int>& assumptions = {});

bool ref_gate(const std::string& kind, const std::vector<bool>& in);

}  // namespace adatest::testing
