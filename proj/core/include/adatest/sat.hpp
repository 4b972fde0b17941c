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

// DIMACS convention: variable v >= 1, literal +v or -v.
using Literal = int;

struct Cnf {
  int variable_count = 0;
  std::vector<std::vector<Literal>> clauses;
  std::vector<int> node_var;  // by NodeId; 0 when the node has no variable

  int new_variable() { return ++variable_count; }
  // Drops duplicate literals; ignores tautologies; rejects empty clauses.
  void add_clause(std::vector<Literal> clause);
  Literal literal(NodeId id, bool value) const {
    const int v = node_var.at(id.index);
    return value ? v : -v;
  }
};

struct Assignment {
  std::vector<std::uint8_t> values;  // index 0 unused

  bool value(int var) const { return values.at(static_cast<std::size_t>(var)) != 0; }
  bool satisfies(Literal lit) const { return value(lit > 0 ? lit : -lit) == (lit > 0); }
};

// Tseitin encoding. Primary inputs take variables 1..#PIs in declaration
// order, remaining nodes follow in flatten order; n-input XOR/XNOR use a
// chain of auxiliary variables.
Cnf encode_cnf(const Netlist& netlist);

struct SolveOptions {
  // Decision polarity: all-false when unset, otherwise drawn per variable
  // from this seed.
  std::optional<std::uint64_t> phase_seed;
};

// CDCL with first-UIP learning, activity-ordered branching, phase saving and
// Luby restarts. Returns nullopt when the clauses and assumptions are
// unsatisfiable.
std::optional<Assignment> solve(const Cnf& cnf, std::span<const Literal> assumptions = {},
                                const SolveOptions& options = {});

bool satisfies(const Cnf& cnf, const Assignment& assignment);
std::string to_dimacs(const Cnf& cnf);

// Input vector of a satisfying assignment.
PatternVector input_vector(const Netlist& netlist, const Cnf& cnf, const Assignment& a);

struct SmartInitResult {
  std::vector<PatternVector> vectors;
  // Per vector, indices into the rare set it was solved for.
  std::vector<std::vector<std::size_t>> targets;
  std::size_t sat_queries = 0;
  std::size_t unsat_queries = 0;
  // Rare nodes that are unsatisfiable on their own (never targeted again).
  std::vector<std::size_t> skipped;
  // Set when no rare node was satisfiable and random vectors were used.
  bool random_fallback = false;
};

// Builds `count` vectors by solving for groups of up to three rare nodes at
// their rare values, least-activated nodes first. A group that is UNSAT is
// retried with its first node alone; a node UNSAT on its own is skipped.
// Every vector is re-simulated and checked against its targets.
SmartInitResult smart_initialize(const Netlist& netlist, std::span<const RareNode> rare_set,
                                 std::size_t count, std::uint64_t seed);

}  // namespace adatest
