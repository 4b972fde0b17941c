#include <algorithm>
#include <sstream>

#include "adatest/error.hpp"
#include "adatest/sat.hpp"

namespace adatest {

void Cnf::add_clause(std::vector<Literal> clause) {
  std::sort(clause.begin(), clause.end(), [](Literal a, Literal b) {
    const int va = std::abs(a);
    const int vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    if (clause[i] == -clause[i - 1]) return;
  }
  if (clause.empty()) throw InvariantError("empty clause");
  for (Literal l : clause) {
    if (l == 0 || std::abs(l) > variable_count) {
      throw InvariantError("clause references undeclared variable " + std::to_string(l));
    }
  }
  clauses.push_back(std::move(clause));
}

namespace {

// c <-> a XOR b
void add_xor(Cnf& cnf, Literal c, Literal a, Literal b) {
  cnf.add_clause({-c, a, b});
  cnf.add_clause({-c, -a, -b});
  cnf.add_clause({c, -a, b});
  cnf.add_clause({c, a, -b});
}

}  // namespace

Cnf encode_cnf(const Netlist& netlist) {
  netlist.require_combinational();
  Cnf cnf;
  cnf.node_var.assign(netlist.node_count(), 0);
  for (NodeId pi : netlist.primary_inputs()) cnf.node_var[pi.index] = cnf.new_variable();
  for (NodeId id : netlist.flatten_order()) {
    if (cnf.node_var[id.index] == 0) cnf.node_var[id.index] = cnf.new_variable();
  }

  for (std::uint32_t gi : netlist.evaluation_order()) {
    const Gate& g = netlist.gates()[gi];
    const Literal out = cnf.literal(g.output, true);
    std::vector<Literal> in;
    for (NodeId id : g.inputs) in.push_back(cnf.literal(id, true));
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Nand: {
        const Literal c = g.kind == GateKind::And ? out : -out;
        std::vector<Literal> big{c};
        for (Literal a : in) {
          cnf.add_clause({-c, a});
          big.push_back(-a);
        }
        cnf.add_clause(std::move(big));
        break;
      }
      case GateKind::Or:
      case GateKind::Nor: {
        const Literal c = g.kind == GateKind::Or ? out : -out;
        std::vector<Literal> big{-c};
        for (Literal a : in) {
          cnf.add_clause({c, -a});
          big.push_back(a);
        }
        cnf.add_clause(std::move(big));
        break;
      }
      case GateKind::Xor:
      case GateKind::Xnor: {
        Literal acc = in[0];
        for (std::size_t k = 1; k + 1 < in.size(); ++k) {
          const Literal t = cnf.new_variable();
          add_xor(cnf, t, acc, in[k]);
          acc = t;
        }
        add_xor(cnf, g.kind == GateKind::Xor ? out : -out, acc, in.back());
        break;
      }
      case GateKind::Not:
        cnf.add_clause({-out, -in[0]});
        cnf.add_clause({out, in[0]});
        break;
      case GateKind::Buf:
      case GateKind::Dff:
        cnf.add_clause({-out, in[0]});
        cnf.add_clause({out, -in[0]});
        break;
    }
  }
  return cnf;
}

bool satisfies(const Cnf& cnf, const Assignment& assignment) {
  if (assignment.values.size() != static_cast<std::size_t>(cnf.variable_count) + 1) {
    return false;
  }
  return std::all_of(cnf.clauses.begin(), cnf.clauses.end(), [&](const auto& clause) {
    return std::any_of(clause.begin(), clause.end(),
                       [&](Literal l) { return assignment.satisfies(l); });
  });
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.variable_count << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (Literal l : clause) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

PatternVector input_vector(const Netlist& netlist, const Cnf& cnf, const Assignment& a) {
  const auto pis = netlist.primary_inputs();
  PatternVector v{BitVector(pis.size())};
  for (std::size_t i = 0; i < pis.size(); ++i) {
    v.bits.set(i, a.value(cnf.node_var[pis[i].index]));
  }
  return v;
}

}  // namespace adatest
