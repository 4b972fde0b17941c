#include "adatest/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>

#include "adatest/error.hpp"

namespace adatest {
namespace {

constexpr std::array<std::string_view, 9> kKindNames = {
    "AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUF", "DFF"};

}  // namespace

std::string_view gate_kind_name(GateKind kind) noexcept {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept {
  std::string upper(text);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "BUFF") return GateKind::Buf;
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (upper == kKindNames[i]) return static_cast<GateKind>(i);
  }
  return std::nullopt;
}

bool is_unary(GateKind kind) noexcept {
  return kind == GateKind::Not || kind == GateKind::Buf || kind == GateKind::Dff;
}

std::size_t Netlist::combinational_gate_count() const noexcept {
  return gates_.size() - flip_flops_.size();
}

std::optional<NodeId> Netlist::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

NodeId Netlist::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw InputError("netlist '" + name_ + "' has no signal named '" + std::string(name) + "'");
}

const Gate* Netlist::driver(NodeId id) const {
  const std::int32_t g = driver_.at(id.index);
  return g < 0 ? nullptr : &gates_[static_cast<std::size_t>(g)];
}

std::span<const std::uint32_t> Netlist::fanout_gates(NodeId id) const {
  const std::uint32_t begin = fanout_offsets_.at(id.index);
  const std::uint32_t end = fanout_offsets_.at(id.index + 1);
  return std::span<const std::uint32_t>(fanout_data_).subspan(begin, end - begin);
}

std::span<const NodeId> Netlist::flatten_order() const {
  require_combinational();
  return flatten_;
}

void Netlist::require_combinational() const {
  if (is_sequential()) throw SequentialNetlistError();
}

std::vector<NodeId> flatten_order(const Netlist& netlist) {
  auto order = netlist.flatten_order();
  return {order.begin(), order.end()};
}

void NetlistBuilder::add_input(std::string name, int line) {
  Definition def;
  def.name = std::move(name);
  def.is_input = true;
  def.line = line;
  definitions_.push_back(std::move(def));
}

void NetlistBuilder::add_output(std::string name, int line) {
  outputs_.emplace_back(std::move(name), line);
}

void NetlistBuilder::add_gate(GateKind kind, std::string output,
                              std::vector<std::string> inputs, int line) {
  Definition def;
  def.name = std::move(output);
  def.kind = kind;
  def.inputs = std::move(inputs);
  def.line = line;
  definitions_.push_back(std::move(def));
}

Netlist NetlistBuilder::build() && {
  Netlist n;
  n.name_ = std::move(name_);
  const std::size_t count = definitions_.size();
  n.names_.reserve(count);
  n.driver_.assign(count, -1);

  for (std::size_t i = 0; i < count; ++i) {
    const Definition& def = definitions_[i];
    if (def.name.empty()) throw ParseError("empty signal name", def.line);
    const NodeId id{static_cast<std::uint32_t>(i)};
    if (!n.index_.emplace(def.name, id).second) {
      throw ParseError("duplicate definition of '" + def.name + "'", def.line);
    }
    n.names_.push_back(def.name);
  }

  auto resolve = [&](const std::string& ref, int line) {
    auto it = n.index_.find(ref);
    if (it == n.index_.end()) throw ParseError("undefined signal '" + ref + "'", line);
    return it->second;
  };

  for (std::size_t i = 0; i < count; ++i) {
    Definition& def = definitions_[i];
    const NodeId id{static_cast<std::uint32_t>(i)};
    if (def.is_input) {
      n.inputs_.push_back(id);
      continue;
    }
    Gate gate;
    gate.kind = def.kind;
    gate.output = id;
    gate.inputs.reserve(def.inputs.size());
    for (const std::string& ref : def.inputs) gate.inputs.push_back(resolve(ref, def.line));
    const std::size_t arity = def.inputs.size();
    if (is_unary(def.kind) ? arity != 1 : arity < 2) {
      throw ParseError(std::string(gate_kind_name(def.kind)) + " gate '" + def.name +
                           "' has " + std::to_string(arity) + " input(s); expected " +
                           (is_unary(def.kind) ? "exactly 1" : "at least 2"),
                       def.line);
    }
    n.driver_[i] = static_cast<std::int32_t>(n.gates_.size());
    if (def.kind == GateKind::Dff) {
      n.flip_flops_.push_back(static_cast<std::uint32_t>(n.gates_.size()));
    }
    n.gates_.push_back(std::move(gate));
  }

  n.is_output_.assign(count, 0);
  for (const auto& [ref, line] : outputs_) {
    const NodeId id = resolve(ref, line);
    n.outputs_.push_back(id);
    n.is_output_[id.index] = 1;
  }

  // Fanout lists in CSR form (all gates, including flip-flops).
  std::vector<std::uint32_t> degree(count + 1, 0);
  for (const Gate& g : n.gates_) {
    for (NodeId in : g.inputs) ++degree[in.index + 1];
  }
  n.fanout_offsets_.assign(count + 1, 0);
  for (std::size_t i = 0; i < count; ++i) {
    n.fanout_offsets_[i + 1] = n.fanout_offsets_[i] + degree[i + 1];
  }
  n.fanout_data_.assign(n.fanout_offsets_.back(), 0);
  std::vector<std::uint32_t> cursor(n.fanout_offsets_.begin(), n.fanout_offsets_.end() - 1);
  for (std::uint32_t gi = 0; gi < n.gates_.size(); ++gi) {
    for (NodeId in : n.gates_[gi].inputs) {
      // A gate reading the same node twice is listed once.
      const std::uint32_t begin = n.fanout_offsets_[in.index];
      if (cursor[in.index] > begin && n.fanout_data_[cursor[in.index] - 1] == gi) continue;
      n.fanout_data_[cursor[in.index]++] = gi;
    }
  }
  {
    // Compact away the slots left unused by duplicate reads.
    std::vector<std::uint32_t> offsets(count + 1, 0);
    std::vector<std::uint32_t> data;
    data.reserve(n.fanout_data_.size());
    for (std::size_t i = 0; i < count; ++i) {
      for (std::uint32_t k = n.fanout_offsets_[i]; k < cursor[i]; ++k) {
        data.push_back(n.fanout_data_[k]);
      }
      offsets[i + 1] = static_cast<std::uint32_t>(data.size());
    }
    n.fanout_offsets_ = std::move(offsets);
    n.fanout_data_ = std::move(data);
  }

  // Levelize the combinational part (Kahn). Flip-flop outputs are sources.
  n.levels_.assign(count, 0);
  std::vector<std::uint32_t> pending(count, 0);
  for (const Gate& g : n.gates_) {
    if (g.kind != GateKind::Dff) {
      pending[g.output.index] = static_cast<std::uint32_t>(g.inputs.size());
    }
  }
  std::deque<std::uint32_t> ready;
  for (std::uint32_t i = 0; i < count; ++i) {
    if (pending[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::uint32_t node = ready.front();
    ready.pop_front();
    ++visited;
    for (std::uint32_t gi : n.fanout_gates(NodeId{node})) {
      const Gate& g = n.gates_[gi];
      if (g.kind == GateKind::Dff) continue;
      const std::uint32_t out = g.output.index;
      // Count every pin reading `node` (a gate may read it more than once).
      for (NodeId in : g.inputs) {
        if (in.index != node) continue;
        n.levels_[out] = std::max(n.levels_[out], n.levels_[node] + 1);
        if (--pending[out] == 0) ready.push_back(out);
      }
    }
  }
  if (visited != count) {
    for (std::size_t i = 0; i < count; ++i) {
      if (pending[i] != 0) {
        throw ParseError("combinational cycle through '" + n.names_[i] + "'",
                         definitions_[i].line);
      }
    }
  }
  n.depth_ = count == 0 ? 0 : *std::max_element(n.levels_.begin(), n.levels_.end());

  n.flatten_.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) n.flatten_[i] = NodeId{i};
  std::stable_sort(n.flatten_.begin(), n.flatten_.end(), [&](NodeId a, NodeId b) {
    return n.levels_[a.index] < n.levels_[b.index];
  });
  n.flat_position_.assign(count, 0);
  for (std::uint32_t pos = 0; pos < count; ++pos) n.flat_position_[n.flatten_[pos].index] = pos;
  for (NodeId id : n.flatten_) {
    const std::int32_t g = n.driver_[id.index];
    if (g >= 0 && n.gates_[static_cast<std::size_t>(g)].kind != GateKind::Dff) {
      n.eval_order_.push_back(static_cast<std::uint32_t>(g));
    }
  }
  return n;
}

}  // namespace adatest
