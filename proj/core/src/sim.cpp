#include "adatest/sim.hpp"

#include "adatest/error.hpp"
#include "adatest/parallel.hpp"

namespace adatest {

void check_width(const Netlist& netlist, std::size_t width) {
  if (width != netlist.primary_inputs().size()) {
    throw InputError("pattern width " + std::to_string(width) + " does not match the " +
                     std::to_string(netlist.primary_inputs().size()) +
                     " primary inputs of '" + netlist.name() + "'");
  }
}

PatternBatch::PatternBatch(std::span<const PatternVector> vectors, std::size_t width)
    : size_(vectors.size()), width_(width), words_(word_count(size_) * width, 0) {
  for (std::size_t v = 0; v < size_; ++v) {
    if (vectors[v].width() != width) {
      throw InputError("pattern " + std::to_string(v) + " has width " +
                       std::to_string(vectors[v].width()) + ", expected " +
                       std::to_string(width));
    }
    const std::size_t block = v / 64;
    const std::uint64_t lane = std::uint64_t{1} << (v % 64);
    std::uint64_t* dst = words_.data() + block * width_;
    for (std::size_t i = 0; i < width_; ++i) {
      if (vectors[v].bits.get(i)) dst[i] |= lane;
    }
  }
}

std::uint64_t PatternBatch::lane_mask(std::size_t b) const noexcept {
  const std::size_t lanes = std::min<std::size_t>(64, size_ - b * 64);
  return lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
}

std::uint64_t evaluate_gate(GateKind kind, std::span<const NodeId> inputs,
                            std::span<const std::uint64_t> values) noexcept {
  std::uint64_t acc = values[inputs[0].index];
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc &= values[inputs[i].index];
      return kind == GateKind::And ? acc : ~acc;
    case GateKind::Or:
    case GateKind::Nor:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc |= values[inputs[i].index];
      return kind == GateKind::Or ? acc : ~acc;
    case GateKind::Xor:
    case GateKind::Xnor:
      for (std::size_t i = 1; i < inputs.size(); ++i) acc ^= values[inputs[i].index];
      return kind == GateKind::Xor ? acc : ~acc;
    case GateKind::Not:
      return ~acc;
    case GateKind::Buf:
    case GateKind::Dff:
      return acc;
  }
  return acc;
}

WordSimulator::WordSimulator(const Netlist& netlist)
    : netlist_(&netlist), values_(netlist.node_count(), 0) {
  netlist.require_combinational();
}

void WordSimulator::run(std::span<const std::uint64_t> pi_words) {
  const auto inputs = netlist_->primary_inputs();
  for (std::size_t i = 0; i < inputs.size(); ++i) values_[inputs[i].index] = pi_words[i];
  const auto gates = netlist_->gates();
  for (std::uint32_t gi : netlist_->evaluation_order()) {
    const Gate& g = gates[gi];
    values_[g.output.index] = evaluate_gate(g.kind, g.inputs, values_);
  }
}

DagState simulate(const Netlist& netlist, const PatternVector& input) {
  check_width(netlist, input.width());
  auto states = simulate_batch(netlist, std::span<const PatternVector>(&input, 1));
  return std::move(states.front());
}

std::vector<DagState> simulate_batch(const Netlist& netlist, const PatternBatch& batch,
                                     unsigned jobs) {
  netlist.require_combinational();
  check_width(netlist, batch.width());
  const std::size_t n = netlist.node_count();
  std::vector<DagState> states(batch.size(), DagState{BitVector(n)});
  const auto order = netlist.flatten_order();
  parallel_for(batch.block_count(), jobs, [&](std::size_t b) {
    WordSimulator sim(netlist);
    sim.run(batch.block(b));
    const std::size_t first = b * 64;
    const std::size_t lanes = std::min<std::size_t>(64, batch.size() - first);
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::uint64_t word = sim.value(order[pos]);
      for (std::size_t l = 0; l < lanes; ++l) {
        if ((word >> l) & 1U) states[first + l].bits.set(pos, true);
      }
    }
  });
  return states;
}

std::vector<DagState> simulate_batch(const Netlist& netlist,
                                     std::span<const PatternVector> vectors, unsigned jobs) {
  return simulate_batch(netlist, PatternBatch(vectors, netlist.primary_inputs().size()),
                        jobs);
}

BitVector primary_outputs_of(const DagState& state, const Netlist& netlist) {
  const auto outputs = netlist.primary_outputs();
  BitVector out(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out.set(i, state.bits.get(netlist.flat_position(outputs[i])));
  }
  return out;
}

}  // namespace adatest
