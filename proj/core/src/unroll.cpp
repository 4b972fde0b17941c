#include <functional>

#include "adatest/error.hpp"
#include "adatest/netlist.hpp"

namespace adatest {

std::string frame_name(std::string_view original, std::size_t frame) {
  return std::string(original) + "@" + std::to_string(frame);
}

std::string initial_state_name(std::string_view flip_flop_output) {
  return std::string(flip_flop_output) + "@init";
}

Netlist unroll_sequential(const Netlist& netlist, std::size_t frames) {
  if (frames == 0) throw UsageError("unroll_sequential: frames must be at least 1");

  // Name of `node` as seen by logic in frame `frame`. A flip-flop output in
  // frame k is the flip-flop's data input evaluated in frame k-1.
  std::function<std::string(NodeId, std::size_t)> ref = [&](NodeId node,
                                                            std::size_t frame) {
    const Gate* g = netlist.driver(node);
    if (g != nullptr && g->kind == GateKind::Dff) {
      if (frame == 0) return initial_state_name(netlist.node_name(node));
      return ref(g->inputs.front(), frame - 1);
    }
    return frame_name(netlist.node_name(node), frame);
  };

  NetlistBuilder builder(netlist.name() + "_x" + std::to_string(frames));
  for (std::size_t k = 0; k < frames; ++k) {
    for (NodeId pi : netlist.primary_inputs()) builder.add_input(ref(pi, k));
    for (const Gate& g : netlist.gates()) {
      if (g.kind == GateKind::Dff) continue;
      std::vector<std::string> inputs;
      inputs.reserve(g.inputs.size());
      for (NodeId in : g.inputs) inputs.push_back(ref(in, k));
      builder.add_gate(g.kind, ref(g.output, k), std::move(inputs));
    }
  }
  for (std::uint32_t ff : netlist.flip_flops()) {
    builder.add_input(initial_state_name(netlist.node_name(netlist.gates()[ff].output)));
  }
  for (std::size_t k = 0; k < frames; ++k) {
    for (NodeId po : netlist.primary_outputs()) builder.add_output(ref(po, k));
  }
  return std::move(builder).build();
}

}  // namespace adatest
