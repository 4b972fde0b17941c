#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adatest {

// Dense node index; unique per netlist, assigned in order of first definition.
struct NodeId {
  std::uint32_t index = 0;

  friend auto operator<=>(NodeId, NodeId) = default;
};

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Dff };

std::string_view gate_kind_name(GateKind kind) noexcept;
// Case-insensitive; accepts BUFF as a spelling of BUF.
std::optional<GateKind> parse_gate_kind(std::string_view text) noexcept;
bool is_unary(GateKind kind) noexcept;

struct Gate {
  GateKind kind = GateKind::Buf;
  std::vector<NodeId> inputs;
  NodeId output;
};

// Immutable levelized gate-level netlist. Safe to share between threads.
//
// Flip-flop outputs are sources of the combinational part (level 0). A netlist
// with flip-flops is sequential; combinational-only operations reject it.
class Netlist {
 public:
  const std::string& name() const noexcept { return name_; }
  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t gate_count() const noexcept { return gates_.size(); }
  // Gates excluding flip-flops.
  std::size_t combinational_gate_count() const noexcept;
  std::size_t flip_flop_count() const noexcept { return flip_flops_.size(); }

  std::span<const NodeId> primary_inputs() const noexcept { return inputs_; }
  std::span<const NodeId> primary_outputs() const noexcept { return outputs_; }
  // In definition order.
  std::span<const Gate> gates() const noexcept { return gates_; }
  // Indices into gates() of the flip-flops, in definition order.
  std::span<const std::uint32_t> flip_flops() const noexcept { return flip_flops_; }

  const std::string& node_name(NodeId id) const { return names_.at(id.index); }
  std::optional<NodeId> find(std::string_view name) const;
  NodeId at(std::string_view name) const;

  int level(NodeId id) const { return levels_.at(id.index); }
  int depth() const noexcept { return depth_; }
  bool is_sequential() const noexcept { return !flip_flops_.empty(); }
  bool is_primary_input(NodeId id) const { return driver_[id.index] < 0; }
  bool is_primary_output(NodeId id) const { return is_output_[id.index] != 0; }

  // Gate driving `id`, or nullptr for primary inputs.
  const Gate* driver(NodeId id) const;
  // Indices into gates() of the gates reading `id`, ascending.
  std::span<const std::uint32_t> fanout_gates(NodeId id) const;

  // Level-major order (ties broken by ascending NodeId). Every node appears
  // exactly once and after all of its combinational inputs.
  std::span<const NodeId> flatten_order() const;
  std::uint32_t flat_position(NodeId id) const { return flat_position_.at(id.index); }
  // Indices into gates() of the combinational gates, in flatten order of
  // their outputs. This is the single-pass evaluation schedule.
  std::span<const std::uint32_t> evaluation_order() const noexcept { return eval_order_; }

  // Throws SequentialNetlistError when the netlist has flip-flops.
  void require_combinational() const;

 private:
  friend class NetlistBuilder;
  Netlist() = default;

  std::string name_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<NodeId> inputs_;
  std::vector<NodeId> outputs_;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> flip_flops_;
  std::vector<int> levels_;
  std::vector<std::int32_t> driver_;
  std::vector<std::uint8_t> is_output_;
  std::vector<std::uint32_t> fanout_offsets_;
  std::vector<std::uint32_t> fanout_data_;
  std::vector<NodeId> flatten_;
  std::vector<std::uint32_t> flat_position_;
  std::vector<std::uint32_t> eval_order_;
  int depth_ = 0;
};

// Collects named definitions and produces a validated Netlist. NodeIds follow
// the order of add_input/add_gate calls; references may be forward.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = {}) : name_(std::move(name)) {}

  // `line` is only used to annotate errors (0 = unknown).
  void add_input(std::string name, int line = 0);
  void add_output(std::string name, int line = 0);
  void add_gate(GateKind kind, std::string output, std::vector<std::string> inputs,
                int line = 0);

  // Throws ParseError on undefined references, duplicate definitions, arity
  // violations and combinational cycles.
  Netlist build() &&;

 private:
  struct Definition {
    std::string name;
    bool is_input = false;
    GateKind kind = GateKind::Buf;
    std::vector<std::string> inputs;
    int line = 0;
  };
  std::string name_;
  std::vector<Definition> definitions_;
  std::vector<std::pair<std::string, int>> outputs_;
};

std::vector<NodeId> flatten_order(const Netlist& netlist);

// Bench-format text: INPUT(x), OUTPUT(x), `y = KIND(a, b, ...)`, `#` comments.
Netlist parse_bench(std::string_view text, std::string name = {});
Netlist read_bench_file(const std::filesystem::path& path);
// Canonical text: INPUTs, OUTPUTs, then gates in definition order.
std::string write_bench(const Netlist& netlist);

// Time-frame expansion. Frame k is a copy of the combinational logic whose
// flip-flop outputs are driven by the frame k-1 flip-flop inputs; frame 0
// flip-flop outputs become pseudo primary inputs named "<q>@init". Node
// names in frame k carry the suffix "@k". Primary inputs are ordered
// frame-major followed by the pseudo inputs; outputs of every frame are kept.
Netlist unroll_sequential(const Netlist& netlist, std::size_t frames);

// Name of `original` in frame `frame` of an unrolled netlist.
std::string frame_name(std::string_view original, std::size_t frame);
std::string initial_state_name(std::string_view flip_flop_output);

}  // namespace adatest
