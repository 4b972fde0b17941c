#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adatest/bitvec.hpp"
#include "adatest/netlist.hpp"

namespace adatest {

// One value per primary input, in declaration order.
struct PatternVector {
  BitVector bits;

  std::size_t width() const noexcept { return bits.size(); }
  friend bool operator==(const PatternVector&, const PatternVector&) = default;
};

// One value per node, in Netlist::flatten_order().
struct DagState {
  BitVector bits;

  friend bool operator==(const DagState&, const DagState&) = default;
};

// Patterns packed 64 per machine word: lane l of block b is vector 64*b + l.
class PatternBatch {
 public:
  PatternBatch(std::span<const PatternVector> vectors, std::size_t width);

  std::size_t size() const noexcept { return size_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t block_count() const noexcept { return word_count(size_); }
  // Per-PI words of block b.
  std::span<const std::uint64_t> block(std::size_t b) const {
    return std::span<const std::uint64_t>(words_).subspan(b * width_, width_);
  }
  // Mask of the lanes of block b that hold real vectors.
  std::uint64_t lane_mask(std::size_t b) const noexcept;

 private:
  std::size_t size_;
  std::size_t width_;
  std::vector<std::uint64_t> words_;
};

// Levelized bit-parallel evaluator: 64 independent input patterns per run,
// node values indexed by NodeId.
class WordSimulator {
 public:
  explicit WordSimulator(const Netlist& netlist);

  void run(std::span<const std::uint64_t> pi_words);
  std::uint64_t value(NodeId id) const noexcept { return values_[id.index]; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }
  const Netlist& netlist() const noexcept { return *netlist_; }

 private:
  const Netlist* netlist_;
  std::vector<std::uint64_t> values_;
};

std::uint64_t evaluate_gate(GateKind kind, std::span<const NodeId> inputs,
                            std::span<const std::uint64_t> values) noexcept;

DagState simulate(const Netlist& netlist, const PatternVector& input);
// Element-wise identical to simulate(); evaluates 64 vectors per pass and
// splits blocks across `jobs` threads. Output order equals input order.
std::vector<DagState> simulate_batch(const Netlist& netlist, const PatternBatch& batch,
                                     unsigned jobs = 1);
std::vector<DagState> simulate_batch(const Netlist& netlist,
                                     std::span<const PatternVector> vectors,
                                     unsigned jobs = 1);

// PO bits in output declaration order.
BitVector primary_outputs_of(const DagState& state, const Netlist& netlist);
inline bool node_value(const DagState& state, const Netlist& netlist, NodeId id) {
  return state.bits.get(netlist.flat_position(id));
}

// Throws InputError unless width == #PIs.
void check_width(const Netlist& netlist, std::size_t width);

}  // namespace adatest
