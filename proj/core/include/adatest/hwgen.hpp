#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adatest/bitvec.hpp"
#include "adatest/netlist.hpp"
#include "adatest/sim.hpp"

namespace adatest {

// Coefficients of the OR-gate network behind a one-hot cyclic shift register.
// Stages are numbered 1..cols; column j holds the output bits produced while
// the 1 sits in stage j.
struct TapMatrix {
  std::size_t rows = 0;           // output bits (test vector width)
  std::size_t init_position = 1;  // stage holding the 1 at the first clock
  std::vector<BitVector> columns;

  std::size_t cols() const noexcept { return columns.size(); }
  bool at(std::size_t row, std::size_t stage) const { return columns.at(stage - 1).get(row); }
  BitVector init_state() const;
  std::size_t tap_count() const noexcept;

  friend bool operator==(const TapMatrix&, const TapMatrix&) = default;
};

// Clock t emits the column of stage ((k0 - 1 + t) mod I) + 1, then the
// register shifts right by one with wrap-around. Vector t of the set is
// therefore stored in that column.
TapMatrix derive_tap_matrix(std::span<const BitVector> vectors, std::size_t init_position);
TapMatrix derive_tap_matrix(std::span<const PatternVector> vectors, std::size_t init_position);

// Runs the register from the matrix's init position.
std::vector<BitVector> simulate_tpg(const TapMatrix& tap, std::size_t cycles);
// Runs from an explicit one-hot position; X_i = OR_j (C_ij AND d_j).
std::vector<BitVector> simulate_tpg(const TapMatrix& tap, std::size_t cycles,
                                    std::size_t init_position);

enum class TestMode { Distributed, Centralized };
std::string_view test_mode_name(TestMode mode) noexcept;

struct Segment {
  TapMatrix tap;
  std::size_t first = 0;  // index of the first vector of the segment
  std::size_t count = 0;
};

struct Cluster {
  std::vector<std::size_t> inputs;  // PI positions, ascending
  TapMatrix tap;
};

struct TpgPlan {
  std::size_t width = 0;
  std::size_t length = 0;      // I
  std::size_t chunk_size = 0;  // I_i; equals length when unchunked
  std::vector<Segment> segments;
  std::vector<Cluster> clusters;
  TestMode mode = TestMode::Distributed;
  std::string note;
};

// One segment covering the whole set.
TpgPlan plan_single(std::span<const PatternVector> vectors, std::size_t init_position = 1);
// ceil(I / chunk) segments of at most `chunk` vectors sharing one register of
// `chunk` stages; a counter advanced on each wrap selects the segment.
TpgPlan plan_chunked(std::span<const PatternVector> vectors, std::size_t chunk);
// PIs grouped by the connected components of the circuit graph; one register
// per cluster over that cluster's columns.
TpgPlan plan_clustered(const Netlist& netlist, std::span<const PatternVector> vectors,
                       TestMode mode = TestMode::Distributed);

// Test vectors produced by the plan, recombined in order.
std::vector<BitVector> replay(const TpgPlan& plan);

struct CostEstimate {
  std::size_t ff_count = 0;
  std::size_t counter_bits = 0;
  std::size_t or_tap_count = 0;
  std::size_t mux_2to1_count = 0;
  std::size_t cycles_total = 0;

  // Unit-weight sum of flip-flops, taps and two-input multiplexers.
  std::size_t total() const noexcept { return ff_count + or_tap_count + mux_2to1_count; }
};

std::size_t counter_bits_for(std::size_t states) noexcept;
CostEstimate estimate_cost(const TpgPlan& plan);

struct ChunkSweepPoint {
  std::size_t chunk = 0;
  CostEstimate cost;
};
// Every chunk size 1..I; best is the first point with minimal total cost.
std::vector<ChunkSweepPoint> sweep_chunk_sizes(std::span<const PatternVector> vectors,
                                               std::size_t* best_chunk = nullptr);

struct ResponseBuffer {
  std::size_t cycles_per_comparison = 0;
  bool buffer_needed = false;
};
ResponseBuffer size_response_buffer(std::size_t po_count, std::size_t rom_word_bits);

// Extended bench text (with DFFs) realizing the plan. Flip-flop outputs are
// named q<j> (stage j), counter bits cnt<k>; outputs are x<i> for PI
// position i (1-based), with cluster plans prefixing register names by c<k>_.
std::string emit_structural(const TpgPlan& plan);
// Initial flip-flop values for emit_structural output, keyed by flip-flop
// output name: the one-hot register state and a zero counter.
std::vector<std::pair<std::string, bool>> initial_register_state(const TpgPlan& plan);

// Golden responses as ROM words, one hex word per line, LSB-first within a
// word, ceil(#POs / word_bits) words per vector.
std::string rom_image(std::span<const BitVector> responses, std::size_t word_bits);

}  // namespace adatest
