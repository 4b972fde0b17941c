#include "adatest/hwgen.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "adatest/error.hpp"

namespace adatest {
namespace {

std::vector<BitVector> bits_of(std::span<const PatternVector> vectors) {
  std::vector<BitVector> out;
  out.reserve(vectors.size());
  for (const PatternVector& v : vectors) out.push_back(v.bits);
  return out;
}

CostEstimate chunked_cost(std::size_t length, std::size_t width, std::size_t taps,
                          std::size_t chunk) {
  const std::size_t segments = (length + chunk - 1) / chunk;
  CostEstimate c;
  c.counter_bits = counter_bits_for(segments);
  c.ff_count = chunk + c.counter_bits;
  c.or_tap_count = taps;
  c.mux_2to1_count = (segments - 1) * width;
  c.cycles_total = length;
  return c;
}

std::size_t find_root(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

BitVector TapMatrix::init_state() const {
  BitVector d(cols());
  if (cols() > 0) d.set(init_position - 1, true);
  return d;
}

std::size_t TapMatrix::tap_count() const noexcept {
  std::size_t n = 0;
  for (const BitVector& c : columns) n += c.popcount();
  return n;
}

TapMatrix derive_tap_matrix(std::span<const BitVector> vectors, std::size_t init_position) {
  if (vectors.empty()) throw UsageError("cannot derive a tap matrix from an empty test set");
  const std::size_t length = vectors.size();
  if (init_position < 1 || init_position > length) {
    throw UsageError("init position " + std::to_string(init_position) + " outside [1, " +
                     std::to_string(length) + "]");
  }
  TapMatrix tap;
  tap.rows = vectors.front().size();
  tap.init_position = init_position;
  tap.columns.assign(length, BitVector(tap.rows));
  for (std::size_t t = 0; t < length; ++t) {
    if (vectors[t].size() != tap.rows) throw InputError("test vectors differ in width");
    tap.columns[(init_position - 1 + t) % length] = vectors[t];
  }
  return tap;
}

TapMatrix derive_tap_matrix(std::span<const PatternVector> vectors, std::size_t init_position) {
  const auto bits = bits_of(vectors);
  return derive_tap_matrix(std::span<const BitVector>(bits), init_position);
}

std::vector<BitVector> simulate_tpg(const TapMatrix& tap, std::size_t cycles) {
  return simulate_tpg(tap, cycles, tap.init_position);
}

std::vector<BitVector> simulate_tpg(const TapMatrix& tap, std::size_t cycles,
                                    std::size_t init_position) {
  const std::size_t stages = tap.cols();
  if (stages == 0) throw UsageError("tap matrix has no stages");
  if (init_position < 1 || init_position > stages) throw UsageError("init position out of range");
  BitVector d(stages);
  d.set(init_position - 1, true);
  std::vector<BitVector> out;
  out.reserve(cycles);
  for (std::size_t t = 0; t < cycles; ++t) {
    BitVector x(tap.rows);
    for (std::size_t j = 0; j < stages; ++j) {
      if (!d.get(j)) continue;
      for (std::size_t i = 0; i < tap.rows; ++i) {
        if (tap.columns[j].get(i)) x.set(i, true);
      }
    }
    out.push_back(std::move(x));
    // Cyclic right shift: stage j feeds stage j+1, the last stage feeds stage 1.
    BitVector next(stages);
    for (std::size_t j = 0; j < stages; ++j) next.set((j + 1) % stages, d.get(j));
    d = std::move(next);
  }
  return out;
}

std::string_view test_mode_name(TestMode mode) noexcept {
  return mode == TestMode::Distributed ? "distributed" : "centralized";
}

TpgPlan plan_single(std::span<const PatternVector> vectors, std::size_t init_position) {
  TpgPlan plan;
  plan.segments.push_back(Segment{derive_tap_matrix(vectors, init_position), 0, vectors.size()});
  plan.width = plan.segments.front().tap.rows;
  plan.length = vectors.size();
  plan.chunk_size = plan.length;
  return plan;
}

TpgPlan plan_chunked(std::span<const PatternVector> vectors, std::size_t chunk) {
  if (vectors.empty()) throw UsageError("cannot plan an empty test set");
  if (chunk < 1 || chunk > vectors.size()) {
    throw UsageError("chunk size must be in [1, " + std::to_string(vectors.size()) + "]");
  }
  TpgPlan plan;
  plan.length = vectors.size();
  plan.width = vectors.front().width();
  plan.chunk_size = chunk;
  for (std::size_t first = 0; first < plan.length; first += chunk) {
    const std::size_t count = std::min(chunk, plan.length - first);
    plan.segments.push_back(Segment{derive_tap_matrix(vectors.subspan(first, count), 1), first, count});
  }
  if (plan.segments.size() > 1) {
    plan.note = "segment counter advances on register wrap-around; TPG/TRA timing not verified";
  }
  return plan;
}

TpgPlan plan_clustered(const Netlist& netlist, std::span<const PatternVector> vectors,
                       TestMode mode) {
  if (vectors.empty()) throw UsageError("cannot plan an empty test set");
  const auto pis = netlist.primary_inputs();
  for (const PatternVector& v : vectors) check_width(netlist, v.width());

  std::vector<std::uint32_t> parent(netlist.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  for (const Gate& g : netlist.gates()) {
    for (NodeId in : g.inputs) {
      const std::size_t a = find_root(parent, g.output.index);
      const std::size_t b = find_root(parent, in.index);
      if (a != b) parent[std::max(a, b)] = static_cast<std::uint32_t>(std::min(a, b));
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < pis.size(); ++i) {
    const std::size_t root = find_root(parent, pis[i].index);
    if (!groups.count(root)) order.push_back(root);
    groups[root].push_back(i);
  }

  TpgPlan plan;
  plan.width = pis.size();
  plan.length = vectors.size();
  plan.chunk_size = plan.length;
  plan.mode = mode;
  for (std::size_t root : order) {
    Cluster c;
    c.inputs = groups[root];
    std::vector<BitVector> projected;
    for (const PatternVector& v : vectors) {
      BitVector p(c.inputs.size());
      for (std::size_t k = 0; k < c.inputs.size(); ++k) p.set(k, v.bits.get(c.inputs[k]));
      projected.push_back(std::move(p));
    }
    c.tap = derive_tap_matrix(std::span<const BitVector>(projected), 1);
    plan.clusters.push_back(std::move(c));
  }
  return plan;
}

std::vector<BitVector> replay(const TpgPlan& plan) {
  std::vector<BitVector> out;
  if (!plan.clusters.empty()) {
    out.assign(plan.length, BitVector(plan.width));
    for (const Cluster& c : plan.clusters) {
      const auto seq = simulate_tpg(c.tap, plan.length);
      for (std::size_t t = 0; t < plan.length; ++t) {
        for (std::size_t k = 0; k < c.inputs.size(); ++k) out[t].set(c.inputs[k], seq[t].get(k));
      }
    }
    return out;
  }
  for (const Segment& s : plan.segments) {
    auto seq = simulate_tpg(s.tap, s.count);
    for (auto& v : seq) out.push_back(std::move(v));
  }
  return out;
}

std::size_t counter_bits_for(std::size_t states) noexcept {
  return states <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(states - 1));
}

CostEstimate estimate_cost(const TpgPlan& plan) {
  if (!plan.clusters.empty()) {
    CostEstimate c;
    for (const Cluster& cl : plan.clusters) {
      c.ff_count += cl.tap.cols();
      c.or_tap_count += cl.tap.tap_count();
      c.cycles_total = plan.mode == TestMode::Distributed
                           ? std::max(c.cycles_total, cl.tap.cols())
                           : c.cycles_total + cl.tap.cols();
    }
    return c;
  }
  std::size_t taps = 0;
  for (const Segment& s : plan.segments) taps += s.tap.tap_count();
  return chunked_cost(plan.length, plan.width, taps, plan.chunk_size);
}

std::vector<ChunkSweepPoint> sweep_chunk_sizes(std::span<const PatternVector> vectors,
                                               std::size_t* best_chunk) {
  if (vectors.empty()) throw UsageError("cannot sweep an empty test set");
  std::size_t taps = 0;
  for (const PatternVector& v : vectors) taps += v.bits.popcount();
  std::vector<ChunkSweepPoint> points;
  std::size_t best = 0;
  for (std::size_t chunk = 1; chunk <= vectors.size(); ++chunk) {
    points.push_back({chunk, chunked_cost(vectors.size(), vectors.front().width(), taps, chunk)});
    if (points.back().cost.total() < points[best].cost.total()) best = points.size() - 1;
  }
  if (best_chunk != nullptr) *best_chunk = points[best].chunk;
  return points;
}

ResponseBuffer size_response_buffer(std::size_t po_count, std::size_t rom_word_bits) {
  if (po_count == 0 || rom_word_bits == 0) {
    throw UsageError("output count and ROM word width must be at least 1");
  }
  ResponseBuffer r;
  r.cycles_per_comparison = (po_count + rom_word_bits - 1) / rom_word_bits;
  r.buffer_needed = po_count > rom_word_bits;
  return r;
}

std::string rom_image(std::span<const BitVector> responses, std::size_t word_bits) {
  if (word_bits == 0) throw UsageError("ROM word width must be at least 1");
  static constexpr char kHex[] = "0123456789abcdef";
  const std::size_t digits = (word_bits + 3) / 4;
  std::string out;
  for (const BitVector& r : responses) {
    for (std::size_t base = 0; base < std::max<std::size_t>(r.size(), 1); base += word_bits) {
      std::string word(digits, '0');
      for (std::size_t b = 0; b < word_bits && base + b < r.size(); ++b) {
        if (!r.get(base + b)) continue;
        char& d = word[digits - 1 - b / 4];
        const int value = static_cast<int>(std::string_view(kHex).find(d)) | (1 << (b % 4));
        d = kHex[value];
      }
      out += word;
      out += '\n';
    }
  }
  return out;
}

}  // namespace adatest
