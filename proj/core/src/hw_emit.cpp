#include <sstream>

#include "adatest/error.hpp"
#include "adatest/hwgen.hpp"

namespace adatest {
namespace {

class Writer {
 public:
  void gate(const std::string& out, std::string_view kind, const std::vector<std::string>& in) {
    body_ << out << " = " << kind << "(";
    for (std::size_t k = 0; k < in.size(); ++k) body_ << (k ? ", " : "") << in[k];
    body_ << ")\n";
  }
  // 0 terms: constant 0 derived from `zero_src`; 1 term: buffer.
  void any(const std::string& out, const std::vector<std::string>& terms,
           const std::string& zero_src) {
    if (terms.empty()) {
      gate(out, "XOR", {zero_src, zero_src});
    } else if (terms.size() == 1) {
      gate(out, "BUF", terms);
    } else {
      gate(out, "OR", terms);
    }
  }
  void all(const std::string& out, const std::vector<std::string>& terms) {
    gate(out, terms.size() == 1 ? "BUF" : "AND", terms);
  }
  void output(const std::string& name) { outputs_ << "OUTPUT(" << name << ")\n"; }
  std::string str(const std::string& title) const {
    return "# " + title + "\n" + outputs_.str() + "\n" + body_.str();
  }

 private:
  std::ostringstream outputs_;
  std::ostringstream body_;
};

std::string q(const std::string& p, std::size_t j) { return p + "q" + std::to_string(j); }
std::string x(std::size_t i) { return "x" + std::to_string(i + 1); }

// Plain ring for one tap matrix; outputs written for `positions`.
void emit_ring(Writer& w, const std::string& p, const TapMatrix& tap,
               const std::vector<std::size_t>& positions) {
  const std::size_t stages = tap.cols();
  w.gate(q(p, 1), "DFF", {q(p, stages)});
  for (std::size_t j = 1; j < stages; ++j) w.gate(q(p, j + 1), "DFF", {q(p, j)});
  for (std::size_t r = 0; r < tap.rows; ++r) {
    std::vector<std::string> terms;
    for (std::size_t j = 1; j <= stages; ++j) {
      if (tap.at(r, j)) terms.push_back(q(p, j));
    }
    w.any(x(positions[r]), terms, q(p, 1));
  }
}

void emit_chunked(Writer& w, const TpgPlan& plan) {
  const std::size_t stages = plan.chunk_size;
  const std::size_t segs = plan.segments.size();
  const std::size_t bits = counter_bits_for(segs);
  const std::size_t last_len = plan.segments.back().count;
  auto cnt = [](std::size_t k) { return "cnt" + std::to_string(k); };
  auto sel = [](std::size_t s) { return "sel" + std::to_string(s); };

  for (std::size_t k = 0; k < bits; ++k) w.gate("ncnt" + std::to_string(k), "NOT", {cnt(k)});
  for (std::size_t s = 0; s < segs; ++s) {
    std::vector<std::string> lits;
    for (std::size_t k = 0; k < bits; ++k) {
      lits.push_back(((s >> k) & 1U) ? cnt(k) : "ncnt" + std::to_string(k));
    }
    w.all(sel(s), lits);
  }
  const std::string last = sel(segs - 1);
  w.gate("nlast", "NOT", {last});

  // Register: a short last segment wraps early from stage last_len.
  if (last_len == stages) {
    w.gate("wrap", "BUF", {q("", stages)});
    for (std::size_t j = 1; j < stages; ++j) w.gate(q("", j + 1), "DFF", {q("", j)});
  } else {
    w.gate("wrap_full", "AND", {q("", stages), "nlast"});
    w.gate("wrap_short", "AND", {q("", last_len), last});
    w.gate("wrap", "OR", {"wrap_full", "wrap_short"});
    w.gate("cut", "AND", {q("", last_len), "nlast"});
    for (std::size_t j = 1; j < stages; ++j) {
      w.gate(q("", j + 1), "DFF", {j == last_len ? "cut" : q("", j)});
    }
  }
  w.gate(q("", 1), "DFF", {"wrap"});

  // Counter: +1 on wrap, back to 0 after the last segment.
  w.gate("reset", "AND", {last, "wrap"});
  w.gate("nreset", "NOT", {"reset"});
  std::string carry = "wrap";
  for (std::size_t k = 0; k < bits; ++k) {
    const std::string sum = "sum" + std::to_string(k);
    w.gate(sum, "XOR", {cnt(k), carry});
    w.gate("d_" + cnt(k), "AND", {sum, "nreset"});
    w.gate(cnt(k), "DFF", {"d_" + cnt(k)});
    if (k + 1 < bits) {
      const std::string next = "carry" + std::to_string(k + 1);
      w.gate(next, "AND", {cnt(k), carry});
      carry = next;
    }
  }

  for (std::size_t i = 0; i < plan.width; ++i) {
    std::vector<std::string> terms;
    for (std::size_t s = 0; s < segs; ++s) {
      const TapMatrix& tap = plan.segments[s].tap;
      std::vector<std::string> taps;
      for (std::size_t j = 1; j <= tap.cols(); ++j) {
        if (tap.at(i, j)) taps.push_back(q("", j));
      }
      if (taps.empty()) continue;
      const std::string term = "t" + std::to_string(s) + "_" + std::to_string(i + 1);
      if (taps.size() == 1) {
        w.gate(term, "AND", {sel(s), taps.front()});
      } else {
        const std::string y = "y" + std::to_string(s) + "_" + std::to_string(i + 1);
        w.gate(y, "OR", taps);
        w.gate(term, "AND", {sel(s), y});
      }
      terms.push_back(term);
    }
    w.any(x(i), terms, q("", 1));
  }
}

}  // namespace

std::string emit_structural(const TpgPlan& plan) {
  Writer w;
  for (std::size_t i = 0; i < plan.width; ++i) w.output(x(i));
  if (!plan.clusters.empty()) {
    for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
      emit_ring(w, "c" + std::to_string(c + 1) + "_", plan.clusters[c].tap,
                plan.clusters[c].inputs);
    }
    return w.str("cyclic shift register TPG, " + std::to_string(plan.clusters.size()) +
                 " clusters, " + std::string(test_mode_name(plan.mode)));
  }
  if (plan.segments.empty()) throw UsageError("plan has no segments");
  if (plan.segments.size() == 1) {
    std::vector<std::size_t> positions(plan.width);
    for (std::size_t i = 0; i < plan.width; ++i) positions[i] = i;
    emit_ring(w, "", plan.segments.front().tap, positions);
    return w.str("cyclic shift register TPG, " + std::to_string(plan.length) + " stages");
  }
  emit_chunked(w, plan);
  return w.str("cyclic shift register TPG, " + std::to_string(plan.segments.size()) +
               " segments of " + std::to_string(plan.chunk_size) + " stages");
}

std::vector<std::pair<std::string, bool>> initial_register_state(const TpgPlan& plan) {
  std::vector<std::pair<std::string, bool>> out;
  if (!plan.clusters.empty()) {
    for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
      const TapMatrix& tap = plan.clusters[c].tap;
      for (std::size_t j = 1; j <= tap.cols(); ++j) {
        out.emplace_back(q("c" + std::to_string(c + 1) + "_", j), j == tap.init_position);
      }
    }
    return out;
  }
  const std::size_t stages =
      plan.segments.size() == 1 ? plan.segments.front().tap.cols() : plan.chunk_size;
  const std::size_t init = plan.segments.size() == 1 ? plan.segments.front().tap.init_position : 1;
  for (std::size_t j = 1; j <= stages; ++j) out.emplace_back(q("", j), j == init);
  for (std::size_t k = 0; k < counter_bits_for(plan.segments.size()); ++k) {
    out.emplace_back("cnt" + std::to_string(k), false);
  }
  return out;
}

}  // namespace adatest
