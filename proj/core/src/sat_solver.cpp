#include <algorithm>
#include <cstdint>

#include "adatest/error.hpp"
#include "adatest/rng.hpp"
#include "adatest/sat.hpp"

namespace adatest {
namespace {

// Internal literal code: 2*v for +v, 2*v+1 for -v.
constexpr int code(Literal l) { return l > 0 ? 2 * l : -2 * l + 1; }
constexpr int neg(int c) { return c ^ 1; }
constexpr int var_of(int c) { return c >> 1; }

class Solver {
 public:
  Solver(const Cnf& cnf, const SolveOptions& options)
      : vars_(cnf.variable_count),
        value_(static_cast<std::size_t>(vars_) + 1, -1),
        level_(value_.size(), 0),
        reason_(value_.size(), -1),
        seen_(value_.size(), 0),
        phase_(value_.size(), 0),
        activity_(value_.size(), 0.0),
        heap_index_(value_.size(), -1),
        watches_(2 * value_.size() + 2) {
    for (int v = 1; v <= vars_; ++v) heap_insert(v);
    if (options.phase_seed) {
      Rng rng(*options.phase_seed);
      for (int v = 1; v <= vars_; ++v) phase_[v] = static_cast<std::uint8_t>(rng.next() & 1U);
    }
    for (const auto& clause : cnf.clauses) {
      std::vector<int> c;
      c.reserve(clause.size());
      for (Literal l : clause) c.push_back(code(l));
      if (!add_clause(std::move(c))) ok_ = false;
      if (!ok_) break;
    }
  }

  std::optional<Assignment> run(std::span<const Literal> assumptions) {
    if (!ok_ || propagate() >= 0) return std::nullopt;
    std::vector<int> assume;
    for (Literal l : assumptions) {
      if (l == 0 || std::abs(l) > vars_) {
        throw UsageError("assumption references undeclared variable " + std::to_string(l));
      }
      assume.push_back(code(l));
    }
    std::uint64_t restart = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t limit = kRestartBase * luby(restart);
    while (true) {
      const int conflict = propagate();
      if (conflict >= 0) {
        if (decision_level() == 0) return std::nullopt;
        int backjump = 0;
        std::vector<int> learnt = analyze(conflict, backjump);
        backtrack(backjump);
        decay_activity();
        ++conflicts;
        const int index = static_cast<int>(clauses_.size());
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          clauses_.push_back(std::move(learnt));
          watch(index);
          enqueue(clauses_[index][0], index);
        }
        continue;
      }
      if (conflicts >= limit) {
        conflicts = 0;
        limit = kRestartBase * luby(++restart);
        backtrack(0);
        continue;
      }
      // Pending assumptions are the first decisions.
      int decision = -1;
      while (decision_level() < static_cast<int>(assume.size())) {
        const int a = assume[decision_level()];
        const int v = value(a);
        if (v == 0) return std::nullopt;
        if (v == 1) {
          trail_lim_.push_back(trail_.size());  // already true: empty level
          continue;
        }
        decision = a;
        break;
      }
      if (decision < 0) {
        int next_var = 0;
        while (!heap_.empty()) {
          const int v = heap_pop();
          if (value_[v] < 0) {
            next_var = v;
            break;
          }
        }
        if (next_var == 0) break;
        decision = phase_[next_var] ? 2 * next_var : 2 * next_var + 1;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(decision, -1);
    }
    Assignment a;
    a.values.assign(static_cast<std::size_t>(vars_) + 1, 0);
    for (int v = 1; v <= vars_; ++v) a.values[v] = static_cast<std::uint8_t>(value_[v] == 1);
    return a;
  }

 private:
  // 1 true, 0 false, -1 unassigned
  int value(int c) const {
    const int v = value_[var_of(c)];
    return v < 0 ? -1 : (v ^ (c & 1));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(int c, int reason) {
    const int v = var_of(c);
    value_[v] = (c & 1) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(c);
  }

  void watch(int index) {
    const auto& c = clauses_[index];
    watches_[neg(c[0])].push_back(index);
    watches_[neg(c[1])].push_back(index);
  }

  bool add_clause(std::vector<int> c) {
    if (c.size() == 1) {
      const int v = value(c[0]);
      if (v == 0) return false;
      if (v < 0) enqueue(c[0], -1);
      return true;
    }
    clauses_.push_back(std::move(c));
    watch(static_cast<int>(clauses_.size()) - 1);
    return true;
  }

  // Returns the index of a conflicting clause, or -1.
  int propagate() {
    while (head_ < trail_.size()) {
      const int falsified = neg(trail_[head_++]);
      // watches_[x] holds clauses watching a literal whose negation is x,
      // i.e. the clauses to revisit when x becomes true.
      auto& list = watches_[neg(falsified)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const int ci = list[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          list[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[neg(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        list[keep++] = ci;
        if (value(c[0]) == 0) {
          for (std::size_t j = i + 1; j < list.size(); ++j) list[keep++] = list[j];
          list.resize(keep);
          head_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      list.resize(keep);
    }
    return -1;
  }

  std::vector<int> analyze(int conflict, int& backjump) {
    std::vector<int> learnt{0};
    int pending = 0;
    int p = -1;
    std::size_t index = trail_.size();
    int ci = conflict;
    do {
      const auto& c = clauses_[ci];
      for (std::size_t k = (p < 0 ? 0 : 1); k < c.size(); ++k) {
        const int q = c[k];
        const int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= decision_level()) {
          ++pending;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      ci = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = neg(p);

    backjump = 0;
    std::size_t max_i = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      seen_[var_of(learnt[k])] = 0;
      if (level_[var_of(learnt[k])] > backjump) {
        backjump = level_[var_of(learnt[k])];
        max_i = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    return learnt;
  }

  void backtrack(int level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i > trail_lim_[level]; --i) {
      const int v = var_of(trail_[i - 1]);
      phase_[v] = static_cast<std::uint8_t>(value_[v]);
      value_[v] = -1;
      reason_[v] = -1;
      if (heap_index_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    head_ = trail_.size();
  }

  static constexpr std::uint64_t kRestartBase = 100;

  // Luby sequence 1 1 2 1 1 2 4 ...; i is 0-based.
  static std::uint64_t luby(std::uint64_t i) {
    std::uint64_t size = 1;
    int seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::uint64_t{1} << seq;
  }

  void bump(int v) {
    activity_[v] += increment_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      increment_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) sift_up(heap_index_[v]);
  }
  void decay_activity() { increment_ /= 0.95; }

  // Max-heap on activity; ties go to the lower variable index.
  bool before(int a, int b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(int v) {
    heap_index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_index_[v]);
  }
  int heap_pop() {
    const int top = heap_.front();
    heap_index_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      sift_down(0);
    }
    return top;
  }
  void sift_up(int i) {
    const int v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }
  void sift_down(int i) {
    const int n = static_cast<int>(heap_.size());
    const int v = heap_[i];
    while (true) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = i;
  }

  int vars_;
  bool ok_ = true;
  double increment_ = 1.0;
  std::vector<int> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint8_t> phase_;
  std::vector<double> activity_;
  std::vector<int> heap_index_;
  std::vector<int> heap_;
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t head_ = 0;
};

}  // namespace

std::optional<Assignment> solve(const Cnf& cnf, std::span<const Literal> assumptions,
                                const SolveOptions& options) {
  Solver solver(cnf, options);
  auto result = solver.run(assumptions);
  if (result && !satisfies(cnf, *result)) {
    throw InvariantError("solver returned a non-satisfying assignment");
  }
  return result;
}

}  // namespace adatest
