#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace adatest {

// Seed splitting: every random stream in the library is keyed by a master
// seed plus a path of integers (stage tag, iteration, instance, ...), so the
// draws of one stream never depend on how many other streams were consumed or
// on thread scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path) noexcept;

// Stream tags used with derive_seed.
enum class Stream : std::uint64_t {
  kProfile = 1,
  kSmartInit = 2,
  kRandomInit = 3,
  kCandidates = 4,
  kTrojanSample = 5,
  kActivation = 6,
  kMero = 7,
  kTriage = 8,
  kCampaign = 9,
};

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                 std::initializer_list<std::uint64_t> path = {}) noexcept {
  std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(stream));
  for (std::uint64_t p : path) s = mix_seed(s, p);
  return s;
}

// mt19937_64 with platform-independent derived draws (the std distributions
// are implementation-defined, which would break cross-platform determinism).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace adatest
