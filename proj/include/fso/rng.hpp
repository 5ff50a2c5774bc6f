#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace fso {

// Deterministic RNG for search runs and instance generation.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard, and closed-interval draws use rejection sampling instead of
// std::uniform_int_distribution (whose mapping is implementation-defined).
// The same seed therefore yields the same draws on every platform.
//
// Draw discipline: a degenerate interval [a, a] consumes no engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer on the closed interval [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // reject the low residue so every value in [lo, hi] is equally likely
    const std::uint64_t reject_below = (-span) % span;  // 2^64 mod span
    std::uint64_t v = engine_();
    while (v < reject_below) v = engine_();
    return lo + static_cast<std::int64_t>(v % span);
  }

  std::uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fso
