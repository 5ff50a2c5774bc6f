#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fso/model.hpp"
#include "fso/rng.hpp"

namespace fso {

/// Configuration for the weakly correlated spanner instance family.
/// Lengths and revenues come from two base pairs scaled by small random
/// multipliers; the PW and store windows are fixed ratios of the lengths of
/// a randomly chosen base assignment, which therefore stays feasible.
struct GenConfig {
  std::string id_prefix = "desk";
  int pw_count = 4;
  std::vector<int> categories_per_pw{3};    // one entry = same count everywhere
  std::vector<int> options_per_category{4}; // one entry, or one per category
  std::uint64_t seed = 1;
  i64 penalty = 20000;
  int ratio_lower = 850;   // window lower bound, milli of the base length
  int ratio_upper = 1150;  // window upper bound, milli of the base length
  i64 value_range = 10'000'000;  // base lengths drawn from [1, value_range]
  i64 corr_band = 1'000'000;     // revenue drawn within +-corr_band of length
  i64 divisor = 5;               // ceiling normalization divisor
  int mult_lo = 1, mult_hi = 10; // per-option multiplier range

  void validate() const;  // throws InputError
};

struct SpannerPair {
  i64 length = 0;
  i64 revenue = 0;
};

/// Draws the two base pairs: length uniform on [1, value_range], revenue
/// uniform on [length - corr_band, length + corr_band] redrawn until it is
/// at least 1, then both divided by `divisor` rounding up.
std::array<SpannerPair, 2> make_spanner(Rng& rng, const GenConfig& cfg);

/// Option k (global counter): alternates between the two base pairs and
/// scales the chosen pair by a multiplier drawn from [mult_lo, mult_hi].
PlanogramOption gen_option(const std::array<SpannerPair, 2>& spanner, i64 counter,
                           Rng& rng, const GenConfig& cfg);

/// Builds a complete instance: options filled with one global counter in
/// (PW, category, option) order, then one base option drawn per category,
/// then windows set to floor(ratio_lower * G) / ceil(ratio_upper * G) of the
/// base lengths per PW and store-wide. Deterministic per (config, seed).
Instance generate(const GenConfig& cfg);

/// 3 PWs x 5 categories x 3 options: small enough for the exact oracle
/// (3^15 ~ 1.4e7 assignments) yet hard enough that restricted-search
/// ablations measurably trail the full configuration.
GenConfig desk_profile(std::uint64_t seed);

/// 9 PWs x 6 categories with 194 options total (32 categories of 4 options,
/// then 22 of 3), matching the full-scale store shape.
GenConfig full_profile(std::uint64_t seed);

}  // namespace fso
