#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fso {

using i64 = std::int64_t;

/// Raised for malformed instances, solutions, or parameter sets.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PlanogramOption {
  int id = 0;
  i64 length = 0;   // shelf length units, >= 1
  i64 revenue = 0;  // predicted revenue units, >= 1
};

/// A product category with its ordered sequence of alternative planograms.
/// Exactly one option is always chosen for each category.
struct Category {
  int id = 0;
  int current_option = 0;  // the store's existing assignment (generator base)
  std::vector<PlanogramOption> options;
};

/// A planogram world: a group of categories sharing fixtures and location,
/// whose summed planogram length must stay inside [lower, upper].
struct PlanogramWorld {
  int id = 0;
  i64 lower = 0;
  i64 upper = 0;
  std::vector<Category> categories;
};

/// Generation trail recorded by the instance generator so instances can be
/// reproduced and their construction properties audited.
struct GenProvenance {
  std::uint64_t seed = 0;
  std::array<std::pair<i64, i64>, 2> spanner{};  // base (length, revenue) pairs
  std::vector<int> base_choice;                  // option index per category
};

/// A store: planogram worlds plus a store-level total-length window and the
/// penalty coefficient applied to length violations.
///
/// Categories are addressed by a flat ordinal (PW order, then category order)
/// built by finalize(), which also validates every structural invariant.
/// Instances are immutable after finalize() and safe to share across threads.
struct Instance {
  std::string id;
  i64 penalty = 20000;
  i64 store_lower = 0;
  i64 store_upper = 0;
  std::vector<PlanogramWorld> pws;
  std::optional<GenProvenance> provenance;

  int num_pws() const { return static_cast<int>(pws.size()); }
  int num_categories() const { return static_cast<int>(cat_index_.size()); }
  int total_options() const { return total_options_; }

  const Category& category(int c) const {
    const auto& [k, i] = cat_index_[c];
    return pws[k].categories[i];
  }
  int pw_of(int c) const { return cat_index_[c].first; }

  /// Categories of PW k with at least two options, by ordinal.
  const std::vector<int>& movable_categories(int pw) const { return movable_by_pw_[pw]; }

  /// Builds the flat category index and checks all invariants; throws
  /// InputError naming the offending field otherwise.
  void finalize();

 private:
  std::vector<std::pair<int, int>> cat_index_;   // ordinal -> (pw, local index)
  std::vector<std::vector<int>> movable_by_pw_;  // ordinals with >= 2 options
  int total_options_ = 0;
};

/// One full assignment: a chosen option per category, with cached per-PW
/// lengths, total length, and revenue kept in sync by apply().
struct Solution {
  std::vector<int> choice;      // option index per category ordinal
  std::vector<i64> pw_lengths;  // G_k
  i64 total_length = 0;
  i64 revenue = 0;

  bool operator==(const Solution&) const = default;
};

struct Evaluation {
  i64 revenue = 0;
  i64 violation = 0;  // summed length units outside the PW and store windows
  i64 f = 0;          // revenue - penalty * violation
};

enum class InitRule { LeastLength, HighestRevenue, Balanced };

InitRule parse_init_rule(std::string_view name);  // "ll" | "hr" | "bal"
std::string init_rule_name(InitRule rule);

/// From-scratch evaluation of a choice vector (pure).
Evaluation evaluate(const Instance& inst, const std::vector<int>& choice);

/// From-scratch evaluation that also refreshes the solution's caches.
Evaluation evaluate(const Instance& inst, Solution& sol);

bool is_feasible(const Instance& inst, Solution& sol);

/// Builds a Solution (with caches) from a choice vector; validates indices.
Solution make_solution(const Instance& inst, std::vector<int> choice);

/// Per-category greedy construction: least length, highest revenue, or best
/// revenue per length unit. The balanced rule compares R_a*L_b vs R_b*L_a in
/// integers, so ties are platform-independent; all ties go to the lowest
/// option index.
Solution initial_solution(const Instance& inst, InitRule rule);

/// Violation recomputed from the solution's cached lengths (O(|K|)).
i64 violation_from_caches(const Instance& inst, const Solution& sol);

}  // namespace fso
