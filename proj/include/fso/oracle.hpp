#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fso/model.hpp"

namespace fso {

/// The oracle refused to enumerate: the assignment space exceeds the budget.
struct OracleBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimalResult {
  bool feasible = false;     // false: no assignment satisfies the windows
  i64 revenue = 0;
  std::vector<int> choice;   // option index per category (when feasible)
  i64 nodes = 0;             // partial assignments expanded
  double seconds = 0.0;
};

/// Exact reference solver: depth-first enumeration of the per-category
/// option product in lexicographic order, pruning a partial assignment as
/// soon as its PW (or store) length can no longer reach the window with the
/// remaining categories' minimal/maximal lengths. Revenue ties keep the
/// lexicographically smallest choice vector.
///
/// Refuses instances whose full product of option counts exceeds `budget`
/// rather than risk an unfinished enumeration.
OptimalResult brute_force(const Instance& inst, i64 budget = 50'000'000);

/// Sum of each category's best option revenue: an upper bound on the revenue
/// of every solution, feasible or not.
i64 revenue_upper_bound(const Instance& inst);

/// Writes the exact integer program in LP text format. Variables are named
/// x_<category id>_<option index>, so external solver output maps back to a
/// choice vector directly; rows are assign_<cat>, pw_<id>_lo/hi, store_lo/hi.
void export_mip(const Instance& inst, std::ostream& out);
void export_mip_file(const Instance& inst, const std::filesystem::path& path);

// Oracle result files: {schema, instance_id, status, revenue,
// choices:[{category, option}], nodes, seconds}.
void save_oracle_result(const Instance& inst, const OptimalResult& result,
                        const std::filesystem::path& path);
/// Loads a previously saved result for `inst`; nullopt when the file does not
/// exist. Recorded revenue is checked against a re-evaluation of the choices.
std::optional<OptimalResult> load_oracle_result(const Instance& inst,
                                                const std::filesystem::path& path);

}  // namespace fso
