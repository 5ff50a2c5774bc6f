#pragma once

#include <string>
#include <vector>

#include "fso/oracle.hpp"
#include "fso/search.hpp"

namespace fso {

/// One benchmark variant: a labelled parameter set applied to every instance.
/// The per-instance seed is params.seed + the instance's position, so two
/// specs sharing a base seed run identical random streams per instance.
struct RunSpec {
  std::string label;
  SearchParams params;
};

/// Per-(instance, spec) outcome.
struct CellResult {
  std::string instance_id;
  bool feasible = false;
  i64 found_revenue = 0;  // best feasible revenue (when feasible)
  i64 optimum = 0;
  double gap_pct = 0.0;   // (opt - found) / opt * 100, feasible cells only
  double seconds = 0.0;
  i64 evaluations = 0;
  i64 iterations = 0;
};

/// Aggregates across the suite. Gap statistics cover feasible cells only and
/// optnum counts feasible cells whose revenue equals the oracle optimum.
struct RunSummary {
  std::string label;
  int optnum = 0;
  int infnum = 0;
  double avggap = 0.0;
  double maxgap = 0.0;
  double cputm = 0.0;  // wall-clock seconds summed over the runs
  i64 evaluations = 0;
  std::vector<CellResult> cells;
};

/// Solves every instance exactly, fanned out across `jobs` threads.
std::vector<OptimalResult> solve_all(const std::vector<Instance>& instances,
                                     i64 budget, int jobs);

/// Runs one spec over the suite (instances paired with their oracle optima),
/// fanned out across `jobs` threads; cell order follows the instance order.
RunSummary bench_run(const std::vector<Instance>& instances,
                     const std::vector<OptimalResult>& oracles, const RunSpec& spec,
                     int jobs);

std::string format_summary_table(const std::vector<RunSummary>& summaries);
void write_summary_csv(const std::vector<RunSummary>& summaries,
                       const std::filesystem::path& path);
void write_detail_csv(const std::vector<RunSummary>& summaries,
                      const std::filesystem::path& path);

}  // namespace fso
