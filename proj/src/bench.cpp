#include "fso/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fso {

std::vector<OptimalResult> solve_all(const std::vector<Instance>& instances,
                                     i64 budget, int jobs) {
  std::vector<OptimalResult> results(instances.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t t = 0; t < instances.size(); ++t) {
    try {
      results[t] = brute_force(instances[t], budget);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

RunSummary bench_run(const std::vector<Instance>& instances,
                     const std::vector<OptimalResult>& oracles, const RunSpec& spec,
                     int jobs) {
  if (instances.size() != oracles.size())
    throw InputError("bench requires one oracle result per instance");
  RunSummary summary;
  summary.label = spec.label;
  summary.cells.resize(instances.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t t = 0; t < instances.size(); ++t) {
    try {
      SearchParams params = spec.params;
      params.seed = spec.params.seed + t;
      const auto start = std::chrono::steady_clock::now();
      const SearchResult res = run(instances[t], params);
      CellResult& cell = summary.cells[t];
      cell.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      cell.instance_id = instances[t].id;
      cell.optimum = oracles[t].revenue;
      cell.evaluations = res.move_evaluations;
      cell.iterations = res.iterations;
      cell.feasible = res.best_feasible.has_value();
      if (cell.feasible) {
        cell.found_revenue = res.best_feasible_eval.revenue;
        cell.gap_pct = cell.optimum == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(cell.optimum - cell.found_revenue) /
                                 static_cast<double>(cell.optimum);
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  int feasible_cells = 0;
  double gap_sum = 0.0;
  for (const CellResult& cell : summary.cells) {
    summary.cputm += cell.seconds;
    summary.evaluations += cell.evaluations;
    if (!cell.feasible) {
      ++summary.infnum;
      continue;
    }
    ++feasible_cells;
    gap_sum += cell.gap_pct;
    summary.maxgap = std::max(summary.maxgap, cell.gap_pct);
    if (cell.found_revenue == cell.optimum) ++summary.optnum;
  }
  if (feasible_cells > 0) summary.avggap = gap_sum / feasible_cells;
  return summary;
}

std::string format_summary_table(const std::vector<RunSummary>& summaries) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %7s %7s %10s %10s %8s %12s\n", "RUN", "OPTNUM",
                "INFNUM", "AVGGAP(%)", "MAXGAP(%)", "CPUTM", "EVALS");
  out << line;
  for (const RunSummary& s : summaries) {
    std::snprintf(line, sizeof(line), "%-16s %7d %7d %10.2f %10.2f %8.0f %12lld\n",
                  s.label.c_str(), s.optnum, s.infnum, s.avggap, s.maxgap, s.cputm,
                  static_cast<long long>(s.evaluations));
    out << line;
  }
  return out.str();
}

void write_summary_csv(const std::vector<RunSummary>& summaries,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write summary CSV: " + path.string());
  out << "run,optnum,infnum,avggap_pct,maxgap_pct,cputm_s,evaluations\n";
  for (const RunSummary& s : summaries) {
    char line[200];
    std::snprintf(line, sizeof(line), "%s,%d,%d,%.6f,%.6f,%.3f,%lld\n", s.label.c_str(),
                  s.optnum, s.infnum, s.avggap, s.maxgap, s.cputm,
                  static_cast<long long>(s.evaluations));
    out << line;
  }
}

void write_detail_csv(const std::vector<RunSummary>& summaries,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write detail CSV: " + path.string());
  out << "run,instance,feasible,found_revenue,optimum,gap_pct,seconds,evaluations,"
         "iterations\n";
  for (const RunSummary& s : summaries)
    for (const CellResult& c : s.cells) {
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%s,%d,%lld,%lld,%.6f,%.4f,%lld,%lld\n",
                    s.label.c_str(), c.instance_id.c_str(), c.feasible ? 1 : 0,
                    static_cast<long long>(c.found_revenue),
                    static_cast<long long>(c.optimum), c.gap_pct, c.seconds,
                    static_cast<long long>(c.evaluations),
                    static_cast<long long>(c.iterations));
      out << line;
    }
}

}  // namespace fso
