// Command-line front end: instance generation, solving, exact oracle runs,
// batch benchmarking with report tables, and trace plotting.
//
// Exit codes: 0 success / feasible solution found, 2 no feasible solution at
// termination (solve) or infeasible instance (oracle), 3 input or usage
// error, 4 instance over the oracle budget.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fso/bench.hpp"
#include "fso/generator.hpp"
#include "fso/io.hpp"
#include "fso/oracle.hpp"
#include "fso/search.hpp"

namespace fs = std::filesystem;
using namespace fso;

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitOracleBudget = 4;

fs::path default_out_dir() {
  if (const char* env = std::getenv("FSO_OUT")) return fs::path(env);
  return fs::path(".");
}

int to_milli(double x, const char* what) {
  const double scaled = x * 1000.0;
  const long long m = std::llround(scaled);
  if (m < 0 || m > 1000 || std::abs(scaled - static_cast<double>(m)) > 1e-6)
    throw InputError(std::string(what) + " must be a multiple of 0.001 in [0, 1]");
  return static_cast<int>(m);
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(spec.substr(0, dots));
    const std::uint64_t hi = std::stoull(spec.substr(dots + 2));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;  // lo > hi is an empty range, which is fine
  }
  std::size_t start = 0;
  while (start < spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string piece =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) seeds.push_back(std::stoull(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::uint8_t parse_levels(const std::string& spec) {
  if (spec == "all") return 0b11111;
  std::uint8_t mask = 0;
  for (char ch : spec) {
    if (ch == ',') continue;
    if (ch < '1' || ch > '5') throw InputError("bad --levels value: " + spec);
    mask |= 1u << (ch - '1');
  }
  if (mask == 0) throw InputError("--levels selects no levels");
  return mask;
}

SelectMode parse_mode(const std::string& name) {
  if (name == "best") return SelectMode::BestImprovement;
  if (name == "first") return SelectMode::FirstImprovingBest;
  throw InputError("bad selection mode: " + name + " (expected best or first)");
}

void apply_param(SearchParams& p, const std::string& key, const std::string& value) {
  auto as_i64 = [&] { return static_cast<i64>(std::stoll(value)); };
  auto as_milli = [&] { return to_milli(std::stod(value), key.c_str()); };
  if (key == "iters") p.total_iters = as_i64();
  else if (key == "stage1") p.stage1_iters = as_i64();
  else if (key == "high-trigger") p.high_trigger = as_i64();
  else if (key == "max-high-run") p.max_high_run = as_i64();
  else if (key == "forced-low-span") p.forced_low_span = as_i64();
  else if (key == "feasible-stall") p.feasible_stall = as_i64();
  else if (key == "stats-warmup") p.stats_warmup = as_i64();
  else if (key == "p1") p.p_level1 = as_milli();
  else if (key == "p2") p.p_level2 = as_milli();
  else if (key == "p3") p.p_level3 = as_milli();
  else if (key == "p4") p.p_level4 = as_milli();
  else if (key == "p5") p.p_level5 = as_milli();
  else if (key == "r1") p.ratio_low = as_milli();
  else if (key == "r2") p.ratio_high = as_milli();
  else if (key == "penalty") p.penalty = as_i64();
  else if (key == "seed") p.seed = std::stoull(value);
  else if (key == "cl") p.candidate_list = value == "on" || value == "1" || value == "true";
  else if (key == "tenure") p.tenure = parse_tenure(value, p.tenure_fixed);
  else if (key == "init") p.init = parse_init_rule(value);
  else if (key == "levels") p.level_mask = parse_levels(value);
  else if (key == "low-mode") p.low_mode = parse_mode(value);
  else if (key == "high-mode") p.high_mode = parse_mode(value);
  else if (key == "threads") p.threads = static_cast<int>(std::stoll(value));
  else throw InputError("unknown search parameter: " + key);
}

RunSpec parse_run_spec(const std::string& text) {
  RunSpec spec;
  std::size_t start = 0;
  while (start < text.size()) {
    auto semi = text.find(';', start);
    if (semi == std::string::npos) semi = text.size();
    const std::string piece = text.substr(start, semi - start);
    start = semi + 1;
    if (piece.empty()) continue;
    const auto eq = piece.find('=');
    if (eq == std::string::npos)
      throw InputError("spec entries are key=value, got '" + piece + "'");
    const std::string key = piece.substr(0, eq);
    const std::string value = piece.substr(eq + 1);
    if (key == "label") spec.label = value;
    else apply_param(spec.params, key, value);
  }
  if (spec.label.empty())
    spec.label = "run-" + std::to_string(spec.params.total_iters);
  return spec;
}

// Shared solver flags for `solve`; bench reaches the same knobs through
// --spec key=value strings.
struct SolveFlags {
  double p1 = 0.2, p2 = 0.5, p3 = 0.3, p4 = 0.6, p5 = 0.4;
  double r1 = 0.5, r2 = 0.8;
  std::string tenure = "default";
  std::string init = "bal";
  std::string levels = "all";
  std::string low_mode = "best";
  std::string high_mode = "first";
  bool no_candidate_list = false;
  SearchParams params;

  void attach(CLI::App& cmd) {
    cmd.add_option("--iters", params.total_iters, "iteration budget");
    cmd.add_option("--stage1", params.stage1_iters, "opening-stage length (level 2 only)");
    cmd.add_option("--high-trigger", params.high_trigger,
                   "stalled iterations before high-level moves");
    cmd.add_option("--max-high-run", params.max_high_run,
                   "cap on consecutive high-level moves");
    cmd.add_option("--forced-low-span", params.forced_low_span,
                   "low-level iterations forced after a capped run");
    cmd.add_option("--feasible-stall", params.feasible_stall,
                   "stop after this many iterations without a feasible best "
                   "(-1 = 4/5 of the budget)");
    cmd.add_option("--stats-warmup", params.stats_warmup,
                   "iterations before candidate lists engage");
    cmd.add_option("--p1", p1, "level-1 draw probability");
    cmd.add_option("--p2", p2, "level-2 draw probability");
    cmd.add_option("--p3", p3, "level-3 draw probability");
    cmd.add_option("--p4", p4, "level-4 draw probability");
    cmd.add_option("--p5", p5, "level-5 draw probability");
    cmd.add_option("--r1", r1, "candidate-list ratio for levels 2-3");
    cmd.add_option("--r2", r2, "candidate-list ratio for levels 4-5");
    cmd.add_option("--penalty", params.penalty, "violation penalty (default: instance's)");
    cmd.add_option("--seed", params.seed, "random seed");
    cmd.add_flag("--no-candidate-list", no_candidate_list,
                 "disable the learning-based candidate lists");
    cmd.add_option("--tenure", tenure, "tabu tenure: default|none|midpoint|fixed:N");
    cmd.add_option("--init", init, "initial solution rule: ll|hr|bal");
    cmd.add_option("--levels", levels, "allowed move levels, e.g. 2 or 1,3 or all");
    cmd.add_option("--low-mode", low_mode, "level 1-3 selection: best|first");
    cmd.add_option("--high-mode", high_mode, "level 4-5 selection: best|first");
    cmd.add_option("--threads", params.threads,
                   "threads for best-improvement scans (same result)");
  }

  SearchParams resolve() {
    params.p_level1 = to_milli(p1, "p1");
    params.p_level2 = to_milli(p2, "p2");
    params.p_level3 = to_milli(p3, "p3");
    params.p_level4 = to_milli(p4, "p4");
    params.p_level5 = to_milli(p5, "p5");
    params.ratio_low = to_milli(r1, "r1");
    params.ratio_high = to_milli(r2, "r2");
    params.candidate_list = !no_candidate_list;
    params.tenure = parse_tenure(tenure, params.tenure_fixed);
    params.init = parse_init_rule(init);
    params.level_mask = parse_levels(levels);
    params.low_mode = parse_mode(low_mode);
    params.high_mode = parse_mode(high_mode);
    params.validate();
    return params;
  }
};

int cmd_generate(const std::string& profile, int pws, const std::string& cats,
                 const std::string& opts, const std::string& seeds_spec, i64 penalty,
                 const std::string& prefix, const fs::path& out_dir) {
  const auto seeds = parse_seeds(seeds_spec);
  fs::create_directories(out_dir);
  std::vector<ManifestEntry> manifest;
  for (const std::uint64_t seed : seeds) {
    GenConfig cfg;
    if (profile == "desk") cfg = desk_profile(seed);
    else if (profile == "full") cfg = full_profile(seed);
    else if (profile == "custom") {
      cfg.seed = seed;
      cfg.pw_count = pws;
      cfg.categories_per_pw.clear();
      for (std::uint64_t v : parse_seeds(cats)) cfg.categories_per_pw.push_back(static_cast<int>(v));
      cfg.options_per_category.clear();
      for (std::uint64_t v : parse_seeds(opts)) cfg.options_per_category.push_back(static_cast<int>(v));
      cfg.id_prefix = prefix.empty() ? "custom" : prefix;
    } else {
      throw InputError("unknown profile: " + profile + " (expected desk, full, or custom)");
    }
    if (!prefix.empty()) cfg.id_prefix = prefix;
    if (penalty >= 0) cfg.penalty = penalty;
    const Instance inst = generate(cfg);
    const std::string file = inst.id + ".json";
    save_instance(inst, out_dir / file);
    manifest.push_back({inst.id, seed, file});
  }
  save_manifest(manifest, out_dir / "manifest.json");
  std::cout << "wrote " << manifest.size() << " instance(s) and manifest.json to "
            << out_dir.string() << "\n";
  return kExitFeasible;
}

int cmd_solve(const fs::path& instance_path, SolveFlags& flags, const fs::path& out_path,
              const fs::path& trace_path) {
  const Instance inst = load_instance(instance_path);
  const SearchParams params = flags.resolve();
  const SearchResult result = run(inst, params);

  if (!trace_path.empty()) save_trace_csv(result.trace, trace_path);

  if (!result.best_feasible) {
    std::cout << "no feasible solution after " << result.iterations << " iterations (best f "
              << result.best_f << ")\n";
    return kExitInfeasible;
  }
  const Evaluation ev = result.best_feasible_eval;
  fs::path target = out_path;
  if (target.empty()) target = default_out_dir() / (inst.id + ".solution.json");
  save_solution(inst, *result.best_feasible, ev, target);
  std::cout << "feasible solution: revenue " << ev.revenue << " after " << result.iterations
            << " iterations, " << result.move_evaluations << " move evaluations -> "
            << target.string() << "\n";
  return kExitFeasible;
}

int cmd_oracle(const fs::path& instance_path, const fs::path& out_path, i64 budget,
               const fs::path& lp_path) {
  const Instance inst = load_instance(instance_path);
  if (!lp_path.empty()) {
    export_mip_file(inst, lp_path);
    std::cout << "wrote LP model to " << lp_path.string() << "\n";
  }
  OptimalResult result;
  try {
    result = brute_force(inst, budget);
  } catch (const OracleBudgetError& e) {
    if (!lp_path.empty()) return kExitFeasible;  // export-only mode
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracleBudget;
  }
  fs::path target = out_path;
  if (target.empty()) target = default_out_dir() / (inst.id + ".oracle.json");
  save_oracle_result(inst, result, target);
  if (!result.feasible) {
    std::cout << "instance is infeasible (" << result.nodes << " nodes) -> "
              << target.string() << "\n";
    return kExitInfeasible;
  }
  std::cout << "optimum revenue " << result.revenue << " (" << result.nodes << " nodes, "
            << result.seconds << " s) -> " << target.string() << "\n";
  return kExitFeasible;
}

int cmd_bench(const fs::path& manifest_path, const std::vector<std::string>& spec_texts,
              const fs::path& out_dir, const fs::path& oracle_dir, i64 budget, int jobs) {
  const auto instances = load_manifest_instances(manifest_path);
  std::vector<RunSpec> specs;
  for (const std::string& text : spec_texts) specs.push_back(parse_run_spec(text));
  if (specs.empty()) specs.push_back(parse_run_spec("label=tabu-1200"));

  // oracle results: load precomputed ones, solve the rest, and refuse to
  // proceed when an instance is over budget with nothing on file
  std::vector<OptimalResult> oracles(instances.size());
  std::vector<std::string> missing;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    std::optional<OptimalResult> loaded;
    if (!oracle_dir.empty())
      loaded = load_oracle_result(instances[t], oracle_dir / (instances[t].id + ".json"));
    if (loaded) {
      oracles[t] = *loaded;
      continue;
    }
    try {
      oracles[t] = brute_force(instances[t], budget);
    } catch (const OracleBudgetError&) {
      missing.push_back(instances[t].id);
    }
  }
  if (!missing.empty()) {
    std::cerr << "error: no oracle result available (over budget) for:";
    for (const std::string& id : missing) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitOracleBudget;
  }
  for (std::size_t t = 0; t < instances.size(); ++t)
    if (!oracles[t].feasible)
      throw InputError("instance " + instances[t].id + " has no feasible solution");

  std::vector<RunSummary> summaries;
  for (const RunSpec& spec : specs)
    summaries.push_back(bench_run(instances, oracles, spec, jobs));

  std::cout << format_summary_table(summaries);
  fs::path dir = out_dir.empty() ? default_out_dir() : out_dir;
  fs::create_directories(dir);
  write_summary_csv(summaries, dir / "bench_summary.csv");
  write_detail_csv(summaries, dir / "bench_detail.csv");
  std::cout << "wrote bench_summary.csv and bench_detail.csv to " << dir.string() << "\n";
  return kExitFeasible;
}

int cmd_plot(const fs::path& trace_path, const fs::path& out_prefix) {
  const auto trace = load_trace_csv(trace_path);
  fs::path prefix = out_prefix;
  if (prefix.empty()) prefix = trace_path.stem();

  // gnuplot-ready data: objective and violation per iteration
  const fs::path dat = prefix.string() + ".dat";
  {
    std::ofstream out(dat);
    if (!out) throw InputError("cannot write plot data: " + dat.string());
    out << "# iter f best_f violation feasible\n";
    for (const TraceRecord& r : trace)
      out << r.iter << ' ' << r.f << ' ' << r.best_f << ' ' << r.violation << ' '
          << (r.feasible ? 1 : 0) << '\n';
  }
  const fs::path gp = prefix.string() + ".gp";
  {
    std::ofstream out(gp);
    if (!out) throw InputError("cannot write plot script: " + gp.string());
    out << "set terminal svg size 900,600\n"
        << "set output '" << prefix.string() << ".svg'\n"
        << "set multiplot layout 2,1\n"
        << "set xlabel 'iteration'\n"
        << "set ylabel 'f'\n"
        << "plot '" << dat.string() << "' using 1:2 with lines title 'f', \\\n"
        << "     '" << dat.string() << "' using 1:3 with lines title 'best f'\n"
        << "set ylabel 'violation'\n"
        << "plot '" << dat.string() << "' using 1:4 with lines title 'violation'\n"
        << "unset multiplot\n";
  }
  std::cout << "wrote " << dat.string() << " and " << gp.string()
            << " (run: gnuplot " << gp.string() << ")\n";
  return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floor-space optimization toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate benchmark instances");
  std::string profile = "desk", cats = "3", opts = "4", seeds = "1..1", gen_prefix;
  int gen_pws = 4;
  i64 gen_penalty = -1;
  fs::path gen_out = default_out_dir();
  gen->add_option("--profile", profile, "desk | full | custom");
  gen->add_option("--pws", gen_pws, "PW count (custom profile)");
  gen->add_option("--cats", cats, "categories per PW: constant or list (custom)");
  gen->add_option("--opts", opts, "options per category: constant or list (custom)");
  gen->add_option("--seeds", seeds, "seed range A..B or comma list");
  gen->add_option("--penalty", gen_penalty, "violation penalty");
  gen->add_option("--prefix", gen_prefix, "instance id prefix");
  gen->add_option("-o,--out", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "run the tabu search on one instance");
  fs::path solve_instance, solve_out, solve_trace;
  SolveFlags flags;
  solve->add_option("instance", solve_instance, "instance file")->required();
  solve->add_option("-o,--out", solve_out, "solution file");
  solve->add_option("--trace", solve_trace, "write the iteration trace CSV here");
  flags.attach(*solve);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "solve one instance exactly");
  fs::path oracle_instance, oracle_out, oracle_lp;
  i64 oracle_budget = 50'000'000;
  oracle->add_option("instance", oracle_instance, "instance file")->required();
  oracle->add_option("-o,--out", oracle_out, "result file");
  oracle->add_option("--budget", oracle_budget, "max option-product size");
  oracle->add_option("--export-lp", oracle_lp, "also write the LP model here");

  // bench
  auto* bench = app.add_subcommand("bench", "run labelled variants over a suite");
  fs::path bench_manifest, bench_out, bench_oracle_dir;
  std::vector<std::string> bench_specs;
  i64 bench_budget = 50'000'000;
  int bench_jobs = 1;
  bench->add_option("manifest", bench_manifest, "instance manifest")->required();
  bench->add_option("--spec", bench_specs,
                    "run spec 'label=name;iters=1200;init=bal;...' (repeatable)");
  bench->add_option("-o,--out", bench_out, "report directory");
  bench->add_option("--oracle-dir", bench_oracle_dir, "precomputed oracle results");
  bench->add_option("--budget", bench_budget, "oracle budget");
  bench->add_option("--jobs", bench_jobs, "parallel runs across instances");

  // plot
  auto* plot = app.add_subcommand("plot", "emit gnuplot data/script for a trace");
  fs::path plot_trace, plot_out;
  plot->add_option("trace", plot_trace, "trace CSV from solve --trace")->required();
  plot->add_option("-o,--out", plot_out, "output prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(profile, gen_pws, cats, opts, seeds, gen_penalty, gen_prefix,
                          gen_out);
    if (solve->parsed()) return cmd_solve(solve_instance, flags, solve_out, solve_trace);
    if (oracle->parsed())
      return cmd_oracle(oracle_instance, oracle_out, oracle_budget, oracle_lp);
    if (bench->parsed())
      return cmd_bench(bench_manifest, bench_specs, bench_out, bench_oracle_dir,
                       bench_budget, bench_jobs);
    if (plot->parsed()) return cmd_plot(plot_trace, plot_out);
  } catch (const OracleBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOracleBudget;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitFeasible;
}
