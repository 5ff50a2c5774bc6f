#include "fso/search.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

namespace fso {

namespace {

constexpr std::uint8_t kLowMask = 0b00111;
constexpr std::uint8_t kHighMask = 0b11000;

bool has_level(std::uint8_t mask, int level) { return mask & (1u << (level - 1)); }

i64 ceil_milli(i64 n, i64 milli) { return (n * milli + 999) / 1000; }

}  // namespace

void SearchParams::validate() const {
  if (total_iters < 0) throw InputError("total_iters must be nonnegative");
  if (stage1_iters < 0 || stage1_iters > total_iters)
    throw InputError("stage1_iters must lie in [0, total_iters]");
  if (high_trigger < 1) throw InputError("high_trigger must be positive");
  if (max_high_run < 1) throw InputError("max_high_run must be positive");
  if (forced_low_span < 0) throw InputError("forced_low_span must be nonnegative");
  if (stats_warmup < 0) throw InputError("stats_warmup must be nonnegative");
  if (p_level1 < 0 || p_level2 < 0 || p_level3 < 0 ||
      p_level1 + p_level2 + p_level3 != 1000)
    throw InputError("low-level probabilities must be nonnegative and sum to 1");
  if (p_level4 < 0 || p_level5 < 0 || p_level4 + p_level5 != 1000)
    throw InputError("high-level probabilities must be nonnegative and sum to 1");
  if (ratio_low <= 0 || ratio_low > 1000 || ratio_high <= 0 || ratio_high > 1000)
    throw InputError("candidate ratios must lie in (0, 1]");
  if (penalty < -1) throw InputError("penalty must be nonnegative (or -1 for the instance's)");
  if (tenure == TenureKind::Fixed && tenure_fixed < 0)
    throw InputError("fixed tenure must be nonnegative");
  if ((level_mask & 0b11111) == 0) throw InputError("level mask selects no levels");
  if (threads < 1) throw InputError("threads must be positive");
}

std::uint8_t available_levels(const Instance& inst) {
  int movable = 0;
  int pws_with_1 = 0, pws_with_2 = 0, pws_with_3 = 0;
  for (int k = 0; k < inst.num_pws(); ++k) {
    const int m = static_cast<int>(inst.movable_categories(k).size());
    movable += m;
    if (m >= 1) ++pws_with_1;
    if (m >= 2) ++pws_with_2;
    if (m >= 3) ++pws_with_3;
  }
  std::uint8_t mask = 0;
  if (movable >= 1) mask |= 1u << 0;
  if (pws_with_2 >= 1) mask |= 1u << 1;
  if (pws_with_3 >= 1) mask |= 1u << 2;
  if (pws_with_1 >= 2) mask |= 1u << 3;
  if (pws_with_2 >= 2) mask |= 1u << 4;
  return mask;
}

namespace {

// Weighted draw over the levels of `mask`, weights in thousandths.
// A singleton set consumes no randomness.
int draw_level(std::uint8_t mask, const int weights[5], const int levels[],
               int num_levels, Rng& rng) {
  int cand[5];
  i64 w[5];
  int n = 0;
  i64 total = 0;
  for (int t = 0; t < num_levels; ++t) {
    const int lv = levels[t];
    if (!has_level(mask, lv)) continue;
    cand[n] = lv;
    w[n] = weights[lv - 1];
    total += w[n];
    ++n;
  }
  if (n == 0) return 0;
  if (n == 1 || total == 0) return cand[0];
  i64 u = rng.uniform_int(0, total - 1);
  for (int t = 0; t < n; ++t) {
    if (u < w[t]) return cand[t];
    u -= w[t];
  }
  return cand[n - 1];
}

}  // namespace

int choose_level(ControllerState& st, i64 iter, const SearchParams& p, Rng& rng) {
  const std::uint8_t avail = st.available & p.level_mask;
  if (avail == 0) return 0;

  // single-neighborhood runs bypass the controller entirely
  if (std::popcount(p.level_mask) == 1) {
    st.downgrade_pending = false;
    const int lv = std::countr_zero(p.level_mask) + 1;
    return has_level(avail, lv) ? lv : 0;
  }

  const int weights[5] = {p.p_level1, p.p_level2, p.p_level3, p.p_level4, p.p_level5};
  const int low_levels[] = {1, 2, 3};
  const int high_levels[] = {4, 5};
  auto low_draw = [&] { return draw_level(avail & kLowMask, weights, low_levels, 3, rng); };

  int level = 0;
  if (iter <= p.stage1_iters) {
    level = has_level(avail, 2) ? 2 : low_draw();
  } else if (st.forced_low_remaining > 0 && (avail & kLowMask)) {
    --st.forced_low_remaining;
    level = low_draw();
  } else if (st.since_best >= p.high_trigger && st.consecutive_high < p.max_high_run &&
             (avail & kHighMask)) {
    level = draw_level(avail & kHighMask, weights, high_levels, 2, rng);
  } else if (st.downgrade_pending) {
    if (st.last_level >= 4) {
      level = low_draw();
    } else {
      const int want = std::max(1, st.last_level - 1);
      level = has_level(avail, want) ? want : low_draw();
    }
  } else {
    level = low_draw();
  }
  if (level == 0) level = low_draw();

  st.downgrade_pending = false;
  if (level >= 4) {
    ++st.consecutive_high;
    if (st.consecutive_high >= p.max_high_run)
      st.forced_low_remaining = p.forced_low_span;
  } else {
    st.consecutive_high = 0;
  }
  return level;
}

CandidateStats::CandidateStats(const Instance& inst)
    : inst_(&inst), counts_(inst.num_categories(), 0), ranked_(inst.num_pws()) {}

void CandidateStats::record_move(const Move& move) {
  for (const Change& ch : move.view()) {
    ++counts_[ch.category];
    const int k = inst_->pw_of(ch.category);
    auto& list = ranked_[k];
    if (std::find(list.begin(), list.end(), ch.category) == list.end())
      list.push_back(ch.category);
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
      if (counts_[a] != counts_[b]) return counts_[a] > counts_[b];
      return a < b;
    });
  }
}

CandidatePools build_pools(const CandidateStats& stats, int level, const Instance& inst,
                           const SearchParams& p) {
  CandidatePools pools;
  pools.categories.assign(inst.num_pws(), std::nullopt);
  if (level < 2) return pools;

  // a pool must seat every category the level picks from one PW
  const int need = level == 3 ? 3 : (level == 4 ? 1 : 2);
  const i64 ratio = level <= 3 ? p.ratio_low : p.ratio_high;
  for (int k = 0; k < inst.num_pws(); ++k) {
    const auto& ranked = stats.ranked(k);
    const i64 n = static_cast<i64>(ranked.size());
    if (n == 0 || n < need) continue;  // full neighborhood for this PW
    const i64 take = std::max<i64>(ceil_milli(n, ratio), need);
    std::vector<int> pool(ranked.begin(), ranked.begin() + std::min(take, n));
    std::sort(pool.begin(), pool.end());
    pools.categories[k] = std::move(pool);
  }
  return pools;
}

SearchResult run(const Instance& inst, const SearchParams& params) {
  SearchParams p = params;
  p.validate();
  if (p.penalty >= 0 && p.penalty != inst.penalty) {
    Instance patched = inst;
    patched.penalty = p.penalty;
    patched.finalize();
    p.penalty = -1;
    return run(patched, p);
  }
  const i64 stall_limit = p.resolved_feasible_stall();

  Rng rng(p.seed);
  Solution sol = initial_solution(inst, p.init);
  Evaluation ev = evaluate(inst, sol);

  SearchResult result;
  i64 current_f = ev.f;
  i64 best_f = ev.f;
  i64 best_feasible_f = 0;
  bool have_feasible = ev.violation == 0;
  if (have_feasible) {
    best_feasible_f = ev.f;
    result.best_feasible = sol;
    result.best_feasible_eval = ev;
  }

  TabuMemory memory(inst, p.tenure, p.tenure_fixed);
  CandidateStats stats(inst);
  ControllerState st;
  st.available = available_levels(inst);
  result.trace.reserve(static_cast<std::size_t>(std::min<i64>(p.total_iters, 1 << 20)));

  for (i64 iter = 1; iter <= p.total_iters; ++iter) {
    const int level = choose_level(st, iter, p, rng);
    if (level == 0) break;

    CandidatePools pools;
    const CandidatePools* pp = nullptr;
    if (p.candidate_list && iter > p.stats_warmup && level >= 2) {
      pools = build_pools(stats, level, inst, p);
      pp = &pools;
    }

    const SelectMode mode = level >= 4 ? p.high_mode : p.low_mode;
    ScanOutcome scan = scan_moves(level, inst, sol, pp, memory, iter, current_f,
                                  best_f, mode, p.threads);
    result.move_evaluations += scan.evaluated;
    const Move* mv = scan.admissible ? &*scan.admissible
                                     : (scan.fallback ? &*scan.fallback : nullptr);
    if (mv == nullptr) break;  // no legal move at any usable level

    memory.record(*mv, iter, rng);
    apply(inst, sol, mv->view());
    current_f += mv->delta_f;
    const i64 violation = violation_from_caches(inst, sol);
    const bool feasible = violation == 0;

    const bool new_best = current_f > best_f;
    if (new_best) {
      best_f = current_f;
      st.since_best = 0;
      if (iter > p.stage1_iters) st.downgrade_pending = true;
    } else {
      ++st.since_best;
    }

    if (feasible && (!have_feasible || current_f > best_feasible_f)) {
      have_feasible = true;
      best_feasible_f = current_f;
      result.best_feasible = sol;
      result.best_feasible_eval = {sol.revenue, 0, current_f};
      st.since_feasible_best = 0;
    } else {
      ++st.since_feasible_best;
    }

    stats.record_move(*mv);
    result.trace.push_back(
        {iter, level, mv->delta_f, current_f, violation, best_f, feasible, new_best});
    st.last_level = level;

    if (st.since_feasible_best > stall_limit) break;
  }

  result.best_f = best_f;
  result.iterations = static_cast<i64>(result.trace.size());
  return result;
}

void save_trace_csv(const std::vector<TraceRecord>& trace,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file: " + path.string());
  out << "iter,level,delta_f,f,violation,best_f,feasible,new_best\n";
  for (const TraceRecord& r : trace)
    out << r.iter << ',' << r.level << ',' << r.delta_f << ',' << r.f << ','
        << r.violation << ',' << r.best_f << ',' << (r.feasible ? 1 : 0) << ','
        << (r.new_best ? 1 : 0) << '\n';
}

namespace {

i64 parse_i64_field(const std::string& field, const std::string& origin, int line) {
  i64 value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw InputError(origin + ":" + std::to_string(line) + ": bad numeric field '" +
                     field + "'");
  return value;
}

}  // namespace

std::vector<TraceRecord> parse_trace_csv(const std::string& text,
                                         const std::string& origin) {
  std::vector<TraceRecord> trace;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "iter,level,delta_f,f,violation,best_f,feasible,new_best")
        throw InputError(origin + ":1: unexpected trace header '" + line + "'");
      continue;
    }
    std::array<std::string, 8> fields;
    std::size_t start = 0;
    for (int t = 0; t < 8; ++t) {
      const std::size_t comma = line.find(',', start);
      if (t < 7) {
        if (comma == std::string::npos)
          throw InputError(origin + ":" + std::to_string(lineno) +
                           ": expected 8 comma-separated fields");
        fields[t] = line.substr(start, comma - start);
        start = comma + 1;
      } else {
        if (comma != std::string::npos)
          throw InputError(origin + ":" + std::to_string(lineno) +
                           ": expected 8 comma-separated fields");
        fields[t] = line.substr(start);
      }
    }
    TraceRecord r;
    r.iter = parse_i64_field(fields[0], origin, lineno);
    r.level = static_cast<int>(parse_i64_field(fields[1], origin, lineno));
    r.delta_f = parse_i64_field(fields[2], origin, lineno);
    r.f = parse_i64_field(fields[3], origin, lineno);
    r.violation = parse_i64_field(fields[4], origin, lineno);
    r.best_f = parse_i64_field(fields[5], origin, lineno);
    r.feasible = parse_i64_field(fields[6], origin, lineno) != 0;
    r.new_best = parse_i64_field(fields[7], origin, lineno) != 0;
    trace.push_back(r);
  }
  return trace;
}

std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read trace file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv(buf.str(), path.filename().string());
}

std::vector<std::string> check_trace(const std::vector<TraceRecord>& trace,
                                     const SearchParams& params) {
  std::vector<std::string> bad;
  auto complain = [&](i64 iter, const std::string& what) {
    bad.push_back("iter " + std::to_string(iter) + ": " + what);
  };
  const i64 n = static_cast<i64>(trace.size());
  const i64 t6 = params.resolved_feasible_stall();

  // (e) contiguous 1..n, n <= budget
  if (n > params.total_iters) complain(n, "more records than the iteration budget");
  for (i64 t = 0; t < n; ++t)
    if (trace[t].iter != t + 1) {
      complain(trace[t].iter, "records are not contiguous from 1");
      break;
    }

  auto is_high = [&](i64 t) { return trace[t].level >= 4; };

  // forced low spans: positions right after each maximal full-length high run
  std::vector<bool> forced_low(n, false);
  i64 run = 0;
  for (i64 t = 0; t < n; ++t) {
    run = is_high(t) ? run + 1 : 0;
    if (run == params.max_high_run && (t + 1 >= n || !is_high(t + 1))) {
      for (i64 s = t + 1; s <= std::min(n - 1, t + params.forced_low_span); ++s)
        forced_low[s] = true;
    }
  }

  for (i64 t = 0; t < n; ++t) {
    const TraceRecord& r = trace[t];
    // (a)
    if (r.iter <= params.stage1_iters && r.level != 2)
      complain(r.iter, "opening-stage record is not level 2");
    // (c)
    if (forced_low[t] && r.level >= 4)
      complain(r.iter, "high-level record inside a forced low-level span");
    // (d)
    if (is_high(t) && !(t > 0 && is_high(t - 1))) {
      if (t < params.high_trigger) {
        complain(r.iter, "high-level record before a full stall window");
      } else {
        for (i64 s = t - params.high_trigger; s < t; ++s)
          if (trace[s].new_best) {
            complain(r.iter, "high-level record despite a recent new best");
            break;
          }
      }
    }
    // best_f coherence
    if (t > 0) {
      if (r.best_f < trace[t - 1].best_f) complain(r.iter, "best_f decreased");
      if (r.new_best != (r.best_f > trace[t - 1].best_f))
        complain(r.iter, "new_best flag inconsistent with best_f");
    }
    if (r.best_f < r.f) complain(r.iter, "best_f below the current f");
    if (r.new_best && r.best_f != r.f)
      complain(r.iter, "new-best record whose best_f differs from f");
  }

  // (b)
  run = 0;
  for (i64 t = 0; t < n; ++t) {
    run = is_high(t) ? run + 1 : 0;
    if (run > params.max_high_run) {
      complain(trace[t].iter, "more than max_high_run consecutive high-level records");
      break;
    }
  }

  // downgrade after a new best (outside forced spans)
  for (i64 t = 0; t + 1 < n; ++t) {
    if (!trace[t].new_best || trace[t].iter <= params.stage1_iters) continue;
    if (forced_low[t + 1]) continue;
    if (trace[t + 1].level > std::max(1, trace[t].level - 1))
      complain(trace[t + 1].iter, "missing downgrade after a new best");
  }

  // (f) early termination implies a stalled feasible-best tail
  if (n > 0 && n < params.total_iters) {
    for (i64 t = std::max<i64>(0, n - t6); t < n; ++t)
      if (trace[t].feasible && trace[t].new_best) {
        complain(trace[t].iter, "feasible new best inside the terminating stall tail");
        break;
      }
  }
  return bad;
}

}  // namespace fso
