#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fso/model.hpp"
#include "fso/moves.hpp"
#include "fso/rng.hpp"

namespace fso {

/// Tabu search configuration. Probabilities and candidate-list ratios are
/// kept in thousandths so every decision is exact integer arithmetic.
struct SearchParams {
  i64 total_iters = 1200;   // iteration budget
  i64 stage1_iters = 120;   // opening stage: level 2 only
  i64 high_trigger = 20;    // stalled iterations before a high-level move
  i64 max_high_run = 2;     // cap on consecutive high-level moves
  i64 forced_low_span = 10; // low-level iterations forced after such a run
  i64 feasible_stall = -1;  // stop after this many iterations without a new
                            // feasible best; -1 = 4/5 of total_iters
  i64 stats_warmup = 100;   // iterations before candidate lists engage

  int p_level1 = 200, p_level2 = 500, p_level3 = 300;  // low-level draw, milli
  int p_level4 = 600, p_level5 = 400;                  // high-level draw, milli
  int ratio_low = 500;   // candidate-list truncation for levels 2-3, milli
  int ratio_high = 800;  // for levels 4-5, milli

  i64 penalty = -1;  // objective penalty override; -1 = use the instance's
  std::uint64_t seed = 1;
  bool candidate_list = true;
  TenureKind tenure = TenureKind::Bounded;
  i64 tenure_fixed = 0;
  InitRule init = InitRule::Balanced;
  std::uint8_t level_mask = 0b11111;  // allowed levels, bit 0 = level 1
  SelectMode low_mode = SelectMode::BestImprovement;
  SelectMode high_mode = SelectMode::FirstImprovingBest;
  int threads = 1;  // >1 parallelizes BestImprovement scans (same result)

  i64 resolved_feasible_stall() const {
    return feasible_stall >= 0 ? feasible_stall : total_iters * 4 / 5;
  }
  void validate() const;  // throws InputError
};

/// Controller bookkeeping across iterations.
struct ControllerState {
  std::uint8_t available = 0b11111;  // levels usable on this instance
  i64 since_best = 0;                // iterations since best overall f improved
  i64 since_feasible_best = 0;       // iterations since best feasible improved
  i64 consecutive_high = 0;
  i64 forced_low_remaining = 0;
  bool downgrade_pending = false;
  int last_level = 0;
};

/// Which levels have any legal move on this instance, as a bit mask.
std::uint8_t available_levels(const Instance& inst);

/// Picks the move level for iteration `iter` (1-based) and updates the
/// state's choice bookkeeping. Returns 0 when no usable level remains.
///
/// Priority: opening stage (level 2) > forced low span > high-level trigger
/// (stall >= high_trigger, capped runs) > downgrade after a new best > the
/// probabilistic low-level draw. A single-level mask bypasses the controller.
int choose_level(ControllerState& st, i64 iter, const SearchParams& p, Rng& rng);

/// Frequency statistics over executed moves: U(k, i) counts how often PW k /
/// category i appeared in a performed move. ranked(k) is the PW's categories
/// with positive counts, sorted by count descending (ties: ordinal ascending).
class CandidateStats {
 public:
  explicit CandidateStats(const Instance& inst);
  void record_move(const Move& move);
  i64 count(int category) const { return counts_[category]; }
  const std::vector<int>& ranked(int pw) const { return ranked_[pw]; }

 private:
  const Instance* inst_;
  std::vector<i64> counts_;
  std::vector<std::vector<int>> ranked_;
};

/// Builds the per-PW candidate pools for a level from the collected stats:
/// the first ceil(n_k * ratio) entries of ranked(k), never fewer than the
/// move's category arity; PWs with no usable list fall back to the full set.
/// Level 1 is never restricted.
CandidatePools build_pools(const CandidateStats& stats, int level, const Instance& inst,
                           const SearchParams& p);

struct TraceRecord {
  i64 iter = 0;
  int level = 0;
  i64 delta_f = 0;
  i64 f = 0;
  i64 violation = 0;
  i64 best_f = 0;
  bool feasible = false;
  bool new_best = false;  // new best overall f
};

struct SearchResult {
  std::optional<Solution> best_feasible;
  Evaluation best_feasible_eval{};  // meaningful when best_feasible is set
  i64 best_f = 0;                   // best overall f seen (initial included)
  std::vector<TraceRecord> trace;
  i64 iterations = 0;
  i64 move_evaluations = 0;
};

/// Runs the full tabu search on one instance. Deterministic in
/// (instance, params.seed), including across thread counts.
SearchResult run(const Instance& inst, const SearchParams& params);

// Trace CSV: header `iter,level,delta_f,f,violation,best_f,feasible,new_best`,
// one row per executed iteration.
void save_trace_csv(const std::vector<TraceRecord>& trace, const std::filesystem::path& path);
std::vector<TraceRecord> load_trace_csv(const std::filesystem::path& path);
std::vector<TraceRecord> parse_trace_csv(const std::string& text, const std::string& origin);

/// Post-hoc controller-compliance check of a default-controller trace:
///   (a) opening-stage records are all level 2;
///   (b) no more than max_high_run consecutive high-level records;
///   (c) each maximal high-level run of full length is followed by the forced
///       low-level span;
///   (d) a high-level record only follows high_trigger stall records or an
///       ongoing high-level run;
///   (e) records are contiguous iterations 1..n with n <= total_iters;
///   (f) an early-terminated trace has no feasible new-best in its tail;
/// plus best_f coherence (nondecreasing, consistent with f and new_best) and
/// the downgrade rule after each new best. Returns human-readable violations.
std::vector<std::string> check_trace(const std::vector<TraceRecord>& trace,
                                     const SearchParams& params);

}  // namespace fso
