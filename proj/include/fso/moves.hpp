#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "fso/model.hpp"
#include "fso/rng.hpp"

namespace fso {

/// One reassignment: category moves from its current option to a new one.
struct Change {
  int category = 0;    // category ordinal
  int old_option = 0;  // must match the solution's current choice
  int new_option = 0;  // != old_option

  bool operator==(const Change&) const = default;
};

/// A neighborhood move: 1..4 changes depending on the level.
///   level 1: one category, one PW          level 4: one category in each of 2 PWs
///   level 2: two categories, same PW       level 5: two categories in each of 2 PWs
///   level 3: three categories, same PW
struct Move {
  int level = 0;
  int num_changes = 0;
  std::array<Change, 4> changes{};
  std::array<int, 2> pws{-1, -1};  // touched PWs (second is -1 for levels 1-3)
  i64 delta_f = 0;

  std::span<const Change> view() const {
    return {changes.data(), static_cast<std::size_t>(num_changes)};
  }
};

/// Exact objective delta of applying `changes` to `sol`, computed from the
/// cached PW lengths: new-minus-old violation terms over the touched PWs and
/// the store total, plus the revenue difference. Matches a from-scratch
/// re-evaluation in exact integer arithmetic for every move level.
i64 delta_evaluate(const Instance& inst, const Solution& sol, std::span<const Change> changes);

/// Applies the changes, updating choice and all caches incrementally.
void apply(const Instance& inst, Solution& sol, std::span<const Change> changes);

/// Per-PW category restrictions used by the learning-based candidate lists.
/// A disengaged entry means the full movable set of that PW.
struct CandidatePools {
  std::vector<std::optional<std::vector<int>>> categories;  // ordinals, ascending

  const std::vector<int>& pool(const Instance& inst, int pw) const {
    if (pw < static_cast<int>(categories.size()) && categories[pw])
      return *categories[pw];
    return inst.movable_categories(pw);
  }
};

enum class TenureKind {
  Bounded,   // TL = max(4, |I_k|/2), TH = TL + min(7, |I_k|/7), drawn uniformly
  None,      // tabu memory disabled
  Fixed,     // TL = TH = fixed value
  Midpoint,  // TL = TH = (max(4, |I_k|/2) + min(7, |I_k|/7)) / 2
};

TenureKind parse_tenure(std::string_view spec, i64& fixed_out);  // "default|none|midpoint|fixed:N"

/// Recency memory T(category, option): after a move assigns a category away
/// from an option, re-assigning it back stays forbidden through iteration
/// T(i, j). Tenures are drawn uniformly from per-PW bounds.
class TabuMemory {
 public:
  explicit TabuMemory(const Instance& inst, TenureKind kind = TenureKind::Bounded,
                      i64 fixed = 0);

  /// A move is tabu when any of its changes re-enters a still-tabu assignment.
  bool is_tabu(const Move& move, i64 iter) const {
    if (kind_ == TenureKind::None) return false;
    for (const Change& ch : move.view())
      if (iter <= last_iter_[ch.category][ch.new_option]) return true;
    return false;
  }

  /// Marks each vacated (category, old option) pair tabu until
  /// iter + uniform(TL, TH) of the category's PW; one draw per change.
  void record(const Move& move, i64 iter, Rng& rng);

  i64 tenure_low(int pw) const { return tl_[pw]; }
  i64 tenure_high(int pw) const { return th_[pw]; }
  i64 expiry(int category, int option) const { return last_iter_[category][option]; }

 private:
  TenureKind kind_;
  const Instance* inst_;
  std::vector<std::vector<i64>> last_iter_;  // [category][option], 0 = never tabu
  std::vector<i64> tl_, th_;                 // per PW
};

enum class SelectMode { BestImprovement, FirstImprovingBest };

namespace detail {

/// The category tuple of one move; the option combinations are enumerated
/// inside the unit. Units are independent, which is what the parallel scan
/// splits across threads.
struct MoveUnit {
  std::array<int, 4> cats{};
  int num_cats = 0;
  int pw_a = -1;
  int pw_b = -1;
};

std::vector<MoveUnit> build_units(int level, const Instance& inst,
                                  const CandidatePools* pools);

// fn(const Move&, sub_index) -> bool; returning false stops the unit early.
// Returns the number of moves emitted.
template <class Fn>
i64 emit_unit_moves(int level, const Instance& inst, const Solution& sol,
                    const MoveUnit& unit, Fn&& fn) {
  Move mv;
  mv.level = level;
  mv.num_changes = unit.num_cats;
  mv.pws = {unit.pw_a, unit.pw_b};
  std::array<const Category*, 4> cats{};
  for (int t = 0; t < unit.num_cats; ++t) {
    cats[t] = &inst.category(unit.cats[t]);
    mv.changes[t].category = unit.cats[t];
    mv.changes[t].old_option = sol.choice[unit.cats[t]];
  }
  i64 sub = 0;
  bool stop = false;
  // nested ascending option loops, skipping each category's current option
  auto emit = [&]() {
    mv.delta_f = delta_evaluate(inst, sol, mv.view());
    if (!fn(static_cast<const Move&>(mv), sub)) stop = true;
    ++sub;
  };
  auto loop = [&](auto&& self, int t) -> void {
    if (stop) return;
    if (t == unit.num_cats) {
      emit();
      return;
    }
    const auto& opts = cats[t]->options;
    for (int j = 0; j < static_cast<int>(opts.size()) && !stop; ++j) {
      if (j == mv.changes[t].old_option) continue;
      mv.changes[t].new_option = j;
      self(self, t + 1);
    }
  };
  loop(loop, 0);
  return sub;
}

}  // namespace detail

/// Enumerates every legal move of the level in deterministic order (PW index,
/// then category index, then option index ascending), each carrying its exact
/// delta_f. Categories are restricted to the candidate pools when given.
/// Levels 4-5 on a single-PW instance yield nothing. fn(const Move&) -> bool;
/// returning false stops the enumeration. Returns the number of moves emitted.
template <class Fn>
i64 for_each_move(int level, const Instance& inst, const Solution& sol,
                  const CandidatePools* pools, Fn&& fn) {
  const auto units = detail::build_units(level, inst, pools);
  i64 total = 0;
  for (const auto& unit : units) {
    bool keep_going = true;
    total += detail::emit_unit_moves(level, inst, sol, unit,
                                     [&](const Move& mv, i64) {
                                       keep_going = fn(mv);
                                       return keep_going;
                                     });
    if (!keep_going) break;
  }
  return total;
}

/// Result of scanning one neighborhood.
struct ScanOutcome {
  std::optional<Move> admissible;  // selected move per the mode, if any
  std::optional<Move> fallback;    // best move ignoring tabu (all-tabu escape)
  i64 evaluated = 0;               // moves delta-evaluated
};

/// Scans a neighborhood and selects a move.
///
/// BestImprovement: the admissible move with maximal delta_f, where a move is
/// admissible when it is not tabu or it aspirates (current_f + delta_f >
/// best_f). Ties go to enumeration order. FirstImprovingBest: the first
/// enumerated move with current_f + delta_f > best_f (such a move always
/// aspirates), falling back to BestImprovement over the full neighborhood
/// when none improves.
///
/// `threads` > 1 parallelizes the BestImprovement scan across category tuples
/// with a deterministic reduction; the selected move and evaluation count are
/// identical to the serial scan's. Small neighborhoods scan serially even
/// then (not worth a thread team), and FirstImprovingBest always does
/// (ordered early exit). scan_moves_serial is the reference implementation.
ScanOutcome scan_moves(int level, const Instance& inst, const Solution& sol,
                       const CandidatePools* pools, const TabuMemory& memory,
                       i64 iter, i64 current_f, i64 best_f, SelectMode mode,
                       int threads);

ScanOutcome scan_moves_serial(int level, const Instance& inst, const Solution& sol,
                              const CandidatePools* pools, const TabuMemory& memory,
                              i64 iter, i64 current_f, i64 best_f, SelectMode mode);

/// Selection per the search contract: nothing only when the neighborhood is
/// empty or every move is tabu and none aspirates (the caller then escapes
/// with ScanOutcome::fallback).
std::optional<Move> select_best(int level, const Instance& inst, const Solution& sol,
                                const CandidatePools* pools, const TabuMemory& memory,
                                i64 iter, i64 current_f, i64 best_f, SelectMode mode);

}  // namespace fso
