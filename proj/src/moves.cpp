#include "fso/moves.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>

namespace fso {

namespace {

i64 window_violation(i64 g, i64 lo, i64 hi) {
  i64 v = 0;
  if (g > hi) v += g - hi;
  if (g < lo) v += lo - g;
  return v;
}

}  // namespace

i64 delta_evaluate(const Instance& inst, const Solution& sol,
                   std::span<const Change> changes) {
  if (changes.empty() || changes.size() > 4)
    throw InputError("a move carries between 1 and 4 changes");

  i64 delta_revenue = 0;
  int touched_pw[4];
  i64 pw_delta[4];
  int num_pw = 0;
  for (std::size_t a = 0; a < changes.size(); ++a) {
    const Change& ch = changes[a];
    for (std::size_t b = 0; b < a; ++b)
      if (changes[b].category == ch.category)
        throw InputError("duplicate category in move changes");
    const Category& cat = inst.category(ch.category);
    if (ch.old_option != sol.choice[ch.category])
      throw InputError("change old_option does not match the current choice");
    if (ch.new_option == ch.old_option || ch.new_option < 0 ||
        ch.new_option >= static_cast<int>(cat.options.size()))
      throw InputError("change new_option out of range");
    delta_revenue += cat.options[ch.new_option].revenue - cat.options[ch.old_option].revenue;
    const i64 dlen = cat.options[ch.new_option].length - cat.options[ch.old_option].length;
    const int k = inst.pw_of(ch.category);
    int slot = 0;
    while (slot < num_pw && touched_pw[slot] != k) ++slot;
    if (slot == num_pw) {
      touched_pw[num_pw] = k;
      pw_delta[num_pw++] = dlen;
    } else {
      pw_delta[slot] += dlen;
    }
  }

  i64 delta_violation = 0;
  i64 delta_total = 0;
  for (int s = 0; s < num_pw; ++s) {
    const PlanogramWorld& pw = inst.pws[touched_pw[s]];
    const i64 g_old = sol.pw_lengths[touched_pw[s]];
    delta_violation += window_violation(g_old + pw_delta[s], pw.lower, pw.upper) -
                       window_violation(g_old, pw.lower, pw.upper);
    delta_total += pw_delta[s];
  }
  delta_violation +=
      window_violation(sol.total_length + delta_total, inst.store_lower, inst.store_upper) -
      window_violation(sol.total_length, inst.store_lower, inst.store_upper);

  return delta_revenue - inst.penalty * delta_violation;
}

void apply(const Instance& inst, Solution& sol, std::span<const Change> changes) {
  if (changes.empty() || changes.size() > 4)
    throw InputError("a move carries between 1 and 4 changes");
  for (std::size_t a = 0; a < changes.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (changes[b].category == changes[a].category)
        throw InputError("duplicate category in move changes");
  for (const Change& ch : changes) {
    const Category& cat = inst.category(ch.category);
    if (ch.old_option != sol.choice[ch.category])
      throw InputError("change old_option does not match the current choice");
    if (ch.new_option == ch.old_option || ch.new_option < 0 ||
        ch.new_option >= static_cast<int>(cat.options.size()))
      throw InputError("change new_option out of range");
    const i64 dlen = cat.options[ch.new_option].length - cat.options[ch.old_option].length;
    sol.choice[ch.category] = ch.new_option;
    sol.pw_lengths[inst.pw_of(ch.category)] += dlen;
    sol.total_length += dlen;
    sol.revenue += cat.options[ch.new_option].revenue - cat.options[ch.old_option].revenue;
  }
}

TenureKind parse_tenure(std::string_view spec, i64& fixed_out) {
  fixed_out = 0;
  if (spec == "default") return TenureKind::Bounded;
  if (spec == "none") return TenureKind::None;
  if (spec == "midpoint") return TenureKind::Midpoint;
  if (spec.starts_with("fixed:")) {
    const std::string_view num = spec.substr(6);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), fixed_out);
    if (ec != std::errc{} || ptr != num.data() + num.size() || fixed_out < 0)
      throw InputError("bad fixed tenure: " + std::string(spec));
    return TenureKind::Fixed;
  }
  throw InputError("unknown tenure spec: " + std::string(spec) +
                   " (expected default, none, midpoint, or fixed:N)");
}

TabuMemory::TabuMemory(const Instance& inst, TenureKind kind, i64 fixed)
    : kind_(kind), inst_(&inst) {
  last_iter_.resize(inst.num_categories());
  for (int c = 0; c < inst.num_categories(); ++c)
    last_iter_[c].assign(inst.category(c).options.size(), 0);
  tl_.resize(inst.num_pws());
  th_.resize(inst.num_pws());
  for (int k = 0; k < inst.num_pws(); ++k) {
    const i64 n = static_cast<i64>(inst.pws[k].categories.size());
    const i64 lo = std::max<i64>(4, n / 2);
    const i64 span = std::min<i64>(7, n / 7);
    switch (kind_) {
      case TenureKind::Bounded:
        tl_[k] = lo;
        th_[k] = lo + span;
        break;
      case TenureKind::None:
        tl_[k] = th_[k] = 0;
        break;
      case TenureKind::Fixed:
        tl_[k] = th_[k] = fixed;
        break;
      case TenureKind::Midpoint:
        tl_[k] = th_[k] = (lo + span) / 2;
        break;
    }
  }
}

void TabuMemory::record(const Move& move, i64 iter, Rng& rng) {
  if (kind_ == TenureKind::None) return;
  for (const Change& ch : move.view()) {
    const int k = inst_->pw_of(ch.category);
    const i64 tenure = rng.uniform_int(tl_[k], th_[k]);
    last_iter_[ch.category][ch.old_option] = iter + tenure;
  }
}

namespace detail {

std::vector<MoveUnit> build_units(int level, const Instance& inst,
                                  const CandidatePools* pools) {
  std::vector<MoveUnit> units;
  const int K = inst.num_pws();
  const CandidatePools empty;
  const CandidatePools& cp = pools ? *pools : empty;

  switch (level) {
    case 1:
      // full neighborhood by design: candidate lists never apply to level 1
      for (int k = 0; k < K; ++k)
        for (int c : inst.movable_categories(k))
          units.push_back({{c, 0, 0, 0}, 1, k, -1});
      break;
    case 2:
      for (int k = 0; k < K; ++k) {
        const auto& pool = cp.pool(inst, k);
        const int n = static_cast<int>(pool.size());
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            units.push_back({{pool[a], pool[b], 0, 0}, 2, k, -1});
      }
      break;
    case 3:
      for (int k = 0; k < K; ++k) {
        const auto& pool = cp.pool(inst, k);
        const int n = static_cast<int>(pool.size());
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
              units.push_back({{pool[a], pool[b], pool[c], 0}, 3, k, -1});
      }
      break;
    case 4:
      for (int k1 = 0; k1 < K; ++k1) {
        const auto& p1 = cp.pool(inst, k1);
        if (p1.empty()) continue;
        for (int k2 = k1 + 1; k2 < K; ++k2) {
          const auto& p2 = cp.pool(inst, k2);
          for (int a : p1)
            for (int b : p2)
              units.push_back({{a, b, 0, 0}, 2, k1, k2});
        }
      }
      break;
    case 5:
      for (int k1 = 0; k1 < K; ++k1) {
        const auto& p1 = cp.pool(inst, k1);
        if (p1.size() < 2) continue;
        for (int k2 = k1 + 1; k2 < K; ++k2) {
          const auto& p2 = cp.pool(inst, k2);
          if (p2.size() < 2) continue;
          const int n1 = static_cast<int>(p1.size());
          const int n2 = static_cast<int>(p2.size());
          for (int a = 0; a < n1; ++a)
            for (int b = a + 1; b < n1; ++b)
              for (int c = 0; c < n2; ++c)
                for (int d = c + 1; d < n2; ++d)
                  units.push_back({{p1[a], p1[b], p2[c], p2[d]}, 4, k1, k2});
        }
      }
      break;
    default:
      throw InputError("move level must be 1..5");
  }
  return units;
}

}  // namespace detail

namespace {

// (delta_f desc, unit asc, sub asc): the serial scan's first-wins order.
struct Best {
  Move move;
  i64 unit = -1;
  i64 sub = -1;
  bool has = false;

  void offer(const Move& mv, i64 u, i64 s) {
    if (!has || mv.delta_f > move.delta_f ||
        (mv.delta_f == move.delta_f && (u < unit || (u == unit && s < sub)))) {
      move = mv;
      unit = u;
      sub = s;
      has = true;
    }
  }
  void merge(const Best& o) {
    if (o.has) offer(o.move, o.unit, o.sub);
  }
};

}  // namespace

namespace {

ScanOutcome scan_units_serial(const std::vector<detail::MoveUnit>& units, int level,
                              const Instance& inst, const Solution& sol,
                              const TabuMemory& memory, i64 iter, i64 current_f,
                              i64 best_f, SelectMode mode) {
  ScanOutcome out;
  Best admissible, fallback;
  bool stop = false;
  for (i64 u = 0; u < static_cast<i64>(units.size()) && !stop; ++u) {
    out.evaluated += detail::emit_unit_moves(
        level, inst, sol, units[u], [&](const Move& mv, i64 sub) {
          fallback.offer(mv, u, sub);
          const bool improves = current_f + mv.delta_f > best_f;
          if (improves || !memory.is_tabu(mv, iter)) {
            if (mode == SelectMode::FirstImprovingBest && improves) {
              admissible = Best{};
              admissible.offer(mv, u, sub);
              stop = true;
              return false;
            }
            admissible.offer(mv, u, sub);
          }
          return true;
        });
  }
  if (admissible.has) out.admissible = admissible.move;
  if (fallback.has) out.fallback = fallback.move;
  return out;
}

ScanOutcome scan_units_parallel(const std::vector<detail::MoveUnit>& units, int level,
                                const Instance& inst, const Solution& sol,
                                const TabuMemory& memory, i64 iter, i64 current_f,
                                i64 best_f, int threads) {
  const i64 n = static_cast<i64>(units.size());
  ScanOutcome out;
  Best admissible, fallback;
  i64 evaluated = 0;

#pragma omp parallel num_threads(threads)
  {
    Best local_adm, local_fb;
    i64 local_eval = 0;
#pragma omp for schedule(static) nowait
    for (i64 u = 0; u < n; ++u) {
      local_eval += detail::emit_unit_moves(
          level, inst, sol, units[u], [&](const Move& mv, i64 sub) {
            local_fb.offer(mv, u, sub);
            if (current_f + mv.delta_f > best_f || !memory.is_tabu(mv, iter))
              local_adm.offer(mv, u, sub);
            return true;
          });
    }
#pragma omp critical
    {
      admissible.merge(local_adm);
      fallback.merge(local_fb);
      evaluated += local_eval;
    }
  }

  out.evaluated = evaluated;
  if (admissible.has) out.admissible = admissible.move;
  if (fallback.has) out.fallback = fallback.move;
  return out;
}

// neighborhoods below this many units are not worth a thread team
constexpr i64 kParallelGrain = 512;

}  // namespace

ScanOutcome scan_moves_serial(int level, const Instance& inst, const Solution& sol,
                              const CandidatePools* pools, const TabuMemory& memory,
                              i64 iter, i64 current_f, i64 best_f, SelectMode mode) {
  const auto units = detail::build_units(level, inst, pools);
  return scan_units_serial(units, level, inst, sol, memory, iter, current_f, best_f,
                           mode);
}

ScanOutcome scan_moves(int level, const Instance& inst, const Solution& sol,
                       const CandidatePools* pools, const TabuMemory& memory,
                       i64 iter, i64 current_f, i64 best_f, SelectMode mode,
                       int threads) {
  // FirstImprovingBest is an ordered early-exit scan; it stays serial so the
  // evaluation count is well defined and identical across thread counts.
  if (threads > 1 && mode == SelectMode::BestImprovement) {
    const auto units = detail::build_units(level, inst, pools);
    if (static_cast<i64>(units.size()) >= kParallelGrain)
      return scan_units_parallel(units, level, inst, sol, memory, iter, current_f,
                                 best_f, threads);
    return scan_units_serial(units, level, inst, sol, memory, iter, current_f, best_f,
                             mode);
  }
  return scan_moves_serial(level, inst, sol, pools, memory, iter, current_f, best_f,
                           mode);
}

std::optional<Move> select_best(int level, const Instance& inst, const Solution& sol,
                                const CandidatePools* pools, const TabuMemory& memory,
                                i64 iter, i64 current_f, i64 best_f, SelectMode mode) {
  return scan_moves_serial(level, inst, sol, pools, memory, iter, current_f, best_f, mode)
      .admissible;
}

}  // namespace fso
