#include "fso/model.hpp"

#include <algorithm>
#include <unordered_set>

namespace fso {

namespace {

i64 window_violation(i64 g, i64 lo, i64 hi) {
  i64 v = 0;
  if (g > hi) v += g - hi;
  if (g < lo) v += lo - g;
  return v;
}

}  // namespace

void Instance::finalize() {
  cat_index_.clear();
  movable_by_pw_.assign(pws.size(), {});
  total_options_ = 0;

  if (penalty < 0) throw InputError("penalty must be nonnegative");
  if (store_lower < 0 || store_lower > store_upper)
    throw InputError("store window requires 0 <= ls <= us");

  std::unordered_set<int> option_ids;
  for (int k = 0; k < num_pws(); ++k) {
    const PlanogramWorld& pw = pws[k];
    if (pw.categories.empty())
      throw InputError("pw " + std::to_string(pw.id) + ": categories must be nonempty");
    if (pw.lower < 0 || pw.lower > pw.upper)
      throw InputError("pw " + std::to_string(pw.id) + ": requires 0 <= ll <= ul");
    for (int i = 0; i < static_cast<int>(pw.categories.size()); ++i) {
      const Category& cat = pw.categories[i];
      const std::string where = "category " + std::to_string(cat.id);
      if (cat.options.empty()) throw InputError(where + ": options must be nonempty");
      if (cat.current_option < 0 ||
          cat.current_option >= static_cast<int>(cat.options.size()))
        throw InputError(where + ": current option index out of range");
      for (const PlanogramOption& opt : cat.options) {
        if (opt.length < 1)
          throw InputError(where + " option " + std::to_string(opt.id) +
                           ": length must be a positive integer");
        if (opt.revenue < 1)
          throw InputError(where + " option " + std::to_string(opt.id) +
                           ": revenue must be a positive integer");
        if (!option_ids.insert(opt.id).second)
          throw InputError("option id " + std::to_string(opt.id) +
                           " appears more than once");
        ++total_options_;
      }
      int ordinal = static_cast<int>(cat_index_.size());
      cat_index_.emplace_back(k, i);
      if (cat.options.size() >= 2) movable_by_pw_[k].push_back(ordinal);
    }
  }
}

InitRule parse_init_rule(std::string_view name) {
  if (name == "ll") return InitRule::LeastLength;
  if (name == "hr") return InitRule::HighestRevenue;
  if (name == "bal") return InitRule::Balanced;
  throw InputError("unknown initial-solution rule: " + std::string(name) +
                   " (expected ll, hr, or bal)");
}

std::string init_rule_name(InitRule rule) {
  switch (rule) {
    case InitRule::LeastLength: return "ll";
    case InitRule::HighestRevenue: return "hr";
    case InitRule::Balanced: return "bal";
  }
  return "?";
}

Evaluation evaluate(const Instance& inst, const std::vector<int>& choice) {
  if (static_cast<int>(choice.size()) != inst.num_categories())
    throw InputError("choice vector size does not match category count");
  Evaluation ev;
  i64 total = 0;
  i64 violation = 0;
  int c = 0;
  for (const PlanogramWorld& pw : inst.pws) {
    i64 g = 0;
    for (const Category& cat : pw.categories) {
      int j = choice[c++];
      if (j < 0 || j >= static_cast<int>(cat.options.size()))
        throw InputError("choice for category " + std::to_string(cat.id) +
                         " is out of range");
      g += cat.options[j].length;
      ev.revenue += cat.options[j].revenue;
    }
    total += g;
    violation += window_violation(g, pw.lower, pw.upper);
  }
  violation += window_violation(total, inst.store_lower, inst.store_upper);
  ev.violation = violation;
  ev.f = ev.revenue - inst.penalty * violation;
  return ev;
}

Evaluation evaluate(const Instance& inst, Solution& sol) {
  Evaluation ev = evaluate(inst, sol.choice);
  sol.pw_lengths.assign(inst.num_pws(), 0);
  sol.total_length = 0;
  sol.revenue = ev.revenue;
  int c = 0;
  for (int k = 0; k < inst.num_pws(); ++k) {
    i64 g = 0;
    for (const Category& cat : inst.pws[k].categories)
      g += cat.options[sol.choice[c++]].length;
    sol.pw_lengths[k] = g;
    sol.total_length += g;
  }
  return ev;
}

bool is_feasible(const Instance& inst, Solution& sol) {
  return evaluate(inst, sol).violation == 0;
}

Solution make_solution(const Instance& inst, std::vector<int> choice) {
  Solution sol;
  sol.choice = std::move(choice);
  evaluate(inst, sol);
  return sol;
}

Solution initial_solution(const Instance& inst, InitRule rule) {
  std::vector<int> choice(inst.num_categories(), 0);
  for (int c = 0; c < inst.num_categories(); ++c) {
    const auto& opts = inst.category(c).options;
    int best = 0;
    for (int j = 1; j < static_cast<int>(opts.size()); ++j) {
      bool better = false;
      switch (rule) {
        case InitRule::LeastLength:
          better = opts[j].length < opts[best].length;
          break;
        case InitRule::HighestRevenue:
          better = opts[j].revenue > opts[best].revenue;
          break;
        case InitRule::Balanced:
          // r_j / l_j > r_best / l_best, in exact integer arithmetic
          better = opts[j].revenue * opts[best].length >
                   opts[best].revenue * opts[j].length;
          break;
      }
      if (better) best = j;
    }
    choice[c] = best;
  }
  return make_solution(inst, std::move(choice));
}

i64 violation_from_caches(const Instance& inst, const Solution& sol) {
  i64 violation = 0;
  for (int k = 0; k < inst.num_pws(); ++k)
    violation += window_violation(sol.pw_lengths[k], inst.pws[k].lower, inst.pws[k].upper);
  violation += window_violation(sol.total_length, inst.store_lower, inst.store_upper);
  return violation;
}

}  // namespace fso
