#pragma once

#include <vector>

#include "fso/model.hpp"
#include "fso/rng.hpp"

namespace fso::test {

// Two categories in one PW, windows [25, 45] at both levels:
//   A: (L10, R100), (L20, R180)     B: (L10, R90), (L30, R200)
// The four assignments evaluate to
//   (0,0): len 20, revenue 190, violation 10 (PW shortfall 5 + store 5)
//   (0,1): len 40, revenue 300, feasible
//   (1,0): len 30, revenue 270, feasible
//   (1,1): len 50, revenue 380, violation 10
// so the optimum is revenue 300 at (0,1).
inline Instance example_instance(i64 penalty = 20000) {
  Instance inst;
  inst.id = "example";
  inst.penalty = penalty;
  inst.store_lower = 25;
  inst.store_upper = 45;
  PlanogramWorld pw;
  pw.id = 0;
  pw.lower = 25;
  pw.upper = 45;
  Category a;
  a.id = 0;
  a.options = {{0, 10, 100}, {1, 20, 180}};
  Category b;
  b.id = 1;
  b.options = {{2, 10, 90}, {3, 30, 200}};
  pw.categories = {a, b};
  inst.pws = {pw};
  inst.finalize();
  return inst;
}

// Random small instance for property tests: modest lengths and windows that
// leave both feasible and infeasible assignments reachable.
inline Instance random_instance(Rng& rng, int max_pws = 4, int max_cats = 4,
                                int max_opts = 4) {
  Instance inst;
  inst.id = "random";
  inst.penalty = 20000;
  int option_id = 0;
  int cat_id = 0;
  const int num_pws = static_cast<int>(rng.uniform_int(1, max_pws));
  i64 store_min = 0, store_max = 0;
  for (int k = 0; k < num_pws; ++k) {
    PlanogramWorld pw;
    pw.id = k;
    const int ncats = static_cast<int>(rng.uniform_int(1, max_cats));
    i64 pw_min = 0, pw_max = 0;
    for (int i = 0; i < ncats; ++i) {
      Category cat;
      cat.id = cat_id++;
      const int nopts = static_cast<int>(rng.uniform_int(2, max_opts));
      i64 lo = 0, hi = 0;
      for (int j = 0; j < nopts; ++j) {
        PlanogramOption opt;
        opt.id = option_id++;
        opt.length = rng.uniform_int(1, 60);
        opt.revenue = rng.uniform_int(1, 500);
        cat.options.push_back(opt);
        lo = j == 0 ? opt.length : std::min(lo, opt.length);
        hi = std::max(hi, opt.length);
      }
      pw_min += lo;
      pw_max += hi;
      pw.categories.push_back(std::move(cat));
    }
    // a window somewhere inside the reachable band, possibly excluding parts
    pw.lower = rng.uniform_int(pw_min, (pw_min + pw_max) / 2);
    pw.upper = rng.uniform_int(pw.lower, pw_max);
    store_min += pw_min;
    store_max += pw_max;
    inst.pws.push_back(std::move(pw));
  }
  inst.store_lower = rng.uniform_int(store_min, (store_min + store_max) / 2);
  inst.store_upper = rng.uniform_int(inst.store_lower, store_max);
  inst.finalize();
  return inst;
}

inline std::vector<int> random_choice(const Instance& inst, Rng& rng) {
  std::vector<int> choice(inst.num_categories());
  for (int c = 0; c < inst.num_categories(); ++c)
    choice[c] = static_cast<int>(
        rng.uniform_int(0, static_cast<i64>(inst.category(c).options.size()) - 1));
  return choice;
}

}  // namespace fso::test
