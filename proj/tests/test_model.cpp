#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "fso/model.hpp"
#include "helpers.hpp"

using namespace fso;

namespace {

// test-only reference: every assignment of the 2x2 example, evaluated by
// direct arithmetic on the raw data
struct Enumerated {
  std::vector<int> choice;
  i64 revenue;
  i64 violation;
};

std::vector<Enumerated> enumerate_example(const Instance& inst) {
  std::vector<Enumerated> all;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto& ca = inst.category(0).options[a];
      const auto& cb = inst.category(1).options[b];
      const i64 len = ca.length + cb.length;
      i64 viol = 0;
      viol += std::max<i64>(0, len - inst.pws[0].upper) +
              std::max<i64>(0, inst.pws[0].lower - len);
      viol += std::max<i64>(0, len - inst.store_upper) +
              std::max<i64>(0, inst.store_lower - len);
      all.push_back({{a, b}, ca.revenue + cb.revenue, viol});
    }
  return all;
}

}  // namespace

TEST_CASE("evaluate matches exhaustive enumeration of the worked example") {
  const Instance inst = test::example_instance();
  for (const auto& ref : enumerate_example(inst)) {
    const Evaluation ev = evaluate(inst, ref.choice);
    CHECK(ev.revenue == ref.revenue);
    CHECK(ev.violation == ref.violation);
    CHECK(ev.f == ref.revenue - 20000 * ref.violation);
  }

  const Evaluation feasible = evaluate(inst, {0, 1});
  CHECK(feasible.revenue == 300);
  CHECK(feasible.violation == 0);
  CHECK(feasible.f == 300);

  const Evaluation infeasible = evaluate(inst, {0, 0});
  CHECK(infeasible.revenue == 190);
  CHECK(infeasible.violation == 10);
  CHECK(infeasible.f == -199810);
}

TEST_CASE("all-covering windows make every assignment feasible") {
  Instance inst = test::example_instance();
  inst.pws[0].lower = 0;
  inst.pws[0].upper = 50;  // sum of max lengths
  inst.store_lower = 0;
  inst.store_upper = 50;
  inst.finalize();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(evaluate(inst, {a, b}).violation == 0);
}

TEST_CASE("is_feasible mirrors zero violation") {
  const Instance inst = test::example_instance();
  Solution good = make_solution(inst, {0, 1});
  Solution bad = make_solution(inst, {0, 0});
  CHECK(is_feasible(inst, good));
  CHECK_FALSE(is_feasible(inst, bad));
}

TEST_CASE("forced single-option assignment matching its windows is feasible") {
  Instance inst;
  inst.penalty = 20000;
  inst.store_lower = inst.store_upper = 17;
  PlanogramWorld pw;
  pw.id = 0;
  pw.lower = pw.upper = 17;
  Category cat;
  cat.id = 0;
  cat.options = {{0, 17, 5}};
  pw.categories = {cat};
  inst.pws = {pw};
  inst.finalize();
  Solution sol = make_solution(inst, {0});
  CHECK(is_feasible(inst, sol));
}

TEST_CASE("initial rules pick the documented options") {
  const Instance inst = test::example_instance();
  // category A: (10,100) vs (20,180); 100/10 > 180/20 so balanced keeps 0
  CHECK(initial_solution(inst, InitRule::LeastLength).choice[0] == 0);
  CHECK(initial_solution(inst, InitRule::HighestRevenue).choice[0] == 1);
  CHECK(initial_solution(inst, InitRule::Balanced).choice[0] == 0);
}

TEST_CASE("identical options tie to the lowest index under every rule") {
  Instance inst;
  inst.store_lower = 0;
  inst.store_upper = 100;
  PlanogramWorld pw;
  pw.id = 0;
  pw.lower = 0;
  pw.upper = 100;
  Category cat;
  cat.id = 0;
  cat.options = {{0, 10, 50}, {1, 10, 50}, {2, 10, 50}};
  pw.categories = {cat};
  inst.pws = {pw};
  inst.finalize();
  for (InitRule rule :
       {InitRule::LeastLength, InitRule::HighestRevenue, InitRule::Balanced})
    CHECK(initial_solution(inst, rule).choice[0] == 0);
}

TEST_CASE("highest-revenue initial revenue bounds every assignment") {
  Rng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const Instance inst = test::random_instance(rng);
    const Solution hr = initial_solution(inst, InitRule::HighestRevenue);
    for (int probe = 0; probe < 100; ++probe) {
      const auto choice = test::random_choice(inst, rng);
      CHECK(evaluate(inst, choice).revenue <= hr.revenue);
    }
  }
}

TEST_CASE("least-length initial never violates upper limits when they cover the minima") {
  Rng rng(202);
  for (int rep = 0; rep < 50; ++rep) {
    Instance inst = test::random_instance(rng);
    // widen the uppers to the sum of per-category minimum lengths
    i64 store_min = 0;
    for (auto& pw : inst.pws) {
      i64 pw_min = 0;
      for (auto& cat : pw.categories) {
        i64 lo = cat.options[0].length;
        for (auto& opt : cat.options) lo = std::min(lo, opt.length);
        pw_min += lo;
      }
      pw.upper = std::max(pw.upper, pw_min);
      store_min += pw_min;
    }
    inst.store_upper = std::max(inst.store_upper, store_min);
    inst.finalize();

    Solution sol = initial_solution(inst, InitRule::LeastLength);
    CHECK(sol.total_length <= inst.store_upper);
    for (int k = 0; k < inst.num_pws(); ++k)
      CHECK(sol.pw_lengths[k] <= inst.pws[k].upper);
  }
}

TEST_CASE("evaluate is pure and refreshes caches") {
  Rng rng(303);
  const Instance inst = test::random_instance(rng);
  Solution sol = make_solution(inst, test::random_choice(inst, rng));
  const Evaluation first = evaluate(inst, sol);
  const Evaluation second = evaluate(inst, sol);
  CHECK(first.revenue == second.revenue);
  CHECK(first.violation == second.violation);
  CHECK(first.f == second.f);
  CHECK(sol.revenue == first.revenue);
  CHECK(sol.total_length == std::accumulate(sol.pw_lengths.begin(), sol.pw_lengths.end(),
                                            i64{0}));
  CHECK(first.f == first.revenue - inst.penalty * first.violation);
}

TEST_CASE("instance validation names the offending field") {
  Instance inst = test::example_instance();
  inst.pws[0].categories[0].options[1].length = 0;
  CHECK_THROWS_WITH_AS(inst.finalize(),
                       doctest::Contains("length must be a positive integer"), InputError);

  Instance dup = test::example_instance();
  dup.pws[0].categories[1].options[0].id = 0;  // collides with category A's
  CHECK_THROWS_WITH_AS(dup.finalize(), doctest::Contains("option id"), InputError);

  Instance window = test::example_instance();
  window.pws[0].lower = 50;
  window.pws[0].upper = 40;
  CHECK_THROWS_WITH_AS(window.finalize(), doctest::Contains("0 <= ll <= ul"), InputError);

  const Instance ok = test::example_instance();
  CHECK_THROWS_AS((void)evaluate(ok, {0, 7}), InputError);
  CHECK_THROWS_AS((void)evaluate(ok, {0}), InputError);
}
