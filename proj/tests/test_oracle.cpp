#include <sstream>

#include "doctest.h"
#include "fso/generator.hpp"
#include "fso/oracle.hpp"
#include "helpers.hpp"

using namespace fso;

namespace {

// test-only reference: plain unpruned product enumeration
OptimalResult naive_enumerate(const Instance& inst) {
  OptimalResult result;
  std::vector<int> choice(inst.num_categories(), 0);
  while (true) {
    const Evaluation ev = evaluate(inst, choice);
    if (ev.violation == 0 && (!result.feasible || ev.revenue > result.revenue)) {
      result.feasible = true;
      result.revenue = ev.revenue;
      result.choice = choice;
    }
    int c = inst.num_categories() - 1;
    while (c >= 0) {
      if (++choice[c] < static_cast<int>(inst.category(c).options.size())) break;
      choice[c] = 0;
      --c;
    }
    if (c < 0) break;
  }
  return result;
}

}  // namespace

TEST_CASE("the worked example optimum is revenue 300") {
  const Instance inst = test::example_instance();
  const OptimalResult opt = brute_force(inst);
  REQUIRE(opt.feasible);
  CHECK(opt.revenue == 300);
  CHECK(opt.choice == std::vector<int>{0, 1});
}

TEST_CASE("windows excluding every assignment report infeasible") {
  Instance inst = test::example_instance();
  inst.pws[0].lower = 21;
  inst.pws[0].upper = 29;  // reachable lengths are 20, 30, 40, 50
  inst.store_lower = 0;
  inst.store_upper = 1000;
  inst.finalize();
  Instance shifted = inst;
  shifted.pws[0].lower = 22;
  shifted.pws[0].upper = 28;
  shifted.finalize();
  const OptimalResult opt = brute_force(shifted);
  CHECK_FALSE(opt.feasible);
}

TEST_CASE("pruned enumeration agrees with the naive product scan") {
  Rng rng(71);
  int nontrivial = 0;
  for (int rep = 0; rep < 120; ++rep) {
    const Instance inst = test::random_instance(rng, 3, 3, 4);
    const OptimalResult pruned = brute_force(inst);
    const OptimalResult naive = naive_enumerate(inst);
    REQUIRE(pruned.feasible == naive.feasible);
    if (pruned.feasible) {
      CHECK(pruned.revenue == naive.revenue);
      CHECK(pruned.choice == naive.choice);  // lexicographic tie-break
      ++nontrivial;
    }
  }
  CHECK(nontrivial > 20);
}

TEST_CASE("revenue upper bound dominates the optimum") {
  const Instance example = test::example_instance();
  CHECK(revenue_upper_bound(example) == 380);

  Rng rng(72);
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = test::random_instance(rng, 3, 3, 4);
    const OptimalResult opt = brute_force(inst);
    if (opt.feasible) CHECK(opt.revenue <= revenue_upper_bound(inst));
  }
}

TEST_CASE("single-option categories force the bound to the unique revenue") {
  Instance inst;
  inst.store_lower = 0;
  inst.store_upper = 100;
  PlanogramWorld pw;
  pw.id = 0;
  pw.lower = 0;
  pw.upper = 100;
  Category a;
  a.id = 0;
  a.options = {{0, 10, 42}};
  Category b;
  b.id = 1;
  b.options = {{1, 5, 13}};
  pw.categories = {a, b};
  inst.pws = {pw};
  inst.finalize();
  const OptimalResult opt = brute_force(inst);
  REQUIRE(opt.feasible);
  CHECK(opt.revenue == 55);
  CHECK(revenue_upper_bound(inst) == 55);
}

TEST_CASE("budget gate rejects oversized instances explicitly") {
  const Instance inst = generate(desk_profile(1));  // 4^12 combinations
  CHECK_THROWS_AS((void)brute_force(inst, 1000), OracleBudgetError);
  const OptimalResult opt = brute_force(inst);  // default budget admits it
  CHECK(opt.feasible);
}

TEST_CASE("LP export lists the documented rows for the example") {
  const Instance inst = test::example_instance();
  std::ostringstream out;
  export_mip(inst, out);
  const std::string lp = out.str();

  auto count = [&](const std::string& needle) {
    std::size_t hits = 0, pos = 0;
    while ((pos = lp.find(needle, pos)) != std::string::npos) {
      ++hits;
      pos += needle.size();
    }
    return hits;
  };
  CHECK(count("assign_") == 2);
  CHECK(count("pw_0_lo:") == 1);
  CHECK(count("pw_0_hi:") == 1);
  CHECK(count("store_lo:") == 1);
  CHECK(count("store_hi:") == 1);
  CHECK(count("x_0_0") >= 3);  // objective, assignment, lengths, binaries
  CHECK(lp.find("Maximize") != std::string::npos);
  CHECK(lp.find("Binaries") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
  // 4 binaries
  const std::size_t binaries = lp.find("Binaries");
  CHECK(count("x_") > 0);
  std::size_t vars = 0, pos = binaries;
  while ((pos = lp.find("x_", pos)) != std::string::npos) {
    ++vars;
    pos += 2;
  }
  CHECK(vars == 4);
}

TEST_CASE("oracle results round-trip through files") {
  const Instance inst = generate(desk_profile(2));
  const OptimalResult opt = brute_force(inst);
  const auto path = std::filesystem::temp_directory_path() / "fso_oracle_test.json";
  save_oracle_result(inst, opt, path);
  const auto loaded = load_oracle_result(inst, path);
  REQUIRE(loaded.has_value());
  CHECK(loaded->feasible == opt.feasible);
  CHECK(loaded->revenue == opt.revenue);
  CHECK(loaded->choice == opt.choice);
  std::filesystem::remove(path);
  CHECK_FALSE(load_oracle_result(inst, path).has_value());
}
