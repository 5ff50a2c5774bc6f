#include <filesystem>
#include <set>

#include "doctest.h"
#include "fso/generator.hpp"
#include "fso/io.hpp"
#include "fso/oracle.hpp"
#include "fso/search.hpp"
#include "helpers.hpp"

using namespace fso;

namespace {

// one PW with `n` two-option categories
Instance wide_instance(int n) {
  Instance inst;
  inst.store_lower = 0;
  inst.store_upper = 1'000'000;
  PlanogramWorld pw;
  pw.id = 0;
  pw.lower = 0;
  pw.upper = 1'000'000;
  for (int i = 0; i < n; ++i) {
    Category cat;
    cat.id = i;
    cat.options = {{2 * i, 3 + i, 5}, {2 * i + 1, 4 + i, 6}};
    pw.categories.push_back(cat);
  }
  inst.pws = {pw};
  inst.finalize();
  return inst;
}

Move move_on(const Instance& inst, int level, std::initializer_list<int> cats) {
  Move mv;
  mv.level = level;
  for (int c : cats) {
    mv.changes[mv.num_changes].category = c;
    mv.changes[mv.num_changes].old_option = 0;
    mv.changes[mv.num_changes].new_option = 1;
    ++mv.num_changes;
  }
  mv.pws = {inst.pw_of(*cats.begin()), -1};
  return mv;
}

}  // namespace

TEST_CASE("opening stage always picks level 2") {
  SearchParams p;
  Rng rng(1);
  for (i64 iter = 1; iter <= p.stage1_iters; ++iter) {
    ControllerState st;
    st.since_best = 999;  // even a long stall cannot override stage 1
    CHECK(choose_level(st, iter, p, rng) == 2);
  }
}

TEST_CASE("a long stall triggers the high levels with the configured split") {
  SearchParams p;
  Rng rng(2);
  int count4 = 0, count5 = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    ControllerState st;
    st.since_best = 25;
    const int level = choose_level(st, 500, p, rng);
    REQUIRE(level >= 4);
    level == 4 ? ++count4 : ++count5;
  }
  CHECK(count4 + count5 == 2000);
  CHECK(count4 > 1000);  // p4 = 0.6
  CHECK(count4 < 1400);
}

TEST_CASE("capped high runs force a low-level span") {
  SearchParams p;
  Rng rng(3);
  ControllerState st;
  st.since_best = 50;
  CHECK(choose_level(st, 300, p, rng) >= 4);
  ++st.since_best;
  CHECK(choose_level(st, 301, p, rng) >= 4);  // second consecutive high
  CHECK(st.forced_low_remaining == p.forced_low_span);
  for (i64 t = 0; t < p.forced_low_span; ++t) {
    ++st.since_best;  // still stalled, yet lows are forced
    CHECK(choose_level(st, 302 + t, p, rng) <= 3);
  }
  // span consumed: the stall may trigger highs again
  ++st.since_best;
  CHECK(choose_level(st, 302 + p.forced_low_span, p, rng) >= 4);
}

TEST_CASE("a new best downgrades the next level") {
  SearchParams p;
  Rng rng(4);
  ControllerState st;
  st.downgrade_pending = true;
  st.last_level = 3;
  CHECK(choose_level(st, 500, p, rng) == 2);
  CHECK_FALSE(st.downgrade_pending);

  st.downgrade_pending = true;
  st.last_level = 1;
  CHECK(choose_level(st, 501, p, rng) == 1);

  st.downgrade_pending = true;
  st.last_level = 5;  // high levels downgrade to the probabilistic low draw
  CHECK(choose_level(st, 502, p, rng) <= 3);
}

TEST_CASE("single-level masks bypass the controller") {
  SearchParams p;
  p.level_mask = 1u << 3;  // level 4 only
  Rng rng(5);
  ControllerState st;
  st.available = 0b11111;
  CHECK(choose_level(st, 1, p, rng) == 4);  // even inside the opening stage
  ControllerState unavailable;
  unavailable.available = 0b00111;  // single-PW instance: no level 4
  CHECK(choose_level(unavailable, 1, p, rng) == 0);
}

TEST_CASE("availability mask reflects the instance structure") {
  CHECK(available_levels(test::example_instance()) == 0b00011);  // 2 cats, 1 PW
  CHECK(available_levels(wide_instance(3)) == 0b00111);
  Rng rng(6);
  const Instance multi = generate(desk_profile(1));
  CHECK(available_levels(multi) == 0b11111);
}

TEST_CASE("move statistics count PW/category attributions") {
  const Instance inst = wide_instance(5);
  CandidateStats stats(inst);
  CHECK(stats.ranked(0).empty());

  stats.record_move(move_on(inst, 3, {1, 2, 4}));
  CHECK(stats.count(1) == 1);
  CHECK(stats.count(2) == 1);
  CHECK(stats.count(4) == 1);
  CHECK(stats.ranked(0).size() == 3);

  stats.record_move(move_on(inst, 1, {4}));
  const auto& ranked = stats.ranked(0);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0] == 4);  // count 2 first, then ties by ordinal
  CHECK(ranked[1] == 1);
  CHECK(ranked[2] == 2);
}

TEST_CASE("ranked lists stay sorted by count with ordinal ties") {
  Rng rng(7);
  const Instance inst = wide_instance(8);
  CandidateStats stats(inst);
  for (int rep = 0; rep < 300; ++rep) {
    const int c = static_cast<int>(rng.uniform_int(0, 7));
    stats.record_move(move_on(inst, 1, {c}));
    const auto& ranked = stats.ranked(0);
    for (std::size_t t = 1; t < ranked.size(); ++t) {
      const bool ordered =
          stats.count(ranked[t - 1]) > stats.count(ranked[t]) ||
          (stats.count(ranked[t - 1]) == stats.count(ranked[t]) &&
           ranked[t - 1] < ranked[t]);
      CHECK(ordered);
      CHECK(stats.count(ranked[t]) > 0);
    }
  }
}

TEST_CASE("candidate pools truncate by ratio with arity minimums") {
  const Instance inst = wide_instance(12);
  SearchParams p;
  CandidateStats stats(inst);

  // level 1 never restricts
  CHECK(build_pools(stats, 1, inst, p).categories[0] == std::nullopt);

  // empty stats: full neighborhood
  CHECK(build_pools(stats, 2, inst, p).categories[0] == std::nullopt);

  // ten counted categories, descending frequency 10..1 on ordinals 0..9
  for (int c = 0; c < 10; ++c)
    for (int times = 0; times < 10 - c; ++times)
      stats.record_move(move_on(inst, 1, {c}));

  const auto level2 = build_pools(stats, 2, inst, p);
  REQUIRE(level2.categories[0].has_value());
  CHECK(*level2.categories[0] == std::vector<int>{0, 1, 2, 3, 4});  // ceil(10*0.5)

  const auto level4 = build_pools(stats, 4, inst, p);
  REQUIRE(level4.categories[0].has_value());
  CHECK(level4.categories[0]->size() == 8);  // ceil(10*0.8)

  // a single counted category cannot seat a two-category move
  CandidateStats thin(inst);
  thin.record_move(move_on(inst, 1, {3}));
  CHECK(build_pools(thin, 2, inst, p).categories[0] == std::nullopt);
  const auto thin4 = build_pools(thin, 4, inst, p);  // level 4 needs only one
  REQUIRE(thin4.categories[0].has_value());
  CHECK(*thin4.categories[0] == std::vector<int>{3});

  // two counted categories cannot seat a level-3 move
  CandidateStats pair(inst);
  pair.record_move(move_on(inst, 2, {3, 5}));
  CHECK(build_pools(pair, 3, inst, p).categories[0] == std::nullopt);
  const auto pair2 = build_pools(pair, 2, inst, p);  // arity minimum lifts ceil(2*0.5)=1
  REQUIRE(pair2.categories[0].has_value());
  CHECK(*pair2.categories[0] == std::vector<int>{3, 5});
}

TEST_CASE("runs are deterministic per seed") {
  const Instance inst = generate(desk_profile(3));
  SearchParams p;
  p.total_iters = 200;
  p.seed = 99;
  const SearchResult a = run(inst, p);
  const SearchResult b = run(inst, p);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    CHECK(a.trace[t].level == b.trace[t].level);
    CHECK(a.trace[t].f == b.trace[t].f);
    CHECK(a.trace[t].delta_f == b.trace[t].delta_f);
  }
  CHECK(a.move_evaluations == b.move_evaluations);

  p.seed = 100;  // different seed, typically a different trajectory
  const SearchResult c = run(inst, p);
  bool differs = c.trace.size() != a.trace.size();
  for (std::size_t t = 0; !differs && t < a.trace.size(); ++t)
    differs = a.trace[t].level != c.trace[t].level || a.trace[t].f != c.trace[t].f;
  CHECK(differs);
}

TEST_CASE("thread count does not change the trajectory") {
  const Instance inst = generate(desk_profile(4));
  SearchParams p;
  p.total_iters = 150;
  p.seed = 7;
  p.low_mode = SelectMode::BestImprovement;
  p.high_mode = SelectMode::BestImprovement;
  p.threads = 1;
  const SearchResult serial = run(inst, p);
  p.threads = 4;
  const SearchResult parallel = run(inst, p);
  REQUIRE(serial.trace.size() == parallel.trace.size());
  for (std::size_t t = 0; t < serial.trace.size(); ++t) {
    CHECK(serial.trace[t].f == parallel.trace[t].f);
    CHECK(serial.trace[t].level == parallel.trace[t].level);
  }
  CHECK(serial.move_evaluations == parallel.move_evaluations);
}

TEST_CASE("zero stall budget stops after the first non-improving iteration") {
  const Instance inst = generate(desk_profile(5));
  SearchParams p;
  p.feasible_stall = 0;
  const SearchResult res = run(inst, p);
  REQUIRE(!res.trace.empty());
  // every iteration before the last improved the feasible best
  for (std::size_t t = 0; t + 1 < res.trace.size(); ++t)
    CHECK((res.trace[t].feasible && res.trace[t].new_best));
}

TEST_CASE("default runs satisfy the trace compliance checker") {
  SearchParams p;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = generate(desk_profile(seed));
    p.seed = seed;
    const SearchResult res = run(inst, p);
    const auto violations = check_trace(res.trace, p);
    for (const std::string& v : violations) MESSAGE(v);
    CHECK(violations.empty());
  }
}

TEST_CASE("the checker flags corrupted traces") {
  const Instance inst = generate(desk_profile(6));
  SearchParams p;
  p.seed = 6;
  SearchResult res = run(inst, p);
  REQUIRE(res.trace.size() > 10);
  auto broken = res.trace;
  broken[4].level = 3;  // inside the opening stage
  CHECK_FALSE(check_trace(broken, p).empty());

  broken = res.trace;
  broken[7].best_f -= 1;
  CHECK_FALSE(check_trace(broken, p).empty());

  broken = res.trace;
  broken[8].iter = 99;
  CHECK_FALSE(check_trace(broken, p).empty());
}

TEST_CASE("trace CSV round-trips and reports malformed lines") {
  const Instance inst = generate(desk_profile(7));
  SearchParams p;
  p.seed = 7;
  p.total_iters = 150;
  const SearchResult res = run(inst, p);
  const auto path = std::filesystem::temp_directory_path() / "fso_trace_test.csv";
  save_trace_csv(res.trace, path);
  const auto loaded = load_trace_csv(path);
  REQUIRE(loaded.size() == res.trace.size());
  for (std::size_t t = 0; t < loaded.size(); ++t) {
    CHECK(loaded[t].iter == res.trace[t].iter);
    CHECK(loaded[t].level == res.trace[t].level);
    CHECK(loaded[t].delta_f == res.trace[t].delta_f);
    CHECK(loaded[t].f == res.trace[t].f);
    CHECK(loaded[t].violation == res.trace[t].violation);
    CHECK(loaded[t].best_f == res.trace[t].best_f);
    CHECK(loaded[t].feasible == res.trace[t].feasible);
    CHECK(loaded[t].new_best == res.trace[t].new_best);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_WITH_AS(
      parse_trace_csv("iter,level,delta_f,f,violation,best_f,feasible,new_best\n1,2,x,4,5,6,0,0\n",
                      "t.csv"),
      doctest::Contains("t.csv:2"), InputError);
  CHECK_THROWS_WITH_AS(parse_trace_csv("bogus\n", "t.csv"), doctest::Contains("t.csv:1"),
                       InputError);
}

TEST_CASE("best_f in the trace is nondecreasing and matches recomputation") {
  const Instance inst = generate(desk_profile(8));
  SearchParams p;
  p.seed = 8;
  const SearchResult res = run(inst, p);
  i64 best = res.trace.front().best_f;
  for (const TraceRecord& r : res.trace) {
    CHECK(r.best_f >= best);
    CHECK(r.best_f >= r.f);
    best = r.best_f;
  }
  // the reported best solution re-evaluates to its recorded figures
  REQUIRE(res.best_feasible.has_value());
  Solution sol = *res.best_feasible;
  const Evaluation ev = evaluate(inst, sol);
  CHECK(ev.violation == 0);
  CHECK(ev.f == res.best_feasible_eval.f);
}

TEST_CASE("candidate lists reduce move evaluations and restrict categories") {
  const Instance inst = generate(desk_profile(9));
  SearchParams with;
  with.seed = 9;
  SearchParams without = with;
  without.candidate_list = false;
  const SearchResult on = run(inst, with);
  const SearchResult off = run(inst, without);
  CHECK(on.move_evaluations <= off.move_evaluations);
}

TEST_CASE("search finds the exact optimum on a small generated instance") {
  GenConfig cfg = desk_profile(10);
  cfg.pw_count = 2;
  cfg.categories_per_pw = {2};
  cfg.options_per_category = {3};
  const Instance inst = generate(cfg);
  const OptimalResult opt = brute_force(inst);
  REQUIRE(opt.feasible);
  SearchParams p;
  p.seed = 10;
  const SearchResult res = run(inst, p);
  REQUIRE(res.best_feasible.has_value());
  CHECK(res.best_feasible_eval.revenue == opt.revenue);
}

TEST_CASE("search result revenue never exceeds the oracle optimum") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    GenConfig cfg = desk_profile(seed);
    cfg.pw_count = 3;
    cfg.categories_per_pw = {2};
    cfg.options_per_category = {3};
    const Instance inst = generate(cfg);
    const OptimalResult opt = brute_force(inst);
    REQUIRE(opt.feasible);
    SearchParams p;
    p.seed = seed;
    p.total_iters = 400;
    const SearchResult res = run(inst, p);
    if (res.best_feasible)
      CHECK(res.best_feasible_eval.revenue <= opt.revenue);
  }
}
