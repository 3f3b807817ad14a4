#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pbls/formula.hpp"
#include "pbls/generator.hpp"
#include "pbls/opb.hpp"
#include "pbls/oracle.hpp"
#include "pbls/presolve.hpp"
#include "pbls/rng.hpp"
#include "pbls/search.hpp"

using namespace pbls;
using testutil::make_assignment;

namespace {

SearchConfig quiet_config(std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.seed = seed;
  cfg.K = 1'000'000'000;  // keep the ratio fixed unless a test drives it
  cfg.R = 1'000'000'000;
  return cfg;
}

// The running example at assignment (1,0,0) with hard weight 2: the state
// used by all the hand-computed scores below.
LocalSearch example1_engine(const PboInstance& inst) {
  LocalSearch ls(inst, quiet_config());
  ls.set_assignment(make_assignment({1, 0, 0}));
  ls.set_hard_weight(0, 2);
  return ls;
}

// Independent score oracle: flip, re-evaluate both weighted penalties from
// scratch, flip back.
Int oracle_hscore(const PboInstance& inst, const LocalSearch& ls, const Assignment& a, Var v) {
  auto weighted_violation = [&](const Assignment& x) {
    Int total = 0;
    for (std::size_t c = 0; c < inst.constraints.size(); ++c)
      total = checked_add(total, checked_mul(ls.hard_weight(c), inst.constraints[c].violation(x)));
    return total;
  };
  Assignment flipped = a;
  flipped.toggle(v);
  return weighted_violation(a) - weighted_violation(flipped);
}

Int oracle_oscore(const PboInstance& inst, const LocalSearch& ls, const Assignment& a, Var v) {
  Assignment flipped = a;
  flipped.toggle(v);
  return ls.obj_weight() * (inst.objective.value(a) - inst.objective.value(flipped));
}

}  // namespace

TEST_CASE("hand-computed hard scores on the running example") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);
  REQUIRE(ls.hard_weight(0) == 2);
  REQUIRE_FALSE(ls.feasible());

  // At (1,0,0) the constraint misses by 3 with weight 2 (penalty 6).
  // Flipping x1 deepens the violation to 5 (hscore -4); flipping x2 or x3
  // repairs it outright (hscore +6).
  CHECK(ls.hscore(1) == -4);
  CHECK(ls.hscore(2) == 6);
  CHECK(ls.hscore(3) == 6);
}

TEST_CASE("hand-computed objective scores on the running example") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);

  // Objective 10 x1 + 20 x2 + 30 x3 at (1,0,0) costs 10. Flipping x1 saves
  // 10; flipping x2 or x3 adds 20 or 30.
  CHECK(ls.oscore(1) == 10);
  CHECK(ls.oscore(2) == -20);
  CHECK(ls.oscore(3) == -30);
}

TEST_CASE("the dynamic score blends the two parts through the ratio") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);

  ls.set_ratio(2.0);
  CHECK(ls.dynamic_score(1) == 16.0);
  CHECK(ls.dynamic_score(2) == -34.0);
  CHECK(ls.dynamic_score(3) == -54.0);

  ls.set_ratio(0.1);
  CHECK(ls.dynamic_score(1) == -3.0);
  CHECK(ls.dynamic_score(2) == 4.0);
  CHECK(ls.dynamic_score(3) == 3.0);

  ls.set_ratio(1.0);
  CHECK(ls.dynamic_score(1) == 6.0);
  CHECK(ls.dynamic_score(2) == -14.0);
  CHECK(ls.dynamic_score(3) == -24.0);
}

TEST_CASE("polarity weights scale the score by the current value of x") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);
  ls.set_ratio(1.0);

  // x1 is 1: divide by its weight. x2 and x3 are 0: multiply by theirs.
  CHECK(ls.combined_score(1, 1.1) == doctest::Approx(6.0 / 1.1).epsilon(1e-12));
  CHECK(ls.combined_score(2, 1.1) == doctest::Approx(-14.0 * 1.1).epsilon(1e-12));
  CHECK(ls.combined_score(3, 0.9) == doctest::Approx(-24.0 * 0.9).epsilon(1e-12));

  // Without a polarity table every weight is the neutral 1.
  CHECK(ls.combined_score(1) == 6.0);
  CHECK(ls.combined_score(2) == -14.0);
}

TEST_CASE("pick_variable takes the best positive score and reports dead ends") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);

  ls.set_ratio(2.0);  // scores (16, -34, -54): x1 wins
  auto pick_hi = ls.pick_variable();
  REQUIRE(pick_hi.has_value());
  CHECK(*pick_hi == 1);

  ls.set_ratio(0.1);  // scores (-3, 4, 3): x2 wins
  auto pick_lo = ls.pick_variable();
  REQUIRE(pick_lo.has_value());
  CHECK(*pick_lo == 2);

  // At the feasible optimum with a small ratio every move scores <= 0.
  ls.set_ratio(0.1);
  ls.set_assignment(make_assignment({1, 1, 0}));
  CHECK_FALSE(ls.pick_variable().has_value());
}

TEST_CASE("exact score ties are broken uniformly at random") {
  // Two unit constraints of equal weight, violated symmetrically.
  PboInstance inst = parse_opb_string("+1 x1 >= 1 ;\n+1 x2 >= 1 ;\n");
  SearchConfig cfg = quiet_config(3);
  LocalSearch ls(inst, cfg);
  ls.set_assignment(make_assignment({0, 0}));
  std::set<Var> seen;
  for (int i = 0; i < 200; ++i) {
    auto pick = ls.pick_variable();
    REQUIRE(pick.has_value());
    seen.insert(*pick);
  }
  CHECK(seen == std::set<Var>{1, 2});
}

TEST_CASE("flip maintains feasibility, objective, and the incumbent") {
  PboInstance inst = testutil::example1();
  LocalSearch ls = example1_engine(inst);
  int calls = 0;
  ls.on_new_best = [&](const Assignment& a, Int obj) {
    ++calls;
    CHECK(inst.feasible(a));
    CHECK(obj == 30);
  };

  ls.flip(2);  // (1,1,0): feasible, objective 30
  CHECK(ls.feasible());
  CHECK(ls.objective() == 30);
  CHECK(ls.num_falsified() == 0);
  REQUIRE(ls.has_best());
  CHECK(ls.best_objective() == 30);
  CHECK(ls.best_assignment() == make_assignment({1, 1, 0}));
  CHECK(calls == 1);
  CHECK(ls.step_count() == 1);
  CHECK(ls.check_caches());

  // Flip back: infeasible again (violation 3), incumbent untouched.
  ls.flip(2);
  CHECK_FALSE(ls.feasible());
  CHECK(ls.objective() == 10);
  CHECK(constraint_violation(inst.constraints[0], ls.assignment()) == 3);
  CHECK(ls.best_objective() == 30);
  CHECK(ls.check_caches());

  // Deepen the violation: (0,0,0) misses by 5.
  ls.flip(1);
  CHECK(constraint_violation(inst.constraints[0], ls.assignment()) == 5);
  CHECK(ls.num_falsified() == 1);
  CHECK(calls == 1);
}

TEST_CASE("scores agree with a flip-and-reevaluate oracle on random walks") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    PboInstance inst = generate_instance(14, 9, 7, 0.5, seed);
    SearchConfig cfg = quiet_config(seed + 100);
    LocalSearch ls(inst, cfg);
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 400; ++step) {
      Var v = 1 + static_cast<Var>(rand_below(rng, inst.num_vars));
      CAPTURE(seed);
      CAPTURE(step);
      CAPTURE(v);
      CHECK(ls.hscore(v) == oracle_hscore(inst, ls, ls.assignment(), v));
      CHECK(ls.oscore(v) == oracle_oscore(inst, ls, ls.assignment(), v));
      ls.flip(v);
    }
    CHECK(ls.check_caches());
  }
}

TEST_CASE("escaping a local optimum bumps weights and makes one random flip") {
  PboInstance inst = testutil::example1();

  SUBCASE("infeasible: a falsified constraint gets heavier, one of its variables flips") {
    LocalSearch ls(inst, quiet_config(7));
    ls.set_assignment(make_assignment({0, 0, 0}));
    ls.set_hard_weight(0, 2);
    Assignment before = ls.assignment();
    ls.escape_local_optimum();
    CHECK(ls.hard_weight(0) == 3);
    CHECK(ls.obj_weight() == 1);
    CHECK(hamming(before, ls.assignment()) == 1);
    CHECK(ls.step_count() == 1);
    CHECK(ls.check_caches());
  }

  SUBCASE("feasible: the objective weight grows, an objective variable flips") {
    LocalSearch ls(inst, quiet_config(8));
    ls.set_assignment(make_assignment({1, 1, 0}));
    Assignment before = ls.assignment();
    ls.escape_local_optimum();
    CHECK(ls.obj_weight() == 2);
    CHECK(ls.hard_weight(0) == 1);
    CHECK(hamming(before, ls.assignment()) == 1);
    CHECK(ls.check_caches());
  }

  SUBCASE("weights saturate at the cap") {
    SearchConfig cfg = quiet_config(9);
    cfg.weight_cap = 3;
    LocalSearch ls(inst, cfg);
    ls.set_assignment(make_assignment({0, 0, 0}));
    for (int i = 0; i < 10; ++i) {
      Assignment a = ls.assignment();
      a.set(1, false);
      a.set(2, false);
      a.set(3, false);
      ls.set_assignment(a);  // force the infeasible branch every time
      ls.escape_local_optimum();
      CHECK(ls.hard_weight(0) <= 3);
    }
    CHECK(ls.hard_weight(0) == 3);
  }

  SUBCASE("with nothing to flip the step still counts") {
    PboInstance empty = parse_opb_string("* #variable= 2 #constraint= 0\nmin: ;\n");
    REQUIRE(empty.num_vars == 2);
    LocalSearch ls(empty, quiet_config(10));
    Assignment before = ls.assignment();
    ls.escape_local_optimum();
    CHECK(hamming(before, ls.assignment()) == 1);  // random uniform flip
    CHECK(ls.step_count() == 1);
  }
}

TEST_CASE("the ratio multiplies or divides by inc depending on the window") {
  PboInstance infeasible_forever = parse_opb_string("+1 x1 +1 ~x1 >= 3 ;\n");
  SearchConfig cfg = quiet_config(11);
  LocalSearch ls(infeasible_forever, cfg);
  REQUIRE_FALSE(ls.feasible());
  REQUIRE_FALSE(ls.window_feasible_found());
  CHECK(ls.ratio() == 1.0);

  ls.update_ratio();
  CHECK(ls.ratio() == doctest::Approx(1.0 / 1.15).epsilon(1e-15));
  // Fifty infeasible windows: p = 1.15^-j, never clamped at the defaults.
  LocalSearch ls2(infeasible_forever, cfg);
  for (int j = 1; j <= 50; ++j) {
    ls2.update_ratio();
    CHECK(std::abs(ls2.ratio() - std::pow(1.15, -j)) <= 1e-9);
  }

  // A feasible sighting flips the direction for the window that saw it.
  PboInstance easy = parse_opb_string("+1 x1 >= 1 ;\n");
  LocalSearch fls(easy, quiet_config(12));
  fls.set_assignment(make_assignment({1}));
  fls.evaluate_current();
  REQUIRE(fls.window_feasible_found());
  fls.update_ratio();
  CHECK(fls.ratio() == doctest::Approx(1.15).epsilon(1e-15));
  // The window flag resets after each update.
  CHECK_FALSE(fls.window_feasible_found());
}

TEST_CASE("the ratio stays inside its clamp range") {
  PboInstance infeasible_forever = parse_opb_string("+1 x1 +1 ~x1 >= 3 ;\n");
  SearchConfig cfg = quiet_config(13);
  cfg.ratio_min = 0.5;
  cfg.ratio_max = 2.0;
  LocalSearch ls(infeasible_forever, cfg);
  for (int i = 0; i < 40; ++i) ls.update_ratio();
  CHECK(ls.ratio() == doctest::Approx(0.5));

  PboInstance easy = parse_opb_string("+1 x1 >= 1 ;\n");
  LocalSearch up(easy, cfg);
  up.set_assignment(make_assignment({1}));
  for (int i = 0; i < 40; ++i) {
    up.evaluate_current();
    up.update_ratio();
  }
  CHECK(up.ratio() == doctest::Approx(2.0));
}

TEST_CASE("config validation rejects degenerate parameters") {
  SearchConfig bad;
  bad.inc = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SearchConfig{};
  bad.K = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SearchConfig{};
  bad.R = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SearchConfig{};
  bad.bms_samples = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SearchConfig{};
  bad.ratio_min = 2.0;  // clamp range must straddle the initial 1
  bad.ratio_max = 3.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  SearchConfig good;
  CHECK_NOTHROW(good.validate());
}

TEST_CASE("a restart adopts the assignment without touching the incumbent") {
  PboInstance inst = testutil::example1();
  LocalSearch ls(inst, quiet_config(14));
  ls.set_assignment(make_assignment({0, 1, 1}));  // feasible, objective 50
  ls.evaluate_current();
  REQUIRE(ls.has_best());
  CHECK(ls.best_objective() == 50);

  // Restarting to a better solution: the incumbent updates only on the next
  // feasibility check, not during the restart itself.
  ls.restart_from(make_assignment({1, 1, 0}));  // objective 30
  CHECK(ls.best_objective() == 50);
  CHECK(ls.assignment() == make_assignment({1, 1, 0}));
  CHECK(ls.steps_since_improvement() == 0);
  CHECK(ls.check_caches());
  ls.evaluate_current();
  CHECK(ls.best_objective() == 30);

  // Restarting to something worse never regresses the incumbent.
  ls.restart_from(make_assignment({0, 1, 1}));
  ls.evaluate_current();
  CHECK(ls.best_objective() == 30);

  CHECK_THROWS_AS(ls.restart_from(Assignment(2)), std::invalid_argument);
}

TEST_CASE("restarts keep learned weights and the current ratio") {
  PboInstance inst = testutil::example1();
  LocalSearch ls(inst, quiet_config(15));
  ls.set_assignment(make_assignment({0, 0, 0}));
  ls.escape_local_optimum();  // hard weight -> 2
  ls.update_ratio();          // ratio moves off 1
  const Int w = ls.hard_weight(0);
  const double p = ls.ratio();
  ls.restart_from(make_assignment({1, 1, 0}));
  CHECK(ls.hard_weight(0) == w);
  CHECK(ls.ratio() == p);
}

TEST_CASE("step picks a greedy flip when one exists and escapes otherwise") {
  PboInstance inst = testutil::example1();
  SearchConfig cfg = quiet_config(16);
  LocalSearch ls(inst, cfg);
  ls.set_assignment(make_assignment({1, 0, 0}));
  ls.set_ratio(2.0);  // x1 scores +16: greedy flip
  ls.step();
  CHECK(ls.assignment() == make_assignment({0, 0, 0}));
  CHECK(ls.step_count() == 1);

  // At (1,1,0) with a tiny ratio no move scores positive: the step escapes,
  // so the objective weight grows.
  LocalSearch stuck(inst, quiet_config(17));
  stuck.set_assignment(make_assignment({1, 1, 0}));
  stuck.set_ratio(0.1);
  stuck.step();
  CHECK(stuck.obj_weight() == 2);
}

TEST_CASE("the ratio updates exactly every K steps") {
  PboInstance inst = parse_opb_string("+1 x1 +1 ~x1 >= 3 ;\n");  // never feasible
  SearchConfig cfg = quiet_config(18);
  cfg.K = 5;
  LocalSearch ls(inst, cfg);
  for (int i = 1; i <= 4; ++i) ls.step();
  CHECK(ls.ratio() == 1.0);
  ls.step();  // step 5: window closes
  CHECK(ls.ratio() == doctest::Approx(1.0 / 1.15));
  for (int i = 0; i < 5; ++i) ls.step();
  CHECK(ls.ratio() == doctest::Approx(1.0 / (1.15 * 1.15)));
}

TEST_CASE("a short search solves the running example to optimality") {
  PboInstance inst = testutil::example1();
  SearchConfig cfg;
  cfg.seed = 19;
  cfg.max_steps = 20000;
  PresolveResult pre = identity_presolve(inst);
  std::atomic<bool> stop{false};
  WorkerResult r = run_worker(pre, cfg, nullptr, stop, 0);
  REQUIRE(r.best.has_value());
  CHECK(r.best->objective == 30);
  CHECK(r.best->assignment == make_assignment({1, 1, 0}));
  CHECK(inst.feasible(r.best->assignment));
  CHECK(r.stats.steps <= 20000);
  CHECK(r.stats.submissions >= 1);
}

TEST_CASE("a unit instance minimizing its only variable settles at 1") {
  PboInstance inst = parse_opb_string("min: +1 x1 ;\n+1 x1 >= 1 ;\n");
  SearchConfig cfg;
  cfg.seed = 20;
  cfg.max_steps = 5000;
  std::atomic<bool> stop{false};
  WorkerResult r = run_worker(identity_presolve(inst), cfg, nullptr, stop, 0);
  REQUIRE(r.best.has_value());
  CHECK(r.best->objective == 1);
  CHECK(r.best->assignment == make_assignment({1}));
}

TEST_CASE("an immediate stop still reports the initial evaluation") {
  PboInstance inst = parse_opb_string("min: +1 x1 ;\n");  // no constraints
  SearchConfig cfg;
  cfg.seed = 21;
  std::atomic<bool> stop{true};
  WorkerResult r = run_worker(identity_presolve(inst), cfg, nullptr, stop, 0);
  // The all-zero start is feasible (no constraints) and already optimal.
  REQUIRE(r.best.has_value());
  CHECK(r.best->objective == 0);
  CHECK(r.stats.steps == 0);
}

TEST_CASE("workers honor a step budget exactly") {
  PboInstance inst = generate_instance(16, 10, 6, 0.5, 99);
  SearchConfig cfg;
  cfg.seed = 22;
  cfg.max_steps = 1234;
  std::atomic<bool> stop{false};
  WorkerResult r = run_worker(identity_presolve(inst), cfg, nullptr, stop, 0);
  CHECK(r.stats.steps == 1234);
}

TEST_CASE("workers lift presolved solutions back to the original space") {
  PboInstance inst = testutil::example1();
  PresolveResult pre = assume_and_propagate(inst, AssumedLiteral{3, true});
  REQUIRE_FALSE(pre.conflict);
  SearchConfig cfg;
  cfg.seed = 23;
  cfg.max_steps = 20000;
  std::atomic<bool> stop{false};
  WorkerResult r = run_worker(pre, cfg, nullptr, stop, 0);
  REQUIRE(r.best.has_value());
  CHECK(r.best->assignment.get(3) == true);
  CHECK(inst.feasible(r.best->assignment));
  // Best with x3 pinned to 1: x1=1, x2=0 -> 10 + 30.
  CHECK(r.best->objective == 40);
  CHECK(inst.objective.value(r.best->assignment) == 40);

  CHECK_THROWS_AS(run_worker(assume_and_propagate(parse_opb_string("+1 x1 >= 1 ;\n"),
                                                  AssumedLiteral{1, false}),
                             cfg, nullptr, stop, 0),
                  std::invalid_argument);
}

TEST_CASE("workers feed the pool and restart from it") {
  PboInstance inst = generate_instance(18, 12, 6, 0.4, 7);
  SolutionPool pool(inst, 6, 0.58, 0.03, 0.144);
  SearchConfig cfg;
  cfg.seed = 24;
  cfg.max_steps = 30000;
  cfg.R = 500;  // force plenty of restarts
  std::atomic<bool> stop{false};
  WorkerResult r = run_worker(identity_presolve(inst), cfg, &pool, stop, 3);
  REQUIRE(r.best.has_value());
  CHECK(pool.size() >= 1);
  CHECK(r.stats.restarts >= 1);
  for (const Solution& e : pool.entries()) {
    CHECK(inst.feasible(e.assignment));
    CHECK(e.objective == inst.objective.value(e.assignment));
  }
  // The pool's best entry can only match or beat what this worker reported
  // last... at minimum it holds feasible solutions discovered by it.
  CHECK(r.stats.submissions >= 1);
}

TEST_CASE("feasible sightings inside a window are remembered until the update") {
  PboInstance inst = testutil::example1();
  LocalSearch ls(inst, quiet_config(25));
  ls.set_assignment(make_assignment({1, 0, 0}));
  CHECK_FALSE(ls.window_feasible_found());
  ls.flip(2);  // feasible now
  CHECK(ls.window_feasible_found());
  ls.flip(2);  // infeasible again, the sighting persists
  CHECK(ls.window_feasible_found());
}
