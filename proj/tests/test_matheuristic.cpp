// Tests for the surrogate-guided heuristic and its two location surrogates.
//
// Both surrogate MILPs are checked against brute-force subset enumeration
// written directly from the instance geometry (independent of the route
// table and model builders).  The heuristic itself is checked on the
// corridor and triangle fixtures against frozen traces and against the
// exact solver's optima.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vertiflow/common.hpp"
#include "vertiflow/core/feasibility.hpp"
#include "vertiflow/core/objective.hpp"
#include "vertiflow/milp/solver.hpp"
#include "vertiflow/solve/exact.hpp"
#include "vertiflow/solve/matheuristic.hpp"

namespace {

using namespace vertiflow;
using vertiflow::testing::fill_matrices;
using vertiflow::testing::make_corridor_instance;

Instance make_triangle_instance(double market_share) {
  Instance inst;
  inst.name = "triangle";
  inst.demand_points = {{0.0, 0.5}, {8.0, 0.5}, {4.0, 5.5}};
  inst.candidates = {{0.0, 0.0}, {8.0, 0.0}, {4.0, 6.0}};
  inst.demand = {{0, 1, 0.20}, {1, 2, 0.15}, {2, 0, 0.10}};
  inst.max_vertiports = 3;
  inst.apron_options = {1, 2};
  inst.market_share = market_share;
  inst.pooling_size = 4.0;
  inst.payload_capacity = 12.0;
  inst.service_range_km = 5.0;
  inst.flight_range_km = 15.0;
  inst.charge_ratio = 1.0;
  inst.overflow_cap = 0.05;
  inst.service_level_cap = 0.99;
  inst.drone_daily_cost = 70.0;
  fill_matrices(inst);
  return inst;
}

// A pair is coverable by an open-site set iff some ordered site pair within
// courier range of both endpoints is within flight range.  Written straight
// from the distance matrices, independent of the route machinery.
bool pair_covered(const Instance& inst, int o, int d, unsigned mask) {
  const int N = inst.num_candidates();
  for (int i = 0; i < N; ++i) {
    if (!(mask >> i & 1u) || inst.courier_dist[o][i] > inst.service_range_km) continue;
    for (int j = 0; j < N; ++j) {
      if (i == j || !(mask >> j & 1u)) continue;
      if (inst.courier_dist[d][j] > inst.service_range_km) continue;
      if (inst.flight_dist[i][j] <= inst.flight_range_km) return true;
    }
  }
  return false;
}

double brute_force_coverage(const Instance& inst) {
  const int N = inst.num_candidates();
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << N); ++mask) {
    if (__builtin_popcount(mask) > inst.max_vertiports) continue;
    double covered = 0.0;
    for (const DemandEntry& e : inst.demand) {
      if (pair_covered(inst, e.o, e.d, mask)) covered += e.rate;
    }
    best = std::max(best, covered);
  }
  return best;
}

double brute_force_pmedian(const Instance& inst) {
  const int N = inst.num_candidates();
  const int R = inst.num_points();
  std::vector<double> out_rate(R, 0.0), in_rate(R, 0.0);
  for (const DemandEntry& e : inst.demand) {
    out_rate[e.o] += e.rate;
    in_rate[e.d] += e.rate;
  }
  double best = kInf;
  for (unsigned mask = 1; mask < (1u << N); ++mask) {
    if (__builtin_popcount(mask) > inst.max_vertiports) continue;
    double cost = 0.0;
    for (int r = 0; r < R; ++r) {
      double to = kInf, td = kInf;
      for (int i = 0; i < N; ++i) {
        if (!(mask >> i & 1u)) continue;
        to = std::min(to, inst.courier_time[r][i]);
        td = std::min(td, inst.courier_time[r][i]);
      }
      cost += out_rate[r] * to + in_rate[r] * td;
    }
    best = std::min(best, cost);
  }
  return best;
}

}  // namespace

TEST_SUITE("matheuristic") {

TEST_CASE("coverage surrogate: forced selections and diversification") {
  SUBCASE("a single feasible pair forces both endpoints open") {
    Instance inst = make_corridor_instance();
    inst.demand = {{0, 1, 0.20}};
    const milp::MilpModel model = solve::build_coverage_surrogate(inst);
    const milp::MilpResult res = milp::solve_milp(model);
    REQUIRE(res.status == milp::MilpStatus::optimal);
    CHECK(res.objective == doctest::Approx(-0.20).epsilon(1e-12));
    CHECK(res.x[0] == doctest::Approx(1.0));
    CHECK(res.x[1] == doctest::Approx(1.0));
  }
  SUBCASE("full corridor coverage") {
    const milp::MilpModel model = solve::build_coverage_surrogate(make_corridor_instance());
    const milp::MilpResult res = milp::solve_milp(model);
    CHECK(res.objective == doctest::Approx(-0.36).epsilon(1e-12));
  }
  SUBCASE("diversification forces a Hamming distance of at least n_switch") {
    const Instance inst = make_corridor_instance();
    const std::vector<std::uint8_t> prior = {1, 1};
    const milp::MilpModel model = solve::build_coverage_surrogate(inst, prior, 2);
    const milp::MilpResult res = milp::solve_milp(model);
    REQUIRE(res.status == milp::MilpStatus::optimal);
    int distance = 0;
    for (int i = 0; i < 2; ++i) {
      distance += (res.x[i] > 0.5 ? 1 : 0) != static_cast<int>(prior[i]);
    }
    CHECK(distance >= 2);
    CHECK(res.objective == doctest::Approx(0.0));  // nothing coverable after the switch
  }
  SUBCASE("an unreachable switch count makes the surrogate infeasible") {
    const milp::MilpModel model = solve::build_coverage_surrogate(
        make_corridor_instance(), std::vector<std::uint8_t>{1, 1}, 3);
    CHECK(milp::solve_milp(model).status == milp::MilpStatus::infeasible);
  }
  SUBCASE("argument validation") {
    const Instance inst = make_corridor_instance();
    CHECK_THROWS_AS(
        solve::build_coverage_surrogate(inst, std::vector<std::uint8_t>{1}, 2),
        DomainError);
    CHECK_THROWS_AS(
        solve::build_coverage_surrogate(inst, std::vector<std::uint8_t>{1, 1}, 0),
        DomainError);
  }
}

TEST_CASE("coverage surrogate matches subset enumeration") {
  for (Instance inst : {make_corridor_instance(), make_triangle_instance(0.5)}) {
    const int N = inst.num_candidates();
    for (int budget = 1; budget <= N; ++budget) {
      inst.max_vertiports = budget;
      const milp::MilpModel model = solve::build_coverage_surrogate(inst);
      const milp::MilpResult res = milp::solve_milp(model);
      REQUIRE(res.status == milp::MilpStatus::optimal);
      CHECK(-res.objective == doctest::Approx(brute_force_coverage(inst)).epsilon(1e-9));
    }
  }
}

TEST_CASE("p-median surrogate: forced assignment, enumeration, scaling") {
  SUBCASE("a single candidate takes every assignment") {
    Instance inst = make_triangle_instance(0.5);
    inst.candidates = {{0.0, 0.0}};
    inst.max_vertiports = 1;
    fill_matrices(inst);
    double expected = 0.0;
    for (const DemandEntry& e : inst.demand) {
      expected += e.rate * (inst.courier_time[e.o][0] + inst.courier_time[e.d][0]);
    }
    const milp::MilpResult res = milp::solve_milp(solve::build_pmedian_surrogate(inst));
    REQUIRE(res.status == milp::MilpStatus::optimal);
    CHECK(res.x[0] == doctest::Approx(1.0));
    CHECK(res.objective == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("optimum matches subset enumeration") {
    for (Instance inst : {make_corridor_instance(), make_triangle_instance(0.5)}) {
      const int N = inst.num_candidates();
      for (int budget = 1; budget <= N; ++budget) {
        inst.max_vertiports = budget;
        const milp::MilpResult res = milp::solve_milp(solve::build_pmedian_surrogate(inst));
        REQUIRE(res.status == milp::MilpStatus::optimal);
        CHECK(res.objective == doctest::Approx(brute_force_pmedian(inst)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("doubling courier times doubles the objective at the same selection") {
    const Instance base = make_triangle_instance(0.5);
    Instance doubled = base;
    for (auto& row : doubled.courier_time) {
      for (double& v : row) v *= 2.0;
    }
    const milp::MilpResult r1 = milp::solve_milp(solve::build_pmedian_surrogate(base));
    const milp::MilpResult r2 = milp::solve_milp(solve::build_pmedian_surrogate(doubled));
    CHECK(r2.objective == doctest::Approx(2.0 * r1.objective).epsilon(1e-9));
    for (int i = 0; i < base.num_candidates(); ++i) {
      CHECK((r1.x[i] > 0.5) == (r2.x[i] > 0.5));
    }
  }
}

TEST_CASE("heuristic on the corridor: frozen two-round trace, exact-quality result") {
  const Instance inst = make_corridor_instance();
  const solve::MatheuristicResult res = solve::solve_matheuristic(inst);

  CHECK(res.status == solve::ExactStatus::converged);
  CHECK(res.iterations == 2);
  REQUIRE(res.trace.rows.size() == 4);
  CHECK(res.upper_bound == doctest::Approx(70.4572).epsilon(1e-9));
  CHECK(res.promising == std::vector<std::uint8_t>{1, 1});

  const char* expected_models[4] = {"MM", "MC", "MM", "MC"};
  for (int k = 0; k < 4; ++k) CHECK(res.trace.rows[k].model == expected_models[k]);
  // Round 1 restricts to the full candidate set, so its conservative solve
  // must equal the exact solver's initial-grid master objective.
  CHECK(res.trace.rows[1].objective == doctest::Approx(70.481960789).epsilon(1e-8));
  CHECK(res.trace.rows[0].objective == doctest::Approx(0.36).epsilon(1e-12));
  // Round 2 warm-starts from the round-1 plan across the refined grid.
  CHECK(res.trace.rows[3].warm == 1);

  double prev_ub = kInf;
  double prev_mc = kInf;
  for (const solve::TraceRow& r : res.trace.rows) {
    CHECK(r.ub <= prev_ub + 1e-12);
    prev_ub = r.ub;
    if (r.model == "MC") {
      CHECK(r.objective <= prev_mc + 1e-9);
      prev_mc = r.objective;
    }
  }

  REQUIRE(res.incumbent.has_value());
  const FeasibilityReport rep = check_nonlinear_feasibility(inst, *res.incumbent);
  CHECK(rep.pass);
  CHECK(rep.worst_violation() <= 1e-8);

  // Quality versus the exact solver on the same instance.
  const solve::ExactResult exact = solve::solve_exact(inst);
  CHECK(res.upper_bound <= exact.upper_bound * 1.05 + 1e-9);
}

TEST_CASE("heuristic on the triangle: exact-quality result") {
  const Instance inst = make_triangle_instance(0.5);
  const solve::MatheuristicResult res = solve::solve_matheuristic(inst);
  CHECK(res.status == solve::ExactStatus::converged);
  CHECK(res.upper_bound == doctest::Approx(281.247268068).epsilon(1e-9));
  CHECK(res.promising == std::vector<std::uint8_t>{1, 1, 1});
  REQUIRE(res.incumbent.has_value());
  CHECK(check_nonlinear_feasibility(inst, *res.incumbent).pass);
  // Within 5% of the exact optimum (frozen from the exact-solver suite).
  CHECK(res.upper_bound <= 281.225211317 * 1.05);
}

TEST_CASE("heuristic saturates when the market share is unreachable") {
  Instance inst = make_corridor_instance();
  inst.market_share = 0.75;
  const solve::MatheuristicResult res = solve::solve_matheuristic(inst);
  CHECK(res.status == solve::ExactStatus::grid_exhausted);
  CHECK(!res.incumbent.has_value());
  CHECK(res.upper_bound == kInf);
  for (const solve::TraceRow& r : res.trace.rows) {
    if (r.model == "MC") CHECK(std::isinf(r.objective));
  }
}

TEST_CASE("heuristic with zero demand returns the empty plan") {
  Instance inst = make_corridor_instance();
  inst.demand.clear();
  fill_matrices(inst);
  const solve::MatheuristicResult res = solve::solve_matheuristic(inst);
  CHECK(res.iterations == 1);
  CHECK(res.upper_bound == 0.0);
  REQUIRE(res.incumbent.has_value());
  CHECK(res.incumbent->x == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("p-median-guided variant: saturation and quality") {
  solve::MatheuristicConfig cfg;
  cfg.surrogate = solve::Surrogate::pmedian;

  SUBCASE("corridor: diversified p-median is infeasible, run saturates") {
    const Instance inst = make_corridor_instance();
    const solve::MatheuristicResult res = solve::solve_matheuristic(inst, cfg);
    CHECK(res.status == solve::ExactStatus::grid_exhausted);
    CHECK(res.iterations == 1);
    REQUIRE(res.trace.rows.size() == 3);
    CHECK(res.trace.rows[2].model == "MP");
    CHECK(std::isinf(res.trace.rows[2].objective));
    CHECK(res.upper_bound == doctest::Approx(70.481960789).epsilon(1e-8));
    REQUIRE(res.incumbent.has_value());
    CHECK(check_nonlinear_feasibility(inst, *res.incumbent).pass);
    CHECK(res.upper_bound <= 70.4572 * 1.05);  // within 5% of the exact optimum
  }
  SUBCASE("triangle: converges to the same value as the coverage-guided run") {
    const solve::MatheuristicResult res =
        solve::solve_matheuristic(make_triangle_instance(0.5), cfg);
    CHECK(res.status == solve::ExactStatus::converged);
    CHECK(res.upper_bound == doctest::Approx(281.247268068).epsilon(1e-9));
  }
}

TEST_CASE("heuristic configuration is validated") {
  const Instance inst = make_corridor_instance();
  solve::MatheuristicConfig cfg;
  int n_switch = 2;
  SUBCASE("improvement threshold zero") { cfg.improve_eps = 0.0; }
  SUBCASE("improvement threshold one") { cfg.improve_eps = 1.0; }
  SUBCASE("total time zero") { cfg.total_time_s = 0.0; }
  SUBCASE("solve time negative") { cfg.solve_time_s = -1.0; }
  SUBCASE("grid spacing zero") { cfg.min_gap = 0.0; }
  SUBCASE("switch count zero") { n_switch = 0; }
  CHECK_THROWS_AS(solve::solve_matheuristic(inst, cfg, n_switch), DomainError);
}

TEST_CASE("heuristic traces are deterministic across runs") {
  const Instance inst = make_triangle_instance(0.5);
  const solve::MatheuristicResult a = solve::solve_matheuristic(inst);
  const solve::MatheuristicResult b = solve::solve_matheuristic(inst);
  CHECK(a.status == b.status);
  CHECK(a.upper_bound == b.upper_bound);
  CHECK(a.promising == b.promising);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t k = 0; k < a.trace.rows.size(); ++k) {
    CHECK(a.trace.rows[k].model == b.trace.rows[k].model);
    CHECK(a.trace.rows[k].objective == b.trace.rows[k].objective);
    CHECK(a.trace.rows[k].ub == b.trace.rows[k].ub);
    CHECK(a.trace.rows[k].warm == b.trace.rows[k].warm);
  }
}

}  // TEST_SUITE("matheuristic")
