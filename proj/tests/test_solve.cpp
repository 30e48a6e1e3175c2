// Tests for the exhaustive grid-search oracle and the adaptive exact solver.
//
// The oracle's optima are frozen from independent runs and cross-checked
// against the exact nonlinear feasibility checker and objective evaluator,
// so the solver tests below can compare their bounds against a reference
// that shares no code with the cut-based models.  Two fixtures are used:
// the two-vertiport corridor (each endpoint reaches exactly one candidate,
// so routing is forced) and a three-vertiport triangle whose circular
// demand pattern forces rebalancing flights between all three sites.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vertiflow/common.hpp"
#include "vertiflow/core/feasibility.hpp"
#include "vertiflow/core/objective.hpp"
#include "vertiflow/linearize/discretization.hpp"
#include "vertiflow/linearize/network_model.hpp"
#include "vertiflow/milp/solver.hpp"
#include "vertiflow/par/kernels.hpp"
#include "vertiflow/solve/exact.hpp"
#include "vertiflow/solve/oracle.hpp"

namespace {

using namespace vertiflow;
using vertiflow::testing::fill_matrices;
using vertiflow::testing::make_corridor_instance;
using vertiflow::testing::make_corridor_plan;

// Three demand points, three candidates, each demand point within courier
// range of exactly one candidate, demand flowing in a cycle 0 -> 1 -> 2 -> 0.
// Every served pair forces one specific route, and the asymmetric rates
// (0.20 / 0.15 / 0.10 kg/min) leave every vertiport flow-imbalanced, so
// rebalancing flights are always part of the optimum.
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

// Structural invariants every solver trace must satisfy, regardless of the
// instance: bounds only ever tighten, time and grid size only ever grow,
// the polish step never worsens the master's objective within an iteration,
// and no offered warm start is ever rejected (warm == 0).
void check_trace_invariants(const solve::ExactResult& res) {
  double prev_ub = kInf;
  double prev_lb = -kInf;
  double prev_gap = kInf;
  double prev_seconds = 0.0;
  long prev_points = 0;
  double master_obj = kInf;
  for (const solve::TraceRow& r : res.trace.rows) {
    CHECK((r.model == "MC" || r.model == "MCN" || r.model == "MR"));
    CHECK(r.ub <= prev_ub + 1e-12);
    CHECK(r.lb >= prev_lb - 1e-12);
    CHECK(r.gap <= prev_gap + 1e-12);
    CHECK(r.seconds >= prev_seconds);
    CHECK(r.grid_points >= prev_points);
    CHECK(r.warm != 0);
    if (r.model == "MC") master_obj = r.objective;
    if (r.model == "MCN" && master_obj < kInf) {
      CHECK(r.objective <= master_obj + 1e-9);
    }
    prev_ub = r.ub;
    prev_lb = r.lb;
    prev_gap = r.gap;
    prev_seconds = r.seconds;
    prev_points = r.grid_points;
  }
  if (!res.trace.rows.empty()) {
    const solve::TraceRow& last = res.trace.rows.back();
    CHECK(last.ub == res.upper_bound);
    CHECK(last.lb == res.lower_bound);
  }
}

}  // namespace

TEST_SUITE("solve") {

TEST_CASE("oracle refuses instances beyond the exhaustive-search caps") {
  SUBCASE("too many candidate sites") {
    Instance inst = make_corridor_instance();
    inst.candidates.push_back({3.0, 0.5});
    inst.candidates.push_back({5.0, 0.5});
    inst.candidates.push_back({7.0, 0.5});
    fill_matrices(inst);
    CHECK_THROWS_AS(solve::solve_oracle(inst), DomainError);
  }
  SUBCASE("too many demand pairs") {
    Instance inst = make_corridor_instance();
    inst.demand = {{0, 1, 0.01}, {0, 2, 0.01}, {0, 3, 0.01},
                   {1, 0, 0.01}, {1, 2, 0.01}, {1, 3, 0.01},
                   {2, 0, 0.01}, {2, 1, 0.01}, {2, 3, 0.01}};
    fill_matrices(inst);
    CHECK_THROWS_AS(solve::solve_oracle(inst), DomainError);
  }
  SUBCASE("too many apron options") {
    Instance inst = make_corridor_instance();
    inst.apron_options = {1, 2, 3, 4};
    CHECK_THROWS_AS(solve::solve_oracle(inst), DomainError);
  }
  SUBCASE("non-positive grid unit") {
    solve::OracleOptions opts;
    opts.grid_unit = 0.0;
    CHECK_THROWS_AS(solve::solve_oracle(make_corridor_instance(), opts), DomainError);
  }
  SUBCASE("allocation combination cap") {
    solve::OracleOptions opts;
    opts.max_combos = 10;  // the corridor enumerates 11 route allocations
    CHECK_THROWS_AS(solve::solve_oracle(make_corridor_instance(), opts), DomainError);
  }
}

TEST_CASE("oracle serves zero demand with the empty plan") {
  Instance inst = make_corridor_instance();
  inst.demand.clear();
  fill_matrices(inst);
  const solve::OracleResult res = solve::solve_oracle(inst);
  CHECK(res.feasible);
  CHECK(res.objective == 0.0);
  CHECK(res.plan.x == std::vector<std::uint8_t>{0, 0});
  CHECK(res.plan.fleet_size == 0);
  CHECK(res.plan.y.empty());
}

TEST_CASE("oracle on the corridor: frozen optima and forced routing") {
  const Instance inst = make_corridor_instance();

  // Each demand point reaches exactly one candidate (courier range 5 km),
  // so any served pair must route tail->head through these sites.
  const int tail_of[4] = {0, 1, 0, 1};

  solve::OracleOptions coarse;
  coarse.grid_unit = 0.05;
  const solve::OracleResult res = solve::solve_oracle(inst, coarse);
  CHECK(res.feasible);
  CHECK(res.objective == doctest::Approx(70.4903).epsilon(1e-9));
  CHECK(res.combos == 11);
  CHECK(res.plan.fleet_size == 1);
  REQUIRE(res.plan.rho.size() == 2);
  CHECK(res.plan.rho[0] == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(res.plan.rho[1] == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(res.plan.y.size() == 3);  // all three pairs are served
  for (const RouteValue& e : res.plan.y) {
    CHECK(e.value == 1.0);
    CHECK(e.i == tail_of[e.o]);
    CHECK(e.j == tail_of[e.d]);
    CHECK(e.i != e.j);
  }
  // Served fraction is pinned to the tail utilisation.
  for (const RouteValue& a : res.plan.alpha) {
    CHECK(a.value == doctest::Approx(res.plan.rho[a.i]).epsilon(1e-12));
  }
  const FeasibilityReport rep = check_nonlinear_feasibility(inst, res.plan);
  CHECK(rep.pass);
  CHECK(rep.worst_violation() <= 1e-8);
  CHECK(evaluate_objective(inst, res.plan) == doctest::Approx(res.objective).epsilon(1e-12));

  const solve::OracleResult fine = solve::solve_oracle(inst);  // default 0.005
  CHECK(fine.objective == doctest::Approx(70.46178).epsilon(1e-9));
  CHECK(fine.plan.rho[0] == doctest::Approx(0.14).epsilon(1e-12));
  CHECK(fine.plan.rho[1] == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(check_nonlinear_feasibility(inst, fine.plan).pass);
}

TEST_CASE("oracle grids are monotone and overflow forms agree below both caps") {
  const Instance inst = make_corridor_instance();
  auto value = [&](double unit, OverflowForm form) {
    solve::OracleOptions opts;
    opts.grid_unit = unit;
    opts.overflow_form = form;
    return solve::solve_oracle(inst, opts).objective;
  };
  const double v05 = value(0.05, OverflowForm::literal);
  const double v01 = value(0.01, OverflowForm::literal);
  const double v005 = value(0.005, OverflowForm::literal);
  // Finer grids contain the coarser ones, so optima can only improve.
  CHECK(v005 <= v01 + 1e-9);
  CHECK(v01 <= v05 + 1e-9);
  // The corridor optimum sits below both overflow caps (0.368 for the
  // direct form at 3 aprons, 0.99 for the literal form), so the choice of
  // form cannot change the answer.
  CHECK(value(0.005, OverflowForm::direct) == doctest::Approx(v005).epsilon(1e-12));
}

TEST_CASE("oracle is deterministic across serial and parallel scans") {
  const Instance corridor = make_corridor_instance();
  const Instance triangle = make_triangle_instance(0.5);
  solve::OracleOptions opts;
  opts.grid_unit = 0.05;

  const int prev = par::set_threads(1);
  const solve::OracleResult c1 = solve::solve_oracle(corridor, opts);
  const solve::OracleResult t1 = solve::solve_oracle(triangle, opts);
  par::set_threads(4);
  const solve::OracleResult c2 = solve::solve_oracle(corridor, opts);
  const solve::OracleResult t2 = solve::solve_oracle(triangle, opts);
  par::set_threads(prev);

  CHECK(c1.objective == c2.objective);
  CHECK(c1.plan.rho == c2.plan.rho);
  CHECK(c1.combos == c2.combos);
  CHECK(c1.points == c2.points);
  CHECK(t1.objective == t2.objective);
  CHECK(t1.plan.rho == t2.plan.rho);
  CHECK(t1.points == t2.points);
}

TEST_CASE("oracle on the triangle: three-way rebalancing with frozen optima") {
  const Instance inst = make_triangle_instance(0.5);

  solve::OracleOptions coarse;
  coarse.grid_unit = 0.1;
  const solve::OracleResult res = solve::solve_oracle(inst, coarse);
  CHECK(res.feasible);
  CHECK(res.objective == doctest::Approx(281.3428993451).epsilon(1e-9));
  CHECK(res.combos == 18);
  CHECK(res.plan.fleet_size == 4);
  REQUIRE(res.plan.rho.size() == 3);
  for (double r : res.plan.rho) CHECK(r == doctest::Approx(0.5).epsilon(1e-12));
  // The circular demand is asymmetric, so rebalancing flights must flow.
  double total_phi = 0.0;
  for (const auto& row : res.plan.phi) {
    for (double v : row) total_phi += v;
  }
  CHECK(total_phi > 1e-6);
  const FeasibilityReport rep = check_nonlinear_feasibility(inst, res.plan);
  CHECK(rep.pass);
  CHECK(rep.worst_violation() <= 1e-8);
  CHECK(evaluate_objective(inst, res.plan) == doctest::Approx(res.objective).epsilon(1e-12));

  solve::OracleOptions finer;
  finer.grid_unit = 0.05;
  const solve::OracleResult res2 = solve::solve_oracle(inst, finer);
  CHECK(res2.objective == doctest::Approx(281.2612993451).epsilon(1e-9));
  CHECK(res2.objective <= res.objective + 1e-9);
  CHECK(check_nonlinear_feasibility(inst, res2.plan).pass);
}

TEST_CASE("exact solver on the corridor: one-iteration convergence, bounds sandwich") {
  const Instance inst = make_corridor_instance();
  const solve::ExactResult res = solve::solve_exact(inst);

  CHECK(res.status == solve::ExactStatus::converged);
  CHECK(res.iterations == 1);
  REQUIRE(res.trace.rows.size() == 3);
  CHECK(res.upper_bound == doctest::Approx(70.4572).epsilon(1e-9));
  CHECK(res.lower_bound == doctest::Approx(res.upper_bound).epsilon(1e-9));
  CHECK(res.gap <= 1e-9);

  // Static bounds sandwich against the independent oracle: the initial-grid
  // conservative objective is an upper bound on the true optimum, which the
  // 0.005-grid oracle over-estimates only by quantisation, and the relaxed
  // bound stays below it.
  const double oracle_value = solve::solve_oracle(inst).objective;  // 70.46178
  CHECK(res.trace.rows[0].model == "MC");
  CHECK(res.trace.rows[0].objective == doctest::Approx(70.481960789).epsilon(1e-8));
  CHECK(res.trace.rows[0].objective >= oracle_value - 1e-6);
  CHECK(res.lower_bound <= oracle_value + 1e-6);

  REQUIRE(res.incumbent.has_value());
  const FeasibilityReport rep = check_nonlinear_feasibility(inst, *res.incumbent);
  CHECK(rep.pass);
  CHECK(rep.worst_violation() <= 1e-8);
  CHECK(evaluate_objective(inst, *res.incumbent) ==
        doctest::Approx(res.upper_bound).epsilon(1e-9));

  CHECK(res.trace.rows[0].grid_points == 12);  // 6-point initial grid x 2 sites
  CHECK(res.trace.rows[2].grid_points == 18);  // after the polish refinement
  check_trace_invariants(res);

  // CSV round-trip: pinned header, one line per row, seven fields each.
  const std::string csv = res.trace.to_csv();
  CHECK(csv.rfind("iteration,model,objective,ub,lb,gap,seconds\n", 0) == 0);
  CHECK(csv.find("1,MC,70.48196079,") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == res.trace.rows.size() + 1);
}

TEST_CASE("exact solver on the triangle: two-iteration refinement, warm chain") {
  const Instance inst = make_triangle_instance(0.60);
  const solve::ExactResult res = solve::solve_exact(inst);

  CHECK(res.status == solve::ExactStatus::converged);
  CHECK(res.iterations == 2);
  REQUIRE(res.trace.rows.size() == 6);
  CHECK(res.upper_bound == doctest::Approx(421.483775674).epsilon(1e-9));
  CHECK(res.lower_bound == doctest::Approx(421.483692005).epsilon(1e-9));
  CHECK(res.gap <= 0.01);

  const char* expected_models[6] = {"MC", "MCN", "MR", "MC", "MCN", "MR"};
  const long expected_points[6] = {18, 18, 27, 34, 34, 37};
  for (int k = 0; k < 6; ++k) {
    CHECK(res.trace.rows[k].model == expected_models[k]);
    CHECK(res.trace.rows[k].grid_points == expected_points[k]);
    CHECK(res.trace.rows[k].iteration == (k < 3 ? 1 : 2));
  }
  // The iteration-2 master is warm-started from the iteration-1 polish plan
  // and the projection must survive the nested refinement.
  CHECK(res.trace.rows[3].warm == 1);
  // The first relaxed bound is loose; refinement tightens it to the optimum.
  CHECK(res.trace.rows[2].objective == doctest::Approx(351.693611605).epsilon(1e-9));
  check_trace_invariants(res);

  REQUIRE(res.incumbent.has_value());
  CHECK(check_nonlinear_feasibility(inst, *res.incumbent).pass);
}

TEST_CASE("exact solver proves infeasibility on the initial grid and after refining") {
  SUBCASE("market share beyond apron capacity: infeasible immediately") {
    Instance inst = make_corridor_instance();
    inst.market_share = 0.75;
    const solve::ExactResult res = solve::solve_exact(inst);
    CHECK(res.status == solve::ExactStatus::infeasible);
    CHECK(!res.incumbent.has_value());
    CHECK(res.iterations == 1);
    REQUIRE(res.trace.rows.size() == 2);
    CHECK(res.trace.rows[0].model == "MC");
    CHECK(res.trace.rows[1].model == "MR");
    CHECK(std::isinf(res.trace.rows[1].objective));
    CHECK(res.upper_bound == kInf);
    CHECK(res.lower_bound == -kInf);
  }
  SUBCASE("relaxed model turns infeasible only after refinement") {
    const Instance inst = make_triangle_instance(0.65);
    const solve::ExactResult res = solve::solve_exact(inst);
    CHECK(res.status == solve::ExactStatus::infeasible);
    CHECK(!res.incumbent.has_value());
    CHECK(res.iterations == 2);
    REQUIRE(res.trace.rows.size() == 4);
    // The first relaxed solve is feasible and leaves a bound behind; the
    // refined relaxation then proves the true problem infeasible (mirror
    // cuts tighten as the grid nests).
    CHECK(res.trace.rows[1].objective == doctest::Approx(421.800233951).epsilon(1e-9));
    CHECK(std::isinf(res.trace.rows[3].objective));
    CHECK(res.lower_bound == doctest::Approx(421.800233951).epsilon(1e-9));
  }
}

TEST_CASE("exact solver reports grid exhaustion when spacing blocks refinement") {
  const Instance inst = make_triangle_instance(0.60);
  solve::SolverConfig cfg;
  cfg.min_gap = 0.3;   // initial-grid spacings are all below this
  cfg.gap_eps = 1e-9;  // unreachable, so refinement is the only way forward
  const solve::ExactResult res = solve::solve_exact(inst, cfg);
  CHECK(res.status == solve::ExactStatus::grid_exhausted);
  CHECK(res.iterations == 1);
  CHECK(res.upper_bound == doctest::Approx(421.4859311392).epsilon(1e-9));
  CHECK(res.lower_bound == doctest::Approx(351.6936116051).epsilon(1e-9));
  CHECK(res.gap == doctest::Approx(0.198446367).epsilon(1e-6));
  REQUIRE(res.incumbent.has_value());
  CHECK(check_nonlinear_feasibility(inst, *res.incumbent).pass);
  check_trace_invariants(res);
}

TEST_CASE("exact solver handles zero demand") {
  Instance inst = make_corridor_instance();
  inst.demand.clear();
  fill_matrices(inst);
  const solve::ExactResult res = solve::solve_exact(inst);
  CHECK(res.status == solve::ExactStatus::converged);
  CHECK(res.upper_bound == 0.0);
  CHECK(res.lower_bound == 0.0);
  REQUIRE(res.incumbent.has_value());
  CHECK(res.incumbent->x == std::vector<std::uint8_t>{0, 0});
}

TEST_CASE("solver configuration is validated") {
  const Instance inst = make_corridor_instance();
  solve::SolverConfig cfg;
  SUBCASE("gap target zero") { cfg.gap_eps = 0.0; }
  SUBCASE("gap target one") { cfg.gap_eps = 1.0; }
  SUBCASE("total time zero") { cfg.total_time_s = 0.0; }
  SUBCASE("solve time negative") { cfg.solve_time_s = -1.0; }
  SUBCASE("minimum spacing zero") { cfg.min_gap = 0.0; }
  SUBCASE("polish grid unit zero") { cfg.neighborhood_unit = 0.0; }
  CHECK_THROWS_AS(solve::solve_exact(inst, cfg), DomainError);
}

TEST_CASE("polish step equals the frozen-location conservative model") {
  const Instance inst = make_corridor_instance();
  const PlanSolution plan = make_corridor_plan(inst);
  const solve::SolverConfig cfg;

  // Build the same model the polish step builds: locations frozen, uniform
  // utilisation grid, incumbent utilisations forced onto the grid.
  linearize::Discretization disc = linearize::Discretization::uniform(
      inst.num_candidates(), cfg.neighborhood_unit, inst.service_level_cap, cfg.min_gap);
  for (int c = 0; c < inst.num_candidates(); ++c) {
    const double r = plan.rho[c];
    if (r > 0.0 && r < inst.service_level_cap) disc.ensure_point(c, r);
  }
  linearize::BuildOptions opts = cfg.build;
  opts.fix_x = {1, 1};
  const linearize::BuiltNetwork net = linearize::build_conservative(inst, disc, opts);
  milp::MilpOptions mopts;
  mopts.time_limit_s = cfg.solve_time_s;
  const milp::MilpResult direct = milp::solve_milp(net.model, mopts);
  REQUIRE(direct.status == milp::MilpStatus::optimal);

  const solve::NeighborhoodResult nres = solve::neighborhood_search(inst, {1, 1}, plan, cfg);
  CHECK(nres.status == milp::MilpStatus::optimal);
  CHECK(nres.warm_accepted);
  CHECK(nres.objective == doctest::Approx(direct.objective).epsilon(1e-9));
  CHECK(nres.objective == doctest::Approx(70.4572).epsilon(1e-9));
  // A feasible incumbent on the grid bounds the polish objective from above.
  CHECK(nres.objective <= evaluate_objective(inst, plan) + 1e-9);

  const solve::NeighborhoodResult again = solve::neighborhood_search(inst, {1, 1}, plan, cfg);
  CHECK(again.objective == nres.objective);

  CHECK_THROWS_AS(solve::neighborhood_search(inst, {1}, plan, cfg), DomainError);
  PlanSolution bad = plan;
  bad.rho.resize(1);
  CHECK_THROWS_AS(solve::neighborhood_search(inst, {1, 1}, bad, cfg), DomainError);
}

TEST_CASE("exact solver traces are deterministic across runs") {
  const Instance inst = make_triangle_instance(0.60);
  const solve::ExactResult a = solve::solve_exact(inst);
  const solve::ExactResult b = solve::solve_exact(inst);
  CHECK(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  CHECK(a.upper_bound == b.upper_bound);
  CHECK(a.lower_bound == b.lower_bound);
  REQUIRE(a.trace.rows.size() == b.trace.rows.size());
  for (std::size_t k = 0; k < a.trace.rows.size(); ++k) {
    const solve::TraceRow& ra = a.trace.rows[k];
    const solve::TraceRow& rb = b.trace.rows[k];
    CHECK(ra.iteration == rb.iteration);
    CHECK(ra.model == rb.model);
    CHECK(ra.objective == rb.objective);
    CHECK(ra.ub == rb.ub);
    CHECK(ra.lb == rb.lb);
    CHECK(ra.gap == rb.gap);
    CHECK(ra.grid_points == rb.grid_points);
    CHECK(ra.warm == rb.warm);
  }
}

}  // TEST_SUITE("solve")
