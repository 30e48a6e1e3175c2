// Tests for the piecewise-linear cut machinery and the bounding MILP builders.
//
// The cut formulas are checked against hand-computed values and against
// randomized dominance properties of f(rho) = rho/(1-rho); the builders are
// checked on the corridor fixture, whose model shape (variable and row
// counts) is small enough to enumerate by hand in the comments below.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vertiflow/core/feasibility.hpp"
#include "vertiflow/core/objective.hpp"
#include "vertiflow/linearize/discretization.hpp"
#include "vertiflow/linearize/network_model.hpp"
#include "vertiflow/milp/model.hpp"
#include "vertiflow/milp/solver.hpp"

namespace {

using namespace vertiflow;
using namespace vertiflow::linearize;
using vertiflow::testing::make_corridor_instance;
using vertiflow::testing::make_corridor_plan;

double f_exact(double rho) { return rho / (1.0 - rho); }

const milp::Row* find_row(const milp::MilpModel& m, const std::string& name) {
  for (const auto& r : m.rows) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

int rows_with_prefix(const milp::MilpModel& m, const std::string& prefix) {
  int n = 0;
  for (const auto& r : m.rows) {
    if (r.name.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

int vars_with_prefix(const milp::MilpModel& m, const std::string& prefix) {
  int n = 0;
  for (const auto& v : m.vars) {
    if (v.name.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("linearize") {

TEST_CASE("tangent intersection point: worked value and betweenness") {
  // Tangents of f at 0 (y = rho) and at 0.5 (y = 4 rho - 1) cross where
  // rho = 4 rho - 1, i.e. rho = 1/3 = (0 + 0.5 - 0) / (2 - 0 - 0.5).
  CHECK(intersection_point(0.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(intersection_point(0.5, 0.5), DomainError);   // degenerate
  CHECK_THROWS_AS(intersection_point(0.6, 0.5), DomainError);   // reversed
  CHECK_THROWS_AS(intersection_point(-0.1, 0.5), DomainError);  // below range
  CHECK_THROWS_AS(intersection_point(0.5, 1.0), DomainError);   // f diverges at 1

  std::mt19937 rng(718214u);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int t = 0; t < 2000; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (!(a < b)) continue;
    const double m = intersection_point(a, b);
    CHECK(m > a);
    CHECK(m < b);
    // Both tangents pass through the intersection by definition.
    CHECK(tangent_value(a, m) ==
          doctest::Approx(tangent_value(b, m)).epsilon(1e-9));
  }
}

TEST_CASE("secant cuts overestimate on their segment and underestimate outside") {
  // Secant of f over [0, 0.5] is the line through (0,0) and (0.5,1): y = 2 rho.
  CHECK(secant_value(0.0, 0.5, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_exact(0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(secant_value(0.0, 0.5, 0.25) >= f_exact(0.25));

  // Exact at both breakpoints.
  CHECK(secant_value(0.3, 0.8, 0.3) == doctest::Approx(f_exact(0.3)).epsilon(1e-12));
  CHECK(secant_value(0.3, 0.8, 0.8) == doctest::Approx(f_exact(0.8)).epsilon(1e-12));

  CHECK_THROWS_AS(secant_cut(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(secant_cut(0.5, 0.2), DomainError);
  CHECK_THROWS_AS(secant_cut(0.0, 1.0), DomainError);

  // The LinearCut form agrees with the direct evaluation.
  const LinearCut cut = secant_cut(0.2, 0.7);
  CHECK(cut.at(0.33) == doctest::Approx(secant_value(0.2, 0.7, 0.33)).epsilon(1e-15));

  std::mt19937 rng(413711u);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int t = 0; t < 400; ++t) {
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    if (!(hi - lo > 1e-6)) continue;
    for (int s = 0; s <= 20; ++s) {
      const double rho = lo + (hi - lo) * s / 20.0;       // inside the segment
      CHECK(secant_value(lo, hi, rho) >= f_exact(rho) - 1e-12);
    }
    const double below = lo * u(rng);                     // outside, below lo
    CHECK(secant_value(lo, hi, below) <= f_exact(below) + 1e-12);
    const double above = hi + (0.99 - hi) * u(rng);       // outside, above hi
    CHECK(secant_value(lo, hi, above) <= f_exact(above) + 1e-12);
  }
}

TEST_CASE("tangent cuts underestimate everywhere and touch at the tangency point") {
  // Tangent of f at 0.5: slope 1/(1-0.5)^2 = 4, value 4*0.75 - 1 = 2 at 0.75,
  // below f(0.75) = 3.
  CHECK(tangent_value(0.5, 0.75) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f_exact(0.75) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(tangent_value(0.5, 0.75) <= f_exact(0.75));

  CHECK_THROWS_AS(tangent_cut(-0.01), DomainError);
  CHECK_THROWS_AS(tangent_cut(1.0), DomainError);

  std::mt19937 rng(90157u);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int t = 0; t < 400; ++t) {
    const double at = u(rng);
    CHECK(tangent_value(at, at) == doctest::Approx(f_exact(at)).epsilon(1e-11));
    for (int s = 0; s < 20; ++s) {
      const double rho = u(rng);
      CHECK(tangent_value(at, rho) <= f_exact(rho) + 1e-12);
    }
  }
}

TEST_CASE("grid factories, validation, and segment lookup") {
  const Discretization init = Discretization::initial(2, 0.99);
  REQUIRE(init.num_candidates() == 2);
  CHECK(init.grid(0) == std::vector<double>{0.0, 0.3, 0.6, 0.8, 0.9, 0.99});
  CHECK(init.grid(1) == init.grid(0));
  CHECK(init.segments(0) == 5);
  CHECK(init.min_gap() == doctest::Approx(0.01));

  // Points at or above the utilisation cap are dropped; the cap closes it.
  CHECK(Discretization::initial(1, 0.85).grid(0) ==
        std::vector<double>{0.0, 0.3, 0.6, 0.8, 0.85});

  CHECK(Discretization::uniform(1, 0.5, 0.99).grid(0) ==
        std::vector<double>{0.0, 0.5, 0.99});
  const std::vector<double> fifths = Discretization::uniform(1, 0.2, 0.99).grid(0);
  const std::vector<double> want{0.0, 0.2, 0.4, 0.6, 0.8, 0.99};
  REQUIRE(fifths.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    CHECK(fifths[k] == doctest::Approx(want[k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Discretization::uniform(1, 0.0, 0.99), DomainError);

  CHECK_THROWS_AS(Discretization(1, {0.0}, 0.01), DomainError);         // too short
  CHECK_THROWS_AS(Discretization(1, {0.1, 0.5}, 0.01), DomainError);    // must start at 0
  CHECK_THROWS_AS(Discretization(1, {0.0, 0.5, 0.5}, 0.01), DomainError);  // not increasing
  CHECK_THROWS_AS(Discretization(1, {0.0, 0.5, 1.2}, 0.01), DomainError);  // beyond 1
  CHECK_THROWS_AS(Discretization(1, {0.0, 0.5}, 0.0), DomainError);     // gap must be > 0

  const Discretization d(1, {0.0, 0.5, 0.99}, 0.05);
  CHECK(d.segment_of(0, 0.0) == 0);
  CHECK(d.segment_of(0, 0.25) == 0);
  CHECK(d.segment_of(0, 0.5) == 1);  // breakpoint starts the upper segment
  CHECK(d.segment_of(0, 0.7) == 1);
  CHECK(d.segment_of(0, 0.99) == 1);  // the top point belongs to the last segment
  CHECK_THROWS_AS(d.segment_of(0, -0.1), DomainError);
  CHECK_THROWS_AS(d.segment_of(0, 0.995), DomainError);
  CHECK_THROWS_AS(d.grid(1), DomainError);
}

TEST_CASE("bar points pin the ends and interleave the grid") {
  const Discretization d(1, {0.0, 0.5, 0.99}, 0.01);
  const std::vector<double> bar = d.bar_points(0);
  REQUIRE(bar.size() == 3);
  CHECK(bar[0] == 0.0);
  CHECK(bar[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(bar[2] == 0.99);

  const Discretization init = Discretization::initial(1, 0.99);
  const auto& g = init.grid(0);
  const std::vector<double> b = init.bar_points(0);
  REQUIRE(b.size() == g.size());
  CHECK(b.front() == g.front());
  CHECK(b.back() == g.back());
  for (std::size_t k = 1; k + 1 < b.size(); ++k) {
    CHECK(b[k] > g[k - 1]);
    CHECK(b[k] < g[k]);
  }
}

TEST_CASE("midpoint refinement: worked examples and idempotence") {
  SUBCASE("interior target inserts itself plus both midpoints") {
    Discretization d(1, {0.0, 0.5, 0.99}, 0.05);
    CHECK(d.refine(0, 0.3) == 3);
    CHECK(d.grid(0) == std::vector<double>{0.0, 0.15, 0.3, 0.4, 0.5, 0.99});

    // Refining at the same utilisation again proposes {0.3, 0.3, 0.35}; all
    // are within the spacing threshold of existing points, so nothing moves.
    CHECK(d.refine(0, 0.3) == 0);
    CHECK(d.grid(0) == std::vector<double>{0.0, 0.15, 0.3, 0.4, 0.5, 0.99});
  }

  SUBCASE("target hugging an existing point only yields the far midpoint") {
    Discretization d(1, {0.0, 0.5, 0.99}, 0.05);
    // Proposals are {0.02, 0.01, 0.26}; the first two sit within 0.05 of 0.
    CHECK(d.refine(0, 0.02) == 1);
    CHECK(d.grid(0) == std::vector<double>{0.0, 0.26, 0.5, 0.99});
  }

  SUBCASE("per-candidate targets and input validation") {
    Discretization d(2, {0.0, 0.5, 0.99}, 0.05);
    CHECK(d.refine_all({0.3, 0.02}) == 4);  // 3 on candidate 0, 1 on candidate 1
    CHECK(d.grid(0).size() == 6);
    CHECK(d.grid(1).size() == 4);
    CHECK_THROWS_AS(d.refine_all({0.3}), DomainError);
    CHECK_THROWS_AS(d.refine(0, -0.2), DomainError);
    CHECK_THROWS_AS(d.refine(0, 1.0), DomainError);
    CHECK_THROWS_AS(d.refine(2, 0.3), DomainError);
  }

  SUBCASE("inserted points never create a pair tighter than the threshold") {
    std::mt19937 rng(55519u);
    std::uniform_real_distribution<double> u(0.0, 0.99);
    Discretization d(1, {0.0, 0.3, 0.6, 0.8, 0.9, 0.99}, 0.02);
    for (int t = 0; t < 200; ++t) d.refine(0, u(rng));
    const auto& g = d.grid(0);
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
      CHECK(g[k] < g[k + 1]);
      // 0.9 -> 0.99 is an original pair; every pair touched by refinement
      // keeps the min_gap spacing.  All original gaps here exceed it anyway.
      CHECK(g[k + 1] - g[k] > d.min_gap());
    }
  }
}

TEST_CASE("ensure_point forces exact membership regardless of spacing") {
  Discretization d(1, {0.0, 0.3, 0.99}, 0.05);
  d.ensure_point(0, 0.301);  // would be rejected by refine's spacing rule
  CHECK(d.grid(0) == std::vector<double>{0.0, 0.3, 0.301, 0.99});
  d.ensure_point(0, 0.3);  // already present: no duplicate
  CHECK(d.grid(0).size() == 4);
  CHECK_THROWS_AS(d.ensure_point(0, -0.01), DomainError);
  CHECK_THROWS_AS(d.ensure_point(0, 0.995), DomainError);
  CHECK_THROWS_AS(d.ensure_point(1, 0.5), DomainError);

  const nlohmann::json j = d.to_json();
  CHECK(j.at("min_gap").get<double>() == doctest::Approx(0.05));
  CHECK(j.at("grids").size() == 1);
  CHECK(j.at("grids")[0].size() == 4);
  CHECK(j.at("bar_points")[0].size() == 4);
}

TEST_CASE("conservative corridor model has the documented shape") {
  const Instance inst = make_corridor_instance();
  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);
  const BuiltNetwork net = build_conservative(inst, disc);
  const milp::MilpModel& m = net.model;
  const NetworkLayout& lay = net.layout;

  // Corridor: 2 candidates, apron options {1,2,3}, 3 feasible routes
  // ((0,0,1,1), (1,1,0,0), (2,0,1,3)), flight arcs (0,1) and (1,0) both
  // route-carrying, grid {0, 0.5, 0.99} = 2 segments per candidate.
  //
  // Variables: x 2, z 6, Gamma 1, y 3, alpha 3, psi 2, phi 2, rho 2,
  //            theta 2, beta 4, pi 4, w 6                      -> 37.
  CHECK(m.num_vars() == 37);
  // Rows: budget 1, apron_pick 2, apron_capacity 1, open 6, one_route 3,
  //       rho_cap 2, market 1, alpha 9, flight_volume 2, flow_balance 2,
  //       fleet 1, fleet_cut 4, seg 6, pi links 12, charge 2,
  //       apron_overflow 2, w links 18                          -> 74.
  CHECK(m.num_rows() == 74);

  REQUIRE(lay.table.size() == 3);
  CHECK(lay.table.routes[0].o == 0);
  CHECK(lay.table.routes[2].o == 2);
  CHECK(lay.psi_arcs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
  CHECK(lay.phi_arcs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});

  CHECK(m.vars[lay.x_var(0)].name == "x_0");
  CHECK(m.vars[lay.x_var(0)].kind == milp::VarKind::binary);
  const milp::Var& gamma = m.vars[lay.gamma];
  CHECK(gamma.name == "Gamma");
  CHECK(gamma.kind == milp::VarKind::integer);
  CHECK(gamma.ub == doctest::Approx(6.0));  // 2 candidates x 3 aprons max
  CHECK(gamma.obj == doctest::Approx(70.0));
  CHECK(m.vars[lay.rho_var(0)].ub == doctest::Approx(0.99));
  // Route (0,0,1,1): courier legs 0.5 km each at 1.25 CNY/(km*kg),
  // weighted by the 0.20 kg/min demand rate.
  CHECK(m.vars[lay.alpha_var(0)].obj == doctest::Approx(0.2 * 1.25).epsilon(1e-12));
  // Flight arc (0,1): 10 km at 0.51 CNY/(km*kg) pooled over 4 kg.
  CHECK(m.vars[lay.psi_var(0)].obj == doctest::Approx(0.51 * 10.0 * 4.0).epsilon(1e-12));

  const milp::Row* market = find_row(m, "market_share");
  REQUIRE(market != nullptr);
  CHECK(market->sense == milp::RowSense::ge);
  CHECK(market->rhs == doctest::Approx(0.2 * 0.36).epsilon(1e-12));

  // Conservative fleet cut on segment [0, 0.5]: theta >= 2 rho.
  const milp::Row* cut = find_row(m, "fleet_cut_0_1");
  REQUIRE(cut != nullptr);
  CHECK(cut->sense == milp::RowSense::ge);
  CHECK(cut->rhs == doctest::Approx(0.0));
  REQUIRE(cut->coefs.size() == 2);
  CHECK(cut->coefs[0].first == lay.rho_var(0));
  CHECK(cut->coefs[0].second == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(cut->coefs[1].first == lay.theta_var(0));
  CHECK(cut->coefs[1].second == doctest::Approx(1.0));

  CHECK(rows_with_prefix(m, "fleet_cut_") == 4);
  CHECK(rows_with_prefix(m, "w_le_z_") == 6);
  CHECK(rows_with_prefix(m, "apron_overflow_") == 2);
  CHECK(vars_with_prefix(m, "beta_") == 4);

  // Conservative gates are the tangent-intersection points.
  REQUIRE(lay.gate_points.size() == 2);
  CHECK(lay.gate_points[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // The relaxed twin has the same shape; only cut coefficients and gates
  // differ (plain grid gates, tangent fleet cuts).
  const BuiltNetwork rel = build_relaxed(inst, disc);
  CHECK(rel.model.num_vars() == 37);
  CHECK(rel.model.num_rows() == 74);
  CHECK(rel.layout.gate_points[0][1] == doctest::Approx(0.5));
  const milp::Row* rcut = find_row(rel.model, "fleet_cut_0_1");
  REQUIRE(rcut != nullptr);
  // Tangent at 0: theta >= rho.
  CHECK(rcut->coefs[0].second == doctest::Approx(-1.0).epsilon(1e-12));

  // Building is pure: two builds serialize identically.
  CHECK(milp::to_lp_format(m) == milp::to_lp_format(build_conservative(inst, disc).model));
}

TEST_CASE("hand-built plan projects onto accepted warm starts of both models") {
  const Instance inst = make_corridor_instance();
  const PlanSolution plan = make_corridor_plan(inst);
  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);

  for (const bool conservative : {true, false}) {
    CAPTURE(conservative);
    const BuiltNetwork net =
        conservative ? build_conservative(inst, disc) : build_relaxed(inst, disc);
    const std::vector<double> assign = plan_to_assignment(inst, net, plan);
    const milp::WarmStartReport rep = milp::validate_warm_start(net.model, assign);
    for (const auto& v : rep.violations) INFO(v);
    CHECK(rep.accepted);
    CHECK(rep.complete);
    CHECK(rep.worst_violation <= 1e-12);
    // 70*3 fleet + 20.4*(0.025+0.025) flights + (0.25+0.125)*0.5 courier.
    CHECK(rep.objective == doctest::Approx(211.2075).epsilon(1e-12));
  }

  // Plans that reference structure outside the model are rejected loudly.
  const BuiltNetwork net = build_conservative(inst, disc);
  PlanSolution bad = plan;
  bad.aprons[0] = 5;  // not an offered apron count
  CHECK_THROWS_AS(plan_to_assignment(inst, net, bad), DomainError);
  bad = plan;
  bad.y.push_back({0, 1, 0, 1, 1.0});  // no such route: origin too far from 1
  CHECK_THROWS_AS(plan_to_assignment(inst, net, bad), DomainError);
}

TEST_CASE("bounding solves sandwich the plan and the upper model is honestly feasible") {
  const Instance inst = make_corridor_instance();
  const PlanSolution plan = make_corridor_plan(inst);
  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);

  const BuiltNetwork cons = build_conservative(inst, disc);
  const BuiltNetwork rel = build_relaxed(inst, disc);

  milp::MilpOptions opts;
  opts.warm_start = plan_to_assignment(inst, cons, plan);
  const milp::MilpResult up = milp::solve_milp(cons.model, opts);
  REQUIRE(up.status == milp::MilpStatus::optimal);
  REQUIRE(up.warm_start_report.has_value());
  CHECK(up.warm_start_report->accepted);

  milp::MilpOptions ropts;
  ropts.warm_start = plan_to_assignment(inst, rel, plan);
  const milp::MilpResult low = milp::solve_milp(rel.model, ropts);
  REQUIRE(low.status == milp::MilpStatus::optimal);

  // Lower bound <= upper bound, and the hand-built plan caps the optimum of
  // the over-constrained model from above.
  CHECK(low.objective <= up.objective + 1e-9);
  CHECK(up.objective <= 211.2075 + 1e-9);
  CHECK(low.objective > 0.0);

  // Over-estimating the queue length makes every incumbent feasible for the
  // original nonlinear model.
  const PlanSolution best = extract_plan(inst, cons, up.x);
  CHECK(best.objective == doctest::Approx(up.objective).epsilon(1e-12));
  const FeasibilityReport rep = check_nonlinear_feasibility(inst, best);
  for (const auto& fam : rep.families) {
    CAPTURE(fam.family);
    CHECK(fam.pass);
  }
  CHECK(rep.pass);
  CHECK(evaluate_objective(inst, best) == doctest::Approx(best.objective).epsilon(1e-9));

  // Round trip: the extracted plan projects back onto an accepted assignment
  // of the same model (theta/beta/pi/w are recomputed, never copied).
  const std::vector<double> again = plan_to_assignment(inst, cons, best);
  const milp::WarmStartReport round = milp::validate_warm_start(cons.model, again);
  for (const auto& v : round.violations) INFO(v);
  CHECK(round.accepted);
  CHECK(round.objective == doctest::Approx(up.objective).epsilon(1e-9));

  // The relaxed incumbent need not be nonlinear-feasible, but it must still
  // extract cleanly.
  const PlanSolution relaxed_plan = extract_plan(inst, rel, low.x);
  CHECK(relaxed_plan.objective == doctest::Approx(low.objective).epsilon(1e-12));
}

TEST_CASE("nested refinement tightens both bounds and keeps the warm start") {
  const Instance inst = make_corridor_instance();
  const PlanSolution plan = make_corridor_plan(inst);

  Discretization disc = Discretization::uniform(2, 0.5, 0.99, 0.01);
  const BuiltNetwork cons0 = build_conservative(inst, disc);
  const BuiltNetwork rel0 = build_relaxed(inst, disc);

  milp::MilpOptions opts;
  opts.warm_start = plan_to_assignment(inst, cons0, plan);
  const milp::MilpResult up0 = milp::solve_milp(cons0.model, opts);
  const milp::MilpResult low0 = milp::solve_milp(rel0.model);
  REQUIRE(up0.status == milp::MilpStatus::optimal);
  REQUIRE(low0.status == milp::MilpStatus::optimal);

  // Refine around the conservative optimum's utilisations (the adaptive
  // loop's step), which only inserts points: the grids stay nested.
  const PlanSolution inc = extract_plan(inst, cons0, up0.x);
  std::vector<double> targets(inst.num_candidates(), 0.0);
  for (int c = 0; c < inst.num_candidates(); ++c) targets[c] = inc.rho[c];
  disc.refine_all(targets);

  const BuiltNetwork cons1 = build_conservative(inst, disc);
  const BuiltNetwork rel1 = build_relaxed(inst, disc);

  // The old conservative incumbent stays feasible after refinement: finer
  // secants only hang lower, extra tangents only help the charging side.
  const std::vector<double> carry = plan_to_assignment(inst, cons1, inc);
  const milp::WarmStartReport rep = milp::validate_warm_start(cons1.model, carry);
  for (const auto& v : rep.violations) INFO(v);
  CHECK(rep.accepted);
  CHECK(rep.objective == doctest::Approx(up0.objective).epsilon(1e-9));

  milp::MilpOptions wopts;
  wopts.warm_start = carry;
  const milp::MilpResult up1 = milp::solve_milp(cons1.model, wopts);
  const milp::MilpResult low1 = milp::solve_milp(rel1.model);
  REQUIRE(up1.status == milp::MilpStatus::optimal);
  REQUIRE(low1.status == milp::MilpStatus::optimal);

  CHECK(up1.objective <= up0.objective + 1e-9);    // upper bound never rises
  CHECK(low1.objective >= low0.objective - 1e-9);  // lower bound never drops
  CHECK(low1.objective <= up1.objective + 1e-9);   // still a sandwich
}

TEST_CASE("a grid containing the incumbent utilisation reproduces f exactly") {
  const Instance inst = make_corridor_instance();
  const PlanSolution plan = make_corridor_plan(inst);

  const Discretization coarse = Discretization::uniform(2, 0.5, 0.99);
  const BuiltNetwork cons = build_conservative(inst, coarse);
  milp::MilpOptions opts;
  opts.warm_start = plan_to_assignment(inst, cons, plan);
  const milp::MilpResult up = milp::solve_milp(cons.model, opts);
  REQUIRE(up.status == milp::MilpStatus::optimal);
  const PlanSolution inc = extract_plan(inst, cons, up.x);

  // Granular grid forced through the incumbent utilisations (the
  // neighborhood-search construction).  It is NOT nested in the coarse grid;
  // acceptance relies purely on the grid containing each rho_i, where the
  // secant overestimate collapses onto f itself.
  Discretization fine = Discretization::uniform(2, 0.2, 0.99);
  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (inc.rho[c] > 0.0 && inc.rho[c] < 0.99) fine.ensure_point(c, inc.rho[c]);
  }
  const BuiltNetwork local = build_conservative(inst, fine);
  const std::vector<double> carry = plan_to_assignment(inst, local, inc);
  const milp::WarmStartReport rep = milp::validate_warm_start(local.model, carry);
  for (const auto& v : rep.violations) INFO(v);
  CHECK(rep.accepted);
  CHECK(rep.worst_violation <= 1e-9);

  milp::MilpOptions lopts;
  lopts.warm_start = carry;
  const milp::MilpResult refined = milp::solve_milp(local.model, lopts);
  REQUIRE(refined.status == milp::MilpStatus::optimal);
  REQUIRE(refined.warm_start_report.has_value());
  CHECK(refined.warm_start_report->accepted);
  // The warm start bounds the restricted solve from above.
  CHECK(refined.objective <= up.objective + 1e-9);
}

TEST_CASE("builder variants: reduced shapes, masks, and fixings") {
  const Instance inst = make_corridor_instance();
  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);

  SUBCASE("core-only shape drops the fleet, charging and overflow machinery") {
    BuildOptions o;
    o.include_fleet = false;
    o.include_charging = false;
    o.include_overflow = false;
    const BuiltNetwork net = build_conservative(inst, disc, o);
    // x 2, z 6, y 3, alpha 3, psi 2, phi 2, rho 2 -> 20 variables;
    // budget 1, apron_pick 2, open 6, one_route 3, rho_cap 2, market 1,
    // alpha 9, flight_volume 2, flow_balance 2 -> 28 rows.
    CHECK(net.model.num_vars() == 20);
    CHECK(net.model.num_rows() == 28);
    CHECK(net.layout.gamma == -1);
    CHECK(net.layout.theta0 == -1);
    CHECK(net.layout.w0 == -1);
    CHECK(find_row(net.model, "apron_capacity") == nullptr);
    const milp::MilpResult r = milp::solve_milp(net.model);
    CHECK(r.status == milp::MilpStatus::optimal);
  }

  SUBCASE("direct overflow form swaps the product variables for one row each") {
    BuildOptions o;
    o.overflow_form = OverflowForm::direct;
    const BuiltNetwork net = build_conservative(inst, disc, o);
    CHECK(net.model.num_vars() == 31);  // 37 minus the six w products
    CHECK(net.model.num_rows() == 56);  // 74 minus the 18 w-linking rows
    CHECK(net.layout.w0 == -1);
    CHECK(rows_with_prefix(net.model, "apron_overflow_") == 2);
    const milp::MilpResult r = milp::solve_milp(net.model);
    REQUIRE(r.status == milp::MilpStatus::optimal);
    const PlanSolution best = extract_plan(inst, net, r.x);
    CHECK(check_nonlinear_feasibility(inst, best, kFeasTol, OverflowForm::direct).pass);
  }

  SUBCASE("masking out one candidate leaves too little to serve the market") {
    BuildOptions o;
    o.allowed = {1, 0};
    const BuiltNetwork net = build_conservative(inst, disc, o);
    CHECK(net.layout.cands == std::vector<int>{0});
    CHECK(net.layout.table.size() == 0);  // every route needs both ends
    const milp::MilpResult r = milp::solve_milp(net.model);
    CHECK(r.status == milp::MilpStatus::infeasible);
  }

  SUBCASE("fixing the location vector") {
    BuildOptions o;
    o.fix_x = {1, 1};
    const BuiltNetwork net = build_conservative(inst, disc, o);
    const milp::MilpResult r = milp::solve_milp(net.model);
    REQUIRE(r.status == milp::MilpStatus::optimal);
    const PlanSolution p = extract_plan(inst, net, r.x);
    CHECK(p.x == std::vector<std::uint8_t>{1, 1});

    BuildOptions closed;
    closed.fix_x = {0, 0};
    const milp::MilpResult none =
        milp::solve_milp(build_conservative(inst, disc, closed).model);
    CHECK(none.status == milp::MilpStatus::infeasible);
  }

  SUBCASE("fixing the route vector") {
    const milp::MilpResult free_opt =
        milp::solve_milp(build_conservative(inst, disc).model);
    REQUIRE(free_opt.status == milp::MilpStatus::optimal);

    BuildOptions o;
    o.fix_y = std::vector<RouteValue>{{0, 0, 1, 1, 1.0}, {1, 1, 0, 0, 1.0}};
    const BuiltNetwork net = build_conservative(inst, disc, o);
    const milp::MilpResult r = milp::solve_milp(net.model);
    REQUIRE(r.status == milp::MilpStatus::optimal);
    CHECK(r.objective >= free_opt.objective - 1e-9);
    const PlanSolution p = extract_plan(inst, net, r.x);
    REQUIRE(p.y.size() == 2);
    CHECK(p.y[0].o == 0);
    CHECK(p.y[1].o == 1);

    BuildOptions bad;
    bad.fix_y = std::vector<RouteValue>{{0, 1, 0, 1, 1.0}};  // not a real route
    CHECK_THROWS_AS(build_conservative(inst, disc, bad), DomainError);
  }
}

TEST_CASE("builder rejects ill-posed inputs") {
  const Instance inst = make_corridor_instance();

  // A breakpoint at 1 would put a pole of f inside the model.
  CHECK_THROWS_AS(build_conservative(inst, Discretization(2, {0.0, 0.5, 1.0}, 0.01)),
                  DomainError);
  // One grid per candidate is mandatory.
  CHECK_THROWS_AS(build_conservative(inst, Discretization::uniform(3, 0.5, 0.99)),
                  DomainError);

  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);
  BuildOptions o;
  o.include_fleet = false;  // charging balances need the fleet machinery
  CHECK_THROWS_AS(build_conservative(inst, disc, o), DomainError);

  BuildOptions ov;
  ov.include_aprons = false;  // overflow rows need apron variables
  CHECK_THROWS_AS(build_conservative(inst, disc, ov), DomainError);

  BuildOptions mask;
  mask.allowed = {1};
  CHECK_THROWS_AS(build_conservative(inst, disc, mask), DomainError);
  mask.allowed = {0, 0};
  CHECK_THROWS_AS(build_conservative(inst, disc, mask), DomainError);

  BuildOptions fx;
  fx.fix_x = {1};
  CHECK_THROWS_AS(build_conservative(inst, disc, fx), DomainError);

  const BuiltNetwork net = build_conservative(inst, disc);
  CHECK_THROWS_AS(extract_plan(inst, net, std::vector<double>(5, 0.0)), DomainError);
}

TEST_CASE("cut dump lists grids, bar points and cut coefficients") {
  const Instance inst = make_corridor_instance();
  const Discretization disc = Discretization::uniform(2, 0.5, 0.99);
  const nlohmann::json j = cuts_to_json(inst, disc);

  REQUIRE(j.at("candidates").size() == 2);
  const nlohmann::json& c0 = j.at("candidates")[0];
  CHECK(c0.at("candidate") == 0);
  CHECK(c0.at("grid") == std::vector<double>{0.0, 0.5, 0.99});
  CHECK(c0.at("bar_points")[1].get<double>() == doctest::Approx(1.0 / 3.0));

  REQUIRE(c0.at("secants").size() == 2);
  CHECK(c0.at("secants")[0].at("slope").get<double>() == doctest::Approx(2.0));
  CHECK(c0.at("secants")[1].at("slope").get<double>() ==
        doctest::Approx(1.0 / (0.5 * 0.01)).epsilon(1e-9));
  REQUIRE(c0.at("tangents").size() == 2);
  CHECK(c0.at("tangents")[1].at("at").get<double>() == doctest::Approx(0.5));
  CHECK(c0.at("tangents")[1].at("slope").get<double>() == doctest::Approx(4.0));
  CHECK(c0.at("tangents")[1].at("intercept").get<double>() == doctest::Approx(-1.0));

  CHECK_THROWS_AS(cuts_to_json(inst, Discretization::uniform(1, 0.5, 0.99)), DomainError);
}

}  // TEST_SUITE
