#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <utility>

#include "vertiflow/bench/modes.hpp"
#include "vertiflow/core/feasibility.hpp"
#include "vertiflow/core/metrics.hpp"
#include "vertiflow/linearize/network_model.hpp"
#include "vertiflow/milp/solver.hpp"

namespace vertiflow::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* status_name(solve::ExactStatus s) {
  switch (s) {
    case solve::ExactStatus::converged:
      return "ok";
    case solve::ExactStatus::time_limit:
      return "time_limit";
    case solve::ExactStatus::grid_exhausted:
      return "grid_exhausted";
    case solve::ExactStatus::infeasible:
      return "infeasible";
  }
  return "unknown";
}

}  // namespace

// ---------------------------------------------------------------- H&S-C ----

Instance courier_variant_instance(const Instance& inst, const CourierParams& params) {
  inst.validate();
  params.validate();
  Instance v = inst;
  if (!v.name.empty()) v.name += "-courier";
  v.drone_daily_cost = params.daily_wage;
  v.flight_time = travel_time_matrix(params, v.candidates);
  v.flight_cost = trip_cost_matrix(params, v.candidates);
  v.pooling_size = params.pooling_size;
  v.payload_capacity = std::max(v.payload_capacity, params.pooling_size);
  v.flight_range_km = 1e6;  // couriers are not range-limited between hubs
  v.validate();
  return v;
}

HsCourierResult solve_hs_courier(const Instance& inst, const CourierParams& params,
                                 const solve::SolverConfig& cfg) {
  HsCourierResult out;
  out.variant = courier_variant_instance(inst, params);
  solve::SolverConfig run = cfg;
  run.build.include_aprons = false;    // no aprons -> no staff-capacity row
  run.build.include_overflow = false;  // no apron queue to overflow
  run.build.include_charging = false;  // couriers do not charge
  run.build.route_options.enforce_flight_range = false;
  out.result = solve::solve_exact(out.variant, run);
  return out;
}

FeasibilityReport check_hs_feasibility(const Instance& variant, const PlanSolution& plan,
                                       double tol) {
  static const std::set<std::string> removed = {"apron_assignment", "apron_capacity",
                                                "apron_overflow", "charge_balance"};
  FeasibilityReport full = check_nonlinear_feasibility(variant, plan, tol);
  FeasibilityReport rep;
  rep.tol = full.tol;
  for (FamilyCheck& f : full.families) {
    if (removed.count(f.family)) continue;
    rep.pass = rep.pass && f.pass;
    rep.families.push_back(std::move(f));
  }
  return rep;
}

// ------------------------------------------------------------- two-stage ---

TwoStageResult two_stage_heuristic(const Instance& inst, const solve::SolverConfig& cfg) {
  inst.validate();
  const auto t0 = Clock::now();
  TwoStageResult out;

  // Stage 1: transport-only model — the queueing machinery (fleet variable
  // and row, charging, apron overflow) is dropped; locations, routes, market
  // share, service-fraction gating and flow balance remain.
  linearize::BuildOptions stage1 = cfg.build;
  stage1.include_fleet = false;
  stage1.include_charging = false;
  stage1.include_overflow = false;
  const linearize::Discretization disc = linearize::Discretization::initial(
      inst.num_candidates(), inst.service_level_cap, cfg.min_gap);
  const linearize::BuiltNetwork net1 = linearize::build_conservative(inst, disc, stage1);
  milp::MilpOptions opt1;
  opt1.time_limit_s = std::min(cfg.solve_time_s, cfg.total_time_s);
  const milp::MilpResult res1 = milp::solve_milp(net1.model, opt1);
  if (!res1.has_incumbent()) {
    out.status = TwoStageStatus::stage1_infeasible;
    out.seconds = elapsed_s(t0);
    return out;
  }
  PlanSolution plan1 = linearize::extract_plan(inst, net1, res1.x);
  out.stage1_objective = plan1.objective;
  out.stage1_plan = std::move(plan1);

  // Stage 2: full conservative model, adaptively refined, with the stage-1
  // location and route choices frozen.
  solve::SolverConfig stage2 = cfg;
  stage2.build.fix_x = out.stage1_plan->x;
  std::vector<RouteValue> routes;
  for (const RouteValue& rv : out.stage1_plan->y) {
    if (rv.value > 0.5) routes.push_back(rv);
  }
  stage2.build.fix_y = std::move(routes);
  stage2.total_time_s = std::max(cfg.total_time_s - elapsed_s(t0), 1e-3);
  out.stage2 = solve::solve_exact(inst, stage2);
  out.objective = out.stage2.upper_bound;
  out.status = out.stage2.status == solve::ExactStatus::infeasible
                   ? TwoStageStatus::stage2_infeasible
                   : TwoStageStatus::ok;
  out.seconds = elapsed_s(t0);
  return out;
}

// ---------------------------------------------------------- mode compare ---

Instance pooling_variant_instance(const Instance& inst, double pooling_size) {
  if (!(pooling_size >= 1.0) || !std::isfinite(pooling_size)) {
    throw DomainError("mode comparison: pooling size must be at least 1");
  }
  Instance v = inst;
  // The flight-cost calibration is per kg carried, so the cost of one
  // consolidated trip scales with the kilograms pooled into it.
  const double scale = pooling_size / inst.pooling_size;
  for (auto& row : v.flight_cost) {
    for (double& c : row) c *= scale;
  }
  v.pooling_size = pooling_size;
  v.payload_capacity = std::max(v.payload_capacity, pooling_size);
  v.validate();
  return v;
}

std::string ModeComparison::to_csv() const {
  std::string out = "mode,Q,mean_cost_cny,mean_lead_min,status\n";
  char buf[160];
  for (const ModeRow& r : rows) {
    const double cost = r.defined ? r.mean_cost_cny : std::nan("");
    const double lead = r.defined ? r.mean_lead_min : std::nan("");
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%s\n", r.mode.c_str(),
                  r.pooling_size, cost, lead, r.status.c_str());
    out += buf;
  }
  return out;
}

ModeComparison compare_modes(const Instance& inst, const std::vector<double>& pooling_sizes,
                             const BenchConfig& cfg) {
  inst.validate();
  if (pooling_sizes.empty()) {
    throw DomainError("mode comparison: at least one pooling size is required");
  }
  ModeComparison table;
  for (const double q : pooling_sizes) {
    const Instance hub = pooling_variant_instance(inst, q);
    CourierParams params = default_courier_params(inst, q, cfg.wage_ratio);
    params.tariff_km_kg = cfg.tariff_km_kg;
    params.speed_mps = cfg.speed_mps;
    params.detour = cfg.detour;
    params.validate();

    const auto push = [&](const char* mode, const Metrics& m, solve::ExactStatus status,
                          bool has_incumbent) {
      ModeRow row;
      row.mode = mode;
      row.pooling_size = q;
      row.defined = has_incumbent && m.defined;
      if (row.defined) {
        row.mean_cost_cny = m.mean_operating_cost;
        row.mean_lead_min = m.mean_lead_time;
        row.status = status_name(status);
      } else {
        row.status = has_incumbent ? "undefined" : status_name(status);
      }
      table.rows.push_back(std::move(row));
    };

    {  // drones between hubs, couriers on first/last legs
      const solve::ExactResult res = solve::solve_exact(hub, cfg.solver);
      Metrics m;
      if (res.incumbent) m = compute_metrics(hub, *res.incumbent);
      push("H&S-D&C", m, res.status, res.incumbent.has_value());
    }
    {  // door-to-door couriers
      const D2DResult res = solve_d2d_courier(inst, params, cfg.solver);
      Metrics m;
      if (res.incumbent) {
        m = compute_metrics_from_inputs(res.incumbent->objective, q,
                                        d2d_route_inputs(inst, params, *res.incumbent));
      }
      push("D2D-C", m, res.status, res.incumbent.has_value());
    }
    {  // courier-operated hub network
      const HsCourierResult res = solve_hs_courier(inst, params, cfg.solver);
      Metrics m;
      if (res.result.incumbent) m = compute_metrics(res.variant, *res.result.incumbent);
      push("H&S-C", m, res.result.status, res.result.incumbent.has_value());
    }
  }
  return table;
}

}  // namespace vertiflow::bench
