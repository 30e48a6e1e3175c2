#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "vertiflow/bench/modes.hpp"
#include "vertiflow/core/queueing.hpp"
#include "vertiflow/linearize/discretization.hpp"
#include "vertiflow/milp/solver.hpp"

// Door-to-door courier model.
//
// One binary per demand pair decides whether the pair gets dedicated
// service; the origin's service level rho then fixes the served fraction
// (alpha = rho * served, linearized with the usual big-M gating), the
// loaded-trip rate psi = D/Q * alpha, and repositioning trips phi keep
// courier movements balanced at every point.  Staff must cover both the
// queueing backlog at each origin, f(rho_o) = rho_o / (1 - rho_o), and the
// couriers underway, sum t^g (psi + phi).  The backlog enters through
// per-origin breakpoint grids: secant cuts overestimate f (upper-bounding
// model "DC"), tangent cuts underestimate it (lower-bounding model "DR"),
// and the grids refine at each side's optimum until the bounds meet.

namespace vertiflow::bench {

namespace {

using Clock = std::chrono::steady_clock;
using linearize::Discretization;
using linearize::LinearCut;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Column/row map of one built door-to-door MILP.
struct D2DLayout {
  std::vector<int> points;      // active demand points, ascending
  std::vector<int> point_pos;   // demand point -> position in points, or -1
  std::vector<int> origins;     // distinct origins, ascending
  std::vector<int> origin_pos;  // demand point -> position in origins, or -1
  std::vector<std::pair<int, int>> phi_arcs;  // ordered active point pairs

  int y0 = 0, alpha0 = 0, psi0 = 0, rho0 = 0, theta0 = 0, phi0 = 0, gamma = 0;

  int y_var(int entry) const { return y0 + entry; }
  int alpha_var(int entry) const { return alpha0 + entry; }
  int psi_var(int entry) const { return psi0 + entry; }
  int rho_var(int opos) const { return rho0 + opos; }
  int theta_var(int opos) const { return theta0 + opos; }
  int phi_var(int arc) const { return phi0 + arc; }
};

struct BuiltD2D {
  milp::MilpModel model;
  D2DLayout lay;
};

std::string pair_tag(const char* what, const DemandEntry& e) {
  return std::string(what) + "(" + std::to_string(e.o) + "," + std::to_string(e.d) + ")";
}

D2DLayout make_layout(const Instance& inst) {
  D2DLayout lay;
  const int R = inst.num_points();
  lay.point_pos.assign(R, -1);
  lay.origin_pos.assign(R, -1);
  std::vector<std::uint8_t> active(R, 0), is_origin(R, 0);
  for (const DemandEntry& e : inst.demand) {
    active[e.o] = active[e.d] = 1;
    is_origin[e.o] = 1;
  }
  for (int r = 0; r < R; ++r) {
    if (active[r]) {
      lay.point_pos[r] = static_cast<int>(lay.points.size());
      lay.points.push_back(r);
    }
    if (is_origin[r]) {
      lay.origin_pos[r] = static_cast<int>(lay.origins.size());
      lay.origins.push_back(r);
    }
  }
  for (int a : lay.points) {
    for (int b : lay.points) {
      if (a != b) lay.phi_arcs.emplace_back(a, b);
    }
  }
  return lay;
}

// `conservative` picks secant (upper) vs tangent (lower) staff cuts.
BuiltD2D build_d2d(const Instance& inst, const CourierParams& params,
                   const Discretization& disc, bool conservative) {
  BuiltD2D net;
  net.lay = make_layout(inst);
  D2DLayout& lay = net.lay;
  milp::MilpModel& model = net.model;
  model.name = conservative ? "d2d-conservative" : "d2d-relaxed";

  const int E = static_cast<int>(inst.demand.size());
  const double cap = inst.service_level_cap;
  const auto cost = trip_cost_matrix(params, inst.demand_points);
  const auto time = travel_time_matrix(params, inst.demand_points);

  lay.y0 = model.num_vars();
  for (const DemandEntry& e : inst.demand) {
    model.add_var(pair_tag("y", e), milp::VarKind::binary, 0.0, 1.0, 0.0);
  }
  lay.alpha0 = model.num_vars();
  for (const DemandEntry& e : inst.demand) {
    model.add_var(pair_tag("alpha", e), milp::VarKind::continuous, 0.0, 1.0, 0.0);
  }
  lay.psi0 = model.num_vars();
  for (const DemandEntry& e : inst.demand) {
    model.add_var(pair_tag("psi", e), milp::VarKind::continuous, 0.0, kInf, cost[e.o][e.d]);
  }
  lay.rho0 = model.num_vars();
  for (int o : lay.origins) {
    model.add_var("rho(" + std::to_string(o) + ")", milp::VarKind::continuous, 0.0, cap, 0.0);
  }
  lay.theta0 = model.num_vars();
  for (int o : lay.origins) {
    model.add_var("theta(" + std::to_string(o) + ")", milp::VarKind::continuous, 0.0, kInf,
                  0.0);
  }
  lay.phi0 = model.num_vars();
  for (const auto& [a, b] : lay.phi_arcs) {
    model.add_var("phi(" + std::to_string(a) + "," + std::to_string(b) + ")",
                  milp::VarKind::continuous, 0.0, kInf, cost[a][b]);
  }
  lay.gamma = model.num_vars();
  model.add_var("Gamma", milp::VarKind::integer, 0.0, kInf, params.daily_wage);

  {  // market share over total demand
    std::vector<std::pair<int, double>> coefs;
    for (int e = 0; e < E; ++e) coefs.emplace_back(lay.alpha_var(e), inst.demand[e].rate);
    model.add_row("market_share", milp::RowSense::ge,
                  inst.market_share * inst.total_demand(), std::move(coefs));
  }
  for (int e = 0; e < E; ++e) {  // alpha pinned to the origin's rho when served
    const DemandEntry& en = inst.demand[e];
    const int rho_o = lay.rho_var(lay.origin_pos[en.o]);
    model.add_row(pair_tag("alpha_le_rho", en), milp::RowSense::le, 0.0,
                  {{lay.alpha_var(e), 1.0}, {rho_o, -1.0}});
    model.add_row(pair_tag("alpha_ge_act", en), milp::RowSense::le, 1.0,
                  {{rho_o, 1.0}, {lay.alpha_var(e), -1.0}, {lay.y_var(e), 1.0}});
    model.add_row(pair_tag("alpha_le_y", en), milp::RowSense::le, 0.0,
                  {{lay.alpha_var(e), 1.0}, {lay.y_var(e), -1.0}});
  }
  for (int e = 0; e < E; ++e) {  // trip volume coupling
    const DemandEntry& en = inst.demand[e];
    model.add_row(pair_tag("trip_volume", en), milp::RowSense::eq, 0.0,
                  {{lay.psi_var(e), 1.0},
                   {lay.alpha_var(e), -en.rate / params.pooling_size}});
  }
  for (int r : lay.points) {  // courier movements balance at every point
    std::vector<std::pair<int, double>> coefs;
    for (int e = 0; e < E; ++e) {
      if (inst.demand[e].o == r) coefs.emplace_back(lay.psi_var(e), 1.0);
      if (inst.demand[e].d == r) coefs.emplace_back(lay.psi_var(e), -1.0);
    }
    for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
      if (lay.phi_arcs[a].first == r) coefs.emplace_back(lay.phi_var(static_cast<int>(a)), 1.0);
      if (lay.phi_arcs[a].second == r) coefs.emplace_back(lay.phi_var(static_cast<int>(a)), -1.0);
    }
    model.add_row("flow_balance(" + std::to_string(r) + ")", milp::RowSense::eq, 0.0,
                  std::move(coefs));
  }
  {  // staff covers queued + travelling couriers
    std::vector<std::pair<int, double>> coefs{{lay.gamma, -1.0}};
    for (std::size_t p = 0; p < lay.origins.size(); ++p) {
      coefs.emplace_back(lay.theta_var(static_cast<int>(p)), 1.0);
    }
    for (int e = 0; e < E; ++e) {
      coefs.emplace_back(lay.psi_var(e), time[inst.demand[e].o][inst.demand[e].d]);
    }
    for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
      const auto [p, q] = lay.phi_arcs[a];
      coefs.emplace_back(lay.phi_var(static_cast<int>(a)), time[p][q]);
    }
    model.add_row("staff", milp::RowSense::le, 0.0, std::move(coefs));
  }
  for (std::size_t p = 0; p < lay.origins.size(); ++p) {  // theta >= cut(rho)
    const auto& g = disc.grid(static_cast<int>(p));
    for (int k = 0; k + 1 < static_cast<int>(g.size()); ++k) {
      const LinearCut cut =
          conservative ? linearize::secant_cut(g[k], g[k + 1]) : linearize::tangent_cut(g[k]);
      model.add_row("staff_cut(" + std::to_string(lay.origins[p]) + "," +
                        std::to_string(k + 1) + ")",
                    milp::RowSense::ge, cut.intercept,
                    {{lay.theta_var(static_cast<int>(p)), 1.0},
                     {lay.rho_var(static_cast<int>(p)), -cut.slope}});
    }
  }
  model.validate();
  return net;
}

D2DSolution extract_d2d(const Instance& inst, const BuiltD2D& net,
                        const std::vector<double>& x, double objective) {
  const D2DLayout& lay = net.lay;
  const int R = inst.num_points();
  const int E = static_cast<int>(inst.demand.size());
  D2DSolution s;
  s.served.assign(E, 0);
  s.alpha.assign(E, 0.0);
  s.rho.assign(R, 0.0);
  s.psi.assign(R, std::vector<double>(R, 0.0));
  s.phi.assign(R, std::vector<double>(R, 0.0));
  for (int e = 0; e < E; ++e) {
    s.served[e] = x[lay.y_var(e)] > 0.5 ? 1 : 0;
    s.alpha[e] = x[lay.alpha_var(e)];
    s.psi[inst.demand[e].o][inst.demand[e].d] = x[lay.psi_var(e)];
  }
  for (std::size_t p = 0; p < lay.origins.size(); ++p) {
    s.rho[lay.origins[p]] = x[lay.rho_var(static_cast<int>(p))];
  }
  for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
    const auto [p, q] = lay.phi_arcs[a];
    s.phi[p][q] = x[lay.phi_var(static_cast<int>(a))];
  }
  s.staff = static_cast<int>(std::llround(x[lay.gamma]));
  s.objective = objective;
  return s;
}

long grid_total(const Discretization& disc) {
  long n = 0;
  for (int c = 0; c < disc.num_candidates(); ++c) {
    n += static_cast<long>(disc.grid(c).size());
  }
  return n;
}

}  // namespace

D2DResult solve_d2d_courier(const Instance& inst, const CourierParams& params,
                            const solve::SolverConfig& cfg) {
  inst.validate();
  params.validate();
  if (!(cfg.gap_eps > 0.0 && cfg.gap_eps < 1.0)) {
    throw DomainError("d2d solver: gap target must lie in (0, 1)");
  }
  if (cfg.total_time_s <= 0.0 || cfg.solve_time_s <= 0.0 || cfg.min_gap <= 0.0) {
    throw DomainError("d2d solver: time limits and grid units must be positive");
  }

  const auto t0 = Clock::now();
  D2DResult out;
  const int num_origins = [&] {
    std::vector<std::uint8_t> is_origin(inst.num_points(), 0);
    for (const DemandEntry& e : inst.demand) is_origin[e.o] = 1;
    int n = 0;
    for (auto b : is_origin) n += b;
    return n;
  }();

  if (inst.demand.empty() || inst.total_demand() <= 0.0) {
    // Nothing to serve: the empty solution is optimal at zero cost.
    D2DSolution s;
    const int R = inst.num_points();
    s.served.assign(inst.demand.size(), 0);
    s.alpha.assign(inst.demand.size(), 0.0);
    s.rho.assign(R, 0.0);
    s.psi.assign(R, std::vector<double>(R, 0.0));
    s.phi.assign(R, std::vector<double>(R, 0.0));
    s.staff = 0;
    s.objective = 0.0;
    out.incumbent = std::move(s);
    out.status = solve::ExactStatus::converged;
    out.upper_bound = out.lower_bound = 0.0;
    out.gap = 0.0;
    out.iterations = 0;
    out.seconds = elapsed_s(t0);
    return out;
  }

  Discretization disc =
      Discretization::initial(num_origins, inst.service_level_cap, cfg.min_gap);

  const auto remaining = [&] { return cfg.total_time_s - elapsed_s(t0); };
  const auto log = [&](int iter, const char* model, double objective) {
    solve::TraceRow r;
    r.iteration = iter;
    r.model = model;
    r.objective = objective;
    r.ub = out.upper_bound;
    r.lb = out.lower_bound;
    r.gap = relative_gap(out.upper_bound, out.lower_bound);
    r.seconds = elapsed_s(t0);
    r.grid_points = grid_total(disc);
    r.warm = -1;
    out.trace.rows.push_back(std::move(r));
  };
  const auto origin_rhos = [&](const D2DSolution& s) {
    std::vector<double> v;
    v.reserve(num_origins);
    for (int r = 0; r < inst.num_points(); ++r) {
      // make_layout orders origins ascending, matching this scan.
      bool is_origin = false;
      for (const DemandEntry& e : inst.demand) is_origin = is_origin || e.o == r;
      if (is_origin) v.push_back(s.rho[r]);
    }
    return v;
  };

  solve::ExactStatus status = solve::ExactStatus::time_limit;
  for (int iter = 1;; ++iter) {
    out.iterations = iter;
    bool clock_hit = false;

    // ---- upper-bounding solve (secant staff cuts) ----
    if (remaining() <= 0.0) break;
    const BuiltD2D netC = build_d2d(inst, params, disc, /*conservative=*/true);
    milp::MilpOptions optC;
    optC.time_limit_s = std::min(cfg.solve_time_s, remaining());
    const milp::MilpResult resC = milp::solve_milp(netC.model, optC);
    clock_hit = resC.status == milp::MilpStatus::time_limit;
    if (resC.status == milp::MilpStatus::infeasible) {
      // The staff row can always be satisfied (Gamma is unbounded), so
      // infeasibility is a property of the linear rows alone: certain.
      status = solve::ExactStatus::infeasible;
      log(iter, "DC", kInf);
      break;
    }
    std::optional<D2DSolution> planC;
    if (resC.has_incumbent()) {
      planC = extract_d2d(inst, netC, resC.x, resC.objective);
      if (!out.incumbent || planC->objective < out.incumbent->objective) {
        out.incumbent = planC;
        out.upper_bound = std::min(out.upper_bound, planC->objective);
      }
    }
    log(iter, "DC", resC.has_incumbent() ? resC.objective : kInf);
    int inserted = 0;
    if (planC) inserted += disc.refine_all(origin_rhos(*planC));

    // ---- lower-bounding solve (tangent staff cuts) ----
    if (remaining() <= 0.0) break;
    const BuiltD2D netR = build_d2d(inst, params, disc, /*conservative=*/false);
    milp::MilpOptions optR;
    optR.time_limit_s = std::min(cfg.solve_time_s, remaining());
    const milp::MilpResult resR = milp::solve_milp(netR.model, optR);
    clock_hit = clock_hit || resR.status == milp::MilpStatus::time_limit;
    if (resR.status == milp::MilpStatus::infeasible) {
      // Unreachable after a feasible DC solve (the linear rows are shared and
      // the tangent cuts are weaker); kept for the cold infeasible case.
      status = solve::ExactStatus::infeasible;
      log(iter, "DR", kInf);
      break;
    }
    if (resR.status == milp::MilpStatus::optimal) {
      out.lower_bound = std::max(out.lower_bound, resR.objective);
    }
    log(iter, "DR", resR.has_incumbent() ? resR.objective : kInf);
    if (resR.has_incumbent()) {
      const D2DSolution planR = extract_d2d(inst, netR, resR.x, resR.objective);
      inserted += disc.refine_all(origin_rhos(planR));
    }

    out.gap = relative_gap(out.upper_bound, out.lower_bound);
    if (out.gap <= cfg.gap_eps) {
      status = solve::ExactStatus::converged;
      break;
    }
    if (clock_hit || remaining() <= 0.0) {
      status = solve::ExactStatus::time_limit;
      break;
    }
    if (inserted == 0) {
      status = solve::ExactStatus::grid_exhausted;
      break;
    }
  }

  out.status = status;
  out.gap = relative_gap(out.upper_bound, out.lower_bound);
  out.seconds = elapsed_s(t0);
  return out;
}

FeasibilityReport check_d2d_feasibility(const Instance& inst, const CourierParams& params,
                                        const D2DSolution& sol, double tol) {
  inst.validate();
  params.validate();
  const int R = inst.num_points();
  const int E = static_cast<int>(inst.demand.size());
  if (static_cast<int>(sol.served.size()) != E || static_cast<int>(sol.alpha.size()) != E ||
      static_cast<int>(sol.rho.size()) != R || static_cast<int>(sol.psi.size()) != R ||
      static_cast<int>(sol.phi.size()) != R) {
    throw DomainError("d2d feasibility: solution dimensions do not match instance");
  }

  FeasibilityReport rep;
  rep.tol = tol;
  const auto add = [&](const std::string& family, double violation, const std::string& where) {
    FamilyCheck c;
    c.family = family;
    c.worst_violation = violation;
    c.detail = where;
    c.pass = violation <= tol;
    rep.pass = rep.pass && c.pass;
    rep.families.push_back(std::move(c));
  };

  // Domains: binaries, staff integrality, sign and cap bounds.
  {
    double v = 0.0;
    std::string where;
    const auto track = [&](double viol, const std::string& w) {
      if (viol > v) {
        v = viol;
        where = w;
      }
    };
    for (int e = 0; e < E; ++e) {
      if (sol.served[e] != 0 && sol.served[e] != 1) track(1.0, "served flag not binary");
      track(-sol.alpha[e], "alpha negative");
    }
    for (int r = 0; r < R; ++r) {
      track(-sol.rho[r], "rho negative");
      track(sol.rho[r] - inst.service_level_cap, "rho above cap");
      for (int q = 0; q < R; ++q) {
        track(-sol.psi[r][q], "psi negative");
        track(-sol.phi[r][q], "phi negative");
      }
    }
    track(sol.staff < 0 ? 1.0 : 0.0, "staff negative");
    add("domains", v, where);
  }
  {  // market share
    double served = 0.0;
    for (int e = 0; e < E; ++e) served += sol.alpha[e] * inst.demand[e].rate;
    add("market_share", inst.market_share * inst.total_demand() - served, "total served rate");
  }
  {  // alpha = rho * served, exactly
    double v = 0.0;
    std::string where;
    for (int e = 0; e < E; ++e) {
      const double want = sol.served[e] ? sol.rho[inst.demand[e].o] : 0.0;
      const double got = std::fabs(sol.alpha[e] - want);
      if (got > v) {
        v = got;
        where = pair_tag("alpha", inst.demand[e]);
      }
    }
    add("service_fraction_gating", v, where);
  }
  {  // psi = D/Q * alpha
    double v = 0.0;
    std::string where;
    for (int e = 0; e < E; ++e) {
      const DemandEntry& en = inst.demand[e];
      const double want = en.rate / params.pooling_size * sol.alpha[e];
      const double got = std::fabs(sol.psi[en.o][en.d] - want);
      if (got > v) {
        v = got;
        where = pair_tag("psi", en);
      }
    }
    add("trip_volume", v, where);
  }
  {  // movement balance at every point
    double v = 0.0;
    std::string where;
    for (int r = 0; r < R; ++r) {
      double net = 0.0;
      for (int q = 0; q < R; ++q) {
        net += sol.psi[r][q] + sol.phi[r][q] - sol.psi[q][r] - sol.phi[q][r];
      }
      if (std::fabs(net) > v) {
        v = std::fabs(net);
        where = "point " + std::to_string(r);
      }
    }
    add("flow_balance", v, where);
  }
  {  // staff requirement with the exact queue length
    const auto time = travel_time_matrix(params, inst.demand_points);
    double lhs = 0.0;
    std::vector<std::uint8_t> is_origin(R, 0);
    for (const DemandEntry& e : inst.demand) is_origin[e.o] = 1;
    for (int r = 0; r < R; ++r) {
      if (is_origin[r]) lhs += queue_length(sol.rho[r]);
    }
    for (int r = 0; r < R; ++r) {
      for (int q = 0; q < R; ++q) {
        if (r != q) lhs += time[r][q] * (sol.psi[r][q] + sol.phi[r][q]);
      }
    }
    add("staff_size", lhs - static_cast<double>(sol.staff), "staff row");
  }
  return rep;
}

std::vector<MetricsRouteInput> d2d_route_inputs(const Instance& inst,
                                                const CourierParams& params,
                                                const D2DSolution& sol) {
  const auto time = travel_time_matrix(params, inst.demand_points);
  std::vector<MetricsRouteInput> inputs;
  for (std::size_t e = 0; e < inst.demand.size(); ++e) {
    const DemandEntry& en = inst.demand[e];
    MetricsRouteInput in;
    in.o = en.o;
    in.i = -1;
    in.j = -1;
    in.d = en.d;
    in.alpha = sol.alpha[e];
    in.rate = en.rate;
    in.t_first = 0.0;
    in.t_mid = time[en.o][en.d];
    in.t_last = 0.0;
    in.pool_key = static_cast<int>(e);  // parcels pool per O-D pair
    inputs.push_back(in);
  }
  return inputs;
}

}  // namespace vertiflow::bench
