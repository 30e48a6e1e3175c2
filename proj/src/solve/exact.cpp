#include "vertiflow/solve/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <utility>

namespace vertiflow::solve {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

long grid_total(const linearize::Discretization& disc) {
  long n = 0;
  for (int c = 0; c < disc.num_candidates(); ++c) {
    n += static_cast<long>(disc.grid(c).size());
  }
  return n;
}

// Project a plan onto the model and return the assignment iff it validates.
// Rejected projections are simply not installed; the solver then cold-starts.
std::optional<std::vector<double>> accepted_warm(const Instance& inst,
                                                 const linearize::BuiltNetwork& net,
                                                 const PlanSolution& plan) {
  std::vector<double> assignment = linearize::plan_to_assignment(inst, net, plan);
  const milp::WarmStartReport report = milp::validate_warm_start(net.model, assignment);
  if (!report.accepted) return std::nullopt;
  return assignment;
}

}  // namespace

std::string BoundsTrace::to_csv() const {
  std::string out = "iteration,model,objective,ub,lb,gap,seconds\n";
  char buf[224];
  for (const TraceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.iteration,
                  r.model.c_str(), r.objective, r.ub, r.lb, r.gap, r.seconds);
    out += buf;
  }
  return out;
}

NeighborhoodResult neighborhood_search(const Instance& inst,
                                       const std::vector<std::uint8_t>& x_fixed,
                                       const PlanSolution& incumbent,
                                       const SolverConfig& cfg) {
  const int N = inst.num_candidates();
  if (static_cast<int>(x_fixed.size()) != N ||
      static_cast<int>(incumbent.rho.size()) != N) {
    throw DomainError("neighborhood_search: x_fixed/incumbent size mismatch");
  }
  linearize::Discretization disc = linearize::Discretization::uniform(
      N, cfg.neighborhood_unit, inst.service_level_cap, cfg.min_gap);
  for (int c = 0; c < N; ++c) {
    const double r = incumbent.rho[c];
    if (r > 0.0 && r < inst.service_level_cap) disc.ensure_point(c, r);
  }
  linearize::BuildOptions opts = cfg.build;
  opts.fix_x = x_fixed;
  const linearize::BuiltNetwork net = linearize::build_conservative(inst, disc, opts);

  milp::MilpOptions mopts;
  mopts.time_limit_s = cfg.solve_time_s;
  NeighborhoodResult out;
  if (auto warm = accepted_warm(inst, net, incumbent)) {
    mopts.warm_start = std::move(*warm);
    out.warm_accepted = true;
  }
  const milp::MilpResult res = milp::solve_milp(net.model, mopts);
  out.status = res.status;
  if (res.has_incumbent()) {
    out.plan = linearize::extract_plan(inst, net, res.x);
    out.objective = out.plan->objective;
  }
  return out;
}

ExactResult solve_exact(const Instance& inst, const SolverConfig& cfg) {
  inst.validate();
  if (!(cfg.gap_eps > 0.0 && cfg.gap_eps < 1.0)) {
    throw DomainError("solve_exact: gap target must lie in (0, 1)");
  }
  if (cfg.total_time_s <= 0.0 || cfg.solve_time_s <= 0.0 || cfg.min_gap <= 0.0 ||
      cfg.neighborhood_unit <= 0.0) {
    throw DomainError("solve_exact: time limits and grid units must be positive");
  }

  const auto t0 = Clock::now();
  ExactResult out;
  out.final_grid = linearize::Discretization::initial(inst.num_candidates(),
                                                      inst.service_level_cap, cfg.min_gap);
  linearize::Discretization& disc = out.final_grid;

  // Feasible plan that seeds the next conservative solve (the most recent
  // polish result; theory says its projection stays feasible after nesting).
  std::optional<PlanSolution> warm_source;

  const auto remaining = [&] { return cfg.total_time_s - elapsed_s(t0); };
  const auto take_best = [&](const PlanSolution& p) {
    if (!out.incumbent || p.objective < out.incumbent->objective) out.incumbent = p;
    out.upper_bound = std::min(out.upper_bound, p.objective);
  };
  const auto log = [&](int iter, const char* model, double objective, int warm) {
    TraceRow r;
    r.iteration = iter;
    r.model = model;
    r.objective = objective;
    r.ub = out.upper_bound;
    r.lb = out.lower_bound;
    r.gap = relative_gap(out.upper_bound, out.lower_bound);
    r.seconds = elapsed_s(t0);
    r.grid_points = grid_total(disc);
    r.warm = warm;
    out.trace.rows.push_back(std::move(r));
  };

  ExactStatus status = ExactStatus::time_limit;
  for (int iter = 1;; ++iter) {
    out.iterations = iter;
    bool clock_hit = false;

    // ---- (1) conservative master, warm from the latest polish result ----
    if (remaining() <= 0.0) {
      status = ExactStatus::time_limit;
      break;
    }
    const linearize::BuiltNetwork netC = linearize::build_conservative(inst, disc, cfg.build);
    milp::MilpOptions optC;
    optC.time_limit_s = std::min(cfg.solve_time_s, remaining());
    int warmC = -1;
    if (warm_source) {
      if (auto warm = accepted_warm(inst, netC, *warm_source)) {
        optC.warm_start = std::move(*warm);
        warmC = 1;
      } else {
        warmC = 0;
      }
    }
    const milp::MilpResult resC = milp::solve_milp(netC.model, optC);
    clock_hit |= resC.status == milp::MilpStatus::time_limit;
    std::optional<PlanSolution> planC;
    if (resC.has_incumbent()) {
      planC = linearize::extract_plan(inst, netC, resC.x);
      take_best(*planC);  // conservative-feasible implies exact-feasible
    }
    log(iter, "MC", resC.objective, warmC);

    // ---- (2) polish with locations frozen; update the incumbent ----
    std::optional<PlanSolution> planN;
    if (planC && remaining() > 0.0) {
      SolverConfig ncfg = cfg;
      ncfg.solve_time_s = std::min(cfg.solve_time_s, remaining());
      const NeighborhoodResult nres = neighborhood_search(inst, planC->x, *planC, ncfg);
      clock_hit |= nres.status == milp::MilpStatus::time_limit;
      if (nres.plan) {
        planN = nres.plan;
        take_best(*planN);
      }
      log(iter, "MCN", nres.objective, nres.warm_accepted ? 1 : 0);
    }
    if (planN) {
      warm_source = planN;
    } else if (planC) {
      warm_source = planC;
    }
    out.gap = relative_gap(out.upper_bound, out.lower_bound);
    if (out.gap <= cfg.gap_eps) {
      status = ExactStatus::converged;
      break;
    }

    // ---- (3) refine the master grids around the polish utilisations ----
    int inserted = 0;
    if (planN) {
      for (int c = 0; c < inst.num_candidates(); ++c) {
        if (planN->x[c]) inserted += disc.refine(c, planN->rho[c]);
      }
    }

    // ---- (4) relaxed bounding model, warm from the best incumbent ----
    if (remaining() <= 0.0) {
      status = ExactStatus::time_limit;
      break;
    }
    const linearize::BuiltNetwork netR = linearize::build_relaxed(inst, disc, cfg.build);
    milp::MilpOptions optR;
    optR.time_limit_s = std::min(cfg.solve_time_s, remaining());
    int warmR = -1;
    if (out.incumbent) {
      if (auto warm = accepted_warm(inst, netR, *out.incumbent)) {
        optR.warm_start = std::move(*warm);
        warmR = 1;
      } else {
        warmR = 0;
      }
    }
    const milp::MilpResult resR = milp::solve_milp(netR.model, optR);
    clock_hit |= resR.status == milp::MilpStatus::time_limit;
    if (resR.status == milp::MilpStatus::infeasible) {
      // The relaxed model contains every exact-feasible point, so this is a
      // proof of infeasibility -- unless an incumbent exists, which would
      // contradict it and indicates a numerical failure.
      log(iter, "MR", kInf, warmR);
      if (out.incumbent) {
        throw DomainError(
            "solve_exact: relaxed model infeasible despite a feasible incumbent");
      }
      status = ExactStatus::infeasible;
      break;
    }
    if (resR.status == milp::MilpStatus::optimal) {
      out.lower_bound = std::max(out.lower_bound, resR.objective);
    } else {
      out.lower_bound = std::max(out.lower_bound, resR.best_bound);
    }
    log(iter, "MR", resR.objective, warmR);
    out.gap = relative_gap(out.upper_bound, out.lower_bound);
    if (out.gap <= cfg.gap_eps) {
      status = ExactStatus::converged;
      break;
    }

    // ---- (5) refine the master grids around the relaxed utilisations ----
    if (resR.has_incumbent()) {
      const PlanSolution planR = linearize::extract_plan(inst, netR, resR.x);
      for (int c = 0; c < inst.num_candidates(); ++c) {
        if (planR.x[c]) inserted += disc.refine(c, planR.rho[c]);
      }
    }
    if (inserted == 0) {
      // Nothing moved; a repeat iteration would solve identical models.
      status = clock_hit ? ExactStatus::time_limit : ExactStatus::grid_exhausted;
      break;
    }
  }

  out.status = status;
  out.gap = relative_gap(out.upper_bound, out.lower_bound);
  out.seconds = elapsed_s(t0);
  return out;
}

}  // namespace vertiflow::solve
