#include "vertiflow/solve/matheuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "vertiflow/core/routes.hpp"
#include "vertiflow/milp/solver.hpp"

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

std::optional<std::vector<double>> accepted_warm(const Instance& inst,
                                                 const linearize::BuiltNetwork& net,
                                                 const PlanSolution& plan) {
  std::vector<double> assignment = linearize::plan_to_assignment(inst, net, plan);
  const milp::WarmStartReport report = milp::validate_warm_start(net.model, assignment);
  if (!report.accepted) return std::nullopt;
  return assignment;
}

// Hamming-distance row against a site indicator:
//   sum_{i: w_i=0} x_i + sum_{i: w_i=1} (1 - x_i) >= n_switch.
void add_diversification_row(milp::MilpModel& model, const std::vector<std::uint8_t>& prior,
                             int n_switch) {
  std::vector<std::pair<int, double>> coefs;
  int members = 0;
  for (int i = 0; i < static_cast<int>(prior.size()); ++i) {
    if (prior[i]) {
      coefs.emplace_back(i, -1.0);
      ++members;
    } else {
      coefs.emplace_back(i, 1.0);
    }
  }
  model.add_row("diversify", milp::RowSense::ge, static_cast<double>(n_switch - members),
                std::move(coefs));
}

}  // namespace

milp::MilpModel build_coverage_surrogate(
    const Instance& inst, const std::optional<std::vector<std::uint8_t>>& prior_set,
    int n_switch) {
  inst.validate();
  const int N = inst.num_candidates();
  if (prior_set) {
    if (static_cast<int>(prior_set->size()) != N) {
      throw DomainError("coverage surrogate: prior set size mismatch");
    }
    if (n_switch < 1) {
      throw DomainError("coverage surrogate: n_switch must be at least 1");
    }
  }

  milp::MilpModel model;
  model.name = "coverage";
  for (int i = 0; i < N; ++i) {
    model.add_var("x[" + std::to_string(i) + "]", milp::VarKind::binary, 0.0, 1.0, 0.0);
  }
  const RouteTable table = RouteTable::build(inst, {});
  const int y0 = N;
  for (const Route& r : table.routes) {
    model.add_var("y[" + std::to_string(r.o) + "," + std::to_string(r.i) + "," +
                      std::to_string(r.j) + "," + std::to_string(r.d) + "]",
                  milp::VarKind::binary, 0.0, 1.0, -r.rate);
  }

  {
    std::vector<std::pair<int, double>> coefs;
    for (int i = 0; i < N; ++i) coefs.emplace_back(i, 1.0);
    model.add_row("budget", milp::RowSense::le, static_cast<double>(inst.max_vertiports),
                  std::move(coefs));
  }
  for (int r = 0; r < static_cast<int>(table.routes.size()); ++r) {
    const Route& route = table.routes[r];
    model.add_row("gate_tail[" + std::to_string(r) + "]", milp::RowSense::le, 0.0,
                  {{y0 + r, 1.0}, {route.i, -1.0}});
    model.add_row("gate_head[" + std::to_string(r) + "]", milp::RowSense::le, 0.0,
                  {{y0 + r, 1.0}, {route.j, -1.0}});
  }
  for (int p = 0; p < static_cast<int>(table.pair_range.size()); ++p) {
    const auto [first, last] = table.pair_range[p];
    if (first == last) continue;
    std::vector<std::pair<int, double>> coefs;
    for (int r = first; r < last; ++r) coefs.emplace_back(y0 + r, 1.0);
    model.add_row("one_route[" + std::to_string(p) + "]", milp::RowSense::le, 1.0,
                  std::move(coefs));
  }
  if (prior_set) add_diversification_row(model, *prior_set, n_switch);
  return model;
}

milp::MilpModel build_pmedian_surrogate(const Instance& inst) {
  inst.validate();
  const int N = inst.num_candidates();
  const int R = inst.num_points();

  // Demand weight leaving each origin and arriving at each destination.
  std::vector<double> out_rate(R, 0.0);
  std::vector<double> in_rate(R, 0.0);
  for (const DemandEntry& e : inst.demand) {
    out_rate[e.o] += e.rate;
    in_rate[e.d] += e.rate;
  }

  milp::MilpModel model;
  model.name = "pmedian";
  for (int i = 0; i < N; ++i) {
    model.add_var("x[" + std::to_string(i) + "]", milp::VarKind::binary, 0.0, 1.0, 0.0);
  }
  const int yo0 = N;            // collection assignment, point r -> site i
  const int yd0 = N + R * N;    // distribution assignment, site j -> point r
  for (int r = 0; r < R; ++r) {
    for (int i = 0; i < N; ++i) {
      model.add_var("yo[" + std::to_string(r) + "," + std::to_string(i) + "]",
                    milp::VarKind::binary, 0.0, 1.0, out_rate[r] * inst.courier_time[r][i]);
    }
  }
  for (int r = 0; r < R; ++r) {
    for (int j = 0; j < N; ++j) {
      model.add_var("yd[" + std::to_string(j) + "," + std::to_string(r) + "]",
                    milp::VarKind::binary, 0.0, 1.0, in_rate[r] * inst.courier_time[r][j]);
    }
  }

  for (int r = 0; r < R; ++r) {
    std::vector<std::pair<int, double>> co, cd;
    for (int i = 0; i < N; ++i) {
      co.emplace_back(yo0 + r * N + i, 1.0);
      cd.emplace_back(yd0 + r * N + i, 1.0);
    }
    model.add_row("collect[" + std::to_string(r) + "]", milp::RowSense::eq, 1.0,
                  std::move(co));
    model.add_row("distribute[" + std::to_string(r) + "]", milp::RowSense::eq, 1.0,
                  std::move(cd));
    for (int i = 0; i < N; ++i) {
      model.add_row("open_o[" + std::to_string(r) + "," + std::to_string(i) + "]",
                    milp::RowSense::le, 0.0, {{yo0 + r * N + i, 1.0}, {i, -1.0}});
      model.add_row("open_d[" + std::to_string(i) + "," + std::to_string(r) + "]",
                    milp::RowSense::le, 0.0, {{yd0 + r * N + i, 1.0}, {i, -1.0}});
    }
  }
  {
    std::vector<std::pair<int, double>> coefs;
    for (int i = 0; i < N; ++i) coefs.emplace_back(i, 1.0);
    model.add_row("budget", milp::RowSense::le, static_cast<double>(inst.max_vertiports),
                  std::move(coefs));
  }
  return model;
}

MatheuristicResult solve_matheuristic(const Instance& inst, const MatheuristicConfig& cfg,
                                      int n_switch) {
  inst.validate();
  if (!(cfg.improve_eps > 0.0 && cfg.improve_eps < 1.0)) {
    throw DomainError("solve_matheuristic: improvement threshold must lie in (0, 1)");
  }
  if (cfg.total_time_s <= 0.0 || cfg.solve_time_s <= 0.0 || cfg.min_gap <= 0.0) {
    throw DomainError("solve_matheuristic: time limits and grid spacing must be positive");
  }
  if (n_switch < 1) {
    throw DomainError("solve_matheuristic: n_switch must be at least 1");
  }

  const auto t0 = Clock::now();
  const int N = inst.num_candidates();
  const char* surrogate_tag = cfg.surrogate == Surrogate::coverage ? "MM" : "MP";

  MatheuristicResult out;
  out.promising.assign(N, 0);
  linearize::Discretization disc =
      linearize::Discretization::initial(N, inst.service_level_cap, cfg.min_gap);

  std::optional<PlanSolution> warm_source;
  const auto remaining = [&] { return cfg.total_time_s - elapsed_s(t0); };
  const auto log = [&](int iter, const char* model_tag, double objective, int warm) {
    TraceRow r;
    r.iteration = iter;
    r.model = model_tag;
    r.objective = objective;
    r.ub = out.upper_bound;
    r.lb = -kInf;  // the heuristic produces no lower bound
    r.gap = kInf;
    r.seconds = elapsed_s(t0);
    r.grid_points = grid_total(disc);
    r.warm = warm;
    out.trace.rows.push_back(std::move(r));
  };

  ExactStatus status = ExactStatus::time_limit;
  double prev_round_ub = kInf;  // per-round conservative objective, not the best
  for (int round = 0;; ++round) {
    bool clock_hit = false;

    // ---- surrogate proposes sites; the promising set only ever grows ----
    if (remaining() <= 0.0) break;
    milp::MilpModel surrogate =
        cfg.surrogate == Surrogate::coverage
            ? build_coverage_surrogate(
                  inst,
                  round == 0 ? std::nullopt
                             : std::optional<std::vector<std::uint8_t>>(out.promising),
                  n_switch)
            : build_pmedian_surrogate(inst);
    if (cfg.surrogate == Surrogate::pmedian && round > 0) {
      add_diversification_row(surrogate, out.promising, n_switch);
    }
    milp::MilpOptions sopts;
    sopts.time_limit_s = std::min(cfg.solve_time_s, remaining());
    const milp::MilpResult sres = milp::solve_milp(surrogate, sopts);
    clock_hit |= sres.status == milp::MilpStatus::time_limit;
    if (sres.status == milp::MilpStatus::infeasible) {
      // The diversification row admits no new site set: saturation of the
      // search space, not a statement about the planning problem.
      log(round + 1, surrogate_tag, kInf, -1);
      status = ExactStatus::grid_exhausted;
      break;
    }
    if (!sres.has_incumbent()) {
      log(round + 1, surrogate_tag, kInf, -1);
      break;  // time-limited surrogate with nothing usable
    }
    int added = 0;
    for (int i = 0; i < N; ++i) {
      if (sres.x[i] > 0.5 && !out.promising[i]) {
        out.promising[i] = 1;
        ++added;
      }
    }
    // Coverage is a negated maximisation; report the covered rate itself.
    const double surrogate_obj =
        cfg.surrogate == Surrogate::coverage ? -sres.objective : sres.objective;
    log(round + 1, surrogate_tag, surrogate_obj, -1);

    // ---- conservative model restricted to the promising set ----
    if (remaining() <= 0.0) break;
    out.iterations = round + 1;
    double round_ub = kInf;
    int inserted = 0;
    int warm = -1;
    const bool any_site =
        std::any_of(out.promising.begin(), out.promising.end(), [](std::uint8_t v) {
          return v != 0;
        });
    if (any_site) {
      linearize::BuildOptions bopts = cfg.build;
      bopts.allowed = out.promising;
      const linearize::BuiltNetwork net = linearize::build_conservative(inst, disc, bopts);
      milp::MilpOptions copts;
      copts.time_limit_s = std::min(cfg.solve_time_s, remaining());
      if (warm_source) {
        if (auto assignment = accepted_warm(inst, net, *warm_source)) {
          copts.warm_start = std::move(*assignment);
          warm = 1;
        } else {
          warm = 0;
        }
      }
      const milp::MilpResult cres = milp::solve_milp(net.model, copts);
      clock_hit |= cres.status == milp::MilpStatus::time_limit;
      if (cres.has_incumbent()) {
        const PlanSolution plan = linearize::extract_plan(inst, net, cres.x);
        round_ub = plan.objective;
        if (!out.incumbent || plan.objective < out.incumbent->objective) out.incumbent = plan;
        out.upper_bound = std::min(out.upper_bound, plan.objective);
        warm_source = plan;
        for (int c = 0; c < N; ++c) {
          if (plan.x[c]) inserted += disc.refine(c, plan.rho[c]);
        }
      }
    } else if (inst.total_demand() == 0.0) {
      // Nothing proposed and nothing to serve: the all-closed plan is optimal.
      const PlanSolution plan = PlanSolution::zero(inst);
      round_ub = plan.objective;
      if (!out.incumbent) out.incumbent = plan;
      out.upper_bound = std::min(out.upper_bound, round_ub);
    }
    log(round + 1, "MC", round_ub, warm);

    if (std::isfinite(prev_round_ub) && std::isfinite(round_ub) &&
        (prev_round_ub - round_ub) / round_ub <= cfg.improve_eps) {
      status = ExactStatus::converged;
      break;
    }
    prev_round_ub = round_ub;
    if (added == 0 && inserted == 0) {
      // The next round would solve the exact same surrogate and the exact
      // same conservative model.
      status = clock_hit ? ExactStatus::time_limit : ExactStatus::grid_exhausted;
      break;
    }
    if (remaining() <= 0.0) break;
  }

  out.seconds = elapsed_s(t0);
  out.status = status;
  return out;
}

}  // namespace vertiflow::solve
