#include "vertiflow/solve/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vertiflow/core/queueing.hpp"
#include "vertiflow/core/routes.hpp"
#include "vertiflow/milp/model.hpp"
#include "vertiflow/milp/simplex.hpp"
#include "vertiflow/par/kernels.hpp"

namespace vertiflow::solve {

namespace {

constexpr int kMaxOpen = 4;
constexpr int kMaxArcs = kMaxOpen * (kMaxOpen - 1);
constexpr double kTol = 1e-9;

// One (vertiport subset, route allocation) combination.
struct Combo {
  std::uint32_t mask = 0;
  std::array<std::int16_t, 8> choice{};  // route index per demand pair, -1 = unserved
};

// Best grid point found within one combination.
struct ComboBest {
  double value = kInf;
  std::array<double, kMaxOpen> rho{};
  std::array<double, kMaxArcs> phi{};  // ordered (p, q), p != q, over open positions
  int fleet = 0;
};

// Per-combination scan context (everything derived from the fixed x/z/y).
struct ScanContext {
  const Instance& inst;
  std::vector<int> open;                       // open candidate ids, ascending
  int m = 0;                                   // |open|
  std::array<double, kMaxOpen> serve{};        // demand rate served per unit rho
  std::array<double, kMaxOpen> var_cost{};     // courier + loaded-flight cost per unit rho
  std::array<double, kMaxOpen> fly_time{};     // loaded flight minutes per unit rho
  std::array<std::array<double, kMaxOpen>, kMaxOpen> k{};  // psi per unit rho on (p,q)
  double need = 0.0;                           // market-share demand threshold
  int fleet_cap = 0;                           // open count x max apron slots
  long points = 0;                             // grid points fully evaluated
};

double overflow_rho_cap(const Instance& inst, OverflowForm form, int h) {
  const double g = inst.overflow_cap;
  const double cap = form == OverflowForm::direct
                         ? std::pow(g, 1.0 / h)
                         : std::pow(g, 1.0 / (h + 1.0) - 1.0 / h);
  return std::min(inst.service_level_cap, cap);
}

// Repositioning flows for two vertiports: the balance equations pin one arc
// per direction; any added circulation only costs more.
bool settle_two(const ScanContext& ctx, const std::array<double, kMaxOpen>& rho,
                double imbalance0, std::array<double, kMaxArcs>& phi, double& phi_cost,
                double& phi_time) {
  const int a = ctx.open[0], b = ctx.open[1];
  phi.fill(0.0);
  // Arc order for m = 2: (0,1) then (1,0).
  if (imbalance0 > 0.0) {
    phi[1] = imbalance0;  // return empty drones b -> a
  } else if (imbalance0 < 0.0) {
    phi[0] = -imbalance0;
  }
  phi_cost = ctx.inst.flight_cost[a][b] * phi[0] + ctx.inst.flight_cost[b][a] * phi[1];
  phi_time = ctx.inst.flight_time[a][b] * phi[0] + ctx.inst.flight_time[b][a] * phi[1];
  // Charging balance per vertiport, now including the repositioning leg.
  const double out0 = ctx.fly_time[0] * rho[0] + ctx.inst.flight_time[a][b] * phi[0];
  const double out1 = ctx.fly_time[1] * rho[1] + ctx.inst.flight_time[b][a] * phi[1];
  if (ctx.inst.charge_ratio * out0 > queue_length(rho[0]) + kTol) return false;
  if (ctx.inst.charge_ratio * out1 > queue_length(rho[1]) + kTol) return false;
  return true;
}

// General case: minimize repositioning cost plus the (relaxed) fleet cost
// subject to flow balance and per-vertiport charging capacity.
bool settle_lp(const ScanContext& ctx, const std::array<double, kMaxOpen>& rho,
               const std::array<double, kMaxOpen>& imbalance, double fleet_fixed,
               std::array<double, kMaxArcs>& phi, double& phi_cost, double& phi_time) {
  const Instance& inst = ctx.inst;
  milp::MilpModel lp;
  std::array<std::array<int, kMaxOpen>, kMaxOpen> arc_var{};
  for (int p = 0; p < ctx.m; ++p) {
    for (int q = 0; q < ctx.m; ++q) {
      if (p == q) continue;
      arc_var[p][q] = lp.add_var("phi", milp::VarKind::continuous, 0.0, kInf,
                                 inst.flight_cost[ctx.open[p]][ctx.open[q]]);
    }
  }
  const int gamma = lp.add_var("gamma", milp::VarKind::continuous, 0.0,
                               static_cast<double>(ctx.fleet_cap), inst.drone_daily_cost);
  // Flow balance out - in = -imbalance; the last row is implied by the others
  // (arc flows conserve), so it is dropped to keep the basis well-conditioned.
  for (int p = 0; p + 1 < ctx.m; ++p) {
    std::vector<std::pair<int, double>> coefs;
    for (int q = 0; q < ctx.m; ++q) {
      if (p == q) continue;
      coefs.emplace_back(arc_var[p][q], 1.0);
      coefs.emplace_back(arc_var[q][p], -1.0);
    }
    lp.add_row("balance", milp::RowSense::eq, -imbalance[p], std::move(coefs));
  }
  for (int p = 0; p < ctx.m; ++p) {  // charging capacity on outbound time
    std::vector<std::pair<int, double>> coefs;
    for (int q = 0; q < ctx.m; ++q) {
      if (p == q) continue;
      coefs.emplace_back(arc_var[p][q],
                         inst.charge_ratio * inst.flight_time[ctx.open[p]][ctx.open[q]]);
    }
    // The loaded-flight part was pre-checked to tolerance, so the remaining
    // headroom is clamped at zero rather than carrying a -1e-10 residue.
    const double headroom =
        queue_length(rho[p]) - inst.charge_ratio * ctx.fly_time[p] * rho[p];
    lp.add_row("charge", milp::RowSense::le, std::max(0.0, headroom), std::move(coefs));
  }
  {  // fleet covers busy + in-flight drones
    std::vector<std::pair<int, double>> coefs{{gamma, -1.0}};
    for (int p = 0; p < ctx.m; ++p) {
      for (int q = 0; q < ctx.m; ++q) {
        if (p == q) continue;
        coefs.emplace_back(arc_var[p][q], inst.flight_time[ctx.open[p]][ctx.open[q]]);
      }
    }
    lp.add_row("fleet", milp::RowSense::le, -fleet_fixed, std::move(coefs));
  }
  milp::LpSolver solver(lp);
  const milp::LpResult res = solver.solve();
  if (res.status != milp::LpStatus::optimal) return false;
  phi.fill(0.0);
  phi_cost = 0.0;
  phi_time = 0.0;
  int slot = 0;
  for (int p = 0; p < ctx.m; ++p) {
    for (int q = 0; q < ctx.m; ++q) {
      if (p == q) continue;
      const double v = std::max(0.0, res.x[arc_var[p][q]]);
      phi[slot++] = v;
      phi_cost += inst.flight_cost[ctx.open[p]][ctx.open[q]] * v;
      phi_time += inst.flight_time[ctx.open[p]][ctx.open[q]] * v;
    }
  }
  return true;
}

// Evaluate one fully chosen utilisation vector; update the combination best.
void score_leaf(ScanContext& ctx, std::array<double, kMaxOpen>& rho, double var_cost,
                double fleet_fixed, ComboBest& best) {
  const Instance& inst = ctx.inst;
  ++ctx.points;

  std::array<double, kMaxOpen> imbalance{};
  double worst = 0.0;
  for (int p = 0; p < ctx.m; ++p) {
    double b = 0.0;
    for (int q = 0; q < ctx.m; ++q) {
      b += ctx.k[p][q] * rho[p] - ctx.k[q][p] * rho[q];
    }
    imbalance[p] = b;
    worst = std::max(worst, std::fabs(b));
  }

  std::array<double, kMaxArcs> phi{};
  double phi_cost = 0.0, phi_time = 0.0;
  if (worst <= 1e-12) {
    // Balanced: zero repositioning is optimal and charging was pre-checked.
    phi.fill(0.0);
  } else if (ctx.m == 2) {
    if (!settle_two(ctx, rho, imbalance[0], phi, phi_cost, phi_time)) return;
  } else {
    if (!settle_lp(ctx, rho, imbalance, fleet_fixed, phi, phi_cost, phi_time)) return;
  }

  const double fleet_need = fleet_fixed + phi_time;
  const int fleet = static_cast<int>(std::ceil(fleet_need - kTol));
  if (fleet > ctx.fleet_cap) return;

  const double value = var_cost + phi_cost + inst.drone_daily_cost * fleet;
  if (value < best.value) {
    best.value = value;
    best.rho = rho;
    best.phi = phi;
    best.fleet = fleet;
  }
}

// Depth-first scan over the utilisation grid with exact dominance pruning:
// every cost term grows with rho, so an ascending loop can stop as soon as
// the optimistic completion exceeds the best found (strict >, ties kept).
void scan(ScanContext& ctx, const std::vector<double>& grid, int level,
          std::array<double, kMaxOpen>& rho, double var_cost, double served,
          double fleet_fixed, ComboBest& best) {
  if (level == ctx.m) {
    if (served + kTol < ctx.need) return;
    score_leaf(ctx, rho, var_cost, fleet_fixed, best);
    return;
  }
  // Even serving everyone downstream at full tilt cannot reach the market
  // threshold: prune the whole subtree.
  double rest = 0.0;
  for (int q = level; q < ctx.m; ++q) rest += ctx.serve[q] * grid.back();
  if (served + rest + kTol < ctx.need) return;

  std::size_t start = 0;
  if (level == ctx.m - 1 && ctx.serve[level] > 0.0) {
    // Last vertiport: jump straight to the first utilisation meeting the
    // market threshold (everything below is infeasible; the leaf re-checks,
    // so the jump target only needs to err low).
    const double min_rho = (ctx.need - served - kTol) / ctx.serve[level] - 1e-12;
    start = std::lower_bound(grid.begin(), grid.end(), min_rho) - grid.begin();
  }
  const double r = ctx.inst.charge_ratio;
  for (std::size_t g = start; g < grid.size(); ++g) {
    const double v = grid[g];
    const double busy = queue_length(v);
    // Optimistic completion: every cost term already accumulated plus this
    // level's, with the relaxed (un-rounded) fleet and zero repositioning.
    // It rises with v, so once it exceeds the incumbent no larger v can win.
    if (var_cost + v * ctx.var_cost[level] +
            ctx.inst.drone_daily_cost * (fleet_fixed + busy + ctx.fly_time[level] * v) >
        best.value) {
      break;
    }
    // Outbound loaded flights alone must fit the charging balance.
    if (r * ctx.fly_time[level] * v > busy + kTol) continue;
    rho[level] = v;
    scan(ctx, grid, level + 1, rho, var_cost + v * ctx.var_cost[level],
         served + ctx.serve[level] * v,
         fleet_fixed + busy + ctx.fly_time[level] * v, best);
  }
  rho[level] = 0.0;
}

}  // namespace

OracleResult solve_oracle(const Instance& inst, const OracleOptions& opts) {
  inst.validate();
  const int C = inst.num_candidates();
  if (C > opts.max_candidates ||
      static_cast<int>(inst.demand.size()) > opts.max_pairs ||
      static_cast<int>(inst.apron_options.size()) > opts.max_apron_options) {
    throw DomainError("oracle: instance exceeds the exhaustive-search size cap");
  }
  if (opts.grid_unit <= 0.0) throw DomainError("oracle: grid unit must be positive");

  const int h_max = *std::max_element(inst.apron_options.begin(), inst.apron_options.end());
  const double rho_cap = overflow_rho_cap(inst, opts.overflow_form, h_max);
  std::vector<double> grid;
  for (int k = 0; k * opts.grid_unit < rho_cap - 1e-12; ++k) grid.push_back(k * opts.grid_unit);
  grid.push_back(rho_cap);

  const RouteTable table = RouteTable::build(inst, {});
  const int pairs = static_cast<int>(inst.demand.size());

  // Enumerate (subset, allocation) combinations up front.
  std::vector<Combo> combos;
  for (std::uint32_t mask = 0; mask < (1u << C); ++mask) {
    if (static_cast<int>(std::popcount(mask)) > inst.max_vertiports) continue;
    std::vector<std::vector<std::int16_t>> options(pairs);
    for (int pr = 0; pr < pairs; ++pr) {
      options[pr].push_back(-1);
      const auto [b, e] = table.pair_range[pr];
      for (int rix = b; rix < e; ++rix) {
        const Route& rt = table.routes[rix];
        if ((mask >> rt.i & 1u) && (mask >> rt.j & 1u)) {
          options[pr].push_back(static_cast<std::int16_t>(rix));
        }
      }
    }
    long count = 1;
    for (const auto& o : options) {
      count *= static_cast<long>(o.size());
      if (count > opts.max_combos) {
        throw DomainError("oracle: allocation combinations exceed the size cap");
      }
    }
    if (static_cast<long>(combos.size()) + count > opts.max_combos) {
      throw DomainError("oracle: allocation combinations exceed the size cap");
    }
    std::array<int, 8> ix{};
    for (long n = 0; n < count; ++n) {
      Combo cb;
      cb.mask = mask;
      cb.choice.fill(-1);
      for (int pr = 0; pr < pairs; ++pr) cb.choice[pr] = options[pr][ix[pr]];
      combos.push_back(cb);
      for (int pr = pairs - 1; pr >= 0; --pr) {  // mixed-radix increment
        if (++ix[pr] < static_cast<int>(options[pr].size())) break;
        ix[pr] = 0;
      }
    }
  }

  // Score every combination independently (deterministic parallel map).
  std::vector<ComboBest> results(combos.size());
  std::vector<long> points(combos.size(), 0);
  par::for_each_index(static_cast<std::int64_t>(combos.size()), [&](std::int64_t ci) {
    const Combo& cb = combos[static_cast<std::size_t>(ci)];
    ScanContext ctx{inst, {}, 0, {}, {}, {}, {}, 0.0, 0, 0};
    for (int c = 0; c < C; ++c) {
      if (cb.mask >> c & 1u) ctx.open.push_back(c);
    }
    ctx.m = static_cast<int>(ctx.open.size());
    ctx.need = inst.market_share * inst.total_demand();
    ctx.fleet_cap = ctx.m * h_max;
    std::array<int, 16> pos{};
    pos.fill(-1);
    for (int p = 0; p < ctx.m; ++p) pos[ctx.open[p]] = p;
    for (int pr = 0; pr < pairs; ++pr) {
      if (cb.choice[pr] < 0) continue;
      const Route& rt = table.routes[cb.choice[pr]];
      const int p = pos[rt.i], q = pos[rt.j];
      const double flow = rt.rate / inst.pooling_size;
      ctx.serve[p] += rt.rate;
      ctx.var_cost[p] += rt.alpha_cost + inst.flight_cost[rt.i][rt.j] * flow;
      ctx.fly_time[p] += inst.flight_time[rt.i][rt.j] * flow;
      ctx.k[p][q] += flow;
    }
    ComboBest best;
    std::array<double, kMaxOpen> rho{};
    scan(ctx, grid, 0, rho, 0.0, 0.0, 0.0, best);
    results[static_cast<std::size_t>(ci)] = best;
    points[static_cast<std::size_t>(ci)] = ctx.points;
  });

  OracleResult out;
  out.combos = static_cast<long>(combos.size());
  for (long p : points) out.points += p;
  std::size_t winner = combos.size();
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    if (results[ci].value < (winner == combos.size() ? kInf : results[winner].value)) {
      winner = ci;
    }
  }
  out.plan = PlanSolution::zero(inst);
  if (winner == combos.size()) return out;  // infeasible

  const Combo& cb = combos[winner];
  const ComboBest& best = results[winner];
  out.feasible = true;
  out.objective = best.value;
  PlanSolution& plan = out.plan;
  std::vector<int> open;
  for (int c = 0; c < C; ++c) {
    if (cb.mask >> c & 1u) open.push_back(c);
  }
  for (std::size_t p = 0; p < open.size(); ++p) {
    plan.x[open[p]] = 1;
    plan.aprons[open[p]] = h_max;
    plan.rho[open[p]] = best.rho[p];
  }
  for (int pr = 0; pr < pairs; ++pr) {
    if (cb.choice[pr] < 0) continue;
    const Route& rt = table.routes[cb.choice[pr]];
    plan.y.push_back({rt.o, rt.i, rt.j, rt.d, 1.0});
    const double a = best.rho[static_cast<std::size_t>(
        std::find(open.begin(), open.end(), rt.i) - open.begin())];
    if (a > 0.0) plan.alpha.push_back({rt.o, rt.i, rt.j, rt.d, a});
    plan.psi[rt.i][rt.j] += rt.rate / inst.pooling_size * a;
  }
  int slot = 0;
  for (std::size_t p = 0; p < open.size(); ++p) {
    for (std::size_t q = 0; q < open.size(); ++q) {
      if (p == q) continue;
      if (best.phi[slot] > 0.0) plan.phi[open[p]][open[q]] = best.phi[slot];
      ++slot;
    }
  }
  plan.fleet_size = best.fleet;
  plan.objective = best.value;
  return out;
}

}  // namespace vertiflow::solve
