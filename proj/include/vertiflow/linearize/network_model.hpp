#pragma once
// Construction of the two piecewise-linear network MILPs.
//
// Both models share the linear core of the planning problem — vertiport
// budget, apron selection, route opening/uniqueness, market share, service
// fraction gating, flight volume coupling, flow balance, apron overflow —
// and differ only in how the nonlinear drone-count function
// f(rho) = rho/(1-rho) enters:
//
//   * conservative: the fleet side uses secant overestimates of f (one cut
//     per grid segment, ungated) and the charging side the largest tangent
//     underestimate (selected by indicator variables over the tangent
//     activity intervals).  Every feasible point of this model is feasible
//     for the exact nonlinear problem, so its optimum is an upper bound.
//   * relaxed: the mirror image — tangent cuts on the fleet side, gated
//     secant terms on the charging side.  Every exact-feasible point remains
//     feasible here, so its optimum is a lower bound.
//
// The builder returns the MILP together with a layout that maps model columns
// back to plan quantities, extracts plans from solver output, and projects
// plans onto full variable assignments for warm starts.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/routes.hpp"
#include "vertiflow/core/solution.hpp"
#include "vertiflow/linearize/discretization.hpp"
#include "vertiflow/milp/model.hpp"

namespace vertiflow::linearize {

struct BuildOptions {
  OverflowForm overflow_form = OverflowForm::literal;

  // Model-shape switches (benchmark variants):
  bool include_fleet = true;     // fleet variable, cut machinery, fleet row
  bool include_charging = true;  // per-vertiport charging balance (needs fleet)
  bool include_aprons = true;    // apron choice variables and their rows
  bool include_overflow = true;  // apron overflow rows (needs aprons)

  // Restrict the candidate set (1 = usable); empty = all candidates.
  std::vector<std::uint8_t> allowed;
  // Fix the open/close decision per candidate (values 0/1); empty = free.
  std::vector<std::uint8_t> fix_x;
  // Fix the route choices: exactly the listed routes at 1, all others at 0.
  std::optional<std::vector<RouteValue>> fix_y;

  // Cost/time overrides for benchmark modes (nullptr = instance matrices).
  const std::vector<std::vector<double>>* flight_cost = nullptr;
  const std::vector<std::vector<double>>* flight_time = nullptr;
  // Route enumeration knobs (middle-leg range test / time override).
  RouteOptions route_options;
};

// Column map of a built model.  Offsets are -1 when the block is absent.
struct NetworkLayout {
  bool conservative = true;
  std::vector<int> cands;      // usable candidate indices, ascending
  std::vector<int> cand_pos;   // instance candidate -> position in cands, or -1
  RouteTable table;            // routes over usable candidates only
  std::vector<std::pair<int, int>> psi_arcs;  // arcs carrying at least one route
  std::vector<std::pair<int, int>> phi_arcs;  // all ordered usable arcs
  std::vector<int> apron_options;

  int x0 = -1;      // per usable candidate
  int z0 = -1;      // per (candidate position, apron option)
  int gamma = -1;
  int y0 = -1;      // per route
  int alpha0 = -1;  // per route
  int psi0 = -1;    // per psi arc
  int phi0 = -1;    // per phi arc
  int rho0 = -1;    // per usable candidate
  int theta0 = -1;  // per usable candidate
  int beta0 = -1;   // segment indicators, ragged
  int pi0 = -1;     // rho * beta products, ragged
  int w0 = -1;      // rho * z products (literal overflow), per (position, option)
  std::vector<int> seg_start;  // per candidate position: first segment index
  int total_segments = 0;

  // Per-candidate grids the cuts were generated from.
  std::vector<std::vector<double>> grids;
  std::vector<std::vector<double>> gate_points;  // bar grid (conservative) or plain grid

  int num_x() const { return static_cast<int>(cands.size()); }
  int segments(int pos) const { return seg_start[pos + 1] - seg_start[pos]; }
  int x_var(int pos) const { return x0 + pos; }
  int z_var(int pos, int opt) const {
    return z0 + pos * static_cast<int>(apron_options.size()) + opt;
  }
  int y_var(int route) const { return y0 + route; }
  int alpha_var(int route) const { return alpha0 + route; }
  int psi_var(int arc) const { return psi0 + arc; }
  int phi_var(int arc) const { return phi0 + arc; }
  int rho_var(int pos) const { return rho0 + pos; }
  int theta_var(int pos) const { return theta0 + pos; }
  int beta_var(int pos, int k) const { return beta0 + seg_start[pos] + k; }
  int pi_var(int pos, int k) const { return pi0 + seg_start[pos] + k; }
  int w_var(int pos, int opt) const {
    return w0 + pos * static_cast<int>(apron_options.size()) + opt;
  }
};

struct BuiltNetwork {
  milp::MilpModel model;
  NetworkLayout layout;
};

// Upper-bounding model: secant fleet cuts, tangent charging terms.
// Throws DomainError if any grid reaches 1 (f diverges there).
BuiltNetwork build_conservative(const Instance& inst, const Discretization& disc,
                                const BuildOptions& opts = {});
// Lower-bounding model: tangent fleet cuts, secant charging terms.
BuiltNetwork build_relaxed(const Instance& inst, const Discretization& disc,
                           const BuildOptions& opts = {});

// Read a solved assignment back into a plan (objective = model objective).
PlanSolution extract_plan(const Instance& inst, const BuiltNetwork& net,
                          const std::vector<double>& assignment);

// Project a plan onto a full variable assignment of the built model,
// recomputing the auxiliary variables (theta, beta, pi, w) for the model's
// own grids.  Throws DomainError if the plan references routes or flows the
// model does not carry.
std::vector<double> plan_to_assignment(const Instance& inst, const BuiltNetwork& net,
                                       const PlanSolution& plan);

// Cut-system dump (grids, bar points, secant and tangent coefficients).
nlohmann::json cuts_to_json(const Instance& inst, const Discretization& disc);

}  // namespace vertiflow::linearize
