#pragma once
// Adaptive-discretization exact solver.
//
// Alternates three MILPs over a shared family of per-candidate breakpoint
// grids:
//   1. the conservative network model (upper bounding: each of its feasible
//      points satisfies the exact nonlinear constraints),
//   2. a neighborhood polish with the location vector frozen, built on a
//      uniform fine grid forced to contain the incumbent's exact
//      utilisations and warm-started from that incumbent,
//   3. the relaxed network model (lower bounding).
// After steps 2 and 3 the master grids are refined around the respective
// optima with the midpoint rule.  The loop stops when the relative bound gap
// reaches the target, the time budget runs out, the relaxed model proves
// infeasibility, or no further breakpoints can be inserted.

#include <optional>
#include <string>
#include <vector>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"
#include "vertiflow/linearize/discretization.hpp"
#include "vertiflow/linearize/network_model.hpp"
#include "vertiflow/milp/solver.hpp"

namespace vertiflow::solve {

struct SolverConfig {
  double gap_eps = 0.01;            // relative upper/lower bound gap target
  double total_time_s = 7200.0;     // wall budget for the whole run
  double solve_time_s = 3600.0;     // wall budget per MILP solve
  double min_gap = 0.01;            // minimum spacing of inserted breakpoints
  double neighborhood_unit = 0.05;  // uniform step of the polish grid
  double oracle_unit = 0.005;       // default resolution for oracle cross-checks
  linearize::BuildOptions build;    // model-shape switches shared with benchmarks
};

enum class ExactStatus { converged, time_limit, grid_exhausted, infeasible };

struct TraceRow {
  int iteration = 0;        // 1-based outer iteration
  std::string model;        // "MC", "MCN" or "MR"
  double objective = kInf;  // this solve's objective (inf when no incumbent)
  double ub = kInf;         // bound state after the solve's update
  double lb = -kInf;
  double gap = kInf;
  double seconds = 0.0;     // cumulative wall time at the end of the solve
  long grid_points = 0;     // total breakpoints across all candidates
  int warm = -1;            // warm start: -1 none offered, 0 rejected, 1 installed
};

struct BoundsTrace {
  std::vector<TraceRow> rows;
  // CSV with header `iteration,model,objective,ub,lb,gap,seconds`.
  std::string to_csv() const;
};

struct ExactResult {
  ExactStatus status = ExactStatus::infeasible;
  std::optional<PlanSolution> incumbent;  // best plan found; exact-feasible
  double upper_bound = kInf;
  double lower_bound = -kInf;
  double gap = kInf;
  int iterations = 0;
  double seconds = 0.0;
  BoundsTrace trace;
  linearize::Discretization final_grid;
};

struct NeighborhoodResult {
  milp::MilpStatus status = milp::MilpStatus::infeasible;
  std::optional<PlanSolution> plan;
  double objective = kInf;
  bool warm_accepted = false;  // incumbent projection passed validation
};

// Polish step: conservative model with the open/close vector frozen to
// `x_fixed`, on uniform grids of step neighborhood_unit that additionally
// contain each of the incumbent's utilisations exactly.  The incumbent is
// projected onto the model and installed as a warm start when it validates
// (it always should: the grid containment makes the projection feasible).
NeighborhoodResult neighborhood_search(const Instance& inst,
                                       const std::vector<std::uint8_t>& x_fixed,
                                       const PlanSolution& incumbent,
                                       const SolverConfig& cfg = {});

// Full alternating loop.  Returns the best incumbent found (if any), the
// bound state, and a per-solve trace whose upper bounds never increase and
// lower bounds never decrease.
ExactResult solve_exact(const Instance& inst, const SolverConfig& cfg = {});

}  // namespace vertiflow::solve
