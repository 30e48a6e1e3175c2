#pragma once
// Surrogate-guided heuristic for instances too large for the exact solver.
//
// A cheap location surrogate proposes "promising" vertiport sites; the
// conservative network MILP is then solved restricted to the union of all
// sites proposed so far, its utilisation grids are refined around the
// incumbent, and a diversification row forces the next surrogate solve to
// switch at least n_switch sites.  The loop stops when the per-round upper
// bound stops improving (relative improvement <= improve_eps), on time-out,
// or when neither the site set nor the grids can change any more.
//
// Two surrogates are provided:
//   * coverage — pick sites and one feasible route per pair to maximise the
//     covered demand rate (the default);
//   * pmedian  — assign every demand point's collection and distribution to
//     an open site minimising demand-weighted courier time (a baseline).
//
// Upper bounds are genuine: every incumbent comes from the conservative
// model, so it is feasible for the exact nonlinear problem.  No lower bound
// is produced; trace rows carry lb = -inf.

#include <cstdint>
#include <optional>
#include <vector>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"
#include "vertiflow/linearize/network_model.hpp"
#include "vertiflow/milp/model.hpp"
#include "vertiflow/solve/exact.hpp"

namespace vertiflow::solve {

enum class Surrogate { coverage, pmedian };

struct MatheuristicConfig {
  double improve_eps = 0.01;    // stop once relative UB improvement <= this
  double total_time_s = 7200.0;
  double solve_time_s = 500.0;  // cap per MILP solve
  double min_gap = 0.01;        // refinement spacing filter
  Surrogate surrogate = Surrogate::coverage;
  linearize::BuildOptions build;
};

struct MatheuristicResult {
  ExactStatus status = ExactStatus::grid_exhausted;
  std::optional<PlanSolution> incumbent;
  double upper_bound = kInf;
  int iterations = 0;  // completed conservative rounds
  double seconds = 0.0;
  BoundsTrace trace;
  std::vector<std::uint8_t> promising;  // final grown site set (1 = member)
};

// Demand-coverage surrogate MILP (maximisation negated into the
// minimise-only layer, so the model objective is minus the covered rate).
// Columns 0..N-1 are the binary site variables, in candidate order.  When
// `prior_set` is given, a diversification row requires the chosen sites to
// differ from it in at least n_switch positions.
milp::MilpModel build_coverage_surrogate(
    const Instance& inst,
    const std::optional<std::vector<std::uint8_t>>& prior_set = std::nullopt,
    int n_switch = 2);

// p-median surrogate MILP over courier collection/distribution times.
// Columns 0..N-1 are the binary site variables, in candidate order.
milp::MilpModel build_pmedian_surrogate(const Instance& inst);

MatheuristicResult solve_matheuristic(const Instance& inst,
                                      const MatheuristicConfig& cfg = {},
                                      int n_switch = 2);

}  // namespace vertiflow::solve
