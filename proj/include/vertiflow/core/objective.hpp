#pragma once
// Daily operating cost of a plan:
//   fleet cost        c_E * Gamma
// + flight cost       sum_ij  p_F[i][j] * (psi[i][j] + phi[i][j])
// + courier leg cost  sum_routes  D_od * (p_LT[o][i] + p_LT[d][j]) * alpha

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"

namespace vertiflow {

// Primary evaluation: term-by-term accumulation in a fixed order.
double evaluate_objective(const Instance& inst, const PlanSolution& s);

// Independent second arithmetic path (vectorized partial sums combined at the
// end).  Kept deliberately separate from evaluate_objective so the two can
// cross-check each other; do not fold them together.
double evaluate_objective_alt(const Instance& inst, const PlanSolution& s);

}  // namespace vertiflow
