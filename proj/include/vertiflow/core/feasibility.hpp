#pragma once
// Feasibility check of a plan against the ORIGINAL nonlinear model, using the
// exact queue-length function f(rho) = rho/(1-rho) — not any linearization.
// Every constraint family reports its worst violation; `pass` holds iff all
// violations are within the tolerance.

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"

namespace vertiflow {

FeasibilityReport check_nonlinear_feasibility(
    const Instance& inst, const PlanSolution& s, double tol = kFeasTol,
    OverflowForm overflow_form = OverflowForm::literal);

}  // namespace vertiflow
