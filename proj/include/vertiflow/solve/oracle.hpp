#pragma once
// Brute-force reference optimum for tiny instances.
//
// Exhaustively enumerates vertiport subsets and single-allocation route
// choices, grid-searches the utilisations at a fixed resolution evaluating
// the exact queue-length function f(rho) = rho/(1-rho), and settles the
// remaining repositioning flows / fleet size with a small LP per grid point
// (fleet size relaxed, then rounded up and re-verified).  Intended as an
// independent check of the bounding pipeline, not as a solver: it refuses
// instances above a hard size cap.

#include <optional>

#include "vertiflow/common.hpp"
#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"

namespace vertiflow::solve {

struct OracleOptions {
  double grid_unit = 0.005;  // utilisation grid resolution
  OverflowForm overflow_form = OverflowForm::literal;
  // Hard size caps; instances beyond them are refused (DomainError).
  int max_candidates = 4;
  int max_pairs = 8;
  int max_apron_options = 3;
  long max_combos = 1'000'000;  // (subset, allocation) combinations
};

struct OracleResult {
  bool feasible = false;
  double objective = kInf;
  PlanSolution plan;  // zero plan when infeasible
  long combos = 0;    // (subset, allocation) combinations enumerated
  long points = 0;    // utilisation grid points evaluated after pruning
};

// Deterministic for any thread count: combinations are scored independently
// and merged by exact comparison with lowest-combination tie-breaks.
OracleResult solve_oracle(const Instance& inst, const OracleOptions& opts = {});

}  // namespace vertiflow::solve
