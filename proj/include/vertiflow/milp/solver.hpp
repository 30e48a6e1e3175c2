#pragma once

#include <optional>
#include <vector>

#include "vertiflow/milp/model.hpp"
#include "vertiflow/milp/simplex.hpp"

namespace vertiflow::milp {

enum class MilpStatus {
  optimal,     // incumbent proved optimal (or proved infeasible: see objective)
  infeasible,  // no integer-feasible point exists
  unbounded,   // LP relaxation unbounded below
  time_limit,  // stopped on wall clock; best incumbent/bound reported
  node_limit,  // stopped on node budget; best incumbent/bound reported
};

struct MilpOptions {
  double time_limit_s = 3600.0;
  long node_limit = 0;  // 0 = unlimited
  double int_tol = 1e-6;
  // A node is pruned when its bound is >= incumbent - absolute_gap, so the
  // returned incumbent is optimal up to this absolute slack.
  double absolute_gap = 1e-9;
  LpOptions lp;
  // Full assignment over the model variables.  Validated against bounds,
  // integrality, and every row; used as the starting incumbent iff accepted.
  std::optional<std::vector<double>> warm_start;
};

struct MilpResult {
  MilpStatus status = MilpStatus::infeasible;
  double objective = kInf;    // incumbent value; kInf when none found
  std::vector<double> x;      // incumbent assignment; empty when none found
  double best_bound = -kInf;  // proved lower bound on the optimum
  long nodes = 0;             // branch-and-bound nodes whose LP was solved
  long lp_iterations = 0;
  double seconds = 0.0;
  std::optional<WarmStartReport> warm_start_report;

  bool has_incumbent() const { return !x.empty(); }
};

// Deterministic LP-based branch-and-bound for mixed-integer linear models:
// best-bound node selection (FIFO on ties), most-fractional branching
// (lowest column on ties), dual-simplex re-solves warm-started from the
// parent basis.  Two runs on the same model and options produce identical
// results bit for bit.
MilpResult solve_milp(const MilpModel& model, const MilpOptions& options = {});

}  // namespace vertiflow::milp
