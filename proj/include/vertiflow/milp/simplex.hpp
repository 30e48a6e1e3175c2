#pragma once
// Bounded-variable revised simplex over the columns [A | I].
//
// The solver keeps a basis factorization (dense inverse for small row counts,
// sparse LU with product-form updates otherwise) and supports in-place bound
// changes with dual-simplex re-solves, which is what branch-and-bound needs:
// a child node changes one integer bound and re-solves from the parent basis,
// whose reduced costs stay dual-feasible.
//
// Solve logic:
//   * cold start: all-slack basis.  If its reduced costs are dual feasible
//     (true whenever all costs of at-lower-bound columns are >= 0) the main
//     path is the dual simplex; otherwise a zero-cost dual phase reaches
//     primal feasibility first and the primal simplex finishes.
//   * warm start: caller-installed basis statuses, dual simplex.
//
// Determinism: entering/leaving rules are Dantzig-style with fixed
// tie-breaks (largest pivot magnitude, then lowest index); anti-cycling
// falls back to Bland's rule after a run of degenerate iterations.  No
// randomization, no time-dependent decisions.

#include <memory>
#include <vector>

#include "vertiflow/milp/model.hpp"

namespace vertiflow::milp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;              // includes the model constant
  std::vector<double> x;               // structural variable values
  long iterations = 0;
};

enum class BasisStatus : std::int8_t { basic = 0, at_lower = 1, at_upper = 2 };

struct LpOptions {
  double feas_tol = 1e-9;    // primal bound violation tolerance
  double dual_tol = 1e-9;    // reduced cost tolerance
  double pivot_tol = 1e-9;   // smallest acceptable pivot magnitude
  long max_iterations = 400000;
  int refactor_interval = 100;  // product-form updates between refactorizations
  int dense_threshold = 150;    // use the dense inverse engine when m <= this
};

class LpSolver {
 public:
  // Ignores integrality: solves the continuous relaxation of `model`.
  LpSolver(const MilpModel& model, LpOptions options = {});
  ~LpSolver();
  LpSolver(const LpSolver&) = delete;
  LpSolver& operator=(const LpSolver&) = delete;

  // Change / restore a structural column's bounds (B&B branching).
  void set_bounds(int col, double lb, double ub);
  double lower_bound(int col) const;
  double upper_bound(int col) const;
  void reset_bounds();

  // Basis statuses over structural + slack columns (size n + m).
  void set_basis(const std::vector<BasisStatus>& statuses);
  std::vector<BasisStatus> basis_statuses() const;
  void reset_basis();  // all-slack

  // Solve from the current basis (set_basis or previous solve) if any.
  LpResult solve();

  int num_structural() const;
  int num_rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vertiflow::milp
