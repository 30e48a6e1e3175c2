#pragma once
// Mixed-integer linear model container.  Minimization only; rows are stored
// sparsely; variables carry bounds, kind and objective coefficient.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vertiflow/common.hpp"

namespace vertiflow::milp {

enum class VarKind { continuous, binary, integer };
enum class RowSense { le, ge, eq };

struct Var {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lb = 0.0;
  double ub = kInf;
  double obj = 0.0;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::vector<std::pair<int, double>> coefs;  // sorted by column, unique
};

struct MilpModel {
  std::string name = "model";
  std::vector<Var> vars;
  std::vector<Row> rows;
  double obj_constant = 0.0;

  int add_var(const std::string& name, VarKind kind, double lb, double ub, double obj);
  int add_row(const std::string& name, RowSense sense, double rhs,
              std::vector<std::pair<int, double>> coefs);

  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  bool has_integers() const;

  // Objective value of a full assignment (no feasibility implied).
  double objective_value(const std::vector<double>& x) const;

  // Throws DomainError if coefficients reference unknown columns, bounds are
  // inverted, or binaries have bounds outside [0,1].
  void validate() const;
};

// Per-row / per-bound violation summary for a proposed assignment (used to
// vet warm starts before installing them as incumbents).
struct WarmStartReport {
  bool accepted = false;
  bool complete = false;          // covers every variable
  double worst_violation = 0.0;   // over rows, bounds and integrality
  std::vector<std::string> violations;  // human-readable, one per offence
  double objective = 0.0;
};

// Check a proposed assignment against bounds, integrality and every row at
// the given tolerance.  An incomplete assignment (wrong size) is rejected as
// such without further checks.
WarmStartReport validate_warm_start(const MilpModel& model,
                                    const std::vector<double>& assignment,
                                    double tol = kFeasTol);

// Serialize to the LP text format (minimize; subject to; bounds; generals /
// binaries; end) understood by common external solvers.
std::string to_lp_format(const MilpModel& model);

}  // namespace vertiflow::milp
