#pragma once
// Network plan: which vertiports open, apron counts, route choices, service
// levels, flow rates and fleet size.  Serializes to JSON.

#include <string>
#include <vector>

#include <json.hpp>

#include "vertiflow/core/instance.hpp"

namespace vertiflow {

// Value attached to a service route (o, i, j, d); used for both the route
// choice y (0/1) and the served fraction alpha.
struct RouteValue {
  Index o = 0, i = 0, j = 0, d = 0;
  double value = 0.0;
};

struct PlanSolution {
  std::vector<std::uint8_t> x;  // per candidate: vertiport open?
  std::vector<int> aprons;      // per candidate: chosen apron count h, 0 if closed
  std::vector<RouteValue> y;    // routes with y = 1
  std::vector<RouteValue> alpha;  // routes with alpha > 0
  int fleet_size = 0;
  std::vector<double> rho;      // per candidate utilisation
  std::vector<std::vector<double>> psi;  // [i][j] loaded flight rate
  std::vector<std::vector<double>> phi;  // [i][j] re-positioning flight rate
  double objective = 0.0;

  // All-zero plan sized for an instance.
  static PlanSolution zero(const Instance& inst);

  double y_value(Index o, Index i, Index j, Index d) const;
  double alpha_value(Index o, Index i, Index j, Index d) const;
  double served_demand(const Instance& inst) const;  // sum of alpha * rate
};

nlohmann::json solution_to_json(const PlanSolution& s);
PlanSolution solution_from_json(const nlohmann::json& j);
void save_solution(const PlanSolution& s, const std::string& path);
PlanSolution load_solution(const std::string& path);

// Outcome of checking one constraint family.
struct FamilyCheck {
  std::string family;
  bool pass = true;
  double worst_violation = 0.0;
  std::string detail;  // where the worst violation occurs
};

struct FeasibilityReport {
  std::vector<FamilyCheck> families;
  double tol = kFeasTol;
  bool pass = true;

  const FamilyCheck* find(const std::string& family) const;
  double worst_violation() const;
  nlohmann::json to_json() const;
};

}  // namespace vertiflow
