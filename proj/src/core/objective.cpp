#include "vertiflow/core/objective.hpp"

#include <numeric>

namespace vertiflow {

namespace {

double pair_rate(const Instance& inst, Index o, Index d) {
  for (const auto& e : inst.demand) {
    if (e.o == o && e.d == d) return e.rate;
  }
  throw DomainError("objective: alpha entry references a pair with no demand");
}

void check_dims(const Instance& inst, const PlanSolution& s) {
  const std::size_t n = static_cast<std::size_t>(inst.num_candidates());
  if (s.x.size() != n || s.rho.size() != n || s.psi.size() != n || s.phi.size() != n) {
    throw DomainError("objective: solution dimensions do not match instance");
  }
}

}  // namespace

double evaluate_objective(const Instance& inst, const PlanSolution& s) {
  check_dims(inst, s);
  const int n = inst.num_candidates();

  double total = inst.drone_daily_cost * static_cast<double>(s.fleet_size);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += inst.flight_cost[i][j] * (s.psi[i][j] + s.phi[i][j]);
    }
  }
  for (const auto& a : s.alpha) {
    const double rate = pair_rate(inst, a.o, a.d);
    total += rate * (inst.courier_cost[a.o][a.i] + inst.courier_cost[a.d][a.j]) * a.value;
  }
  return total;
}

double evaluate_objective_alt(const Instance& inst, const PlanSolution& s) {
  check_dims(inst, s);
  const int n = inst.num_candidates();

  // Build per-term vectors first, then reduce — a different accumulation
  // order and code path from evaluate_objective.
  std::vector<double> flight_terms;
  flight_terms.reserve(static_cast<std::size_t>(n) * n);
  for (int j = n - 1; j >= 0; --j) {
    for (int i = n - 1; i >= 0; --i) {
      flight_terms.push_back((s.psi[i][j] + s.phi[i][j]) * inst.flight_cost[i][j]);
    }
  }
  std::vector<double> courier_terms;
  courier_terms.reserve(s.alpha.size());
  for (auto it = s.alpha.rbegin(); it != s.alpha.rend(); ++it) {
    const double rate = pair_rate(inst, it->o, it->d);
    courier_terms.push_back(it->value * rate *
                            (inst.courier_cost[it->o][it->i] + inst.courier_cost[it->d][it->j]));
  }
  const double flights = std::accumulate(flight_terms.begin(), flight_terms.end(), 0.0);
  const double couriers = std::accumulate(courier_terms.begin(), courier_terms.end(), 0.0);
  return static_cast<double>(s.fleet_size) * inst.drone_daily_cost + flights + couriers;
}

}  // namespace vertiflow
