#include "vertiflow/core/metrics.hpp"

#include <map>

#include "vertiflow/core/objective.hpp"

namespace vertiflow {

Metrics compute_metrics_from_inputs(double objective, double pooling_size,
                                    const std::vector<MetricsRouteInput>& inputs) {
  Metrics m;
  if (pooling_size <= 0.0) throw DomainError("metrics: pooling size must be positive");

  // Consolidated served rate per pooling group.
  std::map<int, double> pooled_rate;
  for (const auto& r : inputs) {
    if (r.alpha <= 0.0) continue;
    pooled_rate[r.pool_key] += r.alpha * r.rate;
  }

  double weighted_lead = 0.0;
  for (const auto& r : inputs) {
    const double served = r.alpha * r.rate;
    if (served <= 0.0) continue;
    const double pool_wait =
        pooling_size <= 1.0 ? 0.0 : (pooling_size - 1.0) / pooled_rate.at(r.pool_key);
    const double lead = r.t_first + r.t_mid + r.t_last + pool_wait;
    m.routes.push_back({r.o, r.i, r.j, r.d, lead, served});
    m.served_demand += served;
    weighted_lead += served * lead;
  }

  if (m.served_demand <= 0.0) {
    m.defined = false;  // metrics undefined: nothing served
    return m;
  }
  m.defined = true;
  m.mean_operating_cost = objective / m.served_demand;
  m.mean_lead_time = weighted_lead / m.served_demand;
  return m;
}

Metrics compute_metrics(const Instance& inst, const PlanSolution& s) {
  const int n = inst.num_candidates();
  std::vector<MetricsRouteInput> inputs;
  inputs.reserve(s.alpha.size());
  for (const auto& a : s.alpha) {
    MetricsRouteInput in;
    in.o = a.o;
    in.i = a.i;
    in.j = a.j;
    in.d = a.d;
    in.alpha = a.value;
    for (const auto& e : inst.demand) {
      if (e.o == a.o && e.d == a.d) {
        in.rate = e.rate;
        break;
      }
    }
    in.t_first = inst.courier_time[a.o][a.i];
    in.t_mid = inst.flight_time[a.i][a.j];
    in.t_last = inst.courier_time[a.d][a.j];
    in.pool_key = a.i * n + a.j;
    inputs.push_back(in);
  }
  return compute_metrics_from_inputs(evaluate_objective(inst, s), inst.pooling_size, inputs);
}

}  // namespace vertiflow
