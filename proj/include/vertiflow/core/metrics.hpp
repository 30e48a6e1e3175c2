#pragma once
// Service-quality metrics of a plan.
//
//   mean operating cost  = objective / total served demand    (CNY per kg)
//   route lead time      = t_first + t_mid + t_last + pooling wait
//   pooling wait         = (Q - 1) / D_T   with D_T the total served rate
//                          consolidated on the route's middle leg
//   mean lead time       = served-demand-weighted average over routes
//
// Every delivery mode (drone hub-and-spoke, all-courier hub-and-spoke,
// dedicated door-to-door couriers) reports through this one implementation;
// modes differ only in the route inputs they construct.

#include <vector>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/solution.hpp"

namespace vertiflow {

// One served route as seen by the metrics computation.
struct MetricsRouteInput {
  Index o = 0, i = -1, j = -1, d = 0;  // i/j may be -1 for direct modes
  double alpha = 0.0;   // served fraction
  double rate = 0.0;    // demand rate of the pair (kg/min)
  double t_first = 0.0; // min
  double t_mid = 0.0;   // min
  double t_last = 0.0;  // min
  int pool_key = 0;     // routes sharing a consolidated middle leg share a key
};

struct RouteMetrics {
  Index o = 0, i = -1, j = -1, d = 0;
  double lead_time_min = 0.0;
  double served_rate = 0.0;  // alpha * rate
};

struct Metrics {
  bool defined = false;  // false when nothing is served (guards division by 0)
  double served_demand = 0.0;        // kg/min
  double mean_operating_cost = 0.0;  // CNY per kg
  double mean_lead_time = 0.0;       // minutes
  std::vector<RouteMetrics> routes;
};

// Core implementation over pre-built route inputs.
Metrics compute_metrics_from_inputs(double objective, double pooling_size,
                                    const std::vector<MetricsRouteInput>& inputs);

// Drone hub-and-spoke view of a plan: courier first/last legs, flight middle
// leg, consolidation per vertiport pair (i,j).
Metrics compute_metrics(const Instance& inst, const PlanSolution& s);

}  // namespace vertiflow
