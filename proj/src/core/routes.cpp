#include "vertiflow/core/routes.hpp"

#include "vertiflow/par/kernels.hpp"

namespace vertiflow {

bool route_leg_feasible(double l_oi, double l_jd, double l_ij,
                        double service_range_km, double flight_range_km) {
  return l_oi <= service_range_km && l_jd <= service_range_km &&
         l_ij <= flight_range_km;
}

namespace {

RouteFeasibility make_feasibility(const Instance& inst, bool parallel) {
  RouteFeasibility rf;
  rf.num_points = inst.num_points();
  rf.num_candidates = inst.num_candidates();
  const std::int64_t R = rf.num_points, N = rf.num_candidates;
  rf.delta.assign(static_cast<std::size_t>(R * N * N * R), 0);

  auto fill_origin = [&](std::int64_t o) {
    for (std::int64_t i = 0; i < N; ++i) {
      if (inst.courier_dist[o][i] > inst.service_range_km) continue;
      for (std::int64_t j = 0; j < N; ++j) {
        if (j == i) continue;  // a drone leg joins two distinct vertiports
        if (inst.flight_dist[i][j] > inst.flight_range_km) continue;
        const std::size_t base = static_cast<std::size_t>(((o * N + i) * N + j) * R);
        for (std::int64_t d = 0; d < R; ++d) {
          if (d == o) continue;
          if (inst.courier_dist[d][j] <= inst.service_range_km) rf.delta[base + d] = 1;
        }
      }
    }
  };

  if (parallel) {
    par::for_each_index(R, fill_origin);
  } else {
    par::for_each_index_serial(R, fill_origin);
  }
  return rf;
}

}  // namespace

RouteFeasibility route_feasibility(const Instance& inst) {
  return make_feasibility(inst, /*parallel=*/true);
}

RouteFeasibility route_feasibility_serial(const Instance& inst) {
  return make_feasibility(inst, /*parallel=*/false);
}

RouteTable RouteTable::build(const Instance& inst, const RouteOptions& opts) {
  RouteTable table;
  const int N = inst.num_candidates();
  const auto& mid_time = opts.mid_time ? *opts.mid_time : inst.flight_time;

  for (int t = 0; t < static_cast<int>(inst.demand.size()); ++t) {
    const auto& e = inst.demand[t];
    const int begin = table.size();
    for (Index i = 0; i < N; ++i) {
      if (inst.courier_dist[e.o][i] > inst.service_range_km) continue;
      for (Index j = 0; j < N; ++j) {
        if (j == i) continue;
        if (opts.enforce_flight_range &&
            inst.flight_dist[i][j] > inst.flight_range_km)
          continue;
        if (inst.courier_dist[e.d][j] > inst.service_range_km) continue;
        Route r;
        r.o = e.o;
        r.i = i;
        r.j = j;
        r.d = e.d;
        r.pair = t;
        r.rate = e.rate;
        r.alpha_cost = e.rate * (inst.courier_cost[e.o][i] + inst.courier_cost[e.d][j]);
        r.t_first = inst.courier_time[e.o][i];
        r.t_mid = mid_time[i][j];
        r.t_last = inst.courier_time[e.d][j];
        table.routes.push_back(r);
      }
    }
    table.pair_range.emplace_back(begin, table.size());
  }
  return table;
}

}  // namespace vertiflow
