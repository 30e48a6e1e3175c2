#pragma once
// Service-route feasibility and the enumerated route table.
//
// A service route (o, i, j, d) ships parcels from demand point o to demand
// point d through vertiports i and j: courier leg o->i, consolidated drone
// leg i->j, courier leg j->d.  The route is feasible when both courier legs
// are within the service range and the drone leg within the flight range
// (all comparisons non-strict).  Vertiports i and j must be distinct.

#include <cstdint>
#include <vector>

#include "vertiflow/core/instance.hpp"

namespace vertiflow {

// Dense feasibility indicator over all tuples (o, i, j, d).
struct RouteFeasibility {
  int num_points = 0;
  int num_candidates = 0;
  std::vector<std::uint8_t> delta;  // index ((o*N + i)*N + j)*R + d

  bool operator()(Index o, Index i, Index j, Index d) const {
    const std::int64_t N = num_candidates, R = num_points;
    return delta[static_cast<std::size_t>(((o * N + i) * N + j) * R + d)] != 0;
  }
};

// Threshold test for a single tuple's leg lengths.
bool route_leg_feasible(double l_oi, double l_jd, double l_ij,
                        double service_range_km, double flight_range_km);

// Full tuple enumeration.  The parallel variant fills disjoint slots and is
// bitwise identical to the serial reference.
RouteFeasibility route_feasibility(const Instance& inst);
RouteFeasibility route_feasibility_serial(const Instance& inst);

// One enumerated feasible route for a demand pair.
struct Route {
  Index o = 0, i = 0, j = 0, d = 0;
  int pair = 0;           // index into Instance::demand
  double rate = 0.0;      // demand rate of the pair (kg/min)
  double alpha_cost = 0;  // objective coefficient of alpha: rate * (courier o->i + j->d per-kg cost)
  double t_first = 0.0;   // courier leg time o->i (min)
  double t_mid = 0.0;     // middle leg time i->j (min)
  double t_last = 0.0;    // courier leg time j->d (min)
};

// Options for enumerating routes; the all-courier benchmark mode replaces the
// drone middle leg (no flight-range test, courier times/costs between hubs).
struct RouteOptions {
  bool enforce_flight_range = true;
  // Optional middle-leg time override indexed [i][j]; nullptr = flight_time.
  const std::vector<std::vector<double>>* mid_time = nullptr;
};

// Routes grouped by demand pair (then ascending i, then j).
struct RouteTable {
  std::vector<Route> routes;
  std::vector<std::pair<int, int>> pair_range;  // per demand entry: [begin, end) into routes

  static RouteTable build(const Instance& inst, const RouteOptions& opts = {});
  int size() const { return static_cast<int>(routes.size()); }
};

}  // namespace vertiflow
