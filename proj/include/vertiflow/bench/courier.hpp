#pragma once
// Ground-courier cost/time parameters shared by the comparison modes.
//
// A dedicated courier earns a fixed daily wage, travels at a constant
// effective speed along roads (straight-line distance times a detour
// factor), and charges a per-trip transport cost proportional to road
// length and to the kilograms pooled into the trip.
//
// Calibration notes: the transport tariff (1.25 CNY per km per kg) and the
// 5 m/s effective speed come from the same calibration bundle as the drone
// parameters; no published figure exists for the daily wage, so the default
// scales the drone daily cost by `wage_ratio` (4x) — a placeholder that
// callers should override when real wage data is available.

#include <vector>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/travel.hpp"

namespace vertiflow::bench {

struct CourierParams {
  double daily_wage = 4.0 * 71.67;  // CNY per courier per day (placeholder, see above)
  double pooling_size = 1.0;        // kg consolidated into one courier trip (>= 1)
  double tariff_km_kg = 1.25;       // CNY per road-km per kg carried
  double speed_mps = 5.0;           // effective ground speed
  double detour = 1.4;              // road length = detour * straight-line length

  double road_km(double straight_km) const { return detour * straight_km; }
  // Cost of one pooled trip over a leg of the given straight-line length.
  double trip_cost_cny(double straight_km) const {
    return tariff_km_kg * road_km(straight_km) * pooling_size;
  }
  // Travel time of one trip, minutes.
  double travel_minutes(double straight_km) const {
    return courier_time_from_distance(road_km(straight_km), speed_mps);
  }

  // Throws DomainError on negative fields, pooling < 1, or speed <= 0.
  void validate() const;
};

// Defaults wired to an instance: wage = wage_ratio * drone daily cost.
CourierParams default_courier_params(const Instance& inst, double pooling_size = 1.0,
                                     double wage_ratio = 4.0);

// Dense per-trip cost / travel-time matrices over a point set (demand points
// for door-to-door service, candidate sites for the courier hub network).
// Diagonals are zero.
std::vector<std::vector<double>> trip_cost_matrix(const CourierParams& params,
                                                  const std::vector<Point>& points);
std::vector<std::vector<double>> travel_time_matrix(const CourierParams& params,
                                                    const std::vector<Point>& points);

}  // namespace vertiflow::bench
