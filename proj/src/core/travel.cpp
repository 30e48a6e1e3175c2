#include "vertiflow/core/travel.hpp"

#include "vertiflow/common.hpp"

namespace vertiflow {

double flight_time_from_distance(double l_km, double cruise_mps) {
  if (l_km < 0.0 || cruise_mps <= 0.0) {
    throw DomainError("flight_time_from_distance: need l_km >= 0 and cruise speed > 0");
  }
  return l_km * 1000.0 / cruise_mps / 60.0 + 1.0;
}

double courier_time_from_distance(double l_km, double speed_mps) {
  if (l_km < 0.0 || speed_mps <= 0.0) {
    throw DomainError("courier_time_from_distance: need l_km >= 0 and speed > 0");
  }
  return l_km * 1000.0 / speed_mps / 60.0;
}

}  // namespace vertiflow
