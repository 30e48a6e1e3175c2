#pragma once
// Travel-time conversions shared by the instance generator and benchmarks.

namespace vertiflow {

// Drone flight time in minutes over a leg of l_km kilometres at the given
// cruise speed, plus one minute of fixed take-off/landing overhead.
double flight_time_from_distance(double l_km, double cruise_mps);

// Ground courier time in minutes over l_km at an effective speed (m/s).
double courier_time_from_distance(double l_km, double speed_mps);

}  // namespace vertiflow
