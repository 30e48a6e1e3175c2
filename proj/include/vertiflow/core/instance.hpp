#pragma once
// Problem instance: geography, demand field, operating parameters.
//
// An instance describes one planning scenario for a coordinated
// drone-and-courier delivery network: a set of demand points exchanging
// parcel flows, a set of candidate vertiport locations, and the cost /
// range / queueing parameters of the fleet.  Instances are immutable
// after construction and serialize to a flat JSON document.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vertiflow/common.hpp"

namespace vertiflow {

struct Point {
  double x_km = 0.0;
  double y_km = 0.0;
};

// One origin-destination parcel flow, rate in kg per minute.
struct DemandEntry {
  Index o = 0;
  Index d = 0;
  double rate = 0.0;
};

struct Instance {
  std::string name;

  std::vector<Point> demand_points;  // ids r = 0..R-1 (origins & destinations)
  std::vector<Point> candidates;     // ids i = 0..N-1 (vertiport sites)
  std::vector<DemandEntry> demand;   // sorted by (o,d), unique, o != d

  // Distances in km.
  std::vector<std::vector<double>> courier_dist;  // [r][i]
  std::vector<std::vector<double>> flight_dist;   // [i][j]
  // Times in minutes.  flight_time includes the fixed take-off/landing
  // overhead; courier_time is used by metrics and benchmark modes only.
  std::vector<std::vector<double>> flight_time;   // [i][j]
  std::vector<std::vector<double>> courier_time;  // [r][i]
  // Costs: flight_cost[i][j] is CNY per consolidated flight on leg (i,j);
  // courier_cost[r][i] is CNY per kg for the courier leg between r and i.
  std::vector<std::vector<double>> flight_cost;
  std::vector<std::vector<double>> courier_cost;

  double drone_daily_cost = 71.67;  // CNY per drone per day

  int max_vertiports = 1;          // cap on open vertiports
  std::vector<int> apron_options;  // allowed apron counts, ascending
  double market_share = 0.2;       // minimum served fraction of total demand
  double pooling_size = 4.0;       // kg consolidated into one flight
  double payload_capacity = 12.0;  // kg, physical cap (pooling_size <= this)
  double service_range_km = 5.0;   // max courier leg length
  double flight_range_km = 15.0;   // max drone leg length
  double charge_ratio = 1.0;       // flying-energy / charging-energy rate
  double overflow_cap = 0.05;      // max apron-overflow probability
  double service_level_cap = 0.99; // max utilisation rho per vertiport

  int num_points() const { return static_cast<int>(demand_points.size()); }
  int num_candidates() const { return static_cast<int>(candidates.size()); }
  double total_demand() const;

  // Throws DomainError with a precise message on any malformed field.
  void validate() const;
};

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace vertiflow
