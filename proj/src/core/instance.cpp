#include "vertiflow/core/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace vertiflow {

namespace {

using nlohmann::ordered_json;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError("instance: " + msg);
}

void check_matrix(const std::vector<std::vector<double>>& m, std::size_t rows,
                  std::size_t cols, const std::string& name) {
  require(m.size() == rows, name + " must have " + std::to_string(rows) + " rows");
  for (const auto& row : m) {
    require(row.size() == cols, name + " rows must have " + std::to_string(cols) + " entries");
    for (double v : row) require(v >= 0.0 && std::isfinite(v), name + " entries must be non-negative and finite");
  }
}

std::vector<std::vector<double>> matrix_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw DomainError("instance: " + name + " must be a 2-d array");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(row.get<std::vector<double>>());
  return out;
}

}  // namespace

double Instance::total_demand() const {
  double sum = 0.0;
  for (const auto& e : demand) sum += e.rate;
  return sum;
}

void Instance::validate() const {
  const std::size_t R = demand_points.size();
  const std::size_t N = candidates.size();
  require(R >= 1, "needs at least one demand point");
  require(N >= 1, "needs at least one candidate");

  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : demand) {
    require(e.o >= 0 && static_cast<std::size_t>(e.o) < R, "demand origin id out of range");
    require(e.d >= 0 && static_cast<std::size_t>(e.d) < R, "demand destination id out of range");
    require(e.o != e.d, "demand entries must have distinct origin and destination");
    require(e.rate > 0.0 && std::isfinite(e.rate), "demand rates must be positive and finite");
    require(seen.insert({e.o, e.d}).second, "duplicate demand pair");
  }
  require(std::is_sorted(demand.begin(), demand.end(),
                         [](const DemandEntry& a, const DemandEntry& b) {
                           return std::pair{a.o, a.d} < std::pair{b.o, b.d};
                         }),
          "demand entries must be sorted by (o,d)");

  check_matrix(courier_dist, R, N, "courier_dist");
  check_matrix(flight_dist, N, N, "flight_dist");
  check_matrix(flight_time, N, N, "flight_time");
  check_matrix(courier_time, R, N, "courier_time");
  check_matrix(flight_cost, N, N, "flight_cost");
  check_matrix(courier_cost, R, N, "courier_cost");
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) require(flight_time[i][j] > 0.0, "flight_time must be positive off the diagonal");

  require(max_vertiports >= 1, "max_vertiports must be positive");
  require(!apron_options.empty(), "apron_options must be non-empty");
  require(std::is_sorted(apron_options.begin(), apron_options.end()), "apron_options must be ascending");
  require(std::adjacent_find(apron_options.begin(), apron_options.end()) == apron_options.end(),
          "apron_options must be distinct");
  require(apron_options.front() >= 1, "apron counts must be positive");
  require(market_share > 0.0 && market_share <= 1.0, "market_share must lie in (0,1]");
  require(pooling_size > 0.0, "pooling_size must be positive");
  require(payload_capacity > 0.0, "payload_capacity must be positive");
  require(pooling_size <= payload_capacity + kFeasTol, "pooling_size must not exceed payload_capacity");
  require(service_range_km > 0.0, "service_range_km must be positive");
  require(flight_range_km > 0.0, "flight_range_km must be positive");
  require(charge_ratio > 0.0, "charge_ratio must be positive");
  require(overflow_cap > 0.0 && overflow_cap < 1.0, "overflow_cap must lie in (0,1)");
  require(service_level_cap > 0.0 && service_level_cap < 1.0, "service_level_cap must lie in (0,1)");
  require(drone_daily_cost >= 0.0, "drone_daily_cost must be non-negative");
}

nlohmann::json instance_to_json(const Instance& inst) {
  ordered_json j;
  j["name"] = inst.name;
  j["demand_points"] = ordered_json::array();
  for (const auto& p : inst.demand_points) j["demand_points"].push_back({{"x_km", p.x_km}, {"y_km", p.y_km}});
  j["candidates"] = ordered_json::array();
  for (const auto& p : inst.candidates) j["candidates"].push_back({{"x_km", p.x_km}, {"y_km", p.y_km}});
  j["demand"] = ordered_json::array();
  for (const auto& e : inst.demand) j["demand"].push_back({{"o", e.o}, {"d", e.d}, {"rate", e.rate}});
  j["courier_dist"] = inst.courier_dist;
  j["flight_dist"] = inst.flight_dist;
  j["flight_time"] = inst.flight_time;
  j["courier_time"] = inst.courier_time;
  j["flight_cost"] = inst.flight_cost;
  j["courier_cost"] = inst.courier_cost;
  j["drone_daily_cost"] = inst.drone_daily_cost;
  j["max_vertiports"] = inst.max_vertiports;
  j["apron_options"] = inst.apron_options;
  j["market_share"] = inst.market_share;
  j["pooling_size"] = inst.pooling_size;
  j["payload_capacity"] = inst.payload_capacity;
  j["service_range_km"] = inst.service_range_km;
  j["flight_range_km"] = inst.flight_range_km;
  j["charge_ratio"] = inst.charge_ratio;
  j["overflow_cap"] = inst.overflow_cap;
  j["service_level_cap"] = inst.service_level_cap;
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  inst.name = j.value("name", std::string{});
  for (const auto& p : j.at("demand_points"))
    inst.demand_points.push_back({p.at("x_km").get<double>(), p.at("y_km").get<double>()});
  for (const auto& p : j.at("candidates"))
    inst.candidates.push_back({p.at("x_km").get<double>(), p.at("y_km").get<double>()});
  for (const auto& e : j.at("demand"))
    inst.demand.push_back({e.at("o").get<Index>(), e.at("d").get<Index>(), e.at("rate").get<double>()});
  inst.courier_dist = matrix_from_json(j.at("courier_dist"), "courier_dist");
  inst.flight_dist = matrix_from_json(j.at("flight_dist"), "flight_dist");
  inst.flight_time = matrix_from_json(j.at("flight_time"), "flight_time");
  inst.courier_time = matrix_from_json(j.at("courier_time"), "courier_time");
  inst.flight_cost = matrix_from_json(j.at("flight_cost"), "flight_cost");
  inst.courier_cost = matrix_from_json(j.at("courier_cost"), "courier_cost");
  inst.drone_daily_cost = j.at("drone_daily_cost").get<double>();
  inst.max_vertiports = j.at("max_vertiports").get<int>();
  inst.apron_options = j.at("apron_options").get<std::vector<int>>();
  inst.market_share = j.at("market_share").get<double>();
  inst.pooling_size = j.at("pooling_size").get<double>();
  inst.payload_capacity = j.at("payload_capacity").get<double>();
  inst.service_range_km = j.at("service_range_km").get<double>();
  inst.flight_range_km = j.at("flight_range_km").get<double>();
  inst.charge_ratio = j.at("charge_ratio").get<double>();
  inst.overflow_cap = j.at("overflow_cap").get<double>();
  inst.service_level_cap = j.at("service_level_cap").get<double>();
  inst.validate();
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file: " + path);
  nlohmann::json j;
  in >> j;
  return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

}  // namespace vertiflow
