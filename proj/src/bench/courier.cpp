#include "vertiflow/bench/courier.hpp"

#include <cmath>

#include "vertiflow/common.hpp"

namespace vertiflow::bench {

void CourierParams::validate() const {
  if (!(daily_wage >= 0.0) || !std::isfinite(daily_wage)) {
    throw DomainError("courier params: daily wage must be non-negative");
  }
  if (!(pooling_size >= 1.0) || !std::isfinite(pooling_size)) {
    throw DomainError("courier params: pooling size must be at least 1");
  }
  if (!(tariff_km_kg >= 0.0) || !std::isfinite(tariff_km_kg)) {
    throw DomainError("courier params: tariff must be non-negative");
  }
  if (!(speed_mps > 0.0) || !std::isfinite(speed_mps)) {
    throw DomainError("courier params: speed must be positive");
  }
  if (!(detour >= 1.0) || !std::isfinite(detour)) {
    throw DomainError("courier params: detour factor must be at least 1");
  }
}

CourierParams default_courier_params(const Instance& inst, double pooling_size,
                                     double wage_ratio) {
  CourierParams p;
  p.daily_wage = wage_ratio * inst.drone_daily_cost;
  p.pooling_size = pooling_size;
  p.validate();
  return p;
}

namespace {

double straight_km(const Point& a, const Point& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

template <typename F>
std::vector<std::vector<double>> pairwise(const std::vector<Point>& pts, F&& value) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b) m[a][b] = value(straight_km(pts[a], pts[b]));
    }
  }
  return m;
}

}  // namespace

std::vector<std::vector<double>> trip_cost_matrix(const CourierParams& params,
                                                  const std::vector<Point>& points) {
  params.validate();
  return pairwise(points, [&](double km) { return params.trip_cost_cny(km); });
}

std::vector<std::vector<double>> travel_time_matrix(const CourierParams& params,
                                                    const std::vector<Point>& points) {
  params.validate();
  return pairwise(points, [&](double km) { return params.travel_minutes(km); });
}

}  // namespace vertiflow::bench
