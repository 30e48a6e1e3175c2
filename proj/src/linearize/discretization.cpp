#include "vertiflow/linearize/discretization.hpp"

#include <algorithm>
#include <cmath>

namespace vertiflow::linearize {

double intersection_point(double a, double b) {
  if (!(a >= 0.0 && a < b && b < 1.0)) {
    throw DomainError("intersection_point: need 0 <= a < b < 1");
  }
  return (a + b - 2.0 * a * b) / (2.0 - a - b);
}

double secant_value(double lo, double hi, double rho) {
  return secant_cut(lo, hi).at(rho);
}

double tangent_value(double at, double rho) { return tangent_cut(at).at(rho); }

LinearCut secant_cut(double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi < 1.0)) {
    throw DomainError("secant_cut: need 0 <= lo < hi < 1");
  }
  const double slope = 1.0 / ((1.0 - lo) * (1.0 - hi));
  return {slope, -lo * hi * slope};
}

LinearCut tangent_cut(double at) {
  if (!(at >= 0.0 && at < 1.0)) throw DomainError("tangent_cut: need 0 <= at < 1");
  const double slope = 1.0 / ((1.0 - at) * (1.0 - at));
  return {slope, -at * at * slope};
}

Discretization::Discretization(int num_candidates, std::vector<double> points,
                               double min_gap)
    : min_gap_(min_gap) {
  if (num_candidates < 0) throw DomainError("discretization: negative candidate count");
  if (min_gap <= 0.0) throw DomainError("discretization: min_gap must be positive");
  if (points.size() < 2) throw DomainError("discretization: need at least two points");
  if (points.front() != 0.0) throw DomainError("discretization: grid must start at 0");
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (!(points[k] < points[k + 1])) {
      throw DomainError("discretization: points must be strictly increasing");
    }
  }
  if (points.back() > 1.0) throw DomainError("discretization: points must stay within [0, 1]");
  grids_.assign(num_candidates, points);
}

Discretization Discretization::initial(int num_candidates, double rho_max, double min_gap) {
  std::vector<double> pts;
  for (double p : {0.0, 0.3, 0.6, 0.8, 0.9}) {
    if (p < rho_max - 1e-9) pts.push_back(p);
  }
  pts.push_back(rho_max);
  return Discretization(num_candidates, std::move(pts), min_gap);
}

Discretization Discretization::uniform(int num_candidates, double step, double rho_max,
                                       double min_gap) {
  if (step <= 0.0) throw DomainError("discretization: step must be positive");
  std::vector<double> pts;
  for (int k = 0; k * step < rho_max - 1e-9; ++k) pts.push_back(k * step);
  pts.push_back(rho_max);
  return Discretization(num_candidates, std::move(pts), min_gap);
}

const std::vector<double>& Discretization::grid(int cand) const {
  if (cand < 0 || cand >= num_candidates()) {
    throw DomainError("discretization: candidate index out of range");
  }
  return grids_[cand];
}

int Discretization::segment_of(int cand, double rho) const {
  const auto& g = grid(cand);
  if (rho < g.front() || rho > g.back()) {
    throw DomainError("discretization: utilisation outside the grid range");
  }
  const auto it = std::upper_bound(g.begin(), g.end(), rho);
  const int k = static_cast<int>(it - g.begin()) - 1;
  return std::clamp(k, 0, segments(cand) - 1);
}

std::vector<double> Discretization::bar_points(int cand) const {
  const auto& g = grid(cand);
  const int last = static_cast<int>(g.size()) - 1;
  std::vector<double> bar(g.size());
  bar[0] = g[0];
  bar[last] = g[last];
  for (int k = 1; k < last; ++k) bar[k] = intersection_point(g[k - 1], g[k]);
  return bar;
}

int Discretization::refine(int cand, double rho_star) {
  const auto& g = grid(cand);
  if (rho_star < g.front() || rho_star > g.back()) {
    throw DomainError("discretization: refinement target outside the grid range");
  }
  const int k = segment_of(cand, rho_star);
  const double proposals[3] = {rho_star, 0.5 * (g[k] + rho_star),
                               0.5 * (rho_star + g[k + 1])};
  int inserted = 0;
  auto& mutable_grid = grids_[cand];
  for (double p : proposals) {
    double nearest = kInf;
    for (double q : mutable_grid) nearest = std::min(nearest, std::fabs(p - q));
    if (nearest > min_gap_) {
      mutable_grid.insert(
          std::upper_bound(mutable_grid.begin(), mutable_grid.end(), p), p);
      ++inserted;
    }
  }
  return inserted;
}

int Discretization::refine_all(const std::vector<double>& rho_star) {
  if (rho_star.size() != static_cast<std::size_t>(num_candidates())) {
    throw DomainError("discretization: one refinement target per candidate required");
  }
  int inserted = 0;
  for (int c = 0; c < num_candidates(); ++c) inserted += refine(c, rho_star[c]);
  return inserted;
}

void Discretization::ensure_point(int cand, double rho) {
  if (cand < 0 || cand >= num_candidates()) {
    throw DomainError("discretization: candidate index out of range");
  }
  auto& g = grids_[cand];
  if (rho < g.front() || rho > g.back()) {
    throw DomainError("discretization: point outside the grid range");
  }
  const auto it = std::lower_bound(g.begin(), g.end(), rho);
  if (it != g.end() && std::fabs(*it - rho) <= 1e-12) return;
  if (it != g.begin() && std::fabs(*(it - 1) - rho) <= 1e-12) return;
  g.insert(it, rho);
}

nlohmann::json Discretization::to_json() const {
  nlohmann::json out;
  out["min_gap"] = min_gap_;
  out["grids"] = grids_;
  nlohmann::json bars = nlohmann::json::array();
  for (int c = 0; c < num_candidates(); ++c) bars.push_back(bar_points(c));
  out["bar_points"] = bars;
  return out;
}

}  // namespace vertiflow::linearize
