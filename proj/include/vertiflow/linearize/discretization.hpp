#pragma once
// Breakpoint grids for the piecewise-linear treatment of the drone-count
// function f(rho) = rho / (1 - rho) on [0, rho_max].
//
// Two one-dimensional cut families are derived from a grid
// 0 = p_1 < p_2 < ... < p_{K+1} = rho_max:
//   * secants over each segment [p_k, p_{k+1}] overestimate f on the segment
//     and underestimate it elsewhere, so the pointwise max of all secants is
//     the piecewise-linear overestimate;
//   * tangents at each p_k underestimate f everywhere, and the pointwise max
//     switches from the tangent at p_k to the one at p_{k+1} exactly at the
//     intersection abscissa (p_k + p_{k+1} - 2 p_k p_{k+1}) / (2 - p_k - p_{k+1}).
// The "bar" grid of those intersection abscissae (with the original first and
// last points kept) tiles [0, rho_max] into the activity intervals of the
// tangents, interleaved with the original grid.

#include <vector>

#include <json.hpp>

#include "vertiflow/common.hpp"

namespace vertiflow::linearize {

// Abscissa where the tangents of f at a and at b intersect; lies strictly
// between a and b.  Throws DomainError unless 0 <= a < b < 1.
double intersection_point(double a, double b);

// Value at rho of the secant of f over [lo, hi]:
// (rho - lo*hi) / ((1 - lo)(1 - hi)).  Throws unless 0 <= lo < hi < 1.
double secant_value(double lo, double hi, double rho);

// Value at rho of the tangent of f at `at`: (rho - at^2) / (1 - at)^2.
// Throws unless 0 <= at < 1.
double tangent_value(double at, double rho);

// Slope/intercept pairs used both to emit cut rows and to reproduce their
// left-hand sides bit for bit when mapping a plan onto model variables.
struct LinearCut {
  double slope = 0.0;
  double intercept = 0.0;
  double at(double rho) const { return slope * rho + intercept; }
};
LinearCut secant_cut(double lo, double hi);
LinearCut tangent_cut(double at);

// Per-candidate breakpoint grids with midpoint refinement.
class Discretization {
 public:
  Discretization() = default;
  // Same initial point list for every candidate.
  Discretization(int num_candidates, std::vector<double> points, double min_gap);

  // Default coarse grid {0, 0.3, 0.6, 0.8, 0.9, rho_max} (points at or above
  // rho_max are dropped; rho_max closes the grid).
  static Discretization initial(int num_candidates, double rho_max, double min_gap = 0.01);
  // Uniform grid {0, step, 2*step, ...} closed by rho_max.
  static Discretization uniform(int num_candidates, double step, double rho_max,
                                double min_gap = 0.01);

  int num_candidates() const { return static_cast<int>(grids_.size()); }
  const std::vector<double>& grid(int cand) const;
  int segments(int cand) const { return static_cast<int>(grid(cand).size()) - 1; }
  double min_gap() const { return min_gap_; }

  // Index k (0-based) of the segment [p_k, p_{k+1}) containing rho, so a
  // breakpoint belongs to the segment it starts (rho = p_last to the last
  // segment).  Repeated refinement at the same target then stalls once the
  // nearby midpoints are within min_gap.
  int segment_of(int cand, double rho) const;

  // Tangent-intersection grid: bar[0] = p[0], bar[K] = p[K], interior
  // bar[k] = intersection_point(p[k-1], p[k]).  Size K + 1.
  std::vector<double> bar_points(int cand) const;

  // Midpoint refinement around rho_star: propose {rho*, midpoint to each
  // segment end} and insert every proposal farther than min_gap from all
  // existing and already-inserted points.  Returns the number inserted.
  int refine(int cand, double rho_star);
  // One target per candidate.
  int refine_all(const std::vector<double>& rho_star);

  // Force a breakpoint into the grid regardless of min_gap (used to build
  // neighborhood grids that must contain an incumbent's exact utilisation).
  void ensure_point(int cand, double rho);

  nlohmann::json to_json() const;

 private:
  std::vector<std::vector<double>> grids_;
  double min_gap_ = 0.01;
};

}  // namespace vertiflow::linearize
