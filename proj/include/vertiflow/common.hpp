#pragma once
// Shared basic types, tolerances and tiny helpers used across the toolkit.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vertiflow {

// Feasibility tolerance used by every checker in the toolkit (absolute).
inline constexpr double kFeasTol = 1e-8;
// Tolerance for treating a value as integral.
inline constexpr double kIntTol = 1e-6;
// Numerical infinity for bounds.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Index = std::int32_t;

// Error thrown on malformed inputs / domain violations (rho >= 1, bad JSON, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// How the apron-overflow cap is enforced.  `literal` keeps the published
// inequality  sum_h gamma^{1/h} z_ih rho_i <= sum_h gamma^{1/(h+1)} z_ih
// exactly as written; `direct` enforces the service-level reading
// rho_i <= gamma^{1/h} for the chosen apron count h.
enum class OverflowForm { literal, direct };

inline bool nearly_equal(double a, double b, double tol = kFeasTol) {
  return std::fabs(a - b) <= tol;
}

// Relative gap between an upper and a lower bound; falls back to the absolute
// difference when the lower bound is (numerically) zero so the quotient stays
// meaningful for zero-cost optima.
inline double relative_gap(double ub, double lb) {
  if (!(std::isfinite(ub) && std::isfinite(lb))) return kInf;
  const double diff = ub - lb;
  if (std::fabs(lb) <= 1e-6) return std::fabs(diff);
  return diff / std::fabs(lb);
}

}  // namespace vertiflow
