#include "vertiflow/core/queueing.hpp"

#include <cmath>
#include <string>

namespace vertiflow {

double queue_length(double rho) {
  if (!(rho >= 0.0) || rho >= 1.0 || !std::isfinite(rho)) {
    throw DomainError("queue_length: utilisation must lie in [0, 1), got " +
                      std::to_string(rho));
  }
  return rho / (1.0 - rho);
}

double overflow_probability(double rho, int slots) {
  if (!(rho >= 0.0) || rho >= 1.0 || !std::isfinite(rho)) {
    throw DomainError(
        "overflow_probability: utilisation must lie in [0, 1), got " +
        std::to_string(rho));
  }
  if (slots < 0) {
    throw DomainError("overflow_probability: slots must be non-negative");
  }
  if (slots == 0) return 1.0;  // rho^0
  return std::pow(rho, static_cast<double>(slots));
}

}  // namespace vertiflow
