#pragma once
// Stationary M/M/1 quantities used throughout the planner.
//
// Vertiport charging pads are modelled as single-server queues with
// utilisation rho in [0, 1).  The expected number of drones in the system is
//   f(rho) = rho / (1 - rho),
// and the probability that the queue length reaches at least h waiting slots
// is rho^h.  Both blow up / degenerate as rho -> 1, so every entry point
// validates its domain and throws DomainError outside it.

#include "vertiflow/common.hpp"

namespace vertiflow {

// Expected number of drones in a charging queue with utilisation rho.
// Domain: 0 <= rho < 1.
double queue_length(double rho);

// Stationary probability that at least `slots` drones are present, rho^slots.
// Domain: 0 <= rho < 1, slots >= 0.
double overflow_probability(double rho, int slots);

}  // namespace vertiflow
