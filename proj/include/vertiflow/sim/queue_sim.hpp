#pragma once
// Discrete-event simulation oracles for the queueing quantities the planner
// prices analytically:
//   - hub pads as single-server stations with Poisson arrivals (mean count
//     f(rho) = rho / (1 - rho), geometric state distribution, overflow tail),
//   - flight legs as infinite-server queues (mean occupancy = rate x mean
//     flight time),
//   - whole-plan validation of the open-network fleet approximation.
//
// Every simulation owns one seeded stream, so runs are bit-reproducible and
// embarrassingly parallel across configurations.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/rng.hpp"
#include "vertiflow/core/solution.hpp"

namespace vertiflow::sim {

// Service process at a station: exponential by default, or an Erlang with
// `erlang_stages` equal-rate stages for sensitivity runs (same mean service
// time, squared coefficient of variation 1 / stages).
enum class ServiceProcess { exponential, erlang };

struct SimConfig {
  double arrival_rate = 1.0;  // arrivals per minute
  double rho = 0.5;           // traffic intensity; service rate = arrival_rate / rho
  int aprons = 1;             // parking capacity h used for the overflow frequencies
  std::int64_t horizon = 1'000'000;  // events (arrivals + departures) to process
  double warm_up = 0.1;              // leading fraction of events discarded
  std::uint64_t seed = 1;
  ServiceProcess service = ServiceProcess::exponential;
  int erlang_stages = 1;  // used when service == ServiceProcess::erlang

  void validate() const;  // throws DomainError; rejects rho outside (0, 1)
};

inline constexpr int kDistMax = 50;    // state distribution reported for N = 0..kDistMax
inline constexpr int kSeBatches = 20;  // batch-means batches behind the standard errors

struct SimReport {
  double mean_queue_length = 0.0;    // time-averaged number in system
  std::vector<double> distribution;  // P(N = n) for n = 0..kDistMax; sums to <= 1
  double tail_mass = 0.0;            // P(N > kDistMax)
  double overflow_gt = 0.0;          // time fraction with N > aprons
  double overflow_ge = 0.0;          // time fraction with N >= aprons
  double mean_travel_occupancy = 0.0;  // filled by the travel-leg runs
  double se_queue_length = 0.0;
  double se_travel_occupancy = 0.0;
  std::int64_t measured_events = 0;  // events inside the measurement window
  double measured_minutes = 0.0;     // simulated time inside the window
};

nlohmann::json sim_report_to_json(const SimReport& rep);

// Single-server station: Poisson(arrival_rate) arrivals, service rate
// arrival_rate / rho, infinite buffer.  Discards the warm-up, then reports
// time-averaged statistics over the remaining events.
SimReport simulate_vertiport_queue(const SimConfig& cfg);

// Service-time distribution for the infinite-server legs.
struct ServiceTimeDist {
  enum class Kind { exponential, deterministic, lognormal };
  Kind kind = Kind::deterministic;
  double mean = 1.0;   // mean service minutes (every kind)
  double sigma = 0.0;  // log-space spread (lognormal only)

  static ServiceTimeDist exponential(double mean_minutes);
  static ServiceTimeDist deterministic(double minutes);
  static ServiceTimeDist lognormal(double mean_minutes, double sigma);

  void validate() const;  // throws DomainError
  double sample(RngStream& rng) const;
};

// Infinite-server leg: Poisson(rate) arrivals, each holding one server for an
// independent service draw.  Returns the time-averaged occupancy, the
// simulated counterpart of rate x mean service time.  `horizon` counts
// arrivals; the clock stops at the last one.  rate 0 is the empty queue.
double simulate_travel_queue(double rate, const ServiceTimeDist& dist,
                             std::int64_t horizon, std::uint64_t seed);

// Same run, reported with its standard error.
SimReport simulate_travel_queue_report(double rate, const ServiceTimeDist& dist,
                                       std::int64_t horizon, std::uint64_t seed);

// Batch runner over independent configurations.  The parallel variant
// distributes configs across OpenMP threads; because every run owns its own
// seeded stream, its output is identical to the serial reference.
std::vector<SimReport> simulate_batch_serial(const std::vector<SimConfig>& configs);
std::vector<SimReport> simulate_batch(const std::vector<SimConfig>& configs,
                                      bool parallel = true);

// One queue of a simulated plan: analytic mean drone count vs simulated.
struct QueueDeviation {
  std::string queue;  // "V(i)" station at candidate i, "T(i,j)" leg i -> j
  double analytic = 0.0;
  double simulated = 0.0;
  double std_error = 0.0;
  double deviation = 0.0;  // simulated - analytic
};

struct QueueSimOptions {
  double warm_up = 0.1;
  double fleet_slack_frac = 0.05;  // slack = frac x fleet size
  bool parallel = true;
  ServiceProcess service = ServiceProcess::exponential;  // station service
  int erlang_stages = 1;
};

struct QueueValidationReport {
  std::vector<QueueDeviation> queues;
  double analytic_total = 0.0;  // sum f(rho) + sum t (psi + phi): the fleet expression
  double simulated_total = 0.0;
  int fleet_size = 0;
  double slack = 0.0;
  bool within_fleet = true;  // simulated_total <= fleet_size + slack
  double relative_deviation = 0.0;  // |simulated - analytic| / analytic totals

  nlohmann::json to_json() const;
};

// Simulates every open station at (arrivals into i, rho_i) and every flight
// leg at (psi_ij + phi_ij, flight time) for a plan, and compares the summed
// mean drone counts against the plan's analytic fleet expression and fleet
// size.  Report only: never throws on deviations (dimension mismatches do
// throw); the plan is assumed feasible.
QueueValidationReport validate_solution_queues(const Instance& inst,
                                               const PlanSolution& plan,
                                               std::int64_t horizon, std::uint64_t seed,
                                               const QueueSimOptions& opt = {});

}  // namespace vertiflow::sim
