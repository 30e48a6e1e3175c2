#pragma once
// Delivery-mode comparison suite: the three ways to move the same demand.
//
//   * H&S-D&C — the primary hub-and-spoke model (drones between vertiports,
//     couriers on the first/last legs), solved by solve_exact.
//   * H&S-C   — the same hub network operated entirely by couriers: the
//     apron-capacity, apron-overflow, charging and flight-range restrictions
//     disappear (couriers need no aprons, batteries, or range), hub-to-hub
//     costs/times become courier trips, and the daily cost per staffed
//     courier replaces the per-drone cost.  Courier legs keep the service
//     range.  Solved by the same adaptive machinery on a variant instance.
//   * D2D-C   — dedicated door-to-door couriers: an O-D-level model that
//     picks which pairs to serve, at what service level, with couriers
//     repositioning between points; the nonlinear staff requirement
//     sum f(rho_o) + sum t^g (psi + phi) <= Gamma uses the same
//     secant/tangent cut machinery as the hub model's fleet row.
//
// A two-stage heuristic for the primary model is also provided: stage 1
// drops every queueing-related constraint (fleet, charging, overflow) and
// optimizes transport cost alone; stage 2 freezes the stage-1 locations and
// route choices and solves the full conservative model adaptively.  Stage 2
// may be infeasible — the status says so and no repair is attempted.
//
// All modes report service quality through the single metrics
// implementation (mean operating cost, mean lead time).

#include <optional>
#include <string>
#include <vector>

#include "vertiflow/bench/courier.hpp"
#include "vertiflow/core/instance.hpp"
#include "vertiflow/core/metrics.hpp"
#include "vertiflow/core/solution.hpp"
#include "vertiflow/solve/exact.hpp"

namespace vertiflow::bench {

// ---------------------------------------------------------------- D2D-C ----

struct D2DSolution {
  std::vector<std::uint8_t> served;      // per demand entry: pair chosen?
  std::vector<double> alpha;             // per demand entry: served fraction
  std::vector<double> rho;               // per demand point (0 where unused)
  std::vector<std::vector<double>> psi;  // [r][r] loaded courier trips / min
  std::vector<std::vector<double>> phi;  // [r][r] repositioning trips / min
  int staff = 0;                         // couriers employed
  double objective = kInf;               // wage + transport cost, CNY / day
};

struct D2DResult {
  solve::ExactStatus status = solve::ExactStatus::infeasible;
  std::optional<D2DSolution> incumbent;
  double upper_bound = kInf;
  double lower_bound = -kInf;
  double gap = kInf;
  int iterations = 0;
  double seconds = 0.0;
  solve::BoundsTrace trace;  // model tags "DC" (upper) / "DR" (lower)
};

// Adaptive solve of the door-to-door model: alternating conservative
// (secant) and relaxed (tangent) staff linearizations over per-origin
// breakpoint grids with midpoint refinement, until the bound gap closes.
D2DResult solve_d2d_courier(const Instance& inst, const CourierParams& params,
                            const solve::SolverConfig& cfg = {});

// Checks a door-to-door solution against the exact nonlinear model
// (market share, flow coupling and balance, staff requirement with the true
// f(rho), gating alpha = rho * served, domains).
FeasibilityReport check_d2d_feasibility(const Instance& inst, const CourierParams& params,
                                        const D2DSolution& sol, double tol = kFeasTol);

// Metrics route inputs of a door-to-door solution (direct legs, per-pair
// pooling); feed to compute_metrics_from_inputs with the courier pooling.
std::vector<MetricsRouteInput> d2d_route_inputs(const Instance& inst,
                                                const CourierParams& params,
                                                const D2DSolution& sol);

// ---------------------------------------------------------------- H&S-C ----

// The instance actually solved in courier-hub mode: hub-to-hub times/costs
// replaced by courier trips, daily drone cost replaced by the courier wage,
// pooling set to the courier pooling, and the flight range made vacuous
// (couriers are not range-limited; the service range still applies).
Instance courier_variant_instance(const Instance& inst, const CourierParams& params);

struct HsCourierResult {
  solve::ExactResult result;  // plan/bounds over the variant instance
  Instance variant;           // what the plan's flows and costs refer to
};

HsCourierResult solve_hs_courier(const Instance& inst, const CourierParams& params,
                                 const solve::SolverConfig& cfg = {});

// Feasibility of a courier-hub plan on the variant instance: the full
// nonlinear checker minus the families this mode removes (apron assignment
// and capacity, apron overflow, charging); `pass` is recomputed over the
// remaining families.
FeasibilityReport check_hs_feasibility(const Instance& variant, const PlanSolution& plan,
                                       double tol = kFeasTol);

// ------------------------------------------------------------- two-stage ---

enum class TwoStageStatus { ok, stage1_infeasible, stage2_infeasible };

struct TwoStageResult {
  TwoStageStatus status = TwoStageStatus::stage1_infeasible;
  std::optional<PlanSolution> stage1_plan;  // queue-free plan (transport cost only)
  double stage1_objective = kInf;
  solve::ExactResult stage2;  // restricted adaptive solve (locations/routes frozen)
  double objective = kInf;    // stage-2 upper bound when feasible
  double seconds = 0.0;
};

// Stage 1: transport-only MILP (no fleet, charging, or overflow machinery).
// Stage 2: solve_exact with x and y fixed to the stage-1 choices.  The
// stage-2 model may be infeasible (the stage-1 choices can violate the
// queueing constraints it ignored); this is reported, never repaired.
TwoStageResult two_stage_heuristic(const Instance& inst, const solve::SolverConfig& cfg = {});

// ---------------------------------------------------------- mode compare ---

struct BenchConfig {
  solve::SolverConfig solver;
  double wage_ratio = 4.0;     // courier daily wage / drone daily cost
  double tariff_km_kg = 1.25;  // courier transport tariff
  double speed_mps = 5.0;      // courier speed
  double detour = 1.4;         // road detour factor
};

struct ModeRow {
  std::string mode;         // "H&S-D&C", "D2D-C" or "H&S-C"
  double pooling_size = 1;  // Q of this row
  double mean_cost_cny = kInf;  // CNY per kg; meaningful only when defined
  double mean_lead_min = kInf;  // minutes
  bool defined = false;         // metrics computed from a served incumbent
  std::string status;           // "ok" | solver status name | "undefined"
};

struct ModeComparison {
  std::vector<ModeRow> rows;  // grouped by pooling size, mode order fixed
  // Header `mode,Q,mean_cost_cny,mean_lead_min,status`; nan cells when
  // a mode produced no served incumbent.
  std::string to_csv() const;
};

// Runs the three modes for every pooling size.  The pooling variant of the
// instance rescales the per-trip flight cost proportionally to Q (the cost
// calibration is per kg carried) and rebuilds courier parameters at Q.
ModeComparison compare_modes(const Instance& inst, const std::vector<double>& pooling_sizes,
                             const BenchConfig& cfg = {});

// The pooling-Q variant used for the hub modes (exposed for tests/tools).
Instance pooling_variant_instance(const Instance& inst, double pooling_size);

}  // namespace vertiflow::bench
