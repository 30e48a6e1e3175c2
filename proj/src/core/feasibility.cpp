#include "vertiflow/core/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "vertiflow/core/queueing.hpp"
#include "vertiflow/core/routes.hpp"

namespace vertiflow {

namespace {

struct FamilyAccumulator {
  FamilyCheck check;
  explicit FamilyAccumulator(std::string name) { check.family = std::move(name); }

  // Record violation of `lhs <= rhs`.
  void leq(double lhs, double rhs, const std::string& where) {
    record(lhs - rhs, where);
  }
  // Record violation of `lhs == rhs`.
  void eq(double lhs, double rhs, const std::string& where) {
    record(std::fabs(lhs - rhs), where);
  }
  void record(double violation, const std::string& where) {
    if (violation > check.worst_violation) {
      check.worst_violation = violation;
      check.detail = where;
    }
  }
};

std::string cand(int i) { return "candidate " + std::to_string(i); }

std::string route_str(const RouteValue& r) {
  return "route (" + std::to_string(r.o) + "," + std::to_string(r.i) + "," +
         std::to_string(r.j) + "," + std::to_string(r.d) + ")";
}

}  // namespace

FeasibilityReport check_nonlinear_feasibility(const Instance& inst,
                                              const PlanSolution& s, double tol,
                                              OverflowForm overflow_form) {
  const int n = inst.num_candidates();
  if (static_cast<int>(s.x.size()) != n || static_cast<int>(s.rho.size()) != n ||
      static_cast<int>(s.aprons.size()) != n || static_cast<int>(s.psi.size()) != n ||
      static_cast<int>(s.phi.size()) != n) {
    throw DomainError("feasibility: solution dimensions do not match instance");
  }
  const RouteFeasibility delta = route_feasibility(inst);

  FamilyAccumulator domains("domains");
  FamilyAccumulator budget("vertiport_budget");
  FamilyAccumulator apron_assign("apron_assignment");
  FamilyAccumulator apron_capacity("apron_capacity");
  FamilyAccumulator route_open("route_requires_open_vertiports");
  FamilyAccumulator route_single("single_route_per_pair");
  FamilyAccumulator route_range("route_within_range");
  FamilyAccumulator service_level("service_level_cap");
  FamilyAccumulator market("market_share");
  FamilyAccumulator gating("service_fraction_gating");
  FamilyAccumulator volume("flight_volume");
  FamilyAccumulator balance("flow_balance");
  FamilyAccumulator fleet("fleet_size");
  FamilyAccumulator charge("charge_balance");
  FamilyAccumulator overflow("apron_overflow");

  // --- Domains: binaries, apron choice, fleet integrality, sign constraints.
  const std::set<int> apron_set(inst.apron_options.begin(), inst.apron_options.end());
  for (int i = 0; i < n; ++i) {
    if (s.x[i] != 0 && s.x[i] != 1) domains.record(1.0, cand(i) + " x not binary");
    if (s.aprons[i] != 0 && apron_set.count(s.aprons[i]) == 0) {
      domains.record(1.0, cand(i) + " apron count outside allowed options");
    }
    if (s.rho[i] < 0.0) domains.record(-s.rho[i], cand(i) + " rho negative");
    for (int j = 0; j < n; ++j) {
      if (s.psi[i][j] < 0.0) domains.record(-s.psi[i][j], "psi negative");
      if (s.phi[i][j] < 0.0) domains.record(-s.phi[i][j], "phi negative");
    }
  }
  if (s.fleet_size < 0) domains.record(-s.fleet_size, "fleet_size negative");
  for (const auto& e : s.y) {
    if (std::fabs(e.value) > tol && std::fabs(e.value - 1.0) > tol) {
      domains.record(std::min(std::fabs(e.value), std::fabs(e.value - 1.0)),
                     route_str(e) + " y not binary");
    }
  }
  for (const auto& e : s.alpha) {
    if (e.value < 0.0) domains.record(-e.value, route_str(e) + " alpha negative");
    if (e.value > 1.0) domains.record(e.value - 1.0, route_str(e) + " alpha above one");
  }

  // --- Vertiport budget (open count <= max).
  double open_count = 0.0;
  for (int i = 0; i < n; ++i) open_count += s.x[i];
  budget.leq(open_count, static_cast<double>(inst.max_vertiports), "total open vertiports");

  // --- Apron assignment: exactly one apron option iff open.
  for (int i = 0; i < n; ++i) {
    const double zsum = s.aprons[i] > 0 ? 1.0 : 0.0;
    apron_assign.eq(zsum, static_cast<double>(s.x[i]), cand(i));
  }

  // --- Apron capacity vs fleet size (sum of apron counts >= Gamma).
  double apron_total = 0.0;
  for (int i = 0; i < n; ++i) apron_total += s.aprons[i];
  apron_capacity.leq(static_cast<double>(s.fleet_size), apron_total, "fleet vs total aprons");

  // --- Per-route constraints on y.
  std::map<std::pair<Index, Index>, double> y_per_pair;
  for (const auto& e : s.y) {
    route_open.leq(e.value, static_cast<double>(s.x[e.i]), route_str(e) + " origin vertiport");
    route_open.leq(e.value, static_cast<double>(s.x[e.j]), route_str(e) + " destination vertiport");
    route_range.leq(e.value, delta(e.o, e.i, e.j, e.d) ? 1.0 : 0.0, route_str(e));
    y_per_pair[{e.o, e.d}] += e.value;
  }
  for (const auto& [pair, total] : y_per_pair) {
    route_single.leq(total, 1.0, "pair (" + std::to_string(pair.first) + "," +
                                     std::to_string(pair.second) + ")");
  }

  // --- Service level cap rho_i <= rho_max * x_i.
  for (int i = 0; i < n; ++i) {
    service_level.leq(s.rho[i], inst.service_level_cap * s.x[i], cand(i));
  }

  // --- Market share.
  double served = 0.0;
  for (const auto& a : s.alpha) {
    bool found = false;
    for (const auto& e : inst.demand) {
      if (e.o == a.o && e.d == a.d) {
        served += a.value * e.rate;
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("feasibility: alpha references unknown demand pair");
  }
  market.leq(inst.market_share * inst.total_demand(), served, "total served demand");

  // --- Service fraction gating: rho_i - (1 - y) <= alpha <= rho_i, alpha <= y.
  // Tuples absent from both y and alpha satisfy these trivially (alpha = 0).
  std::map<std::tuple<Index, Index, Index, Index>, std::pair<double, double>> tuples;
  for (const auto& e : s.y) tuples[{e.o, e.i, e.j, e.d}].first = e.value;
  for (const auto& e : s.alpha) tuples[{e.o, e.i, e.j, e.d}].second = e.value;
  for (const auto& [key, ya] : tuples) {
    const auto [o, i, j, d] = key;
    const auto [yv, av] = ya;
    const std::string where = "route (" + std::to_string(o) + "," + std::to_string(i) + "," +
                              std::to_string(j) + "," + std::to_string(d) + ")";
    gating.leq(s.rho[i] - (1.0 - yv), av, where + " lower gate");
    gating.leq(av, s.rho[i], where + " upper gate");
    gating.leq(av, yv, where + " alpha vs y");
  }

  // --- Flight volume: psi_ij = sum over routes of (rate / Q) * alpha.
  std::vector<std::vector<double>> expected_psi(n, std::vector<double>(n, 0.0));
  for (const auto& a : s.alpha) {
    for (const auto& e : inst.demand) {
      if (e.o == a.o && e.d == a.d) {
        expected_psi[a.i][a.j] += e.rate / inst.pooling_size * a.value;
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      volume.eq(s.psi[i][j], expected_psi[i][j],
                "leg (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  // --- Flow balance at every vertiport.
  for (int i = 0; i < n; ++i) {
    double in = 0.0, out = 0.0;
    for (int j = 0; j < n; ++j) {
      in += s.psi[j][i] + s.phi[j][i];
      out += s.psi[i][j] + s.phi[i][j];
    }
    balance.eq(in, out, cand(i));
  }

  // --- Fleet size with the exact queue length, and per-vertiport charging.
  double queue_total = 0.0;
  bool queue_defined = true;
  for (int i = 0; i < n; ++i) {
    if (s.rho[i] >= 1.0) {
      queue_defined = false;
      fleet.record(kInf, cand(i) + " rho at or above one");
      continue;
    }
    if (s.rho[i] >= 0.0) queue_total += queue_length(s.rho[i]);
  }
  double transit_total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      transit_total += inst.flight_time[i][j] * (s.psi[i][j] + s.phi[i][j]);
    }
  }
  if (queue_defined) {
    fleet.leq(queue_total + transit_total, static_cast<double>(s.fleet_size), "fleet requirement");
  }
  for (int i = 0; i < n; ++i) {
    if (s.rho[i] >= 1.0 || s.rho[i] < 0.0) continue;
    double outbound = 0.0;
    for (int j = 0; j < n; ++j) outbound += inst.flight_time[i][j] * (s.psi[i][j] + s.phi[i][j]);
    charge.leq(inst.charge_ratio * outbound, queue_length(s.rho[i]), cand(i));
  }

  // --- Apron overflow cap for open vertiports.
  for (int i = 0; i < n; ++i) {
    if (s.aprons[i] <= 0) continue;
    const double h = static_cast<double>(s.aprons[i]);
    if (overflow_form == OverflowForm::literal) {
      overflow.leq(std::pow(inst.overflow_cap, 1.0 / h) * s.rho[i],
                   std::pow(inst.overflow_cap, 1.0 / (h + 1.0)), cand(i));
    } else {
      overflow.leq(s.rho[i], std::pow(inst.overflow_cap, 1.0 / h), cand(i));
    }
  }

  FeasibilityReport report;
  report.tol = tol;
  for (auto* acc : {&domains, &budget, &apron_assign, &apron_capacity, &route_open,
                    &route_single, &route_range, &service_level, &market, &gating,
                    &volume, &balance, &fleet, &charge, &overflow}) {
    acc->check.pass = acc->check.worst_violation <= tol;
    report.pass = report.pass && acc->check.pass;
    report.families.push_back(acc->check);
  }
  return report;
}

}  // namespace vertiflow
