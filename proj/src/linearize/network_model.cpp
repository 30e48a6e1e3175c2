#include "vertiflow/linearize/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

namespace vertiflow::linearize {

namespace {

std::string tag(const char* base, int a) { return std::string(base) + "_" + std::to_string(a); }
std::string tag(const char* base, int a, int b) {
  return tag(base, a) + "_" + std::to_string(b);
}
std::string route_tag(const char* base, const Route& r) {
  return std::string(base) + "_" + std::to_string(r.o) + "_" + std::to_string(r.i) + "_" +
         std::to_string(r.j) + "_" + std::to_string(r.d);
}

std::int64_t route_key(const Instance& inst, int o, int i, int j, int d) {
  const std::int64_t C = inst.num_candidates(), R = inst.num_points();
  return ((static_cast<std::int64_t>(o) * C + i) * C + j) * R + d;
}

struct Builder {
  const Instance& inst;
  const Discretization& disc;
  const BuildOptions& opts;
  const bool conservative;

  BuiltNetwork out;
  milp::MilpModel& model = out.model;
  NetworkLayout& lay = out.layout;

  const std::vector<std::vector<double>>& fcost =
      opts.flight_cost ? *opts.flight_cost : inst.flight_cost;
  const std::vector<std::vector<double>>& ftime =
      opts.flight_time ? *opts.flight_time : inst.flight_time;

  Builder(const Instance& inst_, const Discretization& disc_, const BuildOptions& opts_,
          bool conservative_)
      : inst(inst_), disc(disc_), opts(opts_), conservative(conservative_) {}

  void check_preconditions() const {
    inst.validate();
    if (disc.num_candidates() != inst.num_candidates()) {
      throw DomainError("network model: discretization candidate count mismatch");
    }
    for (int c = 0; c < disc.num_candidates(); ++c) {
      if (disc.grid(c).back() >= 1.0) {
        throw DomainError("network model: grid reaches 1 where f(rho) diverges");
      }
    }
    if (opts.include_charging && !opts.include_fleet) {
      throw DomainError("network model: charging rows require the fleet machinery");
    }
    if (opts.include_overflow && !opts.include_aprons) {
      throw DomainError("network model: overflow rows require apron variables");
    }
    if (!opts.allowed.empty() &&
        opts.allowed.size() != static_cast<std::size_t>(inst.num_candidates())) {
      throw DomainError("network model: allowed mask has wrong size");
    }
    if (!opts.fix_x.empty() &&
        opts.fix_x.size() != static_cast<std::size_t>(inst.num_candidates())) {
      throw DomainError("network model: fix_x has wrong size");
    }
  }

  bool usable(int cand) const { return opts.allowed.empty() || opts.allowed[cand] != 0; }

  void resolve_layout() {
    lay.conservative = conservative;
    lay.apron_options = inst.apron_options;
    lay.cand_pos.assign(inst.num_candidates(), -1);
    for (int c = 0; c < inst.num_candidates(); ++c) {
      if (!usable(c)) continue;
      lay.cand_pos[c] = static_cast<int>(lay.cands.size());
      lay.cands.push_back(c);
    }
    if (lay.cands.empty()) throw DomainError("network model: no usable candidates");

    const RouteTable full = RouteTable::build(inst, opts.route_options);
    lay.table.pair_range.assign(inst.demand.size(), {0, 0});
    for (std::size_t p = 0; p < inst.demand.size(); ++p) {
      const auto [b, e] = full.pair_range[p];
      lay.table.pair_range[p].first = static_cast<int>(lay.table.routes.size());
      for (int r = b; r < e; ++r) {
        const Route& rt = full.routes[r];
        if (usable(rt.i) && usable(rt.j)) lay.table.routes.push_back(rt);
      }
      lay.table.pair_range[p].second = static_cast<int>(lay.table.routes.size());
    }

    std::vector<std::uint8_t> arc_used(
        static_cast<std::size_t>(inst.num_candidates()) * inst.num_candidates(), 0);
    for (const Route& r : lay.table.routes) arc_used[r.i * inst.num_candidates() + r.j] = 1;
    for (int i : lay.cands) {
      for (int j : lay.cands) {
        if (i == j) continue;
        lay.phi_arcs.emplace_back(i, j);
        if (arc_used[i * inst.num_candidates() + j]) lay.psi_arcs.emplace_back(i, j);
      }
    }

    lay.seg_start.assign(lay.cands.size() + 1, 0);
    for (std::size_t p = 0; p < lay.cands.size(); ++p) {
      lay.grids.push_back(disc.grid(lay.cands[p]));
      lay.gate_points.push_back(conservative ? disc.bar_points(lay.cands[p])
                                             : disc.grid(lay.cands[p]));
      lay.seg_start[p + 1] = lay.seg_start[p] + disc.segments(lay.cands[p]);
    }
    lay.total_segments = lay.seg_start.back();
  }

  void add_variables() {
    const double rho_max = inst.service_level_cap;

    lay.x0 = model.num_vars();
    for (int c : lay.cands) {
      double lo = 0.0, hi = 1.0;
      if (!opts.fix_x.empty()) lo = hi = opts.fix_x[c] ? 1.0 : 0.0;
      model.add_var(tag("x", c), milp::VarKind::binary, lo, hi, 0.0);
    }
    if (opts.include_aprons) {
      lay.z0 = model.num_vars();
      for (int c : lay.cands) {
        for (int h : inst.apron_options) {
          model.add_var(tag("z", c, h), milp::VarKind::binary, 0.0, 1.0, 0.0);
        }
      }
    }
    if (opts.include_fleet) {
      lay.gamma = model.num_vars();
      const double gamma_ub =
          opts.include_aprons
              ? static_cast<double>(lay.cands.size()) * inst.apron_options.back()
              : kInf;
      model.add_var("Gamma", milp::VarKind::integer, 0.0, gamma_ub, inst.drone_daily_cost);
    }

    std::unordered_map<std::int64_t, int> fixed_routes;
    if (opts.fix_y) {
      for (const RouteValue& rv : *opts.fix_y) {
        fixed_routes[route_key(inst, rv.o, rv.i, rv.j, rv.d)] = 1;
      }
    }
    lay.y0 = model.num_vars();
    for (const Route& r : lay.table.routes) {
      double lo = 0.0, hi = 1.0;
      if (opts.fix_y) {
        lo = hi = fixed_routes.count(route_key(inst, r.o, r.i, r.j, r.d)) ? 1.0 : 0.0;
      }
      model.add_var(route_tag("y", r), milp::VarKind::binary, lo, hi, 0.0);
    }
    if (opts.fix_y && fixed_routes.size() != [&] {
          std::size_t present = 0;
          for (const Route& r : lay.table.routes) {
            present += fixed_routes.count(route_key(inst, r.o, r.i, r.j, r.d));
          }
          return present;
        }()) {
      throw DomainError("network model: fix_y references a route the model does not carry");
    }

    lay.alpha0 = model.num_vars();
    for (const Route& r : lay.table.routes) {
      model.add_var(route_tag("alpha", r), milp::VarKind::continuous, 0.0, 1.0, r.alpha_cost);
    }
    lay.psi0 = model.num_vars();
    for (const auto& [i, j] : lay.psi_arcs) {
      model.add_var(tag("psi", i, j), milp::VarKind::continuous, 0.0, kInf, fcost[i][j]);
    }
    lay.phi0 = model.num_vars();
    for (const auto& [i, j] : lay.phi_arcs) {
      model.add_var(tag("phi", i, j), milp::VarKind::continuous, 0.0, kInf, fcost[i][j]);
    }
    lay.rho0 = model.num_vars();
    for (int c : lay.cands) {
      model.add_var(tag("rho", c), milp::VarKind::continuous, 0.0, rho_max, 0.0);
    }
    if (opts.include_fleet) {
      lay.theta0 = model.num_vars();
      for (int c : lay.cands) {
        model.add_var(tag("theta", c), milp::VarKind::continuous, 0.0, kInf, 0.0);
      }
      lay.beta0 = model.num_vars();
      for (std::size_t p = 0; p < lay.cands.size(); ++p) {
        for (int k = 0; k < lay.segments(static_cast<int>(p)); ++k) {
          model.add_var(tag("beta", lay.cands[p], k + 1), milp::VarKind::binary, 0.0, 1.0, 0.0);
        }
      }
      lay.pi0 = model.num_vars();
      for (std::size_t p = 0; p < lay.cands.size(); ++p) {
        for (int k = 0; k < lay.segments(static_cast<int>(p)); ++k) {
          model.add_var(tag("pi", lay.cands[p], k + 1), milp::VarKind::continuous, 0.0, 1.0,
                        0.0);
        }
      }
    }
    if (opts.include_aprons && opts.include_overflow &&
        opts.overflow_form == OverflowForm::literal) {
      lay.w0 = model.num_vars();
      for (int c : lay.cands) {
        for (int h : inst.apron_options) {
          model.add_var(tag("w", c, h), milp::VarKind::continuous, 0.0, rho_max, 0.0);
        }
      }
    }
  }

  void add_core_rows() {
    const double rho_max = inst.service_level_cap;
    const int H = static_cast<int>(inst.apron_options.size());

    {  // vertiport budget
      std::vector<std::pair<int, double>> coefs;
      for (int p = 0; p < lay.num_x(); ++p) coefs.emplace_back(lay.x_var(p), 1.0);
      model.add_row("vertiport_budget", milp::RowSense::le,
                    static_cast<double>(inst.max_vertiports), std::move(coefs));
    }
    if (opts.include_aprons) {  // exactly one apron count per open vertiport
      for (int p = 0; p < lay.num_x(); ++p) {
        std::vector<std::pair<int, double>> coefs{{lay.x_var(p), -1.0}};
        for (int o = 0; o < H; ++o) coefs.emplace_back(lay.z_var(p, o), 1.0);
        model.add_row(tag("apron_pick", lay.cands[p]), milp::RowSense::eq, 0.0,
                      std::move(coefs));
      }
    }
    if (opts.include_aprons && opts.include_fleet) {  // apron slots cover the fleet
      std::vector<std::pair<int, double>> coefs{{lay.gamma, -1.0}};
      for (int p = 0; p < lay.num_x(); ++p) {
        for (int o = 0; o < H; ++o) {
          coefs.emplace_back(lay.z_var(p, o), static_cast<double>(inst.apron_options[o]));
        }
      }
      model.add_row("apron_capacity", milp::RowSense::ge, 0.0, std::move(coefs));
    }
    for (int r = 0; r < lay.table.size(); ++r) {  // routes need both vertiports open
      const Route& rt = lay.table.routes[r];
      model.add_row(route_tag("open_tail", rt), milp::RowSense::le, 0.0,
                    {{lay.y_var(r), 1.0}, {lay.x_var(lay.cand_pos[rt.i]), -1.0}});
      model.add_row(route_tag("open_head", rt), milp::RowSense::le, 0.0,
                    {{lay.y_var(r), 1.0}, {lay.x_var(lay.cand_pos[rt.j]), -1.0}});
    }
    for (std::size_t pr = 0; pr < inst.demand.size(); ++pr) {  // one route per pair
      const auto [b, e] = lay.table.pair_range[pr];
      if (b == e) continue;
      std::vector<std::pair<int, double>> coefs;
      for (int r = b; r < e; ++r) coefs.emplace_back(lay.y_var(r), 1.0);
      model.add_row(tag("one_route", inst.demand[pr].o, inst.demand[pr].d),
                    milp::RowSense::le, 1.0, std::move(coefs));
    }
    for (int p = 0; p < lay.num_x(); ++p) {  // utilisation only at open vertiports
      model.add_row(tag("rho_cap", lay.cands[p]), milp::RowSense::le, 0.0,
                    {{lay.rho_var(p), 1.0}, {lay.x_var(p), -rho_max}});
    }
    {  // market share over total demand
      std::vector<std::pair<int, double>> coefs;
      for (int r = 0; r < lay.table.size(); ++r) {
        coefs.emplace_back(lay.alpha_var(r), lay.table.routes[r].rate);
      }
      model.add_row("market_share", milp::RowSense::ge,
                    inst.market_share * inst.total_demand(), std::move(coefs));
    }
    for (int r = 0; r < lay.table.size(); ++r) {  // alpha pinned to rho when routed
      const Route& rt = lay.table.routes[r];
      const int rho_i = lay.rho_var(lay.cand_pos[rt.i]);
      model.add_row(route_tag("alpha_le_rho", rt), milp::RowSense::le, 0.0,
                    {{lay.alpha_var(r), 1.0}, {rho_i, -1.0}});
      model.add_row(route_tag("alpha_ge_act", rt), milp::RowSense::le, 1.0,
                    {{rho_i, 1.0}, {lay.alpha_var(r), -1.0}, {lay.y_var(r), 1.0}});
      model.add_row(route_tag("alpha_le_y", rt), milp::RowSense::le, 0.0,
                    {{lay.alpha_var(r), 1.0}, {lay.y_var(r), -1.0}});
    }
    for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {  // flight volume coupling
      const auto [i, j] = lay.psi_arcs[a];
      std::vector<std::pair<int, double>> coefs{{lay.psi_var(static_cast<int>(a)), 1.0}};
      for (int r = 0; r < lay.table.size(); ++r) {
        const Route& rt = lay.table.routes[r];
        if (rt.i == i && rt.j == j) {
          coefs.emplace_back(lay.alpha_var(r), -rt.rate / inst.pooling_size);
        }
      }
      model.add_row(tag("flight_volume", i, j), milp::RowSense::eq, 0.0, std::move(coefs));
    }
    for (int p = 0; p < lay.num_x(); ++p) {  // flight flow balance per vertiport
      const int i = lay.cands[p];
      std::vector<std::pair<int, double>> coefs;
      for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {
        if (lay.psi_arcs[a].first == i) coefs.emplace_back(lay.psi_var(static_cast<int>(a)), 1.0);
        if (lay.psi_arcs[a].second == i) coefs.emplace_back(lay.psi_var(static_cast<int>(a)), -1.0);
      }
      for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
        if (lay.phi_arcs[a].first == i) coefs.emplace_back(lay.phi_var(static_cast<int>(a)), 1.0);
        if (lay.phi_arcs[a].second == i) coefs.emplace_back(lay.phi_var(static_cast<int>(a)), -1.0);
      }
      model.add_row(tag("flow_balance", i), milp::RowSense::eq, 0.0, std::move(coefs));
    }
  }

  // Coefficient of the flight time spent by all movements touching arcs.
  void add_fleet_rows() {
    {  // busy drones (piecewise bound) + in-flight drones within the fleet
      std::vector<std::pair<int, double>> coefs{{lay.gamma, -1.0}};
      for (int p = 0; p < lay.num_x(); ++p) coefs.emplace_back(lay.theta_var(p), 1.0);
      for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {
        const auto [i, j] = lay.psi_arcs[a];
        coefs.emplace_back(lay.psi_var(static_cast<int>(a)), ftime[i][j]);
      }
      for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
        const auto [i, j] = lay.phi_arcs[a];
        coefs.emplace_back(lay.phi_var(static_cast<int>(a)), ftime[i][j]);
      }
      model.add_row("fleet", milp::RowSense::le, 0.0, std::move(coefs));
    }
    for (int p = 0; p < lay.num_x(); ++p) {  // theta >= cut(rho) per segment
      const auto& g = lay.grids[p];
      for (int k = 0; k < lay.segments(p); ++k) {
        const LinearCut cut =
            conservative ? secant_cut(g[k], g[k + 1]) : tangent_cut(g[k]);
        model.add_row(tag("fleet_cut", lay.cands[p], k + 1), milp::RowSense::ge,
                      cut.intercept,
                      {{lay.theta_var(p), 1.0}, {lay.rho_var(p), -cut.slope}});
      }
    }
    for (int p = 0; p < lay.num_x(); ++p) {  // segment selection gates rho
      const auto& gate = lay.gate_points[p];
      std::vector<std::pair<int, double>> lo{{lay.rho_var(p), -1.0}};
      std::vector<std::pair<int, double>> hi{{lay.rho_var(p), 1.0}};
      std::vector<std::pair<int, double>> one;
      for (int k = 0; k < lay.segments(p); ++k) {
        lo.emplace_back(lay.beta_var(p, k), gate[k]);
        hi.emplace_back(lay.beta_var(p, k), -gate[k + 1]);
        one.emplace_back(lay.beta_var(p, k), 1.0);
      }
      model.add_row(tag("seg_lo", lay.cands[p]), milp::RowSense::le, 0.0, std::move(lo));
      model.add_row(tag("seg_hi", lay.cands[p]), milp::RowSense::le, 0.0, std::move(hi));
      model.add_row(tag("seg_one", lay.cands[p]), milp::RowSense::eq, 1.0, std::move(one));
    }
    for (int p = 0; p < lay.num_x(); ++p) {  // pi = rho * beta linking
      for (int k = 0; k < lay.segments(p); ++k) {
        model.add_row(tag("pi_le_beta", lay.cands[p], k + 1), milp::RowSense::le, 0.0,
                      {{lay.pi_var(p, k), 1.0}, {lay.beta_var(p, k), -1.0}});
        model.add_row(tag("pi_le_rho", lay.cands[p], k + 1), milp::RowSense::le, 0.0,
                      {{lay.pi_var(p, k), 1.0}, {lay.rho_var(p), -1.0}});
        model.add_row(tag("pi_ge_act", lay.cands[p], k + 1), milp::RowSense::le, 1.0,
                      {{lay.rho_var(p), 1.0}, {lay.beta_var(p, k), 1.0},
                       {lay.pi_var(p, k), -1.0}});
      }
    }
  }

  void add_charging_rows() {
    for (int p = 0; p < lay.num_x(); ++p) {
      const int i = lay.cands[p];
      const auto& g = lay.grids[p];
      std::vector<std::pair<int, double>> coefs;
      for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {
        if (lay.psi_arcs[a].first != i) continue;
        const auto [ai, aj] = lay.psi_arcs[a];
        coefs.emplace_back(lay.psi_var(static_cast<int>(a)), inst.charge_ratio * ftime[ai][aj]);
      }
      for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
        if (lay.phi_arcs[a].first != i) continue;
        const auto [ai, aj] = lay.phi_arcs[a];
        coefs.emplace_back(lay.phi_var(static_cast<int>(a)), inst.charge_ratio * ftime[ai][aj]);
      }
      for (int k = 0; k < lay.segments(p); ++k) {
        // Selected linear piece of f: pi carries slope * rho, beta the intercept.
        const LinearCut cut =
            conservative ? tangent_cut(g[k]) : secant_cut(g[k], g[k + 1]);
        coefs.emplace_back(lay.pi_var(p, k), -cut.slope);
        coefs.emplace_back(lay.beta_var(p, k), -cut.intercept);
      }
      model.add_row(tag("charge", i), milp::RowSense::le, 0.0, std::move(coefs));
    }
  }

  void add_overflow_rows() {
    const double rho_max = inst.service_level_cap;
    const int H = static_cast<int>(inst.apron_options.size());
    const double gamma_cap = inst.overflow_cap;
    if (opts.overflow_form == OverflowForm::direct) {
      for (int p = 0; p < lay.num_x(); ++p) {
        std::vector<std::pair<int, double>> coefs{{lay.rho_var(p), 1.0}};
        for (int o = 0; o < H; ++o) {
          coefs.emplace_back(lay.z_var(p, o),
                             -std::pow(gamma_cap, 1.0 / inst.apron_options[o]));
        }
        model.add_row(tag("apron_overflow", lay.cands[p]), milp::RowSense::le, 0.0,
                      std::move(coefs));
      }
      return;
    }
    for (int p = 0; p < lay.num_x(); ++p) {
      std::vector<std::pair<int, double>> coefs;
      for (int o = 0; o < H; ++o) {
        const double h = inst.apron_options[o];
        coefs.emplace_back(lay.w_var(p, o), std::pow(gamma_cap, 1.0 / h));
        coefs.emplace_back(lay.z_var(p, o), -std::pow(gamma_cap, 1.0 / (h + 1.0)));
      }
      model.add_row(tag("apron_overflow", lay.cands[p]), milp::RowSense::le, 0.0,
                    std::move(coefs));
      for (int o = 0; o < H; ++o) {  // w = rho * z (exact for binary z)
        const int h = inst.apron_options[o];
        model.add_row(tag("w_le_z", lay.cands[p], h), milp::RowSense::le, 0.0,
                      {{lay.w_var(p, o), 1.0}, {lay.z_var(p, o), -rho_max}});
        model.add_row(tag("w_le_rho", lay.cands[p], h), milp::RowSense::le, 0.0,
                      {{lay.w_var(p, o), 1.0}, {lay.rho_var(p), -1.0}});
        model.add_row(tag("w_ge_act", lay.cands[p], h), milp::RowSense::le, rho_max,
                      {{lay.rho_var(p), 1.0}, {lay.z_var(p, o), rho_max},
                       {lay.w_var(p, o), -1.0}});
      }
    }
  }

  BuiltNetwork run() {
    check_preconditions();
    model.name = conservative ? "network_conservative" : "network_relaxed";
    resolve_layout();
    add_variables();
    add_core_rows();
    if (opts.include_fleet) add_fleet_rows();
    if (opts.include_charging) add_charging_rows();
    if (opts.include_aprons && opts.include_overflow) add_overflow_rows();
    model.validate();
    return std::move(out);
  }
};

}  // namespace

BuiltNetwork build_conservative(const Instance& inst, const Discretization& disc,
                                const BuildOptions& opts) {
  return Builder(inst, disc, opts, true).run();
}

BuiltNetwork build_relaxed(const Instance& inst, const Discretization& disc,
                           const BuildOptions& opts) {
  return Builder(inst, disc, opts, false).run();
}

PlanSolution extract_plan(const Instance& inst, const BuiltNetwork& net,
                          const std::vector<double>& assignment) {
  const NetworkLayout& lay = net.layout;
  if (assignment.size() != static_cast<std::size_t>(net.model.num_vars())) {
    throw DomainError("extract_plan: assignment size mismatch");
  }
  PlanSolution plan = PlanSolution::zero(inst);
  const auto at = [&](int var) { return assignment[var]; };

  for (int p = 0; p < lay.num_x(); ++p) {
    const int c = lay.cands[p];
    plan.x[c] = at(lay.x_var(p)) > 0.5 ? 1 : 0;
    plan.rho[c] = std::clamp(at(lay.rho_var(p)), 0.0, inst.service_level_cap);
    if (lay.z0 >= 0 && plan.x[c]) {
      for (std::size_t o = 0; o < lay.apron_options.size(); ++o) {
        if (at(lay.z_var(p, static_cast<int>(o))) > 0.5) {
          plan.aprons[c] = lay.apron_options[o];
        }
      }
    }
  }
  if (lay.gamma >= 0) plan.fleet_size = static_cast<int>(std::llround(at(lay.gamma)));
  for (int r = 0; r < lay.table.size(); ++r) {
    const Route& rt = lay.table.routes[r];
    if (at(lay.y_var(r)) > 0.5) plan.y.push_back({rt.o, rt.i, rt.j, rt.d, 1.0});
    const double a = std::clamp(at(lay.alpha_var(r)), 0.0, 1.0);
    if (a > 0.0) plan.alpha.push_back({rt.o, rt.i, rt.j, rt.d, a});
  }
  for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {
    const auto [i, j] = lay.psi_arcs[a];
    plan.psi[i][j] = std::max(0.0, at(lay.psi_var(static_cast<int>(a))));
  }
  for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
    const auto [i, j] = lay.phi_arcs[a];
    plan.phi[i][j] = std::max(0.0, at(lay.phi_var(static_cast<int>(a))));
  }
  plan.objective = net.model.objective_value(assignment);
  return plan;
}

std::vector<double> plan_to_assignment(const Instance& inst, const BuiltNetwork& net,
                                       const PlanSolution& plan) {
  const NetworkLayout& lay = net.layout;
  std::vector<double> x(net.model.num_vars(), 0.0);

  for (int c = 0; c < inst.num_candidates(); ++c) {
    if (lay.cand_pos[c] >= 0) continue;
    if (plan.x[c] || plan.rho[c] != 0.0) {
      throw DomainError("plan_to_assignment: plan opens a candidate outside the model");
    }
  }
  for (int p = 0; p < lay.num_x(); ++p) {
    const int c = lay.cands[p];
    x[lay.x_var(p)] = plan.x[c] ? 1.0 : 0.0;
    x[lay.rho_var(p)] = plan.rho[c];
    if (lay.z0 >= 0 && plan.aprons[c] > 0) {
      const auto it = std::find(lay.apron_options.begin(), lay.apron_options.end(),
                                plan.aprons[c]);
      if (it == lay.apron_options.end()) {
        throw DomainError("plan_to_assignment: apron count is not an offered option");
      }
      x[lay.z_var(p, static_cast<int>(it - lay.apron_options.begin()))] = 1.0;
      if (lay.w0 >= 0) {
        x[lay.w_var(p, static_cast<int>(it - lay.apron_options.begin()))] = plan.rho[c];
      }
    }
  }
  if (lay.gamma >= 0) x[lay.gamma] = static_cast<double>(plan.fleet_size);

  std::unordered_map<std::int64_t, int> index;
  for (int r = 0; r < lay.table.size(); ++r) {
    const Route& rt = lay.table.routes[r];
    index[route_key(inst, rt.o, rt.i, rt.j, rt.d)] = r;
  }
  const auto lookup = [&](const RouteValue& rv) {
    const auto it = index.find(route_key(inst, rv.o, rv.i, rv.j, rv.d));
    if (it == index.end()) {
      throw DomainError("plan_to_assignment: plan uses a route the model does not carry");
    }
    return it->second;
  };
  for (const RouteValue& rv : plan.y) x[lay.y_var(lookup(rv))] = std::round(rv.value);
  for (const RouteValue& rv : plan.alpha) x[lay.alpha_var(lookup(rv))] = rv.value;

  for (int i = 0; i < inst.num_candidates(); ++i) {
    for (int j = 0; j < inst.num_candidates(); ++j) {
      if (plan.psi[i][j] == 0.0 && plan.phi[i][j] == 0.0) continue;
      bool found = false;
      for (std::size_t a = 0; a < lay.psi_arcs.size(); ++a) {
        if (lay.psi_arcs[a] == std::make_pair(i, j)) {
          x[lay.psi_var(static_cast<int>(a))] = plan.psi[i][j];
          found = true;
        }
      }
      if (!found && plan.psi[i][j] != 0.0) {
        throw DomainError("plan_to_assignment: loaded flow on an arc outside the model");
      }
      found = false;
      for (std::size_t a = 0; a < lay.phi_arcs.size(); ++a) {
        if (lay.phi_arcs[a] == std::make_pair(i, j)) {
          x[lay.phi_var(static_cast<int>(a))] = plan.phi[i][j];
          found = true;
        }
      }
      if (!found && plan.phi[i][j] != 0.0) {
        throw DomainError("plan_to_assignment: repositioning flow on an arc outside the model");
      }
    }
  }

  if (lay.theta0 >= 0) {
    for (int p = 0; p < lay.num_x(); ++p) {
      const int c = lay.cands[p];
      const double rho = plan.rho[c];
      const auto& g = lay.grids[p];
      double theta = 0.0;
      for (int k = 0; k < lay.segments(p); ++k) {
        const LinearCut cut =
            lay.conservative ? secant_cut(g[k], g[k + 1]) : tangent_cut(g[k]);
        theta = std::max(theta, cut.at(rho));
      }
      x[lay.theta_var(p)] = theta;

      const auto& gate = lay.gate_points[p];
      int sel = lay.segments(p) - 1;
      for (int k = 0; k < lay.segments(p); ++k) {
        if (rho <= gate[k + 1]) {
          sel = k;
          break;
        }
      }
      x[lay.beta_var(p, sel)] = 1.0;
      x[lay.pi_var(p, sel)] = rho;
    }
  }
  return x;
}

nlohmann::json cuts_to_json(const Instance& inst, const Discretization& disc) {
  if (disc.num_candidates() != inst.num_candidates()) {
    throw DomainError("cuts_to_json: discretization candidate count mismatch");
  }
  nlohmann::json out;
  out["min_gap"] = disc.min_gap();
  nlohmann::json cands = nlohmann::json::array();
  for (int c = 0; c < disc.num_candidates(); ++c) {
    const auto& g = disc.grid(c);
    nlohmann::json jc;
    jc["candidate"] = c;
    jc["grid"] = g;
    jc["bar_points"] = disc.bar_points(c);
    nlohmann::json secants = nlohmann::json::array();
    nlohmann::json tangents = nlohmann::json::array();
    for (int k = 0; k + 1 < static_cast<int>(g.size()); ++k) {
      const LinearCut s = secant_cut(g[k], g[k + 1]);
      secants.push_back({{"segment", k + 1},
                         {"lo", g[k]},
                         {"hi", g[k + 1]},
                         {"slope", s.slope},
                         {"intercept", s.intercept}});
      const LinearCut t = tangent_cut(g[k]);
      tangents.push_back({{"segment", k + 1},
                          {"at", g[k]},
                          {"slope", t.slope},
                          {"intercept", t.intercept}});
    }
    jc["secants"] = secants;
    jc["tangents"] = tangents;
    cands.push_back(std::move(jc));
  }
  out["candidates"] = cands;
  return out;
}

}  // namespace vertiflow::linearize
