#include "vertiflow/core/solution.hpp"

#include <algorithm>
#include <fstream>

namespace vertiflow {

namespace {
using nlohmann::ordered_json;

double lookup(const std::vector<RouteValue>& entries, Index o, Index i, Index j, Index d) {
  for (const auto& e : entries) {
    if (e.o == o && e.i == i && e.j == j && e.d == d) return e.value;
  }
  return 0.0;
}

ordered_json routes_to_json(const std::vector<RouteValue>& entries) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries) {
    arr.push_back({{"o", e.o}, {"i", e.i}, {"j", e.j}, {"d", e.d}, {"value", e.value}});
  }
  return arr;
}

std::vector<RouteValue> routes_from_json(const nlohmann::json& arr) {
  std::vector<RouteValue> out;
  for (const auto& e : arr) {
    out.push_back({e.at("o").get<Index>(), e.at("i").get<Index>(), e.at("j").get<Index>(),
                   e.at("d").get<Index>(), e.at("value").get<double>()});
  }
  return out;
}

ordered_json sparse_matrix_to_json(const std::vector<std::vector<double>>& m) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j] != 0.0) {
        arr.push_back({{"i", static_cast<int>(i)}, {"j", static_cast<int>(j)}, {"value", m[i][j]}});
      }
    }
  }
  return arr;
}

std::vector<std::vector<double>> sparse_matrix_from_json(const nlohmann::json& arr, std::size_t n) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (const auto& e : arr) {
    m[e.at("i").get<std::size_t>()][e.at("j").get<std::size_t>()] = e.at("value").get<double>();
  }
  return m;
}

}  // namespace

PlanSolution PlanSolution::zero(const Instance& inst) {
  PlanSolution s;
  const std::size_t n = static_cast<std::size_t>(inst.num_candidates());
  s.x.assign(n, 0);
  s.aprons.assign(n, 0);
  s.rho.assign(n, 0.0);
  s.psi.assign(n, std::vector<double>(n, 0.0));
  s.phi.assign(n, std::vector<double>(n, 0.0));
  return s;
}

double PlanSolution::y_value(Index o, Index i, Index j, Index d) const {
  return lookup(y, o, i, j, d);
}

double PlanSolution::alpha_value(Index o, Index i, Index j, Index d) const {
  return lookup(alpha, o, i, j, d);
}

double PlanSolution::served_demand(const Instance& inst) const {
  double served = 0.0;
  for (const auto& a : alpha) {
    for (const auto& e : inst.demand) {
      if (e.o == a.o && e.d == a.d) {
        served += a.value * e.rate;
        break;
      }
    }
  }
  return served;
}

nlohmann::json solution_to_json(const PlanSolution& s) {
  ordered_json j;
  j["x"] = s.x;
  ordered_json z = ordered_json::array();
  for (std::size_t i = 0; i < s.aprons.size(); ++i) {
    if (s.aprons[i] > 0) z.push_back({{"i", static_cast<int>(i)}, {"h", s.aprons[i]}});
  }
  j["z"] = z;
  j["y"] = routes_to_json(s.y);
  j["alpha"] = routes_to_json(s.alpha);
  j["fleet_size"] = s.fleet_size;
  j["rho"] = s.rho;
  j["psi"] = sparse_matrix_to_json(s.psi);
  j["phi"] = sparse_matrix_to_json(s.phi);
  j["objective"] = s.objective;
  return j;
}

PlanSolution solution_from_json(const nlohmann::json& j) {
  PlanSolution s;
  s.x = j.at("x").get<std::vector<std::uint8_t>>();
  const std::size_t n = s.x.size();
  s.aprons.assign(n, 0);
  for (const auto& e : j.at("z")) s.aprons[e.at("i").get<std::size_t>()] = e.at("h").get<int>();
  s.y = routes_from_json(j.at("y"));
  s.alpha = routes_from_json(j.at("alpha"));
  s.fleet_size = j.at("fleet_size").get<int>();
  s.rho = j.at("rho").get<std::vector<double>>();
  s.psi = sparse_matrix_from_json(j.at("psi"), n);
  s.phi = sparse_matrix_from_json(j.at("phi"), n);
  s.objective = j.at("objective").get<double>();
  return s;
}

void save_solution(const PlanSolution& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write solution file: " + path);
  out << solution_to_json(s).dump(2) << '\n';
}

PlanSolution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open solution file: " + path);
  nlohmann::json j;
  in >> j;
  return solution_from_json(j);
}

const FamilyCheck* FeasibilityReport::find(const std::string& family) const {
  for (const auto& f : families) {
    if (f.family == family) return &f;
  }
  return nullptr;
}

double FeasibilityReport::worst_violation() const {
  double worst = 0.0;
  for (const auto& f : families) worst = std::max(worst, f.worst_violation);
  return worst;
}

nlohmann::json FeasibilityReport::to_json() const {
  ordered_json j;
  j["pass"] = pass;
  j["tol"] = tol;
  j["families"] = ordered_json::array();
  for (const auto& f : families) {
    j["families"].push_back({{"family", f.family},
                             {"pass", f.pass},
                             {"worst_violation", f.worst_violation},
                             {"detail", f.detail}});
  }
  return j;
}

}  // namespace vertiflow
