#include "vertiflow/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vertiflow::milp {

int MilpModel::add_var(const std::string& vname, VarKind kind, double lb, double ub, double obj) {
  Var v;
  v.name = vname;
  v.kind = kind;
  if (kind == VarKind::binary) {
    lb = std::max(lb, 0.0);
    ub = std::min(ub, 1.0);
  }
  v.lb = lb;
  v.ub = ub;
  v.obj = obj;
  vars.push_back(std::move(v));
  return num_vars() - 1;
}

int MilpModel::add_row(const std::string& rname, RowSense sense, double rhs,
                       std::vector<std::pair<int, double>> coefs) {
  std::sort(coefs.begin(), coefs.end());
  // Merge duplicate columns so builders can emit terms freely.
  std::vector<std::pair<int, double>> merged;
  for (const auto& [col, val] : coefs) {
    if (!merged.empty() && merged.back().first == col) {
      merged.back().second += val;
    } else {
      merged.emplace_back(col, val);
    }
  }
  Row r;
  r.name = rname;
  r.sense = sense;
  r.rhs = rhs;
  r.coefs = std::move(merged);
  rows.push_back(std::move(r));
  return num_rows() - 1;
}

bool MilpModel::has_integers() const {
  return std::any_of(vars.begin(), vars.end(),
                     [](const Var& v) { return v.kind != VarKind::continuous; });
}

double MilpModel::objective_value(const std::vector<double>& x) const {
  double total = obj_constant;
  for (int j = 0; j < num_vars(); ++j) total += vars[j].obj * x[j];
  return total;
}

void MilpModel::validate() const {
  for (const auto& v : vars) {
    if (v.lb > v.ub) throw DomainError("model: inverted bounds on " + v.name);
    if (v.kind == VarKind::binary && (v.lb < 0.0 || v.ub > 1.0)) {
      throw DomainError("model: binary bounds outside [0,1] on " + v.name);
    }
  }
  for (const auto& r : rows) {
    int prev = -1;
    for (const auto& [col, val] : r.coefs) {
      if (col < 0 || col >= num_vars()) throw DomainError("model: bad column in row " + r.name);
      if (col <= prev) throw DomainError("model: unsorted/duplicate column in row " + r.name);
      if (!std::isfinite(val)) throw DomainError("model: non-finite coefficient in row " + r.name);
      prev = col;
    }
    if (!std::isfinite(r.rhs)) throw DomainError("model: non-finite rhs in row " + r.name);
  }
}

WarmStartReport validate_warm_start(const MilpModel& model,
                                    const std::vector<double>& assignment, double tol) {
  WarmStartReport rep;
  if (assignment.size() != static_cast<std::size_t>(model.num_vars())) {
    rep.complete = false;
    rep.accepted = false;
    rep.violations.push_back("assignment covers " + std::to_string(assignment.size()) +
                             " of " + std::to_string(model.num_vars()) + " variables");
    return rep;
  }
  rep.complete = true;

  auto offend = [&](double violation, const std::string& what) {
    rep.worst_violation = std::max(rep.worst_violation, violation);
    if (violation > tol) rep.violations.push_back(what);
  };

  for (int j = 0; j < model.num_vars(); ++j) {
    const Var& v = model.vars[j];
    const double xj = assignment[j];
    if (xj < v.lb) offend(v.lb - xj, v.name + " below lower bound");
    if (xj > v.ub) offend(xj - v.ub, v.name + " above upper bound");
    if (v.kind != VarKind::continuous) {
      offend(std::fabs(xj - std::round(xj)), v.name + " not integral");
    }
  }
  for (const auto& r : model.rows) {
    double lhs = 0.0;
    for (const auto& [col, val] : r.coefs) lhs += val * assignment[col];
    switch (r.sense) {
      case RowSense::le: offend(lhs - r.rhs, "row " + r.name + " violated"); break;
      case RowSense::ge: offend(r.rhs - lhs, "row " + r.name + " violated"); break;
      case RowSense::eq: offend(std::fabs(lhs - r.rhs), "row " + r.name + " violated"); break;
    }
  }
  rep.accepted = rep.worst_violation <= tol;
  rep.objective = model.objective_value(assignment);
  return rep;
}

namespace {

// LP format identifiers must avoid operators and leading digits.
std::string sanitize(const std::string& name, int fallback_id, const char* prefix) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out += c;
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) {
    out = std::string(prefix) + std::to_string(fallback_id) + "_" + out;
  }
  return out;
}

void write_term(std::ostringstream& os, double coef, const std::string& name, bool first) {
  if (coef >= 0.0 && !first) os << " + ";
  if (coef < 0.0) os << (first ? "- " : " - ");
  os << std::fabs(coef) << " " << name;
}

}  // namespace

std::string to_lp_format(const MilpModel& model) {
  std::ostringstream os;
  os.precision(17);

  std::vector<std::string> names(model.vars.size());
  for (int j = 0; j < model.num_vars(); ++j) names[j] = sanitize(model.vars[j].name, j, "x");

  os << "\\ " << model.name << "\n";
  os << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars[j].obj == 0.0) continue;
    os << (first ? " " : "");
    write_term(os, model.vars[j].obj, names[j], first);
    first = false;
  }
  if (first) os << " 0 " << (model.vars.empty() ? "" : names[0]);
  os << "\nSubject To\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const Row& row = model.rows[r];
    os << " " << sanitize(row.name, r, "c") << ":";
    bool rf = true;
    for (const auto& [col, val] : row.coefs) {
      os << (rf ? " " : "");
      write_term(os, val, names[col], rf);
      rf = false;
    }
    if (rf) os << " 0 " << names[0];
    switch (row.sense) {
      case RowSense::le: os << " <= "; break;
      case RowSense::ge: os << " >= "; break;
      case RowSense::eq: os << " = "; break;
    }
    os << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Var& v = model.vars[j];
    if (v.kind == VarKind::binary) continue;  // declared below
    if (v.lb == -kInf && v.ub == kInf) {
      os << " " << names[j] << " free\n";
    } else {
      if (v.lb == -kInf) {
        os << " -inf <= " << names[j];
      } else {
        os << " " << v.lb << " <= " << names[j];
      }
      if (v.ub == kInf) {
        os << "\n";
      } else {
        os << " <= " << v.ub << "\n";
      }
    }
  }
  bool any_general = false, any_binary = false;
  for (const auto& v : model.vars) {
    any_general |= v.kind == VarKind::integer;
    any_binary |= v.kind == VarKind::binary;
  }
  if (any_general) {
    os << "Generals\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.vars[j].kind == VarKind::integer) os << " " << names[j] << "\n";
    }
  }
  if (any_binary) {
    os << "Binaries\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.vars[j].kind == VarKind::binary) os << " " << names[j] << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace vertiflow::milp
