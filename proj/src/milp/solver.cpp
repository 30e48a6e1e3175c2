#include "vertiflow/milp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace vertiflow::milp {

namespace {

struct Node {
  int parent = -1;   // index into the node arena, -1 = child of the root
  int col = -1;      // branching column
  bool upper = false;  // true: override the upper bound, false: the lower
  double value = 0.0;
  double bound = -kInf;  // parent LP objective, a valid bound for the subtree
  std::shared_ptr<const std::vector<BasisStatus>> statuses;  // parent basis
};

// Min-heap on (bound, creation sequence): best bound first, FIFO on ties.
using HeapEntry = std::pair<double, long>;

}  // namespace

MilpResult solve_milp(const MilpModel& model, const MilpOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MilpResult res;
  double incumbent = kInf;
  std::vector<double> inc_x;

  if (options.warm_start) {
    WarmStartReport rep = validate_warm_start(model, *options.warm_start);
    if (rep.accepted) {
      incumbent = rep.objective;
      inc_x = *options.warm_start;
    }
    res.warm_start_report = std::move(rep);
  }

  std::vector<int> int_cols;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars[j].kind != VarKind::continuous) int_cols.push_back(j);
  }

  LpSolver lp(model, options.lp);

  std::vector<Node> arena;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> open;

  const auto accept_incumbent = [&](const LpResult& r) {
    inc_x = r.x;
    for (int j : int_cols) inc_x[j] = std::round(inc_x[j]);
    incumbent = model.objective_value(inc_x);
  };

  // An LP-integral point may sit up to int_tol away from exact integrality,
  // leaving tightly coupled continuous variables inconsistent with the
  // rounded integers.  Fix the integers at their rounded values and re-solve
  // so the stored incumbent is feasible at LP precision.
  const auto polish_incumbent = [&](const LpResult& r) {
    for (int j : int_cols) {
      const double v = std::round(r.x[j]);
      lp.set_bounds(j, v, v);
    }
    LpResult polished = lp.solve();
    res.lp_iterations += polished.iterations;
    if (polished.status == LpStatus::optimal &&
        polished.objective < incumbent - options.absolute_gap) {
      accept_incumbent(polished);
    } else if (polished.status != LpStatus::optimal) {
      accept_incumbent(r);  // keep the unpolished point rather than lose it
    }
  };

  // Either records a new incumbent (integral solution) or queues the two
  // children of the most fractional integer column.
  const auto process = [&](const LpResult& r, int node_id) {
    if (r.objective >= incumbent - options.absolute_gap) return;
    int branch_col = -1;
    double best_frac = options.int_tol;
    for (int j : int_cols) {
      const double f = r.x[j] - std::floor(r.x[j]);
      const double frac = std::min(f, 1.0 - f);
      if (frac > best_frac) {  // strict: ties keep the lowest column
        best_frac = frac;
        branch_col = j;
      }
    }
    if (branch_col < 0) {
      polish_incumbent(r);
      return;
    }
    auto snapshot = std::make_shared<const std::vector<BasisStatus>>(lp.basis_statuses());
    const double fl = std::floor(r.x[branch_col]);
    Node down{node_id, branch_col, true, fl, r.objective, snapshot};
    Node up{node_id, branch_col, false, fl + 1.0, r.objective, snapshot};
    arena.push_back(std::move(down));
    open.emplace(r.objective, static_cast<long>(arena.size()) - 1);
    arena.push_back(std::move(up));
    open.emplace(r.objective, static_cast<long>(arena.size()) - 1);
  };

  // Root relaxation.
  LpResult root = lp.solve();
  res.lp_iterations += root.iterations;
  res.nodes = 1;
  bool hit_time = false, hit_nodes = false, lp_trouble = false;

  if (root.status == LpStatus::unbounded) {
    res.status = MilpStatus::unbounded;
    res.best_bound = -kInf;
    res.seconds = elapsed();
    return res;
  }
  if (root.status == LpStatus::iteration_limit) {
    lp_trouble = true;
  } else if (root.status == LpStatus::optimal) {
    process(root, -1);
  }
  // root infeasible: nothing queued; the warm start (if any) stands.

  while (!lp_trouble && !open.empty()) {
    if (options.time_limit_s > 0 && elapsed() > options.time_limit_s) {
      hit_time = true;
      break;
    }
    if (options.node_limit > 0 && res.nodes >= options.node_limit) {
      hit_nodes = true;
      break;
    }
    const auto [bound, id] = open.top();
    open.pop();
    if (bound >= incumbent - options.absolute_gap) continue;  // pruned

    ++res.nodes;
    const Node& node = arena[id];

    // Rebuild this node's bound overrides root-to-leaf so deeper branches win.
    lp.reset_bounds();
    std::vector<int> chain;
    for (int cur = static_cast<int>(id); cur >= 0; cur = arena[cur].parent) chain.push_back(cur);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Node& nd = arena[*it];
      if (nd.upper) {
        lp.set_bounds(nd.col, lp.lower_bound(nd.col), nd.value);
      } else {
        lp.set_bounds(nd.col, nd.value, lp.upper_bound(nd.col));
      }
    }
    lp.set_basis(*node.statuses);

    LpResult r = lp.solve();
    res.lp_iterations += r.iterations;
    if (r.status == LpStatus::infeasible) continue;
    if (r.status != LpStatus::optimal) {  // iteration limit / unbounded child
      lp_trouble = true;
      break;
    }
    process(r, static_cast<int>(id));
  }

  // Global lower bound: the least bound still open, capped by the incumbent.
  double open_bound = incumbent;
  if (!open.empty()) open_bound = std::min(open_bound, open.top().first);

  res.seconds = elapsed();
  if (hit_time || lp_trouble) {
    res.status = MilpStatus::time_limit;
    res.best_bound = open_bound;
  } else if (hit_nodes) {
    res.status = MilpStatus::node_limit;
    res.best_bound = open_bound;
  } else if (incumbent < kInf) {
    res.status = MilpStatus::optimal;
    res.best_bound = incumbent;
  } else {
    res.status = MilpStatus::infeasible;
    res.best_bound = kInf;
  }
  if (incumbent < kInf) {
    res.objective = incumbent;
    res.x = inc_x;
  }
  return res;
}

}  // namespace vertiflow::milp
