#include "vertiflow/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace vertiflow::milp {

namespace {

constexpr double kSingularTol = 1e-11;

// Abstract basis factorization: B is the m x m matrix of basic columns.
class BasisEngine {
 public:
  virtual ~BasisEngine() = default;
  virtual bool factorize(const std::vector<int>& basic_cols) = 0;
  // v (original-row space) -> B^{ -1} v (basis-position space), in place.
  virtual void ftran(std::vector<double>& v) const = 0;
  // v (basis-position space) -> B^{-T} v (original-row space), in place.
  virtual void btran(std::vector<double>& v) const = 0;
  // Product-form update after basis position `pos` is replaced by a column
  // whose ftran image is `w`.  Returns false when the pivot is too small to
  // be stable (caller refactorizes instead).
  virtual bool update(const std::vector<double>& w, int pos) = 0;
  virtual int updates() const = 0;
};

// Column access into [A | I].
struct Columns {
  int n = 0;  // structural count
  int m = 0;  // rows
  std::vector<int> ptr, row;
  std::vector<double> val;

  // iterate column j: entries [ptr[j], ptr[j+1]) for structural; slack j>=n
  // is the single entry (j - n, 1.0).
  template <class F>
  void scan(int j, F&& fn) const {
    if (j >= n) {
      fn(j - n, 1.0);
      return;
    }
    for (int k = ptr[j]; k < ptr[j + 1]; ++k) fn(row[k], val[k]);
  }

  double dot(int j, const std::vector<double>& y) const {
    double s = 0.0;
    if (j >= n) return y[j - n];
    for (int k = ptr[j]; k < ptr[j + 1]; ++k) s += val[k] * y[row[k]];
    return s;
  }
};

// ---------------------------------------------------------------------------
// Dense engine: explicit inverse, O(m^2) per operation.  Reference engine and
// default for small row counts.
class DenseEngine final : public BasisEngine {
 public:
  explicit DenseEngine(const Columns& cols) : cols_(cols), m_(cols.m) {}

  bool factorize(const std::vector<int>& basic_cols) override {
    updates_ = 0;
    const int m = m_;
    std::vector<double> work(static_cast<std::size_t>(m) * m, 0.0);  // B, row major
    inv_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p) {
      cols_.scan(basic_cols[p], [&](int r, double v) { work[static_cast<std::size_t>(r) * m + p] = v; });
      inv_[static_cast<std::size_t>(p) * m + p] = 1.0;
    }
    // Gauss-Jordan with partial pivoting; `inv_` accumulates B^{-1} with the
    // row swaps applied to it as well.
    for (int k = 0; k < m; ++k) {
      int piv = -1;
      double best = kSingularTol;
      for (int r = k; r < m; ++r) {
        const double a = std::fabs(work[static_cast<std::size_t>(r) * m + k]);
        if (a > best) {
          best = a;
          piv = r;
        }
      }
      if (piv < 0) return false;
      if (piv != k) {
        for (int c = 0; c < m; ++c) {
          std::swap(work[static_cast<std::size_t>(piv) * m + c], work[static_cast<std::size_t>(k) * m + c]);
          std::swap(inv_[static_cast<std::size_t>(piv) * m + c], inv_[static_cast<std::size_t>(k) * m + c]);
        }
      }
      const double d = work[static_cast<std::size_t>(k) * m + k];
      for (int c = 0; c < m; ++c) {
        work[static_cast<std::size_t>(k) * m + c] /= d;
        inv_[static_cast<std::size_t>(k) * m + c] /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == k) continue;
        const double f = work[static_cast<std::size_t>(r) * m + k];
        if (f == 0.0) continue;
        for (int c = 0; c < m; ++c) {
          work[static_cast<std::size_t>(r) * m + c] -= f * work[static_cast<std::size_t>(k) * m + c];
          inv_[static_cast<std::size_t>(r) * m + c] -= f * inv_[static_cast<std::size_t>(k) * m + c];
        }
      }
    }
    return true;
  }

  void ftran(std::vector<double>& v) const override {
    const int m = m_;
    std::vector<double> out(m, 0.0);
    for (int r = 0; r < m; ++r) {
      const double vr = v[r];
      if (vr == 0.0) continue;
      const double* col = inv_.data() + r;  // inv_[i][r] stride m
      for (int i = 0; i < m; ++i) out[i] += col[static_cast<std::size_t>(i) * m] * vr;
    }
    v = std::move(out);
  }

  void btran(std::vector<double>& v) const override {
    const int m = m_;
    std::vector<double> out(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      const double* rowp = inv_.data() + static_cast<std::size_t>(i) * m;
      for (int r = 0; r < m; ++r) out[r] += rowp[r] * vi;
    }
    v = std::move(out);
  }

  bool update(const std::vector<double>& w, int pos) override {
    const int m = m_;
    const double piv = w[pos];
    if (std::fabs(piv) < 1e-9) return false;
    // inv <- E^{-1} inv with E the identity whose column `pos` is w.
    double* prow = inv_.data() + static_cast<std::size_t>(pos) * m;
    for (int c = 0; c < m; ++c) prow[c] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == pos) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      double* irow = inv_.data() + static_cast<std::size_t>(i) * m;
      for (int c = 0; c < m; ++c) irow[c] -= f * prow[c];
    }
    ++updates_;
    return true;
  }

  int updates() const override { return updates_; }

 private:
  const Columns& cols_;
  int m_;
  std::vector<double> inv_;  // row major m x m
  int updates_ = 0;
};

// ---------------------------------------------------------------------------
// Sparse LU engine: left-looking factorization with partial pivoting and
// product-form (eta) updates.  Work vectors are dense; sparsity is exploited
// through exact-zero skips, which is effective at this problem scale without
// a symbolic analysis pass.
class SparseLuEngine final : public BasisEngine {
 public:
  explicit SparseLuEngine(const Columns& cols) : cols_(cols), m_(cols.m) {}

  bool factorize(const std::vector<int>& basic_cols) override {
    const int m = m_;
    etas_.clear();
    lcol_.assign(m, {});
    ucol_.assign(m, {});
    udiag_.assign(m, 0.0);
    pivot_row_.assign(m, -1);
    perm_.assign(m, -1);
    std::vector<double> work(m, 0.0);

    for (int k = 0; k < m; ++k) {
      cols_.scan(basic_cols[k], [&](int r, double v) { work[r] = v; });
      // Forward solve against the L columns built so far.
      for (int kk = 0; kk < k; ++kk) {
        const double t = work[pivot_row_[kk]];
        if (t == 0.0) continue;
        for (const auto& [r, v] : lcol_[kk]) work[r] -= v * t;
        ucol_[k].emplace_back(kk, t);
      }
      // Partial pivoting over not-yet-pivoted rows.
      int piv = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        if (perm_[r] >= 0) continue;
        const double a = std::fabs(work[r]);
        if (a > best) {
          best = a;
          piv = r;
        }
      }
      if (piv < 0 || best < kSingularTol) return false;
      const double d = work[piv];
      udiag_[k] = d;
      pivot_row_[k] = piv;
      perm_[piv] = k;
      for (int r = 0; r < m; ++r) {
        if (perm_[r] >= 0 || work[r] == 0.0) continue;
        lcol_[k].emplace_back(r, work[r] / d);
      }
      std::fill(work.begin(), work.end(), 0.0);
    }
    return true;
  }

  void ftran(std::vector<double>& v) const override {
    const int m = m_;
    std::vector<double> y(m, 0.0);
    // L y = P v (forward, pivot order); v indexed by original row.
    for (int k = 0; k < m; ++k) {
      const double t = v[pivot_row_[k]];
      y[k] = t;
      if (t == 0.0) continue;
      for (const auto& [r, val] : lcol_[k]) v[r] -= val * t;
    }
    // U x = y (backward over columns).
    for (int k = m - 1; k >= 0; --k) {
      const double xk = y[k] / udiag_[k];
      y[k] = xk;
      if (xk == 0.0) continue;
      for (const auto& [kk, val] : ucol_[k]) y[kk] -= val * xk;
    }
    // Apply eta updates in creation order.
    for (const auto& e : etas_) {
      if (y[e.pos] == 0.0) continue;
      const double t = y[e.pos] / e.pivot;
      y[e.pos] = t;
      for (const auto& [i, wi] : e.entries) y[i] -= wi * t;
    }
    v = std::move(y);
  }

  void btran(std::vector<double>& v) const override {
    const int m = m_;
    // Transposed etas in reverse creation order.
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->pos];
      for (const auto& [i, wi] : it->entries) acc -= wi * v[i];
      v[it->pos] = acc / it->pivot;
    }
    // U^T z = v (forward over columns ascending).
    std::vector<double> z(m, 0.0);
    for (int k = 0; k < m; ++k) {
      double acc = v[k];
      for (const auto& [kk, val] : ucol_[k]) acc -= val * z[kk];
      z[k] = acc / udiag_[k];
    }
    // L^T w = z (backward; L column k holds rows pivoted later than k).
    for (int k = m - 1; k >= 0; --k) {
      double acc = z[k];
      for (const auto& [r, val] : lcol_[k]) acc -= val * z[perm_[r]];
      z[k] = acc;
    }
    // Scatter back to original-row space.
    std::vector<double> out(m, 0.0);
    for (int k = 0; k < m; ++k) out[pivot_row_[k]] = z[k];
    v = std::move(out);
  }

  bool update(const std::vector<double>& w, int pos) override {
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::fabs(v));
    const double piv = w[pos];
    if (std::fabs(piv) < 1e-9 || std::fabs(piv) < 1e-7 * wmax) return false;
    Eta e;
    e.pos = pos;
    e.pivot = piv;
    for (int i = 0; i < m_; ++i) {
      if (i != pos && w[i] != 0.0) e.entries.emplace_back(i, w[i]);
    }
    etas_.push_back(std::move(e));
    return true;
  }

  int updates() const override { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> entries;
  };

  const Columns& cols_;
  int m_;
  std::vector<std::vector<std::pair<int, double>>> lcol_, ucol_;
  std::vector<double> udiag_;
  std::vector<int> pivot_row_;  // elimination step -> original row
  std::vector<int> perm_;       // original row -> elimination step
  std::vector<Eta> etas_;
};

}  // namespace

// ---------------------------------------------------------------------------

struct LpSolver::Impl {
  Columns cols;
  LpOptions opt;
  double obj_constant = 0.0;

  std::vector<double> lb, ub, cost;   // size n + m
  std::vector<double> model_lb, model_ub;
  std::vector<double> rhs;            // size m
  std::vector<double> x;              // size n + m
  std::vector<BasisStatus> status;    // size n + m
  std::vector<int> basic_cols;        // size m: basis position -> column
  std::vector<int> pos_of;            // column -> basis position or -1
  std::unique_ptr<BasisEngine> engine;
  bool factorized = false;
  long iterations = 0;
  bool bland = false;
  int stall = 0;

  int total() const { return cols.n + cols.m; }

  // ---- setup ---------------------------------------------------------------

  explicit Impl(const MilpModel& model, LpOptions options) : opt(options) {
    model.validate();
    const int n = model.num_vars();
    const int m = model.num_rows();
    cols.n = n;
    cols.m = m;
    obj_constant = model.obj_constant;

    // Column-major structural matrix.
    std::vector<int> count(n, 0);
    for (const auto& r : model.rows)
      for (const auto& [c, v] : r.coefs) {
        (void)v;
        ++count[c];
      }
    cols.ptr.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) cols.ptr[j + 1] = cols.ptr[j] + count[j];
    cols.row.assign(cols.ptr[n], 0);
    cols.val.assign(cols.ptr[n], 0.0);
    std::vector<int> fill(cols.ptr.begin(), cols.ptr.end() - 1);
    for (int r = 0; r < m; ++r) {
      for (const auto& [c, v] : model.rows[r].coefs) {
        cols.row[fill[c]] = r;
        cols.val[fill[c]] = v;
        ++fill[c];
      }
    }

    lb.resize(n + m);
    ub.resize(n + m);
    cost.assign(n + m, 0.0);
    rhs.resize(m);
    for (int j = 0; j < n; ++j) {
      const auto& v = model.vars[j];
      if (v.lb == -kInf && v.ub == kInf) {
        throw DomainError("lp: free variable " + v.name + " unsupported");
      }
      lb[j] = v.lb;
      ub[j] = v.ub;
      cost[j] = v.obj;
    }
    for (int r = 0; r < m; ++r) {
      rhs[r] = model.rows[r].rhs;
      switch (model.rows[r].sense) {
        case RowSense::le: lb[n + r] = 0.0; ub[n + r] = kInf; break;
        case RowSense::ge: lb[n + r] = -kInf; ub[n + r] = 0.0; break;
        case RowSense::eq: lb[n + r] = 0.0; ub[n + r] = 0.0; break;
      }
    }
    model_lb = lb;
    model_ub = ub;

    if (m <= opt.dense_threshold) {
      engine = std::make_unique<DenseEngine>(cols);
    } else {
      engine = std::make_unique<SparseLuEngine>(cols);
    }
    x.assign(n + m, 0.0);
    reset_basis();
  }

  void reset_basis() {
    const int n = cols.n, m = cols.m;
    status.assign(n + m, BasisStatus::at_lower);
    for (int j = 0; j < n + m; ++j) {
      status[j] = lb[j] > -kInf ? BasisStatus::at_lower : BasisStatus::at_upper;
    }
    basic_cols.resize(m);
    pos_of.assign(n + m, -1);
    for (int r = 0; r < m; ++r) {
      basic_cols[r] = n + r;
      status[n + r] = BasisStatus::basic;
      pos_of[n + r] = r;
    }
    factorized = false;
  }

  void install_statuses(const std::vector<BasisStatus>& s) {
    if (s.size() != static_cast<std::size_t>(total())) {
      throw DomainError("lp: basis status vector has wrong size");
    }
    std::vector<int> basics;
    for (int j = 0; j < total(); ++j) {
      if (s[j] == BasisStatus::basic) basics.push_back(j);
    }
    if (static_cast<int>(basics.size()) != cols.m) {
      throw DomainError("lp: basis must contain exactly one column per row");
    }
    status = s;
    basic_cols = basics;
    pos_of.assign(total(), -1);
    for (int p = 0; p < cols.m; ++p) pos_of[basic_cols[p]] = p;
    factorized = false;
  }

  // ---- numerics ------------------------------------------------------------

  bool ensure_factorized() {
    if (factorized && engine->updates() < opt.refactor_interval) return true;
    if (!engine->factorize(basic_cols)) return false;
    factorized = true;
    return true;
  }

  double nonbasic_value(int j) const {
    switch (status[j]) {
      case BasisStatus::at_lower: return lb[j];
      case BasisStatus::at_upper: return ub[j];
      default: return x[j];
    }
  }

  void compute_x() {
    std::vector<double> v = rhs;
    for (int j = 0; j < total(); ++j) {
      if (status[j] == BasisStatus::basic) continue;
      const double xj = nonbasic_value(j);
      x[j] = xj;
      if (xj != 0.0) cols.scan(j, [&](int r, double val) { v[r] -= val * xj; });
    }
    engine->ftran(v);
    for (int p = 0; p < cols.m; ++p) x[basic_cols[p]] = v[p];
  }

  std::vector<double> reduced_costs(const std::vector<double>& c) {
    std::vector<double> y(cols.m, 0.0);
    for (int p = 0; p < cols.m; ++p) y[p] = c[basic_cols[p]];
    engine->btran(y);
    std::vector<double> d(total(), 0.0);
    for (int j = 0; j < total(); ++j) {
      if (status[j] == BasisStatus::basic) continue;
      d[j] = c[j] - cols.dot(j, y);
    }
    return d;
  }

  bool primal_feasible() const {
    for (int p = 0; p < cols.m; ++p) {
      const int j = basic_cols[p];
      if (x[j] < lb[j] - opt.feas_tol || x[j] > ub[j] + opt.feas_tol) return false;
    }
    return true;
  }

  bool dual_feasible(const std::vector<double>& d) const {
    for (int j = 0; j < total(); ++j) {
      if (status[j] == BasisStatus::basic) continue;
      if (lb[j] == ub[j]) continue;  // fixed: any sign admissible
      if (status[j] == BasisStatus::at_lower && d[j] < -opt.dual_tol) return false;
      if (status[j] == BasisStatus::at_upper && d[j] > opt.dual_tol) return false;
    }
    return true;
  }

  void pivot(int entering, int leave_pos, const std::vector<double>& w,
             BasisStatus leaving_status) {
    const int leaving = basic_cols[leave_pos];
    status[leaving] = leaving_status;
    pos_of[leaving] = -1;
    basic_cols[leave_pos] = entering;
    status[entering] = BasisStatus::basic;
    pos_of[entering] = leave_pos;
    if (!engine->update(w, leave_pos)) {
      factorized = false;
      ensure_factorized();
    }
  }

  // ---- primal simplex -------------------------------------------------------

  // Requires a primal-feasible basis.  Returns optimal / unbounded /
  // iteration_limit.
  LpStatus primal_loop(const std::vector<double>& c) {
    bland = false;
    stall = 0;
    while (iterations < opt.max_iterations) {
      if (!ensure_factorized()) {
        // Numerically singular refactorization: restart from the all-slack
        // basis and recover primal feasibility before pricing again.
        reset_basis();
        ensure_factorized();
        const std::vector<double> zero(total(), 0.0);
        if (dual_loop(zero) == LpStatus::infeasible) return LpStatus::infeasible;
        bland = false;
        stall = 0;
      }
      const std::vector<double> d = reduced_costs(c);

      int entering = -1;
      double best_viol = opt.dual_tol;
      for (int j = 0; j < total(); ++j) {
        if (status[j] == BasisStatus::basic || lb[j] == ub[j]) continue;
        double viol = 0.0;
        if (status[j] == BasisStatus::at_lower) viol = -d[j];
        else viol = d[j];
        if (viol > best_viol) {
          best_viol = viol;
          entering = j;
          if (bland) break;  // first eligible (ascending j) under Bland
        }
      }
      if (entering < 0) return LpStatus::optimal;
      ++iterations;

      const bool from_lower = status[entering] == BasisStatus::at_lower;
      const double dir = from_lower ? 1.0 : -1.0;
      std::vector<double> w(cols.m, 0.0);
      cols.scan(entering, [&](int r, double v) { w[r] = v; });
      engine->ftran(w);

      // Ratio test: t >= 0 is the move of x[entering] toward its other bound.
      double t_limit = ub[entering] - lb[entering];  // may be inf
      int leave_pos = -1;
      double leave_pivot = 0.0;
      BasisStatus leave_to = BasisStatus::at_lower;
      for (int p = 0; p < cols.m; ++p) {
        const int j = basic_cols[p];
        const double delta = -dir * w[p];  // d x_B[p] / d t
        double ratio;
        BasisStatus to;
        if (delta < -opt.pivot_tol) {
          if (lb[j] == -kInf) continue;
          ratio = (x[j] - lb[j]) / -delta;
          to = BasisStatus::at_lower;
        } else if (delta > opt.pivot_tol) {
          if (ub[j] == kInf) continue;
          ratio = (ub[j] - x[j]) / delta;
          to = BasisStatus::at_upper;
        } else {
          continue;
        }
        const bool strict = ratio < t_limit - 1e-12;
        const bool tie = !strict && ratio < t_limit + 1e-12;
        // Ties: lowest position under Bland, otherwise largest pivot.
        const bool take =
            strict || (tie && leave_pos >= 0 && !bland &&
                       std::fabs(w[p]) > std::fabs(leave_pivot)) ||
            (tie && leave_pos < 0);
        if (take) {
          t_limit = std::max(ratio, 0.0);
          leave_pos = p;
          leave_pivot = w[p];
          leave_to = to;
        }
      }
      if (leave_pos < 0 && t_limit == kInf) return LpStatus::unbounded;

      stall = t_limit < 1e-10 ? stall + 1 : 0;
      if (stall > 500) bland = true;
      if (stall == 0) bland = false;

      if (leave_pos < 0) {
        // Bound flip: entering runs to its other bound, basis unchanged.
        status[entering] = from_lower ? BasisStatus::at_upper : BasisStatus::at_lower;
        compute_x();
        continue;
      }
      pivot(entering, leave_pos, w, leave_to);
      compute_x();
    }
    return LpStatus::iteration_limit;
  }

  // ---- dual simplex ---------------------------------------------------------

  // Requires dual feasibility w.r.t. cost vector c (zero vector is always
  // dual feasible).  Ends `optimal` when primal feasibility is reached,
  // `infeasible` when a row proves the primal empty.
  LpStatus dual_loop(const std::vector<double>& c) {
    bland = false;
    stall = 0;
    while (iterations < opt.max_iterations) {
      if (!ensure_factorized()) {
        reset_basis();
        ensure_factorized();
      }
      compute_x();

      // Leaving: most violated basic bound.
      int leave_pos = -1;
      double worst = opt.feas_tol;
      bool above = false;
      for (int p = 0; p < cols.m; ++p) {
        const int j = basic_cols[p];
        if (x[j] < lb[j] - worst) {
          worst = lb[j] - x[j];
          leave_pos = p;
          above = false;
          if (bland) break;
        } else if (x[j] > ub[j] + worst) {
          worst = x[j] - ub[j];
          leave_pos = p;
          above = true;
          if (bland) break;
        }
      }
      if (leave_pos < 0) return LpStatus::optimal;  // primal feasible
      ++iterations;

      const std::vector<double> d = reduced_costs(c);
      // Row of B^{-1} N for the leaving position.
      std::vector<double> e(cols.m, 0.0);
      e[leave_pos] = 1.0;
      engine->btran(e);

      const double sgn = above ? 1.0 : -1.0;
      int entering = -1;
      double best_ratio = kInf;
      double best_alpha = 0.0;
      for (int j = 0; j < total(); ++j) {
        if (status[j] == BasisStatus::basic || lb[j] == ub[j]) continue;
        const double alpha = sgn * cols.dot(j, e);
        bool eligible = false;
        if (status[j] == BasisStatus::at_lower && alpha > opt.pivot_tol) eligible = true;
        if (status[j] == BasisStatus::at_upper && alpha < -opt.pivot_tol) eligible = true;
        if (!eligible) continue;
        const double ratio = d[j] / alpha;  // >= 0 up to tolerance
        const bool strict = ratio < best_ratio - 1e-12;
        const bool tie = !strict && ratio < best_ratio + 1e-12;
        // Ties: lowest column index under Bland (first hit wins), otherwise
        // largest pivot magnitude.  The minimum ratio itself is mandatory in
        // either mode, it is what keeps the step dual feasible.
        const bool take =
            strict || (tie && entering >= 0 && !bland &&
                       std::fabs(alpha) > std::fabs(best_alpha)) ||
            (tie && entering < 0);
        if (take) {
          best_ratio = ratio;
          best_alpha = alpha;
          entering = j;
        }
      }
      if (entering < 0) return LpStatus::infeasible;

      stall = std::fabs(best_ratio) < 1e-10 ? stall + 1 : 0;
      if (stall > 500) bland = true;
      if (stall == 0) bland = false;

      std::vector<double> w(cols.m, 0.0);
      cols.scan(entering, [&](int r, double v) { w[r] = v; });
      engine->ftran(w);
      pivot(entering, leave_pos, w,
            above ? BasisStatus::at_upper : BasisStatus::at_lower);
    }
    return LpStatus::iteration_limit;
  }

  // ---- top-level solve -------------------------------------------------------

  LpResult run() {
    LpResult res;
    for (int j = 0; j < total(); ++j) {
      if (lb[j] > ub[j] + opt.feas_tol) {
        res.status = LpStatus::infeasible;
        return res;
      }
    }
    // Clamp nonbasic statuses that lost their finite bound.
    for (int j = 0; j < total(); ++j) {
      if (status[j] == BasisStatus::basic) continue;
      if (status[j] == BasisStatus::at_lower && lb[j] == -kInf) status[j] = BasisStatus::at_upper;
      if (status[j] == BasisStatus::at_upper && ub[j] == kInf) status[j] = BasisStatus::at_lower;
    }

    if (!ensure_factorized()) {
      reset_basis();
      ensure_factorized();
    }
    compute_x();

    LpStatus st;
    if (primal_feasible()) {
      st = primal_loop(cost);
    } else if (dual_feasible(reduced_costs(cost))) {
      st = dual_loop(cost);
      if (st == LpStatus::optimal) st = primal_loop(cost);  // confirm
    } else {
      const std::vector<double> zero(total(), 0.0);
      st = dual_loop(zero);
      if (st == LpStatus::optimal) st = primal_loop(cost);
    }

    res.status = st;
    res.iterations = iterations;
    if (st == LpStatus::optimal) {
      res.x.assign(x.begin(), x.begin() + cols.n);
      res.objective = obj_constant;
      for (int j = 0; j < cols.n; ++j) res.objective += cost[j] * x[j];
    }
    return res;
  }
};

LpSolver::LpSolver(const MilpModel& model, LpOptions options)
    : impl_(std::make_unique<Impl>(model, options)) {}

LpSolver::~LpSolver() = default;

void LpSolver::set_bounds(int col, double new_lb, double new_ub) {
  if (col < 0 || col >= impl_->cols.n) throw DomainError("lp: bad column in set_bounds");
  impl_->lb[col] = new_lb;
  impl_->ub[col] = new_ub;
}

double LpSolver::lower_bound(int col) const { return impl_->lb[col]; }
double LpSolver::upper_bound(int col) const { return impl_->ub[col]; }

void LpSolver::reset_bounds() {
  impl_->lb = impl_->model_lb;
  impl_->ub = impl_->model_ub;
}

void LpSolver::set_basis(const std::vector<BasisStatus>& statuses) {
  impl_->install_statuses(statuses);
}

std::vector<BasisStatus> LpSolver::basis_statuses() const { return impl_->status; }

void LpSolver::reset_basis() { impl_->reset_basis(); }

LpResult LpSolver::solve() {
  impl_->iterations = 0;
  return impl_->run();
}

int LpSolver::num_structural() const { return impl_->cols.n; }
int LpSolver::num_rows() const { return impl_->cols.m; }

}  // namespace vertiflow::milp
