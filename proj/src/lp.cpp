#include "rectlab/lp.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <type_traits>

namespace rectlab {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<Rational> {
  static bool zero(const Rational& v) { return sgn(v) == 0; }
  static bool pos(const Rational& v) { return sgn(v) > 0; }
  static bool neg(const Rational& v) { return sgn(v) < 0; }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
};

template <>
struct Arith<double> {
  static constexpr double eps = 1e-9;
  static bool zero(double v) { return std::abs(v) <= eps; }
  static bool pos(double v) { return v > eps; }
  static bool neg(double v) { return v < -eps; }
  static bool less(double a, double b) { return a < b - eps; }
};

template <class T>
class Tableau {
  using A = Arith<T>;

 public:
  Tableau(std::size_t m, std::size_t ncols) : a_(m, std::vector<T>(ncols + 1)), basis_(m), cost_(ncols + 1) {}

  T& at(std::size_t i, std::size_t j) { return a_[i][j]; }
  T& rhs(std::size_t i) { return a_[i].back(); }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return cost_.size() - 1; }
  std::vector<std::size_t>& basis() { return basis_; }

  // Keeps a copy of the initial rows so that floating-point runs can
  // periodically rebuild the tableau from the basis.
  void snapshot() { orig_ = a_; }

  // Reduced costs for objective c over the current basis.
  void price(const std::vector<T>& c) {
    c_ = c;
    for (std::size_t j = 0; j <= cols(); ++j) cost_[j] = j < cols() ? c[j] : T(0);
    for (std::size_t i = 0; i < rows(); ++i) {
      const T& cb = c[basis_[i]];
      if (A::zero(cb)) continue;
      for (std::size_t j = 0; j <= cols(); ++j)
        if (!A::zero(a_[i][j])) cost_[j] -= cb * a_[i][j];
    }
  }

  // Recomputes the tableau for the current basis from the snapshot by
  // Gauss-Jordan elimination with partial pivoting, discarding the error
  // accumulated by successive pivots. Leaves the tableau untouched if the
  // basis looks singular.
  void refresh() {
    if constexpr (std::is_same_v<T, double>) refresh_float();
  }

  void refresh_float() {
    if (orig_.empty()) return;
    auto m = orig_;
    std::vector<std::size_t> nb(rows());
    std::vector<bool> used(rows(), false);
    for (std::size_t k = 0; k < rows(); ++k) {
      const std::size_t b = basis_[k];
      std::size_t r = rows();
      for (std::size_t i = 0; i < rows(); ++i)
        if (!used[i] && (r == rows() || std::abs(m[i][b]) > std::abs(m[r][b]))) r = i;
      if (r == rows() || std::abs(m[r][b]) < 1e-11) return;
      used[r] = true;
      nb[r] = b;
      const double inv = 1.0 / m[r][b];
      std::vector<std::size_t> nz;
      for (std::size_t j = 0; j <= cols(); ++j)
        if (m[r][j] != 0.0) {
          m[r][j] *= inv;
          nz.push_back(j);
        }
      for (std::size_t i = 0; i < rows(); ++i) {
        if (i == r || m[i][b] == 0.0) continue;
        const double f = m[i][b];
        for (std::size_t j : nz) m[i][j] -= f * m[r][j];
        m[i][b] = 0.0;
      }
    }
    a_ = std::move(m);
    basis_ = std::move(nb);
    price(std::vector<T>(c_));
  }

  const T& reduced_cost(std::size_t j) const { return cost_[j]; }

  // Objective value of the current basic solution (minimisation form).
  T objective() const { return -cost_.back(); }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<T>& pr = a_[r];
    const T inv = T(1) / pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (A::zero(pr[j])) continue;
      pr[j] *= inv;
      nz.push_back(j);
    }
    auto eliminate = [&](std::vector<T>& row) {
      if (A::zero(row[c])) return;
      const T f = row[c];
      for (std::size_t j : nz) row[j] -= f * pr[j];
      if constexpr (std::is_same_v<T, double>) row[c] = 0.0;
    };
    for (std::size_t i = 0; i < rows(); ++i)
      if (i != r) eliminate(a_[i]);
    eliminate(cost_);
    basis_[r] = c;
    ++pivots;
  }

  // Dantzig's rule, switching to Bland's rule while a run of degenerate
  // pivots is long enough to risk cycling. Bland's rule cannot cycle within
  // a degenerate run and every nondegenerate pivot strictly improves the
  // objective, so the combination terminates. `allowed[j]` gates entering
  // columns.
  LpStatus iterate(const std::vector<bool>& allowed, std::size_t limit) {
    constexpr std::size_t kDegenerateRun = 50;
    std::size_t degenerate = 0;
    while (true) {
      if (pivots > 0 && pivots % kRefreshInterval == 0) refresh();
      std::size_t enter = cols();
      const bool bland = degenerate >= kDegenerateRun;
      for (std::size_t j = 0; j < cols(); ++j) {
        if (!allowed[j] || !A::neg(cost_[j])) continue;
        if (enter == cols() || cost_[j] < cost_[enter]) enter = j;
        if (bland) break;
      }
      if (enter == cols()) return LpStatus::optimal;
      std::size_t leave = rows();
      T best_ratio{};
      for (std::size_t i = 0; i < rows(); ++i) {
        if (!A::pos(a_[i][enter])) continue;
        T ratio = A::neg(a_[i].back()) ? T(0) : T(a_[i].back() / a_[i][enter]);
        if (leave == rows() || A::less(ratio, best_ratio) ||
            (!A::less(best_ratio, ratio) && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows()) return LpStatus::unbounded;
      if (pivots >= limit) return LpStatus::pivot_limit;
      degenerate = A::zero(best_ratio) ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  // Dual simplex from a dual-feasible basis (all reduced costs >= 0).
  // Exact arithmetic uses the textbook ratio test with Bland's rule on long
  // dual-degenerate runs. Floating point uses a two-pass Harris ratio test,
  // which trades a dual infeasibility of at most eps for a large pivot.
  LpStatus iterate_dual(std::size_t limit) {
    constexpr std::size_t kDegenerateRun = 50;
    std::size_t degenerate = 0;
    while (true) {
      if (pivots > 0 && pivots % kRefreshInterval == 0) refresh();
      const bool bland = degenerate >= kDegenerateRun;
      std::size_t leave = rows();
      for (std::size_t i = 0; i < rows(); ++i) {
        if (!A::neg(a_[i].back())) continue;
        if (leave == rows() || (bland ? basis_[i] < basis_[leave] : a_[i].back() < a_[leave].back())) leave = i;
      }
      if (leave == rows()) return LpStatus::optimal;
      const std::vector<T>& row = a_[leave];
      std::size_t enter = cols();
      T best_ratio{};
      if constexpr (std::is_same_v<T, double>) {
        double theta = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cols(); ++j)
          if (A::neg(row[j])) theta = std::min(theta, (std::max(cost_[j], 0.0) + A::eps) / -row[j]);
        for (std::size_t j = 0; j < cols(); ++j) {
          if (!A::neg(row[j])) continue;
          const double ratio = std::max(cost_[j], 0.0) / -row[j];
          if (ratio <= theta && (enter == cols() || row[j] < row[enter])) {
            enter = j;
            best_ratio = ratio;
          }
        }
      } else {
        for (std::size_t j = 0; j < cols(); ++j) {
          if (!A::neg(row[j])) continue;
          T ratio = cost_[j] / -row[j];
          if (enter == cols() || ratio < best_ratio) {
            enter = j;
            best_ratio = std::move(ratio);
          }
        }
      }
      if (enter == cols()) return LpStatus::infeasible;
      if (pivots >= limit) return LpStatus::pivot_limit;
      degenerate = A::zero(best_ratio) ? degenerate + 1 : 0;
      pivot(leave, enter);
    }
  }

  std::size_t pivots = 0;

 private:
  static constexpr std::size_t kRefreshInterval = 200;

  std::vector<std::vector<T>> a_, orig_;
  std::vector<T> c_;
  std::vector<std::size_t> basis_;
  std::vector<T> cost_;
};

}  // namespace

template <class T>
LpResult<T> solve_lp(const LinearProgram<T>& lp, std::size_t pivot_limit) {
  using A = Arith<T>;
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_vars;

  // Normalise to b >= 0.
  std::vector<Sense> sense = lp.senses;
  std::vector<T> b = lp.rhs;
  std::vector<T> sign(m, T(1));
  for (std::size_t i = 0; i < m; ++i) {
    if (A::neg(b[i])) {
      sign[i] = T(-1);
      b[i] = -b[i];
      if (sense[i] == Sense::le)
        sense[i] = Sense::ge;
      else if (sense[i] == Sense::ge)
        sense[i] = Sense::le;
    }
  }
  // When every row is an inequality and the objective is nonnegative in
  // minimisation form, the all-slack basis is dual feasible: run the dual
  // simplex on rows written with a +1 slack.
  {
    bool dual_ok = true;
    for (Sense s : lp.senses) dual_ok = dual_ok && s != Sense::eq;
    std::vector<T> c(n + m, T(0));
    for (std::size_t j = 0; j < n; ++j) {
      c[j] = lp.maximize ? T(-lp.objective[j]) : lp.objective[j];
      dual_ok = dual_ok && !A::neg(c[j]);
    }
    if (dual_ok) {
      Tableau<T> tab(m, n + m);
      for (std::size_t i = 0; i < m; ++i) {
        const T f = lp.senses[i] == Sense::le ? T(1) : T(-1);
        for (const auto& [j, v] : lp.rows[i]) tab.at(i, j) += f * v;
        tab.rhs(i) = f * lp.rhs[i];
        tab.at(i, n + i) = T(1);
        tab.basis()[i] = n + i;
      }
      LpResult<T> res;
      if constexpr (std::is_same_v<T, double>) {
        // Small positive cost shifts remove dual degeneracy; the true costs
        // are restored afterwards and primal simplex finishes the job.
        std::minstd_rand gen(12345);
        std::uniform_real_distribution<double> shift(1e-7, 2e-7);
        std::vector<double> perturbed = c;
        for (double& v : perturbed) v += shift(gen);
        tab.price(perturbed);
        tab.snapshot();
        res.status = tab.iterate_dual(pivot_limit);
        if (res.status == LpStatus::optimal) {
          tab.refresh();
          tab.price(c);
          res.status = tab.iterate(std::vector<bool>(n + m, true), pivot_limit);
        }
      } else {
        tab.price(c);
        res.status = tab.iterate_dual(pivot_limit);
      }
      res.pivots = tab.pivots;
      if (res.status != LpStatus::optimal) return res;
      res.x.assign(n, T(0));
      for (std::size_t i = 0; i < m; ++i)
        if (tab.basis()[i] < n) res.x[tab.basis()[i]] = tab.rhs(i);
      res.basis = tab.basis();
      // The reduced cost of the slack of row i is minus its dual in the
      // +1-slack form; undo the row sign to get the shadow price of b_i.
      res.duals.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        res.duals[i] = lp.senses[i] == Sense::le ? T(-tab.reduced_cost(n + i)) : tab.reduced_cost(n + i);
      T value(0);
      for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * res.x[j];
      res.value = value;
      return res;
    }
  }

  // Columns: structural | slack/surplus | artificial.
  std::size_t n_slack = 0, n_art = 0;
  for (Sense s : sense) {
    if (s != Sense::eq) ++n_slack;
    if (s != Sense::le) ++n_art;
  }
  const std::size_t first_slack = n, first_art = n + n_slack, ncols = n + n_slack + n_art;
  Tableau<T> tab(m, ncols);
  std::size_t si = first_slack, ai = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, v] : lp.rows[i]) tab.at(i, j) += sign[i] * v;
    tab.rhs(i) = b[i];
    if (sense[i] == Sense::le) {
      tab.at(i, si) = T(1);
      tab.basis()[i] = si++;
    } else {
      if (sense[i] == Sense::ge) tab.at(i, si++) = T(-1);
      tab.at(i, ai) = T(1);
      tab.basis()[i] = ai++;
    }
  }

  if constexpr (std::is_same_v<T, double>) tab.snapshot();
  LpResult<T> res;
  std::vector<bool> allowed(ncols, true);
  if (n_art > 0) {
    std::vector<T> c1(ncols, T(0));
    for (std::size_t j = first_art; j < ncols; ++j) c1[j] = T(1);
    tab.price(c1);
    const LpStatus st = tab.iterate(allowed, pivot_limit);
    res.pivots = tab.pivots;
    if (st == LpStatus::pivot_limit) {
      res.status = st;
      return res;
    }
    if (!A::zero(tab.objective())) {
      res.status = LpStatus::infeasible;
      return res;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j)
        if (!A::zero(tab.at(i, j))) {
          tab.pivot(i, j);
          break;
        }
    }
    for (std::size_t j = first_art; j < ncols; ++j) allowed[j] = false;
  }

  std::vector<T> c2(ncols, T(0));
  for (std::size_t j = 0; j < n; ++j) c2[j] = lp.maximize ? T(-lp.objective[j]) : lp.objective[j];
  tab.price(c2);
  const LpStatus st = tab.iterate(allowed, pivot_limit);
  res.pivots = tab.pivots;
  res.status = st;
  if (st != LpStatus::optimal) return res;

  res.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] < n) res.x[tab.basis()[i]] = tab.rhs(i);
  res.basis = tab.basis();
  T value(0);
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * res.x[j];
  res.value = value;
  return res;
}

namespace {

// Solves M z = rhs for square M by Gauss-Jordan elimination with rows kept
// sparse-aware; nullopt when M is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
  const std::size_t m = rhs.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = m;
    for (std::size_t i = col; i < m; ++i)
      if (sgn(M[i][col]) != 0) {
        piv = i;
        break;
      }
    if (piv == m) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    const Rational inv = 1 / M[col][col];
    std::vector<std::size_t> nz;
    for (std::size_t j = col; j < m; ++j)
      if (sgn(M[col][j]) != 0) {
        M[col][j] *= inv;
        nz.push_back(j);
      }
    rhs[col] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == col || sgn(M[i][col]) == 0) continue;
      const Rational f = M[i][col];
      for (std::size_t j : nz) M[i][j] -= f * M[col][j];
      rhs[i] -= f * rhs[col];
    }
  }
  return rhs;
}

}  // namespace

LpResult<Rational> solve_lp_verified(const LinearProgram<Rational>& lp, std::size_t pivot_limit) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.num_vars;

  LinearProgram<double> approx;
  approx.num_vars = n;
  approx.maximize = lp.maximize;
  for (const auto& c : lp.objective) approx.objective.push_back(c.get_d());
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::pair<std::size_t, double>> row;
    for (const auto& [j, v] : lp.rows[i]) row.emplace_back(j, v.get_d());
    approx.add_row(std::move(row), lp.senses[i], lp.rhs[i].get_d());
  }
  const auto fl = solve_lp(approx, pivot_limit);
  if (fl.status != LpStatus::optimal) return solve_lp(lp, pivot_limit);

  // Standard form as built by solve_lp: rows with b < 0 are negated first.
  std::vector<Sense> sense = lp.senses;
  std::vector<Rational> b = lp.rhs;
  std::vector<int> sign(m, 1);
  std::size_t n_slack = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (approx.rhs[i] < -1e-9) {
      sign[i] = -1;
      b[i] = -b[i];
      if (sense[i] == Sense::le)
        sense[i] = Sense::ge;
      else if (sense[i] == Sense::ge)
        sense[i] = Sense::le;
    }
    if (sense[i] != Sense::eq) ++n_slack;
  }
  // Column j of the standard form as (row, value) pairs; artificials excluded.
  const std::size_t ncols = n + n_slack;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> cols(ncols);
  for (std::size_t i = 0, s = n; i < m; ++i) {
    for (const auto& [j, v] : lp.rows[i]) cols[j].emplace_back(i, sign[i] * v);
    if (sense[i] == Sense::le)
      cols[s++].emplace_back(i, Rational(1));
    else if (sense[i] == Sense::ge)
      cols[s++].emplace_back(i, Rational(-1));
  }
  std::vector<Rational> cost(ncols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.maximize ? Rational(-lp.objective[j]) : lp.objective[j];

  const auto& basis = fl.basis;
  if (basis.size() != m) return solve_lp(lp, pivot_limit);
  for (std::size_t k : basis)
    if (k >= ncols) return solve_lp(lp, pivot_limit);

  std::vector<std::vector<Rational>> B(m, std::vector<Rational>(m)), Bt(m, std::vector<Rational>(m));
  std::vector<Rational> cb(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (const auto& [i, v] : cols[basis[k]]) {
      B[i][k] = v;
      Bt[k][i] = v;
    }
    cb[k] = cost[basis[k]];
  }
  const auto xb = solve_square(std::move(B), b);
  if (!xb) return solve_lp(lp, pivot_limit);
  for (const auto& v : *xb)
    if (sgn(v) < 0) return solve_lp(lp, pivot_limit);
  const auto y = solve_square(std::move(Bt), cb);
  if (!y) return solve_lp(lp, pivot_limit);
  for (std::size_t j = 0; j < ncols; ++j) {
    Rational reduced = cost[j];
    for (const auto& [i, v] : cols[j]) reduced -= (*y)[i] * v;
    if (sgn(reduced) < 0) return solve_lp(lp, pivot_limit);
  }
  // Rows with an equality constraint have no slack; their duals are free,
  // which the reduced-cost test above already accounts for.

  LpResult<Rational> res;
  res.status = LpStatus::optimal;
  res.pivots = fl.pivots;
  res.basis = basis;
  res.x.assign(n, Rational(0));
  for (std::size_t k = 0; k < m; ++k)
    if (basis[k] < n) res.x[basis[k]] = (*xb)[k];
  Rational value(0);
  for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * res.x[j];
  res.value = value;
  return res;
}

template LpResult<Rational> solve_lp<Rational>(const LinearProgram<Rational>&, std::size_t);
template LpResult<double> solve_lp<double>(const LinearProgram<double>&, std::size_t);

}  // namespace rectlab
