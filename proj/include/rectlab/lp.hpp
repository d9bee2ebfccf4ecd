#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rectlab {

using Rational = mpq_class;

/// "num/den", or "num" when den = 1.
std::string to_string(const Rational& q);

enum class Sense { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded, pivot_limit };

/// min (or max) c·x subject to sparse rows a_i·x {<=,>=,=} b_i and x >= 0.
template <class T>
struct LinearProgram {
  std::size_t num_vars = 0;
  bool maximize = false;
  std::vector<T> objective;  // size num_vars
  std::vector<std::vector<std::pair<std::size_t, T>>> rows;
  std::vector<Sense> senses;
  std::vector<T> rhs;

  void add_row(std::vector<std::pair<std::size_t, T>> coeffs, Sense s, T b) {
    rows.push_back(std::move(coeffs));
    senses.push_back(s);
    rhs.push_back(std::move(b));
  }
};

template <class T>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  T value{};
  std::vector<T> x;
  std::size_t pivots = 0;
  /// Final basis over the standard-form columns: structural variables, then
  /// one slack/surplus per inequality row, then one artificial per >= or =
  /// row, each group in row order. Filled when optimal.
  std::vector<std::size_t> basis;
  /// Shadow prices of the rows in minimisation form (d value / d b_i, so
  /// nonnegative for >= rows). Filled when every row is an inequality and
  /// the minimisation-form objective is nonnegative, the case solved by the
  /// dual simplex; empty otherwise.
  std::vector<T> duals;
};

/// Dense two-phase tableau simplex; Dantzig pricing with a fallback to
/// Bland's rule on long degenerate runs.
/// With T = Rational every comparison is exact; with T = double entries of
/// magnitude below 1e-9 count as zero.
template <class T>
LpResult<T> solve_lp(const LinearProgram<T>& lp, std::size_t pivot_limit = 1'000'000);

/// Exact optimum found by a floating-point solve whose final basis is then
/// certified in rational arithmetic (primal and dual feasibility of the
/// basic solution). Falls back to the exact simplex when certification
/// fails, so the result is always exact.
LpResult<Rational> solve_lp_verified(const LinearProgram<Rational>& lp, std::size_t pivot_limit = 1'000'000);

extern template LpResult<Rational> solve_lp<Rational>(const LinearProgram<Rational>&, std::size_t);
extern template LpResult<double> solve_lp<double>(const LinearProgram<double>&, std::size_t);

}  // namespace rectlab
