#include <vector>

#include "doctest.h"
#include "rectlab/lp.hpp"
#include "rectlab/rng.hpp"

using namespace rectlab;

namespace {

using Row = std::vector<std::pair<std::size_t, Rational>>;

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

template <class T>
bool feasible(const LinearProgram<T>& lp, const std::vector<T>& x) {
  for (const auto& v : x)
    if (v < 0) return false;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    T lhs = 0;
    for (const auto& [j, a] : lp.rows[i]) lhs += a * x[j];
    if (lp.senses[i] == Sense::le && lhs > lp.rhs[i]) return false;
    if (lp.senses[i] == Sense::ge && lhs < lp.rhs[i]) return false;
    if (lp.senses[i] == Sense::eq && lhs != lp.rhs[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rational formatting") {
  CHECK(to_string(q(27, 4)) == "27/4");
  CHECK(to_string(q(8, 2)) == "4");
  CHECK(to_string(q(0)) == "0");
  CHECK(to_string(q(-3, 9)) == "-1/3");
}

TEST_CASE("small maximization") {
  LinearProgram<Rational> lp;
  lp.num_vars = 2;
  lp.maximize = true;
  lp.objective = {q(3), q(2)};
  lp.add_row(Row{{0, q(1)}, {1, q(1)}}, Sense::le, q(4));
  lp.add_row(Row{{0, q(1)}, {1, q(3)}}, Sense::le, q(6));
  lp.add_row(Row{{0, q(1)}}, Sense::le, q(3));
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == 11);
  CHECK(r.x[0] == 3);
  CHECK(r.x[1] == 1);
}

TEST_CASE("negative right-hand sides and equalities") {
  LinearProgram<Rational> lp;
  lp.num_vars = 3;
  lp.objective = {q(1), q(2), q(0)};
  lp.add_row(Row{{0, q(-1)}, {1, q(-1)}}, Sense::le, q(-2));
  lp.add_row(Row{{0, q(1)}, {2, q(1)}}, Sense::eq, q(5, 2));
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == 2);
  CHECK(feasible(lp, r.x));
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram<Rational> a;
  a.num_vars = 1;
  a.objective = {q(1)};
  a.add_row(Row{{0, q(1)}}, Sense::ge, q(2));
  a.add_row(Row{{0, q(1)}}, Sense::le, q(1));
  CHECK(solve_lp(a).status == LpStatus::infeasible);

  LinearProgram<Rational> b;
  b.num_vars = 2;
  b.maximize = true;
  b.objective = {q(1), q(0)};
  b.add_row(Row{{0, q(1)}, {1, q(-1)}}, Sense::le, q(1));
  CHECK(solve_lp(b).status == LpStatus::unbounded);
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  // Cycles under the textbook largest-coefficient rule.
  LinearProgram<Rational> lp;
  lp.num_vars = 4;
  lp.maximize = true;
  lp.objective = {q(3, 4), q(-150), q(1, 50), q(-6)};
  lp.add_row(Row{{0, q(1, 4)}, {1, q(-60)}, {2, q(-1, 25)}, {3, q(9)}}, Sense::le, q(0));
  lp.add_row(Row{{0, q(1, 2)}, {1, q(-90)}, {2, q(-1, 50)}, {3, q(3)}}, Sense::le, q(0));
  lp.add_row(Row{{2, q(1)}}, Sense::le, q(1));
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.value == q(1, 20));
  CHECK(feasible(lp, r.x));
}

TEST_CASE("pivot limit") {
  LinearProgram<Rational> lp;
  lp.num_vars = 2;
  lp.maximize = true;
  lp.objective = {q(3), q(2)};
  lp.add_row(Row{{0, q(1)}, {1, q(1)}}, Sense::le, q(4));
  lp.add_row(Row{{0, q(1)}, {1, q(3)}}, Sense::le, q(6));
  CHECK(solve_lp(lp, 0).status == LpStatus::pivot_limit);
}

TEST_CASE("strong duality on random covering programs") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    Xoshiro256 rng(s);
    const std::size_t m = 2 + rng.below(7), n = 2 + rng.below(7);
    std::vector<std::vector<long>> a(m, std::vector<long>(n));
    for (auto& row : a)
      for (auto& v : row) v = static_cast<long>(rng.below(4));
    // Every row needs a positive entry for feasibility.
    for (std::size_t i = 0; i < m; ++i) a[i][rng.below(n)] += 1;
    std::vector<long> b(m), c(n);
    for (auto& v : b) v = 1 + static_cast<long>(rng.below(5));
    for (auto& v : c) v = 1 + static_cast<long>(rng.below(5));

    LinearProgram<Rational> primal, dual;
    primal.num_vars = n;
    for (long v : c) primal.objective.push_back(q(v));
    for (std::size_t i = 0; i < m; ++i) {
      Row row;
      for (std::size_t j = 0; j < n; ++j)
        if (a[i][j]) row.emplace_back(j, q(a[i][j]));
      primal.add_row(row, Sense::ge, q(b[i]));
    }
    dual.num_vars = m;
    dual.maximize = true;
    for (long v : b) dual.objective.push_back(q(v));
    for (std::size_t j = 0; j < n; ++j) {
      Row row;
      for (std::size_t i = 0; i < m; ++i)
        if (a[i][j]) row.emplace_back(i, q(a[i][j]));
      dual.add_row(row, Sense::le, q(c[j]));
    }
    const auto pr = solve_lp(primal), dr = solve_lp(dual);
    REQUIRE(pr.status == LpStatus::optimal);
    REQUIRE(dr.status == LpStatus::optimal);
    CHECK(pr.value == dr.value);
    CHECK(feasible(primal, pr.x));
    CHECK(feasible(dual, dr.x));

    LinearProgram<double> fp;
    fp.num_vars = n;
    fp.objective.assign(c.begin(), c.end());
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::pair<std::size_t, double>> row;
      for (std::size_t j = 0; j < n; ++j)
        if (a[i][j]) row.emplace_back(j, static_cast<double>(a[i][j]));
      fp.add_row(row, Sense::ge, static_cast<double>(b[i]));
    }
    const auto fr = solve_lp(fp);
    REQUIRE(fr.status == LpStatus::optimal);
    CHECK(fr.value == doctest::Approx(pr.value.get_d()).epsilon(1e-9));

    const auto vr = solve_lp_verified(primal);
    REQUIRE(vr.status == LpStatus::optimal);
    CHECK(vr.value == pr.value);
    CHECK(feasible(primal, vr.x));

    // Shadow prices of the covering rows form an optimal dual solution.
    REQUIRE(pr.duals.size() == m);
    CHECK(feasible(dual, pr.duals));
    Rational dual_value = 0;
    for (std::size_t i = 0; i < m; ++i) dual_value += q(b[i]) * pr.duals[i];
    CHECK(dual_value == pr.value);
  }
}

TEST_CASE("verified solve falls back cleanly on mixed senses") {
  LinearProgram<Rational> lp;
  lp.num_vars = 2;
  lp.objective = {q(1), q(1)};
  lp.add_row(Row{{0, q(1)}, {1, q(2)}}, Sense::eq, q(4));
  lp.add_row(Row{{0, q(3)}, {1, q(1)}}, Sense::ge, q(3));
  const auto exact = solve_lp(lp), verified = solve_lp_verified(lp);
  REQUIRE(verified.status == LpStatus::optimal);
  CHECK(verified.value == exact.value);
  CHECK(verified.value == q(11, 5));
  CHECK(exact.duals.empty());
}
