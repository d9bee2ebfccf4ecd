#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rectlab/cover.hpp"
#include "rectlab/error.hpp"
#include "rectlab/rng.hpp"

using namespace rectlab;

namespace {

std::set<Rectangle> as_set(const RectangleSet& rs) { return {rs.rects.begin(), rs.rects.end()}; }

std::vector<std::size_t> shuffled(std::size_t n, Xoshiro256& rng) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  stable_shuffle(v, rng);
  return v;
}

}  // namespace

TEST_CASE("maximal rectangles of fixed matrices") {
  CHECK(enumerate_maximal_rectangles(BoolMatrix::ones(3, 3)).size() == 1);
  CHECK(enumerate_maximal_rectangles(BoolMatrix::identity(3)).size() == 3);
  const auto ci = enumerate_maximal_rectangles(BoolMatrix::complement_identity(3));
  CHECK(ci.size() == 6);
  CHECK(ci.complete);
  CHECK(enumerate_maximal_rectangles(BoolMatrix(3, 4)).size() == 0);
}

TEST_CASE("maximal rectangles match the closure oracle") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t rows = 2 + s % 9, cols = 2 + (s * 5) % 13;
    const auto m = oracle::random_matrix(rows, cols, 0.2 + 0.07 * static_cast<double>(s % 10), 900 + s);
    CAPTURE(s);
    const auto rs = enumerate_maximal_rectangles(m);
    CHECK(rs.complete);
    CHECK(as_set(rs).size() == rs.size());
    CHECK(as_set(rs) == oracle::maximal_rectangles(m));
    for (std::size_t i = 0; i < rs.size(); ++i) {
      CHECK(is_maximal_rectangle(m, rs.rects[i]));
      CHECK(rs.coverage[i].count() == rs.rects[i].size());
    }
  }
}

TEST_CASE("enumeration cap marks the set incomplete") {
  const auto m = BoolMatrix::complement_identity(12);
  const auto full = enumerate_maximal_rectangles(m);
  CHECK(full.size() == 4094);
  const auto capped = enumerate_maximal_rectangles(m, 100);
  CHECK_FALSE(capped.complete);
  CHECK(capped.size() == 100);
  CHECK_THROWS_AS(cover_exact(capped), SizeGuardError);
  CHECK_THROWS_AS(cover_greedy(capped), SizeGuardError);
  CHECK_THROWS_AS(frac_cover_exact(capped), SizeGuardError);
}

TEST_CASE("support index") {
  const auto m = gen_permutahedron(3);
  const SupportIndex idx(m);
  CHECK(idx.size() == 24);
  CHECK(idx.index(0, 0) == SupportIndex::npos);
  CHECK(idx.index(0, 2) == 0);
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx.index(idx.entry(i).row, idx.entry(i).col) == i);
}

TEST_CASE("exact covers") {
  CHECK(cover_exact(BoolMatrix::ones(4, 5)).size() == 1);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(cover_exact(BoolMatrix::identity(n)).size() == n);
  const auto rs = enumerate_maximal_rectangles(BoolMatrix::complement_identity(3));
  const auto c = cover_exact(rs);
  CHECK(c.size() == 3);
  CHECK(is_cover(rs, c));
  CHECK(cover_exact(BoolMatrix(2, 2)).size() == 0);
}

TEST_CASE("cover_exact matches the subset oracle") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const std::size_t rows = 3 + s % 4, cols = 3 + (s * 3) % 4;
    const auto m = oracle::random_matrix(rows, cols, 0.35 + 0.1 * static_cast<double>(s % 5), 3000 + s);
    CAPTURE(s);
    const auto rs = enumerate_maximal_rectangles(m);
    const auto c = cover_exact(rs);
    CHECK(is_cover(rs, c));
    CHECK(c.size() == oracle::rc(m));
    const auto g = cover_greedy(rs);
    CHECK(is_cover(rs, g));
    CHECK(g.size() >= c.size());
  }
}

TEST_CASE("cover_exact on planted supports matches the subset oracle") {
  // Unions of four random rectangles: supports large enough for the
  // Lagrangian bounds, cover numbers small enough for the oracle.
  std::uint64_t state = 99;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  std::size_t big = 0;
  for (int t = 0; t < 40; ++t) {
    BoolMatrix m(8, 8);
    for (int k = 0; k < 4; ++k) {
      const std::uint64_t rmask = next() & 0xff, cmask = next() & 0xff;
      for (std::size_t x = 0; x < 8; ++x)
        for (std::size_t y = 0; y < 8; ++y)
          if ((rmask >> x & 1) && (cmask >> y & 1)) m.set(x, y, true);
    }
    CAPTURE(t);
    const auto rs = enumerate_maximal_rectangles(m);
    if (rs.supp.size() >= 32) ++big;
    const auto c = cover_exact(rs);
    CHECK(is_cover(rs, c));
    CHECK(c.size() == oracle::rc(m));
  }
  CHECK(big >= 10);
}

TEST_CASE("crown graphs need the Sperner number of rectangles") {
  // Smallest k with C(k, floor(k/2)) >= n.
  CHECK(cover_exact(BoolMatrix::complement_identity(6)).size() == 4);
  CHECK(cover_exact(BoolMatrix::complement_identity(7)).size() == 5);
  CHECK(cover_exact(BoolMatrix::complement_identity(8)).size() == 5);
  CHECK(cover_exact(BoolMatrix::complement_identity(9)).size() == 5);
}

TEST_CASE("greedy covers") {
  CHECK(cover_greedy(enumerate_maximal_rectangles(BoolMatrix::ones(3, 3))).size() == 1);
  CHECK(cover_greedy(enumerate_maximal_rectangles(BoolMatrix::identity(4))).size() == 4);
  const auto perm = gen_permutahedron(3);
  const auto rs = enumerate_maximal_rectangles(perm);
  const auto g = cover_greedy(rs).size();
  const auto e = cover_exact(rs).size();
  const auto frc = frac_cover_exact(rs).value;
  CHECK(e <= g);
  CHECK(static_cast<double>(g) <= (1 + std::log(6.0)) * frc.get_d());
}

TEST_CASE("fractional covers of fixed matrices") {
  CHECK(frac_cover_exact(BoolMatrix::ones(3, 4)).value == 1);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(frac_cover_exact(BoolMatrix::identity(n)).value == Rational(n));
  CHECK(frac_cover_exact(BoolMatrix::complement_identity(3)).value == 3);
  CHECK(frac_cover_exact(BoolMatrix(3, 3)).value == 0);
  const auto rs = enumerate_maximal_rectangles(gen_permutahedron(3));
  const auto f = frac_cover_exact(rs);
  CHECK(is_fractional_cover(rs, f.weights));
  CHECK(f.value >= 4);  // supp / onerec = 24 / 6
}

TEST_CASE("covering and packing programs agree") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto m = gen_bernoulli({6 + s % 4, 0.3 + 0.03 * static_cast<double>(s), 40 + s});
    const auto rs = enumerate_maximal_rectangles(m);
    const auto f = frac_cover_exact(rs);
    const auto y = fractional_packing_exact(rs);
    CAPTURE(s);
    CHECK(f.value == y.value);
    CHECK(is_fractional_cover(rs, f.weights));
    Rational total = 0;
    for (const auto& w : f.weights) total += w;
    CHECK(total == f.value);
    for (std::size_t r = 0; r < rs.size(); ++r) {
      Rational load = 0;
      rs.coverage[r].for_each([&](std::size_t e) { load += y.y[e]; });
      CHECK(load <= 1);
    }
    CHECK(frac_cover_float(rs) == doctest::Approx(f.value.get_d()).epsilon(1e-9));
  }
}

TEST_CASE("is_fractional_cover rejects bad weights") {
  const auto rs = enumerate_maximal_rectangles(BoolMatrix::identity(2));
  CHECK(is_fractional_cover(rs, {Rational(1), Rational(1)}));
  CHECK_FALSE(is_fractional_cover(rs, {Rational(1), Rational(1, 2)}));
  CHECK_FALSE(is_fractional_cover(rs, {Rational(2), Rational(-1)}));
  CHECK_FALSE(is_fractional_cover(rs, {Rational(1)}));
}

TEST_CASE("supp over onerec") {
  CHECK(lb_supp_over_onerec(BoolMatrix::identity(7), 1, true).value == 7.0);
  CHECK(lb_supp_over_onerec(BoolMatrix::ones(4, 4), 16, true).value == 1.0);
  const auto perm = lb_supp_over_onerec(gen_permutahedron(3), 6, true);
  CHECK(perm.value == 4.0);
  CHECK(perm.is_bound);
  CHECK_FALSE(lb_supp_over_onerec(gen_permutahedron(3), 4, false).is_bound);
  CHECK(lb_supp_over_onerec(BoolMatrix(3, 3), 0, true).value == 0.0);
  CHECK_THROWS_AS(lb_supp_over_onerec(BoolMatrix::identity(2), 0, true), DomainError);
}

TEST_CASE("certified fractional cover bound") {
  const auto ones = frac_cover_certified_ub(BoolMatrix::ones(4, 4));
  CHECK(ones.q_used == 1.0);
  CHECK(ones.bound == 1.0);
  const auto z1 = frac_cover_certified_ub(BoolMatrix::complement_identity(2));
  CHECK(z1.z_max == 1);
  CHECK(z1.q_used == 0.5);
  CHECK(z1.bound == doctest::Approx(4.0));
  REQUIRE(z1.exact);
  CHECK(*z1.exact == 4);
  const auto id = frac_cover_certified_ub(BoolMatrix::identity(3));
  CHECK(id.z_max == 2);
  CHECK(id.q_used == doctest::Approx(1.0 / 3));
  REQUIRE(id.exact);
  CHECK(*id.exact == Rational(27, 4));
  CHECK(id.bound == doctest::Approx(6.75));
  CHECK(frac_cover_certified_ub(BoolMatrix::identity(3), 0.5).bound == doctest::Approx(8.0));
  CHECK_FALSE(frac_cover_certified_ub(BoolMatrix::identity(3), 0.5).exact);
  CHECK_THROWS_AS(frac_cover_certified_ub(BoolMatrix::identity(3), 0.0), DomainError);
  CHECK_THROWS_AS(frac_cover_certified_ub(BoolMatrix::identity(3), 1.0), DomainError);
  CHECK(frac_cover_certified_ub(BoolMatrix(3, 3)).bound == 0.0);
  // All-zero columns do not count towards Z.
  const auto zc = BoolMatrix::from_strings(std::vector<std::string>{"100", "100", "100"});
  CHECK(frac_cover_certified_ub(zc).z_max == 0);
  CHECK(frac_cover_certified_ub(zc).bound == 1.0);
}

TEST_CASE("certified bound dominates frc") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto m = gen_bernoulli({8, 0.3 + 0.015 * static_cast<double>(s), 70 + s});
    if (m.support_size() == 0) continue;
    const auto cert = frac_cover_certified_ub(m);
    const auto frc = frac_cover_exact(m).value;
    REQUIRE(cert.exact);
    CHECK(*cert.exact >= frc);
    for (double q : {0.1, 0.3, 0.6, 0.9}) CHECK(frac_cover_certified_ub(m, q).bound >= frc.get_d() * (1 - 1e-12));
  }
}

TEST_CASE("ndcc") {
  CHECK(ndcc(1, NdccKind::exact).value == 0.0);
  CHECK(ndcc(8, NdccKind::exact).value == 3.0);
  CHECK(ndcc(3, NdccKind::exact).value == doctest::Approx(1.585).epsilon(1e-3));
  CHECK(ndcc(0, NdccKind::upper).value == 0.0);
  CHECK(ndcc(5, NdccKind::upper).kind == NdccKind::upper);
  CHECK(to_string(NdccKind::upper) == "upper");
}

TEST_CASE("predicted cover bounds") {
  const auto a = predicted_cover_bounds(100, 0.5);
  CHECK(a.lambda == doctest::Approx(50));
  CHECK(a.frc.lo == doctest::Approx(67.957).epsilon(1e-4));
  CHECK(a.frc.hi == doctest::Approx(135.91).epsilon(1e-4));
  CHECK(a.frc.order_only);
  CHECK(a.rc.hi == 100);

  const double n6 = 1e6;
  const auto b = predicted_cover_bounds(1'000'000, 1 - std::log(n6) / n6);
  CHECK(b.frc.regime == "lambda-log");
  CHECK(b.frc.order_only);

  const auto c = predicted_cover_bounds(10000, 0.3);
  CHECK(c.rc.lo == 10000);
  CHECK(c.rc.hi == 10000);
  CHECK(c.rc.order_only);

  const auto small = predicted_cover_bounds(1'000'000, 1 - 2.0 / n6);
  CHECK(small.frc.regime == "lambda-small");
  CHECK(small.frc.lo == doctest::Approx(2.0));

  const auto l = predicted_cover_bounds(1000, 0.9);
  CHECK(l.log2_lb.lo == doctest::Approx(std::log2(1000.0)));
  const auto g = predicted_cover_bounds(1024, 1 - std::pow(1024.0, -1.25));
  CHECK(g.log2_lb.lo == doctest::Approx(0.75 * 10));
}

TEST_CASE("chain on small random matrices") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto m = gen_bernoulli({7, 0.2 + 0.02 * static_cast<double>(s), 200 + s});
    const auto r = bounds_report(m);
    CAPTURE(s);
    REQUIRE(r.frc_exact);
    REQUIRE(r.rc_exact);
    CHECK(chain_violations(r).empty());
  }
}

TEST_CASE("cover numbers are invariant under permutation and transpose") {
  Xoshiro256 rng(12);
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto m = gen_bernoulli({7, 0.55, 600 + s});
    const auto q = m.permuted(shuffled(7, rng), shuffled(7, rng));
    const auto rc = cover_exact(m).size();
    const auto frc = frac_cover_exact(m).value;
    CHECK(cover_exact(q).size() == rc);
    CHECK(cover_exact(m.transpose()).size() == rc);
    CHECK(frac_cover_exact(q).value == frc);
    CHECK(frac_cover_exact(m.transpose()).value == frc);
  }
}

TEST_CASE("bounds report on the k=3 permutahedron") {
  const auto r = bounds_report(gen_permutahedron(3));
  CHECK(r.supp_size == 24);
  CHECK(r.lb_supp_over_onerec == 4.0);
  CHECK(r.lb_supp_over_onerec_is_bound);
  REQUIRE(r.onerec_exact);
  CHECK(*r.onerec_exact == 6);
  CHECK(r.z_max == 2);
  CHECK(r.lb_fool_exact);
  CHECK(chain_violations(r).empty());
  CHECK(r.skipped.empty());

  BoundsOptions o;
  o.run_exact = false;
  const auto h = bounds_report(gen_permutahedron(3), o);
  CHECK_FALSE(h.frc_exact);
  CHECK_FALSE(h.lb_supp_over_onerec_is_bound);
  CHECK(h.rc_greedy);
}

TEST_CASE("chain_violations detects a broken report") {
  auto r = bounds_report(BoolMatrix::identity(4));
  CHECK(chain_violations(r).empty());
  r.lb_fool = 5;
  r.rc_exact = 3;
  const auto v = chain_violations(r);
  CHECK(std::find(v.begin(), v.end(), "fool > frc") != v.end());
  CHECK(std::find(v.begin(), v.end(), "rc < frc") != v.end());
}
