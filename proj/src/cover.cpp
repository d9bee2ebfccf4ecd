#include "rectlab/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rectlab/error.hpp"

namespace rectlab {

SupportIndex::SupportIndex(const BoolMatrix& m) : idx_(m.rows() * m.cols(), npos), cols_(m.cols()) {
  for (std::size_t x = 0; x < m.rows(); ++x)
    bits::for_each_set(m.row(x), [&](std::size_t y) {
      idx_[x * cols_ + y] = entries_.size();
      entries_.push_back({x, y});
    });
}

namespace {

// Close-by-One enumeration of the closed (row set, column set) pairs of a,
// with the columns of a as attributes.
class ClosureEnumerator {
 public:
  ClosureEnumerator(const BoolMatrix& a, std::size_t cap) : a_(a), cap_(cap) {
    col_rows_.assign(a.cols(), Bitset(a.rows()));
    for (std::size_t x = 0; x < a.rows(); ++x) bits::for_each_set(a.row(x), [&](std::size_t y) { col_rows_[y].set(x); });
  }

  void run() {
    Bitset all_rows = Bitset::full(a_.rows());
    Bitset intent = common_cols(all_rows);
    generate(all_rows, intent, 0);
  }

  std::vector<std::pair<Bitset, Bitset>> found;
  bool truncated = false;

 private:
  Bitset common_cols(const Bitset& rows) const {
    Bitset c = Bitset::full(a_.cols());
    rows.for_each([&](std::size_t x) { bits::and_assign(c.words(), a_.row(x)); });
    return c;
  }

  static bool same_prefix(const Bitset& a, const Bitset& b, std::size_t j) {
    const auto wa = a.words(), wb = b.words();
    const std::size_t full = j / kWordBits;
    for (std::size_t k = 0; k < full; ++k)
      if (wa[k] != wb[k]) return false;
    if (j % kWordBits) {
      const Word mask = (Word{1} << (j % kWordBits)) - 1;
      if ((wa[full] ^ wb[full]) & mask) return false;
    }
    return true;
  }

  void generate(const Bitset& extent, const Bitset& intent, std::size_t start) {
    if (truncated) return;
    if (extent.any() && intent.any()) {
      if (found.size() >= cap_) {
        truncated = true;
        return;
      }
      found.emplace_back(extent, intent);
    }
    for (std::size_t j = start; j < a_.cols(); ++j) {
      if (intent.test(j)) continue;
      Bitset c = extent;
      c &= col_rows_[j];
      Bitset d = common_cols(c);
      if (!same_prefix(d, intent, j)) continue;
      generate(c, d, j + 1);
      if (truncated) return;
    }
  }

  const BoolMatrix& a_;
  std::size_t cap_;
  std::vector<Bitset> col_rows_;
};

}  // namespace

RectangleSet enumerate_maximal_rectangles(const BoolMatrix& m, std::size_t cap) {
  RectangleSet rs;
  rs.supp = SupportIndex(m);
  const bool flip = m.cols() > m.rows();
  const BoolMatrix t = flip ? m.transpose() : BoolMatrix{};
  const BoolMatrix& a = flip ? t : m;

  ClosureEnumerator en(a, cap);
  en.run();
  rs.complete = !en.truncated;
  for (const auto& [ext, in] : en.found) {
    Rectangle r{ext.indices(), in.indices()};
    if (flip) r = r.transposed();
    Bitset cov(rs.supp.size());
    for (std::size_t x : r.rows)
      for (std::size_t y : r.cols) cov.set(rs.supp.index(x, y));
    rs.rects.push_back(std::move(r));
    rs.coverage.push_back(std::move(cov));
  }
  return rs;
}

bool is_cover(const RectangleSet& rs, const CoverSolution& c) {
  Bitset u(rs.supp.size());
  for (std::size_t i : c.chosen) {
    if (i >= rs.size()) return false;
    u |= rs.coverage[i];
  }
  return u.count() == rs.supp.size();
}

namespace {

void require_complete(const RectangleSet& rs, const char* who) {
  if (!rs.complete)
    throw SizeGuardError("complete rectangle enumeration", "raise the cap or use certified/greedy bounds",
                         std::string(who) + ": rectangle set is incomplete");
}

// Packing weights y >= 0 with y(R) <= 1 for every rectangle, taken from the
// duals of the floating-point covering LP and shrunk until feasibility holds
// with margin. Empty when the LP is skipped.
std::vector<double> packing_weights(const RectangleSet& rs);

// Iterative deepening over the target size: each round is a depth-first
// search for a cover within that budget, branching on the uncovered entry
// with the fewest admissible rectangles. Once a branch fails its rectangle is
// excluded from the later siblings. On larger supports each node also runs
// a few subgradient steps on the Lagrangian relaxation of the covering
// constraints (warm-started from the parent, the root from the LP duals);
// the resulting bound prunes the node and excludes every rectangle whose
// reduced cost alone would overshoot the budget.
class CoverSearch {
 public:
  CoverSearch(const RectangleSet& rs, std::uint64_t budget) : rs_(rs), budget_(budget) {
    const std::size_t e = rs.supp.size();
    covering_.resize(e);
    for (std::size_t r = 0; r < rs.size(); ++r) rs.coverage[r].for_each([&](std::size_t i) { covering_[i].push_back(r); });
    co_.assign(e, Bitset(e));
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t r : covering_[i]) co_[i] |= rs.coverage[r];
    root_lambda_ = packing_weights(rs);
    reduced_.assign(rs.size(), 0.0);
    local_.assign(rs.size(), kNone);
  }

  CoverSolution run(CoverSolution incumbent) {
    const Bitset all = Bitset::full(rs_.supp.size());
    const Bitset none(rs_.size());
    std::vector<std::size_t> chosen;
    for (std::size_t target = packing_bound(all); target < incumbent.chosen.size(); ++target) {
      target_ = target;
      if (search(all, none, root_lambda_, chosen, true)) {
        incumbent.chosen = found_;
        break;
      }
      if (exhausted_)
        throw SizeGuardError("cover node budget", "cover_greedy",
                             "cover_exact: budget of " + std::to_string(budget_) + " nodes exhausted");
    }
    std::sort(incumbent.chosen.begin(), incumbent.chosen.end());
    return incumbent;
  }

 private:
  static constexpr int kRootSteps = 300;
  static constexpr int kNodeSteps = 40;
  static constexpr double kSlack = 1e-6;
  static constexpr double kCloseCall = 0.6;
  static constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

  // Uncovered entries that pairwise share no rectangle; each needs its own.
  std::size_t packing_bound(const Bitset& uncovered) const {
    Bitset blocked(rs_.supp.size());
    std::size_t k = 0;
    uncovered.for_each([&](std::size_t i) {
      if (blocked.test(i)) return;
      ++k;
      blocked |= co_[i];
    });
    return k;
  }

  // L(λ) = Σ_{e∈U} λ_e + Σ_R min(0, 1 − λ(R∩U)) over admissible R is a lower
  // bound for every λ >= 0, since a cover uses each rectangle at most once.
  // Leaves the reduced costs 1 − λ(R∩U) of the best λ in reduced_.
  double lagrangian(const Bitset& uncovered, const Bitset& excluded, std::vector<double>& lambda, int steps,
                    double goal) {
    // Compact incidence between the uncovered entries and the admissible
    // rectangles meeting them.
    const std::vector<std::size_t> ents = uncovered.indices();
    std::vector<std::size_t> start{0}, touched;
    std::vector<std::uint32_t> inc;
    std::fill(local_.begin(), local_.end(), kNone);
    for (std::size_t e : ents) {
      for (std::size_t r : covering_[e]) {
        if (excluded.test(r)) continue;
        if (local_[r] == kNone) {
          local_[r] = static_cast<std::uint32_t>(touched.size());
          touched.push_back(r);
        }
        inc.push_back(local_[r]);
      }
      start.push_back(inc.size());
    }
    const std::size_t ne = ents.size();
    std::vector<double> lam(ne), best_lam(ne), grad(ne), red(touched.size()), best_red(touched.size());
    for (std::size_t k = 0; k < ne; ++k) lam[k] = lambda[ents[k]];
    double best = -1.0, mu = 2.0;
    int stale = 0;
    for (int it = 0;; ++it) {
      std::fill(red.begin(), red.end(), 1.0);
      double value = 0.0;
      for (std::size_t k = 0; k < ne; ++k) {
        value += lam[k];
        for (std::size_t t = start[k]; t < start[k + 1]; ++t) red[inc[t]] -= lam[k];
      }
      for (double v : red)
        if (v < 0.0) value += v;
      if (value > best) {
        best = value;
        best_lam = lam;
        best_red = red;
        stale = 0;
      } else if (++stale >= 5) {
        mu /= 2.0;
        stale = 0;
      }
      if (best > goal) break;
      // Close calls get four times the step allowance.
      if (it >= steps && (it >= 4 * steps || best < goal - kCloseCall)) break;
      double norm = 0.0;
      for (std::size_t k = 0; k < ne; ++k) {
        double g = 1.0;
        for (std::size_t t = start[k]; t < start[k + 1]; ++t)
          if (red[inc[t]] < 0.0) g -= 1.0;
        grad[k] = g;
        norm += g * g;
      }
      if (norm == 0.0) break;
      const double step = mu * (goal + 1.0 - value) / norm;
      for (std::size_t k = 0; k < ne; ++k) lam[k] = std::max(0.0, lam[k] + step * grad[k]);
    }
    for (std::size_t k = 0; k < ne; ++k) lambda[ents[k]] = best_lam[k];
    for (std::size_t t = 0; t < touched.size(); ++t) reduced_[touched[t]] = best_red[t];
    return best;
  }

  bool search(const Bitset& uncovered, const Bitset& excluded_in, std::vector<double> lambda,
              std::vector<std::size_t>& chosen, bool root = false) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (uncovered.none()) {
      found_ = chosen;
      return true;
    }
    const std::size_t remaining = target_ - chosen.size();
    if (packing_bound(uncovered) > remaining) return false;

    Bitset excluded = excluded_in;
    if (!lambda.empty()) {
      const double lb = lagrangian(uncovered, excluded, lambda, root ? kRootSteps : kNodeSteps,
                                   static_cast<double>(remaining) + kSlack);
      if (lb > static_cast<double>(remaining) + kSlack) return false;
      uncovered.for_each([&](std::size_t e) {
        for (std::size_t r : covering_[e])
          if (!excluded.test(r) && reduced_[r] > 0.0 && lb + reduced_[r] > static_cast<double>(remaining) + kSlack)
            excluded.set(r);
      });
    }

    std::size_t pick = rs_.supp.size(), fewest = static_cast<std::size_t>(-1);
    uncovered.for_each([&](std::size_t i) {
      std::size_t c = 0;
      for (std::size_t r : covering_[i]) c += excluded.test(r) ? 0 : 1;
      if (c < fewest) {
        fewest = c;
        pick = i;
      }
    });
    if (fewest == 0) return false;

    // Restricted to the uncovered entries, a rectangle contained in another
    // candidate can be swapped for it, so only maximal restrictions branch.
    struct Candidate {
      std::size_t gain;
      std::size_t rect;
      Bitset rest;
    };
    std::vector<Candidate> cand;
    for (std::size_t r : covering_[pick]) {
      if (excluded.test(r)) continue;
      Bitset rest = rs_.coverage[r];
      rest &= uncovered;
      cand.push_back({rest.count(), r, std::move(rest)});
    }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.gain > b.gain; });
    std::vector<const Candidate*> order;
    for (const auto& c : cand) {
      bool dominated = false;
      for (const Candidate* k : order)
        if (c.rest.is_subset_of(k->rest)) {
          dominated = true;
          break;
        }
      if (!dominated) order.push_back(&c);
    }
    for (const Candidate* c : order) {
      Bitset next = uncovered;
      next.subtract(c->rest);
      chosen.push_back(c->rect);
      const bool ok = search(next, excluded, lambda, chosen);
      chosen.pop_back();
      if (ok) return true;
      if (exhausted_) return false;
      excluded.set(c->rect);
    }
    return false;
  }

  const RectangleSet& rs_;
  std::uint64_t budget_;
  std::vector<std::vector<std::size_t>> covering_;
  std::vector<Bitset> co_;
  std::vector<double> root_lambda_, reduced_;
  std::vector<std::uint32_t> local_;
  std::vector<std::size_t> found_;
  std::size_t target_ = 0;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

CoverSolution cover_greedy(const RectangleSet& rs) {
  require_complete(rs, "cover_greedy");
  CoverSolution sol;
  Bitset uncovered = Bitset::full(rs.supp.size());
  while (uncovered.any()) {
    std::size_t best = rs.size(), gain = 0;
    for (std::size_t r = 0; r < rs.size(); ++r) {
      const std::size_t g = rs.coverage[r].and_count(uncovered);
      if (g > gain) {
        gain = g;
        best = r;
      }
    }
    if (best == rs.size()) throw Error("cover_greedy: support not covered by the rectangle set");
    sol.chosen.push_back(best);
    uncovered.subtract(rs.coverage[best]);
  }
  return sol;
}

CoverSolution cover_exact(const RectangleSet& rs, std::uint64_t budget) {
  require_complete(rs, "cover_exact");
  if (rs.size() > kCoverExactMaxRects)
    throw SizeGuardError("rectangles <= 5000", "cover_greedy",
                         "cover_exact: " + std::to_string(rs.size()) + " maximal rectangles");
  if (rs.supp.size() == 0) return {};
  CoverSearch search(rs, budget);
  return search.run(cover_greedy(rs));
}

CoverSolution cover_exact(const BoolMatrix& m, std::uint64_t budget) {
  return cover_exact(enumerate_maximal_rectangles(m), budget);
}

namespace {

void require_frac_size(const RectangleSet& rs) {
  require_complete(rs, "frac_cover_exact");
  if (rs.size() > kFracExactMaxRects || rs.supp.size() > kFracExactMaxSupport)
    throw SizeGuardError("rectangles <= 5000 and |supp| <= 2000", "frac_cover_certified_ub or frac_cover_float",
                         "frac_cover_exact: " + std::to_string(rs.size()) + " rectangles, " +
                             std::to_string(rs.supp.size()) + " 1-entries");
}

template <class T>
LinearProgram<T> covering_lp(const RectangleSet& rs) {
  LinearProgram<T> lp;
  lp.num_vars = rs.size();
  lp.objective.assign(rs.size(), T(1));
  std::vector<std::vector<std::pair<std::size_t, T>>> rows(rs.supp.size());
  for (std::size_t r = 0; r < rs.size(); ++r) rs.coverage[r].for_each([&](std::size_t e) { rows[e].emplace_back(r, T(1)); });
  for (auto& row : rows) lp.add_row(std::move(row), Sense::ge, T(1));
  return lp;
}

// Below this support size the entry packing alone prunes well enough.
constexpr std::size_t kLpBoundMinSupport = 32;

std::vector<double> packing_weights(const RectangleSet& rs) {
  if (rs.supp.size() < kLpBoundMinSupport || rs.size() > kFracExactMaxRects) return {};
  const auto res = solve_lp(covering_lp<double>(rs));
  if (res.status != LpStatus::optimal || res.duals.size() != rs.supp.size()) return {};
  std::vector<double> y(res.duals.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::max(res.duals[i], 0.0);
  double worst = 1.0;
  for (const auto& cov : rs.coverage) {
    double load = 0.0;
    cov.for_each([&](std::size_t e) { load += y[e]; });
    worst = std::max(worst, load);
  }
  for (double& v : y) v /= worst * (1.0 + 1e-9);
  return y;
}

}  // namespace

FracCoverSolution frac_cover_exact(const RectangleSet& rs) {
  require_frac_size(rs);
  FracCoverSolution sol;
  sol.weights.assign(rs.size(), Rational(0));
  if (rs.supp.size() == 0) return sol;
  const auto res = solve_lp_verified(covering_lp<Rational>(rs));
  if (res.status != LpStatus::optimal) throw Error("frac_cover_exact: LP did not reach optimality");
  sol.weights = res.x;
  sol.value = res.value;
  return sol;
}

FracCoverSolution frac_cover_exact(const BoolMatrix& m) { return frac_cover_exact(enumerate_maximal_rectangles(m)); }

double frac_cover_float(const RectangleSet& rs) {
  require_complete(rs, "frac_cover_float");
  if (rs.supp.size() == 0) return 0.0;
  const auto res = solve_lp(covering_lp<double>(rs));
  if (res.status != LpStatus::optimal) throw Error("frac_cover_float: LP did not reach optimality");
  return res.value;
}

PackingSolution fractional_packing_exact(const RectangleSet& rs) {
  require_frac_size(rs);
  PackingSolution sol;
  sol.y.assign(rs.supp.size(), Rational(0));
  if (rs.supp.size() == 0) return sol;
  LinearProgram<Rational> lp;
  lp.num_vars = rs.supp.size();
  lp.maximize = true;
  lp.objective.assign(lp.num_vars, Rational(1));
  for (std::size_t r = 0; r < rs.size(); ++r) {
    std::vector<std::pair<std::size_t, Rational>> row;
    rs.coverage[r].for_each([&](std::size_t e) { row.emplace_back(e, Rational(1)); });
    lp.add_row(std::move(row), Sense::le, Rational(1));
  }
  const auto res = solve_lp(lp);
  if (res.status != LpStatus::optimal) throw Error("fractional_packing_exact: LP did not reach optimality");
  sol.y = res.x;
  sol.value = res.value;
  return sol;
}

bool is_fractional_cover(const RectangleSet& rs, const std::vector<Rational>& w) {
  if (w.size() != rs.size()) return false;
  std::vector<Rational> load(rs.supp.size(), Rational(0));
  for (std::size_t r = 0; r < rs.size(); ++r) {
    if (sgn(w[r]) < 0) return false;
    if (sgn(w[r]) == 0) continue;
    rs.coverage[r].for_each([&](std::size_t e) { load[e] += w[r]; });
  }
  return std::all_of(load.begin(), load.end(), [](const Rational& v) { return v >= 1; });
}

SuppOverOnerec lb_supp_over_onerec(const BoolMatrix& m, std::size_t onerec_value, bool onerec_is_upper_bound) {
  const std::size_t supp = m.support_size();
  if (supp == 0) return {0.0, onerec_is_upper_bound};
  if (onerec_value < 1) throw DomainError("lb_supp_over_onerec: onerec must be >= 1 on a nonempty support");
  return {static_cast<double>(supp) / static_cast<double>(onerec_value), onerec_is_upper_bound};
}

CertifiedFracBound frac_cover_certified_ub(const BoolMatrix& m, std::optional<double> q) {
  if (q && !(*q > 0 && *q < 1)) throw DomainError("frac_cover_certified_ub: q must lie in (0,1)");
  CertifiedFracBound out;
  const MatrixStats s = stats(m);
  if (s.supp_size == 0) return out;
  for (std::size_t y = 0; y < m.cols(); ++y)
    if (s.z_per_column[y] < m.rows()) out.z_max = std::max(out.z_max, s.z_per_column[y]);
  const double z = static_cast<double>(out.z_max);
  if (!q) {
    if (out.z_max == 0) {
      out.q_used = 1.0;
      out.bound = 1.0;
      out.exact = Rational(1);
      return out;
    }
    out.q_used = 1.0 / (z + 1.0);
    // 1/(q(1-q)^Z) = (Z+1)^{Z+1} / Z^Z
    mpz_class num, den;
    mpz_ui_pow_ui(num.get_mpz_t(), out.z_max + 1, out.z_max + 1);
    mpz_ui_pow_ui(den.get_mpz_t(), out.z_max, out.z_max);
    out.exact = Rational(num, den);
    out.exact->canonicalize();
  } else {
    out.q_used = *q;
  }
  out.bound = out.exact ? out.exact->get_d() : 1.0 / (out.q_used * std::pow(1.0 - out.q_used, z));
  return out;
}

std::string_view to_string(NdccKind k) { return k == NdccKind::exact ? "exact" : "upper"; }

Ndcc ndcc(std::size_t cover_size, NdccKind kind) {
  if (cover_size == 0) return {0.0, kind};
  return {std::log2(static_cast<double>(cover_size)), kind};
}

CoverPrediction predicted_cover_bounds(std::size_t n, double p) {
  CoverPrediction out;
  const double nd = static_cast<double>(n);
  const double e = std::numbers::e;
  const double ln_n = std::log(nd);
  const double lambda = (1.0 - p) * nd;
  out.lambda = lambda;

  auto order_only = [](PredictedBounds& b, std::string regime, double lo, double hi) {
    b.regime = std::move(regime);
    b.lo = lo;
    b.hi = hi;
    b.order_only = true;
  };

  if (p <= 0.5) {
    order_only(out.rc, "linear", nd, nd);
    out.rc.note = "(1-o(1))n for 1/n << p <= 1/2";
  }
  if (p < 0.5) {
    order_only(out.frc, "linear", nd, nd);
    out.frc.note = "(1-o(1))n for 1/n << p <= 1/2";
  } else if (lambda >= 3 * ln_n) {
    order_only(out.frc, "lambda-large", p * e * lambda, e * lambda);
    if (p > 0.5) order_only(out.rc, "lambda-large", lambda, lambda * ln_n);
  } else if (lambda >= ln_n / 3) {
    const double c = std::max(1.0, lambda / ln_n);
    order_only(out.frc, "lambda-log", p * e * lambda, e * e * e * c * ln_n);
    if (p > 0.5) order_only(out.rc, "lambda-log", lambda, ln_n * ln_n);
    out.frc.note = "Theta(ln n)";
  } else if (lambda > 1) {
    const double ratio = std::log(ln_n / lambda);
    order_only(out.frc, "lambda-small", lambda, e * std::max(2 * lambda, ln_n / ratio));
    order_only(out.rc, "lambda-small", lambda, std::max(lambda * ln_n, ln_n * ln_n / ratio));
  } else {
    order_only(out.frc, "lambda-tiny", 1.0, kUnbounded);
    order_only(out.rc, "lambda-tiny", 1.0, kUnbounded);
    out.frc.note = out.rc.note = "no finite prediction for lambda <= 1";
  }

  const double pbar = 1.0 - p;
  const double log2n = std::log2(nd);
  if (pbar <= 0.5 && lambda >= 1) {
    order_only(out.log2_lb, "distinct-rows-linear", log2n, log2n);
  } else if (pbar > 0.5) {
    order_only(out.log2_lb, "sparse", log2n, log2n);
    out.log2_lb.note = "pbar > 1/2 is outside the stated range";
  } else {
    const double gamma = -std::log(pbar) / ln_n;
    if (gamma > 1 && gamma <= 1.5) {
      order_only(out.log2_lb, "distinct-rows-sublinear", (2 - gamma) * log2n, (2 - gamma) * log2n);
    } else {
      order_only(out.log2_lb, "unpredicted", 0.0, log2n);
      out.log2_lb.note = "pbar below n^-3/2";
    }
  }
  return out;
}

BoundsReport bounds_report(const BoolMatrix& m, const BoundsOptions& opts) {
  BoundsReport r;
  r.supp_size = m.support_size();
  r.lb_log2_rows = log2_distinct_rows_lb(m);
  const auto cert = frac_cover_certified_ub(m, opts.q);
  r.ub_frc_certified = cert.bound;
  r.ub_frc_certified_exact = cert.exact;
  r.q_used = cert.q_used;
  r.z_max = cert.z_max;
  if (r.supp_size == 0) {
    r.lb_supp_over_onerec_is_bound = r.lb_fool_exact = true;
    r.frc_exact = Rational(0);
    r.rc_exact = r.rc_greedy = r.onerec_exact = 0;
    return r;
  }

  const double density = static_cast<double>(r.supp_size) / static_cast<double>(m.rows() * m.cols());
  const std::size_t depth = opts.beam_depth.value_or(default_beam_depth(density));
  r.onerec_heuristic = onerec_heuristic(m, opts.beam_width, depth).size;

  if (opts.run_exact) {
    try {
      r.onerec_exact = onerec_exact(m).size;
    } catch (const SizeGuardError& e) {
      r.skipped.push_back(e.what());
    }
  }
  const auto lb = r.onerec_exact ? lb_supp_over_onerec(m, *r.onerec_exact, true)
                                 : lb_supp_over_onerec(m, r.onerec_heuristic, false);
  r.lb_supp_over_onerec = lb.value;
  r.lb_supp_over_onerec_is_bound = lb.is_bound;

  bool fool_done = false;
  if (opts.run_exact && r.supp_size <= kFoolExactMaxSupport) {
    const auto f = fool_exact(m, opts.fool_budget);
    r.lb_fool = f.size;
    r.lb_fool_exact = !f.lower_bound_only;
    fool_done = true;
  }
  if (!fool_done) {
    if (opts.run_exact) r.skipped.push_back("fool_exact: |supp| > 400, constructive used");
    r.lb_fool = fool_constructive(m, StableSetStrategy::min_degree).fooling.size();
  }

  const RectangleSet rs = enumerate_maximal_rectangles(m, opts.rectangle_cap);
  if (!rs.complete) {
    r.skipped.push_back("maximal rectangle enumeration hit the cap");
    return r;
  }
  r.rc_greedy = cover_greedy(rs).size();
  if (!opts.run_exact) return r;
  try {
    r.rc_exact = cover_exact(rs, opts.cover_budget).size();
  } catch (const SizeGuardError& e) {
    r.skipped.push_back(e.what());
  }
  try {
    r.frc_exact = frac_cover_exact(rs).value;
  } catch (const SizeGuardError& e) {
    r.skipped.push_back(e.what());
  }
  return r;
}

namespace {

// log2(k) <= q exactly, for k >= 1 and rational q >= 0: k^den <= 2^num.
bool log2_at_most(std::size_t k, const Rational& q) {
  if (k <= 1) return sgn(q) >= 0;
  if (sgn(q) <= 0) return false;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!num.fits_ulong_p() || !den.fits_ulong_p()) return std::log2(static_cast<double>(k)) <= q.get_d();
  mpz_class lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), k, den.get_ui());
  mpz_ui_pow_ui(rhs.get_mpz_t(), 2, num.get_ui());
  return lhs <= rhs;
}

}  // namespace

std::vector<std::string> chain_violations(const BoundsReport& r) {
  std::vector<std::string> v;
  if (!r.frc_exact) return v;
  const Rational& frc = *r.frc_exact;
  if (Rational(r.lb_fool) > frc) v.push_back("fool > frc");
  if (r.onerec_exact && Rational(r.supp_size) > frc * Rational(*r.onerec_exact)) v.push_back("supp/onerec > frc");
  const auto distinct = static_cast<std::size_t>(std::llround(std::exp2(r.lb_log2_rows)));
  if (!log2_at_most(distinct, frc)) v.push_back("log2(distinct rows) > frc");
  if (r.ub_frc_certified_exact ? *r.ub_frc_certified_exact < frc : r.ub_frc_certified < frc.get_d() * (1 - 1e-12))
    v.push_back("certified upper bound < frc");
  if (r.rc_exact) {
    if (Rational(*r.rc_exact) < frc) v.push_back("rc < frc");
    if (r.onerec_exact) {
      const long double cap = (1.0L + std::log(static_cast<long double>(*r.onerec_exact))) * frc.get_d();
      if (static_cast<long double>(*r.rc_exact) > cap * (1 + 1e-12L)) v.push_back("rc > (1 + ln onerec) frc");
      if (r.rc_greedy && static_cast<long double>(*r.rc_greedy) > cap * (1 + 1e-12L))
        v.push_back("greedy > (1 + ln onerec) frc");
    }
    if (r.rc_greedy && *r.rc_greedy < *r.rc_exact) v.push_back("greedy < rc");
  }
  return v;
}

}  // namespace rectlab
