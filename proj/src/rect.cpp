#include "rectlab/rect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "rectlab/error.hpp"

namespace rectlab {

bool Rectangle::contains(std::size_t x, std::size_t y) const {
  return std::binary_search(rows.begin(), rows.end(), x) && std::binary_search(cols.begin(), cols.end(), y);
}

bool is_one_rectangle(const BoolMatrix& m, const Rectangle& r) {
  for (std::size_t x : r.rows) {
    if (x >= m.rows()) return false;
    for (std::size_t y : r.cols)
      if (y >= m.cols() || !m(x, y)) return false;
  }
  return std::is_sorted(r.rows.begin(), r.rows.end()) && std::is_sorted(r.cols.begin(), r.cols.end());
}

bool is_maximal_rectangle(const BoolMatrix& m, const Rectangle& r) {
  if (r.empty() || !is_one_rectangle(m, r)) return false;
  return generate_from_rows(m, r.rows).cols == r.cols && generate_from_cols(m, r.cols).rows == r.rows;
}

namespace {

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> idx) {
  std::vector<std::size_t> v(idx.begin(), idx.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Rows of m that are all-ones on the column set given as packed words.
std::vector<std::size_t> rows_containing(const BoolMatrix& m, std::span<const Word> cols) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < m.rows(); ++x)
    if (bits::subset_of(cols, m.row(x))) out.push_back(x);
  return out;
}

std::size_t count_rows_containing(const BoolMatrix& m, std::span<const Word> cols) {
  std::size_t c = 0;
  for (std::size_t x = 0; x < m.rows(); ++x)
    if (bits::subset_of(cols, m.row(x))) ++c;
  return c;
}

}  // namespace

Rectangle generate_from_rows(const BoolMatrix& m, std::span<const std::size_t> rows) {
  if (rows.empty()) throw DomainError("generate_from_rows: row set must be nonempty");
  for (std::size_t x : rows)
    if (x >= m.rows()) throw DomainError("generate_from_rows: row index " + std::to_string(x) + " out of range");
  Bitset l = Bitset::full(m.cols());
  for (std::size_t x : rows) bits::and_assign(l.words(), m.row(x));
  return Rectangle{sorted_unique(rows), l.indices()};
}

Rectangle generate_from_cols(const BoolMatrix& m, std::span<const std::size_t> cols) {
  if (cols.empty()) throw DomainError("generate_from_cols: column set must be nonempty");
  for (std::size_t y : cols)
    if (y >= m.cols()) throw DomainError("generate_from_cols: column index " + std::to_string(y) + " out of range");
  Rectangle r;
  r.cols = sorted_unique(cols);
  for (std::size_t x = 0; x < m.rows(); ++x) {
    bool all = true;
    for (std::size_t y : r.cols)
      if (!m(x, y)) {
        all = false;
        break;
      }
    if (all) r.rows.push_back(x);
  }
  return r;
}

std::string_view to_string(OnerecMethod m) {
  switch (m) {
    case OnerecMethod::exact: return "exact";
    case OnerecMethod::single_line: return "single-line";
    case OnerecMethod::beam: return "beam";
  }
  return "?";
}

namespace {

// Depth-first enumeration of row subsets in lexicographic order with the
// running AND of the chosen rows. Strict improvement only, so the first
// optimum met (the lexicographically smallest K) is kept.
class ExactSearch {
 public:
  explicit ExactSearch(const BoolMatrix& m) : m_(m), stack_((m.rows() + 1) * m.words_per_row()) {}

  void run() {
    auto top = std::span<Word>(stack_).first(m_.words_per_row());
    const Bitset all = Bitset::full(m_.cols());
    std::copy(all.words().begin(), all.words().end(), top.begin());
    dfs(0, 0);
  }

  std::size_t best = 0;
  std::vector<std::size_t> best_rows;

 private:
  void dfs(std::size_t start, std::size_t depth) {
    const std::size_t w = m_.words_per_row();
    const std::span<const Word> cur(stack_.data() + depth * w, w);
    const std::span<Word> next(stack_.data() + (depth + 1) * w, w);
    const std::size_t n = m_.rows();
    for (std::size_t j = start; j < n; ++j) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < w; ++i) {
        next[i] = cur[i] & m_.row(j)[i];
        c += static_cast<std::size_t>(std::popcount(next[i]));
      }
      if (c == 0) continue;
      const std::size_t k = depth + 1;
      chosen_.push_back(j);
      if (k * c > best) {
        best = k * c;
        best_rows = chosen_;
      }
      if ((k + (n - j - 1)) * c > best) dfs(j + 1, depth + 1);
      chosen_.pop_back();
    }
  }

  const BoolMatrix& m_;
  std::vector<Word> stack_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

OnerecResult onerec_exact(const BoolMatrix& m) {
  const std::size_t side = std::min(m.rows(), m.cols());
  if (side > kOnerecExactMaxSide)
    throw SizeGuardError("min(rows, cols) <= 22", "onerec_heuristic",
                         "onerec_exact: smaller side is " + std::to_string(side));
  const bool flip = m.rows() > m.cols();
  const BoolMatrix t = flip ? m.transpose() : BoolMatrix{};
  const BoolMatrix& a = flip ? t : m;

  ExactSearch search(a);
  search.run();
  OnerecResult res;
  res.method = OnerecMethod::exact;
  res.size = search.best;
  if (search.best > 0) {
    res.witness = generate_from_rows(a, search.best_rows);
    if (flip) res.witness = res.witness.transposed();
  }
  return res;
}

OnerecResult best_single_line(const BoolMatrix& m) {
  OnerecResult res;
  res.method = OnerecMethod::single_line;
  for (std::size_t x = 0; x < m.rows(); ++x) {
    const std::size_t c = m.row_count(x);
    if (c > res.size) {
      res.size = c;
      res.witness = Rectangle{{x}, bits::to_indices(m.row(x))};
    }
  }
  std::vector<std::size_t> col_count(m.cols(), 0);
  for (std::size_t x = 0; x < m.rows(); ++x) bits::for_each_set(m.row(x), [&](std::size_t y) { ++col_count[y]; });
  for (std::size_t y = 0; y < m.cols(); ++y) {
    if (col_count[y] > res.size) {
      res.size = col_count[y];
      res.witness = generate_from_cols(m, std::vector<std::size_t>{y});
    }
  }
  return res;
}

namespace {

struct BeamEntry {
  std::vector<std::size_t> rows;  // generating rows, sorted
  std::vector<Word> cols;         // packed column set
  std::size_t ncols = 0;
};

struct BeamOutcome {
  OnerecResult best;   // best closed rectangle seen
  OnerecResult bulky;  // best with >= 2 rows and >= 2 columns
};

struct WordsHash {
  std::size_t operator()(const std::vector<Word>& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Word w : v) h = (h ^ w) * 0x100000001b3ULL;
    return h;
  }
};

BeamOutcome beam_search(const BoolMatrix& m, std::size_t beam_width, std::size_t b_max) {
  BeamOutcome out;
  out.best.method = out.bulky.method = OnerecMethod::beam;
  const std::size_t w = m.words_per_row();

  auto consider = [&](const BeamEntry& e) {
    const std::size_t k = count_rows_containing(m, e.cols);
    const std::size_t size = k * e.ncols;
    const bool improves = size > out.best.size;
    const bool improves_bulky = k >= 2 && e.ncols >= 2 && size > out.bulky.size;
    if (!improves && !improves_bulky) return;
    Rectangle r{rows_containing(m, e.cols), bits::to_indices(e.cols)};
    if (improves) {
      out.best.size = size;
      out.best.witness = r;
    }
    if (improves_bulky) {
      out.bulky.size = size;
      out.bulky.witness = std::move(r);
    }
  };

  // Level 1: single generating rows.
  struct Cand {
    std::size_t ncols;
    std::size_t parent;
    std::size_t row;
  };
  std::vector<BeamEntry> beam;
  {
    std::vector<Cand> cands;
    for (std::size_t x = 0; x < m.rows(); ++x) {
      const std::size_t c = m.row_count(x);
      if (c > 0) cands.push_back({c, 0, x});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.ncols > b.ncols; });
    std::unordered_set<std::vector<Word>, WordsHash> seen;
    for (const Cand& c : cands) {
      if (beam.size() >= beam_width) break;
      std::vector<Word> cols(m.row(c.row).begin(), m.row(c.row).end());
      if (!seen.insert(cols).second) continue;
      beam.push_back({{c.row}, std::move(cols), c.ncols});
    }
  }
  for (const auto& e : beam) consider(e);

  std::vector<Word> tmp(w);
  for (std::size_t level = 2; level <= b_max && !beam.empty(); ++level) {
    std::vector<Cand> cands;
    for (std::size_t pi = 0; pi < beam.size(); ++pi) {
      const auto& e = beam[pi];
      for (std::size_t x = 0; x < m.rows(); ++x) {
        if (std::binary_search(e.rows.begin(), e.rows.end(), x)) continue;
        const std::size_t c = bits::and_count(e.cols, m.row(x));
        if (c > 0) cands.push_back({c, pi, x});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.ncols > b.ncols; });
    std::vector<BeamEntry> next;
    std::unordered_set<std::vector<Word>, WordsHash> seen;
    for (const Cand& c : cands) {
      if (next.size() >= beam_width) break;
      const auto& parent = beam[c.parent];
      for (std::size_t i = 0; i < w; ++i) tmp[i] = parent.cols[i] & m.row(c.row)[i];
      if (!seen.insert(tmp).second) continue;
      BeamEntry e{parent.rows, tmp, c.ncols};
      e.rows.insert(std::upper_bound(e.rows.begin(), e.rows.end(), c.row), c.row);
      next.push_back(std::move(e));
    }
    for (const auto& e : next) consider(e);
    beam = std::move(next);
  }
  return out;
}

void keep_better(OnerecResult& best, OnerecResult cand) {
  if (cand.size > best.size) best = std::move(cand);
}

}  // namespace

OnerecResult best_bulky_beam(const BoolMatrix& m, std::size_t beam_width, std::size_t b_max) {
  if (beam_width < 1) throw DomainError("beam_width must be >= 1");
  OnerecResult best = beam_search(m, beam_width, b_max).bulky;
  OnerecResult t = beam_search(m.transpose(), beam_width, b_max).bulky;
  t.witness = t.witness.transposed();
  keep_better(best, std::move(t));
  return best;
}

OnerecResult onerec_heuristic(const BoolMatrix& m, std::size_t beam_width, std::size_t b_max) {
  if (beam_width < 1) throw DomainError("beam_width must be >= 1");
  OnerecResult best = best_single_line(m);
  keep_better(best, beam_search(m, beam_width, b_max).best);
  OnerecResult t = beam_search(m.transpose(), beam_width, b_max).best;
  t.witness = t.witness.transposed();
  keep_better(best, std::move(t));
  return best;
}

std::size_t default_beam_depth(double p) {
  if (p > 1.0 / std::numbers::e && p < 1.0) return static_cast<std::size_t>(std::ceil(-1.0 / std::log(p))) + 3;
  return 3;
}

AParams compute_a(double p) {
  constexpr double inv_e = 1.0 / std::numbers::e;
  // p = 1/e is admitted up to rounding of the caller's literal.
  if (!(p >= inv_e * (1 - 1e-15) && p < 1.0)) throw DomainError("compute_a: p must lie in [1/e, 1)");
  double t = -1.0 / std::log(p);  // log_{1/p} e
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-12 * t) t = r;
  AParams out;
  out.p = p;
  out.a_minus = static_cast<int>(std::floor(t));
  out.a_plus = static_cast<int>(std::ceil(t));
  out.a = out.a_minus;
  if (out.a_plus != out.a_minus) {
    const double b = out.a_minus;
    const bool tie = std::abs(p - b / (b + 1.0)) <= 1e-12 * p;
    const double lhs = std::log(b) + b * std::log(p);
    const double rhs = std::log(b + 1.0) + (b + 1.0) * std::log(p);
    if (!tie && rhs > lhs) out.a = out.a_plus;
  }
  out.p_pow_a = std::pow(p, out.a);
  return out;
}

OnerecPrediction predicted_onerec(std::size_t n, double p) {
  const double nd = static_cast<double>(n);
  if (n == 0 || !(p >= 5.0 / nd && p < 1.0)) throw DomainError("predicted_onerec: need 5/n <= p < 1");
  OnerecPrediction pred;
  if (p <= 1.0 / std::numbers::e) {
    pred.value = p * nd;
  } else {
    const AParams a = compute_a(p);
    pred.a = a;
    pred.value = a.a * a.p_pow_a * nd;
    pred.heuristic_regime = (1.0 - p) * nd < kLambdaHeuristicThreshold;
  }
  if (p > 0.5) {
    const double lambda = (1.0 - p) * nd;
    pred.dense_value = nd * nd / (std::numbers::e * lambda);
  }
  return pred;
}

PredictedBounds OnerecPrediction::as_bounds(double rel_lo, double rel_hi) const {
  PredictedBounds b;
  b.regime = a ? "generated-by-a-rows" : "single-line";
  b.exact = value;
  b.lo = rel_lo * value;
  b.hi = rel_hi * value;
  b.order_only = true;
  if (heuristic_regime) b.note = "heuristic regime: lambda below threshold";
  return b;
}

}  // namespace rectlab
