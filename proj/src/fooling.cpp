#include "rectlab/fooling.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "rectlab/error.hpp"
#include "rectlab/rng.hpp"

namespace rectlab {

FoolingCheck is_fooling_set(const BoolMatrix& m, const std::vector<Entry>& entries) {
  auto fail = [](FoolingViolation v, std::size_t i, std::size_t j, std::string msg) {
    return FoolingCheck{false, v, i, j, std::move(msg)};
  };
  auto pos = [](const Entry& e) { return "(" + std::to_string(e.row) + "," + std::to_string(e.col) + ")"; };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (e.row >= m.rows() || e.col >= m.cols() || !m(e.row, e.col))
      return fail(FoolingViolation::zero_entry, i, i, "entry " + pos(e) + " is not a 1-entry");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const Entry& a = entries[i];
      const Entry& b = entries[j];
      if (a.row == b.row) return fail(FoolingViolation::repeated_row, i, j, pos(a) + " and " + pos(b) + " share a row");
      if (a.col == b.col)
        return fail(FoolingViolation::repeated_col, i, j, pos(a) + " and " + pos(b) + " share a column");
      if (m(a.row, b.col) && m(b.row, a.col))
        return fail(FoolingViolation::cross_product, i, j, pos(a) + " and " + pos(b) + " have both cross entries 1");
    }
  }
  return {};
}

namespace {

// Bitset branch-and-bound maximum clique with greedy colouring bounds.
class MaxClique {
 public:
  MaxClique(std::vector<Bitset> adj, std::uint64_t budget) : adj_(std::move(adj)), budget_(budget) {}

  void run() {
    const std::size_t n = adj_.size();
    Bitset p = Bitset::full(n);
    std::vector<std::size_t> cur;
    expand(p, cur);
  }

  std::vector<std::size_t> best;
  std::uint64_t nodes = 0;
  bool exhausted = false;

 private:
  void colour(const Bitset& p, std::vector<std::size_t>& order, std::vector<std::size_t>& colours) const {
    Bitset uncoloured = p;
    Bitset q;
    std::size_t k = 0;
    while (uncoloured.any()) {
      ++k;
      q = uncoloured;
      while (q.any()) {
        const std::size_t v = q.find_first();
        q.reset(v);
        uncoloured.reset(v);
        q.subtract(adj_[v]);
        order.push_back(v);
        colours.push_back(k);
      }
    }
  }

  void expand(Bitset& p, std::vector<std::size_t>& cur) {
    if (exhausted) return;
    if (++nodes > budget_) {
      exhausted = true;
      return;
    }
    std::vector<std::size_t> order, colours;
    colour(p, order, colours);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + colours[i] <= best.size()) return;
      const std::size_t v = order[i];
      cur.push_back(v);
      Bitset np = p;
      np &= adj_[v];
      if (np.none()) {
        if (cur.size() > best.size()) best = cur;
      } else {
        expand(np, cur);
      }
      cur.pop_back();
      p.reset(v);
      if (exhausted) return;
    }
  }

  std::vector<Bitset> adj_;
  std::uint64_t budget_;
};

}  // namespace

FoolExactResult fool_exact(const BoolMatrix& m, std::uint64_t budget, bool allow_large) {
  std::vector<Entry> ones;
  for (std::size_t x = 0; x < m.rows(); ++x)
    bits::for_each_set(m.row(x), [&](std::size_t y) { ones.push_back({x, y}); });
  if (ones.size() > kFoolExactMaxSupport && !allow_large)
    throw SizeGuardError("|supp| <= 400", "fool_constructive or explicit override",
                         "fool_exact: support has " + std::to_string(ones.size()) + " entries");
  FoolExactResult res;
  if (ones.empty()) return res;

  const std::size_t v = ones.size();
  auto compatible = [&](const Entry& a, const Entry& b) {
    return a.row != b.row && a.col != b.col && !(m(a.row, b.col) && m(b.row, a.col));
  };
  std::vector<std::size_t> degree(v, 0);
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j)
      if (compatible(ones[i], ones[j])) {
        ++degree[i];
        ++degree[j];
      }
  // Relabel by degree, descending; colouring scans low labels first.
  std::vector<std::size_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  std::vector<Bitset> adj(v, Bitset(v));
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j)
      if (compatible(ones[perm[i]], ones[perm[j]])) {
        adj[i].set(j);
        adj[j].set(i);
      }

  MaxClique mc(std::move(adj), budget);
  mc.run();
  res.nodes = mc.nodes;
  res.lower_bound_only = mc.exhausted;
  for (std::size_t k : mc.best) res.witness.entries.push_back(ones[perm[k]]);
  std::sort(res.witness.entries.begin(), res.witness.entries.end());
  res.size = res.witness.size();
  return res;
}

Matching max_matching(const BoolMatrix& m) {
  const std::size_t nl = m.rows(), nr = m.cols();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> match_l(nl, kNone), match_r(nr, kNone), dist(nl);

  // Greedy start.
  for (std::size_t x = 0; x < nl; ++x) {
    bits::for_each_set(m.row(x), [&](std::size_t y) {
      if (match_l[x] == kNone && match_r[y] == kNone) {
        match_l[x] = y;
        match_r[y] = x;
      }
    });
  }

  auto bfs = [&]() {
    std::vector<std::size_t> queue;
    bool found = false;
    for (std::size_t x = 0; x < nl; ++x) {
      if (match_l[x] == kNone) {
        dist[x] = 0;
        queue.push_back(x);
      } else {
        dist[x] = kNone;
      }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t x = queue[qi];
      bits::for_each_set(m.row(x), [&](std::size_t y) {
        const std::size_t x2 = match_r[y];
        if (x2 == kNone) {
          found = true;
        } else if (dist[x2] == kNone) {
          dist[x2] = dist[x] + 1;
          queue.push_back(x2);
        }
      });
    }
    return found;
  };

  auto dfs = [&](auto&& self, std::size_t x) -> bool {
    const auto row = m.row(x);
    for (std::size_t k = 0; k < row.size(); ++k) {
      Word w = row[k];
      while (w) {
        const std::size_t y = k * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
        w &= w - 1;
        const std::size_t x2 = match_r[y];
        if (x2 == kNone || (dist[x2] == dist[x] + 1 && self(self, x2))) {
          match_l[x] = y;
          match_r[y] = x;
          return true;
        }
      }
    }
    dist[x] = kNone;
    return false;
  };

  while (bfs()) {
    for (std::size_t x = 0; x < nl; ++x)
      if (match_l[x] == kNone) dfs(dfs, x);
  }

  Matching out;
  for (std::size_t x = 0; x < nl; ++x)
    if (match_l[x] != kNone) out.pairs.push_back({x, match_l[x]});
  return out;
}

bool is_matching(const BoolMatrix& m, const Matching& mt) {
  std::vector<bool> used_r(m.rows(), false), used_c(m.cols(), false);
  for (const Entry& e : mt.pairs) {
    if (e.row >= m.rows() || e.col >= m.cols() || !m(e.row, e.col)) return false;
    if (used_r[e.row] || used_c[e.col]) return false;
    used_r[e.row] = used_c[e.col] = true;
  }
  return true;
}

ConflictGraph ConflictGraph::empty(std::size_t m) {
  ConflictGraph g;
  g.m = m;
  g.adjacency.assign(m, Bitset(m));
  return g;
}

void ConflictGraph::add_edge(std::size_t k, std::size_t l) {
  adjacency[k].set(l);
  adjacency[l].set(k);
}

std::size_t ConflictGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adjacency) twice += a.count();
  return twice / 2;
}

ConflictGraph conflict_graph(const BoolMatrix& m, const Matching& mt) {
  if (!is_matching(m, mt)) throw DomainError("conflict_graph: not a matching of the matrix");
  ConflictGraph g = ConflictGraph::empty(mt.size());
  for (std::size_t k = 0; k < mt.size(); ++k)
    for (std::size_t l = k + 1; l < mt.size(); ++l) {
      const Entry& a = mt.pairs[k];
      const Entry& b = mt.pairs[l];
      if (m(a.row, b.col) && m(b.row, a.col)) g.add_edge(k, l);
    }
  return g;
}

std::vector<std::size_t> stable_set(const ConflictGraph& g, StableSetStrategy strategy, std::uint64_t seed) {
  std::vector<std::size_t> out;
  if (strategy == StableSetStrategy::random_order) {
    std::vector<std::size_t> order(g.m);
    std::iota(order.begin(), order.end(), 0);
    Xoshiro256 rng(seed);
    stable_shuffle(order, rng);
    Bitset blocked(g.m);
    for (std::size_t v : order) {
      if (blocked.test(v)) continue;
      out.push_back(v);
      blocked |= g.adjacency[v];
    }
  } else {
    Bitset alive = Bitset::full(g.m);
    std::vector<std::size_t> deg(g.m);
    for (std::size_t v = 0; v < g.m; ++v) deg[v] = g.degree(v);
    while (alive.any()) {
      std::size_t best = g.m;
      alive.for_each([&](std::size_t v) {
        if (best == g.m || deg[v] < deg[best]) best = v;
      });
      out.push_back(best);
      Bitset removed = g.adjacency[best];
      removed &= alive;
      removed.set(best);
      alive.subtract(removed);
      removed.for_each([&](std::size_t r) {
        Bitset nb = g.adjacency[r];
        nb &= alive;
        nb.for_each([&](std::size_t u) { --deg[u]; });
      });
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double turan_bound(const ConflictGraph& g) {
  double s = 0;
  for (std::size_t v = 0; v < g.m; ++v) s += 1.0 / static_cast<double>(g.degree(v) + 1);
  return s;
}

double stable_set_bound_dense(std::size_t m, double q) {
  const double qm = q * static_cast<double>(m);
  if (!(q > 0 && q < 1) || qm <= std::numbers::e) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * (std::log(qm) - std::log(std::log(qm))) / -std::log1p(-q);
}

double stable_set_bound_greedy(std::size_t m, double q) {
  if (!(q > 0 && q < 1) || m == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(static_cast<double>(m)) / -std::log1p(-q);
}

ConstructiveFoolResult fool_constructive(const BoolMatrix& m, StableSetStrategy strategy, std::uint64_t seed) {
  ConstructiveFoolResult res;
  const Matching mt = max_matching(m);
  const ConflictGraph g = conflict_graph(m, mt);
  res.matching_size = mt.size();
  res.conflict_edges = g.edge_count();
  res.turan = turan_bound(g);
  for (std::size_t k : stable_set(g, strategy, seed)) res.fooling.entries.push_back(mt.pairs[k]);
  return res;
}

namespace {

class FoolSearch {
 public:
  FoolSearch(const BoolMatrix& m, const FoolSearchOptions& opts) : m_(m), opts_(opts), rng_(opts.seed) {
    zero_rows_of_col_.resize(m.cols());
    zero_cols_of_row_.resize(m.rows());
    for (std::size_t x = 0; x < m.rows(); ++x)
      for (std::size_t y = 0; y < m.cols(); ++y)
        if (!m(x, y)) {
          zero_cols_of_row_[x].push_back(y);
          zero_rows_of_col_[y].push_back(x);
        }
    used_row_.assign(m.rows(), false);
    used_col_.assign(m.cols(), false);
  }

  FoolSearchResult run() {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };
    FoolSearchResult res;
    const std::size_t supp = m_.support_size();
    if (supp == 0) return res;
    deadline_ = [&, start] { return std::chrono::duration<double>(clock::now() - start).count() > opts_.time_limit_s; };
    // A single 1-entry is always a fooling set.
    while (true) {
      const std::size_t x = static_cast<std::size_t>(rng_.below(m_.rows()));
      const std::size_t y = static_cast<std::size_t>(rng_.below(m_.cols()));
      if (m_(x, y)) {
        best_ = {{x, y}};
        break;
      }
    }
    while (best_.size() < opts_.target && !timed_out_) {
      ++res.restarts;
      std::size_t x, y;
      do {
        x = static_cast<std::size_t>(rng_.below(m_.rows()));
        y = static_cast<std::size_t>(rng_.below(m_.cols()));
      } while (!m_(x, y));
      restart_nodes_ = 0;
      push({x, y});
      dfs();
      pop();
      if (deadline_()) timed_out_ = true;
    }
    res.best.entries = best_;
    std::sort(res.best.entries.begin(), res.best.entries.end());
    res.nodes = total_nodes_;
    res.seconds = elapsed();
    res.reached_target = best_.size() >= opts_.target;
    return res;
  }

 private:
  void push(Entry e) {
    cur_.push_back(e);
    used_row_[e.row] = used_col_[e.col] = true;
    if (cur_.size() > best_.size()) best_ = cur_;
  }
  void pop() {
    used_row_[cur_.back().row] = used_col_[cur_.back().col] = false;
    cur_.pop_back();
  }

  bool extends(std::size_t x, std::size_t y) const {
    if (used_row_[x] || used_col_[y] || !m_(x, y)) return false;
    for (const Entry& e : cur_)
      if (m_(e.row, y) && m_(x, e.col)) return false;
    return true;
  }

  // Every extension (x, y) must hit the first pair: y is a zero column of
  // row x0 or x is a zero row of column y0.
  std::vector<Entry> candidates() const {
    std::vector<Entry> out;
    const Entry& e0 = cur_.front();
    for (std::size_t y : zero_cols_of_row_[e0.row]) {
      // Constraints not yet met by y must be met through x.
      const Entry* open = nullptr;
      for (const Entry& e : cur_)
        if (m_(e.row, y)) {
          open = &e;
          break;
        }
      if (open == nullptr) {
        for (std::size_t x = 0; x < m_.rows(); ++x)
          if (extends(x, y)) out.push_back({x, y});
      } else {
        for (std::size_t x : zero_rows_of_col_[open->col])
          if (extends(x, y)) out.push_back({x, y});
      }
    }
    for (std::size_t x : zero_rows_of_col_[e0.col]) {
      const Entry* open = nullptr;
      for (const Entry& e : cur_)
        if (m_(x, e.col)) {
          open = &e;
          break;
        }
      auto fresh = [&](std::size_t y) { return m_(e0.row, y); };  // not produced by the first loop
      if (open == nullptr) {
        for (std::size_t y = 0; y < m_.cols(); ++y)
          if (fresh(y) && extends(x, y)) out.push_back({x, y});
      } else {
        for (std::size_t y : zero_cols_of_row_[open->row])
          if (fresh(y) && extends(x, y)) out.push_back({x, y});
      }
    }
    return out;
  }

  void dfs() {
    if (best_.size() >= opts_.target || timed_out_) return;
    if (++restart_nodes_ > opts_.restart_nodes) return;
    ++total_nodes_;
    if ((total_nodes_ & 1023U) == 0 && deadline_()) {
      timed_out_ = true;
      return;
    }
    auto cands = candidates();
    stable_shuffle(cands, rng_);
    for (const Entry& e : cands) {
      push(e);
      dfs();
      pop();
      if (best_.size() >= opts_.target || timed_out_ || restart_nodes_ > opts_.restart_nodes) return;
    }
  }

  const BoolMatrix& m_;
  FoolSearchOptions opts_;
  Xoshiro256 rng_;
  std::vector<std::vector<std::size_t>> zero_rows_of_col_, zero_cols_of_row_;
  std::vector<bool> used_row_, used_col_;
  std::vector<Entry> cur_, best_;
  std::uint64_t restart_nodes_ = 0, total_nodes_ = 0;
  bool timed_out_ = false;
  std::function<bool()> deadline_;
};

}  // namespace

FoolSearchResult fool_random_search(const BoolMatrix& m, const FoolSearchOptions& opts) {
  FoolSearch search(m, opts);
  FoolSearchResult res = search.run();
  if (!is_fooling_set(m, res.best)) throw Error("fool_random_search: internal error, unverified result");
  return res;
}

double log_expected_fooling_count(std::size_t n, double p, std::size_t r) {
  if (r < 1 || r > n) throw DomainError("log_expected_fooling_count: need 1 <= r <= n");
  if (!(p > 0 && p < 1)) throw DomainError("log_expected_fooling_count: need 0 < p < 1");
  const double nd = static_cast<double>(n), rd = static_cast<double>(r);
  const double log_binom = std::lgamma(nd + 1) - std::lgamma(rd + 1) - std::lgamma(nd - rd + 1);
  return std::lgamma(rd + 1) + 2 * log_binom + rd * std::log(p) + rd * (rd - 1) / 2 * std::log1p(-p * p);
}

double fool_r_plus(std::size_t n, double p) {
  const double nd = static_cast<double>(n);
  return 2 * std::log(p * nd * nd) / -std::log1p(-p * p);
}

double fool_r_minus(std::size_t n, double p) {
  const double inv_log = 1.0 / -std::log1p(-p * p);
  const double l = std::log(p * static_cast<double>(n) * static_cast<double>(n)) * inv_log;
  if (!(l > 1)) return std::numeric_limits<double>::quiet_NaN();
  return 2 * l - 2 * std::log(l) * inv_log;
}

PredictedBounds predicted_fool_bounds(std::size_t n, double p, std::optional<double> pbar_exponent) {
  const double nd = static_cast<double>(n);
  PredictedBounds b;
  if (pbar_exponent) p = 1.0 - std::pow(nd, -*pbar_exponent);
  if (!(p > 0 && p < 1) || n < 2) {
    b.regime = "degenerate";
    b.note = "outside 0 < p < 1";
    return b;
  }
  const double a = pbar_exponent ? *pbar_exponent : std::log(1.0 / (1.0 - p)) / std::log(nd);

  if (a >= 4) {
    b.regime = "saturated";
    b.lo = b.hi = 1;
    b.exact = 1;
    b.order_only = true;
    b.note = "pbar <= n^-4: the matrix is all-ones a.a.s.";
  } else if (a >= kFoolPolynomialExponent) {
    b.regime = "constant";
    // 4/a within rounding of an integer counts as that integer.
    const double q = 4.0 / a;
    const double fq = std::floor(q + 1e-9);
    b.hi = fq + 1;
    if (a < 1) {
      b.lo = b.hi;
      b.exact = b.hi;
    } else {
      b.lo = 1;
      b.note = "upper bound only for a >= 1";
    }
  } else if (p * p * nd >= std::log(nd)) {
    b.regime = "mid";
    b.hi = fool_r_plus(n, p);
    const double rm = fool_r_minus(n, p);
    b.lo = std::isnan(rm) ? 1.0 : std::max(1.0, rm);
    b.order_only = true;
  } else if (p * std::sqrt(nd) < kFoolSparseScale) {
    b.regime = p >= std::pow(nd, -1.5) ? "sparse-matching" : "below-range";
    b.lo = b.hi = 1;
    b.relative_to_matching = true;
    b.order_only = true;
    b.note = "fool = (1-o(1)) * nu(H_f)";
  } else {
    b.regime = "transition";
    const double q = p * p;
    b.lo = 2 * nd / (q * (nd - 1) + 1);
    b.hi = nd;
    b.order_only = true;
    b.note = "Theta(n); lower value is the expected Turan bound";
  }
  return b;
}

}  // namespace rectlab
