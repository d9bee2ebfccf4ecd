#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rectlab/bits.hpp"
#include "rectlab/boolmat.hpp"
#include "rectlab/predicted.hpp"

namespace rectlab {

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Entry&, const Entry&) = default;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Set of 1-entries with distinct rows and columns in which every pair has
/// a zero among its two cross entries.
struct FoolingSet {
  std::vector<Entry> entries;
  std::size_t size() const { return entries.size(); }
};

enum class FoolingViolation { none, zero_entry, repeated_row, repeated_col, cross_product };

struct FoolingCheck {
  bool ok = true;
  FoolingViolation violation = FoolingViolation::none;
  /// Indices into the checked entry list; `second` is unused for zero_entry.
  std::size_t first = 0;
  std::size_t second = 0;
  std::string message;

  explicit operator bool() const { return ok; }
};

/// Verifies a fooling set and reports the first violation found, scanning
/// entries in order and pairs (i, j) with i < j lexicographically.
FoolingCheck is_fooling_set(const BoolMatrix& m, const std::vector<Entry>& entries);
inline FoolingCheck is_fooling_set(const BoolMatrix& m, const FoolingSet& f) { return is_fooling_set(m, f.entries); }

struct FoolExactResult {
  std::size_t size = 0;
  FoolingSet witness;
  /// Budget ran out: `size` is the best found and only a lower bound.
  bool lower_bound_only = false;
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kFoolExactMaxSupport = 400;
inline constexpr std::uint64_t kDefaultFoolBudget = 10'000'000;

/// Maximum fooling set by branch-and-bound maximum clique (greedy colouring
/// bounds) on the compatibility graph of the 1-entries. Throws
/// SizeGuardError when |supp| > 400 unless `allow_large`.
FoolExactResult fool_exact(const BoolMatrix& m, std::uint64_t budget = kDefaultFoolBudget, bool allow_large = false);

/// Matching in the bipartite graph H_f whose edges are the 1-entries.
struct Matching {
  std::vector<Entry> pairs;
  std::size_t size() const { return pairs.size(); }
};

/// Maximum-cardinality matching (Hopcroft–Karp). Pairs sorted by row.
Matching max_matching(const BoolMatrix& m);
bool is_matching(const BoolMatrix& m, const Matching& mt);

/// Graph on the edges e_0..e_{m-1} of a matching; e_k ~ e_l iff they span
/// an all-ones 2×2 submatrix.
struct ConflictGraph {
  std::size_t m = 0;
  std::vector<Bitset> adjacency;

  bool adjacent(std::size_t k, std::size_t l) const { return adjacency[k].test(l); }
  std::size_t degree(std::size_t k) const { return adjacency[k].count(); }
  std::size_t edge_count() const;

  static ConflictGraph empty(std::size_t m);
  void add_edge(std::size_t k, std::size_t l);
};

/// Throws DomainError if `mt` is not a matching of m.
ConflictGraph conflict_graph(const BoolMatrix& m, const Matching& mt);

enum class StableSetStrategy { min_degree, random_order };

/// Maximal stable set. min_degree repeatedly takes a vertex of minimum
/// degree in the remaining graph and deletes its closed neighbourhood;
/// random_order scans a seeded random permutation. Result sorted.
std::vector<std::size_t> stable_set(const ConflictGraph& g, StableSetStrategy strategy, std::uint64_t seed = 0);

/// Σ_v 1/(deg(v)+1).
double turan_bound(const ConflictGraph& g);
/// 2(ln(qm) − ln ln(qm)) / ln(1/(1−q)); NaN outside its domain (qm <= e).
double stable_set_bound_dense(std::size_t m, double q);
/// ln(m) / ln(1/(1−q)).
double stable_set_bound_greedy(std::size_t m, double q);

struct ConstructiveFoolResult {
  FoolingSet fooling;
  std::size_t matching_size = 0;
  std::size_t conflict_edges = 0;
  double turan = 0;
};

/// Maximum matching, its conflict graph, a stable set there, and the
/// induced cross-free submatching.
ConstructiveFoolResult fool_constructive(const BoolMatrix& m, StableSetStrategy strategy, std::uint64_t seed = 0);

struct FoolSearchOptions {
  std::size_t target = 0;
  std::uint64_t seed = 0;
  double time_limit_s = 60.0;
  /// Node budget per restart.
  std::uint64_t restart_nodes = 200'000;
};

struct FoolSearchResult {
  FoolingSet best;
  std::size_t restarts = 0;
  std::uint64_t nodes = 0;
  double seconds = 0;
  bool reached_target = false;
};

/// Randomized-restart depth-first search for a fooling set of size
/// `target` in a dense matrix. Extensions of a partial set are enumerated
/// through the zero lists of its rows and columns, which makes the search
/// efficient when zeros are sparse. Always returns a verified set.
FoolSearchResult fool_random_search(const BoolMatrix& m, const FoolSearchOptions& opts);

/// ln E X_r with E X_r = r!·C(n,r)²·p^r·δ^{C(r,2)}, δ = 1 − p²: the
/// expected number of size-r fooling sets of an n×n Bernoulli(p) matrix.
/// Requires 1 <= r <= n and 0 < p < 1.
double log_expected_fooling_count(std::size_t n, double p, std::size_t r);

/// r₊ = 2 log_{1/δ}(pn²) and r₋ = r₊ − 2 log_{1/δ} log_{1/δ}(pn²).
double fool_r_plus(std::size_t n, double p);
double fool_r_minus(std::size_t n, double p);

/// Regime thresholds for the fooling-set prediction at finite n.
inline constexpr double kFoolSparseScale = 0.5;          // p·√n below this: matching regime
inline constexpr double kFoolPolynomialExponent = 0.25;  // p̄ = n^{-a} with a above this: constant regime

/// Prediction window for fool(f). When `pbar_exponent` is given, p̄ = n^{-a}
/// with that a is used directly instead of being recovered from p.
PredictedBounds predicted_fool_bounds(std::size_t n, double p, std::optional<double> pbar_exponent = std::nullopt);

}  // namespace rectlab
