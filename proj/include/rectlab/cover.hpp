#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rectlab/bits.hpp"
#include "rectlab/boolmat.hpp"
#include "rectlab/fooling.hpp"
#include "rectlab/lp.hpp"
#include "rectlab/predicted.hpp"
#include "rectlab/rect.hpp"

namespace rectlab {

/// Dense numbering of the 1-entries in row-major order.
class SupportIndex {
 public:
  SupportIndex() = default;
  explicit SupportIndex(const BoolMatrix& m);

  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const { return entries_; }
  /// Index of the 1-entry (x, y); npos for a 0-entry.
  std::size_t index(std::size_t x, std::size_t y) const { return idx_[x * cols_ + y]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> idx_;
  std::size_t cols_ = 0;
};

/// Maximal 1-rectangles together with the 1-entries each one covers.
struct RectangleSet {
  std::vector<Rectangle> rects;
  std::vector<Bitset> coverage;  // one mask over SupportIndex per rectangle
  SupportIndex supp;
  /// False when the enumeration cap was hit; exact solvers refuse such sets.
  bool complete = true;

  std::size_t size() const { return rects.size(); }
};

inline constexpr std::size_t kDefaultRectangleCap = 200'000;

/// All maximal 1-rectangles (closed row/column pairs with both sides
/// nonempty), enumerated without duplicates by closure over the smaller
/// side. Stops after `cap` rectangles with `complete = false`.
RectangleSet enumerate_maximal_rectangles(const BoolMatrix& m, std::size_t cap = kDefaultRectangleCap);

struct CoverSolution {
  std::vector<std::size_t> chosen;  // indices into RectangleSet::rects
  std::size_t size() const { return chosen.size(); }
};

bool is_cover(const RectangleSet& rs, const CoverSolution& c);

inline constexpr std::size_t kCoverExactMaxRects = 5000;
inline constexpr std::uint64_t kDefaultCoverBudget = 20'000'000;

/// Minimum cover by branch and bound over the uncovered entry with fewest
/// covering rectangles, pruned by a disjoint-entry packing bound.
/// Throws SizeGuardError on an incomplete set, > 5000 rectangles or an
/// exhausted node budget.
CoverSolution cover_exact(const RectangleSet& rs, std::uint64_t budget = kDefaultCoverBudget);
CoverSolution cover_exact(const BoolMatrix& m, std::uint64_t budget = kDefaultCoverBudget);

/// Greedy cover: repeatedly the rectangle covering most uncovered entries,
/// ties to the smaller index.
CoverSolution cover_greedy(const RectangleSet& rs);

struct FracCoverSolution {
  std::vector<Rational> weights;  // one per rectangle of the set
  Rational value;
};

inline constexpr std::size_t kFracExactMaxRects = 5000;
inline constexpr std::size_t kFracExactMaxSupport = 2000;

/// Exact optimum of min Σ w_R s.t. Σ_{R ∋ e} w_R >= 1 for every 1-entry e,
/// w >= 0, over the maximal rectangles: the fractional cover number.
FracCoverSolution frac_cover_exact(const RectangleSet& rs);
FracCoverSolution frac_cover_exact(const BoolMatrix& m);

/// Floating-point variant of frac_cover_exact for exploratory runs.
double frac_cover_float(const RectangleSet& rs);

struct PackingSolution {
  std::vector<Rational> y;  // one per 1-entry
  Rational value;
};

/// Dual packing LP: max Σ y_e s.t. Σ_{e ∈ R} y_e <= 1 per rectangle, y >= 0.
PackingSolution fractional_packing_exact(const RectangleSet& rs);

/// Every 1-entry receives total weight >= 1 and all weights are >= 0.
bool is_fractional_cover(const RectangleSet& rs, const std::vector<Rational>& w);

struct SuppOverOnerec {
  double value = 0;
  /// True when computed from an upper bound on onerec (a true lower bound
  /// on frc); false for an estimate from a heuristic onerec.
  bool is_bound = true;
};

/// |supp| / onerec_value; `onerec_is_upper_bound` says whether the value is
/// the exact onerec (or larger).
SuppOverOnerec lb_supp_over_onerec(const BoolMatrix& m, std::size_t onerec_value, bool onerec_is_upper_bound);

struct CertifiedFracBound {
  double bound = 0;
  double q_used = 0;
  std::size_t z_max = 0;
  /// Exact value of the bound when q is the default 1/(Z+1).
  std::optional<Rational> exact;
};

/// Upper bound 1/(q(1−q)^Z) on frc, Z the maximum number of zeros in a
/// column that holds at least one 1. Default q = 1/(Z+1). Z = 0 gives 1.
CertifiedFracBound frac_cover_certified_ub(const BoolMatrix& m, std::optional<double> q = std::nullopt);

enum class NdccKind { exact, upper };
struct Ndcc {
  double value = 0;
  NdccKind kind = NdccKind::exact;
};
std::string_view to_string(NdccKind k);

/// log2 of a cover size; 0 for an empty support.
Ndcc ndcc(std::size_t cover_size, NdccKind kind);

struct CoverPrediction {
  double lambda = 0;
  PredictedBounds frc;
  PredictedBounds rc;
  PredictedBounds log2_lb;
};

/// Prediction windows for frc, rc and the log2 distinct-rows bound.
CoverPrediction predicted_cover_bounds(std::size_t n, double p);

struct BoundsOptions {
  std::size_t beam_width = kDefaultBeamWidth;
  std::optional<std::size_t> beam_depth;
  std::optional<double> q;
  bool run_exact = true;
  std::uint64_t fool_budget = kDefaultFoolBudget;
  std::uint64_t cover_budget = kDefaultCoverBudget;
  std::size_t rectangle_cap = kDefaultRectangleCap;
};

/// The members of the chain
///   max(fool, |supp|/onerec, log2 rows) <= frc <= rc <= (1 + ln onerec)·frc
/// that could be computed for one matrix.
struct BoundsReport {
  double lb_supp_over_onerec = 0;
  bool lb_supp_over_onerec_is_bound = false;
  std::size_t lb_fool = 0;
  bool lb_fool_exact = false;
  double lb_log2_rows = 0;
  double ub_frc_certified = 0;
  std::optional<Rational> ub_frc_certified_exact;
  std::optional<Rational> frc_exact;
  std::optional<std::size_t> rc_exact;
  std::optional<std::size_t> rc_greedy;
  std::optional<std::size_t> onerec_exact;
  std::size_t onerec_heuristic = 0;
  double q_used = 0;
  std::size_t z_max = 0;
  std::size_t supp_size = 0;
  std::vector<std::string> skipped;  // guards that tripped
};

BoundsReport bounds_report(const BoolMatrix& m, const BoundsOptions& opts = {});

/// Violations of the inequality chain among the exact members of a report
/// (empty when all hold or exact members are missing).
std::vector<std::string> chain_violations(const BoundsReport& r);

}  // namespace rectlab
