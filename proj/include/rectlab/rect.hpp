#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rectlab/boolmat.hpp"
#include "rectlab/predicted.hpp"

namespace rectlab {

/// A combinatorial rectangle K × L with sorted row and column index sets.
/// As a 1-rectangle every entry in K × L is 1; the empty rectangle has size 0.
struct Rectangle {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  std::size_t size() const { return rows.size() * cols.size(); }
  bool empty() const { return size() == 0; }
  bool contains(std::size_t x, std::size_t y) const;
  Rectangle transposed() const { return {cols, rows}; }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
  friend auto operator<=>(const Rectangle&, const Rectangle&) = default;
};

bool is_one_rectangle(const BoolMatrix& m, const Rectangle& r);
/// 1-rectangle to which neither a row nor a column can be added.
bool is_maximal_rectangle(const BoolMatrix& m, const Rectangle& r);

/// Rectangle generated by row set K: K × {y : f(x,y)=1 for all x ∈ K}.
/// Throws DomainError on an empty K or an index out of range.
Rectangle generate_from_rows(const BoolMatrix& m, std::span<const std::size_t> rows);
/// Transpose-dual of generate_from_rows.
Rectangle generate_from_cols(const BoolMatrix& m, std::span<const std::size_t> cols);

enum class OnerecMethod { exact, single_line, beam };
std::string_view to_string(OnerecMethod m);

struct OnerecResult {
  std::size_t size = 0;
  Rectangle witness;
  OnerecMethod method = OnerecMethod::exact;
};

inline constexpr std::size_t kOnerecExactMaxSide = 22;

/// Largest 1-rectangle by exhaustive enumeration of the rectangles generated
/// by subsets of the smaller side. Ties go to the lexicographically smallest
/// generating set. Throws SizeGuardError when min(rows, cols) > 22.
OnerecResult onerec_exact(const BoolMatrix& m);

/// Best single row or column (its 1-entries as a 1×k or k×1 rectangle).
OnerecResult best_single_line(const BoolMatrix& m);

/// Largest rectangle with at least two rows and two columns found by the
/// beam search (size 0 when none exists).
OnerecResult best_bulky_beam(const BoolMatrix& m, std::size_t beam_width, std::size_t b_max);

/// Lower-bound witness for onerec: the best of single lines and a beam search
/// over generated rectangles (one row added per level, `beam_width` largest
/// column sets kept, up to `b_max` rows), run on both m and its transpose.
OnerecResult onerec_heuristic(const BoolMatrix& m, std::size_t beam_width, std::size_t b_max);

inline constexpr std::size_t kDefaultBeamWidth = 64;
/// ⌈log_{1/p} e⌉ + 3 for p > 1/e, else 3.
std::size_t default_beam_depth(double p);

/// a₋ = ⌊log_{1/p} e⌋, a₊ = ⌈log_{1/p} e⌉ and a = argmax_{b ∈ {a₋,a₊}} b·p^b.
struct AParams {
  double p = 0;
  int a_minus = 0;
  int a_plus = 0;
  int a = 0;
  double p_pow_a = 0;
};

/// Requires 1/e <= p < 1 (DomainError otherwise). Exact ties, which happen
/// exactly at p = b/(b+1), resolve to the smaller b.
AParams compute_a(double p);

struct OnerecPrediction {
  /// p·n for p <= 1/e, a·p^a·n above.
  double value = 0;
  std::optional<AParams> a;
  /// n²/(eλ) with λ = (1-p)n, reported for p > 1/2.
  std::optional<double> dense_value;
  /// λ below kLambdaHeuristicThreshold: the large-p statement needs an
  /// unquantified λ₀, so the prediction is indicative only.
  bool heuristic_regime = false;

  PredictedBounds as_bounds(double rel_lo, double rel_hi) const;
};

inline constexpr double kLambdaHeuristicThreshold = 10.0;

/// Requires 5/n <= p < 1.
OnerecPrediction predicted_onerec(std::size_t n, double p);

}  // namespace rectlab
