#pragma once

#include <limits>
#include <optional>
#include <string>

namespace rectlab {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Closed-form prediction window for one parameter at (n, p).
///
/// `lo`/`hi` may be ±infinity for one-sided statements. `order_only` marks
/// windows whose (1 ± o(1)) or big-O constants were set to 1 because the
/// underlying statement is asymptotic without explicit constants.
struct PredictedBounds {
  std::string regime;
  double lo = -kUnbounded;
  double hi = kUnbounded;
  std::optional<double> exact;
  bool order_only = false;
  /// Bounds are multiples of the maximum matching size ν rather than absolute.
  bool relative_to_matching = false;
  std::string note;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

}  // namespace rectlab
