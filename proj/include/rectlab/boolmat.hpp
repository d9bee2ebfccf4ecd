#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rectlab/bits.hpp"

namespace rectlab {

/// A Boolean function f: X × Y → {0,1} stored as an n_rows × n_cols 0/1
/// matrix with bit-packed rows. Padding bits past n_cols are always zero.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  /// All-zero matrix.
  BoolMatrix(std::size_t rows, std::size_t cols);

  static BoolMatrix identity(std::size_t n);
  static BoolMatrix ones(std::size_t rows, std::size_t cols);
  /// All ones except the diagonal.
  static BoolMatrix complement_identity(std::size_t n);
  /// Rows given as strings over {0,1}; all of equal length.
  static BoolMatrix from_strings(std::span<const std::string> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return wpr_; }

  bool operator()(std::size_t x, std::size_t y) const { return bits::test(row(x), y); }
  void set(std::size_t x, std::size_t y, bool value = true);

  std::span<const Word> row(std::size_t x) const { return {data_.data() + x * wpr_, wpr_}; }
  std::span<Word> row_mut(std::size_t x) { return {data_.data() + x * wpr_, wpr_}; }
  Bitset row_bitset(std::size_t x) const;
  std::size_t row_count(std::size_t x) const { return bits::count(row(x)); }

  BoolMatrix transpose() const;
  /// Result row i is source row row_perm[i]; result column j is source column col_perm[j].
  BoolMatrix permuted(std::span<const std::size_t> row_perm, std::span<const std::size_t> col_perm) const;

  std::size_t support_size() const { return bits::count(data_); }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t wpr_ = 0;
  std::vector<Word> data_;
};

/// Parameters of a square random matrix with independent Bernoulli(p) entries.
struct RandomSpec {
  std::size_t n = 1;
  double p = 0.5;
  std::uint64_t seed = 0;

  double pbar() const { return 1.0 - p; }
  /// Expected number of zeros per line.
  double lambda() const { return pbar() * static_cast<double>(n); }
  /// Probability that a pair of opposite cross entries is not both one.
  double delta() const { return 1.0 - p * p; }
};

/// Entry (x,y) is 1 iff the next uniform draw is < p, drawn in row-major
/// order from Xoshiro256(spec.seed).
BoolMatrix gen_bernoulli(const RandomSpec& spec);

inline constexpr int kPermutahedronMinK = 3;
inline constexpr int kPermutahedronMaxK = 8;

/// Slack-pattern matrix of the permutahedron on [k]. Rows: nonempty proper
/// subsets U of {1..k}, ordered by cardinality then lexicographically.
/// Columns: permutations in lexicographic one-line order. Entry is 0 iff
/// Σ_{u∈U} π(u) = |U|(|U|+1)/2.
BoolMatrix gen_permutahedron(int k);
std::vector<std::vector<int>> permutahedron_row_subsets(int k);
std::vector<std::vector<int>> permutahedron_columns(int k);

struct MatrixStats {
  std::size_t supp_size = 0;
  std::vector<std::size_t> z_per_column;
  std::size_t z_max = 0;
  /// Distinct row patterns, the all-zero pattern excluded.
  std::size_t distinct_nonzero_rows = 0;
};

MatrixStats stats(const BoolMatrix& m);
std::size_t distinct_nonzero_rows(const BoolMatrix& m);

/// log2(max(1, distinct nonzero rows)); a lower bound on the cover number
/// whenever the support is nonempty.
double log2_distinct_rows_lb(const BoolMatrix& m);

// bmat text format:
//   # optional comment lines (before the header only)
//   bmat 1
//   <rows> <cols>
//   <rows lines of exactly cols characters in {0,1}>
BoolMatrix read_matrix(std::istream& in);
BoolMatrix read_matrix(const std::filesystem::path& path);
BoolMatrix parse_matrix(const std::string& text);
void write_matrix(const BoolMatrix& m, std::ostream& out);
void write_matrix(const BoolMatrix& m, const std::filesystem::path& path);
std::string format_matrix(const BoolMatrix& m);

}  // namespace rectlab
