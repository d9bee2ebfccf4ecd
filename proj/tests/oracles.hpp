// Brute-force reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "rectlab/boolmat.hpp"
#include "rectlab/fooling.hpp"
#include "rectlab/rect.hpp"

namespace oracle {

using rectlab::BoolMatrix;

inline std::vector<std::size_t> common_cols(const BoolMatrix& m, std::uint64_t row_mask) {
  std::vector<std::size_t> cols;
  for (std::size_t y = 0; y < m.cols(); ++y) {
    bool all = true;
    for (std::size_t x = 0; x < m.rows() && all; ++x)
      if ((row_mask >> x) & 1U) all = m(x, y);
    if (all) cols.push_back(y);
  }
  return cols;
}

/// Largest all-ones submatrix by trying every row subset (rows <= 20).
inline std::size_t onerec(const BoolMatrix& m) {
  std::size_t best = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.rows()); ++mask)
    best = std::max(best, static_cast<std::size_t>(std::popcount(mask)) * common_cols(m, mask).size());
  return best;
}

/// Every maximal 1-rectangle, from the closures of all row subsets.
inline std::set<rectlab::Rectangle> maximal_rectangles(const BoolMatrix& m) {
  std::set<rectlab::Rectangle> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m.rows()); ++mask) {
    const auto cols = common_cols(m, mask);
    if (cols.empty()) continue;
    std::vector<std::size_t> rows;
    for (std::size_t x = 0; x < m.rows(); ++x)
      if (std::all_of(cols.begin(), cols.end(), [&](std::size_t y) { return m(x, y); })) rows.push_back(x);
    out.insert({rows, cols});
  }
  return out;
}

inline bool compatible(const BoolMatrix& m, const rectlab::Entry& a, const rectlab::Entry& b) {
  return a.row != b.row && a.col != b.col && !(m(a.row, b.col) && m(b.row, a.col));
}

inline void fool_rec(const BoolMatrix& m, const std::vector<rectlab::Entry>& ones, std::size_t from,
                     std::vector<rectlab::Entry>& cur, std::size_t& best) {
  best = std::max(best, cur.size());
  for (std::size_t i = from; i < ones.size(); ++i) {
    if (!std::all_of(cur.begin(), cur.end(), [&](const auto& e) { return compatible(m, e, ones[i]); })) continue;
    cur.push_back(ones[i]);
    fool_rec(m, ones, i + 1, cur, best);
    cur.pop_back();
  }
}

/// Largest fooling set by exhaustive search over the 1-entries.
inline std::size_t fool(const BoolMatrix& m) {
  std::vector<rectlab::Entry> ones, cur;
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (m(x, y)) ones.push_back({x, y});
  std::size_t best = 0;
  fool_rec(m, ones, 0, cur, best);
  return best;
}

/// Minimum number of maximal rectangles covering the support, trying
/// every k-subset for increasing k.
inline std::size_t rc(const BoolMatrix& m) {
  const auto set = maximal_rectangles(m);
  const std::vector<rectlab::Rectangle> rects(set.begin(), set.end());
  if (m.support_size() == 0) return 0;
  std::vector<std::vector<std::uint64_t>> cov;
  for (const auto& r : rects) {
    std::vector<std::uint64_t> c(m.rows(), 0);
    for (auto x : r.rows)
      for (auto y : r.cols) c[x] |= std::uint64_t{1} << y;
    cov.push_back(c);
  }
  std::vector<std::uint64_t> target(m.rows(), 0);
  for (std::size_t x = 0; x < m.rows(); ++x)
    for (std::size_t y = 0; y < m.cols(); ++y)
      if (m(x, y)) target[x] |= std::uint64_t{1} << y;
  for (std::size_t k = 1; k <= rects.size(); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      std::vector<std::uint64_t> u(m.rows(), 0);
      for (auto i : idx)
        for (std::size_t x = 0; x < m.rows(); ++x) u[x] |= cov[i][x];
      if (u == target) return k;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == rects.size() - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return rects.size();
}

inline BoolMatrix random_matrix(std::size_t rows, std::size_t cols, double p, std::uint64_t seed) {
  // Independent of the library generator: a plain LCG.
  BoolMatrix m(rows, cols);
  std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t y = 0; y < cols; ++y) {
      s = s * 6364136223846793005ULL + 1442695040888963407ULL;
      if (static_cast<double>(s >> 11) * 0x1.0p-53 < p) m.set(x, y);
    }
  return m;
}

}  // namespace oracle
