#include "rectlab/boolmat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rectlab/error.hpp"
#include "rectlab/rng.hpp"

namespace rectlab {

BoolMatrix::BoolMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BoolMatrix BoolMatrix::ones(std::size_t rows, std::size_t cols) {
  BoolMatrix m(rows, cols);
  for (std::size_t x = 0; x < rows; ++x) {
    auto r = m.row_mut(x);
    std::fill(r.begin(), r.end(), ~Word{0});
    if (!r.empty()) r.back() &= tail_mask(cols);
  }
  return m;
}

BoolMatrix BoolMatrix::complement_identity(std::size_t n) {
  BoolMatrix m = ones(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, false);
  return m;
}

BoolMatrix BoolMatrix::from_strings(std::span<const std::string> rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  BoolMatrix m(rows.size(), cols);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != cols) throw DomainError("from_strings: ragged rows");
    for (std::size_t y = 0; y < cols; ++y) {
      const char c = rows[x][y];
      if (c != '0' && c != '1') throw DomainError("from_strings: characters must be 0 or 1");
      if (c == '1') m.set(x, y);
    }
  }
  return m;
}

void BoolMatrix::set(std::size_t x, std::size_t y, bool value) {
  if (value)
    bits::set(row_mut(x), y);
  else
    bits::reset(row_mut(x), y);
}

Bitset BoolMatrix::row_bitset(std::size_t x) const {
  Bitset b(cols_);
  std::copy(row(x).begin(), row(x).end(), b.words().begin());
  return b;
}

BoolMatrix BoolMatrix::transpose() const {
  BoolMatrix t(cols_, rows_);
  for (std::size_t x = 0; x < rows_; ++x)
    bits::for_each_set(row(x), [&](std::size_t y) { t.set(y, x); });
  return t;
}

BoolMatrix BoolMatrix::permuted(std::span<const std::size_t> row_perm,
                                std::span<const std::size_t> col_perm) const {
  if (row_perm.size() != rows_ || col_perm.size() != cols_) throw DomainError("permuted: permutation length mismatch");
  BoolMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(row_perm[i], col_perm[j])) out.set(i, j);
  return out;
}

BoolMatrix gen_bernoulli(const RandomSpec& spec) {
  if (spec.n < 1) throw DomainError("gen_bernoulli: n must be >= 1");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw DomainError("gen_bernoulli: p must lie in [0,1]");
  BoolMatrix m(spec.n, spec.n);
  Xoshiro256 rng(spec.seed);
  for (std::size_t x = 0; x < spec.n; ++x)
    for (std::size_t y = 0; y < spec.n; ++y)
      if (rng.uniform() < spec.p) m.set(x, y);
  return m;
}

std::vector<std::vector<int>> permutahedron_row_subsets(int k) {
  std::vector<std::vector<int>> out;
  for (int card = 1; card < k; ++card) {
    // Lexicographic combinations of {1..k} of size card.
    std::vector<int> c(static_cast<std::size_t>(card));
    std::iota(c.begin(), c.end(), 1);
    while (true) {
      out.push_back(c);
      int i = card - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == k - card + i + 1) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < card; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<std::vector<int>> permutahedron_columns(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

BoolMatrix gen_permutahedron(int k) {
  if (k < kPermutahedronMinK || k > kPermutahedronMaxK)
    throw SizeGuardError("3 <= k <= 8", "choose a smaller k",
                         "gen_permutahedron: k = " + std::to_string(k) + " out of range");
  const auto subsets = permutahedron_row_subsets(k);
  const auto perms = permutahedron_columns(k);
  BoolMatrix m(subsets.size(), perms.size());
  for (std::size_t x = 0; x < subsets.size(); ++x) {
    const auto& u = subsets[x];
    const int card = static_cast<int>(u.size());
    const int minimum = card * (card + 1) / 2;
    for (std::size_t y = 0; y < perms.size(); ++y) {
      int sum = 0;
      for (int e : u) sum += perms[y][static_cast<std::size_t>(e - 1)];
      if (sum != minimum) m.set(x, y);
    }
  }
  return m;
}

std::size_t distinct_nonzero_rows(const BoolMatrix& m) {
  std::vector<std::size_t> idx;
  for (std::size_t x = 0; x < m.rows(); ++x)
    if (bits::any(m.row(x))) idx.push_back(x);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = m.row(a), rb = m.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i == 0 || less(idx[i - 1], idx[i])) ++distinct;
  }
  return distinct;
}

MatrixStats stats(const BoolMatrix& m) {
  MatrixStats s;
  s.z_per_column.assign(m.cols(), m.rows());
  for (std::size_t x = 0; x < m.rows(); ++x)
    bits::for_each_set(m.row(x), [&](std::size_t y) { --s.z_per_column[y]; });
  s.supp_size = m.support_size();
  s.z_max = s.z_per_column.empty() ? 0 : *std::max_element(s.z_per_column.begin(), s.z_per_column.end());
  s.distinct_nonzero_rows = distinct_nonzero_rows(m);
  return s;
}

double log2_distinct_rows_lb(const BoolMatrix& m) {
  return std::log2(static_cast<double>(std::max<std::size_t>(1, distinct_nonzero_rows(m))));
}

namespace {

bool parse_count(const std::string& tok, std::size_t& out) {
  if (tok.empty() || tok.size() > 9) return false;
  for (char c : tok)
    if (c < '0' || c > '9') return false;
  out = std::stoul(tok);
  return true;
}

constexpr std::size_t kMaxSide = std::size_t{1} << 15;

}  // namespace

BoolMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  bool have = false;
  while ((have = next_line())) {
    if (line.empty() || line.front() != '#') break;
  }
  if (!have) throw ParseError(ParseErrorKind::truncated, lineno + 1, "missing header");
  if (line != "bmat 1") throw ParseError(ParseErrorKind::bad_header, lineno, "expected 'bmat 1', got '" + line + "'");

  if (!next_line()) throw ParseError(ParseErrorKind::truncated, lineno + 1, "missing dimension line");
  std::istringstream dims(line);
  std::string a, b, extra;
  std::size_t rows = 0, cols = 0;
  if (!(dims >> a >> b) || (dims >> extra) || !parse_count(a, rows) || !parse_count(b, cols))
    throw ParseError(ParseErrorKind::bad_header, lineno, "expected '<rows> <cols>', got '" + line + "'");
  if (rows == 0 || cols == 0 || rows > kMaxSide || cols > kMaxSide)
    throw ParseError(ParseErrorKind::dimension_mismatch, lineno, "dimensions must lie in [1, 32768]");

  BoolMatrix m(rows, cols);
  for (std::size_t x = 0; x < rows; ++x) {
    if (!next_line())
      throw ParseError(ParseErrorKind::truncated, lineno + 1,
                       "expected " + std::to_string(rows) + " rows, file ends after " + std::to_string(x));
    for (std::size_t y = 0; y < line.size(); ++y) {
      const char c = line[y];
      if (c != '0' && c != '1')
        throw ParseError(ParseErrorKind::illegal_character, lineno,
                         "illegal character at column " + std::to_string(y + 1));
    }
    if (line.size() < cols)
      throw ParseError(ParseErrorKind::truncated, lineno,
                       "row has " + std::to_string(line.size()) + " of " + std::to_string(cols) + " entries");
    if (line.size() > cols)
      throw ParseError(ParseErrorKind::dimension_mismatch, lineno,
                       "row has " + std::to_string(line.size()) + " entries, header says " + std::to_string(cols));
    for (std::size_t y = 0; y < cols; ++y)
      if (line[y] == '1') m.set(x, y);
  }
  while (next_line()) {
    if (!line.empty())
      throw ParseError(ParseErrorKind::dimension_mismatch, lineno,
                       "more rows than the " + std::to_string(rows) + " declared");
  }
  return m;
}

BoolMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix(in);
}

BoolMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

void write_matrix(const BoolMatrix& m, std::ostream& out) { out << format_matrix(m); }

void write_matrix(const BoolMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_matrix(m, out);
  if (!out) throw Error("write failed: " + path.string());
}

std::string format_matrix(const BoolMatrix& m) {
  std::string s = "bmat 1\n" + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  s.reserve(s.size() + m.rows() * (m.cols() + 1));
  for (std::size_t x = 0; x < m.rows(); ++x) {
    for (std::size_t y = 0; y < m.cols(); ++y) s.push_back(m(x, y) ? '1' : '0');
    s.push_back('\n');
  }
  return s;
}

}  // namespace rectlab
