#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rectlab {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

// Mask of the valid bits in the last word of an nbits-long row.
constexpr Word tail_mask(std::size_t nbits) {
  const std::size_t r = nbits % kWordBits;
  return r == 0 ? ~Word{0} : (Word{1} << r) - 1;
}

namespace bits {

inline bool test(std::span<const Word> w, std::size_t i) { return (w[i / kWordBits] >> (i % kWordBits)) & 1U; }
inline void set(std::span<Word> w, std::size_t i) { w[i / kWordBits] |= Word{1} << (i % kWordBits); }
inline void reset(std::span<Word> w, std::size_t i) { w[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

inline std::size_t count(std::span<const Word> w) {
  std::size_t c = 0;
  for (Word x : w) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

inline bool any(std::span<const Word> w) {
  for (Word x : w)
    if (x) return true;
  return false;
}

inline void and_assign(std::span<Word> dst, std::span<const Word> src) {
  assert(dst.size() == src.size());
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= src[i];
}

inline std::size_t and_count(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

inline bool intersects(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

// a ⊆ b
inline bool subset_of(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

template <class F>
void for_each_set(std::span<const Word> w, F&& f) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    Word x = w[k];
    while (x) {
      const auto b = static_cast<std::size_t>(std::countr_zero(x));
      f(k * kWordBits + b);
      x &= x - 1;
    }
  }
}

inline std::vector<std::size_t> to_indices(std::span<const Word> w) {
  std::vector<std::size_t> out;
  for_each_set(w, [&](std::size_t i) { out.push_back(i); });
  return out;
}

}  // namespace bits

/// Fixed-length dynamic bitset with word access, used for row/column sets,
/// coverage masks and graph adjacency.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t nbits) : words_(words_for(nbits), 0), size_(nbits) {}

  static Bitset full(std::size_t nbits) {
    Bitset b(nbits);
    for (auto& w : b.words_) w = ~Word{0};
    if (!b.words_.empty()) b.words_.back() &= tail_mask(nbits);
    return b;
  }

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return bits::test(words_, i); }
  void set(std::size_t i) { bits::set(words_, i); }
  void reset(std::size_t i) { bits::reset(words_, i); }
  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }
  std::size_t count() const { return bits::count(words_); }
  bool any() const { return bits::any(words_); }
  bool none() const { return !any(); }

  std::span<Word> words() { return words_; }
  std::span<const Word> words() const { return words_; }

  Bitset& operator&=(const Bitset& o) {
    bits::and_assign(words_, o.words_);
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  // this &= ~o
  Bitset& subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  bool intersects(const Bitset& o) const { return bits::intersects(words_, o.words_); }
  std::size_t and_count(const Bitset& o) const { return bits::and_count(words_, o.words_); }
  bool is_subset_of(const Bitset& o) const { return bits::subset_of(words_, o.words_); }

  std::size_t find_first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return size_;
  }

  template <class F>
  void for_each(F&& f) const {
    bits::for_each_set(words_, std::forward<F>(f));
  }
  std::vector<std::size_t> indices() const { return bits::to_indices(words_); }

  friend bool operator==(const Bitset&, const Bitset&) = default;
  friend auto operator<=>(const Bitset& a, const Bitset& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  std::vector<Word> words_;
  std::size_t size_ = 0;
};

}  // namespace rectlab
