#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "rgbw/common.hpp"

namespace rgbw {

/// Fixed-width bitset over vertex indices, sized at construction.
/// Hot loops (candidate sets, codegrees, pair densities) need and-count
/// without temporaries, which is the reason this exists.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}
  Bitset(std::size_t bits, const VertexSet& members) : Bitset(bits) {
    for (Vertex v : members) set(v);
  }

  std::size_t size() const { return bits_; }

  void set(Vertex v) { words_[v >> 6] |= (std::uint64_t{1} << (v & 63)); }
  void reset(Vertex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool test(Vertex v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }

  void fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  void clear() {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t and_count(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& and_not(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  bool operator==(const Bitset& o) const = default;

  /// Calls f(v) for every member in increasing order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        f(static_cast<Vertex>(i * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
  }

  /// Smallest member >= from, or -1.
  Vertex next(Vertex from) const;

  VertexSet members() const {
    VertexSet out;
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

 private:
  void trim() {
    if (bits_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

inline Vertex Bitset::next(Vertex from) const {
  if (from < 0) from = 0;
  std::size_t i = static_cast<std::size_t>(from) >> 6;
  if (i >= words_.size()) return -1;
  std::uint64_t w = words_[i] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (w) return static_cast<Vertex>(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
    if (++i >= words_.size()) return -1;
    w = words_[i];
  }
}

}  // namespace rgbw
