// Copyright 2026 The splcover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace splcover {

// Position of a feature in its model's feature list.
using FeatureIndex = std::size_t;

// A total assignment over a feature list: bit i set means feature i is in S,
// clear means it is in the complement.
//
// Products are totally ordered by comparing their selected-index sequences
// lexicographically ({0} < {0,1} < {0,1,2} < {0,2} < {1}). Every tie-break in
// the library uses this order.
class Product {
 public:
  Product() = default;
  explicit Product(std::size_t feature_count)
      : size_(feature_count), words_((feature_count + 63) / 64, 0) {}
  Product(std::size_t feature_count, std::initializer_list<FeatureIndex> selected)
      : Product(feature_count) {
    for (FeatureIndex f : selected) set(f, true);
  }

  std::size_t size() const { return size_; }

  bool contains(FeatureIndex f) const {
    return (words_[f >> 6] >> (f & 63)) & 1u;
  }

  void set(FeatureIndex f, bool selected) {
    const std::uint64_t mask = std::uint64_t{1} << (f & 63);
    if (selected) {
      words_[f >> 6] |= mask;
    } else {
      words_[f >> 6] &= ~mask;
    }
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  std::vector<FeatureIndex> selected() const {
    std::vector<FeatureIndex> out;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        out.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  std::size_t hamming_distance(const Product& other) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      d += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
    }
    return d;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const Product& a, const Product& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  // Lexicographic order on the sorted selected-index sequences. At the first
  // index i where membership differs, the product containing i is smaller
  // unless the other product has nothing above i (then it is a prefix).
  friend std::strong_ordering operator<=>(const Product& a, const Product& b) {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    const std::size_t n = a.words_.size();
    for (std::size_t wi = 0; wi < n; ++wi) {
      const std::uint64_t diff = a.words_[wi] ^ b.words_[wi];
      if (diff == 0) continue;
      const int bit = std::countr_zero(diff);
      const bool a_has = (a.words_[wi] >> bit) & 1u;
      const Product& without = a_has ? b : a;
      const bool without_has_more = without.any_above(wi, bit);
      const bool a_less = a_has ? without_has_more : !without_has_more;
      return a_less ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

 private:
  bool any_above(std::size_t wi, int bit) const {
    const std::uint64_t high = bit == 63 ? 0 : (words_[wi] >> (bit + 1));
    if (high != 0) return true;
    for (std::size_t i = wi + 1; i < words_.size(); ++i) {
      if (words_[i] != 0) return true;
    }
    return false;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ProductHash {
  std::size_t operator()(const Product& p) const {
    std::size_t h = std::hash<std::size_t>{}(p.size());
    for (std::uint64_t w : p.words()) {
      h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace splcover
