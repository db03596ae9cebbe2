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

#include <algorithm>
#include <cstddef>
#include <memory>
#include <vector>

#include "splcover/feature_model.hpp"
#include "splcover/propagation.hpp"

namespace splcover {

struct Enumeration {
  // All valid products in ascending Product order; empty on overflow.
  std::vector<Product> products;
  bool overflow = false;
  // On overflow, a lower bound on the number of valid products (cap + 1).
  std::size_t count_lower_bound = 0;
};

namespace detail {

inline bool enumerate_into(const FeatureModel& fm, const PartialAssignment& state,
                           std::size_t cap, std::vector<Product>& out) {
  if (state.complete()) {
    Product p = state.to_product();
    if (!is_valid_product(fm, p)) return true;
    out.push_back(std::move(p));
    return out.size() <= cap;
  }
  FeatureIndex next = 0;
  while (state.decided(next)) ++next;
  for (bool selected : {true, false}) {
    PartialAssignment child = state;
    if (child.assign({next, selected}) && !enumerate_into(fm, child, cap, out)) return false;
  }
  return true;
}

}  // namespace detail

// Every valid product when there are at most `cap` of them. Meant for oracle
// checks on small models.
inline Enumeration enumerate_valid_products(const FeatureModel& fm, std::size_t cap) {
  Enumeration result;
  PartialAssignment root(std::make_shared<const ClauseSet>(fm));
  if (!root.initialize()) return result;
  if (!detail::enumerate_into(fm, root, cap, result.products)) {
    result.overflow = true;
    result.count_lower_bound = result.products.size();
    result.products.clear();
    return result;
  }
  std::sort(result.products.begin(), result.products.end());
  return result;
}

}  // namespace splcover
