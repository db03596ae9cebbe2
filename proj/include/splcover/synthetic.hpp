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
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "splcover/errors.hpp"
#include "splcover/feature_model.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product_space.hpp"
#include "splcover/random.hpp"

namespace splcover {

struct SyntheticModelParams {
  std::size_t features = 12;
  std::size_t ctcs = 2;
  std::size_t max_group = 4;
  std::string name = "synthetic";
};

// Random satisfiable feature model with features F0..F{n-1} numbered in
// breadth-first creation order, so serialize/parse preserves the order.
inline FeatureModel random_feature_model(Rng& rng, const SyntheticModelParams& params) {
  if (params.features == 0) throw InputError("a model needs at least one feature");
  const std::size_t n = params.features;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("F" + std::to_string(i));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Relation> relations;
    std::vector<FeatureIndex> parent(n, 0);
    std::deque<FeatureIndex> open{0};
    std::size_t next = 1;
    while (next < n) {
      const FeatureIndex p = open.front();
      open.pop_front();
      const std::size_t fanout = 1 + uniform_index(rng, 3);
      for (std::size_t k = 0; k < fanout && next < n; ++k) {
        const std::size_t left = n - next;
        Relation rel;
        rel.parent = p;
        const std::size_t roll = uniform_index(rng, 10);
        if (left >= 2 && roll < 2) {
          rel.kind = RelationKind::Xor;
        } else if (left >= 2 && roll < 4) {
          rel.kind = RelationKind::Or;
        } else if (roll < 6) {
          rel.kind = RelationKind::Mandatory;
        } else {
          rel.kind = RelationKind::Optional;
        }
        std::size_t width = 1;
        if (rel.kind == RelationKind::Xor || rel.kind == RelationKind::Or) {
          width = 2 + uniform_index(rng, std::max<std::size_t>(1, params.max_group - 1));
          width = std::min(width, left);
        }
        for (std::size_t c = 0; c < width; ++c) {
          rel.children.push_back(next);
          parent[next] = p;
          open.push_back(next);
          ++next;
        }
        relations.push_back(std::move(rel));
      }
      if (open.empty()) open.push_back(p);
    }

    auto is_ancestor = [&](FeatureIndex a, FeatureIndex b) {
      while (b != 0) {
        b = parent[b];
        if (b == a) return true;
      }
      return false;
    };
    std::vector<CrossTreeConstraint> ctcs;
    for (std::size_t tries = 0; ctcs.size() < params.ctcs && n >= 3 && tries < 100 * params.ctcs;
         ++tries) {
      const FeatureIndex a = 1 + uniform_index(rng, n - 1);
      const FeatureIndex b = 1 + uniform_index(rng, n - 1);
      if (a == b || is_ancestor(a, b) || is_ancestor(b, a)) continue;
      const ConstraintKind kind = coin(rng) ? ConstraintKind::Requires : ConstraintKind::Excludes;
      ctcs.push_back({kind, a, b});
    }

    FeatureModel fm(params.name, names, 0, std::move(relations), std::move(ctcs));
    if (ProductSpace(fm).satisfiable()) return fm;
  }
  throw Error("could not generate a satisfiable model");
}

// `count` distinct random valid products with weights drawn from
// {0.01, 0.02, ..., 10.00}.
inline std::vector<PrioritizedProduct> random_prioritized_products(const ProductSpace& space,
                                                                   Rng& rng, std::size_t count) {
  std::vector<PrioritizedProduct> out;
  std::vector<Product> seen;
  for (std::size_t draws = 0; out.size() < count && draws < 50 * count + 50; ++draws) {
    Product p = space.random_valid_product(rng);
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    const double weight = static_cast<double>(1 + uniform_index(rng, 1000)) / 100.0;
    out.push_back({std::move(p), weight});
  }
  return out;
}

}  // namespace splcover
