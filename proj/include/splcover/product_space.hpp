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
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "splcover/errors.hpp"
#include "splcover/feature_model.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product.hpp"
#include "splcover/propagation.hpp"
#include "splcover/random.hpp"

namespace splcover {

struct BestProduct {
  Product product;
  double gain = 0.0;
  std::size_t nodes = 0;
};

// Two gains this close are treated as equal when breaking ties.
inline bool gains_tie(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Feature-pair gains grouped so at most one polarity form per pair counts.
// Evaluation always sums in the same order, so equal products produce
// bit-identical gains.
class PairGains {
 public:
  PairGains(std::size_t feature_count, std::span<const Configuration> gains)
      : mentions_(feature_count, 0), literal_weight_(feature_count, {0.0, 0.0}) {
    std::map<std::pair<FeatureIndex, FeatureIndex>, std::array<double, 4>> grouped;
    for (const auto& c : gains) {
      if (!(c.weight >= 0.0)) throw InputError("gains must be non-negative");
      if (c.weight == 0.0) continue;
      auto& slot = grouped[{c.pair.first().feature, c.pair.second().feature}];
      slot[static_cast<std::size_t>(c.pair.form())] += c.weight;
      for (const Literal& l : {c.pair.first(), c.pair.second()}) {
        ++mentions_[l.feature];
        literal_weight_[l.feature][l.selected ? 1 : 0] += c.weight;
      }
    }
    entries_.reserve(grouped.size());
    for (const auto& [key, w] : grouped) entries_.push_back({key.first, key.second, w});
  }

  bool empty() const { return entries_.empty(); }
  std::size_t mentions(FeatureIndex f) const { return mentions_[f]; }
  double literal_weight(FeatureIndex f, bool selected) const {
    return literal_weight_[f][selected ? 1 : 0];
  }

  double evaluate(const Product& p) const {
    double sum = 0.0;
    for (const auto& e : entries_) {
      sum += e.weight[(p.contains(e.first) ? 2 : 0) + (p.contains(e.second) ? 1 : 0)];
    }
    return sum;
  }

  // Admissible: per feature pair, the best polarity form still open.
  double upper_bound(const PartialAssignment& state) const {
    double sum = 0.0;
    for (const auto& e : entries_) {
      const Value a = state.value(e.first);
      const Value b = state.value(e.second);
      double best = 0.0;
      for (int form = 0; form < 4; ++form) {
        const bool fa = (form & 2) != 0;
        const bool fb = (form & 1) != 0;
        if (a != Value::Undecided && (a == Value::Selected) != fa) continue;
        if (b != Value::Undecided && (b == Value::Selected) != fb) continue;
        best = std::max(best, e.weight[static_cast<std::size_t>(form)]);
      }
      sum += best;
    }
    return sum;
  }

 private:
  struct Entry {
    FeatureIndex first;
    FeatureIndex second;
    std::array<double, 4> weight;
  };
  std::vector<Entry> entries_;
  std::vector<std::size_t> mentions_;
  std::vector<std::array<double, 2>> literal_weight_;
};

// Constraint engine over one feature model: seeded sampling, exact
// best-product search, and repair of arbitrary assignments.
class ProductSpace {
 public:
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  explicit ProductSpace(FeatureModel fm, std::size_t max_restarts = 1000)
      : fm_(std::move(fm)),
        clauses_(std::make_shared<const ClauseSet>(fm_)),
        root_(clauses_),
        max_restarts_(max_restarts) {
    satisfiable_ = root_.initialize() && find_any(root_).has_value();
  }

  const FeatureModel& model() const { return fm_; }
  bool satisfiable() const { return satisfiable_; }

  // Top-down random construction: optional children by coin flip, one
  // uniformly chosen child per xor group, coin flips over or-group members,
  // unit propagation after every choice. A contradiction restarts the whole
  // sample; after max_restarts the sample falls back to randomized
  // backtracking, which always terminates. Every valid product has nonzero
  // probability; the distribution is not uniform.
  Product random_valid_product(Rng& rng) const {
    require_satisfiable();
    for (std::size_t attempt = 0; attempt < max_restarts_; ++attempt) {
      if (auto p = try_top_down(rng)) return *std::move(p);
    }
    return *random_backtrack(root_, rng);
  }

  // Valid product maximizing the summed gain of the pairs it covers. Ties
  // resolve to the smallest product in Product order.
  BestProduct best_product(std::span<const Configuration> gains,
                           std::size_t node_budget = kUnlimited) const {
    require_satisfiable();
    const PairGains pg(fm_.size(), gains);
    std::size_t nodes = 0;

    // Phase 1: the optimal value, most-constrained feature first.
    std::vector<FeatureIndex> order(fm_.size());
    std::iota(order.begin(), order.end(), FeatureIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](FeatureIndex a, FeatureIndex b) {
      return pg.mentions(a) > pg.mentions(b);
    });
    double best = -1.0;
    maximize(pg, root_, order, best, nodes, node_budget);

    // Phase 2: the smallest product attaining it.
    std::optional<Product> winner;
    smallest_attaining(pg, root_, best, winner, nodes, node_budget);
    if (!winner) throw Error("internal: best-product search lost its optimum");
    BestProduct out{*std::move(winner), 0.0, nodes};
    out.gain = pg.evaluate(out.product);
    return out;
  }

  // A valid product at minimum Hamming distance from target, found by
  // propagation-guided branch-and-bound that prefers target's value for
  // each feature. After node_budget nodes the closest product found so far
  // is returned.
  Product nearest_valid_product(const Product& target, std::size_t node_budget = 5000) const {
    require_satisfiable();
    std::optional<Product> best;
    std::size_t best_distance = std::numeric_limits<std::size_t>::max();
    std::size_t nodes = 0;
    nearest(root_, target, best, best_distance, nodes, node_budget);
    return *std::move(best);
  }

  std::optional<Product> any_valid_product() const {
    if (!satisfiable_) return std::nullopt;
    return find_any(root_);
  }

 private:
  void require_satisfiable() const {
    if (!satisfiable_) {
      throw UnsatisfiableModel("model " + fm_.name() + " has no valid product");
    }
  }

  std::optional<Product> find_any(const PartialAssignment& state) const {
    if (state.complete()) {
      Product p = state.to_product();
      if (is_valid_product(fm_, p)) return p;
      return std::nullopt;
    }
    const FeatureIndex f = first_undecided(state);
    for (bool selected : {true, false}) {
      PartialAssignment child = state;
      if (child.assign({f, selected})) {
        if (auto p = find_any(child)) return p;
      }
    }
    return std::nullopt;
  }

  static FeatureIndex first_undecided(const PartialAssignment& state) {
    FeatureIndex f = 0;
    while (state.decided(f)) ++f;
    return f;
  }

  std::optional<Product> try_top_down(Rng& rng) const {
    PartialAssignment state = root_;
    for (FeatureIndex f : fm_.tree_order()) {
      if (!state.decided(f) && !state.assign({f, coin(rng)})) return std::nullopt;
      if (state.value(f) != Value::Selected) continue;
      for (std::size_t r : fm_.child_relations(f)) {
        const Relation& rel = fm_.relations()[r];
        switch (rel.kind) {
          case RelationKind::Mandatory:
            break;
          case RelationKind::Optional:
            if (!state.decided(rel.children[0]) && !state.assign({rel.children[0], coin(rng)})) {
              return std::nullopt;
            }
            break;
          case RelationKind::Xor: {
            bool chosen = false;
            std::vector<FeatureIndex> open;
            for (FeatureIndex c : rel.children) {
              if (state.value(c) == Value::Selected) chosen = true;
              if (state.value(c) == Value::Undecided) open.push_back(c);
            }
            if (chosen) break;
            if (open.empty()) return std::nullopt;
            if (!state.assign({open[uniform_index(rng, open.size())], true})) return std::nullopt;
            break;
          }
          case RelationKind::Or:
            for (FeatureIndex c : rel.children) {
              if (!state.decided(c) && !state.assign({c, coin(rng)})) return std::nullopt;
            }
            break;
        }
      }
    }
    if (!state.complete()) return std::nullopt;
    Product p = state.to_product();
    if (!is_valid_product(fm_, p)) return std::nullopt;
    return p;
  }

  std::optional<Product> random_backtrack(const PartialAssignment& state, Rng& rng) const {
    if (state.complete()) {
      Product p = state.to_product();
      if (is_valid_product(fm_, p)) return p;
      return std::nullopt;
    }
    FeatureIndex f = 0;
    for (FeatureIndex t : fm_.tree_order()) {
      if (!state.decided(t)) {
        f = t;
        break;
      }
    }
    const bool first = coin(rng);
    for (bool selected : {first, !first}) {
      PartialAssignment child = state;
      if (child.assign({f, selected})) {
        if (auto p = random_backtrack(child, rng)) return p;
      }
    }
    return std::nullopt;
  }

  static void charge(std::size_t& nodes, std::size_t budget) {
    if (++nodes > budget) throw BudgetExhausted("best-product search exceeded its node budget");
  }

  void maximize(const PairGains& pg, const PartialAssignment& state,
                const std::vector<FeatureIndex>& order, double& best, std::size_t& nodes,
                std::size_t budget) const {
    charge(nodes, budget);
    if (best >= 0.0) {
      const double bound = pg.upper_bound(state);
      if (bound <= best || gains_tie(bound, best)) return;
    }
    if (state.complete()) {
      const Product p = state.to_product();
      if (is_valid_product(fm_, p)) best = std::max(best, pg.evaluate(p));
      return;
    }
    FeatureIndex f = 0;
    for (FeatureIndex t : order) {
      if (!state.decided(t)) {
        f = t;
        break;
      }
    }
    const bool first = pg.literal_weight(f, true) >= pg.literal_weight(f, false);
    for (bool selected : {first, !first}) {
      PartialAssignment child = state;
      if (child.assign({f, selected})) maximize(pg, child, order, best, nodes, budget);
    }
  }

  // Depth-first in Product order. With i the first undecided feature: if a
  // selected feature lies above i, every completion selecting i precedes
  // every completion deselecting it; otherwise the completion deselecting
  // everything left comes first of all.
  bool smallest_attaining(const PairGains& pg, const PartialAssignment& state, double target,
                          std::optional<Product>& winner, std::size_t& nodes,
                          std::size_t budget) const {
    charge(nodes, budget);
    auto attains = [&](double g) { return g >= target || gains_tie(g, target); };
    const double bound = pg.upper_bound(state);
    if (!attains(bound)) return false;
    if (state.complete()) {
      Product p = state.to_product();
      if (is_valid_product(fm_, p) && attains(pg.evaluate(p))) {
        winner = std::move(p);
        return true;
      }
      return false;
    }
    const FeatureIndex i = first_undecided(state);
    bool selected_above = false;
    for (FeatureIndex f = i + 1; f < state.size(); ++f) {
      if (state.value(f) == Value::Selected) {
        selected_above = true;
        break;
      }
    }
    if (!selected_above) {
      // Leaving every undecided feature out, checked without propagation:
      // propagation could force selections and lose the ordering argument.
      Product p = state.to_product();
      if (is_valid_product(fm_, p) && attains(pg.evaluate(p))) {
        winner = std::move(p);
        return true;
      }
    }
    for (bool selected : {true, false}) {
      PartialAssignment child = state;
      if (child.assign({i, selected}) &&
          smallest_attaining(pg, child, target, winner, nodes, budget)) {
        return true;
      }
    }
    return false;
  }

  void nearest(const PartialAssignment& state, const Product& target, std::optional<Product>& best,
               std::size_t& best_distance, std::size_t& nodes, std::size_t budget) const {
    ++nodes;
    if (best && nodes > budget) return;
    std::size_t distance = 0;
    for (FeatureIndex f = 0; f < state.size(); ++f) {
      if (state.decided(f) && (state.value(f) == Value::Selected) != target.contains(f)) ++distance;
    }
    if (distance >= best_distance) return;
    if (state.complete()) {
      Product p = state.to_product();
      if (is_valid_product(fm_, p)) {
        best = std::move(p);
        best_distance = distance;
      }
      return;
    }
    FeatureIndex f = 0;
    for (FeatureIndex t : fm_.tree_order()) {
      if (!state.decided(t)) {
        f = t;
        break;
      }
    }
    const bool preferred = target.contains(f);
    for (bool selected : {preferred, !preferred}) {
      PartialAssignment child = state;
      if (child.assign({f, selected})) nearest(child, target, best, best_distance, nodes, budget);
    }
  }

  FeatureModel fm_;
  std::shared_ptr<const ClauseSet> clauses_;
  PartialAssignment root_;
  std::size_t max_restarts_;
  bool satisfiable_ = false;
};

inline Product random_valid_product(const FeatureModel& fm, Rng& rng) {
  return ProductSpace(fm).random_valid_product(rng);
}

inline BestProduct best_product(const FeatureModel& fm, std::span<const Configuration> gains) {
  return ProductSpace(fm).best_product(gains);
}

}  // namespace splcover
