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
#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "splcover/cmsa.hpp"
#include "splcover/errors.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product_space.hpp"
#include "splcover/random.hpp"

namespace splcover {

// Ordered suite plus the marginal weighted gain of each appended product.
struct ConstructedSuite {
  std::vector<Product> suite;
  std::vector<double> gains;
};

namespace detail {

// Bookkeeping shared by the constructive baselines.
class Obligations {
 public:
  explicit Obligations(const ConfigurationSet& c)
      : items_(require_obligations(c)), covered_(items_.size(), false), remaining_(items_.size()) {}

  bool done() const { return remaining_ == 0; }

  double gain(const Product& p) const {
    double g = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!covered_[i] && items_[i].pair.covered_by(p)) g += items_[i].weight;
    }
    return g;
  }

  void cover(const Product& p) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!covered_[i] && items_[i].pair.covered_by(p)) {
        covered_[i] = true;
        --remaining_;
      }
    }
  }

  std::vector<Configuration> uncovered() const {
    std::vector<Configuration> out;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!covered_[i]) out.push_back(items_[i]);
    }
    return out;
  }

  [[noreturn]] void stall(const FeatureModel& fm, const char* who) const {
    throw UncoverableError(std::string(who) + " stalled; uncoverable configurations:" +
                           describe_uncovered(fm, items_, covered_));
  }

 private:
  std::vector<Configuration> items_;
  std::vector<bool> covered_;
  std::size_t remaining_;
};

}  // namespace detail

// Repeatedly appends the valid product of maximum marginal weighted gain,
// found exactly, until every weight-positive configuration is covered.
inline ConstructedSuite weighted_greedy(const ProductSpace& space, const ConfigurationSet& c,
                                        std::size_t node_budget = ProductSpace::kUnlimited) {
  detail::Obligations todo(c);
  ConstructedSuite out;
  while (!todo.done()) {
    const std::vector<Configuration> gains = todo.uncovered();
    BestProduct best = space.best_product(gains, node_budget);
    if (!(best.gain > 0.0)) todo.stall(space.model(), "weighted greedy");
    todo.cover(best.product);
    out.suite.push_back(std::move(best.product));
    out.gains.push_back(best.gain);
  }
  return out;
}

struct PpgsParams {
  std::size_t population = 10;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  // Fitness evaluations per constructive round.
  std::size_t evaluations = 1000;
  std::uint64_t seed = 0;
  // Consecutive rounds without a positive-gain product before giving up.
  std::size_t max_idle_rounds = 50;
  // Node budget of each repair search.
  std::size_t repair_budget = 5000;

  void validate() const {
    if (population < 2) throw InputError("PPGS population must be at least 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
      throw InputError("crossover rate must lie in [0,1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
      throw InputError("mutation rate must lie in [0,1]");
    }
    if (evaluations < population) throw InputError("PPGS evaluations must cover the population");
  }
};

struct PpgsResult {
  ConstructedSuite constructed;
  std::size_t rounds = 0;
  std::size_t evaluations = 0;
  // Evaluated individuals that failed is_valid_product; zero when repair works.
  std::size_t invalid_evaluations = 0;
};

namespace detail {

struct Individual {
  Product genes;
  double fitness;
};

// Binary tournament; the first draw wins ties.
inline const Individual& tournament(const std::vector<Individual>& pop, Rng& rng) {
  const Individual& a = pop[uniform_index(rng, pop.size())];
  const Individual& b = pop[uniform_index(rng, pop.size())];
  return b.fitness > a.fitness ? b : a;
}

// Each selected feature, with the given probability, is swapped for a
// randomly chosen deselected one.
inline void mutate(Product& genes, double rate, Rng& rng) {
  for (FeatureIndex f : genes.selected()) {
    if (!(uniform01(rng) < rate)) continue;
    std::vector<FeatureIndex> off;
    for (FeatureIndex g = 0; g < genes.size(); ++g) {
      if (!genes.contains(g)) off.push_back(g);
    }
    if (off.empty()) continue;
    genes.set(f, false);
    genes.set(off[uniform_index(rng, off.size())], true);
  }
}

}  // namespace detail

// Constructive genetic algorithm: each round evolves a population under
// binary tournament, one-point crossover and swap mutation, with offspring
// repaired to the nearest valid product; fitness is the marginal weighted
// gain. The round's best individual is appended until every weight-positive
// configuration is covered.
inline PpgsResult ppgs(const ProductSpace& space, const ConfigurationSet& c,
                       const PpgsParams& params) {
  params.validate();
  const FeatureModel& fm = space.model();
  const std::size_t n = fm.size();
  detail::Obligations todo(c);
  PpgsResult out;
  Rng rng(derive_seed(params.seed, {0x5050u}));
  std::size_t idle = 0;

  while (!todo.done()) {
    std::size_t evals = 0;
    auto evaluate = [&](Product genes) {
      ++evals;
      ++out.evaluations;
      if (!is_valid_product(fm, genes)) ++out.invalid_evaluations;
      return detail::Individual{std::move(genes), 0.0};
    };
    auto score = [&](detail::Individual ind) {
      ind.fitness = todo.gain(ind.genes);
      return ind;
    };

    std::vector<detail::Individual> pop;
    for (std::size_t i = 0; i < params.population; ++i) {
      pop.push_back(score(evaluate(space.random_valid_product(rng))));
    }
    auto better = [](const detail::Individual& a, const detail::Individual& b) {
      if (gains_tie(a.fitness, b.fitness)) return a.genes < b.genes;
      return a.fitness > b.fitness;
    };
    detail::Individual best = *std::min_element(pop.begin(), pop.end(), better);

    while (evals < params.evaluations) {
      std::vector<detail::Individual> offspring;
      while (offspring.size() < params.population && evals < params.evaluations) {
        Product a = detail::tournament(pop, rng).genes;
        Product b = detail::tournament(pop, rng).genes;
        if (n >= 2 && uniform01(rng) < params.crossover_rate) {
          const std::size_t cut = 1 + uniform_index(rng, n - 1);
          for (FeatureIndex f = cut; f < n; ++f) {
            const bool fa = a.contains(f);
            a.set(f, b.contains(f));
            b.set(f, fa);
          }
        }
        for (Product* child : {&a, &b}) {
          if (offspring.size() >= params.population || evals >= params.evaluations) break;
          detail::mutate(*child, params.mutation_rate, rng);
          Product repaired = is_valid_product(fm, *child)
                                 ? std::move(*child)
                                 : space.nearest_valid_product(*child, params.repair_budget);
          offspring.push_back(score(evaluate(std::move(repaired))));
          if (better(offspring.back(), best)) best = offspring.back();
        }
      }
      // (mu + lambda) survival.
      for (auto& o : offspring) pop.push_back(std::move(o));
      std::stable_sort(pop.begin(), pop.end(), better);
      pop.resize(params.population);
    }
    ++out.rounds;

    if (best.fitness > 0.0) {
      idle = 0;
      todo.cover(best.genes);
      out.constructed.gains.push_back(best.fitness);
      out.constructed.suite.push_back(std::move(best.genes));
    } else if (++idle >= params.max_idle_rounds) {
      todo.stall(fm, "PPGS");
    }
  }
  return out;
}

// Greedy restricted to a pool of random valid products. The pool is redrawn
// whenever its best marginal gain is zero. A stand-in baseline; it is not
// an implementation of prioritized ICPL.
inline ConstructedSuite sampled_greedy(const ProductSpace& space, const ConfigurationSet& c,
                                       std::size_t pool_size, std::uint64_t seed) {
  if (pool_size == 0) throw InputError("pool size must be positive");
  detail::Obligations todo(c);
  Rng rng(derive_seed(seed, {0x5a3du}));
  ConstructedSuite out;

  // Up to pool_size distinct products from at most 20 * pool_size draws.
  auto draw_pool = [&] {
    std::set<Product> pool;
    for (std::size_t d = 0; d < 20 * pool_size && pool.size() < pool_size; ++d) {
      pool.insert(space.random_valid_product(rng));
    }
    return std::vector<Product>(pool.begin(), pool.end());
  };

  std::vector<Product> pool = draw_pool();
  std::size_t barren = 0;  // samples drawn since the last useful product
  while (!todo.done()) {
    std::size_t best = pool.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double g = todo.gain(pool[i]);
      if (g > 0.0 && (best == pool.size() || (!gains_tie(g, best_gain) && g > best_gain))) {
        best = i;
        best_gain = g;
      }
    }
    if (best == pool.size()) {
      barren += pool_size;
      if (barren >= kStallBound) todo.stall(space.model(), "sampled greedy");
      pool = draw_pool();
      continue;
    }
    barren = 0;
    todo.cover(pool[best]);
    out.suite.push_back(pool[best]);
    out.gains.push_back(best_gain);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace splcover
