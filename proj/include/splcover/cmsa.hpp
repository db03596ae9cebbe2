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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splcover/errors.hpp"
#include "splcover/exact_setcover.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product_space.hpp"
#include "splcover/random.hpp"

namespace splcover {

// Consecutive rejected samples after which construction gives up.
inline constexpr std::size_t kStallBound = 10'000;

namespace detail {

inline std::string describe_uncovered(const FeatureModel& fm,
                                      const std::vector<Configuration>& obligations,
                                      const std::vector<bool>& covered) {
  std::string out;
  std::size_t listed = 0;
  for (std::size_t i = 0; i < obligations.size(); ++i) {
    if (covered[i]) continue;
    if (listed == 20) {
      out += " ...";
      break;
    }
    out += (listed++ == 0 ? " " : ", ") + to_string(fm, obligations[i].pair);
  }
  return out;
}

inline std::vector<Configuration> require_obligations(const ConfigurationSet& c) {
  std::vector<Configuration> obligations = c.obligations();
  if (obligations.empty()) throw InputError("no weight-positive configurations");
  return obligations;
}

}  // namespace detail

// Random valid products are drawn and kept only when they cover at least one
// still-uncovered weight-positive configuration, until none remain. The
// result is in acceptance order and covers every obligation.
inline std::vector<Product> probabilistic_solution(const ProductSpace& space,
                                                   const ConfigurationSet& c, Rng& rng) {
  const std::vector<Configuration> obligations = detail::require_obligations(c);
  std::vector<bool> covered(obligations.size(), false);
  std::size_t remaining = obligations.size();
  std::vector<Product> solution;
  std::size_t rejected = 0;
  while (remaining > 0) {
    Product x = space.random_valid_product(rng);
    bool useful = false;
    for (std::size_t i = 0; i < obligations.size(); ++i) {
      if (!covered[i] && obligations[i].pair.covered_by(x)) {
        covered[i] = true;
        --remaining;
        useful = true;
      }
    }
    if (useful) {
      solution.push_back(std::move(x));
      rejected = 0;
    } else if (++rejected >= kStallBound) {
      throw UncoverableError("no sampled product covers the remaining configurations:" +
                             detail::describe_uncovered(space.model(), obligations, covered));
    }
  }
  return solution;
}

// The components the exact solver sees, each with its age.
class SubInstance {
 public:
  const std::map<Product, std::size_t>& components() const { return ages_; }
  std::size_t size() const { return ages_.size(); }
  bool contains(const Product& p) const { return ages_.count(p) != 0; }

  // New components enter with age 0; existing ones keep their age.
  void merge(std::span<const Product> products) {
    for (const Product& p : products) ages_.try_emplace(p, 0);
  }

  void set_age(const Product& p, std::size_t age) { ages_[p] = age; }

  std::vector<Product> products() const {
    std::vector<Product> out;
    out.reserve(ages_.size());
    for (const auto& [p, age] : ages_) out.push_back(p);
    return out;
  }

 private:
  std::map<Product, std::size_t> ages_;
};

// Solution members reset to age 0; everything else ages by one and leaves
// the sub-instance when its age reaches age_max.
inline SubInstance adapt(SubInstance sub, std::span<const Product> solution, std::size_t age_max) {
  SubInstance out;
  for (const auto& [p, age] : sub.components()) {
    bool in_solution = false;
    for (const Product& s : solution) {
      if (s == p) {
        in_solution = true;
        break;
      }
    }
    if (in_solution) {
      out.set_age(p, 0);
    } else if (age + 1 < age_max) {
      out.set_age(p, age + 1);
    }
  }
  return out;
}

// Greedy sequencing: next is the member adding the most not-yet-covered
// weight (smallest product on ties). Every member is emitted.
inline std::vector<Product> order_suite(std::span<const Product> suite, const ConfigurationSet& c) {
  const std::vector<Configuration> all = c.all();
  std::vector<bool> covered(all.size(), false);
  std::vector<bool> used(suite.size(), false);
  std::vector<Product> out;
  out.reserve(suite.size());
  for (std::size_t step = 0; step < suite.size(); ++step) {
    std::size_t best = suite.size();
    double best_gain = -1.0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      if (used[i]) continue;
      double g = 0.0;
      for (std::size_t k = 0; k < all.size(); ++k) {
        if (!covered[k] && all[k].pair.covered_by(suite[i])) g += all[k].weight;
      }
      const bool better = best == suite.size() ||
                          (gains_tie(g, best_gain) ? suite[i] < suite[best] : g > best_gain);
      if (better) {
        best = i;
        best_gain = g;
      }
    }
    used[best] = true;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (all[k].pair.covered_by(suite[best])) covered[k] = true;
    }
    out.push_back(suite[best]);
  }
  return out;
}

struct CmsaParams {
  std::size_t n_a = 5;
  std::size_t age_max = 4;
  // Loop budget: stop after this many iterations and/or once this much wall
  // time has elapsed, checked at the loop head. At least one must be set.
  std::optional<std::size_t> iterations;
  std::optional<double> time_limit_seconds;
  std::uint64_t seed = 0;
  // Node budget handed to every sub-instance solve.
  std::size_t node_budget = 200'000;
  // Run the n_a constructions of an iteration on separate threads. Results
  // do not depend on this flag.
  bool parallel = false;

  void validate() const {
    if (n_a < 1) throw InputError("n_a must be at least 1");
    if (age_max < 1) throw InputError("age_max must be at least 1");
    if (!iterations && !time_limit_seconds) throw InputError("CMSA needs an iteration or time budget");
    if (iterations && *iterations == 0) throw InputError("iteration budget must be positive");
    if (time_limit_seconds && !(*time_limit_seconds > 0.0)) {
      throw InputError("time limit must be positive");
    }
    if (node_budget == 0) throw InputError("node budget must be positive");
  }
};

struct CmsaIteration {
  std::size_t subinstance_size;
  std::size_t solution_size;
  std::size_t incumbent_size;
  bool optimal;

  friend bool operator==(const CmsaIteration&, const CmsaIteration&) = default;
};

struct CmsaResult {
  std::vector<Product> suite;  // best solution, greedy-ordered
  std::size_t iterations = 0;
  std::vector<CmsaIteration> log;
};

// Exact minimum cover of the obligations using only sub-instance components.
// Returns the chosen components and whether the search closed.
inline std::pair<std::vector<Product>, bool> solve_subinstance(
    const SubInstance& sub, const std::vector<Configuration>& obligations,
    std::size_t node_budget) {
  CoverInstance inst;
  inst.universe_size = obligations.size();
  const std::vector<Product> candidates = sub.products();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<std::size_t> elems;
    for (std::size_t e = 0; e < obligations.size(); ++e) {
      if (obligations[e].pair.covered_by(candidates[i])) elems.push_back(e);
    }
    inst.add(i, elems);
  }
  const CoverSolution sol = solve_min_cover(inst, node_budget);
  std::vector<Product> chosen;
  for (std::size_t id : sol.chosen) chosen.push_back(candidates[id]);
  return {std::move(chosen), sol.optimal};
}

inline CmsaResult run_cmsa(const ProductSpace& space, const ConfigurationSet& c,
                           const CmsaParams& params) {
  params.validate();
  const std::vector<Configuration> obligations = detail::require_obligations(c);
  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (!params.time_limit_seconds) return false;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count() >= *params.time_limit_seconds;
  };

  CmsaResult result;
  std::optional<std::vector<Product>> best;
  SubInstance sub;
  for (std::size_t it = 0;; ++it) {
    if (params.iterations && it >= *params.iterations) break;
    if (it > 0 && out_of_time()) break;

    std::vector<std::vector<Product>> constructed(params.n_a);
    auto construct = [&](std::size_t t) {
      Rng rng(derive_seed(params.seed, {it, t}));
      return probabilistic_solution(space, c, rng);
    };
    if (params.parallel && params.n_a > 1) {
      std::vector<std::future<std::vector<Product>>> jobs;
      for (std::size_t t = 0; t < params.n_a; ++t) {
        jobs.push_back(std::async(std::launch::async, construct, t));
      }
      for (std::size_t t = 0; t < params.n_a; ++t) constructed[t] = jobs[t].get();
    } else {
      for (std::size_t t = 0; t < params.n_a; ++t) constructed[t] = construct(t);
    }
    for (const auto& sol : constructed) sub.merge(sol);

    auto [solution, optimal] = solve_subinstance(sub, obligations, params.node_budget);
    if (!best || solution.size() < best->size()) best = solution;
    result.log.push_back({sub.size(), solution.size(), best->size(), optimal});
    sub = adapt(std::move(sub), solution, params.age_max);
    result.iterations = it + 1;
  }
  result.suite = order_suite(*best, c);
  return result;
}

}  // namespace splcover
