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

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "splcover/errors.hpp"
#include "splcover/feature_model.hpp"
#include "splcover/product.hpp"
#include "splcover/propagation.hpp"

namespace splcover {

// Two distinct features with polarities, stored canonically with
// first.feature < second.feature.
class Pair {
 public:
  Pair(Literal a, Literal b) : first_(a), second_(b) {
    if (a.feature == b.feature) throw InputError("pair endpoints must be distinct features");
    if (b.feature < a.feature) std::swap(first_, second_);
  }

  const Literal& first() const { return first_; }
  const Literal& second() const { return second_; }

  bool covered_by(const Product& p) const {
    return p.contains(first_.feature) == first_.selected &&
           p.contains(second_.feature) == second_.selected;
  }

  // 0..3: which of the four polarity forms of the feature pair this is.
  int form() const { return (first_.selected ? 2 : 0) + (second_.selected ? 1 : 0); }

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair& a, const Pair& b) {
    return std::tuple(a.first_.feature, a.second_.feature, a.first_.selected, a.second_.selected) <=>
           std::tuple(b.first_.feature, b.second_.feature, b.first_.selected, b.second_.selected);
  }

 private:
  Literal first_;
  Literal second_;
};

inline std::string to_string(const FeatureModel& fm, const Pair& pr) {
  auto lit = [&](const Literal& l) {
    return (l.selected ? "+" : "-") + fm.feature_name(l.feature);
  };
  return "(" + lit(pr.first()) + "," + lit(pr.second()) + ")";
}

// A pair together with its weight.
struct Configuration {
  Pair pair;
  double weight;
};

struct PrioritizedProduct {
  Product product;
  double weight;
};

// Weighted pairs keyed canonically. The total is cached at construction.
class ConfigurationSet {
 public:
  ConfigurationSet() = default;
  explicit ConfigurationSet(std::map<Pair, double> configs) : configs_(std::move(configs)) {
    for (const auto& [pair, w] : configs_) {
      if (!(w >= 0.0)) throw InputError("configuration weights must be non-negative");
      total_weight_ += w;
    }
  }

  const std::map<Pair, double>& configs() const { return configs_; }
  std::size_t size() const { return configs_.size(); }
  bool empty() const { return configs_.empty(); }
  double total_weight() const { return total_weight_; }

  double weight(const Pair& pr) const {
    auto it = configs_.find(pr);
    return it == configs_.end() ? 0.0 : it->second;
  }
  bool contains(const Pair& pr) const { return configs_.count(pr) != 0; }

  // Configurations with weight > 0, the ones a covering array must cover.
  std::vector<Configuration> obligations() const {
    std::vector<Configuration> out;
    for (const auto& [pair, w] : configs_) {
      if (w > 0.0) out.push_back({pair, w});
    }
    return out;
  }

  std::vector<Configuration> all() const {
    std::vector<Configuration> out;
    out.reserve(configs_.size());
    for (const auto& [pair, w] : configs_) out.push_back({pair, w});
    return out;
  }

 private:
  std::map<Pair, double> configs_;
  double total_weight_ = 0.0;
};

// Every pair covered by p: one polarity form per feature pair, n(n-1)/2 in
// canonical order.
inline std::vector<Pair> configurations_of(const FeatureModel& fm, const Product& p) {
  const std::size_t n = fm.size();
  std::vector<Pair> out;
  out.reserve(n * (n - 1) / 2);
  for (FeatureIndex i = 0; i < n; ++i) {
    for (FeatureIndex j = i + 1; j < n; ++j) {
      out.emplace_back(Literal{i, p.contains(i)}, Literal{j, p.contains(j)});
    }
  }
  return out;
}

// Sums the weight of every prioritized product onto each pair it covers.
inline ConfigurationSet derive_configurations(const FeatureModel& fm,
                                              std::span<const PrioritizedProduct> pps) {
  std::map<Pair, double> acc;
  for (std::size_t i = 0; i < pps.size(); ++i) {
    if (!is_valid_product(fm, pps[i].product)) {
      throw InputError("prioritized product #" + std::to_string(i) + " is not a valid product");
    }
    if (!(pps[i].weight >= 0.0) || !std::isfinite(pps[i].weight)) {
      throw InputError("prioritized product #" + std::to_string(i) + " has a negative weight");
    }
    for (const Pair& pr : configurations_of(fm, pps[i].product)) acc[pr] += pps[i].weight;
  }
  return ConfigurationSet(std::move(acc));
}

namespace detail {

inline double covered_weight(const ConfigurationSet& c, const std::vector<bool>& covered) {
  double sum = 0.0;
  std::size_t k = 0;
  for (const auto& [pair, w] : c.configs()) {
    if (covered[k++]) sum += w;
  }
  return sum;
}

}  // namespace detail

// Weighted coverage of a product collection. Sums in canonical pair order,
// so a suite covering everything yields exactly 1.0.
inline double coverage(std::span<const Product> suite, const ConfigurationSet& c) {
  if (!(c.total_weight() > 0.0)) {
    throw UndefinedCoverage("coverage is undefined: total configuration weight is zero");
  }
  std::vector<bool> covered(c.size(), false);
  std::size_t k = 0;
  for (const auto& [pair, w] : c.configs()) {
    for (const Product& p : suite) {
      if (pair.covered_by(p)) {
        covered[k] = true;
        break;
      }
    }
    ++k;
  }
  return detail::covered_weight(c, covered) / c.total_weight();
}

// Coverage after each prefix: result[k] = coverage(suite[0..k]).
inline std::vector<double> prefix_coverage(std::span<const Product> suite,
                                           const ConfigurationSet& c) {
  if (!(c.total_weight() > 0.0)) {
    throw UndefinedCoverage("coverage is undefined: total configuration weight is zero");
  }
  std::vector<bool> covered(c.size(), false);
  std::vector<double> out;
  out.reserve(suite.size());
  for (const Product& p : suite) {
    std::size_t k = 0;
    for (const auto& [pair, w] : c.configs()) {
      if (!covered[k] && pair.covered_by(p)) covered[k] = true;
      ++k;
    }
    out.push_back(detail::covered_weight(c, covered) / c.total_weight());
  }
  return out;
}

// True when every weight-positive configuration is covered by some product.
inline bool covers_obligations(std::span<const Product> suite, const ConfigurationSet& c) {
  for (const auto& [pair, w] : c.configs()) {
    if (w <= 0.0) continue;
    bool hit = false;
    for (const Product& p : suite) {
      if (pair.covered_by(p)) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

inline const std::vector<int>& default_levels() {
  static const std::vector<int> levels{50, 75, 80, 85, 90, 95, 96, 97, 98, 99, 100};
  return levels;
}

// Thrown by products_to_levels when the suite never reaches full coverage.
class IncompleteSuite : public Error {
 public:
  IncompleteSuite(double max_coverage)
      : Error("suite does not reach 100% coverage (max " + std::to_string(max_coverage * 100.0) +
              "%)"),
        max_coverage_(max_coverage) {}
  double max_coverage() const { return max_coverage_; }

 private:
  double max_coverage_;
};

// Absolute slack when comparing a coverage ratio against a level threshold.
inline constexpr double kLevelTolerance = 1e-12;

// For each level L (percent), the smallest prefix length k with
// coverage(prefix_k) >= L/100.
inline std::map<int, std::size_t> products_to_levels(std::span<const Product> suite,
                                                     const ConfigurationSet& c,
                                                     std::span<const int> levels) {
  const std::vector<double> prefix = prefix_coverage(suite, c);
  const double reached = prefix.empty() ? 0.0 : prefix.back();
  if (reached < 1.0) throw IncompleteSuite(reached);
  std::map<int, std::size_t> out;
  for (int level : levels) {
    const double threshold = static_cast<double>(level) / 100.0;
    std::size_t k = 0;
    while (prefix[k] + kLevelTolerance < threshold) ++k;
    out[level] = k + 1;
  }
  return out;
}

}  // namespace splcover
