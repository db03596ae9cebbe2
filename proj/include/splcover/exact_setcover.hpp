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
#include <functional>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "splcover/bitset.hpp"
#include "splcover/errors.hpp"

namespace splcover {

// Minimum-cardinality set cover: choose candidates whose union is the
// universe {0, ..., universe_size - 1}.
struct CoverInstance {
  struct Candidate {
    std::size_t id;
    DynamicBitset elements;
  };

  std::size_t universe_size = 0;
  std::vector<Candidate> sets;

  void add(std::size_t id, const std::vector<std::size_t>& elements) {
    DynamicBitset b(universe_size);
    for (std::size_t e : elements) b.set(e);
    sets.push_back({id, std::move(b)});
  }
};

struct CoverSolution {
  // Candidate ids of the chosen sets, in instance order.
  std::vector<std::size_t> chosen;
  bool optimal = false;
  std::size_t nodes_explored = 0;
};

// Classic greedy: repeatedly take the candidate covering the most uncovered
// elements (lowest position on ties). Returns positions into inst.sets.
inline std::vector<std::size_t> greedy_cover_positions(const CoverInstance& inst) {
  DynamicBitset uncovered(inst.universe_size);
  uncovered.set_all();
  std::vector<std::size_t> out;
  while (!uncovered.none()) {
    std::size_t best = inst.sets.size();
    std::size_t best_gain = 0;
    for (std::size_t s = 0; s < inst.sets.size(); ++s) {
      const std::size_t g = inst.sets[s].elements.count_and(uncovered);
      if (g > best_gain) {
        best_gain = g;
        best = s;
      }
    }
    if (best == inst.sets.size()) break;
    out.push_back(best);
    uncovered.subtract(inst.sets[best].elements);
  }
  return out;
}

namespace detail {

// Set cover after root reductions, in dense element and candidate indices.
class CoverSearch {
 public:
  CoverSearch(const CoverInstance& inst, std::size_t node_budget) : budget_(node_budget) {
    reduce(inst);
  }

  // Runs branch-and-bound below an incumbent of size `incumbent_size`.
  // Returns positions (into the original instance) of a strictly smaller
  // cover if one was found.
  std::vector<std::size_t> solve(std::size_t incumbent_size) {
    best_size_ = incumbent_size;
    if (fixed_.size() >= best_size_) {
      closed_ = true;
      return {};
    }
    DynamicBitset uncovered(elements_);
    uncovered.set_all();
    DynamicBitset allowed(cands_.size());
    allowed.set_all();
    std::vector<std::size_t> path;
    closed_ = true;
    search(uncovered, allowed, path);
    if (best_path_.empty() && !found_) return {};
    std::vector<std::size_t> out = fixed_;
    for (std::size_t c : best_path_) out.push_back(cand_origin_[c]);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool closed() const { return closed_; }
  std::size_t nodes() const { return nodes_; }

 private:
  void reduce(const CoverInstance& inst) {
    const std::size_t u = inst.universe_size;
    std::vector<bool> cand_alive(inst.sets.size(), true);
    std::vector<bool> elem_alive(u, true);

    // Duplicate and dominated candidates, then dominated elements, then
    // essential candidates, to a fixpoint.
    auto cand_view = [&](std::size_t s) {
      DynamicBitset b = inst.sets[s].elements;
      for (std::size_t e = 0; e < u; ++e) {
        if (!elem_alive[e]) b.reset(e);
      }
      return b;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<DynamicBitset> view(inst.sets.size());
      for (std::size_t s = 0; s < inst.sets.size(); ++s) {
        if (cand_alive[s]) view[s] = cand_view(s);
      }
      for (std::size_t s = 0; s < inst.sets.size(); ++s) {
        if (!cand_alive[s]) continue;
        if (view[s].none()) {
          cand_alive[s] = false;
          changed = true;
          continue;
        }
        for (std::size_t t = 0; t < inst.sets.size(); ++t) {
          if (t == s || !cand_alive[t]) continue;
          if (view[s].is_subset_of(view[t]) && (!(view[s] == view[t]) || t < s)) {
            cand_alive[s] = false;
            changed = true;
            break;
          }
        }
      }

      std::vector<DynamicBitset> column(u, DynamicBitset(inst.sets.size()));
      for (std::size_t s = 0; s < inst.sets.size(); ++s) {
        if (!cand_alive[s]) continue;
        inst.sets[s].elements.for_each([&](std::size_t e) {
          if (elem_alive[e]) column[e].set(s);
        });
      }
      for (std::size_t e = 0; e < u; ++e) {
        if (!elem_alive[e]) continue;
        for (std::size_t f = 0; f < u; ++f) {
          if (f == e || !elem_alive[f]) continue;
          // Covering f forces covering e when every candidate for f also covers e.
          if (column[f].is_subset_of(column[e]) && (!(column[f] == column[e]) || f < e)) {
            elem_alive[e] = false;
            changed = true;
            break;
          }
        }
      }

      for (std::size_t e = 0; e < u; ++e) {
        if (!elem_alive[e] || column[e].count() != 1) continue;
        std::size_t only = 0;
        column[e].for_each([&](std::size_t s) { only = s; });
        fixed_.push_back(only);
        cand_alive[only] = false;
        inst.sets[only].elements.for_each([&](std::size_t x) { elem_alive[x] = false; });
        changed = true;
      }
    }
    std::sort(fixed_.begin(), fixed_.end());

    std::vector<std::size_t> elem_dense(u, 0);
    elements_ = 0;
    for (std::size_t e = 0; e < u; ++e) {
      if (elem_alive[e]) elem_dense[e] = elements_++;
    }
    for (std::size_t s = 0; s < inst.sets.size(); ++s) {
      if (!cand_alive[s]) continue;
      DynamicBitset b(elements_);
      inst.sets[s].elements.for_each([&](std::size_t e) {
        if (elem_alive[e]) b.set(elem_dense[e]);
      });
      if (b.none()) continue;
      cand_origin_.push_back(s);
      cands_.push_back(std::move(b));
    }
    covering_.assign(elements_, {});
    for (std::size_t c = 0; c < cands_.size(); ++c) {
      cands_[c].for_each([&](std::size_t e) { covering_[e].push_back(c); });
    }
    column_.assign(elements_, DynamicBitset(cands_.size()));
    for (std::size_t e = 0; e < elements_; ++e) {
      for (std::size_t c : covering_[e]) column_[e].set(c);
    }
    scarce_order_.resize(elements_);
    std::iota(scarce_order_.begin(), scarce_order_.end(), std::size_t{0});
    std::stable_sort(scarce_order_.begin(), scarce_order_.end(), [&](std::size_t x, std::size_t y) {
      return covering_[x].size() < covering_[y].size();
    });
  }

  std::size_t lower_bound(const DynamicBitset& uncovered, const DynamicBitset& allowed) const {
    const std::size_t remaining = uncovered.count();
    if (remaining == 0) return 0;
    // Fewest sets whose widths could add up to what is left, from a width
    // histogram.
    std::vector<std::size_t>& hist = width_hist_;
    hist.assign(remaining + 1, 0);
    std::size_t widest = 0;
    allowed.for_each([&](std::size_t c) {
      const std::size_t w = cands_[c].count_and(uncovered);
      ++hist[w];
      widest = std::max(widest, w);
    });
    std::size_t by_width = 0;
    std::size_t sum = 0;
    for (std::size_t w = widest; w > 0 && sum < remaining; --w) {
      for (std::size_t k = hist[w]; k > 0 && sum < remaining; --k) {
        sum += w;
        ++by_width;
      }
    }
    if (sum < remaining) return remaining + best_size_;  // uncoverable

    // Elements no two of which share a candidate each need their own set.
    // Scanned scarce elements first.
    std::size_t independent = 0;
    DynamicBitset used(cands_.size());
    for (std::size_t e : scarce_order_) {
      if (!uncovered.test(e) || column_[e].intersects(used)) continue;
      ++independent;
      used.or_and(column_[e], allowed);
    }
    return std::max(by_width, independent);
  }

  void search(const DynamicBitset& uncovered, const DynamicBitset& allowed,
              std::vector<std::size_t>& path) {
    if (nodes_ >= budget_) {
      closed_ = false;
      return;
    }
    ++nodes_;
    const std::size_t depth = fixed_.size() + path.size();
    if (uncovered.none()) {
      if (depth < best_size_) {
        best_size_ = depth;
        best_path_ = path;
        found_ = true;
      }
      return;
    }
    if (depth + lower_bound(uncovered, allowed) >= best_size_) return;

    std::size_t pick = elements_;
    std::size_t fewest = cands_.size() + 1;
    uncovered.for_each([&](std::size_t e) {
      const std::size_t k = column_[e].count_and(allowed);
      if (k < fewest) {
        fewest = k;
        pick = e;
      }
    });
    if (fewest == 0) return;

    std::vector<std::pair<std::size_t, std::size_t>> children;  // (gain, candidate)
    for (std::size_t c : covering_[pick]) {
      if (allowed.test(c)) children.push_back({cands_[c].count_and(uncovered), c});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    DynamicBitset branch_allowed = allowed;
    for (const auto& [gain, c] : children) {
      DynamicBitset next = uncovered;
      next.subtract(cands_[c]);
      branch_allowed.reset(c);
      path.push_back(c);
      search(next, branch_allowed, path);
      path.pop_back();
      if (fixed_.size() + path.size() + 1 >= best_size_) break;
    }
  }

  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool closed_ = true;
  bool found_ = false;
  std::size_t best_size_ = 0;
  std::vector<std::size_t> best_path_;

  std::vector<std::size_t> fixed_;        // original positions forced in
  std::size_t elements_ = 0;              // dense element count
  std::vector<DynamicBitset> cands_;      // dense candidate -> dense elements
  std::vector<std::size_t> cand_origin_;  // dense candidate -> original position
  std::vector<std::vector<std::size_t>> covering_;
  std::vector<DynamicBitset> column_;  // dense element -> candidates covering it
  std::vector<std::size_t> scarce_order_;
  mutable std::vector<std::size_t> width_hist_;
};

}  // namespace detail

// Exact minimum cover by branch-and-bound: greedy incumbent, branching on the
// uncovered element with the fewest candidates, widest candidate first.
// `optimal` is true iff the search closed within node_budget; otherwise the
// best cover found is returned.
inline CoverSolution solve_min_cover(const CoverInstance& inst, std::size_t node_budget) {
  DynamicBitset all(inst.universe_size);
  for (const auto& s : inst.sets) {
    if (s.elements.size() != inst.universe_size) {
      throw InputError("cover candidate " + std::to_string(s.id) + " has the wrong universe size");
    }
    all |= s.elements;
  }
  if (all.count() != inst.universe_size) {
    throw UncoverableError("infeasible cover instance: " +
                           std::to_string(inst.universe_size - all.count()) +
                           " element(s) are covered by no candidate");
  }

  CoverSolution out;
  std::vector<std::size_t> positions = greedy_cover_positions(inst);
  std::sort(positions.begin(), positions.end());
  if (positions.size() <= 1) {
    out.optimal = true;
  } else {
    detail::CoverSearch search(inst, node_budget);
    std::vector<std::size_t> better = search.solve(positions.size());
    if (!better.empty()) positions = std::move(better);
    out.optimal = search.closed();
    out.nodes_explored = search.nodes();
  }
  for (std::size_t pos : positions) out.chosen.push_back(inst.sets[pos].id);
  return out;
}

}  // namespace splcover
