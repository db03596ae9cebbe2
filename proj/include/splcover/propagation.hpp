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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "splcover/feature_model.hpp"
#include "splcover/product.hpp"

namespace splcover {

// A feature with a polarity: selected (in S) or deselected (in S-bar).
struct Literal {
  FeatureIndex feature;
  bool selected;

  Literal negated() const { return {feature, !selected}; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// CNF encoding of a feature model. The clause set is satisfied by a total
// assignment exactly when is_valid_product holds for it.
class ClauseSet {
 public:
  explicit ClauseSet(const FeatureModel& fm) : feature_count_(fm.size()) {
    add({{fm.root(), true}});
    for (const auto& rel : fm.relations()) {
      const FeatureIndex p = rel.parent;
      for (FeatureIndex c : rel.children) add({{c, false}, {p, true}});
      switch (rel.kind) {
        case RelationKind::Mandatory:
          add({{p, false}, {rel.children[0], true}});
          break;
        case RelationKind::Optional:
          break;
        case RelationKind::Xor:
        case RelationKind::Or: {
          std::vector<Literal> some{{p, false}};
          for (FeatureIndex c : rel.children) some.push_back({c, true});
          add(std::move(some));
          if (rel.kind == RelationKind::Xor) {
            for (std::size_t i = 0; i < rel.children.size(); ++i) {
              for (std::size_t j = i + 1; j < rel.children.size(); ++j) {
                add({{rel.children[i], false}, {rel.children[j], false}});
              }
            }
          }
          break;
        }
      }
    }
    for (const auto& c : fm.ctcs()) {
      if (c.kind == ConstraintKind::Requires) {
        add({{c.a, false}, {c.b, true}});
      } else {
        add({{c.a, false}, {c.b, false}});
      }
    }
    occurrences_.assign(feature_count_, {});
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      for (const Literal& l : clauses_[i]) occurrences_[l.feature].push_back(i);
    }
  }

  std::size_t feature_count() const { return feature_count_; }
  const std::vector<std::vector<Literal>>& clauses() const { return clauses_; }
  const std::vector<std::size_t>& occurrences(FeatureIndex f) const { return occurrences_[f]; }

 private:
  void add(std::vector<Literal> clause) { clauses_.push_back(std::move(clause)); }

  std::size_t feature_count_;
  std::vector<std::vector<Literal>> clauses_;
  std::vector<std::vector<std::size_t>> occurrences_;
};

enum class Value : std::int8_t { Deselected = 0, Selected = 1, Undecided = 2 };

// Search state over a ClauseSet, closed under unit propagation after every
// successful extension. Copyable; branching copies the state.
class PartialAssignment {
 public:
  explicit PartialAssignment(std::shared_ptr<const ClauseSet> clauses)
      : clauses_(std::move(clauses)),
        values_(clauses_->feature_count(), Value::Undecided),
        undecided_(clauses_->feature_count()) {}

  // Starts from the empty assignment and propagates unit clauses. Returns
  // false if the clause set is already contradictory.
  bool initialize() {
    for (std::size_t i = 0; i < clauses_->clauses().size(); ++i) {
      const auto& clause = clauses_->clauses()[i];
      if (clause.size() == 1 && !assign(clause[0])) return false;
    }
    return true;
  }

  Value value(FeatureIndex f) const { return values_[f]; }
  bool decided(FeatureIndex f) const { return values_[f] != Value::Undecided; }
  bool complete() const { return undecided_ == 0; }
  std::size_t undecided_count() const { return undecided_; }
  std::size_t size() const { return values_.size(); }

  // True when the literal holds, false when it is contradicted, and
  // undecided otherwise.
  Value literal_value(const Literal& l) const {
    const Value v = values_[l.feature];
    if (v == Value::Undecided) return v;
    return (v == Value::Selected) == l.selected ? Value::Selected : Value::Deselected;
  }

  // Sets the literal and runs unit propagation to a fixpoint. Returns false
  // on conflict; the state is then unusable and should be discarded.
  bool assign(const Literal& lit) {
    const Value current = literal_value(lit);
    if (current == Value::Selected) return true;
    if (current == Value::Deselected) return false;
    std::vector<Literal> queue{lit};
    set(lit);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const FeatureIndex f = queue[head].feature;
      for (std::size_t ci : clauses_->occurrences(f)) {
        const auto& clause = clauses_->clauses()[ci];
        const Literal* open = nullptr;
        std::size_t open_count = 0;
        bool satisfied = false;
        for (const Literal& l : clause) {
          const Value v = literal_value(l);
          if (v == Value::Selected) {
            satisfied = true;
            break;
          }
          if (v == Value::Undecided) {
            ++open_count;
            open = &l;
          }
        }
        if (satisfied) continue;
        if (open_count == 0) return false;
        if (open_count == 1) {
          set(*open);
          queue.push_back(*open);
        }
      }
    }
    return true;
  }

  // Undecided features read as deselected.
  Product to_product() const {
    Product p(values_.size());
    for (FeatureIndex f = 0; f < values_.size(); ++f) p.set(f, values_[f] == Value::Selected);
    return p;
  }

  const ClauseSet& clause_set() const { return *clauses_; }

 private:
  void set(const Literal& l) {
    values_[l.feature] = l.selected ? Value::Selected : Value::Deselected;
    --undecided_;
  }

  std::shared_ptr<const ClauseSet> clauses_;
  std::vector<Value> values_;
  std::size_t undecided_;
};

}  // namespace splcover
