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
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "splcover/errors.hpp"
#include "splcover/product.hpp"

namespace splcover {

enum class RelationKind { Mandatory, Optional, Xor, Or };

inline std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Mandatory: return "mandatory";
    case RelationKind::Optional: return "optional";
    case RelationKind::Xor: return "xor";
    case RelationKind::Or: return "or";
  }
  return "?";
}

// Parent-to-children edge of the feature tree. Mandatory and Optional
// relations carry exactly one child; Xor and Or groups carry two or more.
struct Relation {
  RelationKind kind;
  FeatureIndex parent;
  std::vector<FeatureIndex> children;

  friend bool operator==(const Relation&, const Relation&) = default;
};

enum class ConstraintKind { Requires, Excludes };

inline std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::Requires ? "requires" : "excludes";
}

struct CrossTreeConstraint {
  ConstraintKind kind;
  FeatureIndex a;
  FeatureIndex b;

  friend bool operator==(const CrossTreeConstraint&, const CrossTreeConstraint&) = default;
};

// Immutable feature tree plus cross-tree constraints. Construction validates
// every structural invariant and throws InputError on violation.
class FeatureModel {
 public:
  FeatureModel(std::string name, std::vector<std::string> features, FeatureIndex root,
               std::vector<Relation> relations, std::vector<CrossTreeConstraint> ctcs)
      : name_(std::move(name)),
        features_(std::move(features)),
        root_(root),
        relations_(std::move(relations)),
        ctcs_(std::move(ctcs)) {
    validate();
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return features_.size(); }
  const std::vector<std::string>& features() const { return features_; }
  const std::string& feature_name(FeatureIndex f) const { return features_[f]; }
  FeatureIndex root() const { return root_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<CrossTreeConstraint>& ctcs() const { return ctcs_; }

  std::optional<FeatureIndex> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Parent of a non-root feature.
  std::optional<FeatureIndex> parent_of(FeatureIndex f) const {
    if (f == root_) return std::nullopt;
    return relations_[parent_relation_[f]].parent;
  }

  // Index into relations() of the relation that has f as a child.
  std::size_t parent_relation(FeatureIndex f) const { return parent_relation_[f]; }

  // Indices into relations() whose parent is f, in declaration order.
  const std::vector<std::size_t>& child_relations(FeatureIndex f) const {
    return child_relations_[f];
  }

  // Breadth-first feature order from the root.
  const std::vector<FeatureIndex>& tree_order() const { return tree_order_; }

  Product make_product(const std::vector<std::string>& selected_names) const {
    Product p(size());
    for (const auto& n : selected_names) {
      auto idx = index_of(n);
      if (!idx) throw InputError("unknown feature " + n);
      p.set(*idx, true);
    }
    return p;
  }

  std::vector<std::string> selected_names(const Product& p) const {
    std::vector<std::string> out;
    for (FeatureIndex f : p.selected()) out.push_back(features_[f]);
    return out;
  }

  friend bool operator==(const FeatureModel& a, const FeatureModel& b) {
    return a.name_ == b.name_ && a.features_ == b.features_ && a.root_ == b.root_ &&
           a.relations_ == b.relations_ && a.ctcs_ == b.ctcs_;
  }

 private:
  static constexpr std::size_t kNoRelation = static_cast<std::size_t>(-1);

  void validate() {
    const std::size_t n = features_.size();
    if (n == 0) throw InputError("missing root");
    for (std::size_t i = 0; i < n; ++i) {
      if (features_[i].empty()) throw InputError("empty feature identifier");
      if (!index_.emplace(features_[i], i).second) {
        throw InputError("duplicate feature " + features_[i]);
      }
    }
    if (root_ >= n) throw InputError("missing root");

    parent_relation_.assign(n, kNoRelation);
    child_relations_.assign(n, {});
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      const Relation& rel = relations_[r];
      const bool single = rel.kind == RelationKind::Mandatory || rel.kind == RelationKind::Optional;
      if (rel.parent >= n) throw InputError("unknown feature in relation");
      if (single && rel.children.size() != 1) {
        throw InputError(std::string(to_string(rel.kind)) + " relation needs exactly one child");
      }
      if (!single && rel.children.size() < 2) {
        throw InputError(std::string(to_string(rel.kind)) + " group under " +
                         features_[rel.parent] + " needs at least 2 children");
      }
      child_relations_[rel.parent].push_back(r);
      for (FeatureIndex c : rel.children) {
        if (c >= n) throw InputError("unknown feature in relation");
        if (c == root_) throw InputError("root " + features_[c] + " cannot have a parent");
        if (parent_relation_[c] != kNoRelation) {
          throw InputError("multiple parents for " + features_[c]);
        }
        parent_relation_[c] = r;
      }
    }
    for (std::size_t f = 0; f < n; ++f) {
      if (f != root_ && parent_relation_[f] == kNoRelation) {
        throw InputError("feature " + features_[f] + " is not attached to the tree");
      }
    }

    // Single parents everywhere; reachability from the root rules out cycles.
    std::vector<bool> seen(n, false);
    tree_order_.clear();
    tree_order_.push_back(root_);
    seen[root_] = true;
    for (std::size_t head = 0; head < tree_order_.size(); ++head) {
      for (std::size_t r : child_relations_[tree_order_[head]]) {
        for (FeatureIndex c : relations_[r].children) {
          if (!seen[c]) {
            seen[c] = true;
            tree_order_.push_back(c);
          }
        }
      }
    }
    if (tree_order_.size() != n) {
      for (std::size_t f = 0; f < n; ++f) {
        if (!seen[f]) throw InputError("cycle through feature " + features_[f]);
      }
    }

    for (const auto& c : ctcs_) {
      if (c.a >= n || c.b >= n) throw InputError("unknown feature in constraint");
      if (c.a == c.b) {
        throw InputError(std::string(to_string(c.kind)) + " constraint endpoints must differ: " +
                         features_[c.a]);
      }
    }
  }

  std::string name_;
  std::vector<std::string> features_;
  FeatureIndex root_;
  std::vector<Relation> relations_;
  std::vector<CrossTreeConstraint> ctcs_;

  std::unordered_map<std::string, FeatureIndex> index_;
  std::vector<std::size_t> parent_relation_;
  std::vector<std::vector<std::size_t>> child_relations_;
  std::vector<FeatureIndex> tree_order_;
};

namespace detail {

inline bool is_feature_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') ||
           ch == '_';
  });
}

}  // namespace detail

// Parses the line-based `.fm` format:
//
//   model <name>                  optional, first directive
//   root <f>
//   mandatory <parent> <child>
//   optional <parent> <child>
//   xor <parent> <c1> <c2> [...]
//   or <parent> <c1> <c2> [...]
//   requires <a> <b>
//   excludes <a> <b>
//
// `#` starts a comment. Feature order is order of first appearance in the
// root and relation directives.
inline FeatureModel parse_model(std::string_view text) {
  std::string name;
  std::vector<std::string> features;
  std::unordered_map<std::string, FeatureIndex> index;
  std::optional<FeatureIndex> root;
  std::vector<Relation> relations;
  std::vector<std::size_t> relation_lines;
  std::unordered_map<FeatureIndex, std::size_t> parent_line;

  struct PendingCtc {
    ConstraintKind kind;
    std::string a, b;
    std::size_t line;
  };
  std::vector<PendingCtc> pending;

  auto intern = [&](const std::string& f, std::size_t line) {
    if (!detail::is_feature_name(f)) throw InputError("invalid feature name '" + f + "'", line);
    auto [it, inserted] = index.emplace(f, features.size());
    if (inserted) features.push_back(f);
    return it->second;
  };

  std::size_t line_no = 0;
  bool any_directive = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::istringstream in{std::string(line)};
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const std::string& kw = tok[0];
    const bool first = !any_directive;
    any_directive = true;
    if (kw == "model") {
      if (!first) throw InputError("'model' must be the first directive", line_no);
      if (tok.size() != 2) throw InputError("expected: model <name>", line_no);
      name = tok[1];
    } else if (kw == "root") {
      if (tok.size() != 2) throw InputError("expected: root <feature>", line_no);
      if (root) throw InputError("duplicate root directive", line_no);
      const FeatureIndex r = intern(tok[1], line_no);
      if (parent_line.count(r)) {
        throw InputError("root " + tok[1] + " cannot have a parent", line_no);
      }
      root = r;
    } else if (kw == "mandatory" || kw == "optional" || kw == "xor" || kw == "or") {
      const bool single = kw == "mandatory" || kw == "optional";
      if (single && tok.size() != 3) throw InputError("expected: " + kw + " <parent> <child>", line_no);
      if (!single && tok.size() < 4) {
        throw InputError(kw + " group under " + (tok.size() > 1 ? tok[1] : std::string("?")) +
                             " needs at least 2 children",
                         line_no);
      }
      Relation rel;
      rel.kind = kw == "mandatory" ? RelationKind::Mandatory
                 : kw == "optional" ? RelationKind::Optional
                 : kw == "xor"      ? RelationKind::Xor
                                    : RelationKind::Or;
      rel.parent = intern(tok[1], line_no);
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const FeatureIndex c = intern(tok[i], line_no);
        if (c == rel.parent) throw InputError("feature " + tok[i] + " cannot be its own child", line_no);
        if (std::find(rel.children.begin(), rel.children.end(), c) != rel.children.end()) {
          throw InputError("duplicate feature " + tok[i] + " in group", line_no);
        }
        if (root && c == *root) throw InputError("root " + tok[i] + " cannot have a parent", line_no);
        if (!parent_line.emplace(c, line_no).second) {
          throw InputError("multiple parents for " + tok[i], line_no);
        }
        rel.children.push_back(c);
      }
      relations.push_back(std::move(rel));
      relation_lines.push_back(line_no);
    } else if (kw == "requires" || kw == "excludes") {
      if (tok.size() != 3) throw InputError("expected: " + kw + " <a> <b>", line_no);
      for (std::size_t i = 1; i < 3; ++i) {
        if (!detail::is_feature_name(tok[i])) {
          throw InputError("invalid feature name '" + tok[i] + "'", line_no);
        }
      }
      if (tok[1] == tok[2]) throw InputError(kw + " constraint endpoints must differ", line_no);
      pending.push_back({kw == "requires" ? ConstraintKind::Requires : ConstraintKind::Excludes,
                         tok[1], tok[2], line_no});
    } else {
      throw InputError("unknown directive '" + kw + "'", line_no);
    }
    if (end == text.size()) break;
  }

  if (!root) throw InputError("missing root");

  std::vector<bool> declared(features.size(), false);
  declared[*root] = true;
  for (const auto& [child, line] : parent_line) declared[child] = true;
  for (std::size_t r = 0; r < relations.size(); ++r) {
    if (!declared[relations[r].parent]) {
      throw InputError("unknown feature " + features[relations[r].parent], relation_lines[r]);
    }
  }

  std::vector<CrossTreeConstraint> ctcs;
  for (const auto& p : pending) {
    auto a = index.find(p.a);
    auto b = index.find(p.b);
    if (a == index.end()) throw InputError("unknown feature " + p.a, p.line);
    if (b == index.end()) throw InputError("unknown feature " + p.b, p.line);
    ctcs.push_back({p.kind, a->second, b->second});
  }

  return FeatureModel(std::move(name), std::move(features), *root, std::move(relations),
                      std::move(ctcs));
}

// Canonical `.fm` text: model line (when named), root, relations, then
// constraints, each in stored order.
inline std::string serialize_model(const FeatureModel& fm) {
  std::ostringstream out;
  if (!fm.name().empty()) out << "model " << fm.name() << '\n';
  out << "root " << fm.feature_name(fm.root()) << '\n';
  for (const auto& rel : fm.relations()) {
    out << to_string(rel.kind) << ' ' << fm.feature_name(rel.parent);
    for (FeatureIndex c : rel.children) out << ' ' << fm.feature_name(c);
    out << '\n';
  }
  for (const auto& c : fm.ctcs()) {
    out << to_string(c.kind) << ' ' << fm.feature_name(c.a) << ' ' << fm.feature_name(c.b) << '\n';
  }
  return out.str();
}

// Direct rule check of every tree relation and cross-tree constraint.
inline bool is_valid_product(const FeatureModel& fm, const Product& p) {
  if (p.size() != fm.size()) return false;
  if (!p.contains(fm.root())) return false;
  for (const auto& rel : fm.relations()) {
    const bool parent = p.contains(rel.parent);
    std::size_t on = 0;
    for (FeatureIndex c : rel.children) on += p.contains(c) ? 1 : 0;
    switch (rel.kind) {
      case RelationKind::Mandatory:
        if (parent != (on == 1)) return false;
        break;
      case RelationKind::Optional:
        if (on == 1 && !parent) return false;
        break;
      case RelationKind::Xor:
        if (parent ? on != 1 : on != 0) return false;
        break;
      case RelationKind::Or:
        if (parent ? on == 0 : on != 0) return false;
        break;
    }
  }
  for (const auto& c : fm.ctcs()) {
    const bool a = p.contains(c.a);
    const bool b = p.contains(c.b);
    if (c.kind == ConstraintKind::Requires && a && !b) return false;
    if (c.kind == ConstraintKind::Excludes && a && b) return false;
  }
  return true;
}

}  // namespace splcover
