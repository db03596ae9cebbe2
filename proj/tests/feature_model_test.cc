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

#include "splcover/feature_model.hpp"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.hpp"
#include "splcover/enumeration.hpp"
#include "splcover/synthetic.hpp"

namespace splcover {
namespace {

using ::testing::HasSubstr;

std::vector<std::string> children_names(const FeatureModel& fm, const Relation& rel) {
  std::vector<std::string> out;
  for (FeatureIndex c : rel.children) out.push_back(fm.feature_name(c));
  return out;
}

TEST(ParseModelTest, GraphProductLine) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  EXPECT_EQ(fm.name(), "GPL");
  EXPECT_EQ(fm.size(), 18u);
  EXPECT_EQ(fm.feature_name(fm.root()), "GPL");

  std::vector<std::string> mandatory, optional;
  std::vector<std::vector<std::string>> xors, ors;
  for (const auto& rel : fm.relations()) {
    const std::string parent = fm.feature_name(rel.parent);
    switch (rel.kind) {
      case RelationKind::Mandatory:
        EXPECT_EQ(parent, "GPL");
        mandatory.push_back(fm.feature_name(rel.children[0]));
        break;
      case RelationKind::Optional:
        EXPECT_EQ(parent, "GPL");
        optional.push_back(fm.feature_name(rel.children[0]));
        break;
      case RelationKind::Xor:
        xors.push_back(children_names(fm, rel));
        break;
      case RelationKind::Or:
        EXPECT_EQ(parent, "Algorithms");
        ors.push_back(children_names(fm, rel));
        break;
    }
  }
  EXPECT_EQ(mandatory, (std::vector<std::string>{"Driver", "Benchmark", "GraphType", "Algorithms"}));
  EXPECT_EQ(optional, (std::vector<std::string>{"Weight", "Search"}));
  EXPECT_EQ(xors, (std::vector<std::vector<std::string>>{{"Directed", "Undirected"}, {"DFS", "BFS"}}));
  EXPECT_EQ(fm.feature_name(*fm.parent_of(*fm.index_of("DFS"))), "Search");
  EXPECT_EQ(ors, (std::vector<std::vector<std::string>>{
                     {"Num", "CC", "SCC", "Cycle", "Shortest", "Prim", "Kruskal"}}));
  ASSERT_EQ(fm.ctcs().size(), 1u);
  EXPECT_EQ(fm.ctcs()[0].kind, ConstraintKind::Requires);
  EXPECT_EQ(fm.feature_name(fm.ctcs()[0].a), "Num");
  EXPECT_EQ(fm.feature_name(fm.ctcs()[0].b), "Search");
}

TEST(ParseModelTest, SingleFeature) {
  const FeatureModel fm = parse_model("model M\nroot A\n");
  EXPECT_EQ(fm.name(), "M");
  EXPECT_EQ(fm.size(), 1u);
  EXPECT_TRUE(fm.relations().empty());
  EXPECT_TRUE(fm.ctcs().empty());
}

TEST(ParseModelTest, FeatureOrderIsFirstAppearance) {
  const FeatureModel fm = parse_model(
      "# comment\n\nroot R\noptional R Z   # trailing\nxor R B A\nmandatory Z C\n");
  EXPECT_EQ(fm.features(), (std::vector<std::string>{"R", "Z", "B", "A", "C"}));
  EXPECT_EQ(fm.name(), "");
}

TEST(ParseModelTest, MultipleParents) {
  try {
    parse_model("root R\nmandatory R A\nmandatory R C\nmandatory A B\nmandatory C B\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr("multiple parents for B"));
    EXPECT_EQ(e.line(), 5u);
  }
}

struct BadModel {
  const char* text;
  const char* message;
  std::size_t line;
};

void PrintTo(const BadModel& b, std::ostream* os) { *os << b.message; }

class ParseErrorTest : public ::testing::TestWithParam<BadModel> {};

TEST_P(ParseErrorTest, Rejects) {
  try {
    parse_model(GetParam().text);
    FAIL() << "expected InputError for: " << GetParam().text;
  } catch (const InputError& e) {
    EXPECT_THAT(e.what(), HasSubstr(GetParam().message));
    EXPECT_EQ(e.line(), GetParam().line);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Errors, ParseErrorTest,
    ::testing::Values(
        BadModel{"root A\nfrobnicate A B\n", "unknown directive", 2},
        BadModel{"root A\nmandatory A\n", "expected: mandatory", 2},
        BadModel{"root A\noptional A B C\n", "expected: optional", 2},
        BadModel{"root A\nxor A B\n", "needs at least 2 children", 2},
        BadModel{"root A\nor A B\n", "needs at least 2 children", 2},
        BadModel{"root A\nxor A B B\n", "duplicate feature B", 2},
        BadModel{"root A\nroot B\n", "duplicate root", 2},
        BadModel{"mandatory A B\n", "missing root", 0},
        BadModel{"root A\nmandatory X B\n", "unknown feature X", 2},
        BadModel{"root A\noptional A B\nrequires B Q\n", "unknown feature Q", 3},
        BadModel{"root A\noptional A B\nexcludes B B\n", "endpoints must differ", 3},
        BadModel{"root A\nmandatory A B-1\n", "invalid feature name", 2},
        BadModel{"root A\nmodel M\n", "must be the first directive", 2},
        BadModel{"root A\nmandatory B A\n", "cannot have a parent", 2},
        BadModel{"root A\nmandatory A A\n", "its own child", 2},
        BadModel{"root A\nmandatory B C\nmandatory C B\n", "cycle through feature", 0}),
    [](const ::testing::TestParamInfo<BadModel>& info) {
      return "Case" + std::to_string(info.index);
    });

TEST(ModelConstructionTest, ValidatesInvariants) {
  EXPECT_THROW(FeatureModel("m", {"A", "A"}, 0, {}, {}), InputError);
  EXPECT_THROW(FeatureModel("m", {"A", "B"}, 0, {}, {}), InputError);
  EXPECT_THROW(FeatureModel("m", {"A", "B"}, 0, {{RelationKind::Xor, 0, {1}}}, {}), InputError);
  EXPECT_THROW(FeatureModel("m", {"A", "B"}, 0, {{RelationKind::Optional, 0, {1}}},
                            {{ConstraintKind::Requires, 1, 1}}),
               InputError);
  EXPECT_THROW(FeatureModel("m", {}, 0, {}, {}), InputError);
}

class GplValidityTest : public ::testing::Test {
 protected:
  FeatureModel fm = oracle::load_model("gpl.fm");
  Product valid = fm.make_product(
      {"GPL", "Driver", "Benchmark", "GraphType", "Directed", "Algorithms", "Num", "Search", "DFS"});
};

TEST_F(GplValidityTest, HandCheckedProduct) { EXPECT_TRUE(is_valid_product(fm, valid)); }

TEST_F(GplValidityTest, EmptyProduct) { EXPECT_FALSE(is_valid_product(fm, Product(fm.size()))); }

TEST_F(GplValidityTest, NumRequiresSearch) {
  Product p = valid;
  p.set(*fm.index_of("Search"), false);
  p.set(*fm.index_of("DFS"), false);
  EXPECT_FALSE(is_valid_product(fm, p));
  // Dropping only Search also breaks the DFS-under-Search rule.
  Product q = valid;
  q.set(*fm.index_of("Search"), false);
  EXPECT_FALSE(is_valid_product(fm, q));
}

TEST_F(GplValidityTest, GroupRules) {
  Product both = valid;
  both.set(*fm.index_of("Undirected"), true);
  EXPECT_FALSE(is_valid_product(fm, both));  // xor: two children

  Product none = valid;
  for (const char* a : {"Num"}) none.set(*fm.index_of(a), false);
  EXPECT_FALSE(is_valid_product(fm, none));  // or: no algorithm left

  Product orphan = fm.make_product(
      {"GPL", "Driver", "Benchmark", "GraphType", "Directed", "Algorithms", "CC", "BFS"});
  EXPECT_FALSE(is_valid_product(fm, orphan));  // child without its parent

  Product no_driver = valid;
  no_driver.set(*fm.index_of("Driver"), false);
  EXPECT_FALSE(is_valid_product(fm, no_driver));  // mandatory child missing
}

TEST(IsValidProductTest, RuleTable) {
  const FeatureModel fm = parse_model(
      "root R\nmandatory R M\noptional R O\nxor R X1 X2\nor O Y1 Y2\nexcludes X1 Y1\n");
  auto v = [&](std::vector<std::string> s) { return is_valid_product(fm, fm.make_product(s)); };
  EXPECT_TRUE(v({"R", "M", "X1"}));
  EXPECT_TRUE(v({"R", "M", "X2", "O", "Y1", "Y2"}));
  EXPECT_FALSE(v({"R", "X1"}));                 // mandatory missing
  EXPECT_FALSE(v({"R", "M"}));                  // xor with parent selected needs one
  EXPECT_FALSE(v({"R", "M", "X1", "O"}));       // or with parent selected needs one
  EXPECT_FALSE(v({"R", "M", "X1", "Y2"}));      // or child without parent
  EXPECT_FALSE(v({"R", "M", "X1", "O", "Y1"}));  // excludes
  EXPECT_TRUE(v({"R", "M", "X1", "O", "Y2"}));
}

TEST(EnumerateTest, SingleFeature) {
  const FeatureModel fm = parse_model("model M\nroot A\n");
  const Enumeration e = enumerate_valid_products(fm, 10);
  ASSERT_FALSE(e.overflow);
  ASSERT_EQ(e.products.size(), 1u);
  EXPECT_EQ(e.products[0], Product(1, {0}));
}

TEST(EnumerateTest, ExcludesModel) {
  const FeatureModel fm = parse_model("root A\noptional A B\noptional A C\nexcludes B C\n");
  const Enumeration e = enumerate_valid_products(fm, 100);
  ASSERT_FALSE(e.overflow);
  EXPECT_EQ(e.products, (std::vector<Product>{Product(3, {0}), Product(3, {0, 1}), Product(3, {0, 2})}));
}

TEST(EnumerateTest, GplMatchesFilterOracle) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const Enumeration e = enumerate_valid_products(fm, 100'000);
  ASSERT_FALSE(e.overflow);
  EXPECT_EQ(e.products, oracle::valid_products_by_filter(fm));
  // 2 graph types x 2 weight choices x (63 algorithm sets without Search +
  // 2 x 127 with DFS or BFS).
  EXPECT_EQ(e.products.size(), 1268u);
}

TEST(EnumerateTest, Overflow) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const Enumeration e = enumerate_valid_products(fm, 100);
  EXPECT_TRUE(e.overflow);
  EXPECT_TRUE(e.products.empty());
  EXPECT_EQ(e.count_lower_bound, 101u);
}

TEST(EnumerateTest, UnsatisfiableModelHasNoProducts) {
  const FeatureModel fm = parse_model("root A\nmandatory A B\nmandatory A C\nexcludes B C\n");
  const Enumeration e = enumerate_valid_products(fm, 100);
  EXPECT_FALSE(e.overflow);
  EXPECT_TRUE(e.products.empty());
}

TEST(EnumerateTest, RandomModelsMatchFilterOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    SyntheticModelParams params;
    params.features = 3 + seed % 13;
    params.ctcs = seed % 4;
    const FeatureModel fm = random_feature_model(rng, params);
    const Enumeration e = enumerate_valid_products(fm, 1u << 20);
    ASSERT_FALSE(e.overflow);
    EXPECT_EQ(e.products, oracle::valid_products_by_filter(fm)) << serialize_model(fm);
  }
}

TEST(ModelPropertyTest, SerializeRoundTrip) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    SyntheticModelParams params;
    params.features = 2 + seed % 30;
    params.ctcs = seed % 5;
    const FeatureModel fm = random_feature_model(rng, params);
    const std::string text = serialize_model(fm);
    const FeatureModel back = parse_model(text);
    EXPECT_EQ(back, fm);
    EXPECT_EQ(serialize_model(back), text);
  }
  const FeatureModel gpl = oracle::load_model("gpl.fm");
  EXPECT_EQ(parse_model(serialize_model(gpl)), gpl);
}

TEST(ModelPropertyTest, RemovingRootInvalidates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    SyntheticModelParams params;
    params.features = 4 + seed % 8;
    const FeatureModel fm = random_feature_model(rng, params);
    for (Product p : enumerate_valid_products(fm, 5000).products) {
      p.set(fm.root(), false);
      EXPECT_FALSE(is_valid_product(fm, p));
    }
  }
}

TEST(ProductOrderTest, SequenceLexicographic) {
  // {0} < {0,1} < {0,1,2} < {0,2} < {1} < {1,2} < {2}
  const std::vector<Product> sorted{Product(3, {}),     Product(3, {0}),    Product(3, {0, 1}),
                                    Product(3, {0, 1, 2}), Product(3, {0, 2}), Product(3, {1}),
                                    Product(3, {1, 2}),    Product(3, {2})};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      EXPECT_EQ(sorted[i] < sorted[j], i < j) << i << " vs " << j;
      EXPECT_EQ(sorted[i] < sorted[j], sorted[i].selected() < sorted[j].selected());
    }
  }
}

TEST(ProductOrderTest, AgreesWithIndexVectorsAcrossWords) {
  Rng rng(9);
  for (int t = 0; t < 2000; ++t) {
    Product a(130), b(130);
    for (std::size_t f = 0; f < 130; ++f) {
      if (uniform_index(rng, 8) == 0) a.set(f, true);
      if (uniform_index(rng, 8) == 0) b.set(f, true);
    }
    if (t % 3 == 0) b = a;
    if (t % 5 == 0) b.set(uniform_index(rng, 130), true);
    EXPECT_EQ(a < b, a.selected() < b.selected());
    EXPECT_EQ(a == b, a.selected() == b.selected());
  }
}

}  // namespace
}  // namespace splcover
