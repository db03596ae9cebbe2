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

#include "splcover/pairs.hpp"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace splcover {
namespace {

Product gpl_reference(const FeatureModel& fm) {
  return fm.make_product(
      {"GPL", "Driver", "Benchmark", "GraphType", "Directed", "Algorithms", "Num", "Search", "DFS"});
}

TEST(PairTest, Canonicalizes) {
  const Pair p({3, false}, {1, true});
  EXPECT_EQ(p.first(), (Literal{1, true}));
  EXPECT_EQ(p.second(), (Literal{3, false}));
  EXPECT_EQ(p, Pair({1, true}, {3, false}));
  EXPECT_THROW(Pair({2, true}, {2, false}), InputError);
}

TEST(PairTest, FourPolarityForms) {
  const Product p(2, {0});
  int covered = 0;
  std::set<int> forms;
  for (bool a : {false, true}) {
    for (bool b : {false, true}) {
      const Pair pr({0, a}, {1, b});
      forms.insert(pr.form());
      covered += pr.covered_by(p) ? 1 : 0;
    }
  }
  EXPECT_EQ(forms.size(), 4u);
  EXPECT_EQ(covered, 1);
  EXPECT_TRUE(Pair({0, true}, {1, false}).covered_by(p));
}

TEST(PairTest, ToString) {
  const FeatureModel fm = parse_model("root A\noptional A B\n");
  EXPECT_EQ(to_string(fm, Pair({1, false}, {0, true})), "(+A,-B)");
}

TEST(ConfigurationsOfTest, ThreeFeatureExample) {
  const FeatureModel fm = parse_model("root A\noptional A B\noptional A C\n");
  const auto pairs = configurations_of(fm, fm.make_product({"A"}));
  EXPECT_EQ(std::set<Pair>(pairs.begin(), pairs.end()),
            (std::set<Pair>{Pair({0, true}, {1, false}), Pair({0, true}, {2, false}),
                            Pair({1, false}, {2, false})}));
}

TEST(ConfigurationsOfTest, CountAndDoubleLoopOracle) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const Product p = gpl_reference(fm);
  const auto pairs = configurations_of(fm, p);
  EXPECT_EQ(pairs.size(), fm.size() * (fm.size() - 1) / 2);
  std::set<Pair> expected;
  for (FeatureIndex i = 0; i < fm.size(); ++i) {
    for (FeatureIndex j = 0; j < fm.size(); ++j) {
      if (i != j) expected.insert(Pair({j, p.contains(j)}, {i, p.contains(i)}));
    }
  }
  EXPECT_EQ(std::set<Pair>(pairs.begin(), pairs.end()), expected);
}

TEST(DeriveConfigurationsTest, Empty) {
  const FeatureModel fm = parse_model("root A\noptional A B\n");
  const ConfigurationSet c = derive_configurations(fm, {});
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(c.total_weight(), 0.0);
  EXPECT_THROW(coverage({}, c), UndefinedCoverage);
}

TEST(DeriveConfigurationsTest, SharedPairSums) {
  const FeatureModel fm = parse_model("root A\noptional A B\noptional A C\n");
  const std::vector<PrioritizedProduct> pps{{fm.make_product({"A", "B"}), 2.0},
                                            {fm.make_product({"A", "B", "C"}), 3.0}};
  const ConfigurationSet c = derive_configurations(fm, pps);
  EXPECT_DOUBLE_EQ(c.weight(Pair({0, true}, {1, true})), 5.0);
  EXPECT_DOUBLE_EQ(c.weight(Pair({1, true}, {2, false})), 2.0);
  EXPECT_DOUBLE_EQ(c.weight(Pair({1, true}, {2, true})), 3.0);
  EXPECT_FALSE(c.contains(Pair({1, false}, {2, false})));
  EXPECT_EQ(c.weight(Pair({1, false}, {2, false})), 0.0);
}

TEST(DeriveConfigurationsTest, GplMatchesScanOracle) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const ProductSpace space(fm);
  Rng rng(5);
  const auto pps = random_prioritized_products(space, rng, 5);
  ASSERT_EQ(pps.size(), 5u);
  const ConfigurationSet c = derive_configurations(fm, pps);
  const auto expected = oracle::configurations_by_scan(fm, pps);
  ASSERT_EQ(c.size(), expected.size());
  for (const auto& [pair, w] : expected) EXPECT_NEAR(c.weight(pair), w, 1e-9);
}

TEST(DeriveConfigurationsTest, RejectsInvalidProduct) {
  const FeatureModel fm = parse_model("root A\noptional A B\n");
  const std::vector<PrioritizedProduct> pps{{fm.make_product({"A"}), 1.0},
                                            {fm.make_product({"B"}), 1.0}};
  try {
    derive_configurations(fm, pps);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("#1"), std::string::npos);
  }
  const std::vector<PrioritizedProduct> negative{{fm.make_product({"A"}), -1.0}};
  EXPECT_THROW(derive_configurations(fm, negative), InputError);
}

TEST(DeriveConfigurationsTest, ZeroWeightPairsAreStoredButNotObligations) {
  const FeatureModel fm = parse_model("root A\noptional A B\noptional A C\n");
  const std::vector<PrioritizedProduct> pps{{fm.make_product({"A"}), 0.0},
                                            {fm.make_product({"A", "B"}), 1.0}};
  const ConfigurationSet c = derive_configurations(fm, pps);
  EXPECT_TRUE(c.contains(Pair({0, true}, {1, false})));
  EXPECT_EQ(c.all().size(), c.size());
  for (const auto& o : c.obligations()) EXPECT_GT(o.weight, 0.0);
  EXPECT_EQ(c.obligations().size(), 3u);
  // {A,B} alone covers every obligation without touching the zero pairs.
  const std::vector<Product> suite{fm.make_product({"A", "B"})};
  EXPECT_TRUE(covers_obligations(suite, c));
  EXPECT_DOUBLE_EQ(coverage(suite, c), 1.0);
}

TEST(CoverageTest, Examples) {
  const FeatureModel fm = parse_model("root A\noptional A B\noptional A C\n");
  const Pair p1({0, true}, {1, true}), p2({0, true}, {2, true}), p3({1, true}, {2, false});
  const ConfigurationSet c(std::map<Pair, double>{{p1, 4.0}, {p2, 3.0}, {p3, 3.0}});
  EXPECT_EQ(coverage({}, c), 0.0);
  const std::vector<Product> one{fm.make_product({"A", "B"})};
  EXPECT_DOUBLE_EQ(coverage(one, c), 0.7);
  const std::vector<Product> all{fm.make_product({"A", "B"}), fm.make_product({"A", "C"})};
  EXPECT_EQ(coverage(all, c), 1.0);
}

TEST(CoverageTest, FullSuiteIsExactlyOne) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const ProductSpace space(fm);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto pps = random_prioritized_products(space, rng, 1 + seed % 9);
    const ConfigurationSet c = derive_configurations(fm, pps);
    std::vector<Product> suite;
    for (const auto& pp : pps) suite.push_back(pp.product);
    EXPECT_EQ(coverage(suite, c), 1.0);
    double sum = 0.0;
    for (const auto& [pair, w] : c.configs()) sum += w;
    EXPECT_NEAR(c.total_weight(), sum, 1e-9 * sum);
  }
}

TEST(CoverageTest, WeightConservation) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const ProductSpace space(fm);
  Rng rng(8);
  const auto pps = random_prioritized_products(space, rng, 7);
  const ConfigurationSet c = derive_configurations(fm, pps);
  double expected = 0.0;
  const double pairs = static_cast<double>(fm.size() * (fm.size() - 1) / 2);
  for (const auto& pp : pps) expected += pp.weight * pairs;
  EXPECT_NEAR(c.total_weight(), expected, 1e-9 * expected);
}

TEST(CoverageTest, PrefixesAreMonotoneAndMatchScratch) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const ProductSpace space(fm);
  Rng rng(13);
  const auto pps = random_prioritized_products(space, rng, 6);
  const ConfigurationSet c = derive_configurations(fm, pps);
  std::vector<Product> suite;
  for (int i = 0; i < 12; ++i) suite.push_back(space.random_valid_product(rng));
  const auto prefix = prefix_coverage(suite, c);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const std::vector<Product> head(suite.begin(), suite.begin() + k + 1);
    EXPECT_NEAR(prefix[k], oracle::coverage_from_scratch(head, c), 1e-12);
    EXPECT_NEAR(prefix[k], coverage(head, c), 1e-12);
    if (k > 0) {
      EXPECT_GE(prefix[k], prefix[k - 1]);
    }
  }
}

TEST(ProductsToLevelsTest, SingleProductCoversAll) {
  const FeatureModel fm = parse_model("root A\noptional A B\n");
  const std::vector<PrioritizedProduct> pps{{fm.make_product({"A", "B"}), 1.0}};
  const ConfigurationSet c = derive_configurations(fm, pps);
  const std::vector<Product> suite{fm.make_product({"A", "B"})};
  for (const auto& [level, k] : products_to_levels(suite, c, default_levels())) {
    EXPECT_EQ(k, 1u) << level;
  }
}

TEST(ProductsToLevelsTest, ThresholdScan) {
  // Three products covering 6, 3 and 1 of 10 weight: prefixes 0.6, 0.9, 1.0.
  const FeatureModel fm = parse_model("root R\noptional R A\noptional R B\noptional R C\n");
  const Pair pa({0, true}, {1, true}), pb({0, true}, {2, true}), pc({0, true}, {3, true});
  const ConfigurationSet c(std::map<Pair, double>{{pa, 6.0}, {pb, 3.0}, {pc, 1.0}});
  const std::vector<Product> suite{fm.make_product({"R", "A"}), fm.make_product({"R", "B"}),
                                   fm.make_product({"R", "C"})};
  const auto levels = products_to_levels(suite, c, default_levels());
  const std::map<int, std::size_t> expected{{50, 1}, {75, 2}, {80, 2}, {85, 2}, {90, 2},  {95, 3},
                                            {96, 3}, {97, 3}, {98, 3}, {99, 3}, {100, 3}};
  EXPECT_EQ(levels, expected);
}

TEST(ProductsToLevelsTest, IncompleteSuite) {
  const FeatureModel fm = parse_model("root R\noptional R A\noptional R B\n");
  const ConfigurationSet c(
      std::map<Pair, double>{{Pair({0, true}, {1, true}), 3.0}, {Pair({0, true}, {2, true}), 1.0}});
  const std::vector<Product> suite{fm.make_product({"R", "A"})};
  try {
    products_to_levels(suite, c, default_levels());
    FAIL();
  } catch (const IncompleteSuite& e) {
    EXPECT_DOUBLE_EQ(e.max_coverage(), 0.75);
  }
}

TEST(ProductsToLevelsTest, GplMatchesScratchRecomputation) {
  const FeatureModel fm = oracle::load_model("gpl.fm");
  const ProductSpace space(fm);
  Rng rng(21);
  const auto pps = random_prioritized_products(space, rng, 8);
  const ConfigurationSet c = derive_configurations(fm, pps);
  std::vector<Product> suite;
  for (int i = 0; i < 6; ++i) suite.push_back(space.random_valid_product(rng));
  for (const auto& pp : pps) suite.push_back(pp.product);
  const auto levels = products_to_levels(suite, c, default_levels());
  for (int level : default_levels()) {
    std::size_t k = 1;
    while (oracle::coverage_from_scratch({suite.begin(), suite.begin() + k}, c) + 1e-12 <
           level / 100.0) {
      ++k;
    }
    EXPECT_EQ(levels.at(level), k) << level;
  }
}

}  // namespace
}  // namespace splcover
