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

// splcover: prioritized pairwise test-suite generation for feature models.
//
//   splcover run --model m.fm --products m.pp --algo cmsa --runs 30 --seed 1
//                [--iters N | --time-limit S] [--na 5] [--age-max 4]
//                [--levels 50,75,...] --out results/
//   splcover generate --seed 7 --features 20 --ctcs 3 --products 8 --out data/x
//   splcover generate --seed 7 --model data/gpl.fm --products 8 --out data/gpl

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splcover/splcover.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitUncoverable = 3;
constexpr int kExitBudget = 4;

struct RunOptions {
  std::string model;
  std::string products;
  std::string algos = "cmsa";
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> iters;
  std::optional<double> time_limit;
  std::size_t na = 5;
  std::size_t age_max = 4;
  std::string levels;
  std::string out;
  std::size_t pool_size = 100;
  std::size_t population = 10;
  std::size_t evaluations = 1000;
  std::size_t node_budget = 200'000;
  std::size_t greedy_budget = 50'000'000;
  std::size_t jobs = 1;
  bool no_timing = false;
};

struct GenerateOptions {
  std::uint64_t seed = 0;
  std::size_t features = 20;
  std::size_t ctcs = 2;
  std::size_t max_group = 4;
  std::size_t products = 10;
  std::string name = "synthetic";
  std::string model;
  std::string out;
};

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  for (const std::string& tok : splcover::detail::split(text, ',')) {
    out.push_back(static_cast<int>(splcover::detail::parse_u64(tok, "level")));
  }
  splcover::validate_levels(out);
  return out;
}

int run_command(const RunOptions& o) {
  const splcover::Problem problem = splcover::load_problem(o.model, o.products);
  if (problem.configurations.obligations().empty()) {
    throw splcover::InputError("no weight-positive configurations");
  }
  const splcover::ProductSpace space(problem.model);

  splcover::ExperimentConfig cfg;
  cfg.replications = o.runs;
  cfg.base_seed = o.seed;
  if (!o.levels.empty()) cfg.levels = parse_levels(o.levels);
  cfg.cmsa.n_a = o.na;
  cfg.cmsa.age_max = o.age_max;
  cfg.cmsa.iterations = o.iters;
  cfg.cmsa.time_limit_seconds = o.time_limit;
  if (!o.iters && !o.time_limit) cfg.cmsa.time_limit_seconds = 3.0;
  cfg.cmsa.node_budget = o.node_budget;
  cfg.greedy_node_budget = o.greedy_budget;
  cfg.ppgs.population = o.population;
  cfg.ppgs.evaluations = o.evaluations;
  cfg.pool_size = o.pool_size;
  cfg.jobs = o.jobs;
  cfg.record_time = !o.no_timing;

  std::vector<splcover::RunRecord> records;
  for (const std::string& name : splcover::detail::split(o.algos, ',')) {
    cfg.algorithm = splcover::parse_algorithm(name);
    for (auto& outcome : splcover::run_experiment(space, problem.configurations, cfg)) {
      records.push_back(std::move(outcome.record));
    }
  }
  splcover::write_outputs(o.out, records, cfg.levels);

  for (const auto& row : splcover::aggregate(records, cfg.levels)) {
    if (row.level == cfg.levels.back()) {
      std::printf("%-8s p%-3d %s (%s)\n", row.algorithm.c_str(), row.level,
                  splcover::detail::format_fixed2(row.mean).c_str(),
                  splcover::detail::format_fixed2(row.std).c_str());
    }
  }
  return kExitOk;
}

int generate_command(const GenerateOptions& o) {
  splcover::Rng rng(splcover::derive_seed(o.seed, {0x6e6eu}));
  if (!o.model.empty()) {
    const splcover::FeatureModel fm = splcover::parse_model(splcover::read_file(o.model));
    const splcover::ProductSpace space(fm);
    const auto pps = splcover::random_prioritized_products(space, rng, o.products);
    splcover::write_file_atomic(o.out + ".pp", splcover::serialize_prioritized_products(fm, pps));
    std::printf("wrote %s.pp (%zu products)\n", o.out.c_str(), pps.size());
    return kExitOk;
  }
  splcover::SyntheticModelParams params;
  params.features = o.features;
  params.ctcs = o.ctcs;
  params.max_group = o.max_group;
  params.name = o.name;
  const splcover::FeatureModel fm = splcover::random_feature_model(rng, params);
  const splcover::ProductSpace space(fm);
  const auto pps = splcover::random_prioritized_products(space, rng, o.products);
  const std::string header = "# generated by: splcover generate --seed " + std::to_string(o.seed) +
                             " --features " + std::to_string(o.features) + " --ctcs " +
                             std::to_string(o.ctcs) + " --max-group " +
                             std::to_string(o.max_group) + " --products " +
                             std::to_string(o.products) + " --name " + o.name + "\n";
  splcover::write_file_atomic(o.out + ".fm", header + splcover::serialize_model(fm));
  splcover::write_file_atomic(o.out + ".pp", splcover::serialize_prioritized_products(fm, pps));
  std::printf("wrote %s.fm (%zu features) and %s.pp (%zu products)\n", o.out.c_str(), fm.size(),
              o.out.c_str(), pps.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prioritized pairwise test-suite generation for feature models"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an algorithm for several seeded replications");
  run_cmd->add_option("--model", run.model, "Feature model (.fm)")->required();
  run_cmd->add_option("--products", run.products, "Prioritized products (.pp)")->required();
  run_cmd->add_option("--algo", run.algos, "cmsa|greedy|ppgs|sampled (comma-separated list allowed)");
  run_cmd->add_option("--runs", run.runs, "Independent replications")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Base seed; run i uses seed + i");
  auto* iters = run_cmd->add_option("--iters", run.iters, "CMSA iteration budget");
  auto* time_limit = run_cmd->add_option("--time-limit", run.time_limit,
                                         "CMSA wall-clock budget in seconds (default 3)");
  iters->excludes(time_limit);
  time_limit->excludes(iters);
  run_cmd->add_option("--na", run.na, "CMSA solutions per iteration")->check(CLI::PositiveNumber);
  run_cmd->add_option("--age-max", run.age_max, "CMSA maximum component age")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--levels", run.levels, "Coverage levels in percent, comma-separated");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--pool-size", run.pool_size, "Pool size of the sampled greedy");
  run_cmd->add_option("--population", run.population, "PPGS population size");
  run_cmd->add_option("--evaluations", run.evaluations, "PPGS fitness evaluations per round");
  run_cmd->add_option("--node-budget", run.node_budget, "Node budget per exact sub-instance solve");
  run_cmd->add_option("--greedy-budget", run.greedy_budget,
                      "Node budget per best-product search of the weighted greedy")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--jobs", run.jobs, "Replications run concurrently");
  run_cmd->add_flag("--no-timing", run.no_timing, "Write time_ms as 0 (byte-reproducible output)");

  GenerateOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write a random model and prioritized products");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--features", gen.features, "Number of features")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--ctcs", gen.ctcs, "Number of cross-tree constraints");
  gen_cmd->add_option("--max-group", gen.max_group, "Largest xor/or group")->check(CLI::Range(2, 64));
  gen_cmd->add_option("--products", gen.products, "Number of prioritized products")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--name", gen.name, "Model name");
  gen_cmd->add_option("--model", gen.model,
                      "Existing model (.fm): only write prioritized products for it");
  gen_cmd->add_option("--out", gen.out, "Output path prefix (writes <out>.fm and <out>.pp)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*run_cmd) return run_command(run);
    return generate_command(gen);
  } catch (const splcover::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const splcover::UnsatisfiableModel& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitUncoverable;
  } catch (const splcover::UncoverableError& e) {
    std::cerr << "uncoverable: " << e.what() << '\n';
    return kExitUncoverable;
  } catch (const splcover::BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
