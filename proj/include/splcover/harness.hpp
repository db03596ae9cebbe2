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
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splcover/baselines.hpp"
#include "splcover/cmsa.hpp"
#include "splcover/errors.hpp"
#include "splcover/feature_model.hpp"
#include "splcover/pairs.hpp"
#include "splcover/product_space.hpp"

namespace splcover {

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out = split(text, '\n');
  if (!out.empty() && trim(out.back()).empty()) out.pop_back();
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return out;
}

inline double parse_weight(std::string_view s, std::size_t line) {
  const std::string str(trim(s));
  if (str.empty()) throw InputError("missing weight", line);
  for (char ch : str) {
    if (!((ch >= '0' && ch <= '9') || ch == '.' || ch == 'e' || ch == 'E' || ch == '+' || ch == '-')) {
      throw InputError("weight '" + str + "' is not a decimal literal", line);
    }
  }
  char* end = nullptr;
  const double w = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || !std::isfinite(w)) {
    throw InputError("weight '" + str + "' is not a decimal literal", line);
  }
  if (w < 0.0) throw InputError("weight '" + str + "' is negative", line);
  return w;
}

inline std::uint64_t parse_u64(std::string_view s, const char* what) {
  const std::string str(trim(s));
  if (str.empty() || str.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(std::string("bad ") + what + " '" + str + "'");
  }
  return std::stoull(str);
}

inline std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

// `.pp` files: CSV with header `weight,features`; features is a
// `;`-separated list of selected feature names.
inline std::vector<PrioritizedProduct> parse_prioritized_products(const FeatureModel& fm,
                                                                  std::string_view text) {
  const std::vector<std::string> lines = detail::lines_of(text);
  if (lines.empty() || detail::trim(lines[0]) != "weight,features") {
    throw InputError("expected header 'weight,features'", 1);
  }
  std::vector<PrioritizedProduct> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    if (detail::trim(lines[i]).empty()) continue;
    const std::size_t comma = lines[i].find(',');
    if (comma == std::string::npos) throw InputError("expected 'weight,features'", line);
    const double w = detail::parse_weight(std::string_view(lines[i]).substr(0, comma), line);
    Product p(fm.size());
    const std::string_view feats = detail::trim(std::string_view(lines[i]).substr(comma + 1));
    if (!feats.empty()) {
      for (const std::string& raw : detail::split(feats, ';')) {
        const std::string name(detail::trim(raw));
        auto idx = fm.index_of(name);
        if (!idx) throw InputError("unknown feature '" + name + "'", line);
        p.set(*idx, true);
      }
    }
    if (!is_valid_product(fm, p)) {
      throw InputError("prioritized product #" + std::to_string(out.size()) +
                           " is not a valid product",
                       line);
    }
    out.push_back({std::move(p), w});
  }
  return out;
}

inline std::string join_features(const FeatureModel& fm, const Product& p) {
  std::string out;
  for (FeatureIndex f : p.selected()) {
    if (!out.empty()) out += ';';
    out += fm.feature_name(f);
  }
  return out;
}

inline std::string serialize_prioritized_products(const FeatureModel& fm,
                                                  std::span<const PrioritizedProduct> pps) {
  std::string out = "weight,features\n";
  for (const auto& pp : pps) {
    out += detail::format_fixed2(pp.weight) + "," + join_features(fm, pp.product) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

enum class Algorithm { Cmsa, Greedy, Ppgs, Sampled };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Cmsa: return "cmsa";
    case Algorithm::Greedy: return "greedy";
    case Algorithm::Ppgs: return "ppgs";
    case Algorithm::Sampled: return "sampled";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "cmsa") return Algorithm::Cmsa;
  if (s == "greedy") return Algorithm::Greedy;
  if (s == "ppgs") return Algorithm::Ppgs;
  if (s == "sampled") return Algorithm::Sampled;
  throw InputError("unknown algorithm '" + std::string(s) + "'");
}

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Cmsa;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  std::vector<int> levels = default_levels();
  CmsaParams cmsa;  // seed is overwritten per run
  PpgsParams ppgs;  // seed is overwritten per run
  std::size_t pool_size = 100;
  std::size_t greedy_node_budget = 50'000'000;
  // Run replications concurrently; output order is by run index regardless.
  std::size_t jobs = 1;
  // Record time_ms as 0, for byte-comparable output.
  bool record_time = true;
};

struct RunRecord {
  std::size_t run = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t suite_size = 0;
  std::int64_t time_ms = 0;
  std::vector<std::size_t> level_counts;  // aligned with the level list
  std::vector<std::string> suite;         // `;`-joined selected features, in order

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunOutcome {
  RunRecord record;
  std::vector<Product> suite;
};

inline void validate_levels(std::span<const int> levels) {
  if (levels.empty()) throw InputError("at least one coverage level is required");
  for (int l : levels) {
    if (l < 1 || l > 100) throw InputError("coverage levels must lie in 1..100");
  }
}

// One replication of one algorithm with the given seed.
inline RunOutcome run_single(const ProductSpace& space, const ConfigurationSet& c,
                             const ExperimentConfig& cfg, std::size_t run) {
  const std::uint64_t seed = cfg.base_seed + run;
  const auto start = std::chrono::steady_clock::now();
  std::vector<Product> suite;
  switch (cfg.algorithm) {
    case Algorithm::Cmsa: {
      CmsaParams p = cfg.cmsa;
      p.seed = seed;
      suite = run_cmsa(space, c, p).suite;
      break;
    }
    case Algorithm::Greedy:
      suite = weighted_greedy(space, c, cfg.greedy_node_budget).suite;
      break;
    case Algorithm::Ppgs: {
      PpgsParams p = cfg.ppgs;
      p.seed = seed;
      suite = ppgs(space, c, p).constructed.suite;
      break;
    }
    case Algorithm::Sampled:
      suite = sampled_greedy(space, c, cfg.pool_size, seed).suite;
      break;
  }
  const auto stop = std::chrono::steady_clock::now();

  RunOutcome out;
  out.record.run = run;
  out.record.algorithm = std::string(to_string(cfg.algorithm));
  out.record.seed = seed;
  out.record.suite_size = suite.size();
  out.record.time_ms =
      cfg.record_time
          ? std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()
          : 0;
  const auto counts = products_to_levels(suite, c, cfg.levels);
  for (int l : cfg.levels) out.record.level_counts.push_back(counts.at(l));
  for (const Product& p : suite) out.record.suite.push_back(join_features(space.model(), p));
  out.suite = std::move(suite);
  return out;
}

// Replication i uses seed base_seed + i.
inline std::vector<RunOutcome> run_experiment(const ProductSpace& space, const ConfigurationSet& c,
                                              const ExperimentConfig& cfg) {
  if (cfg.replications == 0) throw InputError("replications must be at least 1");
  validate_levels(cfg.levels);
  if (c.obligations().empty()) throw InputError("no weight-positive configurations");
  std::vector<RunOutcome> out(cfg.replications);
  if (cfg.jobs <= 1) {
    for (std::size_t i = 0; i < cfg.replications; ++i) out[i] = run_single(space, c, cfg, i);
    return out;
  }
  for (std::size_t first = 0; first < cfg.replications; first += cfg.jobs) {
    std::vector<std::future<RunOutcome>> batch;
    for (std::size_t i = first; i < std::min(cfg.replications, first + cfg.jobs); ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] { return run_single(space, c, cfg, i); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) out[first + k] = batch[k].get();
  }
  return out;
}

// Loaded model and configuration set for a (model, products) file pair.
struct Problem {
  FeatureModel model;
  std::vector<PrioritizedProduct> prioritized;
  ConfigurationSet configurations;
};

inline Problem load_problem(const std::filesystem::path& model_path,
                            const std::filesystem::path& products_path) {
  auto with_context = [](const std::filesystem::path& p, const InputError& e) {
    return InputError(p.string() + ": " + e.what());
  };
  std::optional<FeatureModel> fm;
  try {
    fm = parse_model(read_file(model_path));
  } catch (const InputError& e) {
    throw with_context(model_path, e);
  }
  std::vector<PrioritizedProduct> pps;
  try {
    pps = parse_prioritized_products(*fm, read_file(products_path));
  } catch (const InputError& e) {
    throw with_context(products_path, e);
  }
  ConfigurationSet c = derive_configurations(*fm, pps);
  return Problem{*std::move(fm), std::move(pps), std::move(c)};
}

// Checks the coverage-pipeline invariants of one run; returns a description
// of the first violation, or nothing.
inline std::optional<std::string> check_run_invariants(const RunOutcome& run,
                                                       const ConfigurationSet& c,
                                                       std::span<const int> levels) {
  const std::vector<double> prefix = prefix_coverage(run.suite, c);
  for (std::size_t k = 1; k < prefix.size(); ++k) {
    if (prefix[k] < prefix[k - 1]) return "prefix coverage decreases at " + std::to_string(k);
  }
  if (prefix.empty() || prefix.back() != 1.0) return std::string("suite does not reach coverage 1.0");
  if (!covers_obligations(run.suite, c)) return std::string("a weight-positive configuration is uncovered");
  for (std::size_t k = 1; k < run.record.level_counts.size(); ++k) {
    if (levels[k] >= levels[k - 1] && run.record.level_counts[k] < run.record.level_counts[k - 1]) {
      return "level counts decrease at level " + std::to_string(levels[k]);
    }
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] == 100 && run.record.level_counts[k] > run.record.suite_size) {
      return std::string("count at 100 exceeds the suite size");
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateRow {
  std::string algorithm;
  int level = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

// Mean and population standard deviation of the level counts, per
// (algorithm, level); algorithms in first-appearance order.
inline std::vector<AggregateRow> aggregate(std::span<const RunRecord> records,
                                           std::span<const int> levels) {
  std::vector<std::string> algorithms;
  for (const auto& r : records) {
    if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
      algorithms.push_back(r.algorithm);
    }
  }
  std::vector<AggregateRow> out;
  for (const auto& algo : algorithms) {
    for (std::size_t k = 0; k < levels.size(); ++k) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& r : records) {
        if (r.algorithm != algo) continue;
        sum += static_cast<double>(r.level_counts.at(k));
        ++n;
      }
      const double mean = sum / static_cast<double>(n);
      double sq = 0.0;
      for (const auto& r : records) {
        if (r.algorithm != algo) continue;
        const double d = static_cast<double>(r.level_counts.at(k)) - mean;
        sq += d * d;
      }
      out.push_back({algo, levels[k], mean, std::sqrt(sq / static_cast<double>(n))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string runs_csv(std::span<const RunRecord> records, std::span<const int> levels) {
  std::string out = "run,algorithm,seed,suite_size,time_ms";
  for (int l : levels) out += ",p" + std::to_string(l);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.run) + ',' + r.algorithm + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.suite_size) + ',' + std::to_string(r.time_ms);
    for (std::size_t c : r.level_counts) out += ',' + std::to_string(c);
    out += '\n';
  }
  return out;
}

inline std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::string out = "algorithm,level,mean,std\n";
  for (const auto& r : rows) {
    out += r.algorithm + ',' + std::to_string(r.level) + ',' + detail::format_fixed2(r.mean) + ',' +
           detail::format_fixed2(r.std) + '\n';
  }
  return out;
}

inline std::string suite_text(const RunRecord& r) {
  std::string out;
  for (const auto& line : r.suite) out += line + '\n';
  return out;
}

struct ParsedRuns {
  std::vector<int> levels;
  std::vector<RunRecord> records;  // suite lists are left empty
};

inline ParsedRuns parse_runs_csv(std::string_view text) {
  const std::vector<std::string> lines = detail::lines_of(text);
  if (lines.empty()) throw InputError("empty runs.csv");
  const std::vector<std::string> header = detail::split(lines[0], ',');
  const std::vector<std::string> fixed{"run", "algorithm", "seed", "suite_size", "time_ms"};
  if (header.size() < fixed.size() + 1 ||
      !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    throw InputError("unexpected runs.csv header", 1);
  }
  ParsedRuns out;
  for (std::size_t k = fixed.size(); k < header.size(); ++k) {
    if (header[k].size() < 2 || header[k][0] != 'p') throw InputError("bad level column", 1);
    out.levels.push_back(static_cast<int>(detail::parse_u64(header[k].substr(1), "level")));
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = detail::split(lines[i], ',');
    if (f.size() != header.size()) throw InputError("wrong field count", i + 1);
    RunRecord r;
    r.run = detail::parse_u64(f[0], "run");
    r.algorithm = f[1];
    r.seed = detail::parse_u64(f[2], "seed");
    r.suite_size = detail::parse_u64(f[3], "suite_size");
    r.time_ms = static_cast<std::int64_t>(detail::parse_u64(f[4], "time_ms"));
    for (std::size_t k = fixed.size(); k < f.size(); ++k) {
      r.level_counts.push_back(detail::parse_u64(f[k], "count"));
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

inline std::vector<AggregateRow> parse_aggregate_csv(std::string_view text) {
  const std::vector<std::string> lines = detail::lines_of(text);
  if (lines.empty() || lines[0] != "algorithm,level,mean,std") {
    throw InputError("unexpected aggregate.csv header", 1);
  }
  std::vector<AggregateRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = detail::split(lines[i], ',');
    if (f.size() != 4) throw InputError("wrong field count", i + 1);
    out.push_back({f[0], static_cast<int>(detail::parse_u64(f[1], "level")),
                   detail::parse_weight(f[2], i + 1), detail::parse_weight(f[3], i + 1)});
  }
  return out;
}

// Writes runs.csv, aggregate.csv and suites/<algorithm>-<run>.txt under dir.
inline void write_outputs(const std::filesystem::path& dir, std::span<const RunRecord> records,
                          std::span<const int> levels) {
  write_file_atomic(dir / "runs.csv", runs_csv(records, levels));
  const std::vector<AggregateRow> rows = aggregate(records, levels);
  write_file_atomic(dir / "aggregate.csv", aggregate_csv(rows));
  for (const auto& r : records) {
    write_file_atomic(dir / "suites" / (r.algorithm + "-" + std::to_string(r.run) + ".txt"),
                      suite_text(r));
  }
}

}  // namespace splcover
