// Copyright 2026 The Authors.
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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqopp/catalog.hpp"
#include "eqopp/generator.hpp"
#include "eqopp/metrics.hpp"
#include "eqopp/principles.hpp"
#include "eqopp/recommenders.hpp"
#include "eqopp/reranker.hpp"

namespace eqopp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct SplitSpec {
  std::optional<std::int64_t> timestamp;
  std::optional<double> quantile;  // of interaction timestamps
  int min_train = 4;
  int min_test = 1;
};

struct AlgorithmSpec {
  std::string name;          // builtin id or "external"
  std::string label;         // reporting label, defaults to name
  std::string path;          // scores.csv for "external"
  ModelConfig config;
};

struct RerankSpec {
  int k = 10;
  int candidate_pool = 100;
  std::vector<double> lambdas = {0.0, 0.25, 0.50, 0.75, 0.99};
  std::vector<WeightStrategy> strategies = {
      WeightStrategy::kGlob, WeightStrategy::kUser, WeightStrategy::kPers};
  PrincipleVector targets = PrincipleVector::ones();
};

// Pipeline stages in execution order. `rerank` and `evaluate` both require
// `score`; `report` writes whatever earlier stages produced.
inline const std::vector<std::string>& kPipelineStages() {
  static const std::vector<std::string> stages = {
      "ingest", "split", "score", "evaluate", "rerank", "report"};
  return stages;
}

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::set<std::string> stages;  // empty = all

  // Either a generator spec or a pair of CSV paths.
  std::optional<GeneratorConfig> generator;
  std::string courses_path;
  std::string interactions_path;
  DatasetOptions dataset_options;

  SplitSpec split;
  std::vector<AlgorithmSpec> algorithms;
  RerankSpec rerank;

  bool stage_enabled(const std::string& stage) const {
    return stages.empty() || stages.count(stage) > 0;
  }
};

namespace detail {

inline GeneratorConfig parse_generator(const json& j) {
  GeneratorConfig g;
  if (j.contains("learners")) g.num_learners = j.at("learners").get<std::size_t>();
  if (j.contains("courses")) g.num_courses = j.at("courses").get<std::size_t>();
  if (j.contains("categories"))
    g.num_categories = j.at("categories").get<std::size_t>();
  if (j.contains("levels"))
    g.levels = j.at("levels").get<std::vector<std::string>>();
  if (j.contains("density")) g.density = j.at("density").get<double>();
  if (j.contains("popularity_skew"))
    g.popularity_skew = j.at("popularity_skew").get<double>();
  if (j.contains("timestamp_range")) {
    g.timestamp_min = j.at("timestamp_range").at(0).get<std::int64_t>();
    g.timestamp_max = j.at("timestamp_range").at(1).get<std::int64_t>();
  }
  if (j.contains("rating_bounds")) {
    g.rating_min = j.at("rating_bounds").at(0).get<double>();
    g.rating_max = j.at("rating_bounds").at(1).get<double>();
  }
  if (j.contains("price_max")) g.price_max = j.at("price_max").get<double>();
  if (j.contains("free_course_fraction"))
    g.free_course_fraction = j.at("free_course_fraction").get<double>();
  if (j.contains("enrolment_max"))
    g.enrolment_max = j.at("enrolment_max").get<std::int64_t>();
  if (j.contains("category_affinity"))
    g.category_affinity = j.at("category_affinity").get<double>();
  if (j.contains("description_words"))
    g.description_words = j.at("description_words").get<std::size_t>();
  if (j.contains("min_interactions_per_learner"))
    g.min_interactions_per_learner =
        j.at("min_interactions_per_learner").get<std::size_t>();
  return g;
}

inline PrincipleVector parse_principle_vector(const json& j) {
  if (!j.is_array() || j.size() != kNumPrinciples)
    throw std::runtime_error("expected an array of 7 principle values");
  PrincipleVector v;
  for (std::size_t m = 0; m < kNumPrinciples; ++m) {
    v[m] = j.at(m).get<double>();
    if (v[m] < 0.0 || v[m] > 1.0)
      throw std::runtime_error("principle values must lie in [0, 1]");
  }
  return v;
}

}  // namespace detail

inline PipelineConfig parse_pipeline_config(const json& j) {
  PipelineConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) cfg.output_dir = j.at("output").get<std::string>();
  if (j.contains("stages")) {
    for (const auto& s : j.at("stages")) {
      const auto name = s.get<std::string>();
      if (std::find(kPipelineStages().begin(), kPipelineStages().end(),
                    name) == kPipelineStages().end())
        throw std::runtime_error("unknown stage: " + name);
      cfg.stages.insert(name);
    }
  }

  const auto& ds = j.at("dataset");
  if (ds.contains("generator")) {
    cfg.generator = detail::parse_generator(ds.at("generator"));
  } else {
    cfg.courses_path = ds.at("courses").get<std::string>();
    cfg.interactions_path = ds.at("interactions").get<std::string>();
  }
  if (ds.contains("bounds")) {
    const auto& b = ds.at("bounds");
    auto read_bounds = [&](const char* key) -> std::optional<Bounds> {
      if (!b.contains(key)) return std::nullopt;
      return Bounds{b.at(key).at(0).get<double>(),
                    b.at(key).at(1).get<double>()};
    };
    cfg.dataset_options.rating_bounds = read_bounds("rating");
    cfg.dataset_options.enrolment_bounds = read_bounds("enrolment");
    cfg.dataset_options.price_bounds = read_bounds("price");
    if (b.contains("platform_open"))
      cfg.dataset_options.platform_open =
          b.at("platform_open").get<std::int64_t>();
    if (b.contains("platform_now"))
      cfg.dataset_options.platform_now =
          b.at("platform_now").get<std::int64_t>();
    if (b.contains("taxonomy"))
      cfg.dataset_options.taxonomy =
          b.at("taxonomy").get<std::vector<std::string>>();
    if (b.contains("levels"))
      cfg.dataset_options.levels =
          b.at("levels").get<std::vector<std::string>>();
  }

  if (j.contains("split")) {
    const auto& s = j.at("split");
    if (s.contains("timestamp"))
      cfg.split.timestamp = s.at("timestamp").get<std::int64_t>();
    if (s.contains("quantile"))
      cfg.split.quantile = s.at("quantile").get<double>();
    if (s.contains("min_train"))
      cfg.split.min_train = s.at("min_train").get<int>();
    if (s.contains("min_test")) cfg.split.min_test = s.at("min_test").get<int>();
  }

  if (!j.contains("algorithms") || j.at("algorithms").empty())
    throw std::runtime_error("config lists no algorithms");
  for (const auto& a : j.at("algorithms")) {
    AlgorithmSpec spec;
    spec.name = a.at("name").get<std::string>();
    spec.config = default_config(spec.name);
    spec.label = a.contains("label") ? a.at("label").get<std::string>()
                                     : spec.name;
    if (a.contains("path")) spec.path = a.at("path").get<std::string>();
    if (a.contains("neighbors"))
      spec.config.neighbors = a.at("neighbors").get<int>();
    if (a.contains("alpha")) spec.config.alpha = a.at("alpha").get<double>();
    if (a.contains("beta")) spec.config.beta = a.at("beta").get<double>();
    if (a.contains("candidate_pool"))
      spec.config.candidate_pool = a.at("candidate_pool").get<int>();
    if (spec.name == "external" && spec.path.empty())
      throw std::runtime_error("external algorithm needs a 'path'");
    cfg.algorithms.push_back(std::move(spec));
  }

  if (j.contains("rerank")) {
    const auto& r = j.at("rerank");
    if (r.contains("k")) cfg.rerank.k = r.at("k").get<int>();
    if (r.contains("candidate_pool"))
      cfg.rerank.candidate_pool = r.at("candidate_pool").get<int>();
    if (r.contains("lambdas"))
      cfg.rerank.lambdas = r.at("lambdas").get<std::vector<double>>();
    if (r.contains("strategies")) {
      cfg.rerank.strategies.clear();
      for (const auto& s : r.at("strategies"))
        cfg.rerank.strategies.push_back(
            parse_strategy(s.get<std::string>()));
    }
    if (r.contains("targets"))
      cfg.rerank.targets = detail::parse_principle_vector(r.at("targets"));
  }
  if (cfg.rerank.k < 1 || cfg.rerank.candidate_pool < cfg.rerank.k)
    throw std::runtime_error("rerank needs k >= 1 and candidate_pool >= k");
  for (double l : cfg.rerank.lambdas) {
    if (l < 0.0 || l > 1.0)
      throw std::runtime_error("lambda values must lie in [0, 1]");
  }
  return cfg;
}

inline PipelineConfig load_pipeline_config(const std::string& path) {
  auto in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  try {
    return parse_pipeline_config(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct SummaryRow {
  std::string algorithm;
  double ndcg = 0.0;
  double consistency = 0.0;
  double equality = 0.0;
};

struct PerLearnerRow {
  std::string algorithm;
  std::int64_t learner_id = 0;
  double ndcg = 0.0;
  double consistency = 0.0;
  double profile_consistency = 0.0;
};

struct PrincipleStatRow {
  std::string algorithm;
  std::string principle;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PipelineResult {
  SplitCounts split_counts;
  std::vector<SummaryRow> summary;
  std::vector<PerLearnerRow> per_learner;
  std::vector<PrincipleStatRow> principle_stats;
  std::vector<SweepRow> sweep;
};

namespace detail {

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace detail

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;

  Dataset data = detail::run_stage("ingest", [&] {
    if (cfg.generator) return generate_synthetic(*cfg.generator, cfg.seed);
    return load_dataset(cfg.courses_path, cfg.interactions_path,
                        cfg.dataset_options);
  });

  TrainTestSplit split = detail::run_stage("split", [&] {
    std::int64_t t_split;
    if (cfg.split.timestamp) {
      t_split = *cfg.split.timestamp;
    } else if (cfg.split.quantile) {
      std::vector<std::int64_t> stamps;
      stamps.reserve(data.interactions.size());
      for (const auto& x : data.interactions) stamps.push_back(x.timestamp);
      if (stamps.empty()) throw std::runtime_error("no interactions to split");
      std::sort(stamps.begin(), stamps.end());
      const double q = std::clamp(*cfg.split.quantile, 0.0, 1.0);
      const std::size_t idx = std::min(
          stamps.size() - 1,
          static_cast<std::size_t>(q * static_cast<double>(stamps.size())));
      t_split = stamps[idx];
    } else {
      throw std::runtime_error("split needs a 'timestamp' or a 'quantile'");
    }
    return fixed_timestamp_split(data, t_split, cfg.split.min_train,
                                 cfg.split.min_test);
  });
  result.split_counts = split.retained;

  if (!cfg.stage_enabled("score")) return result;

  FeedbackMatrix train_matrix(split.train);
  PrincipleContext ctx(split.train, train_matrix);

  // Retained learners: evaluation covers exactly the test-map keys.
  std::map<std::int64_t, std::vector<std::int64_t>> train_courses;
  std::map<std::int64_t, LearnerProfile> profiles;
  for (const auto& [learner, held] : split.test) {
    const auto row = train_matrix.learner_row(learner);
    std::vector<std::int64_t> ids;
    for (const auto& e : train_matrix.row(*row))
      ids.push_back(train_matrix.course_id(e.index));
    profiles.emplace(learner, ctx.profile_from_courses(ids));
    train_courses.emplace(learner, std::move(ids));
  }

  // Score every algorithm for every retained learner.
  struct AlgorithmRun {
    std::string label;
    std::map<std::int64_t, ScoredCandidates> candidates;
  };
  std::vector<AlgorithmRun> runs = detail::run_stage("score", [&] {
    std::vector<AlgorithmRun> out;
    const int pool = std::max(cfg.rerank.candidate_pool, cfg.rerank.k);
    for (const auto& spec : cfg.algorithms) {
      AlgorithmRun run;
      run.label = spec.label;
      if (spec.name == "external") {
        auto loaded = load_external_scores(spec.path, train_matrix, pool);
        for (const auto& [learner, held] : split.test) {
          auto it = loaded.find(learner);
          if (it != loaded.end()) run.candidates[learner] = it->second;
        }
        if (run.candidates.empty())
          throw std::runtime_error(spec.path +
                                   ": no scores for any retained learner");
      } else {
        ModelConfig mc = spec.config;
        mc.candidate_pool = pool;
        auto scorer =
            make_scorer(spec.name, train_matrix, split.train, mc, cfg.seed);
        for (const auto& [learner, held] : split.test)
          run.candidates[learner] = scorer->score(learner);
      }
      out.push_back(std::move(run));
    }
    return out;
  });

  if (cfg.stage_enabled("evaluate")) {
    detail::run_stage("evaluate", [&] {
      for (const auto& run : runs) {
        std::map<std::int64_t, double> per_learner_cons;
        std::vector<PrincipleVector> qs;
        double ndcg_sum = 0.0;
        for (const auto& [learner, cands] : run.candidates) {
          const auto topk =
              cands.top_ids(static_cast<std::size_t>(cfg.rerank.k));
          if (topk.empty()) continue;
          const PrincipleVector q = ctx.evaluate(topk, profiles.at(learner));
          const double cons =
              consistency(cfg.rerank.targets, q, WeightVector::ones());
          const double nd = ndcg(topk, split.test.at(learner), cfg.rerank.k);
          const double prof_cons = profile_consistency(
              train_courses.at(learner), ctx, cfg.rerank.targets,
              WeightVector::ones());
          per_learner_cons[learner] = cons;
          qs.push_back(q);
          ndcg_sum += nd;
          result.per_learner.push_back(
              {run.label, learner, nd, cons, prof_cons});
        }
        if (per_learner_cons.empty())
          throw std::runtime_error(run.label + ": nothing to evaluate");
        SummaryRow row;
        row.algorithm = run.label;
        row.ndcg = ndcg_sum / static_cast<double>(per_learner_cons.size());
        row.consistency = population_consistency(per_learner_cons);
        row.equality = equality(per_learner_cons);
        result.summary.push_back(row);

        for (std::size_t m = 0; m < kNumPrinciples; ++m) {
          PrincipleStatRow stat;
          stat.algorithm = run.label;
          stat.principle = kPrincipleNames[m];
          stat.min = 1.0;
          stat.max = 0.0;
          double sum = 0.0, sum_sq = 0.0;
          for (const auto& q : qs) {
            sum += q[m];
            sum_sq += q[m] * q[m];
            stat.min = std::min(stat.min, q[m]);
            stat.max = std::max(stat.max, q[m]);
          }
          const double n = static_cast<double>(qs.size());
          stat.mean = sum / n;
          stat.stddev = std::sqrt(std::max(0.0, sum_sq / n -
                                                    stat.mean * stat.mean));
          result.principle_stats.push_back(std::move(stat));
        }
      }
      return 0;
    });
  }

  if (cfg.stage_enabled("rerank")) {
    detail::run_stage("rerank", [&] {
      for (const auto& run : runs) {
        SweepInput in;
        in.algorithm = run.label;
        in.candidates = &run.candidates;
        in.test_sets = &split.test;
        in.ctx = &ctx;
        in.profiles = &profiles;
        in.targets = cfg.rerank.targets;
        in.k = cfg.rerank.k;
        in.candidate_pool = cfg.rerank.candidate_pool;
        auto rows = lambda_sweep(in, cfg.rerank.lambdas,
                                 cfg.rerank.strategies);
        result.sweep.insert(result.sweep.end(), rows.begin(), rows.end());
      }
      return 0;
    });
  }

  return result;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt6(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace detail

// Writes summary.csv, per_learner.csv, principles.csv and sweep.csv into
// `dir`. Schemas are fixed; identical results serialize byte-identically.
inline void write_reports(const PipelineResult& result,
                          const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };
  {
    auto out = open_output(path("summary.csv"));
    csv_write_row(out, {"algorithm", "ndcg", "consistency", "equality"});
    for (const auto& r : result.summary)
      csv_write_row(out, {r.algorithm, detail::fmt6(r.ndcg),
                          detail::fmt6(r.consistency),
                          detail::fmt6(r.equality)});
  }
  {
    auto out = open_output(path("per_learner.csv"));
    csv_write_row(out, {"algorithm", "learner_id", "ndcg", "consistency",
                        "profile_consistency"});
    for (const auto& r : result.per_learner)
      csv_write_row(out, {r.algorithm, std::to_string(r.learner_id),
                          detail::fmt6(r.ndcg), detail::fmt6(r.consistency),
                          detail::fmt6(r.profile_consistency)});
  }
  {
    auto out = open_output(path("principles.csv"));
    csv_write_row(out, {"algorithm", "principle", "mean", "stddev", "min",
                        "max"});
    for (const auto& r : result.principle_stats)
      csv_write_row(out, {r.algorithm, r.principle, detail::fmt6(r.mean),
                          detail::fmt6(r.stddev), detail::fmt6(r.min),
                          detail::fmt6(r.max)});
  }
  {
    auto out = open_output(path("sweep.csv"));
    std::vector<std::string> header = {"lambda",      "strategy", "algorithm",
                                       "ndcg",        "consistency",
                                       "equality"};
    for (std::size_t m = 0; m < kNumPrinciples; ++m)
      header.push_back(std::string("c_") + kPrincipleNames[m]);
    csv_write_row(out, header);
    for (const auto& r : result.sweep) {
      std::vector<std::string> row = {
          detail::fmt6(r.lambda), r.strategy,
          r.algorithm,            detail::fmt6(r.ndcg),
          detail::fmt6(r.consistency), detail::fmt6(r.equality)};
      for (std::size_t m = 0; m < kNumPrinciples; ++m)
        row.push_back(detail::fmt6(r.principle_means[m]));
      csv_write_row(out, row);
    }
  }
}

// ---------------------------------------------------------------------------
// Greedy-vs-exhaustive oracle
// ---------------------------------------------------------------------------

inline constexpr std::size_t kOracleMaxCandidates = 12;

struct OracleInstance {
  RerankConfig cfg;
  WeightVector weights = WeightVector::ones();
  std::shared_ptr<PrincipleContext> ctx;
  LearnerProfile profile;
  ScoredCandidates candidates;
};

struct OracleReport {
  double greedy_objective = 0.0;
  double optimum = 0.0;
  double ratio = 1.0;
  std::vector<std::int64_t> greedy_set;
  std::vector<std::int64_t> optimal_set;
};

inline OracleInstance load_oracle_instance(const std::string& path) {
  auto in = open_input(path);
  json j;
  in >> j;

  OracleInstance inst;
  inst.cfg.lambda = j.at("lambda").get<double>();
  inst.cfg.k = j.at("k").get<int>();
  if (j.contains("weights"))
    inst.weights.w = detail::parse_principle_vector(j.at("weights")).values;
  if (j.contains("targets"))
    inst.cfg.targets = detail::parse_principle_vector(j.at("targets"));

  const auto taxonomy = j.at("taxonomy").get<std::vector<std::string>>();
  const auto levels = j.at("levels").get<std::vector<std::string>>();
  const std::int64_t t_open = j.at("time_open").get<std::int64_t>();
  const std::int64_t t_now = j.at("time_now").get<std::int64_t>();
  const Bounds rating{j.at("rating_bounds").at(0).get<double>(),
                      j.at("rating_bounds").at(1).get<double>()};
  const Bounds enrol{j.at("enrolment_bounds").at(0).get<double>(),
                     j.at("enrolment_bounds").at(1).get<double>()};
  const Bounds price{j.at("price_bounds").at(0).get<double>(),
                     j.at("price_bounds").at(1).get<double>()};

  auto index_of = [](const std::vector<std::string>& values,
                     const std::string& v, const char* what) {
    auto it = std::find(values.begin(), values.end(), v);
    if (it == values.end())
      throw std::runtime_error(std::string("unknown ") + what + ": " + v);
    return static_cast<std::int32_t>(it - values.begin());
  };

  const auto& cands = j.at("candidates");
  if (cands.size() > kOracleMaxCandidates)
    throw std::runtime_error(
        "oracle instances are capped at " +
        std::to_string(kOracleMaxCandidates) + " candidates, got " +
        std::to_string(cands.size()));
  if (cands.size() < static_cast<std::size_t>(inst.cfg.k))
    throw std::runtime_error("instance has fewer candidates than k");
  inst.cfg.candidate_pool = static_cast<int>(cands.size());

  // Global mean rating backs candidates without one.
  double rating_sum = 0.0;
  std::size_t rating_count = 0;
  for (const auto& c : cands) {
    if (c.contains("mean_rating")) {
      rating_sum += c.at("mean_rating").get<double>();
      ++rating_count;
    }
  }
  const double global_mean =
      rating_count ? rating_sum / static_cast<double>(rating_count)
                   : (rating.lo + rating.hi) / 2.0;

  const double life = static_cast<double>(t_now - t_open);
  std::vector<std::pair<std::int64_t, CourseTraits>> entries;
  for (const auto& c : cands) {
    const auto id = c.at("id").get<std::int64_t>();
    CourseTraits t;
    t.category = index_of(taxonomy, c.at("category").get<std::string>(),
                          "category");
    t.level = index_of(levels, c.at("level").get<std::string>(), "level");
    const auto updated = c.at("last_update").get<std::int64_t>();
    t.validity = life > 0.0
                     ? std::clamp(1.0 - static_cast<double>(t_now - updated) /
                                            life,
                                  0.0, 1.0)
                     : 1.0;
    t.variety =
        static_cast<double>(asset_count(
            parse_asset_set(c.at("asset_types").get<std::string>()))) /
        static_cast<double>(kAssetTypeCount);
    const double mean = c.contains("mean_rating")
                            ? c.at("mean_rating").get<double>()
                            : global_mean;
    t.quality = rating.degenerate()
                    ? 1.0
                    : std::clamp((mean - rating.lo) / rating.span(), 0.0, 1.0);
    t.manageability =
        enrol.degenerate()
            ? 1.0
            : std::clamp((enrol.hi - c.at("enrolments").get<double>()) /
                             enrol.span(),
                         0.0, 1.0);
    t.affordability =
        price.degenerate()
            ? 1.0
            : std::clamp(
                  (price.hi - c.at("price").get<double>()) / price.span(),
                  0.0, 1.0);
    entries.emplace_back(id, t);

    const double rel = c.at("relevance").get<double>();
    if (rel < 0.0 || rel > 1.0)
      throw std::runtime_error("candidate relevance must lie in [0, 1]");
    inst.candidates.entries.emplace_back(id, rel);
  }
  inst.ctx = std::make_shared<PrincipleContext>(taxonomy.size(),
                                                levels.size(),
                                                std::move(entries));

  inst.profile.category_dist.assign(taxonomy.size(), 0.0);
  for (const auto& cat : j.at("profile_categories")) {
    inst.profile.category_dist[static_cast<std::size_t>(
        index_of(taxonomy, cat.get<std::string>(), "category"))] += 1.0;
  }
  double total = 0.0;
  for (double x : inst.profile.category_dist) total += x;
  if (total <= 0.0)
    throw std::runtime_error("profile_categories must be non-empty");
  for (double& x : inst.profile.category_dist) x /= total;

  std::sort(inst.candidates.entries.begin(), inst.candidates.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return inst;
}

// Exhaustive optimum over all k-subsets of the pool versus the greedy pick.
inline OracleReport run_oracle(const OracleInstance& inst) {
  const auto& entries = inst.candidates.entries;
  const std::size_t n = entries.size();
  const std::size_t k = static_cast<std::size_t>(inst.cfg.k);

  OracleReport report;
  const RerankOutcome outcome = greedy_rerank(
      inst.candidates, inst.cfg, inst.weights, *inst.ctx, inst.profile);
  report.greedy_set = outcome.reranked_topk;

  auto set_objective = [&](const std::vector<std::size_t>& pick) {
    std::vector<std::int64_t> ids;
    std::vector<double> rels;
    for (auto i : pick) {
      ids.push_back(entries[i].first);
      rels.push_back(entries[i].second);
    }
    return rerank_objective(ids, rels, inst.cfg, inst.weights, *inst.ctx,
                            inst.profile);
  };
  {
    std::vector<double> rels;
    for (auto id : report.greedy_set) {
      for (const auto& [cid, rel] : entries)
        if (cid == id) rels.push_back(rel);
    }
    report.greedy_objective =
        rerank_objective(report.greedy_set, rels, inst.cfg, inst.weights,
                         *inst.ctx, inst.profile);
  }

  // Lexicographic k-combinations of [0, n).
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  bool more = true;
  report.optimum = -1.0;
  while (more) {
    const double obj = set_objective(pick);
    if (obj > report.optimum) {
      report.optimum = obj;
      report.optimal_set.clear();
      for (auto i : pick) report.optimal_set.push_back(entries[i].first);
    }
    more = false;
    for (std::size_t i = k; i-- > 0;) {
      if (pick[i] < n - (k - i)) {
        ++pick[i];
        for (std::size_t l = i + 1; l < k; ++l) pick[l] = pick[l - 1] + 1;
        more = true;
        break;
      }
    }
  }

  report.ratio = report.optimum > 0.0
                     ? report.greedy_objective / report.optimum
                     : 1.0;
  return report;
}

}  // namespace eqopp
