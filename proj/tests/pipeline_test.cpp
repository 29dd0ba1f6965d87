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

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eqopp/pipeline.hpp"
#include "test_util.hpp"

namespace eqopp {
namespace {

std::string fixture(const char* name) {
  return std::string(EQOPP_FIXTURE_DIR) + "/" + name;
}

json small_config_json(const std::string& out_dir) {
  json j;
  j["seed"] = 7;
  j["output"] = out_dir;
  j["dataset"]["generator"] = {
      {"learners", 80},  {"courses", 100},       {"categories", 5},
      {"density", 0.12}, {"popularity_skew", 1.0}};
  j["split"] = {{"quantile", 0.8}, {"min_train", 4}, {"min_test", 1}};
  j["algorithms"] = json::array({json{{"name", "toppopular"}},
                                 json{{"name", "userknn"}}});
  j["rerank"] = {{"k", 10},
                 {"candidate_pool", 30},
                 {"lambdas", json::array({0.0, 0.5})},
                 {"strategies", json::array({"Glob"})}};
  return j;
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

TEST(PipelineConfigTest, ParsesAndValidates) {
  const auto dir = test::scratch_dir("cfg");
  const json j = small_config_json((dir / "out").string());
  const PipelineConfig cfg = parse_pipeline_config(j);
  EXPECT_EQ(cfg.seed, 7u);
  ASSERT_TRUE(cfg.generator.has_value());
  EXPECT_EQ(cfg.generator->num_learners, 80u);
  EXPECT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.rerank.lambdas.size(), 2u);

  json bad = j;
  bad["rerank"]["candidate_pool"] = 3;  // below k
  EXPECT_THROW(parse_pipeline_config(bad), std::runtime_error);
  bad = j;
  bad["algorithms"] = json::array();
  EXPECT_THROW(parse_pipeline_config(bad), std::runtime_error);
  bad = j;
  bad["stages"] = json::array({"compile"});
  EXPECT_THROW(parse_pipeline_config(bad), std::runtime_error);
  bad = j;
  bad["rerank"]["lambdas"] = json::array({1.5});
  EXPECT_THROW(parse_pipeline_config(bad), std::runtime_error);
}

TEST(PipelineConfigTest, ExternalAlgorithmNeedsPath) {
  json j = small_config_json("out");
  j["algorithms"].push_back(json{{"name", "external"}});
  EXPECT_THROW(parse_pipeline_config(j), std::runtime_error);
}

TEST(RunPipeline, ProducesAllReportTables) {
  const auto dir = test::scratch_dir("run");
  const PipelineConfig cfg =
      parse_pipeline_config(small_config_json((dir / "out").string()));
  const PipelineResult result = run_pipeline(cfg);

  EXPECT_GT(result.split_counts.learners, 0u);
  ASSERT_EQ(result.summary.size(), 2u);
  EXPECT_EQ(result.summary[0].algorithm, "toppopular");
  EXPECT_EQ(result.summary[1].algorithm, "userknn");
  for (const auto& row : result.summary) {
    EXPECT_GE(row.consistency, 0.0);
    EXPECT_LE(row.consistency, 1.0);
    EXPECT_GE(row.equality, 0.0);
    EXPECT_LE(row.equality, 1.0);
  }
  EXPECT_EQ(result.per_learner.size(),
            2u * result.split_counts.learners);
  EXPECT_EQ(result.principle_stats.size(), 2u * kNumPrinciples);
  // 2 algorithms x 1 strategy x 2 lambdas.
  EXPECT_EQ(result.sweep.size(), 4u);

  write_reports(result, (dir / "out").string());
  EXPECT_EQ(first_line((dir / "out" / "summary.csv").string()),
            "algorithm,ndcg,consistency,equality");
  EXPECT_EQ(first_line((dir / "out" / "per_learner.csv").string()),
            "algorithm,learner_id,ndcg,consistency,profile_consistency");
  EXPECT_EQ(first_line((dir / "out" / "principles.csv").string()),
            "algorithm,principle,mean,stddev,min,max");
  EXPECT_EQ(
      first_line((dir / "out" / "sweep.csv").string()),
      "lambda,strategy,algorithm,ndcg,consistency,equality,c_familiarity,"
      "c_validity,c_learnability,c_variety,c_quality,c_manageability,"
      "c_affordability");
}

TEST(RunPipeline, ByteIdenticalReportsForSameSeed) {
  const auto dir = test::scratch_dir("det");
  const PipelineConfig cfg =
      parse_pipeline_config(small_config_json((dir / "out").string()));

  write_reports(run_pipeline(cfg), (dir / "a").string());
  write_reports(run_pipeline(cfg), (dir / "b").string());
  for (const char* name :
       {"summary.csv", "per_learner.csv", "principles.csv", "sweep.csv"}) {
    EXPECT_EQ(test::read_file(dir / "a" / name),
              test::read_file(dir / "b" / name))
        << name;
  }
}

TEST(RunPipeline, StageSubsetSkipsLaterWork) {
  const auto dir = test::scratch_dir("stages");
  json j = small_config_json((dir / "out").string());
  j["stages"] = json::array({"ingest", "split", "score", "evaluate"});
  const PipelineResult result = run_pipeline(parse_pipeline_config(j));
  EXPECT_FALSE(result.summary.empty());
  EXPECT_TRUE(result.sweep.empty());

  j["stages"] = json::array({"ingest", "split"});
  const PipelineResult bare = run_pipeline(parse_pipeline_config(j));
  EXPECT_TRUE(bare.summary.empty());
  EXPECT_GT(bare.split_counts.learners, 0u);
}

TEST(RunPipeline, StageErrorsAreTagged) {
  json j = small_config_json("out");
  j["split"] = {{"timestamp", 0}, {"min_train", 4}, {"min_test", 1}};
  // Timestamp far before the platform opened.
  try {
    run_pipeline(parse_pipeline_config(j));
    FAIL() << "expected a stage error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "split");
  }
}

TEST(RunPipeline, ExternalScoresFlowThroughPipeline) {
  const auto dir = test::scratch_dir("ext_pipeline");
  // First run exports toppopular scores, second re-ranks them as external.
  json j = small_config_json((dir / "out").string());
  const PipelineConfig cfg = parse_pipeline_config(j);

  const Dataset data = generate_synthetic(*cfg.generator, cfg.seed);
  std::vector<std::int64_t> stamps;
  for (const auto& x : data.interactions) stamps.push_back(x.timestamp);
  std::sort(stamps.begin(), stamps.end());
  const TrainTestSplit split = fixed_timestamp_split(
      data, stamps[stamps.size() * 8 / 10], 4, 1);
  const FeedbackMatrix m(split.train);
  TopPopularScorer scorer(m);
  std::map<std::int64_t, ScoredCandidates> scores;
  for (const auto& [learner, held] : split.test)
    scores.emplace(learner, scorer.score(learner));
  save_scores(scores, (dir / "scores.csv").string());

  json j2 = small_config_json((dir / "out2").string());
  j2["algorithms"] = json::array(
      {json{{"name", "external"},
            {"path", (dir / "scores.csv").string()},
            {"label", "neural_import"}}});
  const PipelineResult result = run_pipeline(parse_pipeline_config(j2));
  ASSERT_EQ(result.summary.size(), 1u);
  EXPECT_EQ(result.summary[0].algorithm, "neural_import");

  // The external route reproduces the native toppopular metrics.
  json j3 = small_config_json((dir / "out3").string());
  j3["algorithms"] = json::array({json{{"name", "toppopular"}}});
  const PipelineResult native = run_pipeline(parse_pipeline_config(j3));
  EXPECT_NEAR(result.summary[0].ndcg, native.summary[0].ndcg, 1e-9);
  EXPECT_NEAR(result.summary[0].consistency, native.summary[0].consistency,
              1e-9);
}

// --- oracle instances ---

TEST(Oracle, BundledFixtureBeatsTheBound) {
  const OracleInstance inst =
      load_oracle_instance(fixture("oracle_small.json"));
  EXPECT_EQ(inst.candidates.entries.size(), 8u);
  const OracleReport report = run_oracle(inst);
  EXPECT_GT(report.optimum, 0.0);
  EXPECT_GE(report.ratio, 1.0 - 1.0 / std::exp(1.0));
  EXPECT_LE(report.ratio, 1.0 + 1e-12);
  EXPECT_EQ(report.greedy_set.size(), 3u);
  EXPECT_EQ(report.optimal_set.size(), 3u);
}

TEST(Oracle, LambdaZeroGreedyIsExactlyOptimal) {
  auto in = open_input(fixture("oracle_small.json"));
  json j;
  in >> j;
  j["lambda"] = 0.0;
  const auto dir = test::scratch_dir("oracle_l0");
  test::write_file(dir / "inst.json", j.dump());
  const OracleReport report =
      run_oracle(load_oracle_instance((dir / "inst.json").string()));
  EXPECT_NEAR(report.ratio, 1.0, 1e-12);
}

TEST(Oracle, WholePoolSelectionIsExactlyOptimal) {
  auto in = open_input(fixture("oracle_small.json"));
  json j;
  in >> j;
  j["k"] = 8;  // k = n: the only subset is the whole pool
  const auto dir = test::scratch_dir("oracle_kn");
  test::write_file(dir / "inst.json", j.dump());
  const OracleReport report =
      run_oracle(load_oracle_instance((dir / "inst.json").string()));
  EXPECT_NEAR(report.ratio, 1.0, 1e-12);
}

TEST(Oracle, OversizeInstanceRejected) {
  auto in = open_input(fixture("oracle_small.json"));
  json j;
  in >> j;
  json big = j["candidates"];
  for (int i = 0; i < 6; ++i) {
    json extra = j["candidates"][0];
    extra["id"] = 100 + i;
    big.push_back(extra);
  }
  j["candidates"] = big;
  const auto dir = test::scratch_dir("oracle_big");
  test::write_file(dir / "inst.json", j.dump());
  EXPECT_THROW(load_oracle_instance((dir / "inst.json").string()),
               std::runtime_error);
}

// --- CLI binary ---

int run_command(const std::string& cmd, std::string* output) {
  const std::string path =
      (std::filesystem::temp_directory_path() /
       ("eqopp_cli_out_" + std::to_string(::getpid()) + ".txt"))
          .string();
  const int status = std::system((cmd + " > " + path + " 2>&1").c_str());
  *output = test::read_file(path);
  std::filesystem::remove(path);
  return status;
}

TEST(Cli, RunAndOracleEndToEnd) {
  const char* cli = std::getenv("EQOPP_CLI");
  ASSERT_NE(cli, nullptr) << "EQOPP_CLI not exported by the test harness";

  const auto dir = test::scratch_dir("cli");
  test::write_file(dir / "config.json",
                   small_config_json((dir / "out").string()).dump(2));

  std::string output;
  int status = run_command(std::string(cli) + " run --config " +
                               (dir / "config.json").string(),
                           &output);
  EXPECT_EQ(status, 0) << output;
  EXPECT_NE(output.find("learners"), std::string::npos);
  EXPECT_NE(output.find("toppopular"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "sweep.csv"));

  // --out overrides the config destination.
  status = run_command(std::string(cli) + " run --config " +
                           (dir / "config.json").string() + " --out " +
                           (dir / "elsewhere").string(),
                       &output);
  EXPECT_EQ(status, 0) << output;
  EXPECT_TRUE(std::filesystem::exists(dir / "elsewhere" / "summary.csv"));

  status = run_command(std::string(cli) + " oracle --instance " +
                           fixture("oracle_small.json"),
                       &output);
  EXPECT_EQ(status, 0) << output;
  EXPECT_NE(output.find("PASS"), std::string::npos);

  // Missing config file surfaces as a tagged nonzero exit.
  status = run_command(std::string(cli) + " run --config /nonexistent.json",
                       &output);
  EXPECT_NE(status, 0);
}

}  // namespace
}  // namespace eqopp
