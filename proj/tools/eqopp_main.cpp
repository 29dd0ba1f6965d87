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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eqopp/pipeline.hpp"

namespace {

std::uint64_t env_or(const char* name, std::uint64_t fallback, bool* found) {
  const char* v = std::getenv(name);
  if (!v) {
    *found = false;
    return fallback;
  }
  *found = true;
  return std::strtoull(v, nullptr, 10);
}

int cmd_run(const std::string& config_path, std::int64_t seed_flag,
            const std::string& out_flag, const std::string& stages_flag) {
  eqopp::PipelineConfig cfg;
  try {
    cfg = eqopp::load_pipeline_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return 1;
  }

  // Precedence: flag > EQOPP_* environment > config file.
  bool env_found = false;
  const std::uint64_t env_seed = env_or("EQOPP_SEED", cfg.seed, &env_found);
  if (env_found) cfg.seed = env_seed;
  if (const char* env_out = std::getenv("EQOPP_OUT")) cfg.output_dir = env_out;
  if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
  if (!out_flag.empty()) cfg.output_dir = out_flag;
  if (!stages_flag.empty()) {
    cfg.stages.clear();
    std::stringstream ss(stages_flag);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      if (std::find(eqopp::kPipelineStages().begin(),
                    eqopp::kPipelineStages().end(),
                    token) == eqopp::kPipelineStages().end()) {
        std::cerr << "error [config]: unknown stage '" << token << "'\n";
        return 1;
      }
      cfg.stages.insert(token);
    }
  }

  eqopp::PipelineResult result;
  try {
    result = eqopp::run_pipeline(cfg);
  } catch (const eqopp::StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::printf("split: %zu learners, %zu courses, %zu interactions retained\n",
              result.split_counts.learners, result.split_counts.courses,
              result.split_counts.interactions);
  if (!result.summary.empty()) {
    std::printf("%-14s %8s %12s %9s\n", "algorithm", "ndcg", "consistency",
                "equality");
    for (const auto& row : result.summary) {
      std::printf("%-14s %8.3f %12.3f %9.3f\n", row.algorithm.c_str(),
                  row.ndcg, row.consistency, row.equality);
    }
  }

  if (cfg.stage_enabled("report")) {
    try {
      eqopp::write_reports(result, cfg.output_dir);
    } catch (const std::exception& e) {
      std::cerr << "error [report]: " << e.what() << "\n";
      return 1;
    }
    std::printf("reports written to %s\n", cfg.output_dir.c_str());
  }
  return 0;
}

int cmd_oracle(const std::string& instance_path) {
  eqopp::OracleInstance instance;
  try {
    instance = eqopp::load_oracle_instance(instance_path);
  } catch (const std::exception& e) {
    std::cerr << "error [oracle]: " << e.what() << "\n";
    return 1;
  }
  const eqopp::OracleReport report = eqopp::run_oracle(instance);
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  std::printf("instance:           %s\n", instance_path.c_str());
  std::printf("candidates: %zu  k: %d  lambda: %.2f\n",
              instance.candidates.entries.size(), instance.cfg.k,
              instance.cfg.lambda);
  std::printf("greedy objective:   %.6f\n", report.greedy_objective);
  std::printf("exhaustive optimum: %.6f\n", report.optimum);
  std::printf("ratio:              %.6f\n", report.ratio);
  std::printf("bound (1 - 1/e):    %.6f\n", bound);
  std::printf("result:             %s\n",
              report.ratio >= bound ? "PASS" : "FAIL");
  return report.ratio >= bound ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eqopp: score course recommendations against educational principles "
      "and re-rank them for equal learning opportunity"};
  app.require_subcommand(1);

  std::string config_path, out_dir, stages, instance_path;
  std::int64_t seed = -1;

  auto* run = app.add_subcommand(
      "run", "run the pipeline: ingest, split, score, evaluate, rerank, "
             "report");
  run->add_option("--config", config_path, "pipeline config (JSON)")
      ->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--stages", stages,
                  "comma-separated subset of stages to run");

  auto* oracle = app.add_subcommand(
      "oracle", "compare greedy re-ranking against the exhaustive optimum "
                "on a small instance");
  oracle->add_option("--instance", instance_path, "instance file (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, seed, out_dir, stages);
  if (oracle->parsed()) return cmd_oracle(instance_path);
  return 1;
}
