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

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eqopp/metrics.hpp"
#include "eqopp/principles.hpp"
#include "eqopp/recommenders.hpp"

namespace eqopp {

// ---------------------------------------------------------------------------
// Weight strategies
// ---------------------------------------------------------------------------

enum class WeightStrategy { kGlob, kUser, kPers };

inline const char* strategy_name(WeightStrategy s) {
  switch (s) {
    case WeightStrategy::kGlob: return "Glob";
    case WeightStrategy::kUser: return "User";
    case WeightStrategy::kPers: return "Pers";
  }
  return "?";
}

inline WeightStrategy parse_strategy(const std::string& name) {
  std::string lower;
  for (char c : name)
    lower.push_back(static_cast<char>(std::tolower(
        static_cast<unsigned char>(c))));
  if (lower == "glob") return WeightStrategy::kGlob;
  if (lower == "user") return WeightStrategy::kUser;
  if (lower == "pers") return WeightStrategy::kPers;
  throw std::invalid_argument("unknown weight strategy: " + name);
}

// Per-principle shortfall against the targets, floored at zero: overshoot
// carries no weight.
inline PrincipleVector consistency_gaps(const PrincipleVector& targets,
                                        const PrincipleVector& achieved) {
  PrincipleVector gaps;
  for (std::size_t m = 0; m < kNumPrinciples; ++m)
    gaps[m] = std::max(0.0, targets[m] - achieved[m]);
  return gaps;
}

// Uniform weight on every principle, for every learner.
inline WeightVector weights_glob() { return WeightVector::ones(); }

namespace detail {

inline WeightVector weights_from_gaps(const PrincipleVector& gaps) {
  double max_gap = 0.0;
  for (std::size_t m = 0; m < kNumPrinciples; ++m)
    max_gap = std::max(max_gap, gaps[m]);
  if (max_gap <= 0.0) return weights_glob();  // already on target everywhere
  WeightVector w;
  for (std::size_t m = 0; m < kNumPrinciples; ++m)
    w[m] = std::clamp(gaps[m] / max_gap, 0.0, 1.0);
  return w;
}

}  // namespace detail

// Weight proportional to the population-mean consistency gap per principle,
// normalized by the largest gap.
inline WeightVector weights_user(const PrincipleVector& mean_gaps) {
  return detail::weights_from_gaps(mean_gaps);
}

// Same rule on a single learner's gaps.
inline WeightVector weights_pers(const PrincipleVector& learner_gaps) {
  return detail::weights_from_gaps(learner_gaps);
}

// ---------------------------------------------------------------------------
// Greedy re-ranking
// ---------------------------------------------------------------------------

struct RerankConfig {
  double lambda = 0.0;      // 0 = keep the recommender's order, 1 = ignore it
  int k = 10;               // list length
  int candidate_pool = 100; // pool truncation before selection
  PrincipleVector targets = PrincipleVector::ones();
};

struct RerankOutcome {
  std::int64_t learner_id = 0;
  std::vector<std::int64_t> original_topk;
  std::vector<std::int64_t> reranked_topk;
  double objective_value = 0.0;
  PrincipleVector per_principle_before;
  PrincipleVector per_principle_after;
};

// Objective of a selected set S:
//   (1 - lambda) * (1/k) * sum_{i in S} relevance_i
//   + lambda * consistency(targets, principles(S), w).
// Both terms live in [0, 1], so lambda mixes them on one scale. Relevances
// must already be normalized to [0, 1].
inline double rerank_objective(std::span<const std::int64_t> selected,
                               std::span<const double> relevances,
                               const RerankConfig& cfg, const WeightVector& w,
                               const PrincipleContext& ctx,
                               const LearnerProfile& profile) {
  if (selected.empty()) return 0.0;
  double rel = 0.0;
  for (double r : relevances) rel += r;
  rel /= static_cast<double>(cfg.k);
  const double cons =
      consistency(cfg.targets, ctx.evaluate(selected, profile), w);
  return (1.0 - cfg.lambda) * rel + cfg.lambda * cons;
}

// Selects k courses from the candidate pool, one per step, each time taking
// the course whose addition maximizes the objective above. Ties break by
// higher base relevance, then lower course id. The selection order is the
// emitted ranking.
inline RerankOutcome greedy_rerank(const ScoredCandidates& candidates,
                                   const RerankConfig& cfg,
                                   const WeightVector& w,
                                   const PrincipleContext& ctx,
                                   const LearnerProfile& profile) {
  if (cfg.lambda < 0.0 || cfg.lambda > 1.0)
    throw std::invalid_argument("rerank: lambda must lie in [0, 1]");
  if (cfg.k < 1) throw std::invalid_argument("rerank: k must be >= 1");
  if (!(w.sum() > 0.0))
    throw std::invalid_argument("rerank: weight sum must be positive");

  struct Candidate {
    std::int64_t id;
    double relevance;
    const CourseTraits* traits;
    bool taken = false;
  };
  std::vector<Candidate> pool;
  const std::size_t pool_size = std::min<std::size_t>(
      candidates.entries.size(), static_cast<std::size_t>(cfg.candidate_pool));
  if (pool_size < static_cast<std::size_t>(cfg.k))
    throw std::invalid_argument(
        "rerank: candidate pool smaller than the list length");
  pool.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) {
    const auto& [id, rel] = candidates.entries[i];
    pool.push_back({id, rel, &ctx.traits(id)});
  }

  RerankOutcome out;
  out.learner_id = candidates.learner_id;
  for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.k); ++i)
    out.original_topk.push_back(pool[i].id);

  PrincipleAccumulator acc(ctx, profile);
  const double inv_k = 1.0 / static_cast<double>(cfg.k);
  double sum_rel = 0.0;
  double final_objective = 0.0;
  for (int step = 0; step < cfg.k; ++step) {
    Candidate* best = nullptr;
    double best_obj = 0.0;
    for (auto& cand : pool) {
      if (cand.taken) continue;
      const PrincipleVector q = acc.evaluate(cand.traits);
      const double obj =
          (1.0 - cfg.lambda) * (sum_rel + cand.relevance) * inv_k +
          cfg.lambda * consistency(cfg.targets, q, w);
      const bool wins =
          best == nullptr || obj > best_obj ||
          (obj == best_obj && (cand.relevance > best->relevance ||
                               (cand.relevance == best->relevance &&
                                cand.id < best->id)));
      if (wins) {
        best = &cand;
        best_obj = obj;
      }
    }
    best->taken = true;  // pool_size >= k guarantees a pick exists
    acc.add(*best->traits);
    sum_rel += best->relevance;
    out.reranked_topk.push_back(best->id);
    final_objective = best_obj;
  }

  out.objective_value = final_objective;
  out.per_principle_before = ctx.evaluate(out.original_topk, profile);
  out.per_principle_after = ctx.evaluate(out.reranked_topk, profile);
  return out;
}

// ---------------------------------------------------------------------------
// Lambda sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double lambda = 0.0;
  std::string strategy;
  std::string algorithm;
  double ndcg = 0.0;
  double consistency = 0.0;
  double equality = 0.0;
  PrincipleVector principle_means;
};

struct SweepInput {
  std::string algorithm;
  // Learner -> normalized candidates (the pool the re-ranker selects from).
  const std::map<std::int64_t, ScoredCandidates>* candidates = nullptr;
  const std::map<std::int64_t, std::set<std::int64_t>>* test_sets = nullptr;
  const PrincipleContext* ctx = nullptr;
  const std::map<std::int64_t, LearnerProfile>* profiles = nullptr;
  // Consistency/equality are always reported under these evaluation weights;
  // the strategies only steer the optimization.
  WeightVector eval_weights = WeightVector::ones();
  PrincipleVector targets = PrincipleVector::ones();
  int k = 10;
  int candidate_pool = 100;
};

// One row per (strategy, lambda): mean NDCG, population consistency,
// equality, and the mean per-principle scores of the re-ranked lists.
inline std::vector<SweepRow> lambda_sweep(
    const SweepInput& in, const std::vector<double>& lambdas,
    const std::vector<WeightStrategy>& strategies) {
  if (lambdas.empty()) throw std::invalid_argument("sweep: empty lambda grid");
  if (in.candidates->empty())
    throw std::invalid_argument("sweep: no candidates");

  // Baseline pass (the un-reranked top-k) anchors the gap-driven strategies.
  std::map<std::int64_t, PrincipleVector> baseline_gaps;
  PrincipleVector mean_gaps;
  for (const auto& [learner, cands] : *in.candidates) {
    const auto& profile = in.profiles->at(learner);
    const auto topk = cands.top_ids(static_cast<std::size_t>(in.k));
    const PrincipleVector q0 = in.ctx->evaluate(topk, profile);
    const PrincipleVector gaps = consistency_gaps(in.targets, q0);
    baseline_gaps.emplace(learner, gaps);
    for (std::size_t m = 0; m < kNumPrinciples; ++m) mean_gaps[m] += gaps[m];
  }
  for (std::size_t m = 0; m < kNumPrinciples; ++m)
    mean_gaps[m] /= static_cast<double>(in.candidates->size());

  std::vector<SweepRow> rows;
  for (const auto strategy : strategies) {
    const WeightVector shared_w = strategy == WeightStrategy::kUser
                                      ? weights_user(mean_gaps)
                                      : weights_glob();
    for (const double lambda : lambdas) {
      RerankConfig cfg;
      cfg.lambda = lambda;
      cfg.k = in.k;
      cfg.candidate_pool = in.candidate_pool;
      cfg.targets = in.targets;

      SweepRow row;
      row.lambda = lambda;
      row.strategy = strategy_name(strategy);
      row.algorithm = in.algorithm;
      std::map<std::int64_t, double> per_learner;
      double ndcg_sum = 0.0;
      std::size_t ndcg_count = 0;
      for (const auto& [learner, cands] : *in.candidates) {
        const auto& profile = in.profiles->at(learner);
        const WeightVector w =
            strategy == WeightStrategy::kPers
                ? weights_pers(baseline_gaps.at(learner))
                : shared_w;
        const RerankOutcome outcome =
            greedy_rerank(cands, cfg, w, *in.ctx, profile);
        const PrincipleVector q = outcome.per_principle_after;
        per_learner[learner] =
            consistency(in.targets, q, in.eval_weights);
        for (std::size_t m = 0; m < kNumPrinciples; ++m)
          row.principle_means[m] += q[m];
        if (in.test_sets) {
          auto it = in.test_sets->find(learner);
          if (it != in.test_sets->end()) {
            ndcg_sum += ndcg(outcome.reranked_topk, it->second, in.k);
            ++ndcg_count;
          }
        }
      }
      const double n = static_cast<double>(per_learner.size());
      for (std::size_t m = 0; m < kNumPrinciples; ++m)
        row.principle_means[m] /= n;
      row.consistency = population_consistency(per_learner);
      row.equality = equality(per_learner);
      row.ndcg = ndcg_count ? ndcg_sum / static_cast<double>(ndcg_count) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace eqopp
