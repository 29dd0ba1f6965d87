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

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "eqopp/principles.hpp"

namespace eqopp {

// Per-principle weights in [0, 1]; the sum must be positive wherever the
// vector is applied.
struct WeightVector {
  std::array<double, kNumPrinciples> w{};

  double& operator[](std::size_t i) { return w[i]; }
  double operator[](std::size_t i) const { return w[i]; }

  double sum() const {
    double s = 0.0;
    for (double x : w) s += x;
    return s;
  }

  static WeightVector ones() {
    WeightVector v;
    v.w.fill(1.0);
    return v;
  }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

// Complement of the weighted Manhattan distance between the targeted and the
// achieved principle vectors, normalized by the weight mass:
//   1 - sum_m w_m |p_m - q_m| / sum_m w_m.
// 1 means every positively weighted principle hits its target exactly.
inline double consistency(const PrincipleVector& p, const PrincipleVector& q,
                          const WeightVector& w) {
  const double total = w.sum();
  if (!(total > 0.0))
    throw std::invalid_argument("consistency: weight sum must be positive");
  double acc = 0.0;
  for (std::size_t m = 0; m < kNumPrinciples; ++m) {
    if (w[m] < 0.0)
      throw std::invalid_argument("consistency: negative weight");
    acc += w[m] * std::abs(p[m] - q[m]);
  }
  return std::clamp(1.0 - acc / total, 0.0, 1.0);
}

// Arithmetic mean of the per-learner consistencies.
inline double population_consistency(
    const std::map<std::int64_t, double>& per_learner) {
  if (per_learner.empty())
    throw std::invalid_argument("population_consistency: no learners");
  double acc = 0.0;
  for (const auto& [learner, value] : per_learner) acc += value;
  return acc / static_cast<double>(per_learner.size());
}

// 1 - Gini over the per-learner consistencies: 1 means recommendations are
// equally consistent for everyone.
inline double equality(const std::map<std::int64_t, double>& per_learner) {
  if (per_learner.empty())
    throw std::invalid_argument("equality: no learners");
  std::vector<double> values;
  values.reserve(per_learner.size());
  for (const auto& [learner, value] : per_learner) values.push_back(value);
  return std::clamp(1.0 - gini(values), 0.0, 1.0);
}

struct ConsistencyReport {
  std::map<std::int64_t, double> per_learner;
  double population_mean = 0.0;
  double equality = 0.0;

  static ConsistencyReport from(std::map<std::int64_t, double> per_learner) {
    ConsistencyReport r;
    r.population_mean = population_consistency(per_learner);
    r.equality = eqopp::equality(per_learner);
    r.per_learner = std::move(per_learner);
    return r;
  }
};

// Consistency of a learner's own training history against the targets: the
// achieved vector is evaluated on I_u instead of a recommended list.
inline double profile_consistency(std::span<const std::int64_t> train_courses,
                                  const PrincipleContext& ctx,
                                  const PrincipleVector& targets,
                                  const WeightVector& w) {
  if (train_courses.empty())
    throw std::invalid_argument("profile_consistency: empty profile");
  const LearnerProfile profile = ctx.profile_from_courses(train_courses);
  return consistency(targets, ctx.evaluate(train_courses, profile), w);
}

// NDCG@k with binary relevance: gain 1/log2(pos+1) at 1-indexed positions,
// ideal DCG over min(k, |relevant|) items. 0 when nothing relevant was
// retrieved.
inline double ndcg(std::span<const std::int64_t> ranked,
                   const std::set<std::int64_t>& relevant, int k) {
  if (k < 1) throw std::invalid_argument("ndcg: k must be >= 1");
  if (relevant.empty()) return 0.0;
  const std::size_t depth =
      std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
  double dcg = 0.0;
  for (std::size_t pos = 0; pos < depth; ++pos) {
    if (relevant.count(ranked[pos]))
      dcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
  }
  const std::size_t ideal_depth =
      std::min<std::size_t>(relevant.size(), static_cast<std::size_t>(k));
  double idcg = 0.0;
  for (std::size_t pos = 0; pos < ideal_depth; ++pos)
    idcg += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
  return idcg > 0.0 ? std::clamp(dcg / idcg, 0.0, 1.0) : 0.0;
}

}  // namespace eqopp
