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
#include <stdexcept>
#include <string>
#include <vector>

#include "eqopp/catalog.hpp"
#include "eqopp/random.hpp"

namespace eqopp {

// Parameters of the synthetic course platform. The corpus is schema-identical
// to loaded data: a catalog with the full feature set plus a timestamped
// rating log with popularity skew and per-learner category affinity, so
// collaborative and content-based scorers both find real signal in it.
struct GeneratorConfig {
  std::size_t num_learners = 500;
  std::size_t num_courses = 200;
  std::size_t num_categories = 8;
  std::vector<std::string> levels = {"beginner", "intermediate", "advanced",
                                     "all"};
  // Fraction of the catalog each learner interacts with.
  double density = 0.05;
  // Popularity weight of the course with rank r is (r+1)^-skew; 0 = uniform.
  double popularity_skew = 1.0;
  std::int64_t timestamp_min = 1420070400;  // 2015-01-01
  std::int64_t timestamp_max = 1577836800;  // 2020-01-01
  double rating_min = 1.0;
  double rating_max = 5.0;
  double price_max = 199.99;
  double free_course_fraction = 0.3;
  std::int64_t enrolment_max = 50000;
  // Strength of the learner's pull toward their favourite category: 0 means
  // no preference, 1 means favourite-category courses only.
  double category_affinity = 0.7;
  std::size_t description_words = 12;
  // Floor below which the configured density cannot support evaluation.
  std::size_t min_interactions_per_learner = 5;
};

namespace detail {

inline std::string category_name(std::size_t g) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "category_%02zu", g);
  return buf;
}

}  // namespace detail

// Deterministic for a fixed (config, seed) pair: identical calls produce
// identical datasets, byte for byte once serialized.
inline Dataset generate_synthetic(const GeneratorConfig& cfg,
                                  std::uint64_t seed) {
  if (cfg.num_learners == 0 || cfg.num_courses == 0 ||
      cfg.num_categories == 0 || cfg.levels.empty())
    throw std::invalid_argument("generator: empty dimension");
  if (cfg.timestamp_min >= cfg.timestamp_max)
    throw std::invalid_argument("generator: empty timestamp range");
  if (!(cfg.rating_min < cfg.rating_max))
    throw std::invalid_argument("generator: invalid rating bounds");
  const auto per_learner = static_cast<std::size_t>(
      std::llround(cfg.density * static_cast<double>(cfg.num_courses)));
  if (per_learner < cfg.min_interactions_per_learner)
    throw std::invalid_argument(
        "generator: density implies " + std::to_string(per_learner) +
        " interactions per learner, below the required minimum of " +
        std::to_string(cfg.min_interactions_per_learner));
  if (per_learner > cfg.num_courses)
    throw std::invalid_argument("generator: density exceeds catalog size");

  Rng rng(mix_seed(seed, 0x636f636fULL));

  std::vector<std::string> taxonomy;
  taxonomy.reserve(cfg.num_categories);
  for (std::size_t g = 0; g < cfg.num_categories; ++g)
    taxonomy.push_back(detail::category_name(g));

  // Catalog.
  std::vector<Course> courses;
  courses.reserve(cfg.num_courses);
  for (std::size_t i = 0; i < cfg.num_courses; ++i) {
    Course c;
    c.id = static_cast<std::int64_t>(i) + 1;
    c.category = taxonomy[rng.below(cfg.num_categories)];
    c.level = cfg.levels[rng.below(cfg.levels.size())];
    c.last_update = rng.range(cfg.timestamp_min, cfg.timestamp_max);
    const std::size_t n_assets = 1 + rng.below(kAssetTypeCount);
    std::vector<std::size_t> types = {0, 1, 2, 3};
    rng.shuffle(types);
    for (std::size_t t = 0; t < n_assets; ++t)
      c.asset_types |= static_cast<AssetSet>(1u << types[t]);
    const double u = rng.uniform();
    c.enrolments = static_cast<std::int64_t>(
        std::floor(static_cast<double>(cfg.enrolment_max) * u * u * u));
    if (rng.chance(cfg.free_course_fraction)) {
      c.price = 0.0;
    } else {
      c.price = std::round(rng.uniform(5.0, cfg.price_max) * 100.0) / 100.0;
    }
    // Descriptions mix category-specific and shared vocabulary so that
    // TF-IDF profiles pick up the same affinity structure as the ratings.
    std::string desc;
    const std::size_t cat_idx = static_cast<std::size_t>(
        std::find(taxonomy.begin(), taxonomy.end(), c.category) -
        taxonomy.begin());
    for (std::size_t w = 0; w < cfg.description_words; ++w) {
      if (!desc.empty()) desc += ' ';
      if (rng.chance(0.7)) {
        desc += "topic" + std::to_string(cat_idx) + "w" +
                std::to_string(rng.below(20));
      } else {
        desc += "common" + std::to_string(rng.below(50));
      }
    }
    c.description = std::move(desc);
    courses.push_back(std::move(c));
  }

  // Popularity profile: a random permutation assigns ranks, weights follow
  // the configured power law.
  std::vector<std::size_t> rank_of(cfg.num_courses);
  {
    std::vector<std::size_t> perm(cfg.num_courses);
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    for (std::size_t r = 0; r < perm.size(); ++r) rank_of[perm[r]] = r;
  }
  std::vector<double> popularity(cfg.num_courses);
  for (std::size_t i = 0; i < cfg.num_courses; ++i)
    popularity[i] = std::pow(static_cast<double>(rank_of[i] + 1),
                             -cfg.popularity_skew);

  // Rating values lean high, mirroring how learners actually rate.
  const double rating_levels[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> rating_weights = {0.05, 0.10, 0.20, 0.30, 0.35};

  std::vector<Interaction> interactions;
  interactions.reserve(cfg.num_learners * per_learner);
  std::vector<double> weights(cfg.num_courses);
  std::vector<char> picked(cfg.num_courses);
  for (std::size_t u = 0; u < cfg.num_learners; ++u) {
    std::fill(picked.begin(), picked.end(), 0);
    const std::size_t favourite = rng.below(cfg.num_categories);
    const double a = cfg.category_affinity;
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.num_courses; ++i) {
      const bool in_favourite = courses[i].category == taxonomy[favourite];
      // Boost averages to ~1 across the catalog for any affinity strength.
      const double boost =
          in_favourite ? 1.0 - a + a * static_cast<double>(cfg.num_categories)
                       : 1.0 - a;
      weights[i] = popularity[i] * boost;
      total += weights[i];
    }
    for (std::size_t t = 0; t < per_learner; ++t) {
      if (total <= 0.0) {
        // Affinity 1 can exhaust the favourite category; widen to the rest.
        for (std::size_t i = 0; i < cfg.num_courses; ++i) {
          if (weights[i] == 0.0 && !picked[i]) {
            weights[i] = popularity[i];
            total += weights[i];
          }
        }
      }
      const std::size_t pick = rng.weighted(weights, total);
      total -= weights[pick];
      weights[pick] = 0.0;  // without replacement
      picked[pick] = 1;
      Interaction x;
      x.learner_id = static_cast<std::int64_t>(u) + 1;
      x.course_id = courses[pick].id;
      x.rating = cfg.rating_min +
                 rating_levels[rng.weighted(rating_weights, 1.0)] *
                     (cfg.rating_max - cfg.rating_min);
      x.timestamp = rng.range(cfg.timestamp_min, cfg.timestamp_max);
      interactions.push_back(x);
    }
  }

  DatasetOptions opt;
  opt.taxonomy = taxonomy;
  opt.levels = cfg.levels;
  opt.platform_open = cfg.timestamp_min;
  opt.platform_now = cfg.timestamp_max;
  opt.rating_bounds = Bounds{cfg.rating_min, cfg.rating_max};
  return make_dataset(std::move(courses), std::move(interactions), opt);
}

}  // namespace eqopp
