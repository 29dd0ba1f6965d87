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

#include <cmath>

#include "eqopp/principles.hpp"
#include "eqopp/random.hpp"
#include "test_util.hpp"

namespace eqopp {
namespace {

using test::make_course;
using test::make_interaction;

CategoryDistribution dist(std::vector<double> p) {
  CategoryDistribution d;
  d.p = std::move(p);
  return d;
}

// Brute-force pairwise Gini, the quadratic reference form.
double gini_pairwise(const std::vector<double>& v) {
  double acc = 0.0, mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (mean == 0.0) return 0.0;
  for (double a : v)
    for (double b : v) acc += std::abs(a - b);
  const double n = static_cast<double>(v.size());
  return acc / (2.0 * n * n * mean);
}

// --- Hellinger ---

TEST(Hellinger, KnownValues) {
  EXPECT_NEAR(hellinger(dist({0.5, 0.5}), dist({0.5, 0.5})), 0.0, 1e-12);
  EXPECT_NEAR(hellinger(dist({1.0, 0.0}), dist({0.0, 1.0})), 1.0, 1e-12);
  EXPECT_NEAR(hellinger(dist({0.5, 0.5}), dist({1.0, 0.0})), 0.54120, 1e-5);
}

TEST(Hellinger, MismatchedTaxonomiesRejected) {
  EXPECT_THROW(hellinger(dist({1.0}), dist({0.5, 0.5})),
               std::invalid_argument);
}

TEST(Hellinger, SymmetryBoundsAndTriangle) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t g = 2 + rng.below(6);
    auto random_dist = [&] {
      std::vector<double> counts(g);
      for (auto& c : counts) c = rng.uniform();
      return CategoryDistribution::from_counts(counts);
    };
    const auto x = random_dist(), y = random_dist(), z = random_dist();
    const double xy = hellinger(x, y);
    EXPECT_DOUBLE_EQ(xy, hellinger(y, x));
    EXPECT_GE(xy, 0.0);
    EXPECT_LE(xy, 1.0);
    EXPECT_NEAR(hellinger(x, x), 0.0, 1e-12);
    EXPECT_LE(xy, hellinger(x, z) + hellinger(z, y) + 1e-12);
  }
}

// --- Gini ---

TEST(Gini, KnownValues) {
  EXPECT_NEAR(gini(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}), 0.0,
              1e-12);
  EXPECT_NEAR(gini(std::vector<double>{1.0, 0.0, 0.0}), 0.66667, 1e-5);
  EXPECT_NEAR(gini(std::vector<double>{0.7, 0.2, 0.1}), 0.40000, 1e-5);
}

TEST(Gini, EmptyAndNegativeRejected) {
  EXPECT_THROW(gini(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(gini(std::vector<double>{1.0, -0.1}), std::invalid_argument);
}

TEST(Gini, MatchesPairwiseReferenceOnRandomInputs) {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + rng.below(20));
    for (auto& x : v) x = rng.uniform() * 10.0;
    EXPECT_NEAR(gini(v), gini_pairwise(v), 1e-10);
  }
}

TEST(Gini, ScaleInvarianceConstantZeroAndUpperBound) {
  Rng rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng.below(12));
    for (auto& x : v) x = rng.uniform() * 5.0;
    const double g = gini(v);
    std::vector<double> scaled = v;
    const double c = 0.1 + rng.uniform() * 9.9;
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(gini(scaled), g, 1e-9);
    const double n = static_cast<double>(v.size());
    EXPECT_LE(g, (n - 1.0) / n + 1e-12);
  }
  EXPECT_NEAR(gini(std::vector<double>{4.2, 4.2, 4.2, 4.2}), 0.0, 1e-12);
}

// --- individual principles ---

TEST(Familiarity, ProportionalProfileScoresOne) {
  const std::vector<std::string> taxonomy = {"a", "b"};
  std::vector<Course> profile = {make_course({.id = 1, .category = "a"}),
                                 make_course({.id = 2, .category = "b"})};
  std::vector<Course> list = {make_course({.id = 3, .category = "a"}),
                              make_course({.id = 4, .category = "b"})};
  EXPECT_NEAR(familiarity(list, profile, taxonomy), 1.0, 1e-12);
}

TEST(Familiarity, DisjointCategoriesScoreZero) {
  const std::vector<std::string> taxonomy = {"a", "b"};
  std::vector<Course> profile = {make_course({.id = 1, .category = "a"})};
  std::vector<Course> list = {make_course({.id = 2, .category = "b"})};
  EXPECT_NEAR(familiarity(list, profile, taxonomy), 0.0, 1e-12);
}

TEST(Familiarity, HalfOverlapMatchesHellingerComplement) {
  const std::vector<std::string> taxonomy = {"a", "b"};
  std::vector<Course> profile = {make_course({.id = 1, .category = "a"}),
                                 make_course({.id = 2, .category = "b"})};
  std::vector<Course> list = {make_course({.id = 3, .category = "a"}),
                              make_course({.id = 4, .category = "a"})};
  EXPECT_NEAR(familiarity(list, profile, taxonomy), 0.45880, 1e-5);
}

TEST(Validity, FreshOldMixedAndDegenerate) {
  std::vector<Course> fresh = {make_course({.id = 1, .last_update = 100})};
  EXPECT_NEAR(validity(fresh, 0, 100), 1.0, 1e-12);
  std::vector<Course> old = {make_course({.id = 1, .last_update = 0})};
  EXPECT_NEAR(validity(old, 0, 100), 0.0, 1e-12);
  std::vector<Course> mixed = {make_course({.id = 1, .last_update = 100}),
                               make_course({.id = 2, .last_update = 50})};
  EXPECT_NEAR(validity(mixed, 0, 100), 0.75, 1e-12);
  EXPECT_NEAR(validity(fresh, 100, 100), 1.0, 1e-12);
}

TEST(Learnability, BalancedSingleLevelAndSkewed) {
  const std::vector<std::string> levels = {"beg", "int", "adv"};
  std::vector<Course> balanced = {make_course({.id = 1, .level = "beg"}),
                                  make_course({.id = 2, .level = "int"}),
                                  make_course({.id = 3, .level = "adv"})};
  EXPECT_NEAR(learnability(balanced, levels), 1.0, 1e-12);

  std::vector<Course> single = {make_course({.id = 1, .level = "beg"}),
                                make_course({.id = 2, .level = "beg"})};
  EXPECT_NEAR(learnability(single, levels), 0.33333, 1e-5);

  std::vector<Course> skewed;
  for (int i = 0; i < 7; ++i)
    skewed.push_back(make_course({.id = i + 1, .level = "beg"}));
  skewed.push_back(make_course({.id = 8, .level = "int"}));
  skewed.push_back(make_course({.id = 9, .level = "int"}));
  skewed.push_back(make_course({.id = 10, .level = "adv"}));
  EXPECT_NEAR(learnability(skewed, levels), 0.60000, 1e-5);
}

TEST(Variety, RatiosOfAssetUniverse) {
  const AssetSet all = parse_asset_set("Video|Article|Ebook|Podcast");
  std::vector<Course> full = {make_course({.id = 1, .assets = all})};
  EXPECT_NEAR(variety(full), 1.0, 1e-12);

  std::vector<Course> narrow = {
      make_course({.id = 1, .assets = asset_bit(AssetType::kVideo)}),
      make_course({.id = 2, .assets = asset_bit(AssetType::kEbook)})};
  EXPECT_NEAR(variety(narrow), 0.25, 1e-12);

  std::vector<Course> mixed = {
      make_course({.id = 1, .assets = asset_bit(AssetType::kVideo)}),
      make_course({.id = 2, .assets = all})};
  EXPECT_NEAR(variety(mixed), 0.625, 1e-12);
}

TEST(Quality, NormalizedMeanRatings) {
  std::vector<Course> courses = {make_course({.id = 1}),
                                 make_course({.id = 2}),
                                 make_course({.id = 3})};
  std::vector<Interaction> log = {
      make_interaction(1, 1, 5.0, 150), make_interaction(2, 1, 5.0, 150),
      make_interaction(3, 2, 3.0, 150)};
  DatasetOptions opt;
  opt.platform_open = 100;
  opt.platform_now = 200;
  opt.rating_bounds = Bounds{1.0, 5.0};
  const Dataset d = make_dataset(courses, log, opt);
  const FeedbackMatrix m(d);

  std::vector<Course> list = {*d.find_course(1), *d.find_course(2)};
  EXPECT_NEAR(quality(list, m, d.rating_bounds), 0.75, 1e-12);

  std::vector<Course> top = {*d.find_course(1)};
  EXPECT_NEAR(quality(top, m, d.rating_bounds), 1.0, 1e-12);

  // Unrated course falls back to the global mean rating: (5+5+3)/3 = 13/3.
  std::vector<Course> unrated = {*d.find_course(3)};
  const double expected = (13.0 / 3.0 - 1.0) / 4.0;
  EXPECT_NEAR(quality(unrated, m, d.rating_bounds), expected, 1e-12);
}

TEST(Quality, AllRatedAtMinimumScoresZero) {
  std::vector<Course> courses = {make_course({.id = 1})};
  std::vector<Interaction> log = {make_interaction(1, 1, 1.0, 150)};
  DatasetOptions opt;
  opt.platform_open = 100;
  opt.platform_now = 200;
  opt.rating_bounds = Bounds{1.0, 5.0};
  const Dataset d = make_dataset(courses, log, opt);
  const FeedbackMatrix m(d);
  std::vector<Course> list = {*d.find_course(1)};
  EXPECT_NEAR(quality(list, m, d.rating_bounds), 0.0, 1e-12);
}

TEST(Manageability, SmallClassesScoreHigh) {
  const Bounds bounds{10, 1010};
  std::vector<Course> small = {make_course({.id = 1, .enrolments = 10})};
  EXPECT_NEAR(manageability(small, bounds), 1.0, 1e-12);
  std::vector<Course> big = {make_course({.id = 1, .enrolments = 1010})};
  EXPECT_NEAR(manageability(big, bounds), 0.0, 1e-12);
  std::vector<Course> mixed = {make_course({.id = 1, .enrolments = 10}),
                               make_course({.id = 2, .enrolments = 510})};
  EXPECT_NEAR(manageability(mixed, bounds), 0.75, 1e-12);
  EXPECT_NEAR(manageability(big, Bounds{5, 5}), 1.0, 1e-12);
}

TEST(Affordability, CheapCoursesScoreHigh) {
  const Bounds bounds{0, 100};
  std::vector<Course> free = {make_course({.id = 1, .price = 0.0})};
  EXPECT_NEAR(affordability(free, bounds), 1.0, 1e-12);
  std::vector<Course> pricey = {make_course({.id = 1, .price = 100.0})};
  EXPECT_NEAR(affordability(pricey, bounds), 0.0, 1e-12);
  std::vector<Course> mixed = {make_course({.id = 1, .price = 0.0}),
                               make_course({.id = 2, .price = 50.0})};
  EXPECT_NEAR(affordability(mixed, bounds), 0.75, 1e-12);
}

// --- evaluate_all via the context ---

// A one-course platform where that course maxes out every principle.
Dataset perfect_singleton_dataset(double price) {
  std::vector<Course> courses = {
      make_course({.id = 1,
                   .category = "a",
                   .last_update = 200,
                   .level = "only",
                   .assets = parse_asset_set("Video|Article|Ebook|Podcast"),
                   .enrolments = 0,
                   .price = price}),
      // A second course pins the observed feature extrema.
      make_course({.id = 2,
                   .category = "b",
                   .last_update = 150,
                   .level = "only",
                   .assets = asset_bit(AssetType::kVideo),
                   .enrolments = 1000,
                   .price = 100.0})};
  std::vector<Interaction> log = {make_interaction(1, 1, 5.0, 180),
                                  make_interaction(2, 1, 5.0, 190)};
  DatasetOptions opt;
  opt.platform_open = 100;
  opt.platform_now = 200;
  opt.rating_bounds = Bounds{1.0, 5.0};
  opt.price_bounds = Bounds{0.0, 100.0};
  opt.enrolment_bounds = Bounds{0.0, 1000.0};
  return make_dataset(courses, log, opt);
}

TEST(EvaluateAll, PerfectSingletonHitsAllOnes) {
  const Dataset d = perfect_singleton_dataset(0.0);
  const FeedbackMatrix m(d);
  const PrincipleContext ctx(d, m);
  const std::vector<std::int64_t> list = {1};
  const LearnerProfile profile = ctx.profile_from_courses(list);
  const PrincipleVector q = ctx.evaluate(list, profile);
  for (std::size_t i = 0; i < kNumPrinciples; ++i)
    EXPECT_NEAR(q[i], 1.0, 1e-12) << kPrincipleNames[i];
}

TEST(EvaluateAll, MaxPriceOnlyFlipsAffordability) {
  const Dataset d = perfect_singleton_dataset(100.0);
  const FeedbackMatrix m(d);
  const PrincipleContext ctx(d, m);
  const std::vector<std::int64_t> list = {1};
  const LearnerProfile profile = ctx.profile_from_courses(list);
  const PrincipleVector q = ctx.evaluate(list, profile);
  for (std::size_t i = 0; i < kNumPrinciples; ++i) {
    if (i == static_cast<std::size_t>(Principle::kAffordability))
      EXPECT_NEAR(q[i], 0.0, 1e-12);
    else
      EXPECT_NEAR(q[i], 1.0, 1e-12) << kPrincipleNames[i];
  }
}

TEST(EvaluateAll, MatchesPerPrincipleReferenceOnRandomLists) {
  test::Corpus corpus(test::small_corpus_config(), 17);
  const Dataset& train = corpus.split.train;
  Rng rng(4242);

  const auto& learners = corpus.matrix->learner_ids();
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t learner =
        learners[rng.below(learners.size())];
    const auto profile_ids = corpus.train_courses(learner);
    if (profile_ids.empty()) continue;

    std::vector<std::int64_t> list_ids;
    std::vector<Course> list_courses, profile_courses;
    for (int i = 0; i < 10; ++i) {
      const auto& c = train.courses[rng.below(train.courses.size())];
      list_ids.push_back(c.id);
      list_courses.push_back(c);
    }
    for (auto id : profile_ids) profile_courses.push_back(*train.find_course(id));

    const PrincipleVector got =
        corpus.ctx->evaluate(list_ids, corpus.profile(learner));

    // Reference: the seven standalone principle functions.
    EXPECT_NEAR(got[Principle::kFamiliarity],
                familiarity(list_courses, profile_courses, train.taxonomy),
                1e-10);
    EXPECT_NEAR(got[Principle::kValidity],
                validity(list_courses, train.platform_open,
                         train.platform_now),
                1e-10);
    EXPECT_NEAR(got[Principle::kLearnability],
                learnability(list_courses, train.levels), 1e-10);
    EXPECT_NEAR(got[Principle::kVariety], variety(list_courses), 1e-10);
    EXPECT_NEAR(got[Principle::kQuality],
                quality(list_courses, *corpus.matrix, train.rating_bounds),
                1e-10);
    EXPECT_NEAR(got[Principle::kManageability],
                manageability(list_courses, train.enrolment_bounds), 1e-10);
    EXPECT_NEAR(got[Principle::kAffordability],
                affordability(list_courses, train.price_bounds), 1e-10);
  }
}

TEST(EvaluateAll, PermutationInvariantBitwise) {
  test::Corpus corpus(test::small_corpus_config(), 23);
  Rng rng(5150);
  const auto& learners = corpus.matrix->learner_ids();
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t learner = learners[rng.below(learners.size())];
    const auto profile = corpus.profile(learner);
    std::vector<std::int64_t> list;
    for (int i = 0; i < 8; ++i)
      list.push_back(
          corpus.split.train.courses[rng.below(corpus.split.train.courses.size())]
              .id);
    const PrincipleVector a = corpus.ctx->evaluate(list, profile);
    rng.shuffle(list);
    const PrincipleVector b = corpus.ctx->evaluate(list, profile);
    EXPECT_EQ(a, b);
  }
}

TEST(Principles, RangeAndMonotoneOrientation) {
  // Raising a price never raises affordability; shrinking a class never
  // lowers manageability; moving last_update toward T_c never lowers
  // validity.
  Rng rng(777);
  const Bounds price_bounds{0, 100}, enrol_bounds{0, 1000};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Course> list;
    const std::size_t n = 1 + rng.below(10);
    for (std::size_t i = 0; i < n; ++i) {
      list.push_back(make_course(
          {.id = static_cast<std::int64_t>(i) + 1,
           .last_update = rng.range(0, 100),
           .enrolments = rng.range(0, 1000),
           .price = rng.uniform() * 100.0}));
    }
    const double afford = affordability(list, price_bounds);
    const double manage = manageability(list, enrol_bounds);
    const double valid = validity(list, 0, 100);
    EXPECT_TRUE(afford >= 0.0 && afford <= 1.0);

    auto& victim = list[rng.below(list.size())];
    victim.price = std::min(100.0, victim.price + rng.uniform() * 50.0);
    EXPECT_LE(affordability(list, price_bounds), afford + 1e-12);

    victim.enrolments = std::max<std::int64_t>(0, victim.enrolments / 2);
    EXPECT_GE(manageability(list, enrol_bounds), manage - 1e-12);

    victim.last_update = std::min<std::int64_t>(100, victim.last_update + 30);
    EXPECT_GE(validity(list, 0, 100), valid - 1e-12);
  }
}

TEST(Principles, LearnabilityFloorIsInverseLevelCount) {
  Rng rng(888);
  const std::vector<std::string> levels = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Course> list;
    const std::size_t n = 1 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i)
      list.push_back(make_course({.id = static_cast<std::int64_t>(i) + 1,
                                  .level = levels[rng.below(4)]}));
    EXPECT_GE(learnability(list, levels),
              1.0 / static_cast<double>(levels.size()) - 1e-12);
  }
}

TEST(Principles, EmptyListRejected) {
  const std::vector<std::string> taxonomy = {"a"};
  const std::vector<std::string> levels = {"x"};
  std::vector<Course> empty;
  std::vector<Course> profile = {make_course({.id = 1, .category = "a"})};
  EXPECT_THROW(familiarity(empty, profile, taxonomy), std::invalid_argument);
  EXPECT_THROW(validity(empty, 0, 1), std::invalid_argument);
  EXPECT_THROW(learnability(empty, levels), std::invalid_argument);
  EXPECT_THROW(variety(empty), std::invalid_argument);
}

}  // namespace
}  // namespace eqopp
