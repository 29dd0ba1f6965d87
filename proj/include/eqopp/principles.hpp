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
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqopp/catalog.hpp"

namespace eqopp {

// ---------------------------------------------------------------------------
// Principle vector
// ---------------------------------------------------------------------------

inline constexpr std::size_t kNumPrinciples = 7;

enum class Principle : std::size_t {
  kFamiliarity = 0,
  kValidity,
  kLearnability,
  kVariety,
  kQuality,
  kManageability,
  kAffordability,
};

inline constexpr const char* kPrincipleNames[kNumPrinciples] = {
    "familiarity", "validity",      "learnability", "variety",
    "quality",     "manageability", "affordability"};

// Seven scores in [0, 1], in the fixed principle order above. Also used for
// per-learner targets.
struct PrincipleVector {
  std::array<double, kNumPrinciples> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](Principle p) { return values[static_cast<std::size_t>(p)]; }
  double operator[](Principle p) const {
    return values[static_cast<std::size_t>(p)];
  }

  static PrincipleVector ones() {
    PrincipleVector v;
    v.values.fill(1.0);
    return v;
  }

  bool in_unit_range() const {
    for (double x : values)
      if (!(x >= 0.0 && x <= 1.0)) return false;
    return true;
  }

  friend bool operator==(const PrincipleVector&,
                         const PrincipleVector&) = default;
};

// ---------------------------------------------------------------------------
// Shared kernels
// ---------------------------------------------------------------------------

// Probabilities over an ordered taxonomy; zero mass on absent categories.
struct CategoryDistribution {
  std::vector<double> p;

  static CategoryDistribution from_counts(std::span<const double> counts) {
    CategoryDistribution d;
    d.p.assign(counts.begin(), counts.end());
    double total = 0.0;
    for (double c : d.p) {
      if (c < 0.0)
        throw std::invalid_argument("category counts must be non-negative");
      total += c;
    }
    if (total > 0.0)
      for (double& x : d.p) x /= total;
    return d;
  }

  bool empty() const {
    for (double x : p)
      if (x > 0.0) return false;
    return true;
  }
};

// Hellinger distance sqrt(1/2 * sum_g (sqrt(x_g) - sqrt(y_g))^2), symmetric
// and bounded in [0, 1]. Both distributions must live on the same taxonomy.
inline double hellinger(const CategoryDistribution& x,
                        const CategoryDistribution& y) {
  if (x.p.size() != y.p.size())
    throw std::invalid_argument("hellinger: mismatched taxonomies");
  double acc = 0.0;
  for (std::size_t g = 0; g < x.p.size(); ++g) {
    const double d = std::sqrt(x.p[g]) - std::sqrt(y.p[g]);
    acc += d * d;
  }
  return std::clamp(std::sqrt(0.5 * acc), 0.0, 1.0);
}

// Population Gini index, exact pairwise form:
//   (sum_i sum_j |v_i - v_j|) / (2 n^2 mean),
// computed in O(n log n) via the sorted identity. Returns 0 when all values
// are zero. Result lies in [0, (n-1)/n].
inline double gini(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("gini: empty sequence");
  std::vector<double> v(values.begin(), values.end());
  double total = 0.0;
  for (double x : v) {
    if (x < 0.0)
      throw std::invalid_argument("gini: values must be non-negative");
    total += x;
  }
  if (total <= 0.0) return 0.0;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double weighted = 0.0;  // sum_i (2i - n + 1) v_(i), ascending, 0-indexed
  for (std::size_t i = 0; i < v.size(); ++i)
    weighted += (2.0 * static_cast<double>(i) - n + 1.0) * v[i];
  // sum_ij |v_i - v_j| = 2 * weighted; mean = total / n.
  return std::clamp(weighted / (n * total), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// The seven principles, directly over course records
// ---------------------------------------------------------------------------
//
// Each maps a non-empty set of courses to [0, 1]; higher always means the
// principle is met to a larger extent. All are set functions: permuting the
// list never changes a score.

namespace detail {

inline void require_nonempty(std::span<const Course> list, const char* what) {
  if (list.empty())
    throw std::invalid_argument(std::string(what) + ": empty course list");
}

inline CategoryDistribution category_distribution(
    std::span<const Course> list, const std::vector<std::string>& taxonomy) {
  std::vector<double> counts(taxonomy.size(), 0.0);
  for (const auto& c : list) {
    auto it = std::find(taxonomy.begin(), taxonomy.end(), c.category);
    if (it == taxonomy.end())
      throw std::invalid_argument("category not in taxonomy: " + c.category);
    counts[static_cast<std::size_t>(it - taxonomy.begin())] += 1.0;
  }
  return CategoryDistribution::from_counts(counts);
}

}  // namespace detail

// How closely the list's category mix mirrors the learner's past courses:
// 1 - Hellinger between the two category distributions over the taxonomy.
inline double familiarity(std::span<const Course> list,
                          std::span<const Course> profile,
                          const std::vector<std::string>& taxonomy) {
  detail::require_nonempty(list, "familiarity");
  detail::require_nonempty(profile, "familiarity(profile)");
  const auto y = detail::category_distribution(list, taxonomy);
  const auto x = detail::category_distribution(profile, taxonomy);
  return std::clamp(1.0 - hellinger(x, y), 0.0, 1.0);
}

// Freshness of the list: mean over items of the position of last_update
// inside the platform lifetime [t_open, t_now]. 1 = just updated.
inline double validity(std::span<const Course> list, std::int64_t t_open,
                       std::int64_t t_now) {
  detail::require_nonempty(list, "validity");
  if (t_now <= t_open) return 1.0;  // degenerate platform lifetime
  const double span = static_cast<double>(t_now - t_open);
  double acc = 0.0;
  for (const auto& c : list)
    acc += 1.0 - static_cast<double>(t_now - c.last_update) / span;
  return std::clamp(acc / static_cast<double>(list.size()), 0.0, 1.0);
}

// Balance of instructional levels: 1 - Gini over the list's share of every
// platform level, zero-count levels included.
inline double learnability(std::span<const Course> list,
                           const std::vector<std::string>& levels) {
  detail::require_nonempty(list, "learnability");
  if (levels.empty()) throw std::invalid_argument("learnability: no levels");
  std::vector<double> share(levels.size(), 0.0);
  for (const auto& c : list) {
    auto it = std::find(levels.begin(), levels.end(), c.level);
    if (it == levels.end())
      throw std::invalid_argument("level not in platform set: " + c.level);
    share[static_cast<std::size_t>(it - levels.begin())] +=
        1.0 / static_cast<double>(list.size());
  }
  return std::clamp(1.0 - gini(share), 0.0, 1.0);
}

// Mix of asset formats: mean over items of |T_i| / |T|.
inline double variety(std::span<const Course> list) {
  detail::require_nonempty(list, "variety");
  double acc = 0.0;
  for (const auto& c : list)
    acc += static_cast<double>(asset_count(c.asset_types)) /
           static_cast<double>(kAssetTypeCount);
  return std::clamp(acc / static_cast<double>(list.size()), 0.0, 1.0);
}

// Perceived quality: mean over items of the min-max normalized mean rating.
// Items nobody rated take the global mean rating so the score stays defined
// without favouring or punishing them.
inline double quality(std::span<const Course> list, const FeedbackMatrix& m,
                      Bounds rating_bounds) {
  detail::require_nonempty(list, "quality");
  if (rating_bounds.degenerate()) return 1.0;

  double global_sum = 0.0;
  std::size_t global_count = 0;
  for (std::size_t col = 0; col < m.num_courses(); ++col) {
    for (const auto& e : m.col(col)) {
      global_sum += e.rating;
      ++global_count;
    }
  }
  const double global_mean =
      global_count ? global_sum / static_cast<double>(global_count)
                   : (rating_bounds.lo + rating_bounds.hi) / 2.0;

  double acc = 0.0;
  for (const auto& c : list) {
    double mean = global_mean;
    if (auto col = m.course_col(c.id)) {
      const auto raters = m.col(*col);
      if (!raters.empty()) {
        double sum = 0.0;
        for (const auto& e : raters) sum += e.rating;
        mean = sum / static_cast<double>(raters.size());
      }
    }
    acc += (mean - rating_bounds.lo) / rating_bounds.span();
  }
  return std::clamp(acc / static_cast<double>(list.size()), 0.0, 1.0);
}

// Class size: mean over items of (max - enrolments) / (max - min).
// 1 = smallest classes on the platform.
inline double manageability(std::span<const Course> list,
                            Bounds enrolment_bounds) {
  detail::require_nonempty(list, "manageability");
  if (enrolment_bounds.degenerate()) return 1.0;
  double acc = 0.0;
  for (const auto& c : list)
    acc += (enrolment_bounds.hi - static_cast<double>(c.enrolments)) /
           enrolment_bounds.span();
  return std::clamp(acc / static_cast<double>(list.size()), 0.0, 1.0);
}

// Cost of access: mean over items of (max - price) / (max - min).
// 1 = free-of-charge opportunities.
inline double affordability(std::span<const Course> list,
                            Bounds price_bounds) {
  detail::require_nonempty(list, "affordability");
  if (price_bounds.degenerate()) return 1.0;
  double acc = 0.0;
  for (const auto& c : list)
    acc += (price_bounds.hi - c.price) / price_bounds.span();
  return std::clamp(acc / static_cast<double>(list.size()), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Evaluation context
// ---------------------------------------------------------------------------

// Precomputed per-course ingredients of the seven principles.
struct CourseTraits {
  std::int32_t category = 0;  // index into the taxonomy
  std::int32_t level = 0;     // index into the platform level set
  double validity = 1.0;
  double variety = 0.0;
  double quality = 1.0;        // normalized mean rating (or global mean)
  double manageability = 1.0;
  double affordability = 1.0;
};

// A learner's anchor for familiarity: the category distribution of the
// courses they took.
struct LearnerProfile {
  std::vector<double> category_dist;  // normalized over the taxonomy

  bool empty() const {
    for (double x : category_dist)
      if (x > 0.0) return false;
    return true;
  }
};

// Immutable lookup tables shared by every per-learner evaluation: one entry
// per course plus the platform constants. Construct once per train split.
class PrincipleContext {
 public:
  PrincipleContext(const Dataset& train, const FeedbackMatrix& matrix)
      : num_categories_(train.taxonomy.size()),
        num_levels_(train.levels.size()) {
    std::unordered_map<std::string, std::int32_t> cat_index, level_index;
    for (std::size_t g = 0; g < train.taxonomy.size(); ++g)
      cat_index[train.taxonomy[g]] = static_cast<std::int32_t>(g);
    for (std::size_t l = 0; l < train.levels.size(); ++l)
      level_index[train.levels[l]] = static_cast<std::int32_t>(l);

    double global_sum = 0.0;
    std::size_t global_count = 0;
    for (std::size_t col = 0; col < matrix.num_courses(); ++col) {
      for (const auto& e : matrix.col(col)) {
        global_sum += e.rating;
        ++global_count;
      }
    }
    const Bounds rb = train.rating_bounds;
    const double global_mean =
        global_count ? global_sum / static_cast<double>(global_count)
                     : (rb.lo + rb.hi) / 2.0;

    const double life_span =
        static_cast<double>(train.platform_now - train.platform_open);
    traits_.reserve(train.courses.size());
    for (const auto& c : train.courses) {
      CourseTraits t;
      t.category = cat_index.at(c.category);
      t.level = level_index.at(c.level);
      t.validity =
          life_span > 0.0
              ? std::clamp(1.0 - static_cast<double>(train.platform_now -
                                                     c.last_update) /
                                     life_span,
                           0.0, 1.0)
              : 1.0;
      t.variety = static_cast<double>(asset_count(c.asset_types)) /
                  static_cast<double>(kAssetTypeCount);
      double mean = global_mean;
      if (auto col = matrix.course_col(c.id)) {
        const auto raters = matrix.col(*col);
        if (!raters.empty()) {
          double sum = 0.0;
          for (const auto& e : raters) sum += e.rating;
          mean = sum / static_cast<double>(raters.size());
        }
      }
      t.quality = rb.degenerate()
                      ? 1.0
                      : std::clamp((mean - rb.lo) / rb.span(), 0.0, 1.0);
      t.manageability =
          train.enrolment_bounds.degenerate()
              ? 1.0
              : std::clamp((train.enrolment_bounds.hi -
                            static_cast<double>(c.enrolments)) /
                               train.enrolment_bounds.span(),
                           0.0, 1.0);
      t.affordability =
          train.price_bounds.degenerate()
              ? 1.0
              : std::clamp(
                    (train.price_bounds.hi - c.price) /
                        train.price_bounds.span(),
                    0.0, 1.0);
      traits_index_[c.id] = traits_.size();
      traits_.push_back(t);
    }
  }

  // Custom construction for self-contained fixtures (no feedback matrix).
  PrincipleContext(std::size_t num_categories, std::size_t num_levels,
                   std::vector<std::pair<std::int64_t, CourseTraits>> entries)
      : num_categories_(num_categories), num_levels_(num_levels) {
    for (auto& [id, t] : entries) {
      traits_index_[id] = traits_.size();
      traits_.push_back(t);
    }
  }

  std::size_t num_categories() const { return num_categories_; }
  std::size_t num_levels() const { return num_levels_; }

  const CourseTraits& traits(std::int64_t course_id) const {
    auto it = traits_index_.find(course_id);
    if (it == traits_index_.end())
      throw std::invalid_argument("unknown course id " +
                                  std::to_string(course_id));
    return traits_[it->second];
  }

  LearnerProfile profile_from_courses(
      std::span<const std::int64_t> course_ids) const {
    LearnerProfile p;
    p.category_dist.assign(num_categories_, 0.0);
    for (auto id : course_ids)
      p.category_dist[static_cast<std::size_t>(traits(id).category)] += 1.0;
    double total = 0.0;
    for (double x : p.category_dist) total += x;
    if (total > 0.0)
      for (double& x : p.category_dist) x /= total;
    return p;
  }

  // Evaluates all seven principles on a course set. Items are folded in
  // ascending-id order so the result is bitwise permutation invariant.
  PrincipleVector evaluate(std::span<const std::int64_t> course_ids,
                           const LearnerProfile& profile) const;

 private:
  std::size_t num_categories_;
  std::size_t num_levels_;
  std::vector<CourseTraits> traits_;
  std::unordered_map<std::int64_t, std::size_t> traits_index_;
};

// Incremental evaluation state for greedy selection: holds the category and
// level tallies plus the running sums of the mean-type principles, and can
// score the current set with one extra candidate without mutating.
class PrincipleAccumulator {
 public:
  PrincipleAccumulator(const PrincipleContext& ctx,
                       const LearnerProfile& profile)
      : cat_counts_(ctx.num_categories(), 0.0),
        level_counts_(ctx.num_levels(), 0.0) {
    if (profile.category_dist.size() != ctx.num_categories())
      throw std::invalid_argument("profile taxonomy mismatch");
    if (profile.empty())
      throw std::invalid_argument("learner profile is empty");
    sqrt_profile_.resize(profile.category_dist.size());
    for (std::size_t g = 0; g < sqrt_profile_.size(); ++g)
      sqrt_profile_[g] = std::sqrt(profile.category_dist[g]);
  }

  std::size_t size() const { return size_; }

  void add(const CourseTraits& t) {
    cat_counts_[static_cast<std::size_t>(t.category)] += 1.0;
    level_counts_[static_cast<std::size_t>(t.level)] += 1.0;
    sum_validity_ += t.validity;
    sum_variety_ += t.variety;
    sum_quality_ += t.quality;
    sum_manageability_ += t.manageability;
    sum_affordability_ += t.affordability;
    ++size_;
  }

  // Principle vector of the current set plus `extra` (pass nullptr for the
  // set as-is). The set+extra must be non-empty.
  PrincipleVector evaluate(const CourseTraits* extra) const {
    const std::size_t n = size_ + (extra ? 1 : 0);
    if (n == 0)
      throw std::invalid_argument("cannot evaluate an empty course set");
    const double inv_n = 1.0 / static_cast<double>(n);

    PrincipleVector out;

    // Familiarity: 1 - Hellinger(profile, list categories).
    double hell = 0.0;
    for (std::size_t g = 0; g < cat_counts_.size(); ++g) {
      double count = cat_counts_[g];
      if (extra && static_cast<std::size_t>(extra->category) == g)
        count += 1.0;
      const double d = sqrt_profile_[g] - std::sqrt(count * inv_n);
      hell += d * d;
    }
    out[Principle::kFamiliarity] =
        std::clamp(1.0 - std::sqrt(0.5 * hell), 0.0, 1.0);

    // Learnability: 1 - Gini over level shares (zero-count levels included).
    out[Principle::kLearnability] = std::clamp(
        1.0 - level_share_gini(extra, inv_n), 0.0, 1.0);

    const double extra_validity = extra ? extra->validity : 0.0;
    const double extra_variety = extra ? extra->variety : 0.0;
    const double extra_quality = extra ? extra->quality : 0.0;
    const double extra_manage = extra ? extra->manageability : 0.0;
    const double extra_afford = extra ? extra->affordability : 0.0;
    out[Principle::kValidity] =
        std::clamp((sum_validity_ + extra_validity) * inv_n, 0.0, 1.0);
    out[Principle::kVariety] =
        std::clamp((sum_variety_ + extra_variety) * inv_n, 0.0, 1.0);
    out[Principle::kQuality] =
        std::clamp((sum_quality_ + extra_quality) * inv_n, 0.0, 1.0);
    out[Principle::kManageability] =
        std::clamp((sum_manageability_ + extra_manage) * inv_n, 0.0, 1.0);
    out[Principle::kAffordability] =
        std::clamp((sum_affordability_ + extra_afford) * inv_n, 0.0, 1.0);
    return out;
  }

 private:
  double level_share_gini(const CourseTraits* extra, double inv_n) const {
    // Gini over |levels| shares; shares sum to 1, so mean = 1/|levels|.
    std::array<double, 16> small;
    std::vector<double> big;
    std::span<double> shares;
    if (level_counts_.size() <= small.size()) {
      shares = std::span<double>(small.data(), level_counts_.size());
    } else {
      big.resize(level_counts_.size());
      shares = big;
    }
    for (std::size_t l = 0; l < level_counts_.size(); ++l) {
      double count = level_counts_[l];
      if (extra && static_cast<std::size_t>(extra->level) == l) count += 1.0;
      shares[l] = count * inv_n;
    }
    std::sort(shares.begin(), shares.end());
    const double m = static_cast<double>(shares.size());
    double weighted = 0.0, total = 0.0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
      weighted += (2.0 * static_cast<double>(i) - m + 1.0) * shares[i];
      total += shares[i];
    }
    if (total <= 0.0) return 0.0;
    return std::clamp(weighted / (m * total), 0.0, 1.0);
  }

  std::vector<double> cat_counts_;
  std::vector<double> level_counts_;
  std::vector<double> sqrt_profile_;
  double sum_validity_ = 0.0;
  double sum_variety_ = 0.0;
  double sum_quality_ = 0.0;
  double sum_manageability_ = 0.0;
  double sum_affordability_ = 0.0;
  std::size_t size_ = 0;
};

inline PrincipleVector PrincipleContext::evaluate(
    std::span<const std::int64_t> course_ids,
    const LearnerProfile& profile) const {
  if (course_ids.empty())
    throw std::invalid_argument("cannot evaluate an empty course set");
  std::vector<std::int64_t> sorted(course_ids.begin(), course_ids.end());
  std::sort(sorted.begin(), sorted.end());
  PrincipleAccumulator acc(*this, profile);
  for (auto id : sorted) acc.add(traits(id));
  return acc.evaluate(nullptr);
}

}  // namespace eqopp
