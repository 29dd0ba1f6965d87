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
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqopp/csv.hpp"

namespace eqopp {

// ---------------------------------------------------------------------------
// Asset types
// ---------------------------------------------------------------------------

enum class AssetType : std::uint8_t { kVideo = 0, kArticle, kEbook, kPodcast };

inline constexpr std::size_t kAssetTypeCount = 4;

inline constexpr const char* kAssetTypeNames[kAssetTypeCount] = {
    "Video", "Article", "Ebook", "Podcast"};

// Bitmask over the four asset types.
using AssetSet = std::uint8_t;

inline constexpr AssetSet asset_bit(AssetType t) {
  return static_cast<AssetSet>(1u << static_cast<unsigned>(t));
}

inline int asset_count(AssetSet s) { return std::popcount(s); }

// Parses a `|`-separated token list, e.g. "Video|Ebook".
inline AssetSet parse_asset_set(const std::string& text) {
  AssetSet out = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('|', start);
    if (end == std::string::npos) end = text.size();
    const std::string token = text.substr(start, end - start);
    if (!token.empty()) {
      bool known = false;
      for (std::size_t i = 0; i < kAssetTypeCount; ++i) {
        if (token == kAssetTypeNames[i]) {
          out |= static_cast<AssetSet>(1u << i);
          known = true;
          break;
        }
      }
      if (!known)
        throw std::runtime_error("unknown asset type '" + token + "'");
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

inline std::string format_asset_set(AssetSet s) {
  std::string out;
  for (std::size_t i = 0; i < kAssetTypeCount; ++i) {
    if (s & (1u << i)) {
      if (!out.empty()) out += '|';
      out += kAssetTypeNames[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Core records
// ---------------------------------------------------------------------------

struct Course {
  std::int64_t id = 0;
  std::string category;
  std::int64_t last_update = 0;  // epoch seconds
  std::string level;
  AssetSet asset_types = 0;
  std::int64_t enrolments = 0;
  double price = 0.0;
  std::string description;
  std::optional<double> mean_rating;  // absent until derived from feedback

  friend bool operator==(const Course&, const Course&) = default;
};

struct Interaction {
  std::int64_t learner_id = 0;
  std::int64_t course_id = 0;
  double rating = 0.0;
  std::int64_t timestamp = 0;  // epoch seconds

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;

  double span() const { return hi - lo; }
  bool degenerate() const { return !(hi > lo); }
  bool contains(double x) const { return x >= lo && x <= hi; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

// An immutable snapshot of a course platform: the catalog, the interaction
// log, and the platform-level constants every downstream computation
// normalizes against.
struct Dataset {
  std::vector<Course> courses;  // sorted by id, unique
  std::vector<Interaction> interactions;
  Bounds rating_bounds;
  Bounds enrolment_bounds;
  Bounds price_bounds;
  std::int64_t platform_open = 0;  // T_o
  std::int64_t platform_now = 0;   // T_c
  std::vector<std::string> taxonomy;  // ordered category set G
  std::vector<std::string> levels;    // ordered instructional levels

  friend bool operator==(const Dataset&, const Dataset&) = default;

  const Course* find_course(std::int64_t id) const {
    auto it = std::lower_bound(
        courses.begin(), courses.end(), id,
        [](const Course& c, std::int64_t v) { return c.id < v; });
    if (it == courses.end() || it->id != id) return nullptr;
    return &*it;
  }

  std::size_t category_index(const std::string& cat) const {
    auto it = std::find(taxonomy.begin(), taxonomy.end(), cat);
    if (it == taxonomy.end())
      throw std::runtime_error("category not in taxonomy: " + cat);
    return static_cast<std::size_t>(it - taxonomy.begin());
  }

  std::size_t level_index(const std::string& level) const {
    auto it = std::find(levels.begin(), levels.end(), level);
    if (it == levels.end())
      throw std::runtime_error("level not in platform set: " + level);
    return static_cast<std::size_t>(it - levels.begin());
  }
};

// Optional overrides applied while assembling a Dataset. Anything left unset
// falls back to the observed-extrema / observed-vocabulary defaults.
struct DatasetOptions {
  std::optional<Bounds> rating_bounds;
  std::optional<Bounds> enrolment_bounds;
  std::optional<Bounds> price_bounds;
  std::optional<std::int64_t> platform_open;
  std::optional<std::int64_t> platform_now;
  std::optional<std::vector<std::string>> taxonomy;
  std::optional<std::vector<std::string>> levels;
};

namespace detail {

inline void sort_and_check_courses(std::vector<Course>& courses) {
  std::sort(courses.begin(), courses.end(),
            [](const Course& a, const Course& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < courses.size(); ++i) {
    if (courses[i].id == courses[i - 1].id)
      throw std::runtime_error("duplicate course id " +
                               std::to_string(courses[i].id));
  }
}

inline std::vector<std::string> observed_sorted(
    const std::vector<Course>& courses, std::string Course::*field) {
  std::set<std::string> seen;
  for (const auto& c : courses) seen.insert(c.*field);
  return {seen.begin(), seen.end()};
}

}  // namespace detail

// Assembles and validates a Dataset from already-parsed records. Defaults:
// T_c = max timestamp seen anywhere, T_o = min last_update, feature bounds =
// observed extrema, taxonomy/levels = observed vocabularies in sorted order.
inline Dataset make_dataset(std::vector<Course> courses,
                            std::vector<Interaction> interactions,
                            const DatasetOptions& opt = {}) {
  if (courses.empty()) throw std::runtime_error("dataset has no courses");
  detail::sort_and_check_courses(courses);

  Dataset d;
  d.courses = std::move(courses);
  d.interactions = std::move(interactions);

  d.taxonomy = opt.taxonomy ? *opt.taxonomy
                            : detail::observed_sorted(d.courses,
                                                      &Course::category);
  d.levels = opt.levels
                 ? *opt.levels
                 : detail::observed_sorted(d.courses, &Course::level);

  std::int64_t min_update = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_stamp = std::numeric_limits<std::int64_t>::min();
  double min_enrol = std::numeric_limits<double>::infinity(), max_enrol = 0;
  double min_price = std::numeric_limits<double>::infinity(), max_price = 0;
  for (const auto& c : d.courses) {
    min_update = std::min(min_update, c.last_update);
    max_stamp = std::max(max_stamp, c.last_update);
    min_enrol = std::min(min_enrol, static_cast<double>(c.enrolments));
    max_enrol = std::max(max_enrol, static_cast<double>(c.enrolments));
    min_price = std::min(min_price, c.price);
    max_price = std::max(max_price, c.price);
  }
  double min_rating = std::numeric_limits<double>::infinity();
  double max_rating = -std::numeric_limits<double>::infinity();
  for (const auto& x : d.interactions) {
    max_stamp = std::max(max_stamp, x.timestamp);
    min_rating = std::min(min_rating, x.rating);
    max_rating = std::max(max_rating, x.rating);
  }
  if (d.interactions.empty()) {
    min_rating = 0.0;
    max_rating = 0.0;
  }

  d.platform_open = opt.platform_open.value_or(min_update);
  d.platform_now = opt.platform_now.value_or(max_stamp);
  d.rating_bounds = opt.rating_bounds.value_or(Bounds{min_rating, max_rating});
  d.enrolment_bounds =
      opt.enrolment_bounds.value_or(Bounds{min_enrol, max_enrol});
  d.price_bounds = opt.price_bounds.value_or(Bounds{min_price, max_price});

  if (d.platform_open > d.platform_now)
    throw std::runtime_error("platform_open must not exceed platform_now");
  if (d.rating_bounds.lo > d.rating_bounds.hi ||
      d.enrolment_bounds.lo > d.enrolment_bounds.hi ||
      d.price_bounds.lo > d.price_bounds.hi)
    throw std::runtime_error("inverted feature bounds");

  // Invariant checks.
  for (const auto& c : d.courses) {
    if (c.asset_types == 0)
      throw std::runtime_error("course " + std::to_string(c.id) +
                               ": asset_types must be non-empty");
    if (c.price < 0)
      throw std::runtime_error("course " + std::to_string(c.id) +
                               ": negative price");
    if (c.enrolments < 0)
      throw std::runtime_error("course " + std::to_string(c.id) +
                               ": negative enrolments");
    if (c.last_update < d.platform_open || c.last_update > d.platform_now)
      throw std::runtime_error("course " + std::to_string(c.id) +
                               ": last_update outside [T_o, T_c]");
    d.category_index(c.category);  // throws on unknown category
    d.level_index(c.level);        // throws on unknown level
  }
  std::vector<std::int64_t> dangling;
  for (const auto& x : d.interactions) {
    if (d.find_course(x.course_id) == nullptr) {
      if (dangling.empty() || dangling.back() != x.course_id)
        dangling.push_back(x.course_id);
      continue;
    }
    if (!d.rating_bounds.contains(x.rating))
      throw std::runtime_error("interaction (" + std::to_string(x.learner_id) +
                               ", " + std::to_string(x.course_id) +
                               "): rating outside platform bounds");
    if (x.timestamp < d.platform_open || x.timestamp > d.platform_now)
      throw std::runtime_error("interaction (" + std::to_string(x.learner_id) +
                               ", " + std::to_string(x.course_id) +
                               "): timestamp outside [T_o, T_c]");
  }
  if (!dangling.empty()) {
    std::sort(dangling.begin(), dangling.end());
    dangling.erase(std::unique(dangling.begin(), dangling.end()),
                   dangling.end());
    std::ostringstream msg;
    msg << "interactions reference unknown course ids:";
    for (auto id : dangling) msg << ' ' << id;
    throw std::runtime_error(msg.str());
  }
  return d;
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

namespace detail {

inline const std::vector<std::string> kCourseHeader = {
    "id",         "category",   "last_update", "level",
    "asset_types", "enrolments", "price",       "description"};
inline const std::vector<std::string> kInteractionHeader = {
    "learner_id", "course_id", "rating", "timestamp"};

inline void expect_header(CsvReader& reader,
                          const std::vector<std::string>& expected,
                          const std::string& path) {
  std::vector<std::string> row;
  if (!reader.next(row) || row != expected) {
    std::ostringstream msg;
    msg << path << ": bad header, expected '";
    for (std::size_t i = 0; i < expected.size(); ++i)
      msg << (i ? "," : "") << expected[i];
    msg << "'";
    throw std::runtime_error(msg.str());
  }
}

template <typename T>
T parse_field(const std::string& text, const std::string& path,
              std::size_t record, const char* field) {
  std::istringstream in(text);
  T value;
  in >> value;
  if (in.fail() || !in.eof() || text.empty()) {
    throw std::runtime_error(path + ": row " + std::to_string(record) +
                             ": malformed field '" + field + "': '" + text +
                             "'");
  }
  return value;
}

}  // namespace detail

// Reads `courses.csv` + `interactions.csv` (schemas documented in the README)
// and assembles a validated Dataset. Errors cite the file, the offending row
// number and field, or the dangling course ids.
inline Dataset load_dataset(const std::string& courses_path,
                            const std::string& interactions_path,
                            const DatasetOptions& opt = {}) {
  std::vector<Course> courses;
  {
    auto in = open_input(courses_path);
    CsvReader reader(in);
    detail::expect_header(reader, detail::kCourseHeader, courses_path);
    std::vector<std::string> row;
    while (reader.next(row)) {
      if (row.size() == 1 && row[0].empty()) continue;  // trailing newline
      const std::size_t rec = reader.record_number();
      if (row.size() != detail::kCourseHeader.size())
        throw std::runtime_error(courses_path + ": row " +
                                 std::to_string(rec) + ": expected " +
                                 std::to_string(detail::kCourseHeader.size()) +
                                 " fields, got " + std::to_string(row.size()));
      Course c;
      c.id = detail::parse_field<std::int64_t>(row[0], courses_path, rec, "id");
      c.category = row[1];
      c.last_update = detail::parse_field<std::int64_t>(row[2], courses_path,
                                                        rec, "last_update");
      c.level = row[3];
      try {
        c.asset_types = parse_asset_set(row[4]);
      } catch (const std::exception& e) {
        throw std::runtime_error(courses_path + ": row " +
                                 std::to_string(rec) +
                                 ": malformed field 'asset_types': " +
                                 e.what());
      }
      c.enrolments = detail::parse_field<std::int64_t>(row[5], courses_path,
                                                       rec, "enrolments");
      c.price =
          detail::parse_field<double>(row[6], courses_path, rec, "price");
      c.description = row[7];
      courses.push_back(std::move(c));
    }
  }
  std::vector<Interaction> interactions;
  {
    auto in = open_input(interactions_path);
    CsvReader reader(in);
    detail::expect_header(reader, detail::kInteractionHeader,
                          interactions_path);
    std::vector<std::string> row;
    while (reader.next(row)) {
      if (row.size() == 1 && row[0].empty()) continue;
      const std::size_t rec = reader.record_number();
      if (row.size() != detail::kInteractionHeader.size())
        throw std::runtime_error(
            interactions_path + ": row " + std::to_string(rec) +
            ": expected 4 fields, got " + std::to_string(row.size()));
      Interaction x;
      x.learner_id = detail::parse_field<std::int64_t>(
          row[0], interactions_path, rec, "learner_id");
      x.course_id = detail::parse_field<std::int64_t>(
          row[1], interactions_path, rec, "course_id");
      x.rating = detail::parse_field<double>(row[2], interactions_path, rec,
                                             "rating");
      x.timestamp = detail::parse_field<std::int64_t>(
          row[3], interactions_path, rec, "timestamp");
      interactions.push_back(x);
    }
  }
  return make_dataset(std::move(courses), std::move(interactions), opt);
}

namespace detail {

inline std::string format_price(double price) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", price);
  return buf;
}

inline std::string format_rating(double rating) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", rating);
  return buf;
}

}  // namespace detail

inline void save_dataset(const Dataset& d, const std::string& courses_path,
                         const std::string& interactions_path) {
  {
    auto out = open_output(courses_path);
    csv_write_row(out, detail::kCourseHeader);
    for (const auto& c : d.courses) {
      csv_write_row(out, {std::to_string(c.id), c.category,
                          std::to_string(c.last_update), c.level,
                          format_asset_set(c.asset_types),
                          std::to_string(c.enrolments),
                          detail::format_price(c.price), c.description});
    }
  }
  {
    auto out = open_output(interactions_path);
    csv_write_row(out, detail::kInteractionHeader);
    for (const auto& x : d.interactions) {
      csv_write_row(out, {std::to_string(x.learner_id),
                          std::to_string(x.course_id),
                          detail::format_rating(x.rating),
                          std::to_string(x.timestamp)});
    }
  }
}

// ---------------------------------------------------------------------------
// Feedback matrix
// ---------------------------------------------------------------------------

// Sparse learner x course relevance structure. Rows cover every learner with
// at least one interaction; columns cover the whole catalog. Duplicate
// (learner, course) pairs collapse to the latest rating by timestamp (ties:
// last one in input order).
class FeedbackMatrix {
 public:
  struct Entry {
    std::uint32_t index;  // dense row or column index
    double rating;
  };

  explicit FeedbackMatrix(const Dataset& d) {
    course_ids_.reserve(d.courses.size());
    for (const auto& c : d.courses) course_ids_.push_back(c.id);
    for (std::size_t i = 0; i < course_ids_.size(); ++i)
      course_index_[course_ids_[i]] = static_cast<std::uint32_t>(i);

    // Deduplicate: latest timestamp wins, input order breaks ties.
    std::map<std::pair<std::int64_t, std::int64_t>,
             std::pair<std::int64_t, double>>
        latest;
    for (const auto& x : d.interactions) {
      auto key = std::make_pair(x.learner_id, x.course_id);
      auto it = latest.find(key);
      if (it == latest.end() || x.timestamp >= it->second.first)
        latest[key] = {x.timestamp, x.rating};
    }

    for (const auto& [key, value] : latest) {
      if (learner_index_.emplace(key.first, learner_ids_.size()).second)
        learner_ids_.push_back(key.first);
    }

    rows_.resize(learner_ids_.size());
    cols_.resize(course_ids_.size());
    for (const auto& [key, value] : latest) {
      const auto u = static_cast<std::uint32_t>(learner_index_.at(key.first));
      const auto i = static_cast<std::uint32_t>(course_index_.at(key.second));
      rows_[u].push_back({i, value.second});
      cols_[i].push_back({u, value.second});
    }
    // `latest` iterates in (learner, course) order, so rows arrive sorted by
    // column and columns sorted by row.
    nnz_ = latest.size();
  }

  std::size_t num_learners() const { return learner_ids_.size(); }
  std::size_t num_courses() const { return course_ids_.size(); }
  std::size_t nonzeros() const { return nnz_; }

  std::int64_t learner_id(std::size_t row) const { return learner_ids_[row]; }
  std::int64_t course_id(std::size_t col) const { return course_ids_[col]; }

  std::optional<std::uint32_t> learner_row(std::int64_t id) const {
    auto it = learner_index_.find(id);
    if (it == learner_index_.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it->second);
  }

  std::optional<std::uint32_t> course_col(std::int64_t id) const {
    auto it = course_index_.find(id);
    if (it == course_index_.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it->second);
  }

  // Interactions of one learner (I_u), sorted by course column.
  std::span<const Entry> row(std::size_t r) const { return rows_[r]; }

  // Raters of one course (U_i), sorted by learner row.
  std::span<const Entry> col(std::size_t c) const { return cols_[c]; }

  const std::vector<std::int64_t>& learner_ids() const { return learner_ids_; }
  const std::vector<std::int64_t>& course_ids() const { return course_ids_; }

 private:
  std::vector<std::int64_t> learner_ids_;
  std::vector<std::int64_t> course_ids_;
  std::unordered_map<std::int64_t, std::size_t> learner_index_;
  std::unordered_map<std::int64_t, std::size_t> course_index_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<Entry>> cols_;
  std::size_t nnz_ = 0;
};

// ---------------------------------------------------------------------------
// Fixed-timestamp split
// ---------------------------------------------------------------------------

struct SplitCounts {
  std::size_t learners = 0;
  std::size_t courses = 0;
  std::size_t interactions = 0;
};

struct TrainTestSplit {
  std::int64_t split_timestamp = 0;
  Dataset train;  // all pre-split interactions, full catalog and bounds
  std::map<std::int64_t, std::set<std::int64_t>> test;  // learner -> held out
  SplitCounts retained;  // learners meeting both minima, their courses and
                         // interactions on either side of the split
};

// Partitions interactions at `t_split`: strictly-before goes to train,
// at-or-after to test. Learners evaluated must keep at least `min_train`
// interactions in train and `min_test` in test; others are dropped from the
// test map but keep their train interactions for model fitting.
inline TrainTestSplit fixed_timestamp_split(const Dataset& d,
                                            std::int64_t t_split,
                                            int min_train, int min_test) {
  if (min_train < 1 || min_test < 1)
    throw std::invalid_argument("split minima must be at least 1");
  if (t_split < d.platform_open || t_split > d.platform_now)
    throw std::invalid_argument("split timestamp outside [T_o, T_c]");

  TrainTestSplit s;
  s.split_timestamp = t_split;

  std::map<std::int64_t, std::size_t> train_count;
  std::map<std::int64_t, std::vector<const Interaction*>> future;
  std::vector<Interaction> train_interactions;
  for (const auto& x : d.interactions) {
    if (x.timestamp < t_split) {
      train_interactions.push_back(x);
      ++train_count[x.learner_id];
    } else {
      future[x.learner_id].push_back(&x);
    }
  }

  std::set<std::int64_t> retained_courses;
  for (const auto& [learner, held] : future) {
    auto it = train_count.find(learner);
    if (it == train_count.end() || it->second < static_cast<size_t>(min_train))
      continue;
    if (held.size() < static_cast<std::size_t>(min_test)) continue;
    auto& ids = s.test[learner];
    for (const Interaction* x : held) ids.insert(x->course_id);
    s.retained.interactions += it->second + held.size();
    for (const Interaction* x : held) retained_courses.insert(x->course_id);
  }
  if (s.test.empty())
    throw std::runtime_error(
        "split leaves no learner with both train and test interactions");

  for (const auto& x : train_interactions) {
    if (s.test.count(x.learner_id)) retained_courses.insert(x.course_id);
  }
  s.retained.learners = s.test.size();
  s.retained.courses = retained_courses.size();

  s.train = d;
  s.train.interactions = std::move(train_interactions);
  return s;
}

}  // namespace eqopp
