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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqopp/catalog.hpp"
#include "eqopp/csv.hpp"
#include "eqopp/random.hpp"

namespace eqopp {

// Ranked unseen courses for one learner. Entries are sorted by relevance
// descending (ties: ascending course id), never contain the learner's train
// courses, and carry min-max normalized relevance in [0, 1].
struct ScoredCandidates {
  std::int64_t learner_id = 0;
  std::vector<std::pair<std::int64_t, double>> entries;  // (course, relevance)

  std::vector<std::int64_t> top_ids(std::size_t k) const {
    std::vector<std::int64_t> out;
    out.reserve(std::min(k, entries.size()));
    for (std::size_t i = 0; i < entries.size() && i < k; ++i)
      out.push_back(entries[i].first);
    return out;
  }
};

struct ModelConfig {
  int neighbors = 100;          // neighborhood size (UserKNN/ItemKNN/graph)
  std::string similarity = "cosine";
  double alpha = 0.8;           // random-walk transition exponent
  double beta = 0.3;            // popularity penalty exponent
  int candidate_pool = 100;     // candidates emitted per learner
};

namespace detail {

// Shared post-processing: drop train items, fall back to popularity when a
// learner's neighborhood produced no signal, rank, truncate and normalize.
inline ScoredCandidates finalize_candidates(
    const FeedbackMatrix& m, std::size_t learner_row,
    std::vector<double>& raw /* by course column */, int candidate_pool,
    const std::vector<double>* fallback_popularity) {
  for (const auto& e : m.row(learner_row)) raw[e.index] = -1.0;  // exclude

  bool any_positive = false;
  for (double v : raw) {
    if (v > 0.0) {
      any_positive = true;
      break;
    }
  }
  if (!any_positive && fallback_popularity) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] >= 0.0) raw[i] = (*fallback_popularity)[i];
    }
  }

  std::vector<std::pair<std::int64_t, double>> entries;
  entries.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] >= 0.0) entries.emplace_back(m.course_id(i), raw[i]);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (candidate_pool > 0 &&
      entries.size() > static_cast<std::size_t>(candidate_pool))
    entries.resize(static_cast<std::size_t>(candidate_pool));

  if (!entries.empty()) {
    const double hi = entries.front().second;
    const double lo = entries.back().second;
    if (hi > lo) {
      for (auto& [id, v] : entries) v = (v - lo) / (hi - lo);
    } else {
      for (auto& [id, v] : entries) v = 1.0;
    }
  }

  ScoredCandidates out;
  out.learner_id = m.learner_id(learner_row);
  out.entries = std::move(entries);
  return out;
}

inline std::vector<double> popularity_counts(const FeedbackMatrix& m) {
  std::vector<double> pop(m.num_courses(), 0.0);
  for (std::size_t i = 0; i < m.num_courses(); ++i)
    pop[i] = static_cast<double>(m.col(i).size());
  return pop;
}

}  // namespace detail

// Base interface: models fit against the train matrix once, then score
// learners independently (scoring is read-only and parallel-safe).
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const std::string& name() const = 0;
  virtual ScoredCandidates score(std::int64_t learner_id) const = 0;
};

// ---------------------------------------------------------------------------
// Non-personalized scorers
// ---------------------------------------------------------------------------

// Uniform random relevance, deterministic per (seed, learner).
class RandomScorer : public Scorer {
 public:
  RandomScorer(const FeedbackMatrix& m, std::uint64_t seed,
               ModelConfig cfg = {})
      : m_(m), seed_(seed), cfg_(cfg) {}

  const std::string& name() const override { return name_; }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    Rng rng(mix_seed(seed_, static_cast<std::uint64_t>(learner_id)));
    std::vector<double> raw(m_.num_courses());
    for (auto& v : raw) v = rng.uniform();
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       nullptr);
  }

 private:
  const FeedbackMatrix& m_;
  std::uint64_t seed_;
  ModelConfig cfg_;
  std::string name_ = "random";
};

// Relevance proportional to train interaction counts.
class TopPopularScorer : public Scorer {
 public:
  explicit TopPopularScorer(const FeedbackMatrix& m, ModelConfig cfg = {})
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)) {}

  const std::string& name() const override { return name_; }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    std::vector<double> raw = popularity_;
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       nullptr);
  }

 private:
  const FeedbackMatrix& m_;
  ModelConfig cfg_;
  std::vector<double> popularity_;
  std::string name_ = "toppopular";
};

// ---------------------------------------------------------------------------
// Neighborhood scorers
// ---------------------------------------------------------------------------

// User-based KNN: cosine over binary profile vectors, prediction by the
// similarity-weighted interactions of the top-N neighbors.
class UserKnnScorer : public Scorer {
 public:
  UserKnnScorer(const FeedbackMatrix& m, ModelConfig cfg = {})
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)) {
    if (cfg_.neighbors < 1)
      throw std::invalid_argument("userknn: neighbors must be >= 1");
  }

  const std::string& name() const override { return name_; }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    const auto profile = m_.row(*row);
    if (profile.empty())
      throw std::invalid_argument("userknn: learner has an empty profile");

    // Co-interaction counts via the inverted course lists.
    std::vector<double> overlap(m_.num_learners(), 0.0);
    for (const auto& item : profile) {
      for (const auto& rater : m_.col(item.index)) overlap[rater.index] += 1.0;
    }
    std::vector<std::pair<double, std::uint32_t>> sims;  // (sim, user row)
    const double norm_u = std::sqrt(static_cast<double>(profile.size()));
    for (std::size_t v = 0; v < m_.num_learners(); ++v) {
      if (v == *row || overlap[v] == 0.0) continue;
      const double norm_v =
          std::sqrt(static_cast<double>(m_.row(v).size()));
      sims.emplace_back(overlap[v] / (norm_u * norm_v),
                        static_cast<std::uint32_t>(v));
    }
    const std::size_t keep =
        std::min<std::size_t>(sims.size(), static_cast<std::size_t>(cfg_.neighbors));
    std::partial_sort(sims.begin(), sims.begin() + keep, sims.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    sims.resize(keep);

    std::vector<double> raw(m_.num_courses(), 0.0);
    for (const auto& [sim, v] : sims) {
      for (const auto& item : m_.row(v)) raw[item.index] += sim;
    }
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       &popularity_);
  }

 private:
  const FeedbackMatrix& m_;
  ModelConfig cfg_;
  std::vector<double> popularity_;
  std::string name_ = "userknn";
};

// Item-based KNN: cosine over binary interaction columns; each course keeps
// its top-N most similar courses, and a candidate scores by summing its
// retained similarities to the learner's profile.
class ItemKnnScorer : public Scorer {
 public:
  ItemKnnScorer(const FeedbackMatrix& m, ModelConfig cfg = {})
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)) {
    if (cfg_.neighbors < 1)
      throw std::invalid_argument("itemknn: neighbors must be >= 1");
    build();
  }

  const std::string& name() const override { return name_; }

  // Cosine similarity between two courses' rater sets (diagnostic surface,
  // also exercised by tests).
  double item_similarity(std::int64_t a, std::int64_t b) const {
    const auto ca = m_.course_col(a), cb = m_.course_col(b);
    if (!ca || !cb) throw std::invalid_argument("unknown course");
    const auto ra = m_.col(*ca), rb = m_.col(*cb);
    if (ra.empty() || rb.empty()) return 0.0;
    std::size_t i = 0, j = 0, overlap = 0;
    while (i < ra.size() && j < rb.size()) {
      if (ra[i].index < rb[j].index) ++i;
      else if (ra[i].index > rb[j].index) ++j;
      else ++overlap, ++i, ++j;
    }
    return static_cast<double>(overlap) /
           std::sqrt(static_cast<double>(ra.size()) *
                     static_cast<double>(rb.size()));
  }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    const auto profile = m_.row(*row);
    if (profile.empty())
      throw std::invalid_argument("itemknn: learner has an empty profile");
    std::vector<double> raw(m_.num_courses(), 0.0);
    for (const auto& item : profile) {
      for (const auto& [cand, sim] : reached_by_[item.index]) raw[cand] += sim;
    }
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       &popularity_);
  }

 private:
  void build() {
    const std::size_t n = m_.num_courses();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> neighbors(n);
    std::vector<double> co(n, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < n; ++i) {
      const auto raters = m_.col(i);
      if (raters.empty()) continue;
      touched.clear();
      for (const auto& r : raters) {
        for (const auto& item : m_.row(r.index)) {
          if (item.index == i) continue;
          if (co[item.index] == 0.0) touched.push_back(item.index);
          co[item.index] += 1.0;
        }
      }
      auto& row = neighbors[i];
      row.reserve(touched.size());
      const double norm_i = std::sqrt(static_cast<double>(raters.size()));
      for (auto j : touched) {
        const double sim =
            co[j] / (norm_i * std::sqrt(static_cast<double>(m_.col(j).size())));
        row.emplace_back(j, sim);
        co[j] = 0.0;
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      if (row.size() > static_cast<std::size_t>(cfg_.neighbors))
        row.resize(static_cast<std::size_t>(cfg_.neighbors));
    }
    // Transpose: profile course -> candidates whose neighborhoods contain it.
    reached_by_.assign(n, {});
    for (std::size_t cand = 0; cand < n; ++cand) {
      for (const auto& [j, sim] : neighbors[cand])
        reached_by_[j].emplace_back(static_cast<std::uint32_t>(cand), sim);
    }
  }

  const FeedbackMatrix& m_;
  ModelConfig cfg_;
  std::vector<double> popularity_;
  // reached_by_[i] = (candidate c, sim(c, i)) for every c retaining i.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> reached_by_;
  std::string name_ = "itemknn";
};

// ---------------------------------------------------------------------------
// Content-based scorer
// ---------------------------------------------------------------------------

// TF-IDF content scorer. Tokenization: lowercase, split on non-alphanumeric,
// drop tokens shorter than 2 characters. idf = ln(N/df) + 1, vectors L2
// normalized. A learner's profile is the mean of their courses' vectors and
// candidates rank by cosine against it.
class ItemKnnCbScorer : public Scorer {
 public:
  ItemKnnCbScorer(const FeedbackMatrix& m, const Dataset& catalog,
                  ModelConfig cfg = {})
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)) {
    build(catalog);
  }

  const std::string& name() const override { return name_; }

  static std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
      if (std::isalnum(static_cast<unsigned char>(ch))) {
        current.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(ch))));
      } else if (!current.empty()) {
        if (current.size() >= 2) tokens.push_back(current);
        current.clear();
      }
    }
    if (current.size() >= 2) tokens.push_back(current);
    return tokens;
  }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    const auto profile = m_.row(*row);
    if (profile.empty())
      throw std::invalid_argument("itemknn_cb: learner has an empty profile");

    // Profile vector: mean of the profile courses' TF-IDF vectors.
    std::unordered_map<std::uint32_t, double> mean;
    for (const auto& item : profile) {
      for (const auto& [term, weight] : vectors_[item.index])
        mean[term] += weight / static_cast<double>(profile.size());
    }
    std::vector<double> raw(m_.num_courses(), 0.0);
    for (const auto& [term, weight] : mean) {
      for (const auto& [course, w] : index_[term]) raw[course] += weight * w;
    }
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       &popularity_);
  }

 private:
  void build(const Dataset& catalog) {
    const std::size_t n = m_.num_courses();
    std::unordered_map<std::string, std::uint32_t> term_ids;
    std::vector<std::vector<std::uint32_t>> docs(n);
    bool any_tokens = false;
    for (const auto& c : catalog.courses) {
      const auto col = m_.course_col(c.id);
      if (!col) continue;
      for (const auto& token : tokenize(c.description)) {
        const auto [it, inserted] =
            term_ids.emplace(token, static_cast<std::uint32_t>(term_ids.size()));
        docs[*col].push_back(it->second);
        any_tokens = true;
      }
    }
    if (!any_tokens)
      throw std::runtime_error(
          "itemknn_cb: no course carries a usable description");

    std::vector<double> df(term_ids.size(), 0.0);
    for (auto& terms : docs) {
      std::sort(terms.begin(), terms.end());
      for (std::size_t t = 0; t < terms.size(); ++t) {
        if (t == 0 || terms[t] != terms[t - 1]) df[terms[t]] += 1.0;
      }
    }
    const double total_docs = static_cast<double>(n);
    std::vector<double> idf(term_ids.size());
    for (std::size_t t = 0; t < idf.size(); ++t)
      idf[t] = std::log(total_docs / df[t]) + 1.0;

    vectors_.assign(n, {});
    index_.assign(term_ids.size(), {});
    for (std::size_t d = 0; d < n; ++d) {
      auto& vec = vectors_[d];
      const auto& terms = docs[d];
      for (std::size_t t = 0; t < terms.size();) {
        std::size_t run = t;
        while (run < terms.size() && terms[run] == terms[t]) ++run;
        const double tf = static_cast<double>(run - t);
        vec.emplace_back(terms[t], tf * idf[terms[t]]);
        t = run;
      }
      double norm = 0.0;
      for (const auto& [term, w] : vec) norm += w * w;
      if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [term, w] : vec) w /= norm;
      }
      for (const auto& [term, w] : vec)
        index_[term].emplace_back(static_cast<std::uint32_t>(d), w);
    }
  }

  const FeedbackMatrix& m_;
  ModelConfig cfg_;
  std::vector<double> popularity_;
  // Per course: sparse L2-normalized (term, weight) vector.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> vectors_;
  // Per term: (course, weight) postings for fast profile-vs-all scoring.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> index_;
  std::string name_ = "itemknn_cb";
};

// ---------------------------------------------------------------------------
// Graph scorers
// ---------------------------------------------------------------------------

// Three-step random walk learner -> course -> learner -> course with every
// transition probability raised to alpha. The course-to-course walk matrix
// keeps the top-N entries per row before the final product with the
// learner's own transition row.
class P3AlphaScorer : public Scorer {
 public:
  P3AlphaScorer(const FeedbackMatrix& m, ModelConfig cfg = {})
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)) {
    if (cfg_.neighbors < 1)
      throw std::invalid_argument("p3alpha: neighbors must be >= 1");
    build(/*beta=*/0.0);
  }

  const std::string& name() const override { return name_; }

  ScoredCandidates score(std::int64_t learner_id) const override {
    const auto row = m_.learner_row(learner_id);
    if (!row) throw std::invalid_argument("unknown learner");
    const auto profile = m_.row(*row);
    std::vector<double> raw(m_.num_courses(), 0.0);
    if (!profile.empty()) {
      const double step =
          std::pow(1.0 / static_cast<double>(profile.size()), cfg_.alpha);
      for (const auto& item : profile) {
        for (const auto& [target, p] : walk_[item.index])
          raw[target] += step * p;
      }
    }
    return detail::finalize_candidates(m_, *row, raw, cfg_.candidate_pool,
                                       &popularity_);
  }

 protected:
  P3AlphaScorer(const FeedbackMatrix& m, ModelConfig cfg, double beta,
                std::string name)
      : m_(m), cfg_(cfg), popularity_(detail::popularity_counts(m)),
        name_(std::move(name)) {
    if (cfg_.neighbors < 1)
      throw std::invalid_argument(name_ + ": neighbors must be >= 1");
    build(beta);
  }

 private:
  void build(double beta) {
    const std::size_t n = m_.num_courses();
    walk_.assign(n, {});
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < n; ++i) {
      const auto raters = m_.col(i);
      if (raters.empty()) continue;
      const double p_user =
          std::pow(1.0 / static_cast<double>(raters.size()), cfg_.alpha);
      touched.clear();
      for (const auto& r : raters) {
        const auto items = m_.row(r.index);
        const double p_item =
            std::pow(1.0 / static_cast<double>(items.size()), cfg_.alpha);
        for (const auto& item : items) {
          if (item.index == i) continue;  // walking back is not a suggestion
          if (acc[item.index] == 0.0) touched.push_back(item.index);
          acc[item.index] += p_user * p_item;
        }
      }
      auto& row = walk_[i];
      row.reserve(touched.size());
      for (auto j : touched) {
        double value = acc[j];
        if (beta > 0.0)
          value /= std::pow(static_cast<double>(m_.col(j).size()), beta);
        row.emplace_back(j, value);
        acc[j] = 0.0;
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      if (row.size() > static_cast<std::size_t>(cfg_.neighbors))
        row.resize(static_cast<std::size_t>(cfg_.neighbors));
    }
  }

  const FeedbackMatrix& m_;
  ModelConfig cfg_;
  std::vector<double> popularity_;
  // walk_[i] = alpha-powered two-step course-to-course probabilities,
  // popularity-penalized when beta > 0, truncated to `neighbors` per row.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> walk_;
  std::string name_ = "p3alpha";
};

// P3Alpha with the walk scores divided by item popularity^beta.
class Rp3BetaScorer : public P3AlphaScorer {
 public:
  Rp3BetaScorer(const FeedbackMatrix& m, ModelConfig cfg = {})
      : P3AlphaScorer(m, cfg, cfg.beta, "rp3beta") {}
};

// ---------------------------------------------------------------------------
// External scores
// ---------------------------------------------------------------------------

// Reads a `learner_id,course_id,relevance` CSV produced by any external
// model, drops train items and renormalizes per learner. Unknown learner or
// course ids are an error.
inline std::map<std::int64_t, ScoredCandidates> load_external_scores(
    const std::string& path, const FeedbackMatrix& m,
    int candidate_pool = 100) {
  auto in = open_input(path);
  CsvReader reader(in);
  detail::expect_header(reader, {"learner_id", "course_id", "relevance"},
                        path);
  std::map<std::int64_t, std::vector<double>> raw;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    const std::size_t rec = reader.record_number();
    if (row.size() != 3)
      throw std::runtime_error(path + ": row " + std::to_string(rec) +
                               ": expected 3 fields");
    const auto learner = detail::parse_field<std::int64_t>(row[0], path, rec,
                                                           "learner_id");
    const auto course =
        detail::parse_field<std::int64_t>(row[1], path, rec, "course_id");
    const double rel =
        detail::parse_field<double>(row[2], path, rec, "relevance");
    if (!m.learner_row(learner))
      throw std::runtime_error(path + ": row " + std::to_string(rec) +
                               ": unknown learner id " +
                               std::to_string(learner));
    const auto col = m.course_col(course);
    if (!col)
      throw std::runtime_error(path + ": row " + std::to_string(rec) +
                               ": unknown course id " +
                               std::to_string(course));
    auto& scores = raw[learner];
    if (scores.empty())
      scores.assign(m.num_courses(),
                    -std::numeric_limits<double>::infinity());
    scores[*col] = rel;
  }

  std::map<std::int64_t, ScoredCandidates> out;
  for (auto& [learner, scores] : raw) {
    const auto lrow = *m.learner_row(learner);
    std::vector<std::pair<std::int64_t, double>> entries;
    const auto train = m.row(lrow);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] == -std::numeric_limits<double>::infinity()) continue;
      const bool in_train = std::any_of(
          train.begin(), train.end(),
          [&](const FeedbackMatrix::Entry& e) { return e.index == i; });
      if (!in_train) entries.emplace_back(m.course_id(i), scores[i]);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (candidate_pool > 0 &&
        entries.size() > static_cast<std::size_t>(candidate_pool))
      entries.resize(static_cast<std::size_t>(candidate_pool));
    if (!entries.empty()) {
      const double hi = entries.front().second;
      const double lo = entries.back().second;
      if (hi > lo) {
        for (auto& [id, v] : entries) v = (v - lo) / (hi - lo);
      } else {
        for (auto& [id, v] : entries) v = 1.0;
      }
    }
    ScoredCandidates c;
    c.learner_id = learner;
    c.entries = std::move(entries);
    out.emplace(learner, std::move(c));
  }
  return out;
}

inline void save_scores(const std::map<std::int64_t, ScoredCandidates>& scores,
                        const std::string& path) {
  auto out = open_output(path);
  csv_write_row(out, {"learner_id", "course_id", "relevance"});
  char buf[64];
  for (const auto& [learner, cands] : scores) {
    for (const auto& [course, rel] : cands.entries) {
      std::snprintf(buf, sizeof(buf), "%.9f", rel);
      csv_write_row(out, {std::to_string(learner), std::to_string(course),
                          buf});
    }
  }
}

// Serves pre-loaded external scores through the Scorer interface.
class ExternalScorer : public Scorer {
 public:
  ExternalScorer(std::map<std::int64_t, ScoredCandidates> scores,
                 std::string label)
      : scores_(std::move(scores)), name_(std::move(label)) {}

  const std::string& name() const override { return name_; }

  ScoredCandidates score(std::int64_t learner_id) const override {
    auto it = scores_.find(learner_id);
    if (it == scores_.end())
      throw std::invalid_argument("external scores missing learner " +
                                  std::to_string(learner_id));
    return it->second;
  }

 private:
  std::map<std::int64_t, ScoredCandidates> scores_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Factory
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& builtin_algorithms() {
  static const std::vector<std::string> kNames = {
      "random",  "toppopular", "userknn", "itemknn",
      "itemknn_cb", "p3alpha", "rp3beta"};
  return kNames;
}

// Tuned defaults per algorithm. Callers layer explicit overrides on top.
inline ModelConfig default_config(const std::string& algorithm) {
  ModelConfig cfg;
  if (algorithm == "p3alpha") {
    cfg.alpha = 0.8;
    cfg.neighbors = 200;
  } else if (algorithm == "rp3beta") {
    cfg.alpha = 0.6;
    cfg.beta = 0.3;
    cfg.neighbors = 200;
  }
  return cfg;
}

inline std::unique_ptr<Scorer> make_scorer(const std::string& algorithm,
                                           const FeedbackMatrix& train,
                                           const Dataset& catalog,
                                           ModelConfig cfg,
                                           std::uint64_t seed) {
  if (algorithm == "random") return std::make_unique<RandomScorer>(train, seed, cfg);
  if (algorithm == "toppopular")
    return std::make_unique<TopPopularScorer>(train, cfg);
  if (algorithm == "userknn") return std::make_unique<UserKnnScorer>(train, cfg);
  if (algorithm == "itemknn") return std::make_unique<ItemKnnScorer>(train, cfg);
  if (algorithm == "itemknn_cb")
    return std::make_unique<ItemKnnCbScorer>(train, catalog, cfg);
  if (algorithm == "p3alpha") return std::make_unique<P3AlphaScorer>(train, cfg);
  if (algorithm == "rp3beta") return std::make_unique<Rp3BetaScorer>(train, cfg);
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

}  // namespace eqopp
