// Copyright 2026 The Forge Authors
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

#ifndef FORGE_FILTERS_HPP_
#define FORGE_FILTERS_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "forge/core.hpp"
#include "forge/textnorm.hpp"
#include "forge/unicode.hpp"

namespace forge {

/// Knobs for the four segment-quality criteria.  The NER rules are opt-in:
/// they only fire when their threshold is set.
struct FilterConfig {
  double fuzzy_threshold = 0.8;
  int ngram_min_len = 4;
  std::optional<int> ner_max_count;
  std::optional<int> ner_max_delta;
};

/// Reads filter settings from a parsed config object (either flat keys or a
/// nested "filters" table); absent keys keep their defaults.
inline FilterConfig filter_config_from_json(const json& root) {
  const json& j = root.contains("filters") ? root["filters"] : root;
  FilterConfig cfg;
  if (j.contains("fuzzy_threshold")) cfg.fuzzy_threshold = j["fuzzy_threshold"].get<double>();
  if (j.contains("ngram_min_len")) cfg.ngram_min_len = j["ngram_min_len"].get<int>();
  if (j.contains("ner_max_count")) cfg.ner_max_count = j["ner_max_count"].get<int>();
  if (j.contains("ner_max_delta")) cfg.ner_max_delta = j["ner_max_delta"].get<int>();
  if (cfg.fuzzy_threshold < 0 || cfg.fuzzy_threshold > 1) {
    throw ConfigError("fuzzy_threshold must lie in [0, 1]");
  }
  if (cfg.ngram_min_len < 2) {
    throw ConfigError("ngram_min_len must be at least 2");
  }
  return cfg;
}

enum class FilterCriterion { FuzzyBoundary, Insertion, Omission, NerCount, NoPredictions };

inline std::string to_string(FilterCriterion c) {
  switch (c) {
    case FilterCriterion::FuzzyBoundary: return "fuzzy_boundary";
    case FilterCriterion::Insertion: return "insertion";
    case FilterCriterion::Omission: return "omission";
    case FilterCriterion::NerCount: return "ner_count";
    case FilterCriterion::NoPredictions: return "no_predictions";
  }
  return "unknown";
}

struct FilterViolation {
  FilterCriterion criterion;
  std::string detail;
};

/// keep is true exactly when no criterion was violated.  Segments are deleted,
/// never repaired.
struct FilterVerdict {
  bool keep = true;
  std::vector<FilterViolation> violations;
};

/// Target-text entity annotations plus the annotations for each prediction,
/// index-aligned with the prediction list.
struct NerBundle {
  std::vector<NerAnnotation> target;
  std::vector<std::vector<NerAnnotation>> predictions;
};

// ---------------------------------------------------------------------------
// Character similarity
// ---------------------------------------------------------------------------

namespace detail {

inline int64_t edit_distance_u32(const std::u32string& a, const std::u32string& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int32_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int32_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int32_t>(i);
    for (size_t j = 1; j <= m; ++j) {
      int32_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min(diag, std::min(prev[j] + 1, cur[j - 1] + 1));
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace detail

/// Normalized character similarity on case-folded code points:
/// (max_len - edit_distance) / max_len, and 1 for two empty strings.
inline double similarity(std::string_view a, std::string_view b) {
  std::u32string ca = decode_utf8(a);
  std::u32string cb = decode_utf8(b);
  for (char32_t& c : ca) c = to_lower(c);
  for (char32_t& c : cb) c = to_lower(c);
  const auto max_len = static_cast<double>(std::max(ca.size(), cb.size()));
  if (max_len == 0) return 1.0;
  const auto dist = static_cast<double>(detail::edit_distance_u32(ca, cb));
  return (max_len - dist) / max_len;
}

// ---------------------------------------------------------------------------
// Criterion 1: fuzzy matching for first and last words
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_similarity(double s) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", s);
  return buf;
}

}  // namespace detail

/// Passes when at least one prediction matches the target's first word and
/// last word with similarity at or above the threshold.  Predictions with no
/// words count as failing.
inline std::optional<FilterViolation> fuzzy_boundary_filter(
    std::string_view target, const std::vector<Prediction>& predictions,
    const FilterConfig& cfg) {
  std::vector<std::string> target_words = tokenize(target);
  if (target_words.empty()) {
    return FilterViolation{FilterCriterion::FuzzyBoundary, "target has no words"};
  }
  const std::string& t_first = target_words.front();
  const std::string& t_last = target_words.back();
  double best_score = -1.0;
  std::string best_detail = "no prediction words";
  for (const Prediction& pred : predictions) {
    std::vector<std::string> words = tokenize(pred.text);
    if (words.empty()) continue;
    double first_sim = similarity(t_first, words.front());
    double last_sim = similarity(t_last, words.back());
    if (first_sim >= cfg.fuzzy_threshold && last_sim >= cfg.fuzzy_threshold) {
      return std::nullopt;
    }
    double score = std::min(first_sim, last_sim);
    if (score > best_score) {
      best_score = score;
      std::string detail;
      if (first_sim < cfg.fuzzy_threshold) {
        detail = "first word '" + t_first + "' vs '" + words.front() + "' similarity " +
                 detail::format_similarity(first_sim);
      }
      if (last_sim < cfg.fuzzy_threshold) {
        if (!detail.empty()) detail += "; ";
        detail += "last word '" + t_last + "' vs '" + words.back() + "' similarity " +
                  detail::format_similarity(last_sim);
      }
      best_detail = std::move(detail);
    }
  }
  return FilterViolation{FilterCriterion::FuzzyBoundary, best_detail};
}

// ---------------------------------------------------------------------------
// Criteria 2 and 3: n-gram insertion / omission checks
// ---------------------------------------------------------------------------

namespace detail {

inline std::set<std::string> ngram_set(const std::vector<std::string>& tokens, int n) {
  std::set<std::string> grams;
  if (n <= 0 || tokens.size() < static_cast<size_t>(n)) return grams;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key += ' ';
      key += tokens[i + k];
    }
    grams.insert(std::move(key));
  }
  return grams;
}

}  // namespace detail

/// Fires when some target n-gram appears in no prediction: text that was
/// written down but never spoken (transcriber comments and the like).
inline std::optional<FilterViolation> insertion_filter(
    std::string_view target, const std::vector<Prediction>& predictions,
    const FilterConfig& cfg) {
  std::vector<std::string> target_tokens = tokenize(target);
  const int n = cfg.ngram_min_len;
  if (target_tokens.size() < static_cast<size_t>(n)) return std::nullopt;
  std::set<std::string> seen;
  for (const Prediction& pred : predictions) {
    std::set<std::string> grams = detail::ngram_set(tokenize(pred.text), n);
    seen.merge(grams);
  }
  for (size_t i = 0; i + n <= target_tokens.size(); ++i) {
    std::string key = target_tokens[i];
    for (int k = 1; k < n; ++k) {
      key += ' ';
      key += target_tokens[i + k];
    }
    if (!seen.count(key)) {
      return FilterViolation{FilterCriterion::Insertion,
                             "target n-gram not in any prediction: '" + key + "'"};
    }
  }
  return std::nullopt;
}

/// Fires when some n-gram is present in every prediction but missing from the
/// target: speech the target text left out.  With a single prediction the
/// common set degrades to that prediction's n-grams.
inline std::optional<FilterViolation> omission_filter(
    std::string_view target, const std::vector<Prediction>& predictions,
    const FilterConfig& cfg) {
  if (predictions.empty()) return std::nullopt;
  const int n = cfg.ngram_min_len;
  std::set<std::string> common = detail::ngram_set(tokenize(predictions[0].text), n);
  for (size_t p = 1; p < predictions.size() && !common.empty(); ++p) {
    std::set<std::string> grams = detail::ngram_set(tokenize(predictions[p].text), n);
    std::set<std::string> kept;
    for (const std::string& g : common) {
      if (grams.count(g)) kept.insert(g);
    }
    common = std::move(kept);
  }
  if (common.empty()) return std::nullopt;
  std::set<std::string> target_grams = detail::ngram_set(tokenize(target), n);
  // Report the first missing common n-gram in the first prediction's order.
  std::vector<std::string> first_tokens = tokenize(predictions[0].text);
  for (size_t i = 0; i + n <= first_tokens.size(); ++i) {
    std::string key = first_tokens[i];
    for (int k = 1; k < n; ++k) {
      key += ' ';
      key += first_tokens[i + k];
    }
    if (common.count(key) && !target_grams.count(key)) {
      return FilterViolation{FilterCriterion::Omission,
                             "common prediction n-gram missing from target: '" + key + "'"};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 4: named-entity counts
// ---------------------------------------------------------------------------

/// Both rules are opt-in.  The absolute rule fires when the target has more
/// entities than ner_max_count; the delta rule fires when even the closest
/// prediction disagrees with the target count by more than ner_max_delta.
inline std::optional<FilterViolation> ner_count_filter(
    const std::vector<NerAnnotation>& target_ner,
    const std::vector<std::vector<NerAnnotation>>& prediction_ner,
    const FilterConfig& cfg) {
  const auto target_count = static_cast<int64_t>(target_ner.size());
  if (cfg.ner_max_count && target_count > *cfg.ner_max_count) {
    return FilterViolation{FilterCriterion::NerCount,
                           "target has " + std::to_string(target_count) +
                               " entities, max is " + std::to_string(*cfg.ner_max_count)};
  }
  if (cfg.ner_max_delta && !prediction_ner.empty()) {
    int64_t best_delta = INT64_MAX;
    for (const auto& pred : prediction_ner) {
      best_delta = std::min(
          best_delta, std::abs(target_count - static_cast<int64_t>(pred.size())));
    }
    if (best_delta > *cfg.ner_max_delta) {
      return FilterViolation{FilterCriterion::NerCount,
                             "entity count differs from every prediction by " +
                                 std::to_string(best_delta) + ", max delta is " +
                                 std::to_string(*cfg.ner_max_delta)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Combined verdict
// ---------------------------------------------------------------------------

/// Runs all criteria and collects every violation; nothing short-circuits, so
/// per-criterion counts stay meaningful for corpus diagnostics.  No-speech
/// segments bypass the text criteria.  Segments without predictions are
/// deleted conservatively.
inline FilterVerdict apply_filters(const Segment& segment,
                                   const std::vector<Prediction>& predictions,
                                   const NerBundle& ner, const FilterConfig& cfg) {
  FilterVerdict verdict;
  if (segment.source.kind == SourceTag::NrkNoCaption) {
    return verdict;
  }
  if (predictions.empty()) {
    verdict.keep = false;
    verdict.violations.push_back(
        {FilterCriterion::NoPredictions, "no predictions available"});
    return verdict;
  }
  if (auto v = fuzzy_boundary_filter(segment.text, predictions, cfg)) {
    verdict.violations.push_back(std::move(*v));
  }
  if (auto v = insertion_filter(segment.text, predictions, cfg)) {
    verdict.violations.push_back(std::move(*v));
  }
  if (auto v = omission_filter(segment.text, predictions, cfg)) {
    verdict.violations.push_back(std::move(*v));
  }
  if (auto v = ner_count_filter(ner.target, ner.predictions, cfg)) {
    verdict.violations.push_back(std::move(*v));
  }
  verdict.keep = verdict.violations.empty();
  return verdict;
}

/// Convenience overload: predictions and annotations straight off a manifest
/// record.  Prediction annotations are only forwarded when at least one
/// prediction carries them, so the delta rule stays inert on manifests that
/// were never tagged.
inline FilterVerdict apply_filters(const ManifestRecord& rec, const FilterConfig& cfg) {
  NerBundle ner;
  ner.target = rec.ner;
  bool any_tagged = false;
  for (const Prediction& p : rec.predictions) any_tagged |= !p.ner.empty();
  if (any_tagged) {
    for (const Prediction& p : rec.predictions) ner.predictions.push_back(p.ner);
  }
  return apply_filters(rec.segment, rec.predictions, ner, cfg);
}

}  // namespace forge

#endif  // FORGE_FILTERS_HPP_
