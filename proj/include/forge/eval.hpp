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

#ifndef FORGE_EVAL_HPP_
#define FORGE_EVAL_HPP_

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/align.hpp"
#include "forge/core.hpp"
#include "forge/parallel.hpp"
#include "forge/textnorm.hpp"

namespace forge {

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Counts from an optimal word alignment.  wer() may exceed 1 when
/// insertions dominate; it is reported as a fraction and rendered as a
/// percentage only at the output layer.
struct WerBreakdown {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t matches = 0;
  int64_t ref_len = 0;  // matches + substitutions + deletions

  double wer() const {
    return static_cast<double>(substitutions + deletions + insertions) /
           static_cast<double>(ref_len);
  }

  void merge(const WerBreakdown& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    matches += o.matches;
    ref_len += o.ref_len;
  }

  bool operator==(const WerBreakdown&) const = default;
};

/// Word-level WER on pre-tokenized input; same cost model and tie-breaking as
/// align_words.  The reference must be non-empty.
inline WerBreakdown wer_tokens(const std::vector<std::string>& ref_tokens,
                               const std::vector<std::string>& hyp_tokens) {
  if (ref_tokens.empty()) {
    throw EvalError("WER is undefined for an empty reference");
  }
  WordAlignment alignment =
      align_words(std::span(ref_tokens), std::span(hyp_tokens), ExactTokenEq{});
  WerBreakdown b;
  for (const AlignOp& op : alignment.ops) {
    switch (op.op) {
      case EditOp::Match: ++b.matches; break;
      case EditOp::Substitute: ++b.substitutions; break;
      case EditOp::Delete: ++b.deletions; break;
      case EditOp::Insert: ++b.insertions; break;
    }
  }
  b.ref_len = b.matches + b.substitutions + b.deletions;
  return b;
}

/// Normalizes both sides with `cfg`, then scores.  A reference that
/// normalizes to zero words raises EvalError rather than dividing by zero.
inline WerBreakdown wer(std::string_view ref, std::string_view hyp,
                        const NormalizationConfig& cfg = NormalizationConfig::light()) {
  std::vector<std::string> ref_tokens = tokenize(ref, cfg);
  if (ref_tokens.empty()) {
    throw EvalError("reference normalizes to zero words");
  }
  return wer_tokens(ref_tokens, tokenize(hyp, cfg));
}

// ---------------------------------------------------------------------------
// Corpus-level evaluation
// ---------------------------------------------------------------------------

struct GroupAggregate {
  WerBreakdown totals;
  int64_t segments = 0;  // segments contributing to the pooled counts
  int64_t skipped = 0;   // missing prediction or unscorable reference
};

/// Pooled (micro-averaged) WER per (source, language) group: counts are
/// summed over segments, never averaged per segment.
struct EvalReport {
  std::string model_id;
  std::map<std::pair<std::string, std::string>, GroupAggregate> groups;
};

/// Scoring is per-segment and pure, so segments score concurrently; the fold
/// into groups is a commutative sum of counts done in input order.
inline EvalReport evaluate_manifest(const std::vector<ManifestRecord>& records,
                                    const std::string& model_id,
                                    const NormalizationConfig& cfg, int workers = 1) {
  struct SegmentScore {
    WerBreakdown breakdown;
    bool skipped = true;
  };
  std::vector<SegmentScore> scores =
      parallel_map(records, workers, [&](const ManifestRecord& rec) {
        SegmentScore score;
        const Prediction* pred = nullptr;
        for (const Prediction& p : rec.predictions) {
          if (p.model_id == model_id) {
            pred = &p;
            break;
          }
        }
        std::vector<std::string> ref_tokens = tokenize(rec.segment.text, cfg);
        if (pred == nullptr || ref_tokens.empty()) return score;
        score.breakdown = wer_tokens(ref_tokens, tokenize(pred->text, cfg));
        score.skipped = false;
        return score;
      });
  EvalReport report;
  report.model_id = model_id;
  for (size_t i = 0; i < records.size(); ++i) {
    auto key = std::make_pair(records[i].segment.source.str(),
                              to_string(records[i].segment.language));
    GroupAggregate& agg = report.groups[key];
    if (scores[i].skipped) {
      ++agg.skipped;
    } else {
      agg.totals.merge(scores[i].breakdown);
      ++agg.segments;
    }
  }
  return report;
}

inline json eval_report_to_json(const EvalReport& report) {
  json groups = json::array();
  for (const auto& [key, agg] : report.groups) {
    json g{{"source", key.first},
           {"language", key.second},
           {"substitutions", agg.totals.substitutions},
           {"deletions", agg.totals.deletions},
           {"insertions", agg.totals.insertions},
           {"matches", agg.totals.matches},
           {"ref_len", agg.totals.ref_len},
           {"segments", agg.segments},
           {"skipped", agg.skipped}};
    if (agg.totals.ref_len > 0) g["wer"] = agg.totals.wer();
    groups.push_back(std::move(g));
  }
  return json{{"model_id", report.model_id}, {"groups", std::move(groups)}};
}

inline EvalReport eval_report_from_json(const json& j) {
  EvalReport report;
  report.model_id = j.at("model_id").get<std::string>();
  for (const json& g : j.at("groups")) {
    GroupAggregate agg;
    agg.totals.substitutions = g.at("substitutions").get<int64_t>();
    agg.totals.deletions = g.at("deletions").get<int64_t>();
    agg.totals.insertions = g.at("insertions").get<int64_t>();
    agg.totals.matches = g.value("matches", int64_t{0});
    agg.totals.ref_len = g.at("ref_len").get<int64_t>();
    agg.segments = g.value("segments", int64_t{0});
    agg.skipped = g.value("skipped", int64_t{0});
    report.groups[{g.at("source").get<std::string>(),
                   g.at("language").get<std::string>()}] = agg;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Model comparison tables
// ---------------------------------------------------------------------------

enum class ReportLayout { BySize, ByDataset };

struct ComparisonTable {
  std::string text;
  std::string csv;
};

/// Percentage with one decimal; fractions above 1 render as ">100".
inline std::string render_percent(double wer_fraction) {
  if (wer_fraction > 1.0) return ">100";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", wer_fraction * 100.0);
  return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string format_grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> widths;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c >= widths.size()) widths.push_back(0);
      // Column width in code points so multi-byte labels line up.
      widths[c] = std::max(widths[c], decode_utf8(row[c]).size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) {
        out.append(widths[c] - decode_utf8(row[c]).size() + 2, ' ');
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace detail

inline constexpr const char* kEmptyCell = "—";  // em-dash placeholder

/// Lays the per-model aggregates out as a grid: BySize puts one row per model
/// with one column per dataset group; ByDataset transposes that.
inline ComparisonTable comparison_report(const std::vector<EvalReport>& reports,
                                         ReportLayout layout) {
  std::vector<std::pair<std::string, std::string>> group_keys;
  for (const EvalReport& r : reports) {
    for (const auto& [key, agg] : r.groups) {
      if (std::find(group_keys.begin(), group_keys.end(), key) == group_keys.end()) {
        group_keys.push_back(key);
      }
    }
  }
  std::sort(group_keys.begin(), group_keys.end());
  const auto group_label = [](const std::pair<std::string, std::string>& key) {
    return key.first + "/" + key.second;
  };
  const auto cell = [](const EvalReport& r,
                       const std::pair<std::string, std::string>& key) -> std::string {
    auto it = r.groups.find(key);
    if (it == r.groups.end() || it->second.totals.ref_len == 0) return kEmptyCell;
    return render_percent(it->second.totals.wer());
  };
  std::vector<std::vector<std::string>> grid;
  if (layout == ReportLayout::BySize) {
    std::vector<std::string> header{"model"};
    for (const auto& key : group_keys) header.push_back(group_label(key));
    grid.push_back(std::move(header));
    for (const EvalReport& r : reports) {
      std::vector<std::string> row{r.model_id};
      for (const auto& key : group_keys) row.push_back(cell(r, key));
      grid.push_back(std::move(row));
    }
  } else {
    std::vector<std::string> header{"dataset"};
    for (const EvalReport& r : reports) header.push_back(r.model_id);
    grid.push_back(std::move(header));
    for (const auto& key : group_keys) {
      std::vector<std::string> row{group_label(key)};
      for (const EvalReport& r : reports) row.push_back(cell(r, key));
      grid.push_back(std::move(row));
    }
  }
  ComparisonTable table;
  table.text = detail::format_grid(grid);
  for (const auto& row : grid) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) table.csv += ',';
      table.csv += detail::csv_escape(row[c]);
    }
    table.csv += '\n';
  }
  return table;
}

}  // namespace forge

#endif  // FORGE_EVAL_HPP_
