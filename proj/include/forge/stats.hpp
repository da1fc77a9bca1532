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

#ifndef FORGE_STATS_HPP_
#define FORGE_STATS_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/core.hpp"
#include "forge/textnorm.hpp"

namespace forge {

inline double ms_to_hours(int64_t ms) { return static_cast<double>(ms) / 3'600'000.0; }

struct StatsCell {
  int64_t segments = 0;
  int64_t total_ms = 0;
  int64_t total_words = 0;

  void merge(const StatsCell& o) {
    segments += o.segments;
    total_ms += o.total_ms;
    total_words += o.total_words;
  }

  bool operator==(const StatsCell&) const = default;
};

/// Corpus accounting per (source, stage).  Durations accumulate as exact
/// integer milliseconds; hours exist only at render time.  Cells form a
/// commutative monoid, so shards merge in any order.
struct CorpusStats {
  std::map<std::string, std::map<int, StatsCell>> cells;  // source -> stage -> cell
  int64_t invalid_segments = 0;

  void add(const Segment& seg) {
    if (!validate_segment(seg).empty()) {
      ++invalid_segments;
      return;
    }
    StatsCell& cell = cells[seg.source.str()][static_cast<int>(seg.stage)];
    ++cell.segments;
    cell.total_ms += seg.duration_ms();
    cell.total_words +=
        static_cast<int64_t>(tokenize(seg.text, NormalizationConfig::none()).size());
  }

  void merge(const CorpusStats& o) {
    for (const auto& [source, stages] : o.cells) {
      for (const auto& [stage, cell] : stages) {
        cells[source][stage].merge(cell);
      }
    }
    invalid_segments += o.invalid_segments;
  }

  StatsCell stage_total(int stage) const {
    StatsCell total;
    for (const auto& [source, stages] : cells) {
      auto it = stages.find(stage);
      if (it != stages.end()) total.merge(it->second);
    }
    return total;
  }

  int64_t source_total_ms(const std::string& source) const {
    auto it = cells.find(source);
    if (it == cells.end()) return 0;
    int64_t ms = 0;
    for (const auto& [stage, cell] : it->second) ms += cell.total_ms;
    return ms;
  }

  bool operator==(const CorpusStats&) const = default;
};

inline CorpusStats compute_stats(const std::vector<ManifestRecord>& records) {
  CorpusStats stats;
  for (const ManifestRecord& rec : records) stats.add(rec.segment);
  return stats;
}

inline json stats_to_json(const CorpusStats& stats) {
  json sources = json::array();
  for (const auto& [source, stages] : stats.cells) {
    json stage_arr = json::array();
    for (const auto& [stage, cell] : stages) {
      stage_arr.push_back({{"stage", stage},
                           {"segments", cell.segments},
                           {"ms", cell.total_ms},
                           {"words", cell.total_words},
                           {"hours", ms_to_hours(cell.total_ms)}});
    }
    sources.push_back({{"source", source}, {"stages", std::move(stage_arr)}});
  }
  json totals = json::array();
  for (int stage : {1, 2}) {
    StatsCell t = stats.stage_total(stage);
    totals.push_back({{"stage", stage},
                      {"segments", t.segments},
                      {"ms", t.total_ms},
                      {"words", t.total_words},
                      {"hours", ms_to_hours(t.total_ms)}});
  }
  return json{{"sources", std::move(sources)},
              {"totals", std::move(totals)},
              {"invalid_segments", stats.invalid_segments}};
}

inline CorpusStats stats_from_json(const json& j) {
  CorpusStats stats;
  for (const json& s : j.at("sources")) {
    const std::string source = s.at("source").get<std::string>();
    for (const json& st : s.at("stages")) {
      StatsCell& cell = stats.cells[source][st.at("stage").get<int>()];
      cell.segments = st.at("segments").get<int64_t>();
      cell.total_ms = st.at("ms").get<int64_t>();
      cell.total_words = st.at("words").get<int64_t>();
    }
  }
  stats.invalid_segments = j.value("invalid_segments", int64_t{0});
  return stats;
}

/// Rows are sources, columns are stages, hours rounded to the nearest hour.
inline std::string render_stats_table(const CorpusStats& stats) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-28s  %14s  %14s\n", "source", "stage1 (hours)",
                "stage2 (hours)");
  out += buf;
  const auto hours_cell = [](const std::map<int, StatsCell>& stages, int stage) {
    auto it = stages.find(stage);
    if (it == stages.end()) return std::string("-");
    return std::to_string(
        static_cast<int64_t>(std::llround(ms_to_hours(it->second.total_ms))));
  };
  for (const auto& [source, stages] : stats.cells) {
    std::snprintf(buf, sizeof(buf), "%-28s  %14s  %14s\n", source.c_str(),
                  hours_cell(stages, 1).c_str(), hours_cell(stages, 2).c_str());
    out += buf;
  }
  StatsCell t1 = stats.stage_total(1), t2 = stats.stage_total(2);
  std::snprintf(buf, sizeof(buf), "%-28s  %14lld  %14lld\n", "total",
                static_cast<long long>(std::llround(ms_to_hours(t1.total_ms))),
                static_cast<long long>(std::llround(ms_to_hours(t2.total_ms))));
  out += buf;
  if (stats.invalid_segments > 0) {
    out += "invalid segments excluded: " + std::to_string(stats.invalid_segments) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage-to-stage retention
// ---------------------------------------------------------------------------

struct RetentionRow {
  std::string source;
  double before_hours = 0;
  double after_hours = 0;
  std::optional<double> retention;  // unset for a source new in `after`
  bool growth = false;              // retention above 1: the source grew
  bool new_source = false;
};

/// Per-source retention between two corpus snapshots (hours after / hours
/// before, summed over stages).  Growth is flagged, not treated as an error:
/// a source can legitimately gain data between stages.
inline std::vector<RetentionRow> stage_diff(const CorpusStats& before,
                                            const CorpusStats& after) {
  std::map<std::string, bool> sources;
  for (const auto& [source, stages] : before.cells) sources[source] = true;
  for (const auto& [source, stages] : after.cells) sources[source] = true;
  std::vector<RetentionRow> rows;
  for (const auto& [source, unused] : sources) {
    RetentionRow row;
    row.source = source;
    int64_t before_ms = before.source_total_ms(source);
    int64_t after_ms = after.source_total_ms(source);
    row.before_hours = ms_to_hours(before_ms);
    row.after_hours = ms_to_hours(after_ms);
    if (before_ms == 0) {
      row.new_source = after_ms > 0;
    } else {
      row.retention = static_cast<double>(after_ms) / static_cast<double>(before_ms);
      row.growth = *row.retention > 1.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string render_retention(const std::vector<RetentionRow>& rows) {
  char buf[200];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-28s  %12s  %12s  %10s\n", "source", "before (h)",
                "after (h)", "retention");
  out += buf;
  for (const RetentionRow& row : rows) {
    std::string retention;
    if (row.new_source) {
      retention = "new source";
    } else if (row.retention) {
      std::snprintf(buf, sizeof(buf), "%.3f%s", *row.retention,
                    row.growth ? " (growth)" : "");
      retention = buf;
    } else {
      retention = "-";
    }
    std::snprintf(buf, sizeof(buf), "%-28s  %12.3f  %12.3f  %s\n", row.source.c_str(),
                  row.before_hours, row.after_hours, retention.c_str());
    out += buf;
  }
  return out;
}

}  // namespace forge

#endif  // FORGE_STATS_HPP_
