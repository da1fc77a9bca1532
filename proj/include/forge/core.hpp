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

#ifndef FORGE_CORE_HPP_
#define FORGE_CORE_HPP_

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forge/textnorm.hpp"

namespace forge {

using json = nlohmann::json;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries "<file>:<line>" context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration (pipeline spec, rules file, filter config, CLI flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Segments longer than this are never emitted by merging; the audio model
/// downstream consumes chunks of at most 30 seconds.
inline constexpr int64_t kMaxSegmentMs = 30000;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Corpus a segment came from.  Unrecognized tags round-trip through `custom`.
struct SourceTag {
  enum Kind { NrkSubtitles, NrkNoCaption, AudioBooks, Nst, Stortinget, Other };

  Kind kind = Other;
  std::string custom;  // set only when kind == Other

  SourceTag() = default;
  SourceTag(Kind k) : kind(k) {}  // NOLINT: implicit by design
  static SourceTag other(std::string name) {
    SourceTag t;
    t.kind = Other;
    t.custom = std::move(name);
    return t;
  }

  static SourceTag parse(std::string_view s) {
    if (s == "nrk_subtitles") return SourceTag(NrkSubtitles);
    if (s == "nrk_no_caption") return SourceTag(NrkNoCaption);
    if (s == "audio_books") return SourceTag(AudioBooks);
    if (s == "nst") return SourceTag(Nst);
    if (s == "stortinget") return SourceTag(Stortinget);
    return other(std::string(s));
  }

  std::string str() const {
    switch (kind) {
      case NrkSubtitles: return "nrk_subtitles";
      case NrkNoCaption: return "nrk_no_caption";
      case AudioBooks: return "audio_books";
      case Nst: return "nst";
      case Stortinget: return "stortinget";
      case Other: return custom;
    }
    return custom;
  }

  bool operator==(const SourceTag&) const = default;
  bool operator<(const SourceTag& o) const { return str() < o.str(); }
};

/// Written standard of the target text, not the speaker's dialect.
enum class Language { Bokmaal, Nynorsk, English, Unknown };

inline std::string to_string(Language l) {
  switch (l) {
    case Language::Bokmaal: return "nb";
    case Language::Nynorsk: return "nn";
    case Language::English: return "en";
    case Language::Unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<Language> parse_language(std::string_view s) {
  if (s == "nb") return Language::Bokmaal;
  if (s == "nn") return Language::Nynorsk;
  if (s == "en") return Language::English;
  if (s == "unknown") return Language::Unknown;
  return std::nullopt;
}

/// Training phase the segment belongs to.
enum class Stage : int { Stage1 = 1, Stage2 = 2 };

struct TimedWord {
  std::string word;
  int64_t start_ms = 0;
  int64_t end_ms = 0;

  bool operator==(const TimedWord&) const = default;
};

enum class NerLabel { Person, Location, Organization, Other };

inline std::string to_string(NerLabel l) {
  switch (l) {
    case NerLabel::Person: return "person";
    case NerLabel::Location: return "location";
    case NerLabel::Organization: return "organization";
    case NerLabel::Other: return "other";
  }
  return "other";
}

inline std::optional<NerLabel> parse_ner_label(std::string_view s) {
  if (s == "person") return NerLabel::Person;
  if (s == "location") return NerLabel::Location;
  if (s == "organization") return NerLabel::Organization;
  if (s == "other") return NerLabel::Other;
  return std::nullopt;
}

/// One entity span produced by an external tagger over some annotated text.
struct NerAnnotation {
  std::string entity_text;
  NerLabel label = NerLabel::Other;
  int64_t char_start = 0;
  int64_t char_end = 0;

  bool operator==(const NerAnnotation&) const = default;
};

/// One model's hypothesis for a segment.  `words` carries per-word timestamps
/// when the decoder emitted them; `ner` is optional tagger output over `text`.
struct Prediction {
  std::string model_id;
  std::string text;
  std::optional<std::vector<TimedWord>> words;
  std::vector<NerAnnotation> ner;

  bool operator==(const Prediction&) const = default;
};

/// One training example: an audio span and its target transcription.
struct Segment {
  std::string id;
  std::string audio_ref;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  std::string text;
  SourceTag source;
  Language language = Language::Unknown;
  Stage stage = Stage::Stage1;

  int64_t duration_ms() const { return end_ms - start_ms; }

  bool operator==(const Segment&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Returns one description per violated invariant; empty means valid.
/// Never throws: validation is diagnostics, not control flow.
inline std::vector<std::string> validate_segment(const Segment& seg) {
  std::vector<std::string> v;
  if (seg.start_ms < 0) v.push_back("start_ms must be >= 0");
  if (seg.end_ms <= seg.start_ms) v.push_back("end_ms must exceed start_ms");
  if (seg.end_ms > seg.start_ms && seg.duration_ms() > kMaxSegmentMs) {
    v.push_back("duration exceeds " + std::to_string(kMaxSegmentMs) + " ms");
  }
  if (seg.source.kind == SourceTag::NrkNoCaption && !seg.text.empty()) {
    v.push_back("no-speech segments (nrk_no_caption) must have empty text");
  }
  return v;
}

inline std::vector<std::string> validate_prediction(const Prediction& pred) {
  std::vector<std::string> v;
  if (pred.words) {
    std::string joined;
    int64_t prev = 0;
    bool first = true;
    for (const TimedWord& w : pred.words.value()) {
      if (!joined.empty()) joined += ' ';
      joined += w.word;
      if (w.end_ms < w.start_ms) v.push_back("word '" + w.word + "' has end_ms < start_ms");
      if (!first && w.start_ms < prev) {
        v.push_back("word timestamps must be non-decreasing");
        break;
      }
      prev = w.start_ms;
      first = false;
    }
    const NormalizationConfig ws_only{false, false, true, {}};
    if (normalize(joined, ws_only) != normalize(pred.text, ws_only)) {
      v.push_back("words do not concatenate to text");
    }
  }
  return v;
}

inline std::vector<std::string> validate_ner(const NerAnnotation& ann,
                                             size_t annotated_text_len) {
  std::vector<std::string> v;
  if (ann.char_end <= ann.char_start) v.push_back("char_end must exceed char_start");
  if (ann.char_end > static_cast<int64_t>(annotated_text_len)) {
    v.push_back("entity span exceeds annotated text length");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Manifest records (line-delimited JSON)
// ---------------------------------------------------------------------------

/// One manifest line: a segment plus optional predictions and target-text
/// entity annotations.  Fields this schema does not know about are kept in
/// `extra` and written back unchanged.
struct ManifestRecord {
  Segment segment;
  std::vector<Prediction> predictions;
  std::vector<NerAnnotation> ner;
  json extra = json::object();

  bool operator==(const ManifestRecord&) const = default;
};

namespace detail {

inline json ner_to_json(const NerAnnotation& a) {
  return json{{"entity_text", a.entity_text},
              {"label", to_string(a.label)},
              {"char_start", a.char_start},
              {"char_end", a.char_end}};
}

inline NerAnnotation ner_from_json(const json& j) {
  NerAnnotation a;
  a.entity_text = j.at("entity_text").get<std::string>();
  auto label = parse_ner_label(j.at("label").get<std::string>());
  if (!label) throw ParseError("unknown ner label: " + j.at("label").get<std::string>());
  a.label = *label;
  a.char_start = j.at("char_start").get<int64_t>();
  a.char_end = j.at("char_end").get<int64_t>();
  return a;
}

inline json prediction_to_json(const Prediction& p) {
  json j{{"model_id", p.model_id}, {"text", p.text}};
  if (p.words) {
    json words = json::array();
    for (const TimedWord& w : *p.words) {
      words.push_back({{"word", w.word}, {"start_ms", w.start_ms}, {"end_ms", w.end_ms}});
    }
    j["words"] = std::move(words);
  }
  if (!p.ner.empty()) {
    json ner = json::array();
    for (const NerAnnotation& a : p.ner) ner.push_back(ner_to_json(a));
    j["ner"] = std::move(ner);
  }
  return j;
}

inline Prediction prediction_from_json(const json& j) {
  Prediction p;
  p.model_id = j.at("model_id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  if (j.contains("words") && !j["words"].is_null()) {
    std::vector<TimedWord> words;
    for (const json& wj : j["words"]) {
      words.push_back(TimedWord{wj.at("word").get<std::string>(),
                                wj.at("start_ms").get<int64_t>(),
                                wj.at("end_ms").get<int64_t>()});
    }
    p.words = std::move(words);
  }
  if (j.contains("ner")) {
    for (const json& aj : j["ner"]) p.ner.push_back(ner_from_json(aj));
  }
  return p;
}

}  // namespace detail

inline json record_to_json(const ManifestRecord& rec) {
  json j = rec.extra.is_object() ? rec.extra : json::object();
  const Segment& s = rec.segment;
  j["id"] = s.id;
  j["audio_ref"] = s.audio_ref;
  j["start_ms"] = s.start_ms;
  j["end_ms"] = s.end_ms;
  j["text"] = s.text;
  j["source"] = s.source.str();
  j["language"] = to_string(s.language);
  j["stage"] = static_cast<int>(s.stage);
  j.erase("predictions");
  j.erase("ner");
  if (!rec.predictions.empty()) {
    json preds = json::array();
    for (const Prediction& p : rec.predictions) preds.push_back(detail::prediction_to_json(p));
    j["predictions"] = std::move(preds);
  }
  if (!rec.ner.empty()) {
    json ner = json::array();
    for (const NerAnnotation& a : rec.ner) ner.push_back(detail::ner_to_json(a));
    j["ner"] = std::move(ner);
  }
  return j;
}

inline ManifestRecord record_from_json(const json& j) {
  ManifestRecord rec;
  Segment& s = rec.segment;
  s.id = j.at("id").get<std::string>();
  s.audio_ref = j.at("audio_ref").get<std::string>();
  s.start_ms = j.at("start_ms").get<int64_t>();
  s.end_ms = j.at("end_ms").get<int64_t>();
  s.text = j.at("text").get<std::string>();
  s.source = SourceTag::parse(j.at("source").get<std::string>());
  auto lang = parse_language(j.at("language").get<std::string>());
  if (!lang) throw ParseError("unknown language tag: " + j.at("language").get<std::string>());
  s.language = *lang;
  int stage = j.at("stage").get<int>();
  if (stage != 1 && stage != 2) throw ParseError("stage must be 1 or 2");
  s.stage = static_cast<Stage>(stage);
  if (j.contains("predictions")) {
    for (const json& pj : j["predictions"]) {
      rec.predictions.push_back(detail::prediction_from_json(pj));
    }
  }
  if (j.contains("ner")) {
    for (const json& aj : j["ner"]) rec.ner.push_back(detail::ner_from_json(aj));
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"id",       "audio_ref", "start_ms", "end_ms", "text",
                                  "source",   "language",  "stage",    "predictions", "ner"};
    bool is_known = false;
    for (const char* k : known) is_known |= (it.key() == k);
    if (!is_known) rec.extra[it.key()] = it.value();
  }
  return rec;
}

inline std::string serialize_record(const ManifestRecord& rec) {
  return record_to_json(rec).dump();
}

inline ManifestRecord parse_record(std::string_view line) {
  json j = json::parse(line);  // throws nlohmann parse_error on bad JSON
  return record_from_json(j);
}

/// Reads a JSONL manifest.  Errors name the 1-based line number.
inline std::vector<ManifestRecord> read_manifest(std::istream& in,
                                                 std::string_view name = "<manifest>") {
  std::vector<ManifestRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      records.push_back(parse_record(line));
    } catch (const json::exception& e) {
      throw ParseError(std::string(name) + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(std::string(name) + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

inline std::vector<ManifestRecord> read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest: " + path);
  return read_manifest(in, path);
}

inline void write_manifest(std::ostream& out, const std::vector<ManifestRecord>& records) {
  for (const ManifestRecord& rec : records) out << serialize_record(rec) << '\n';
}

}  // namespace forge

#endif  // FORGE_CORE_HPP_
