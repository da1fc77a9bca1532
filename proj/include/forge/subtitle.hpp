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

#ifndef FORGE_SUBTITLE_HPP_
#define FORGE_SUBTITLE_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "forge/core.hpp"
#include "forge/unicode.hpp"

namespace forge {

/// Broadcaster notation recognized on a cue.  Tags and names carry the
/// extracted strings; the booleans mark notation that was stripped.
struct CueFlags {
  bool speaker_change = false;
  bool continuation = false;  // this cue's sentence continues into the next
  bool live_texting = false;
  bool credit = false;
  std::vector<std::string> language_tags;
  std::vector<std::string> speaker_names;

  bool operator==(const CueFlags&) const = default;
};

/// A timed caption block.  `lines` hold the text exactly as parsed; cleaning
/// rewrites them in place.
struct SubtitleCue {
  int32_t index = 0;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  std::vector<std::string> lines;
  CueFlags flags;

  std::string text() const {
    std::string out;
    for (const std::string& line : lines) {
      if (!out.empty()) out += ' ';
      out += line;
    }
    return out;
  }

  bool operator==(const SubtitleCue&) const = default;
};

enum class SubtitleFormat { Srt, Vtt };

struct ParsedSubtitles {
  std::vector<SubtitleCue> cues;        // sorted by start_ms
  std::vector<std::string> warnings;    // non-fatal oddities, e.g. overlaps
};

// ---------------------------------------------------------------------------
// Notation rules
// ---------------------------------------------------------------------------

/// How the broadcaster marks non-speech notation.  Patterns are glob-style:
/// `*` matches any run, `|` separates alternatives, matching is case-folded
/// against a whole line.  A matching line is notation, not speech: it is
/// dropped and the corresponding flag recorded.
struct NotationRules {
  std::vector<std::string> speaker_prefixes;  // stripped from line starts
  std::string continuation_trailing;          // literal marker at cue end
  std::string continuation_leading;           // literal marker at cue start
  std::vector<std::string> credit_patterns;
  std::string language_tag_pattern;
  std::string live_texting_marker;
  bool detect_speaker_names = true;  // strip leading "NAME:" from lines

  static NotationRules defaults() {
    NotationRules r;
    r.speaker_prefixes = {"- ", "– ", "— ", "-"};
    r.continuation_trailing = "...";
    r.continuation_leading = "...";
    r.credit_patterns = {"tekstet av*", "teksting:*", "norsk tekst*", "oversatt av*",
                         "undertekster*"};
    r.language_tag_pattern = "(*)|[*]";
    r.live_texting_marker = "*direktetekst*";
    return r;
  }
};

/// Reads rules from a parsed config object; absent keys keep their defaults.
inline NotationRules notation_rules_from_json(const json& j) {
  NotationRules r = NotationRules::defaults();
  if (j.contains("speaker_prefixes")) {
    r.speaker_prefixes = j["speaker_prefixes"].get<std::vector<std::string>>();
  }
  if (j.contains("continuation_trailing")) {
    r.continuation_trailing = j["continuation_trailing"].get<std::string>();
  }
  if (j.contains("continuation_leading")) {
    r.continuation_leading = j["continuation_leading"].get<std::string>();
  }
  if (j.contains("credit_patterns")) {
    r.credit_patterns = j["credit_patterns"].get<std::vector<std::string>>();
  }
  if (j.contains("language_tag_pattern")) {
    r.language_tag_pattern = j["language_tag_pattern"].get<std::string>();
  }
  if (j.contains("live_texting_marker")) {
    r.live_texting_marker = j["live_texting_marker"].get<std::string>();
  }
  if (j.contains("detect_speaker_names")) {
    r.detect_speaker_names = j["detect_speaker_names"].get<bool>();
  }
  return r;
}

namespace detail {

/// Glob-lite matcher over case-folded text: alternatives split on '|', '*'
/// matches any (possibly empty) run, everything else is literal, and the
/// pattern must cover the whole line.
inline bool glob_match_one(std::u32string_view pat, std::u32string_view text) {
  if (pat.empty()) return text.empty();
  size_t star = pat.find(U'*');
  if (star == std::u32string_view::npos) return pat == text;
  if (text.size() + 1 < pat.size()) return false;  // every '*' can be empty
  if (text.substr(0, star) != pat.substr(0, star)) return false;
  std::u32string_view rest = pat.substr(star + 1);
  std::u32string_view hay = text.substr(star);
  for (size_t skip = 0; skip <= hay.size(); ++skip) {
    if (glob_match_one(rest, hay.substr(skip))) return true;
  }
  return false;
}

inline bool pattern_match(std::string_view pattern, std::string_view line) {
  std::u32string folded = decode_utf8(line);
  for (char32_t& c : folded) c = to_lower(c);
  size_t begin = 0;
  std::u32string pat_all = decode_utf8(pattern);
  for (char32_t& c : pat_all) c = to_lower(c);
  while (begin <= pat_all.size()) {
    size_t end = pat_all.find(U'|', begin);
    if (end == std::u32string::npos) end = pat_all.size();
    std::u32string_view alt(pat_all.data() + begin, end - begin);
    if (!alt.empty() && glob_match_one(alt, folded)) return true;
    if (end == pat_all.size()) break;
    begin = end + 1;
  }
  return false;
}

inline std::string trim(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  size_t b = 0, e = cps.size();
  while (b < e && is_space(cps[b])) ++b;
  while (e > b && is_space(cps[e - 1])) --e;
  return encode_utf8(cps.substr(b, e - b));
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct NumberedLine {
  std::string text;
  int lineno;
};

inline std::vector<NumberedLine> split_lines(std::string_view raw) {
  std::vector<NumberedLine> lines;
  // UTF-8 BOM
  if (starts_with(raw, "\xEF\xBB\xBF")) raw.remove_prefix(3);
  int lineno = 1;
  size_t pos = 0;
  while (pos <= raw.size()) {
    size_t nl = raw.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? raw.substr(pos) : raw.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({std::string(line), lineno});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++lineno;
  }
  // A trailing newline produces one empty phantom line; harmless for block
  // scanning.
  return lines;
}

[[noreturn]] inline void parse_fail(std::string_view name, int lineno,
                                    const std::string& what) {
  throw ParseError(std::string(name) + ":" + std::to_string(lineno) + ": " + what);
}

/// "HH:MM:SS,mmm", "HH:MM:SS.mmm" or "MM:SS.mmm", converted exactly to ms.
inline int64_t parse_timestamp(std::string_view ts, std::string_view name, int lineno) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : ts) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 2 && parts.size() != 3) {
    parse_fail(name, lineno, "malformed timestamp '" + std::string(ts) + "'");
  }
  std::string secs = parts.back();
  size_t sep = secs.find_first_of(".,");
  if (sep == std::string::npos || secs.size() - sep - 1 != 3) {
    parse_fail(name, lineno, "malformed timestamp '" + std::string(ts) + "'");
  }
  const auto to_int = [&](std::string_view field, int max_value) -> int64_t {
    if (field.empty()) parse_fail(name, lineno, "malformed timestamp '" + std::string(ts) + "'");
    int64_t v = 0;
    for (char c : field) {
      if (c < '0' || c > '9') {
        parse_fail(name, lineno, "malformed timestamp '" + std::string(ts) + "'");
      }
      v = v * 10 + (c - '0');
      if (v > 99'999'999) parse_fail(name, lineno, "timestamp out of range");
    }
    if (max_value > 0 && v >= max_value) {
      parse_fail(name, lineno, "timestamp field out of range in '" + std::string(ts) + "'");
    }
    return v;
  };
  int64_t hours = parts.size() == 3 ? to_int(parts[0], 0) : 0;
  int64_t minutes = to_int(parts[parts.size() == 3 ? 1 : 0], 60);
  int64_t seconds = to_int(secs.substr(0, sep), 60);
  int64_t millis = to_int(secs.substr(sep + 1), 1000);
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis;
}

/// Splits a timing line on "-->"; returns false when the arrow is absent.
inline bool parse_timing(const std::string& line, std::string_view name, int lineno,
                         int64_t* start_ms, int64_t* end_ms) {
  size_t arrow = line.find("-->");
  if (arrow == std::string::npos) return false;
  std::string left = trim(line.substr(0, arrow));
  std::string right = trim(line.substr(arrow + 3));
  // WebVTT cue settings follow the end timestamp; drop them.
  size_t space = right.find_first_of(" \t");
  if (space != std::string::npos) right = right.substr(0, space);
  *start_ms = parse_timestamp(left, name, lineno);
  *end_ms = parse_timestamp(right, name, lineno);
  if (*end_ms <= *start_ms) {
    parse_fail(name, lineno, "cue end timestamp must be after its start");
  }
  return true;
}

/// Removes inline markup tags such as <i>, </c> or <00:00:01.000>; stray '<'
/// that does not open a well-formed tag is kept.
inline std::string strip_markup(const std::string& line) {
  std::string out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '<') {
      size_t close = line.find('>', i + 1);
      if (close != std::string::npos) {
        bool tag_like = close > i + 1;
        for (size_t k = i + 1; k < close && tag_like; ++k) {
          char c = line[k];
          tag_like = std::isalnum(static_cast<unsigned char>(c)) || c == '/' ||
                     c == '.' || c == ':' || c == '_' || c == '-' || c == ' ';
        }
        if (tag_like) {
          i = close + 1;
          continue;
        }
      }
    }
    out += line[i++];
  }
  return out;
}

inline bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace detail

/// Parses SRT or WebVTT text.  Timestamps convert exactly to milliseconds,
/// styling and positioning are discarded, cue text is kept verbatim.
/// Malformed timing raises ParseError naming the line; overlapping cues are
/// accepted and reported as warnings.
inline ParsedSubtitles parse_subtitles(std::string_view raw, SubtitleFormat format,
                                       std::string_view name = "<subtitles>") {
  std::vector<detail::NumberedLine> lines = detail::split_lines(raw);
  ParsedSubtitles result;
  size_t i = 0;
  const auto skip_blank = [&] {
    while (i < lines.size() && detail::trim(lines[i].text).empty()) ++i;
  };

  if (format == SubtitleFormat::Vtt) {
    skip_blank();
    if (i >= lines.size() || !detail::starts_with(lines[i].text, "WEBVTT")) {
      detail::parse_fail(name, i < lines.size() ? lines[i].lineno : 1,
                         "missing WEBVTT header");
    }
    // Header block runs to the first blank line.
    while (i < lines.size() && !detail::trim(lines[i].text).empty()) ++i;
  }

  int next_index = 1;
  while (true) {
    skip_blank();
    if (i >= lines.size()) break;
    // Block-level comments and style sections (WebVTT).
    if (format == SubtitleFormat::Vtt) {
      const std::string head = detail::trim(lines[i].text);
      if (detail::starts_with(head, "NOTE") || head == "STYLE" || head == "REGION") {
        while (i < lines.size() && !detail::trim(lines[i].text).empty()) ++i;
        continue;
      }
    }
    SubtitleCue cue;
    cue.index = next_index;
    int64_t start = 0, end = 0;
    // Optional identifier line (SRT index / WebVTT cue id) before the timing.
    if (!detail::parse_timing(lines[i].text, name, lines[i].lineno, &start, &end)) {
      const std::string id_line = detail::trim(lines[i].text);
      ++i;
      if (i >= lines.size() ||
          !detail::parse_timing(lines[i].text, name, lines[i].lineno, &start, &end)) {
        detail::parse_fail(name, lines[i - 1].lineno,
                           "expected a timing line after '" + id_line + "'");
      }
      if (format == SubtitleFormat::Srt && detail::is_integer(id_line)) {
        cue.index = std::stoi(id_line);
      }
    }
    cue.start_ms = start;
    cue.end_ms = end;
    ++i;
    while (i < lines.size() && !detail::trim(lines[i].text).empty()) {
      cue.lines.push_back(detail::strip_markup(lines[i].text));
      ++i;
    }
    next_index = cue.index + 1;
    result.cues.push_back(std::move(cue));
  }

  for (size_t c = 1; c < result.cues.size(); ++c) {
    if (result.cues[c].start_ms < result.cues[c - 1].end_ms) {
      result.warnings.push_back("cues " + std::to_string(result.cues[c - 1].index) +
                                " and " + std::to_string(result.cues[c].index) +
                                " overlap");
    }
  }
  std::stable_sort(result.cues.begin(), result.cues.end(),
                   [](const SubtitleCue& a, const SubtitleCue& b) {
                     return a.start_ms < b.start_ms;
                   });
  return result;
}

inline SubtitleFormat subtitle_format_for_path(std::string_view path) {
  if (path.size() >= 4) {
    std::string ext = fold_case(path.substr(path.size() - 4));
    if (ext == ".vtt") return SubtitleFormat::Vtt;
  }
  return SubtitleFormat::Srt;
}

// ---------------------------------------------------------------------------
// Cleaning
// ---------------------------------------------------------------------------

namespace detail {

/// Detects a leading "NAME:" speaker label: a short all-letters prefix whose
/// first letter is uppercase, with speech following the colon.
inline bool strip_speaker_name(std::string* line, std::string* name_out) {
  std::u32string cps = decode_utf8(*line);
  size_t colon = std::u32string::npos;
  for (size_t k = 0; k < cps.size(); ++k) {
    if (cps[k] == U':') {
      colon = k;
      break;
    }
  }
  if (colon == std::u32string::npos || colon == 0 || colon > 40) return false;
  if (colon + 1 >= cps.size()) return false;
  // First letter must be uppercase (it has a lowercase mapping).
  if (to_lower(cps[0]) == cps[0]) return false;
  for (size_t k = 0; k < colon; ++k) {
    char32_t c = cps[k];
    bool letter = !is_space(c) && !is_punct(c) && !(c >= U'0' && c <= U'9');
    if (!letter && c != U' ' && c != U'.' && c != U'-') return false;
  }
  std::string rest = trim(encode_utf8(cps.substr(colon + 1)));
  if (rest.empty()) return false;
  *name_out = trim(encode_utf8(cps.substr(0, colon)));
  *line = rest;
  return true;
}

/// Trims the enclosing brackets/parens and whitespace off a tag line.
inline std::string extract_tag(const std::string& line) {
  std::u32string cps = decode_utf8(trim(line));
  size_t b = 0, e = cps.size();
  while (b < e && is_punct(cps[b])) ++b;
  while (e > b && is_punct(cps[e - 1])) --e;
  return trim(encode_utf8(cps.substr(b, e - b)));
}

}  // namespace detail

/// Strips broadcaster notation so only spoken text remains.  Credit lines and
/// tag-only lines are dropped (a cue left empty disappears); speaker dashes
/// and name labels are stripped with the boundary recorded in flags;
/// continuation marks are removed and flagged so merging can rejoin the
/// sentence.  Unknown notation passes through untouched, and cleaning twice
/// changes nothing.
inline std::vector<SubtitleCue> clean_cues(const std::vector<SubtitleCue>& cues,
                                           const NotationRules& rules) {
  std::vector<SubtitleCue> out;
  out.reserve(cues.size());
  for (const SubtitleCue& input : cues) {
    SubtitleCue cue = input;
    std::vector<std::string> lines;
    int dash_count = 0;
    for (const std::string& raw_line : cue.lines) {
      std::string line = detail::trim(raw_line);
      if (line.empty()) continue;
      // Speaker dashes and name labels come off first so notation hiding
      // behind them is still recognized.
      bool stripped = true;
      while (stripped) {
        stripped = false;
        for (const std::string& prefix : rules.speaker_prefixes) {
          if (!prefix.empty() && detail::starts_with(line, prefix)) {
            line = detail::trim(line.substr(prefix.size()));
            ++dash_count;
            stripped = true;
            break;
          }
        }
      }
      if (rules.detect_speaker_names) {
        std::string speaker;
        while (detail::strip_speaker_name(&line, &speaker)) {
          cue.flags.speaker_names.push_back(speaker);
        }
      }
      if (line.empty()) continue;
      bool drop = false;
      for (const std::string& pat : rules.credit_patterns) {
        if (detail::pattern_match(pat, line)) {
          cue.flags.credit = true;
          drop = true;
          break;
        }
      }
      if (!drop && !rules.language_tag_pattern.empty() &&
          detail::pattern_match(rules.language_tag_pattern, line)) {
        cue.flags.language_tags.push_back(detail::extract_tag(line));
        drop = true;
      }
      if (!drop && !rules.live_texting_marker.empty() &&
          detail::pattern_match(rules.live_texting_marker, line)) {
        cue.flags.live_texting = true;
        drop = true;
      }
      if (!drop) lines.push_back(std::move(line));
    }
    if (dash_count > 0) cue.flags.speaker_change = true;

    // Leading continuation marker: this cue carries on the previous one.
    const std::string& lead = rules.continuation_leading;
    if (!lead.empty()) {
      while (!lines.empty()) {
        if (detail::starts_with(lines.front(), lead)) {
          lines.front() = detail::trim(lines.front().substr(lead.size()));
          if (!out.empty()) out.back().flags.continuation = true;
        } else if (lines.front().empty()) {
          lines.erase(lines.begin());
        } else {
          break;
        }
      }
    }
    const std::string& trail = rules.continuation_trailing;
    if (!trail.empty()) {
      while (!lines.empty()) {
        if (detail::ends_with(lines.back(), trail)) {
          lines.back() =
              detail::trim(lines.back().substr(0, lines.back().size() - trail.size()));
          cue.flags.continuation = true;
        } else if (lines.back().empty()) {
          lines.pop_back();
        } else {
          break;
        }
      }
    }
    if (lines.empty()) continue;  // nothing spoken left
    cue.lines = std::move(lines);
    out.push_back(std::move(cue));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Merging and no-speech extraction
// ---------------------------------------------------------------------------

/// Identity carried onto the segments built from one subtitle document.
struct MergeContext {
  std::string audio_ref;
  SourceTag source = SourceTag(SourceTag::NrkSubtitles);
  Language language = Language::Unknown;
  Stage stage = Stage::Stage1;
  std::string id_prefix;  // defaults to audio_ref

  std::string prefix() const { return id_prefix.empty() ? audio_ref : id_prefix; }
};

/// A merged segment; oversize marks a single cue that alone exceeded the
/// duration cap (emitted rather than truncated, the caller decides).
struct MergedSegment {
  Segment segment;
  bool oversize = false;
};

namespace detail {

inline std::string segment_id(const std::string& prefix, std::string_view kind, int n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d", n);
  std::string id = prefix;
  id += '-';
  if (!kind.empty()) {
    id += kind;
    id += '-';
  }
  id += buf;
  return id;
}

}  // namespace detail

/// Greedy left-to-right merging of cleaned cues into segments no longer than
/// `max_duration_ms` (span measured first start to last end).  A break never
/// lands between a continuation-flagged pair that could still fit together
/// under the cap; a single cue over the cap comes out alone, marked oversize.
inline std::vector<MergedSegment> merge_segments(const std::vector<SubtitleCue>& cues,
                                                 const MergeContext& ctx,
                                                 int64_t max_duration_ms = kMaxSegmentMs) {
  std::vector<MergedSegment> segments;
  int counter = 0;
  const auto emit = [&](size_t b, size_t e, bool oversize) {  // cues [b, e]
    Segment seg;
    seg.id = detail::segment_id(ctx.prefix(), "", ++counter);
    seg.audio_ref = ctx.audio_ref;
    seg.start_ms = cues[b].start_ms;
    seg.end_ms = cues[e].end_ms;
    seg.source = ctx.source;
    seg.language = ctx.language;
    seg.stage = ctx.stage;
    for (size_t k = b; k <= e; ++k) {
      if (!seg.text.empty()) seg.text += ' ';
      seg.text += cues[k].text();
    }
    segments.push_back({std::move(seg), oversize});
  };

  size_t b = 0;  // start of the open run; the run is [b, i) while scanning i
  for (size_t i = 0; i < cues.size(); ++i) {
    if (b == i) {
      if (cues[i].end_ms - cues[i].start_ms > max_duration_ms) {
        emit(i, i, /*oversize=*/true);
        b = i + 1;
      }
      continue;
    }
    if (cues[i].end_ms - cues[b].start_ms <= max_duration_ms) continue;
    // Find the latest break point k in (b, i] whose left neighbour does not
    // continue into it and whose tail [k, i] still fits.
    size_t chosen = 0;
    bool found = false;
    for (size_t k = i; k > b; --k) {
      if (cues[i].end_ms - cues[k].start_ms > max_duration_ms) break;  // monotone
      if (!cues[k - 1].flags.continuation) {
        chosen = k;
        found = true;
        break;
      }
    }
    if (!found) chosen = i;  // a continuation chain the cap forces apart
    if (chosen == i && cues[i].end_ms - cues[i].start_ms > max_duration_ms) {
      emit(b, i - 1, false);
      emit(i, i, /*oversize=*/true);
      b = i + 1;
      continue;
    }
    emit(b, chosen - 1, false);
    b = chosen;
  }
  if (b < cues.size()) emit(b, cues.size() - 1, false);
  return segments;
}

/// Gaps of at least `min_gap_ms` between cues (and before the first / after
/// the last) become empty-text no-speech segments; gaps longer than the cap
/// split into cap-sized pieces plus a remainder.
inline std::vector<Segment> extract_no_speech(const std::vector<SubtitleCue>& cues,
                                              int64_t recording_duration_ms,
                                              int64_t min_gap_ms, const MergeContext& ctx,
                                              int64_t max_duration_ms = kMaxSegmentMs) {
  if (!cues.empty() && recording_duration_ms < cues.back().end_ms) {
    throw Error("recording duration is shorter than the last cue end");
  }
  std::vector<Segment> out;
  int counter = 0;
  const auto emit_gap = [&](int64_t gap_start, int64_t gap_end) {
    if (gap_end - gap_start < min_gap_ms) return;
    int64_t pos = gap_start;
    while (pos < gap_end) {
      int64_t piece_end = std::min(pos + max_duration_ms, gap_end);
      Segment seg;
      seg.id = detail::segment_id(ctx.prefix(), "ns", ++counter);
      seg.audio_ref = ctx.audio_ref;
      seg.start_ms = pos;
      seg.end_ms = piece_end;
      seg.source = SourceTag(SourceTag::NrkNoCaption);
      seg.language = ctx.language;
      seg.stage = ctx.stage;
      out.push_back(std::move(seg));
      pos = piece_end;
    }
  };
  int64_t cursor = 0;
  for (const SubtitleCue& cue : cues) {
    if (cue.start_ms > cursor) emit_gap(cursor, cue.start_ms);
    cursor = std::max(cursor, cue.end_ms);
  }
  if (recording_duration_ms > cursor) emit_gap(cursor, recording_duration_ms);
  return out;
}

}  // namespace forge

#endif  // FORGE_SUBTITLE_HPP_
