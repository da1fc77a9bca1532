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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "forge/subtitle.hpp"

using namespace forge;

namespace {

SubtitleCue cue(int64_t start, int64_t end, std::vector<std::string> lines,
                bool continuation = false) {
  SubtitleCue c;
  c.start_ms = start;
  c.end_ms = end;
  c.lines = std::move(lines);
  c.flags.continuation = continuation;
  return c;
}

std::string fixture_path(const char* name) {
  return std::string(FORGE_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("srt block parses to a cue") {
  ParsedSubtitles parsed =
      parse_subtitles("1\n00:00:01,000 --> 00:00:02,500\nHei!\n", SubtitleFormat::Srt);
  REQUIRE(parsed.cues.size() == 1);
  CHECK(parsed.cues[0].index == 1);
  CHECK(parsed.cues[0].start_ms == 1000);
  CHECK(parsed.cues[0].end_ms == 2500);
  CHECK(parsed.cues[0].lines == std::vector<std::string>{"Hei!"});
  CHECK(parsed.warnings.empty());
}

TEST_CASE("empty input parses to nothing") {
  CHECK(parse_subtitles("", SubtitleFormat::Srt).cues.empty());
  CHECK(parse_subtitles("\n\n\n", SubtitleFormat::Srt).cues.empty());
}

TEST_CASE("end before start is a parse error naming the line") {
  try {
    parse_subtitles("1\n00:00:02,000 --> 00:00:01,000\nHei\n", SubtitleFormat::Srt,
                    "bad.srt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("bad.srt:2") != std::string::npos);
    CHECK(msg.find("after its start") != std::string::npos);
  }
}

TEST_CASE("malformed timestamps name the line") {
  try {
    parse_subtitles("1\n00:00:xx,000 --> 00:00:01,000\nHei\n", SubtitleFormat::Srt,
                    "bad.srt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.srt:2") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_subtitles("1\n00:00:01,00 --> 00:00:02,000\nHei\n", SubtitleFormat::Srt),
      ParseError);
  CHECK_THROWS_AS(
      parse_subtitles("1\n00:61:01,000 --> 00:62:02,000\nHei\n", SubtitleFormat::Srt),
      ParseError);
}

TEST_CASE("overlapping cues are accepted with a warning") {
  ParsedSubtitles parsed = parse_subtitles(
      "1\n00:00:01,000 --> 00:00:05,000\nA\n\n2\n00:00:04,000 --> 00:00:06,000\nB\n",
      SubtitleFormat::Srt);
  CHECK(parsed.cues.size() == 2);
  REQUIRE(parsed.warnings.size() == 1);
  CHECK(parsed.warnings[0].find("overlap") != std::string::npos);
}

TEST_CASE("cues come out sorted by start time") {
  ParsedSubtitles parsed = parse_subtitles(
      "2\n00:00:05,000 --> 00:00:06,000\nB\n\n1\n00:00:01,000 --> 00:00:02,000\nA\n",
      SubtitleFormat::Srt);
  REQUIRE(parsed.cues.size() == 2);
  CHECK(parsed.cues[0].lines[0] == "A");
  CHECK(parsed.cues[1].lines[0] == "B");
}

TEST_CASE("srt accepts dot milliseconds and CRLF and BOM") {
  ParsedSubtitles parsed = parse_subtitles(
      "\xEF\xBB\xBF" "1\r\n00:00:01.000 --> 00:00:02.000\r\nHei\r\n", SubtitleFormat::Srt);
  REQUIRE(parsed.cues.size() == 1);
  CHECK(parsed.cues[0].start_ms == 1000);
}

TEST_CASE("vtt requires the header") {
  CHECK_THROWS_AS(parse_subtitles("1\n00:00:01.000 --> 00:00:02.000\nHei\n",
                                  SubtitleFormat::Vtt),
                  ParseError);
}

TEST_CASE("vtt parses, skips NOTE blocks, drops settings and tags") {
  ParsedSubtitles parsed = parse_subtitles(slurp(fixture_path("ep2.vtt")),
                                           SubtitleFormat::Vtt, "ep2.vtt");
  REQUIRE(parsed.cues.size() == 3);
  CHECK(parsed.cues[0].start_ms == 1000);
  CHECK(parsed.cues[0].lines[0] == "God morgen, Norge!");
  CHECK(parsed.cues[1].lines[0] == "I dag skal vi snakke om været.");  // tags gone
  CHECK(parsed.cues[2].start_ms == 8000);  // id line skipped
}

TEST_CASE("vtt hour-less timestamps") {
  ParsedSubtitles parsed = parse_subtitles(
      "WEBVTT\n\n01:02.345 --> 01:03.000\nHei\n", SubtitleFormat::Vtt);
  REQUIRE(parsed.cues.size() == 1);
  CHECK(parsed.cues[0].start_ms == 62345);
}

TEST_CASE("format guess by extension") {
  CHECK(subtitle_format_for_path("x/y/file.vtt") == SubtitleFormat::Vtt);
  CHECK(subtitle_format_for_path("x/y/file.VTT") == SubtitleFormat::Vtt);
  CHECK(subtitle_format_for_path("x/y/file.srt") == SubtitleFormat::Srt);
}

// ---------------------------------------------------------------------------
// Cleaning
// ---------------------------------------------------------------------------

TEST_CASE("simultaneous speaker dashes collapse into one flagged cue") {
  auto cleaned = clean_cues({cue(0, 2000, {"- Hei.", "- Hallo."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].flags.speaker_change);
  CHECK(cleaned[0].text() == "Hei. Hallo.");
}

TEST_CASE("credit cues disappear") {
  auto cleaned = clean_cues({cue(0, 2000, {"Tekstet av N.N."})},
                            NotationRules::defaults());
  CHECK(cleaned.empty());
}

TEST_CASE("credit hiding behind a speaker dash still disappears") {
  auto cleaned = clean_cues({cue(0, 2000, {"- Tekstet av N.N."})},
                            NotationRules::defaults());
  CHECK(cleaned.empty());
}

TEST_CASE("trailing continuation marker joins cue pairs") {
  std::vector<SubtitleCue> cues{cue(0, 2000, {"Hei,..."}), cue(2000, 4000, {"verden."})};
  auto cleaned = clean_cues(cues, NotationRules::defaults());
  REQUIRE(cleaned.size() == 2);
  CHECK(cleaned[0].flags.continuation);
  CHECK(cleaned[0].text() == "Hei,");
  CHECK_FALSE(cleaned[1].flags.continuation);
  CHECK(cleaned[1].text() == "verden.");
}

TEST_CASE("leading continuation marker flags the previous cue") {
  std::vector<SubtitleCue> cues{cue(0, 2000, {"Hei,"}), cue(2000, 4000, {"...verden."})};
  auto cleaned = clean_cues(cues, NotationRules::defaults());
  REQUIRE(cleaned.size() == 2);
  CHECK(cleaned[0].flags.continuation);
  CHECK(cleaned[1].text() == "verden.");
}

TEST_CASE("language tag lines are extracted and removed") {
  auto cleaned = clean_cues({cue(0, 2000, {"(PÅ ENGELSK)", "Welcome back."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  REQUIRE(cleaned[0].flags.language_tags.size() == 1);
  CHECK(cleaned[0].flags.language_tags[0] == "PÅ ENGELSK");
  CHECK(cleaned[0].text() == "Welcome back.");
}

TEST_CASE("tag-only cues are removed entirely") {
  auto cleaned = clean_cues({cue(0, 2000, {"[musikk]"})}, NotationRules::defaults());
  CHECK(cleaned.empty());
}

TEST_CASE("speaker names strip into flags") {
  auto cleaned = clean_cues({cue(0, 2000, {"PETTER: Vi fortsetter."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  REQUIRE(cleaned[0].flags.speaker_names.size() == 1);
  CHECK(cleaned[0].flags.speaker_names[0] == "PETTER");
  CHECK(cleaned[0].text() == "Vi fortsetter.");
}

TEST_CASE("clock times are not speaker names") {
  auto cleaned = clean_cues({cue(0, 2000, {"Klokka 18:30 starter det."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].text() == "Klokka 18:30 starter det.");
  CHECK(cleaned[0].flags.speaker_names.empty());
}

TEST_CASE("live texting banner is flagged and dropped") {
  auto cleaned = clean_cues({cue(0, 2000, {"Direktetekstet program.", "Vi er i gang."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].flags.live_texting);
  CHECK(cleaned[0].text() == "Vi er i gang.");
}

TEST_CASE("unknown notation passes through untouched") {
  auto cleaned = clean_cues({cue(0, 2000, {"Hei *stjerner* og #emner."})},
                            NotationRules::defaults());
  REQUIRE(cleaned.size() == 1);
  CHECK(cleaned[0].text() == "Hei *stjerner* og #emner.");
}

TEST_CASE("cleaning is idempotent") {
  ParsedSubtitles parsed = parse_subtitles(slurp(fixture_path("ep1.srt")),
                                           SubtitleFormat::Srt, "ep1.srt");
  NotationRules rules = NotationRules::defaults();
  auto once = clean_cues(parsed.cues, rules);
  auto twice = clean_cues(once, rules);
  CHECK(once == twice);
}

TEST_CASE("rules load from a parsed config") {
  json j = json::parse(
      R"({"speaker_prefixes":["* "],"continuation_trailing":"->","credit_patterns":["credits*"],"detect_speaker_names":false})");
  NotationRules rules = notation_rules_from_json(j);
  CHECK(rules.speaker_prefixes == std::vector<std::string>{"* "});
  CHECK(rules.continuation_trailing == "->");
  CHECK(rules.credit_patterns == std::vector<std::string>{"credits*"});
  CHECK_FALSE(rules.detect_speaker_names);
  // untouched keys keep defaults
  CHECK(rules.language_tag_pattern == NotationRules::defaults().language_tag_pattern);

  auto cleaned = clean_cues({cue(0, 1000, {"* Hei -> "}), cue(1000, 2000, {"du."})}, rules);
  REQUIRE(cleaned.size() == 2);
  CHECK(cleaned[0].flags.speaker_change);
  CHECK(cleaned[0].flags.continuation);
  CHECK(cleaned[0].text() == "Hei");
}

// ---------------------------------------------------------------------------
// Merging
// ---------------------------------------------------------------------------

namespace {

MergeContext ctx() {
  MergeContext c;
  c.audio_ref = "ep1";
  c.language = Language::Bokmaal;
  return c;
}

}  // namespace

TEST_CASE("greedy merge packs cues under the cap") {
  std::vector<SubtitleCue> cues{cue(0, 10000, {"en"}), cue(10000, 20000, {"to"}),
                                cue(20000, 35000, {"tre"})};
  auto merged = merge_segments(cues, ctx());
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].segment.start_ms == 0);
  CHECK(merged[0].segment.end_ms == 20000);
  CHECK(merged[0].segment.text == "en to");
  CHECK(merged[1].segment.start_ms == 20000);
  CHECK(merged[1].segment.end_ms == 35000);
  CHECK(merged[1].segment.text == "tre");
  CHECK_FALSE(merged[0].oversize);
  CHECK(validate_segment(merged[0].segment).empty());
}

TEST_CASE("a single short cue is a single segment") {
  auto merged = merge_segments({cue(1000, 6000, {"hei"})}, ctx());
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].segment.duration_ms() == 5000);
  CHECK_FALSE(merged[0].oversize);
}

TEST_CASE("an oversize cue is emitted alone and marked") {
  auto merged = merge_segments({cue(0, 40000, {"lang"})}, ctx());
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].oversize);
  CHECK(merged[0].segment.duration_ms() == 40000);
}

TEST_CASE("gaps count against the span, not just cue durations") {
  // Two 5 s cues 25 s apart: span would be 35 s, so they stay separate.
  std::vector<SubtitleCue> cues{cue(0, 5000, {"a"}), cue(30000, 35000, {"b"})};
  auto merged = merge_segments(cues, ctx());
  CHECK(merged.size() == 2);
}

TEST_CASE("continuation pairs move together instead of splitting") {
  // c2 continues into c3; naive greedy would cut between them.
  std::vector<SubtitleCue> cues{cue(0, 12000, {"a"}), cue(12000, 24000, {"b,"}, true),
                                cue(24000, 32000, {"c."})};
  auto merged = merge_segments(cues, ctx());
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].segment.text == "a");
  CHECK(merged[1].segment.text == "b, c.");
  CHECK(merged[1].segment.duration_ms() == 20000);
}

TEST_CASE("a continuation chain longer than the cap is split anyway") {
  std::vector<SubtitleCue> cues{cue(0, 15000, {"a"}, true), cue(15000, 29000, {"b"}, true),
                                cue(29000, 40000, {"c"})};
  auto merged = merge_segments(cues, ctx());
  REQUIRE(merged.size() == 2);
  for (const MergedSegment& m : merged) {
    CHECK(m.segment.duration_ms() <= kMaxSegmentMs);
  }
}

TEST_CASE("merge output ids are unique and carry the context") {
  auto merged = merge_segments({cue(0, 1000, {"a"}), cue(40000, 42000, {"b"})}, ctx());
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].segment.id != merged[1].segment.id);
  CHECK(merged[0].segment.audio_ref == "ep1");
  CHECK(merged[0].segment.language == Language::Bokmaal);
  CHECK(merged[0].segment.source.kind == SourceTag::NrkSubtitles);
}

TEST_CASE("merge cap holds over random cue streams") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<SubtitleCue> cues;
    int64_t t = 0;
    int n = 1 + static_cast<int>(rng() % 20);
    std::string all_text;
    for (int i = 0; i < n; ++i) {
      t += static_cast<int64_t>(rng() % 3000);
      int64_t dur = 500 + static_cast<int64_t>(rng() % 34000);
      cues.push_back(cue(t, t + dur, {"w" + std::to_string(i)}, rng() % 3 == 0));
      if (!all_text.empty()) all_text += ' ';
      all_text += "w" + std::to_string(i);
      t += dur;
    }
    auto merged = merge_segments(cues, ctx());
    std::string merged_text;
    for (const MergedSegment& m : merged) {
      if (!m.oversize) {
        CHECK(m.segment.duration_ms() <= kMaxSegmentMs);
      }
      if (!merged_text.empty()) merged_text += ' ';
      merged_text += m.segment.text;
    }
    // Merging rearranges boundaries but never loses or duplicates text.
    CHECK(merged_text == all_text);
  }
}

// ---------------------------------------------------------------------------
// No-speech extraction
// ---------------------------------------------------------------------------

TEST_CASE("a single interior gap becomes one no-speech segment") {
  std::vector<SubtitleCue> cues{cue(0, 10000, {"a"}), cue(20000, 30000, {"b"})};
  auto gaps = extract_no_speech(cues, 30000, 5000, ctx());
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].start_ms == 10000);
  CHECK(gaps[0].end_ms == 20000);
  CHECK(gaps[0].text.empty());
  CHECK(gaps[0].source.kind == SourceTag::NrkNoCaption);
  CHECK(validate_segment(gaps[0]).empty());
}

TEST_CASE("long gaps split at the cap") {
  std::vector<SubtitleCue> cues{cue(0, 1000, {"a"}), cue(71000, 72000, {"b"})};
  auto gaps = extract_no_speech(cues, 72000, 5000, ctx());
  REQUIRE(gaps.size() == 3);
  CHECK(gaps[0].duration_ms() == 30000);
  CHECK(gaps[1].duration_ms() == 30000);
  CHECK(gaps[2].duration_ms() == 10000);
  CHECK(gaps[0].start_ms == 1000);
  CHECK(gaps[2].end_ms == 71000);
}

TEST_CASE("small gaps are not silence") {
  std::vector<SubtitleCue> cues{cue(0, 10000, {"a"}), cue(10800, 20000, {"b"})};
  CHECK(extract_no_speech(cues, 20000, 1000, ctx()).empty());
}

TEST_CASE("leading and trailing gaps count") {
  std::vector<SubtitleCue> cues{cue(5000, 10000, {"a"})};
  auto gaps = extract_no_speech(cues, 18000, 2000, ctx());
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0].start_ms == 0);
  CHECK(gaps[0].end_ms == 5000);
  CHECK(gaps[1].start_ms == 10000);
  CHECK(gaps[1].end_ms == 18000);
}

TEST_CASE("recording shorter than the cues is rejected") {
  std::vector<SubtitleCue> cues{cue(0, 10000, {"a"})};
  CHECK_THROWS_AS(extract_no_speech(cues, 9000, 1000, ctx()), Error);
}

TEST_CASE("no-speech spans never intersect cue spans") {
  std::mt19937_64 rng(123);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<SubtitleCue> cues;
    int64_t t = 0;
    int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      t += static_cast<int64_t>(rng() % 8000);
      int64_t dur = 200 + static_cast<int64_t>(rng() % 5000);
      // Occasionally overlap the previous cue.
      int64_t start = (i > 0 && rng() % 5 == 0) ? std::max<int64_t>(0, t - 3000) : t;
      cues.push_back(cue(start, start + dur, {"x"}));
      t = start + dur;
    }
    std::sort(cues.begin(), cues.end(),
              [](const SubtitleCue& a, const SubtitleCue& b) {
                return a.start_ms < b.start_ms;
              });
    int64_t recording = t + static_cast<int64_t>(rng() % 40000);
    auto gaps = extract_no_speech(cues, recording, 1000, ctx());
    for (const Segment& gap : gaps) {
      CHECK(gap.duration_ms() <= kMaxSegmentMs);
      CHECK(gap.end_ms <= recording);
      for (const SubtitleCue& c : cues) {
        bool disjoint = gap.end_ms <= c.start_ms || gap.start_ms >= c.end_ms;
        CHECK(disjoint);
      }
    }
  }
}
