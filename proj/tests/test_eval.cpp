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

#include <random>

#include "forge/eval.hpp"

using namespace forge;

TEST_CASE("wer on identical text is zero") {
  WerBreakdown b = wer("hei verden", "hei verden");
  CHECK(b.wer() == 0.0);
  CHECK(b.matches == 2);
  CHECK(b.ref_len == 2);
}

TEST_CASE("insertions can push wer past one") {
  WerBreakdown b = wer("ja", "ja ja ja");
  CHECK(b.insertions == 2);
  CHECK(b.substitutions == 0);
  CHECK(b.deletions == 0);
  CHECK(b.ref_len == 1);
  CHECK(b.wer() == 2.0);
}

TEST_CASE("substitution counts") {
  WerBreakdown b = wer("a b c", "a x c");
  CHECK(b.substitutions == 1);
  CHECK(b.wer() == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("deleting everything gives exactly one") {
  WerBreakdown b = wer("en to tre fire", "");
  CHECK(b.deletions == 4);
  CHECK(b.wer() == 1.0);
}

TEST_CASE("normalization folds the texts together") {
  CHECK(wer("Hei, Verden!", "hei verden").wer() == 0.0);
  // Without normalization the punctuation stays and costs substitutions.
  CHECK(wer("Hei, Verden!", "hei verden", NormalizationConfig::none()).wer() > 0.0);
}

TEST_CASE("empty reference is an error, not a zero division") {
  CHECK_THROWS_AS(wer("", "hei"), EvalError);
  CHECK_THROWS_AS(wer("...", "hei"), EvalError);  // normalizes to nothing
}

TEST_CASE("wer is invariant under pre-normalized input") {
  const NormalizationConfig light = NormalizationConfig::light();
  const char* pairs[][2] = {{"Hei, Verden!", "hei verden"},
                            {"Det-går bra», sa hun.", "det gaar bra sa han"},
                            {"JA!", "ja ja ja"}};
  for (const auto& p : pairs) {
    WerBreakdown direct = wer(p[0], p[1], light);
    WerBreakdown pre = wer(normalize(p[0], light), normalize(p[1], light),
                           NormalizationConfig::none());
    CHECK(direct == pre);
  }
}

TEST_CASE("breakdown identity ref_len = matches + S + D") {
  std::mt19937_64 rng(11);
  const auto random_text = [&](int max_words) {
    std::string t;
    int n = 1 + static_cast<int>(rng() % max_words);
    for (int i = 0; i < n; ++i) {
      if (!t.empty()) t += ' ';
      t += "w" + std::to_string(rng() % 5);
    }
    return t;
  };
  for (int i = 0; i < 200; ++i) {
    std::string ref = random_text(12);
    std::string hyp = rng() % 8 == 0 ? "" : random_text(12);
    WerBreakdown b = wer(ref, hyp);
    CHECK(b.ref_len == b.matches + b.substitutions + b.deletions);
    CHECK(b.substitutions + b.deletions + b.insertions >= 0);
  }
}

TEST_CASE("pooled aggregation sums counts, not rates") {
  std::vector<ManifestRecord> records(2);
  for (int i = 0; i < 2; ++i) {
    ManifestRecord& rec = records[i];
    rec.segment.id = "s" + std::to_string(i);
    rec.segment.audio_ref = "a";
    rec.segment.start_ms = 0;
    rec.segment.end_ms = 1000;
    rec.segment.source = SourceTag(SourceTag::Nst);
    rec.segment.language = Language::Bokmaal;
    // Ten reference words, one substitution each.
    rec.segment.text = "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9";
    Prediction p;
    p.model_id = "m";
    p.text = "w0 w1 w2 w3 w4 w5 w6 w7 w8 xx";
    rec.predictions.push_back(std::move(p));
  }
  EvalReport report = evaluate_manifest(records, "m", NormalizationConfig::light());
  REQUIRE(report.groups.size() == 1);
  const GroupAggregate& agg = report.groups.begin()->second;
  CHECK(agg.totals.ref_len == 20);
  CHECK(agg.totals.substitutions == 2);
  CHECK(agg.totals.wer() == Catch::Approx(0.1));
  CHECK(agg.segments == 2);
  CHECK(agg.skipped == 0);
}

TEST_CASE("missing predictions are skipped and surfaced") {
  std::vector<ManifestRecord> records(2);
  for (int i = 0; i < 2; ++i) {
    records[i].segment.id = "s" + std::to_string(i);
    records[i].segment.audio_ref = "a";
    records[i].segment.start_ms = 0;
    records[i].segment.end_ms = 1000;
    records[i].segment.source = SourceTag(SourceTag::Nst);
    records[i].segment.language = Language::Bokmaal;
    records[i].segment.text = "hei verden";
  }
  Prediction p;
  p.model_id = "m";
  p.text = "hei verden";
  records[0].predictions.push_back(p);
  EvalReport report = evaluate_manifest(records, "m", NormalizationConfig::light());
  const GroupAggregate& agg = report.groups.begin()->second;
  CHECK(agg.segments == 1);
  CHECK(agg.skipped == 1);
  CHECK(agg.totals.ref_len == 2);
}

TEST_CASE("single segment aggregate equals its own breakdown") {
  ManifestRecord rec;
  rec.segment.id = "s";
  rec.segment.audio_ref = "a";
  rec.segment.start_ms = 0;
  rec.segment.end_ms = 1000;
  rec.segment.source = SourceTag(SourceTag::AudioBooks);
  rec.segment.language = Language::Nynorsk;
  rec.segment.text = "eit to tre";
  Prediction p;
  p.model_id = "m";
  p.text = "eit to";
  rec.predictions.push_back(p);
  EvalReport report = evaluate_manifest({rec}, "m", NormalizationConfig::light());
  const GroupAggregate& agg = report.groups.begin()->second;
  CHECK(agg.totals == wer("eit to tre", "eit to"));
}

TEST_CASE("pooled wer equals sentinel-joined concatenation wer") {
  // Join per-segment texts with unique sentinels shared by ref and hyp; every
  // sentinel matches, so the concatenated alignment decomposes per segment.
  const char* refs[] = {"a b c", "d e", "f g h i"};
  const char* hyps[] = {"a x c", "d e e", "f h i"};
  WerBreakdown pooled;
  std::string big_ref, big_hyp;
  for (int i = 0; i < 3; ++i) {
    pooled.merge(wer(refs[i], hyps[i]));
    std::string sentinel = " sentinel" + std::to_string(i) + " ";
    big_ref += refs[i] + sentinel;
    big_hyp += hyps[i] + sentinel;
  }
  WerBreakdown concat = wer(big_ref, big_hyp);
  CHECK(concat.substitutions == pooled.substitutions);
  CHECK(concat.deletions == pooled.deletions);
  CHECK(concat.insertions == pooled.insertions);
  // Minus the three sentinel matches, the reference length agrees too.
  CHECK(concat.ref_len - 3 == pooled.ref_len);
}

TEST_CASE("percent rendering") {
  CHECK(render_percent(0.764) == "76.4");
  CHECK(render_percent(0.104) == "10.4");
  CHECK(render_percent(1.23) == ">100");
  CHECK(render_percent(1.0) == "100.0");
  CHECK(render_percent(0.0) == "0.0");
  CHECK(render_percent(0.066) == "6.6");
}

namespace {

EvalReport fixture_report(std::string model, double wer_fraction) {
  // Fabricated counts with an exact ratio: errors / 1000.
  EvalReport r;
  r.model_id = std::move(model);
  GroupAggregate agg;
  agg.totals.ref_len = 1000;
  agg.totals.substitutions = static_cast<int64_t>(wer_fraction * 1000 + 0.5);
  agg.totals.matches = agg.totals.ref_len - agg.totals.substitutions;
  agg.segments = 10;
  r.groups[{"fleurs", "nb"}] = agg;
  return r;
}

}  // namespace

TEST_CASE("comparison tables render models against datasets") {
  std::vector<EvalReport> reports{fixture_report("tiny", 0.764),
                                  fixture_report("large", 0.104)};
  // One model knows an extra dataset; others render the placeholder.
  GroupAggregate extra;
  extra.totals.ref_len = 100;
  extra.totals.substitutions = 150;  // above 100%
  reports[1].groups[{"cv", "nn"}] = extra;

  ComparisonTable by_size = comparison_report(reports, ReportLayout::BySize);
  CHECK(by_size.text.find("76.4") != std::string::npos);
  CHECK(by_size.text.find("10.4") != std::string::npos);
  CHECK(by_size.text.find(">100") != std::string::npos);
  CHECK(by_size.text.find("—") != std::string::npos);  // placeholder
  CHECK(by_size.csv.find("model,cv/nn,fleurs/nb") == 0);
  CHECK(by_size.csv.find("tiny,—,76.4") != std::string::npos);
  CHECK(by_size.csv.find("large,>100,10.4") != std::string::npos);

  ComparisonTable by_dataset = comparison_report(reports, ReportLayout::ByDataset);
  CHECK(by_dataset.csv.find("dataset,tiny,large") == 0);
  CHECK(by_dataset.csv.find("fleurs/nb,76.4,10.4") != std::string::npos);
}

TEST_CASE("eval report json round trip") {
  EvalReport r = fixture_report("m", 0.2);
  r.groups[{"fleurs", "nb"}].skipped = 3;
  EvalReport back = eval_report_from_json(eval_report_to_json(r));
  CHECK(back.model_id == r.model_id);
  REQUIRE(back.groups.size() == 1);
  const GroupAggregate& a = back.groups.at({"fleurs", "nb"});
  const GroupAggregate& b = r.groups.at({"fleurs", "nb"});
  CHECK(a.totals == b.totals);
  CHECK(a.segments == b.segments);
  CHECK(a.skipped == b.skipped);
}
