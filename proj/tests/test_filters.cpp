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

#include "fixture_ner.hpp"
#include "forge/filters.hpp"
#include "oracle.hpp"

using namespace forge;

namespace {

Prediction pred(std::string text, std::string model = "m1") {
  Prediction p;
  p.model_id = std::move(model);
  p.text = std::move(text);
  return p;
}

Segment seg_with_text(std::string text) {
  Segment seg;
  seg.id = "s";
  seg.audio_ref = "a";
  seg.start_ms = 0;
  seg.end_ms = 4000;
  seg.text = std::move(text);
  seg.source = SourceTag(SourceTag::NrkSubtitles);
  return seg;
}

}  // namespace

TEST_CASE("similarity basics") {
  CHECK(similarity("hello", "hello") == 1.0);
  CHECK(similarity("hello", "hallo") == 0.8);
  CHECK(similarity("a", "b") == 0.0);
  CHECK(similarity("", "") == 1.0);
  CHECK(similarity("abc", "") == 0.0);
  CHECK(similarity("Hei", "hei") == 1.0);               // case folded
  CHECK(similarity("blå", "bla") == Catch::Approx(2.0 / 3.0));  // code points
}

TEST_CASE("similarity is symmetric and agrees with the recursive oracle") {
  const std::vector<char> alphabet = {'a', 'b', 'c'};
  auto sequences = oracle::all_sequences(alphabet, 4);
  for (const auto& a : sequences) {
    for (const auto& b : sequences) {
      std::string sa(a.begin(), a.end()), sb(b.begin(), b.end());
      double got = similarity(sa, sb);
      CHECK(got == similarity(sb, sa));
      double max_len = static_cast<double>(std::max(a.size(), b.size()));
      double expect =
          max_len == 0 ? 1.0 : (max_len - oracle::plain_edit_distance(a, b)) / max_len;
      REQUIRE(got == expect);
    }
  }
}

TEST_CASE("fuzzy boundary filter") {
  FilterConfig cfg;
  SECTION("identical boundaries pass") {
    CHECK_FALSE(fuzzy_boundary_filter("hei på deg", {pred("hei på deg")}, cfg));
  }
  SECTION("both edges drift below the threshold") {
    auto v = fuzzy_boundary_filter("hei på deg", {pred("nei på dag")}, cfg);
    REQUIRE(v);
    CHECK(v->criterion == FilterCriterion::FuzzyBoundary);
    CHECK(v->detail.find("first word") != std::string::npos);
  }
  SECTION("one passing prediction suffices") {
    CHECK_FALSE(fuzzy_boundary_filter("hallo verden",
                                      {pred("hallo verden"), pred("xxx yyy")}, cfg));
    CHECK_FALSE(fuzzy_boundary_filter("hallo verden",
                                      {pred("xxx yyy"), pred("hallo verden")}, cfg));
  }
  SECTION("both ends must pass in the same prediction") {
    // first word good in p1, last word good in p2, neither passes both
    auto v = fuzzy_boundary_filter("hallo verden", {pred("hallo xxxxx"), pred("yyyyy verden")},
                                   cfg);
    CHECK(v);
  }
  SECTION("empty prediction text fails that prediction") {
    auto v = fuzzy_boundary_filter("hei", {pred("")}, cfg);
    REQUIRE(v);
    CHECK(v->detail == "no prediction words");
  }
  SECTION("threshold is inclusive") {
    cfg.fuzzy_threshold = 0.8;
    CHECK_FALSE(fuzzy_boundary_filter("hello", {pred("hallo")}, cfg));
    cfg.fuzzy_threshold = 0.81;
    CHECK(fuzzy_boundary_filter("hello", {pred("hallo")}, cfg));
  }
  SECTION("punctuation and case do not count against the boundary") {
    CHECK_FALSE(fuzzy_boundary_filter("Hei, på deg!", {pred("hei på deg")}, cfg));
  }
}

TEST_CASE("insertion filter") {
  FilterConfig cfg;
  SECTION("n-gram present somewhere passes") {
    CHECK_FALSE(insertion_filter("a b c d", {pred("a b c d e")}, cfg));
  }
  SECTION("missing target n-gram fires") {
    auto v = insertion_filter("a b c d", {pred("a b x d")}, cfg);
    REQUIRE(v);
    CHECK(v->criterion == FilterCriterion::Insertion);
    CHECK(v->detail.find("a b c d") != std::string::npos);
  }
  SECTION("short targets have no n-grams to check") {
    CHECK_FALSE(insertion_filter("a b c", {pred("x y z")}, cfg));
  }
  SECTION("any single covering prediction saves the segment") {
    CHECK_FALSE(insertion_filter("a b c d", {pred("zzz"), pred("q a b c d q")}, cfg));
  }
}

TEST_CASE("omission filter") {
  FilterConfig cfg;
  SECTION("identical predictions and target pass") {
    CHECK_FALSE(omission_filter("a b c d", {pred("a b c d"), pred("a b c d")}, cfg));
  }
  SECTION("common prediction n-gram missing from target fires") {
    auto v = omission_filter("a b d", {pred("a b c d e"), pred("a b c d f")}, cfg);
    REQUIRE(v);
    CHECK(v->criterion == FilterCriterion::Omission);
    CHECK(v->detail.find("a b c d") != std::string::npos);
  }
  SECTION("disagreeing predictions have no common n-grams") {
    CHECK_FALSE(omission_filter("irrelevant text here now",
                                {pred("p q r s t"), pred("v w x y z")}, cfg));
  }
  SECTION("single prediction degrades to that prediction's n-grams") {
    CHECK(omission_filter("a b", {pred("c d e f g")}, cfg));
  }
}

TEST_CASE("insertion and omission are duals under target/prediction swap") {
  FilterConfig cfg;
  const std::string with_extra = "w1 w2 w3 w4 extra1 extra2 extra3 extra4";
  const std::string base = "w1 w2 w3 w4";
  CHECK(insertion_filter(with_extra, {pred(base)}, cfg));
  CHECK_FALSE(omission_filter(with_extra, {pred(base)}, cfg));
  CHECK(omission_filter(base, {pred(with_extra)}, cfg));
  CHECK_FALSE(insertion_filter(base, {pred(with_extra)}, cfg));
}

TEST_CASE("adding predictions never makes things worse") {
  std::mt19937_64 rng(4242);
  FilterConfig cfg;
  const auto random_text = [&](int len) {
    std::string t;
    for (int i = 0; i < len; ++i) {
      if (!t.empty()) t += ' ';
      t += "w" + std::to_string(rng() % 6);
    }
    return t;
  };
  for (int iter = 0; iter < 300; ++iter) {
    std::string target = random_text(3 + rng() % 8);
    std::vector<Prediction> preds{pred(random_text(3 + rng() % 8)),
                                  pred(random_text(3 + rng() % 8))};
    bool fuzzy_before = !fuzzy_boundary_filter(target, preds, cfg).has_value();
    bool omission_before = !omission_filter(target, preds, cfg).has_value();
    preds.push_back(pred(random_text(3 + rng() % 8)));
    if (fuzzy_before) {
      CHECK_FALSE(fuzzy_boundary_filter(target, preds, cfg).has_value());
    }
    if (omission_before) {
      CHECK_FALSE(omission_filter(target, preds, cfg).has_value());
    }
  }
}

TEST_CASE("ner count filter") {
  FilterConfig cfg;
  std::vector<NerAnnotation> two(2), four(4), six(6);
  SECTION("rules are opt-in") {
    CHECK_FALSE(ner_count_filter(six, {}, cfg));
  }
  SECTION("absolute count") {
    cfg.ner_max_count = 5;
    CHECK_FALSE(ner_count_filter(two, {}, cfg));
    auto v = ner_count_filter(six, {}, cfg);
    REQUIRE(v);
    CHECK(v->criterion == FilterCriterion::NerCount);
  }
  SECTION("delta to the closest prediction") {
    cfg.ner_max_delta = 2;
    std::vector<std::vector<NerAnnotation>> preds{std::vector<NerAnnotation>(1)};
    auto v = ner_count_filter(four, preds, cfg);
    REQUIRE(v);  // |4-1| = 3 > 2
    preds.push_back(std::vector<NerAnnotation>(3));
    CHECK_FALSE(ner_count_filter(four, preds, cfg));  // |4-3| = 1
  }
  SECTION("delta rule without prediction annotations stays quiet") {
    cfg.ner_max_delta = 0;
    CHECK_FALSE(ner_count_filter(four, {}, cfg));
  }
}

TEST_CASE("apply_filters composes the criteria") {
  FilterConfig cfg;
  SECTION("clean segment keeps") {
    Segment seg = seg_with_text("a b c d e");
    FilterVerdict v = apply_filters(seg, {pred("a b c d e")}, {}, cfg);
    CHECK(v.keep);
    CHECK(v.violations.empty());
  }
  SECTION("boundary and insertion fail together") {
    // First word drifts and the target carries a 4-gram the short prediction
    // cannot contain; the prediction has no 4-grams, so omission stays quiet.
    Segment seg = seg_with_text("hei b c d");
    FilterVerdict v = apply_filters(seg, {pred("nei b c")}, {}, cfg);
    CHECK_FALSE(v.keep);
    REQUIRE(v.violations.size() == 2);
    CHECK(v.violations[0].criterion == FilterCriterion::FuzzyBoundary);
    CHECK(v.violations[1].criterion == FilterCriterion::Insertion);
  }
  SECTION("no-speech segments bypass the text criteria") {
    Segment seg = seg_with_text("");
    seg.source = SourceTag(SourceTag::NrkNoCaption);
    FilterVerdict v = apply_filters(seg, {}, {}, cfg);
    CHECK(v.keep);
  }
  SECTION("missing predictions delete conservatively") {
    Segment seg = seg_with_text("noe tekst her");
    FilterVerdict v = apply_filters(seg, {}, {}, cfg);
    CHECK_FALSE(v.keep);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].criterion == FilterCriterion::NoPredictions);
    CHECK(v.violations[0].detail == "no predictions available");
  }
  SECTION("verdicts are deterministic") {
    Segment seg = seg_with_text("hei b c d e f");
    std::vector<Prediction> preds{pred("nei b c x e f")};
    FilterVerdict v1 = apply_filters(seg, preds, {}, cfg);
    FilterVerdict v2 = apply_filters(seg, preds, {}, cfg);
    REQUIRE(v1.keep == v2.keep);
    REQUIRE(v1.violations.size() == v2.violations.size());
    for (size_t i = 0; i < v1.violations.size(); ++i) {
      CHECK(v1.violations[i].criterion == v2.violations[i].criterion);
      CHECK(v1.violations[i].detail == v2.violations[i].detail);
    }
  }
  SECTION("keep is true exactly when violations are empty") {
    Segment seg = seg_with_text("a b c d");
    for (const char* hyp : {"a b c d", "a b x d", "nei b c d"}) {
      FilterVerdict v = apply_filters(seg, {pred(hyp)}, {}, cfg);
      CHECK(v.keep == v.violations.empty());
    }
  }
}

TEST_CASE("heuristic tagger feeds the ner rule through apply_filters") {
  FilterConfig cfg;
  cfg.ner_max_count = 1;
  Segment seg = seg_with_text("vi møtte Kari og Ola og Per i dag");
  NerBundle ner;
  ner.target = fixture::heuristic_ner(seg.text);
  REQUIRE(ner.target.size() == 3);
  FilterVerdict v = apply_filters(
      seg, {pred("vi møtte kari og ola og per i dag")}, ner, cfg);
  CHECK_FALSE(v.keep);
  REQUIRE(v.violations.size() == 1);
  CHECK(v.violations[0].criterion == FilterCriterion::NerCount);
}

TEST_CASE("filter config parses from json with range checks") {
  json j = json::parse(R"({"filters":{"fuzzy_threshold":0.9,"ngram_min_len":5,"ner_max_count":4}})");
  FilterConfig cfg = filter_config_from_json(j);
  CHECK(cfg.fuzzy_threshold == 0.9);
  CHECK(cfg.ngram_min_len == 5);
  REQUIRE(cfg.ner_max_count);
  CHECK(*cfg.ner_max_count == 4);
  CHECK_FALSE(cfg.ner_max_delta);
  CHECK_THROWS_AS(filter_config_from_json(json::parse(R"({"fuzzy_threshold":1.5})")),
                  ConfigError);
  CHECK_THROWS_AS(filter_config_from_json(json::parse(R"({"ngram_min_len":1})")),
                  ConfigError);
}
