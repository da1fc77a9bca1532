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

#include "forge/toml.hpp"

using forge::ConfigError;
using forge::json;

TEST_CASE("scalars, strings and comments") {
  json j = forge::toml::parse(
      "# header comment\n"
      "title = \"forge\"  # trailing comment\n"
      "count = 42\n"
      "big = 1_000_000\n"
      "ratio = 0.8\n"
      "negative = -3\n"
      "sci = 1e-6\n"
      "on = true\n"
      "off = false\n"
      "lit = 'no # comment in here'\n"
      "esc = \"a\\tb\\\"c\\\"\"\n");
  CHECK(j["title"] == "forge");
  CHECK(j["count"] == 42);
  CHECK(j["big"] == 1000000);
  CHECK(j["ratio"] == 0.8);
  CHECK(j["negative"] == -3);
  CHECK(j["sci"] == 1e-6);
  CHECK(j["on"] == true);
  CHECK(j["off"] == false);
  CHECK(j["lit"] == "no # comment in here");
  CHECK(j["esc"] == "a\tb\"c\"");
}

TEST_CASE("arrays") {
  json j = forge::toml::parse(
      "strings = [\"a\", \"b\"]\n"
      "numbers = [1, 2, 3,]\n"
      "empty = []\n"
      "nested = [[1, 2], [3]]\n");
  CHECK(j["strings"] == json::parse(R"(["a","b"])"));
  CHECK(j["numbers"] == json::parse("[1,2,3]"));
  CHECK(j["empty"] == json::array());
  CHECK(j["nested"] == json::parse("[[1,2],[3]]"));
}

TEST_CASE("tables and dotted headers") {
  json j = forge::toml::parse(
      "root = 1\n"
      "[a]\n"
      "x = 1\n"
      "[a.b]\n"
      "y = 2\n"
      "[other]\n"
      "z = \"s\"\n");
  CHECK(j["root"] == 1);
  CHECK(j["a"]["x"] == 1);
  CHECK(j["a"]["b"]["y"] == 2);
  CHECK(j["other"]["z"] == "s");
}

TEST_CASE("arrays of tables with nested option tables") {
  json j = forge::toml::parse(
      "[[stage]]\n"
      "kind = \"ingest\"\n"
      "[stage.options]\n"
      "min_gap_ms = 1000\n"
      "[[stage]]\n"
      "kind = \"stats\"\n");
  REQUIRE(j["stage"].is_array());
  REQUIRE(j["stage"].size() == 2);
  CHECK(j["stage"][0]["kind"] == "ingest");
  CHECK(j["stage"][0]["options"]["min_gap_ms"] == 1000);
  CHECK(j["stage"][1]["kind"] == "stats");
  CHECK_FALSE(j["stage"][1].contains("options"));
}

TEST_CASE("dotted keys inside a table") {
  json j = forge::toml::parse("a.b = 1\n[t]\nc.d = \"x\"\n");
  CHECK(j["a"]["b"] == 1);
  CHECK(j["t"]["c"]["d"] == "x");
}

TEST_CASE("errors carry file and line") {
  try {
    forge::toml::parse("ok = 1\nbroken line\n", "conf.toml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("conf.toml:2") != std::string::npos);
  }
  CHECK_THROWS_AS(forge::toml::parse("x = \"unterminated\n"), ConfigError);
  CHECK_THROWS_AS(forge::toml::parse("x = [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(forge::toml::parse("[unclosed\n"), ConfigError);
  CHECK_THROWS_AS(forge::toml::parse("x = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(forge::toml::parse("x = nonsense\n"), ConfigError);
}
