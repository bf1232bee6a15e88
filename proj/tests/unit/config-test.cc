// tests/unit/config-test.cc

// Copyright 2026  mixeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "json.hpp"
#include "mixeval/config.h"
#include "mixeval/error.h"
#include "test-util.h"

using namespace mixeval;
using namespace mixeval::testing;
using nlohmann::json;

TEST_CASE("empty config gives the defaults") {
  RunConfig c = ParseConfig(json::object());
  CHECK(c.output_root == "mixeval-out");
  CHECK(c.voice.sets_per_cell == 33);
  CHECK(c.voice.tir_grid.size() == 11);
  CHECK(c.phoneme.mixings_per_pair == 2000);
  CHECK(c.phoneme.phoneme_list.size() == 10);
  CHECK(c.backend.mode == "echo");
  CHECK(c.workers == 1);
  c.Validate();
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(ParseConfig(json{{"sead", 1}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"voice", {{"set_per_cell", 1}}}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"features", {{"hop_length", 1}}}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"backend", {{"cmd", "x"}}}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"phoneme", {{"mixing", 1}}}}), ArgumentError);
}

TEST_CASE("bad values are rejected") {
  CHECK_THROWS_AS(ParseConfig(json{{"seed", "x"}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"voice", 3}}), ArgumentError);
  CHECK_THROWS_AS(ParseConfig(json{{"phoneme", {{"containment", "both"}}}}),
                  ArgumentError);
  RunConfig c;
  c.workers = 0;
  CHECK_THROWS_AS(c.Validate(), ArgumentError);
}

TEST_CASE("config round trips") {
  json j = {{"seed", 42},
            {"workers", 3},
            {"include_sa", false},
            {"voice", {{"combos", {"m-f", "f-f"}}, {"tir_grid", {0, 7.5}}, {"sets_per_cell", 2}}},
            {"phoneme", {{"phoneme_list", {"ow", "ey"}}, {"mixings_per_pair", 5}}},
            {"backend", {{"mode", "corrupt"}, {"sub", 0.1}, {"del", 0.05}, {"ins", 0.02}}}};
  RunConfig c = ParseConfig(j);
  CHECK(c.seed == 42);
  CHECK_FALSE(c.include_sa);
  CHECK(c.voice.combos.size() == 2);
  CHECK(c.voice.tir_grid[1].db == 7.5);
  CHECK(c.backend.rates.sub == doctest::Approx(0.1));
  RunConfig back = ParseConfig(json::parse(ConfigToJson(c).dump()));
  CHECK(ConfigToJson(back).dump() == ConfigToJson(c).dump());
}

TEST_CASE("seed propagation") {
  RunConfig c = ParseConfig(json{{"seed", 9}});
  c.PropagateSeed();
  CHECK(c.voice.master_seed == 9);
  CHECK(c.phoneme.master_seed == 9);
  CHECK(c.backend.seed == 9);
  RunConfig d = ParseConfig(json{{"seed", 9}, {"backend", {{"seed", 4}}}});
  d.PropagateSeed();
  CHECK(d.voice.master_seed == 9);
  CHECK(d.backend.seed == 4);
}

TEST_CASE("config files allow comments and report parse errors") {
  TempDir tmp;
  WriteFile(tmp / "a.json", "{\n  // master seed\n  \"seed\": 5\n}\n");
  CHECK(LoadConfig(tmp / "a.json").seed == 5);
  WriteFile(tmp / "b.json", "{\"seed\": ");
  CHECK_THROWS_AS(LoadConfig(tmp / "b.json"), ParseError);
  CHECK_THROWS_AS(LoadConfig(tmp / "missing.json"), IoError);
}

TEST_CASE("corpus root resolution") {
  RunConfig c;
  c.corpus_root = "/x/timit";
  CHECK(c.ResolveCorpusRoot() == "/x/timit");
}
