// tests/unit/scoring-test.cc

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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mixeval/error.h"
#include "mixeval/scoring.h"
#include "oracles.h"

using namespace mixeval;
using namespace mixeval::testing;

namespace {

PhoneSeq Split(const std::string &s) {
  std::istringstream is(s);
  PhoneSeq out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

}  // namespace

TEST_CASE("edit distance on hand-worked cases") {
  auto c = EditDistance(Split("a b c"), Split("a b c"));
  CHECK(c.Errors() == 0);
  CHECK(c.ref_length == 3);
  c = EditDistance(Split("a b c"), Split("a x c"));
  CHECK(c == AlignmentCounts{1, 0, 0, 3});
  c = EditDistance(Split("a b c"), Split("a c"));
  CHECK(c == AlignmentCounts{0, 1, 0, 3});
  c = EditDistance(Split("a b"), Split("a b b"));
  CHECK(c == AlignmentCounts{0, 0, 1, 2});
  c = EditDistance(Split("a b c"), {});
  CHECK(c == AlignmentCounts{0, 3, 0, 3});
  // Substitution rather than a deletion plus an insertion.
  c = EditDistance(Split("a"), Split("b"));
  CHECK(c == AlignmentCounts{1, 0, 0, 1});
  CHECK_THROWS_AS(EditDistance({}, Split("a")), ArgumentError);
}

TEST_CASE("edit distance matches exhaustive search on random pairs") {
  std::mt19937 rng(5);
  const std::vector<std::string> alpha = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 3000; ++trial) {
    PhoneSeq r(1 + rng() % 6), h(rng() % 7);
    for (auto &s : r) s = alpha[rng() % alpha.size()];
    for (auto &s : h) s = alpha[rng() % alpha.size()];
    auto c = EditDistance(r, h);
    auto b = BruteForceAlign(r, h);
    REQUIRE(c.Errors() == b.cost);
    REQUIRE(c.substitutions == b.substitutions);
    REQUIRE(c.deletions - c.insertions ==
            static_cast<long>(r.size()) - static_cast<long>(h.size()));
  }
}

TEST_CASE("pooled and averaged per") {
  std::vector<AlignmentCounts> counts = {{1, 0, 0, 4}, {0, 1, 1, 6}};
  CHECK(PooledPer(counts) == doctest::Approx(30.0));
  CHECK(MeanUtterancePer(counts) == doctest::Approx((25.0 + 100.0 / 3) / 2));
  CHECK_THROWS_AS(PooledPer(std::vector<AlignmentCounts>{}), ArgumentError);
  std::vector<std::pair<PhoneSeq, PhoneSeq>> pairs = {
      {Split("a b c d"), Split("a b c d")}, {Split("a b"), Split("a")}};
  CHECK(Per(pairs) == doctest::Approx(100.0 / 6));
}

TEST_CASE("mixture metrics from hand-counted trials") {
  const std::vector<std::string> ph = {"x", "y", "z"};
  std::vector<MixtureTrial> t = {
      {"x", "y", Split("x")},      {"x", "y", Split("x y")},
      {"x", "y", Split("q")},      {"y", "x", Split("y")},
      {"x", "x", Split("x")},      {"x", "x", Split("")},
      {"z", "z", Split("z z z")}};
  MixtureMetrics m = ComputeMixtureMetrics(ph, t);
  CHECK(m.total_trials == 7);
  // Neither label: "q" and "".
  CHECK(m.error_rate == doctest::Approx(200.0 / 7));
  CHECK(m.avg_length == doctest::Approx(9.0 / 7));
  // Pair {x, y}: 4 trials; x in 2, y in 2.
  CHECK(m.matrix.Rate(0, 1) == doctest::Approx(50.0));
  CHECK(m.matrix.Rate(1, 0) == doctest::Approx(50.0));
  CHECK(m.matrix.Trials(0, 1) == 4);
  CHECK(m.matrix.Rate(0, 0) == doctest::Approx(50.0));
  CHECK(m.matrix.Rate(2, 2) == doctest::Approx(100.0));
  CHECK(m.matrix.Missing(0, 2));
  CHECK(std::isnan(m.matrix.Rate(1, 2)));
  CHECK_FALSE(m.matrix.Complete());
  CHECK(m.matrix.RowMean(0) == doctest::Approx(50.0));
  std::vector<MixtureTrial> bad = {{"x", "w", Split("x")}};
  CHECK_THROWS_AS(ComputeMixtureMetrics(ph, bad), ArgumentError);
}

TEST_CASE("orientation against the brute-force checker") {
  std::mt19937 rng(9);
  std::vector<std::string> ph;
  for (int i = 0; i < 10; ++i) ph.push_back("p" + std::to_string(i));
  for (int trial = 0; trial < 200; ++trial) {
    PredictionRateMatrix m(ph);
    std::vector<std::vector<double>> rate(10, std::vector<double>(10));
    std::map<std::string, double> acc;
    for (int i = 0; i < 10; ++i) {
      // Coarse values so ties occur.
      acc[ph[i]] = (rng() % 5) * 0.2;
      for (int j = 0; j < 10; ++j) {
        rate[i][j] = (rng() % 6) * 20.0;
        m.Set(i, j, rate[i][j], 10);
      }
    }
    auto got = AccuracyOriented(m, acc);
    auto want = BruteForceOrientation(ph, rate, acc);
    REQUIRE(got.oriented == want.first);
    REQUIRE(got.total == 45);
    REQUIRE(want.second == 45);
  }
}

TEST_CASE("ties are never oriented") {
  std::vector<std::string> ph = {"a", "b"};
  PredictionRateMatrix m(ph);
  m.Set(0, 1, 60, 1);
  m.Set(1, 0, 40, 1);
  m.Set(0, 0, 100, 1);
  m.Set(1, 1, 100, 1);
  CHECK(AccuracyOriented(m, {{"a", 0.9}, {"b", 0.5}}).oriented == 1);
  CHECK(AccuracyOriented(m, {{"a", 0.5}, {"b", 0.9}}).oriented == 0);
  CHECK(AccuracyOriented(m, {{"a", 0.5}, {"b", 0.5}}).oriented == 0);
  m.Set(1, 0, 60, 1);
  CHECK(AccuracyOriented(m, {{"a", 0.9}, {"b", 0.5}}).oriented == 0);
  CHECK_THROWS_AS(AccuracyOriented(m, {{"a", 0.9}}), ArgumentError);
}

TEST_CASE("csv writers") {
  std::ostringstream os;
  std::vector<std::string> ids = {"u1"};
  std::vector<AlignmentCounts> counts = {{1, 1, 0, 4}};
  WriteAlignmentCsv(os, ids, counts);
  CHECK(os.str() ==
        "id,ref_length,substitutions,deletions,insertions,errors,per\n"
        "u1,4,1,1,0,2,50.0000\n");
  PredictionRateMatrix m({"a", "b"});
  m.Set(0, 0, 100, 3);
  m.Set(0, 1, 12.346, 3);
  std::ostringstream ms;
  WriteMatrixCsv(ms, m);
  CHECK(ms.str() == "phoneme,a,b\na,100.00,12.35\nb,NA,NA\n");
}
