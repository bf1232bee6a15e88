// tests/unit/signal-test.cc

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
#include <numbers>

#include "doctest.h"
#include "mixeval/corpus.h"
#include "mixeval/error.h"
#include "mixeval/signal.h"
#include "test-util.h"

using namespace mixeval;
using namespace mixeval::testing;

namespace {

Waveform Sine(double amp, double hz, std::size_t n) {
  Waveform w;
  for (std::size_t i = 0; i < n; ++i)
    w.samples.push_back(amp * std::sin(2 * std::numbers::pi * hz * i / 16000.0));
  return w;
}

double Db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace

TEST_CASE("power of a sinusoid over whole periods is half the squared amplitude") {
  // 100 Hz at 16 kHz: 160 samples per period.
  for (double a : {0.1, 0.5, 1.0})
    CHECK(SignalPower(Sine(a, 100, 1600)) == doctest::Approx(a * a / 2).epsilon(1e-12));
  Waveform dc;
  dc.samples.assign(10, -0.3);
  CHECK(SignalPower(dc) == doctest::Approx(0.09));
  CHECK_THROWS_AS(SignalPower(Waveform{}), ArgumentError);
}

TEST_CASE("power over spans uses only the covered samples") {
  Waveform w;
  w.samples = {1, 1, 3, 3, 0, 0};
  std::vector<std::pair<std::int64_t, std::int64_t>> spans = {{2, 4}};
  CHECK(SignalPower(w, spans) == doctest::Approx(9.0));
  spans = {{0, 2}, {2, 4}};
  CHECK(SignalPower(w, spans) == doctest::Approx(5.0));
}

TEST_CASE("default grid is 0 to 30 in steps of 3") {
  auto g = DefaultTirGrid();
  REQUIRE(g.size() == 11);
  for (int i = 0; i < 11; ++i) CHECK(g[i].db == 3.0 * i);
  CHECK_THROWS_AS((void)TirSpec(std::nan("")), ArgumentError);
  CHECK_THROWS_AS((void)TirSpec(INFINITY), ArgumentError);
}

TEST_CASE("gain realizes the requested ratio") {
  for (double tir : {-6.0, 0.0, 3.0, 17.5, 30.0}) {
    double g = GainForTir(0.2, 0.05, TirSpec(tir));
    CHECK(Db(0.2 / (g * g * 0.05)) == doctest::Approx(tir).epsilon(1e-12));
  }
  CHECK(GainForTir(1.0, 1.0, TirSpec(0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(GainForTir(1.0, 0.0, TirSpec(0)), DegenerateSignalError);
  CHECK_THROWS_AS(GainForTir(0.0, 1.0, TirSpec(0)), DegenerateSignalError);
}

TEST_CASE("mixture is target plus scaled interference, target length") {
  Waveform t = RandomWaveform(1, 1000, 1000);
  Waveform longer = RandomWaveform(2, 1500, 1500);
  Waveform shorter = RandomWaveform(3, 600, 600);
  for (const Waveform *i : {&longer, &shorter}) {
    MixRecord r = MixAtTir(t, *i, TirSpec(6));
    REQUIRE(r.mixed.size() == t.size());
    const double g = std::sqrt(SignalPower(t) / (SignalPower(*i) * std::pow(10.0, 0.6)));
    CHECK(r.gain == doctest::Approx(g).epsilon(1e-12));
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double iv = k < i->size() ? i->samples[k] : 0.0;
      REQUIRE(r.mixed.samples[k] == doctest::Approx(t.samples[k] + g * iv).epsilon(1e-12));
    }
    CHECK(r.tir.db == 6.0);
  }
}

TEST_CASE("max length policy pads the shorter input") {
  Waveform a = RandomWaveform(4, 300, 300);
  Waveform b = RandomWaveform(5, 700, 700);
  MixRecord r = MixAtTir(a, b, TirSpec(0), LengthPolicy::kMaxLength);
  CHECK(r.mixed.size() == 700);
  MixRecord s = MixSegments(b, a);
  CHECK(s.mixed.size() == 700);
  CHECK(s.tir.db == 0.0);
  // Unpadded powers: b's power equals a's scaled power.
  CHECK(SignalPower(b) == doctest::Approx(s.gain * s.gain * SignalPower(a)));
}

TEST_CASE("explicit powers override measurement") {
  Waveform a = RandomWaveform(6, 400, 400), b = RandomWaveform(7, 400, 400);
  MixRecord r = MixAtTir(a, b, TirSpec(10), LengthPolicy::kTargetLength, {2.0, 0.5});
  CHECK(r.gain == doctest::Approx(std::sqrt(2.0 / (0.5 * 10.0))));
}

TEST_CASE("silent interference is degenerate") {
  Waveform a = RandomWaveform(8, 100, 100), z;
  z.samples.assign(100, 0.0);
  CHECK_THROWS_AS(MixAtTir(a, z, TirSpec(0)), DegenerateSignalError);
}

TEST_CASE("peak normalization only when above full scale") {
  Waveform w;
  w.samples = {0.5, -0.9};
  CHECK(PeakNormalize(&w) == 1.0);
  CHECK(w.samples[1] == -0.9);
  w.samples = {0.5, -2.0};
  CHECK(PeakNormalize(&w) == doctest::Approx(0.5));
  CHECK(w.samples[1] == doctest::Approx(-1.0));
}

TEST_CASE("segments follow the alignment and skip silence") {
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  const UtteranceRecord *u = c.Find("MDAB0_SA2");
  REQUIRE(u);
  const Waveform audio = u->LoadWaveform();
  auto segs = ExtractSegments(*u, audio, CollapseMap::Default());
  std::vector<const PhoneEntry *> spoken;
  for (const auto &e : u->alignment.entries)
    if (CollapseMap::Default().Collapse(e.label)) spoken.push_back(&e);
  REQUIRE(segs.size() == spoken.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].label == spoken[i]->label);
    CHECK(segs[i].begin == spoken[i]->begin);
    CHECK(segs[i].audio.size() == std::size_t(spoken[i]->end - spoken[i]->begin));
    CHECK(segs[i].audio.samples.front() == audio.samples[spoken[i]->begin]);
    CHECK(segs[i].source_utterance == "MDAB0_SA2");
  }
  CHECK(segs[0].Id() == "MDAB0_SA2_" + std::string(6 - std::to_string(segs[0].begin).size(), '0') +
                            std::to_string(segs[0].begin));
  CHECK(ExtractSegments(*u, CollapseMap::Default()).size() == segs.size());
}
