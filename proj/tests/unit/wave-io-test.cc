// tests/unit/wave-io-test.cc

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

#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "mixeval/error.h"
#include "mixeval/wave-io.h"
#include "test-util.h"

using namespace mixeval;
using namespace mixeval::testing;

namespace {

// Hand-built SPHERE file; byte_format "01" is little endian, "10" big.
std::string Sphere(const std::vector<std::int16_t> &pcm, const std::string &order,
                   long declared_count, int rate = 16000) {
  std::string h = "NIST_1A\n   1024\n";
  h += "sample_count -i " + std::to_string(declared_count) + "\n";
  h += "sample_rate -i " + std::to_string(rate) + "\n";
  h += "channel_count -i 1\nsample_n_bytes -i 2\n";
  h += "sample_byte_format -s2 " + order + "\n";
  h += "sample_coding -s3 pcm\nend_head\n";
  h.resize(1024, ' ');
  for (std::int16_t v : pcm) {
    const auto u = static_cast<std::uint16_t>(v);
    const char lo = static_cast<char>(u & 0xff), hi = static_cast<char>(u >> 8);
    if (order == "01") {
      h += lo;
      h += hi;
    } else {
      h += hi;
      h += lo;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("sphere little and big endian decode to the same samples") {
  TempDir tmp;
  const std::vector<std::int16_t> pcm = {0, 1, -1, 32767, -32768, 1234, -4321};
  for (const std::string order : {"01", "10"}) {
    WriteFile(tmp / ("a" + order + ".wav"), Sphere(pcm, order, pcm.size()));
    Waveform w = LoadAudio(tmp / ("a" + order + ".wav"));
    REQUIRE(w.size() == pcm.size());
    CHECK(w.sample_rate == 16000);
    for (std::size_t i = 0; i < pcm.size(); ++i)
      CHECK(w.samples[i] == pcm[i] / 32768.0);
  }
}

TEST_CASE("sphere probe reports header values") {
  TempDir tmp;
  WriteFile(tmp / "a.wav", Sphere({1, 2, 3}, "01", 3, 8000));
  AudioInfo info = ProbeAudio(tmp / "a.wav");
  CHECK(info.sample_rate == 8000);
  CHECK(info.num_samples == 3);
}

TEST_CASE("truncated sphere payload is a corrupt file") {
  TempDir tmp;
  WriteFile(tmp / "t.wav", Sphere({1, 2, 3}, "01", 10));
  CHECK_THROWS_AS(LoadAudio(tmp / "t.wav"), CorruptFileError);
  CHECK_THROWS_AS(ProbeAudio(tmp / "t.wav"), CorruptFileError);
}

TEST_CASE("unknown magic is a format error") {
  TempDir tmp;
  WriteFile(tmp / "x.wav", std::string("OggS") + std::string(100, '\0'));
  CHECK_THROWS_AS(LoadAudio(tmp / "x.wav"), FormatError);
  WriteFile(tmp / "e.wav", "");
  CHECK_THROWS_AS(LoadAudio(tmp / "e.wav"), FormatError);
}

TEST_CASE("riff round trip is within half a quantization step") {
  TempDir tmp;
  Waveform w = RandomWaveform(3, 500, 900);
  for (auto &s : w.samples) s = std::max(-0.99, std::min(0.99, s * 0.3));
  WriteWav(tmp / "r.wav", w);
  Waveform back = LoadAudio(tmp / "r.wav");
  REQUIRE(back.size() == w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(back.samples[i] - w.samples[i]) <= 0.5 / 32768.0 + 1e-15);
  CHECK(ProbeAudio(tmp / "r.wav").num_samples ==
        static_cast<std::int64_t>(w.size()));
}

TEST_CASE("riff export clamps out-of-range samples") {
  TempDir tmp;
  Waveform w;
  w.samples = {1.5, -1.5, 1.0, -1.0};
  WriteWav(tmp / "c.wav", w);
  Waveform back = LoadAudio(tmp / "c.wav");
  CHECK(back.samples[0] == 32767 / 32768.0);
  CHECK(back.samples[1] == -1.0);
  CHECK(back.samples[2] == 32767 / 32768.0);
  CHECK(back.samples[3] == -1.0);
}

TEST_CASE("riff header carries the sample rate") {
  TempDir tmp;
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {0.0, 0.5};
  WriteWav(tmp / "s.wav", w);
  const std::string bytes = ReadFile(tmp / "s.wav");
  REQUIRE(bytes.size() == 44 + 4);
  CHECK(bytes.substr(0, 4) == "RIFF");
  CHECK(bytes.substr(8, 4) == "WAVE");
  CHECK(LoadAudio(tmp / "s.wav").sample_rate == 8000);
}

TEST_CASE("truncated riff data is a corrupt file") {
  TempDir tmp;
  Waveform w;
  w.samples.assign(100, 0.25);
  WriteWav(tmp / "s.wav", w);
  std::string bytes = ReadFile(tmp / "s.wav");
  bytes.resize(bytes.size() - 20);
  WriteFile(tmp / "s.wav", bytes);
  CHECK_THROWS_AS(LoadAudio(tmp / "s.wav"), CorruptFileError);
}

TEST_CASE("sphere writer output loads back") {
  TempDir tmp;
  Waveform w;
  w.samples = {0.0, 0.25, -0.5};
  WriteSphere(tmp / "s.sph", w);
  CHECK(LoadAudio(tmp / "s.sph").samples == w.samples);
}

TEST_CASE("shipped corpus files are readable sphere") {
  Waveform w = LoadAudio(ShippedCorpus() / "TEST/DR1/FAKS0/SA1.WAV");
  CHECK(w.sample_rate == 16000);
  CHECK(w.size() > 16000);
}
