// src/signal.cc

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

#include "mixeval/signal.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mixeval/error.h"

namespace mixeval {

TirSpec::TirSpec(double value) : db(value) {
  if (!std::isfinite(value))
    throw ArgumentError(Msg("TIR must be finite, got ", value));
}

std::vector<TirSpec> DefaultTirGrid() {
  std::vector<TirSpec> grid;
  for (int db = 0; db <= 30; db += 3) grid.emplace_back(db);
  return grid;
}

double SignalPower(std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("power of an empty signal");
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

double SignalPower(const Waveform &w) { return SignalPower(w.samples); }

double SignalPower(
    const Waveform &w,
    std::span<const std::pair<std::int64_t, std::int64_t>> spans) {
  double acc = 0.0;
  std::int64_t n = 0;
  const auto size = static_cast<std::int64_t>(w.size());
  for (auto [b, e] : spans) {
    if (b < 0 || e > size || b > e)
      throw ArgumentError(Msg("span [", b, ", ", e, ") outside signal"));
    for (std::int64_t i = b; i < e; ++i) acc += w.samples[i] * w.samples[i];
    n += e - b;
  }
  if (n == 0) throw ArgumentError("power over an empty span set");
  return acc / static_cast<double>(n);
}

double GainForTir(double p_target, double p_interf, TirSpec tir) {
  if (!(p_target > 0.0))
    throw DegenerateSignalError("target power is zero; cannot realize a TIR");
  if (!(p_interf > 0.0))
    throw DegenerateSignalError(
        "interference power is zero; cannot realize a TIR");
  return std::sqrt(p_target / (p_interf * std::pow(10.0, tir.db / 10.0)));
}

MixRecord MixAtTir(const Waveform &target, const Waveform &interference,
                   TirSpec tir, LengthPolicy policy, MixPowers powers) {
  if (target.sample_rate != interference.sample_rate)
    throw ArgumentError(Msg("sample-rate mismatch: ", target.sample_rate,
                            " vs ", interference.sample_rate));
  if (target.empty() || interference.empty())
    throw DegenerateSignalError("cannot mix an empty signal");
  const double pt = powers.target >= 0 ? powers.target : SignalPower(target);
  const double pi =
      powers.interference >= 0 ? powers.interference : SignalPower(interference);

  MixRecord rec;
  rec.tir = tir;
  rec.gain = GainForTir(pt, pi, tir);
  std::size_t n = target.size();
  if (policy == LengthPolicy::kMaxLength) n = std::max(n, interference.size());
  rec.mixed.sample_rate = target.sample_rate;
  rec.mixed.samples.assign(n, 0.0);
  for (std::size_t i = 0; i < std::min(n, target.size()); ++i)
    rec.mixed.samples[i] = target.samples[i];
  for (std::size_t i = 0; i < std::min(n, interference.size()); ++i)
    rec.mixed.samples[i] += rec.gain * interference.samples[i];
  return rec;
}

std::string PhoneSegment::Id() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06lld", static_cast<long long>(begin));
  return source_utterance + buf;
}

std::vector<PhoneSegment> ExtractSegments(const UtteranceRecord &utt,
                                          const Waveform &audio,
                                          const CollapseMap &map) {
  try {
    utt.alignment.Validate(static_cast<std::int64_t>(audio.size()));
  } catch (const ValidationError &e) {
    throw ValidationError(Msg(utt.id, ": ", e.what()));
  }
  std::vector<PhoneSegment> out;
  for (const auto &e : utt.alignment.entries) {
    auto collapsed = map.Collapse(e.label);
    if (!collapsed) continue;
    PhoneSegment seg;
    seg.label = e.label;
    seg.collapsed = std::move(*collapsed);
    seg.source_utterance = utt.id;
    seg.begin = e.begin;
    seg.end = e.end;
    seg.audio.sample_rate = audio.sample_rate;
    seg.audio.samples.assign(audio.samples.begin() + e.begin,
                             audio.samples.begin() + e.end);
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<PhoneSegment> ExtractSegments(const UtteranceRecord &utt,
                                          const CollapseMap &map) {
  return ExtractSegments(utt, utt.LoadWaveform(), map);
}

MixRecord MixSegments(const Waveform &a, const Waveform &b) {
  return MixAtTir(a, b, TirSpec(0.0), LengthPolicy::kMaxLength);
}

MixRecord MixSegments(const PhoneSegment &a, const PhoneSegment &b) {
  MixRecord rec = MixSegments(a.audio, b.audio);
  rec.target_id = a.Id();
  rec.interference_id = b.Id();
  return rec;
}

double PeakNormalize(Waveform *w) {
  double peak = 0.0;
  for (double s : w->samples) peak = std::max(peak, std::abs(s));
  if (peak <= 1.0) return 1.0;
  const double scale = 1.0 / peak;
  for (double &s : w->samples) s *= scale;
  return scale;
}

}  // namespace mixeval
