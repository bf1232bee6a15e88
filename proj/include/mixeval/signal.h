// include/mixeval/signal.h

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

#ifndef MIXEVAL_SIGNAL_H_
#define MIXEVAL_SIGNAL_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixeval/corpus.h"
#include "mixeval/phone-set.h"
#include "mixeval/wave-io.h"

namespace mixeval {

/// Target-to-interference ratio in dB.
struct TirSpec {
  double db = 0.0;

  /// Throws ArgumentError unless db is finite.
  explicit TirSpec(double value);
  TirSpec() = default;
  bool operator==(const TirSpec &) const = default;
};

/// 0, 3, ..., 30 dB.
std::vector<TirSpec> DefaultTirGrid();

/// Mean square amplitude.  Throws ArgumentError for an empty signal.
double SignalPower(std::span<const double> samples);
double SignalPower(const Waveform &w);

/// Mean square over the union of the given [begin, end) spans.
double SignalPower(const Waveform &w,
                   std::span<const std::pair<std::int64_t, std::int64_t>> spans);

/// Gain to apply to the interference so that
/// 10 log10(p_target / (gain^2 p_interf)) == tir.db.
/// Throws DegenerateSignalError for non-positive powers.
double GainForTir(double p_target, double p_interf, TirSpec tir);

enum class LengthPolicy {
  kTargetLength,  // pad or truncate the interference to the target
  kMaxLength,     // pad the shorter signal to the longer one
};

struct MixRecord {
  std::string target_id;
  std::string interference_id;
  TirSpec tir;
  double gain = 0.0;
  Waveform mixed;
  std::string seed_path;
  /// Factor applied at WAV export (1 unless the mixture peaked above 1).
  double peak_scale = 1.0;
};

/// Powers default to whole-signal power of the unpadded inputs; pass
/// explicit powers to measure them differently (e.g. over speech only).
struct MixPowers {
  double target = -1.0;
  double interference = -1.0;
};

/// output[i] = target[i] + gain * interference'[i], interference' being the
/// interference after padding/truncation per policy.
MixRecord MixAtTir(const Waveform &target, const Waveform &interference,
                   TirSpec tir, LengthPolicy policy = LengthPolicy::kTargetLength,
                   MixPowers powers = {});

/// A phone cut from an utterance.
struct PhoneSegment {
  std::string label;      // TIMIT symbol
  std::string collapsed;  // scoring class
  Waveform audio;
  std::string source_utterance;
  std::int64_t begin = 0;
  std::int64_t end = 0;

  /// "<utterance>_<begin>", unique within a corpus.
  std::string Id() const;
};

/// One segment per alignment entry whose label does not collapse to
/// silence, in alignment order.
std::vector<PhoneSegment> ExtractSegments(const UtteranceRecord &utt,
                                          const Waveform &audio,
                                          const CollapseMap &map);
std::vector<PhoneSegment> ExtractSegments(const UtteranceRecord &utt,
                                          const CollapseMap &map);

/// Symmetric 0 dB mix: the shorter segment is zero-padded to the longer one
/// and b is scaled to a's power.
MixRecord MixSegments(const PhoneSegment &a, const PhoneSegment &b);
MixRecord MixSegments(const Waveform &a, const Waveform &b);

/// Scales w into [-1, 1] if its peak exceeds 1.  Returns the factor applied.
double PeakNormalize(Waveform *w);

}  // namespace mixeval

#endif  // MIXEVAL_SIGNAL_H_
