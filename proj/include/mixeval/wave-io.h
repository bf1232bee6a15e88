// include/mixeval/wave-io.h

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

#ifndef MIXEVAL_WAVE_IO_H_
#define MIXEVAL_WAVE_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mixeval {

/// Mono audio as real amplitudes, nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

struct AudioInfo {
  int sample_rate = 0;
  std::int64_t num_samples = 0;
};

/// Full-scale int16; used for both loading and saving.
inline constexpr double kPcm16Scale = 32768.0;

/// Reads NIST SPHERE (NIST_1A, pcm, 16 bit, mono, either byte order) or
/// RIFF PCM16 mono.  Throws FormatError on an unknown magic or unsupported
/// encoding and CorruptFileError when the payload is shorter than declared.
Waveform LoadAudio(const std::filesystem::path &path);

/// Header-only variant of LoadAudio; does not read the payload but does
/// verify that the file is long enough to hold it.
AudioInfo ProbeAudio(const std::filesystem::path &path);

/// Writes RIFF PCM16 mono.  Samples are scaled by 32768, rounded to nearest
/// and clamped to the int16 range.
void WriteWav(const std::filesystem::path &path, const Waveform &wave);

/// Writes a NIST SPHERE file (little-endian pcm); used to build test trees.
void WriteSphere(const std::filesystem::path &path, const Waveform &wave);

}  // namespace mixeval

#endif  // MIXEVAL_WAVE_IO_H_
