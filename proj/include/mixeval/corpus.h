// include/mixeval/corpus.h

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

#ifndef MIXEVAL_CORPUS_H_
#define MIXEVAL_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixeval/phone-set.h"
#include "mixeval/wave-io.h"

namespace mixeval {

struct PhoneEntry {
  std::int64_t begin = 0;  // first sample
  std::int64_t end = 0;    // one past the last sample
  std::string label;

  bool operator==(const PhoneEntry &) const = default;
};

/// Time-ordered phone spans of one utterance.  Entries are sorted, do not
/// overlap and have begin < end.
struct PhoneAlignment {
  std::vector<PhoneEntry> entries;

  /// Throws ValidationError if the ordering invariants do not hold or, when
  /// num_samples is given, if a span runs past the audio.
  void Validate(std::optional<std::int64_t> num_samples = std::nullopt) const;

  std::vector<std::string> Labels() const;
  bool operator==(const PhoneAlignment &) const = default;
};

/// Parses TIMIT .PHN text ("begin end label" per line).
PhoneAlignment ParsePhn(std::istream &is, const std::string &name = "<phn>");
PhoneAlignment ParsePhnFile(const std::filesystem::path &path);

enum class Gender { kMale, kFemale };
enum class Split { kTrain, kTest };

std::string_view GenderName(Gender g);  // "male" / "female"
std::string_view SplitName(Split s);    // "train" / "test"
Gender ParseGender(std::string_view s);
Split ParseSplit(std::string_view s);

/// One cataloged utterance.  Audio is referenced, not held: call
/// LoadWaveform() when samples are needed.
struct UtteranceRecord {
  std::string id;  // "<speaker>_<sentence>", e.g. "FCJF0_SA1"
  std::string speaker;
  std::string sentence;
  Gender gender = Gender::kMale;
  Split split = Split::kTest;
  std::filesystem::path audio_path;  // absolute
  std::filesystem::path phn_path;    // absolute
  int sample_rate = 0;
  std::int64_t num_samples = 0;
  PhoneAlignment alignment;

  Waveform LoadWaveform() const;
};

struct ScanOptions {
  bool include_sa = true;
};

/// Typed view of a TIMIT-layout tree.  Immutable after construction.
class CorpusCatalog {
 public:
  CorpusCatalog() = default;
  CorpusCatalog(std::filesystem::path root, std::vector<UtteranceRecord> utts,
                std::vector<std::string> warnings = {});

  const std::filesystem::path &root() const { return root_; }
  /// Sorted by id.
  const std::vector<UtteranceRecord> &utterances() const { return utts_; }
  /// Per-utterance problems found while scanning (the utterance was skipped).
  const std::vector<std::string> &warnings() const { return warnings_; }

  std::vector<const UtteranceRecord *> Select(Split split, Gender gender) const;
  std::size_t NumUtterances(Split split, Gender gender) const;
  std::size_t NumSpeakers(Split split, Gender gender) const;
  const UtteranceRecord *Find(std::string_view id) const;

  /// JSON document with the root, and one record per utterance carrying id,
  /// speaker, gender, split and root-relative audio/alignment paths.
  void WriteJson(const std::filesystem::path &path) const;
  /// Re-reads alignments and audio headers from the recorded root.
  static CorpusCatalog ReadJson(const std::filesystem::path &path);

  bool operator==(const CorpusCatalog &other) const;

 private:
  std::filesystem::path root_;
  std::vector<UtteranceRecord> utts_;
  std::vector<std::string> warnings_;
};

/// Walks <root>/{TRAIN,TEST}/<dialect>/<speaker>/ (any letter case).  The
/// first letter of a speaker directory gives the gender.  Utterances lacking
/// audio or alignment, or whose alignment does not fit the audio, are
/// skipped with a warning.  Throws StructureError when a split directory is
/// missing.
CorpusCatalog ScanCorpus(const std::filesystem::path &root,
                         const ScanOptions &opts = {});

}  // namespace mixeval

#endif  // MIXEVAL_CORPUS_H_
