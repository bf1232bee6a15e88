// include/mixeval/experiments.h

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

#ifndef MIXEVAL_EXPERIMENTS_H_
#define MIXEVAL_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixeval/backend.h"
#include "mixeval/corpus.h"
#include "mixeval/features.h"
#include "mixeval/phone-set.h"
#include "mixeval/scoring.h"
#include "mixeval/signal.h"

namespace mixeval {

/// Target-interference gender order.
enum class GenderCombo { kFM, kFF, kMM, kMF };

std::string_view ComboName(GenderCombo c);  // "f-m", "f-f", "m-m", "m-f"
GenderCombo ParseCombo(std::string_view s);
std::vector<GenderCombo> AllCombos();
Gender TargetGender(GenderCombo c);
Gender InterferenceGender(GenderCombo c);

struct VoiceExperimentPlan {
  std::vector<GenderCombo> combos = AllCombos();
  std::vector<TirSpec> tir_grid = DefaultTirGrid();
  int sets_per_cell = 33;
  std::uint64_t master_seed = 0;
  /// The interference never is the target utterance; with this set it is
  /// never the target's speaker either.
  bool exclude_same_speaker = true;
  /// Measure powers over aligned non-silence spans only.
  bool active_speech_power = false;
  /// Average per-utterance PERs inside a set instead of pooling.
  bool per_utterance_average = false;

  void Validate() const;
};

/// One (combo, TIR, set index) test set.
struct VoiceCell {
  GenderCombo combo = GenderCombo::kFM;
  TirSpec tir;
  int set_index = 0;

  /// Relative directory, e.g. "voice/f-m/tir03/set000".
  std::string Name() const;
};

/// combos x grid x sets, in that nesting order.
std::vector<VoiceCell> EnumerateVoiceCells(const VoiceExperimentPlan &plan);

struct PhonemeExperimentPlan {
  std::vector<std::string> phoneme_list = {"ow", "ey", "ah", "ay", "er",
                                           "s",  "t",  "aa", "ih", "eh"};
  int mixings_per_pair = 2000;
  std::string source_set = "complete";  // or "stratified"
  std::uint64_t master_seed = 0;

  void Validate(const CollapseMap &map) const;
};

/// Unordered pairs {a, b} over the list including a == b, as (i, j) with
/// i <= j.  55 for ten phonemes.
std::vector<std::pair<std::size_t, std::size_t>> EnumeratePhonemePairs(
    std::size_t n);

using BackendFactory = std::function<std::unique_ptr<Backend>()>;

/// Everything an experiment run needs besides its plan.
struct RunContext {
  std::filesystem::path out_root;
  CollapseMap map = CollapseMap::Default();
  BackendFactory backend;  // one instance is created per worker
  std::string backend_identity;
  int workers = 1;
  bool write_features = false;
  FeatureConfig features;
  Containment containment = Containment::kCollapsed;
  /// Segments per stratification batch.
  std::size_t batch_size = 1000;
};

/// Runs fn(i, worker) for i in [0, n) on up to `workers` threads.  The
/// first exception thrown by any job is rethrown after all threads finish.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t, int)> &fn);

/// Builds one voice test set under <out_root>/<cell.Name()>: mixed audio in
/// audio/, manifest.jsonl, mix.jsonl (one MixRecord per line) and cell.json.
/// Every target-gender test utterance appears exactly once as target.
TestSetManifest BuildVoiceTestset(const CorpusCatalog &catalog,
                                  const VoiceExperimentPlan &plan,
                                  const VoiceCell &cell, const RunContext &ctx);

/// Unmixed test split under <out_root>/voice/baseline.
TestSetManifest BuildBaselineManifest(const CorpusCatalog &catalog,
                                      const RunContext &ctx);

/// Builds the test sets, writes plan.json and every cell.json; does not
/// transcribe.  Failed cells get an error.txt.
std::vector<TestSetManifest> BuildVoiceTestsets(const CorpusCatalog &catalog,
                                                const VoiceExperimentPlan &plan,
                                                const RunContext &ctx);

/// Per (combo, TIR) aggregate over the sets.
struct VoicePoint {
  GenderCombo combo = GenderCombo::kFM;
  double tir_db = 0.0;
  std::vector<std::optional<double>> set_pers;  // nullopt = failed set
  std::optional<double> mean_per;
  std::string status = "ok";  // ok | partial | failed
};

struct VoiceReport {
  std::vector<VoicePoint> points;  // ordered by combo, then TIR
  std::optional<double> baseline_per;
  std::string baseline_status = "missing";
};

/// Outcome of one transcribed voice set.
struct VoiceSetResult {
  VoiceCell cell;
  std::optional<double> per;  // nullopt when the set failed
  std::string error;
};

/// Averages set PERs per (combo, TIR).
VoiceReport AggregateVoice(const std::vector<VoiceSetResult> &sets,
                           std::optional<double> baseline_per,
                           std::string baseline_status);

/// PER of a transcribed set (pooled, or mean of utterances).  Writes the
/// per-utterance alignment counts to csv_path when it is non-empty.
double ScoreTestSet(const TestSetManifest &m, std::span<const Hypothesis> hyps,
                    bool per_utterance,
                    const std::filesystem::path &csv_path = {});

/// Builds, transcribes and scores every planned set plus the unmixed
/// baseline.  Backend failures mark the affected set as failed.
VoiceReport RunVoiceExperiment(const CorpusCatalog &catalog,
                               const VoiceExperimentPlan &plan,
                               const RunContext &ctx);

/// Non-silence segments of the test split, exported under
/// <out_root>/phonemes/segments.  Zero-power segments are kept here; the
/// mixing stage skips them.
TestSetManifest ExtractPhonemeSet(const CorpusCatalog &catalog,
                                  const RunContext &ctx);

/// Transcribes the segment manifest in batches and writes the surviving
/// entries to <out_root>/phonemes/stratified/manifest.jsonl.
StratifiedSet RunStratification(const TestSetManifest &segments,
                                const RunContext &ctx);

struct PhonemeSetReport {
  std::string name;  // source set
  std::vector<std::string> phonemes;
  MixtureMetrics metrics;
  std::vector<std::string> failed_pairs;
  std::optional<OrientationCount> orientation;
};

/// Builds the trial manifests of one source set under
/// <out_root>/phonemes/mix/<set>/<a>_<b>/ without transcribing them.
std::vector<TestSetManifest> BuildPhonemeTrials(
    const PhonemeExperimentPlan &plan, const TestSetManifest &source,
    const RunContext &ctx);

/// mixings_per_pair 0 dB trials for each of the pairs, scored for
/// containment of either source label.
PhonemeSetReport RunPhonemeExperiment(const PhonemeExperimentPlan &plan,
                                      const TestSetManifest &source,
                                      const RunContext &ctx);

}  // namespace mixeval

#endif  // MIXEVAL_EXPERIMENTS_H_
