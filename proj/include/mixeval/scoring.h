// include/mixeval/scoring.h

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

#ifndef MIXEVAL_SCORING_H_
#define MIXEVAL_SCORING_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mixeval {

using PhoneSeq = std::vector<std::string>;

struct AlignmentCounts {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  std::int64_t ref_length = 0;

  std::int64_t Errors() const { return substitutions + deletions + insertions; }
  AlignmentCounts &operator+=(const AlignmentCounts &o);
  bool operator==(const AlignmentCounts &) const = default;
};

/// Minimum-cost Levenshtein alignment with unit costs.  Among minimum-cost
/// paths, substitutions are preferred over an insertion/deletion pair.
/// Throws ArgumentError for an empty reference.
AlignmentCounts EditDistance(std::span<const std::string> ref,
                             std::span<const std::string> hyp);

/// 100 * total errors / total reference length, pooled over the set.
double PooledPer(std::span<const AlignmentCounts> counts);
/// Mean of per-utterance PERs.
double MeanUtterancePer(std::span<const AlignmentCounts> counts);

/// Pooled PER over (reference, hypothesis) pairs.
double Per(std::span<const std::pair<PhoneSeq, PhoneSeq>> pairs);

bool Contains(std::span<const std::string> seq, const std::string &symbol);

/// One mixed-phoneme trial: the two source labels and the prediction.
struct MixtureTrial {
  std::string a;
  std::string b;
  PhoneSeq predicted;
};

/// Square matrix over a phoneme list.  Rate(r, c) is the percentage of
/// trials of the pair {r, c} whose prediction contains r.
class PredictionRateMatrix {
 public:
  PredictionRateMatrix() = default;
  explicit PredictionRateMatrix(std::vector<std::string> phonemes);

  const std::vector<std::string> &phonemes() const { return phonemes_; }
  std::size_t size() const { return phonemes_.size(); }
  std::size_t IndexOf(const std::string &phoneme) const;

  /// NaN when the pair had no trials.
  double Rate(std::size_t r, std::size_t c) const;
  std::int64_t Trials(std::size_t r, std::size_t c) const;
  bool Missing(std::size_t r, std::size_t c) const { return Trials(r, c) == 0; }
  bool Complete() const;

  void Set(std::size_t r, std::size_t c, double rate, std::int64_t trials);

  /// Mean over the row's present cells (the scatter-plot ordinate).
  double RowMean(std::size_t r) const;

 private:
  std::vector<std::string> phonemes_;
  std::vector<double> rates_;
  std::vector<std::int64_t> trials_;
};

struct MixtureMetrics {
  PredictionRateMatrix matrix;
  double error_rate = 0.0;  // % of trials containing neither source label
  double avg_length = 0.0;  // mean predicted length
  std::int64_t total_trials = 0;
};

/// Trials whose labels are not both in `phonemes` throw ArgumentError.
MixtureMetrics ComputeMixtureMetrics(const std::vector<std::string> &phonemes,
                                     std::span<const MixtureTrial> trials);

struct OrientationCount {
  int oriented = 0;
  int total = 0;
};

/// Counts unordered pairs {a, b}, a != b, for which the phoneme with the
/// higher stratification accuracy also has the higher prediction rate when
/// mixed with the other.  Ties in either quantity are never oriented.
OrientationCount AccuracyOriented(const PredictionRateMatrix &matrix,
                                  const std::map<std::string, double> &accuracy);

/// "id,ref_length,substitutions,deletions,insertions,errors,per"
void WriteAlignmentCsv(std::ostream &os, std::span<const std::string> ids,
                       std::span<const AlignmentCounts> counts);

/// Header row and first column hold the phoneme symbols; missing cells are
/// written as "NA".
void WriteMatrixCsv(std::ostream &os, const PredictionRateMatrix &m);

}  // namespace mixeval

#endif  // MIXEVAL_SCORING_H_
