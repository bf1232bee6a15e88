// src/scoring.cc

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

#include "mixeval/scoring.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mixeval/error.h"

namespace mixeval {

AlignmentCounts &AlignmentCounts::operator+=(const AlignmentCounts &o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  ref_length += o.ref_length;
  return *this;
}

AlignmentCounts EditDistance(std::span<const std::string> ref,
                             std::span<const std::string> hyp) {
  if (ref.empty()) throw ArgumentError("edit distance with an empty reference");
  const std::size_t n = ref.size(), m = hyp.size();
  // best[i][j]: aligning ref[0, i) with hyp[0, j).  Ties in cost go to the
  // path with more substitutions.
  std::vector<AlignmentCounts> best((n + 1) * (m + 1));
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  auto better = [](const AlignmentCounts &a, const AlignmentCounts &b) {
    return a.Errors() < b.Errors() ||
           (a.Errors() == b.Errors() && a.substitutions > b.substitutions);
  };
  for (std::size_t i = 1; i <= n; ++i) best[at(i, 0)].deletions = i;
  for (std::size_t j = 1; j <= m; ++j) best[at(0, j)].insertions = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      AlignmentCounts c = best[at(i - 1, j - 1)];
      if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
      AlignmentCounts del = best[at(i - 1, j)];
      ++del.deletions;
      AlignmentCounts ins = best[at(i, j - 1)];
      ++ins.insertions;
      if (better(del, c)) c = del;
      if (better(ins, c)) c = ins;
      best[at(i, j)] = c;
    }
  }
  AlignmentCounts c = best[at(n, m)];
  c.ref_length = static_cast<std::int64_t>(n);
  return c;
}

double PooledPer(std::span<const AlignmentCounts> counts) {
  if (counts.empty()) throw ArgumentError("PER over an empty set");
  AlignmentCounts total;
  for (const auto &c : counts) total += c;
  return 100.0 * static_cast<double>(total.Errors()) /
         static_cast<double>(total.ref_length);
}

double MeanUtterancePer(std::span<const AlignmentCounts> counts) {
  if (counts.empty()) throw ArgumentError("PER over an empty set");
  double acc = 0.0;
  for (const auto &c : counts)
    acc += 100.0 * static_cast<double>(c.Errors()) /
           static_cast<double>(c.ref_length);
  return acc / static_cast<double>(counts.size());
}

double Per(std::span<const std::pair<PhoneSeq, PhoneSeq>> pairs) {
  std::vector<AlignmentCounts> counts;
  counts.reserve(pairs.size());
  for (const auto &[ref, hyp] : pairs) counts.push_back(EditDistance(ref, hyp));
  return PooledPer(counts);
}

bool Contains(std::span<const std::string> seq, const std::string &symbol) {
  return std::find(seq.begin(), seq.end(), symbol) != seq.end();
}

PredictionRateMatrix::PredictionRateMatrix(std::vector<std::string> phonemes)
    : phonemes_(std::move(phonemes)),
      rates_(phonemes_.size() * phonemes_.size(),
             std::numeric_limits<double>::quiet_NaN()),
      trials_(phonemes_.size() * phonemes_.size(), 0) {
  std::vector<std::string> sorted = phonemes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("phoneme list contains duplicates");
}

std::size_t PredictionRateMatrix::IndexOf(const std::string &phoneme) const {
  auto it = std::find(phonemes_.begin(), phonemes_.end(), phoneme);
  if (it == phonemes_.end())
    throw ArgumentError(Msg("phoneme '", phoneme, "' not in the matrix"));
  return static_cast<std::size_t>(it - phonemes_.begin());
}

double PredictionRateMatrix::Rate(std::size_t r, std::size_t c) const {
  return rates_.at(r * size() + c);
}

std::int64_t PredictionRateMatrix::Trials(std::size_t r, std::size_t c) const {
  return trials_.at(r * size() + c);
}

bool PredictionRateMatrix::Complete() const {
  return std::none_of(trials_.begin(), trials_.end(),
                      [](std::int64_t t) { return t == 0; });
}

void PredictionRateMatrix::Set(std::size_t r, std::size_t c, double rate,
                               std::int64_t trials) {
  rates_.at(r * size() + c) = rate;
  trials_.at(r * size() + c) = trials;
}

double PredictionRateMatrix::RowMean(std::size_t r) const {
  double acc = 0.0;
  int n = 0;
  for (std::size_t c = 0; c < size(); ++c) {
    if (Missing(r, c)) continue;
    acc += Rate(r, c);
    ++n;
  }
  return n ? acc / n : std::numeric_limits<double>::quiet_NaN();
}

MixtureMetrics ComputeMixtureMetrics(const std::vector<std::string> &phonemes,
                                     std::span<const MixtureTrial> trials) {
  MixtureMetrics out;
  out.matrix = PredictionRateMatrix(phonemes);
  const std::size_t k = phonemes.size();
  // Per unordered pair (stored at [min][max]): trials, and how many
  // predictions contain each member.
  std::vector<std::int64_t> count(k * k, 0), has_lo(k * k, 0), has_hi(k * k, 0);
  std::int64_t neither = 0, length = 0;
  for (const auto &t : trials) {
    std::size_t ia = out.matrix.IndexOf(t.a), ib = out.matrix.IndexOf(t.b);
    std::size_t lo = std::min(ia, ib), hi = std::max(ia, ib);
    const bool ca = Contains(t.predicted, t.a);
    const bool cb = Contains(t.predicted, t.b);
    const std::size_t cell = lo * k + hi;
    ++count[cell];
    if (Contains(t.predicted, phonemes[lo])) ++has_lo[cell];
    if (Contains(t.predicted, phonemes[hi])) ++has_hi[cell];
    if (!ca && !cb) ++neither;
    length += static_cast<std::int64_t>(t.predicted.size());
  }
  for (std::size_t lo = 0; lo < k; ++lo) {
    for (std::size_t hi = lo; hi < k; ++hi) {
      const std::size_t cell = lo * k + hi;
      const std::int64_t n = count[cell];
      if (n == 0) continue;
      out.matrix.Set(lo, hi, 100.0 * has_lo[cell] / n, n);
      out.matrix.Set(hi, lo, 100.0 * has_hi[cell] / n, n);
    }
  }
  out.total_trials = static_cast<std::int64_t>(trials.size());
  if (!trials.empty()) {
    out.error_rate = 100.0 * neither / out.total_trials;
    out.avg_length = static_cast<double>(length) / out.total_trials;
  }
  return out;
}

OrientationCount AccuracyOriented(
    const PredictionRateMatrix &matrix,
    const std::map<std::string, double> &accuracy) {
  const auto &ph = matrix.phonemes();
  std::vector<double> acc(ph.size());
  for (std::size_t i = 0; i < ph.size(); ++i) {
    auto it = accuracy.find(ph[i]);
    if (it == accuracy.end())
      throw ArgumentError(Msg("no stratification accuracy for '", ph[i], "'"));
    acc[i] = it->second;
  }
  auto sign = [](double x) { return (x > 0) - (x < 0); };
  OrientationCount out;
  for (std::size_t a = 0; a < ph.size(); ++a) {
    for (std::size_t b = a + 1; b < ph.size(); ++b) {
      if (matrix.Missing(a, b) || matrix.Missing(b, a))
        throw ArgumentError(
            Msg("prediction rates missing for ", ph[a], "/", ph[b]));
      ++out.total;
      const int s_acc = sign(acc[a] - acc[b]);
      const int s_rate = sign(matrix.Rate(a, b) - matrix.Rate(b, a));
      if (s_acc != 0 && s_acc == s_rate) ++out.oriented;
    }
  }
  return out;
}

void WriteAlignmentCsv(std::ostream &os, std::span<const std::string> ids,
                       std::span<const AlignmentCounts> counts) {
  if (ids.size() != counts.size())
    throw ArgumentError("id/count length mismatch");
  os << "id,ref_length,substitutions,deletions,insertions,errors,per\n";
  char per[32];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto &c = counts[i];
    std::snprintf(per, sizeof(per), "%.4f",
                  100.0 * static_cast<double>(c.Errors()) / c.ref_length);
    os << ids[i] << ',' << c.ref_length << ',' << c.substitutions << ','
       << c.deletions << ',' << c.insertions << ',' << c.Errors() << ','
       << per << '\n';
  }
}

void WriteMatrixCsv(std::ostream &os, const PredictionRateMatrix &m) {
  os << "phoneme";
  for (const auto &p : m.phonemes()) os << ',' << p;
  os << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.size(); ++r) {
    os << m.phonemes()[r];
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (m.Missing(r, c)) {
        os << ",NA";
      } else {
        std::snprintf(buf, sizeof(buf), "%.2f", m.Rate(r, c));
        os << ',' << buf;
      }
    }
    os << '\n';
  }
}

}  // namespace mixeval
