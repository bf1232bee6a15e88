// include/mixeval/features.h

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

#ifndef MIXEVAL_FEATURES_H_
#define MIXEVAL_FEATURES_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mixeval/wave-io.h"

namespace mixeval {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<double> Row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> Row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double> &data() const { return data_; }

  bool operator==(const Matrix &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct FeatureConfig {
  int sample_rate = 16000;
  double window_length = 0.025;  // seconds
  double hop = 0.010;            // seconds
  double pre_emphasis = 0.97;
  int mel_filters = 26;
  int cepstral_coeffs = 12;  // plus log energy -> 13 static columns
  int delta_window = 2;
  double log_floor = 1e-10;

  std::int64_t WindowSamples() const;
  std::int64_t HopSamples() const;
  /// Smallest power of two >= the window.
  std::int64_t FftSize() const;
  int StaticDim() const { return cepstral_coeffs + 1; }
  int FeatureDim() const { return 3 * StaticDim(); }

  /// Throws ArgumentError on an inconsistent configuration.
  void Validate() const;
};

struct FeatureMatrix {
  Matrix frames;  // T x 39: [log E, c1..c12, deltas, delta-deltas]
  double frame_rate = 100.0;
};

/// 1 for inputs shorter than a window, else 1 + (n - window) / hop.
std::int64_t FrameCount(std::int64_t n_samples, const FeatureConfig &cfg);

double HzToMel(double hz);
double MelToHz(double mel);
/// Center frequencies (Hz) of the triangular filters.
std::vector<double> MelCenterFrequencies(const FeatureConfig &cfg);

/// Orthonormal DCT-II basis, n x n; row k is the k-th cosine.
Matrix DctMatrix(std::size_t n);

/// Per-frame linear mel filterbank energies (T x mel_filters), i.e. the
/// pipeline tapped before the log and the DCT.
Matrix MelFilterbankEnergies(const Waveform &w, const FeatureConfig &cfg);

/// Regression deltas with edge frames replicated.
Matrix Deltas(const Matrix &m, int window);

/// 39-dimensional MFCC + energy + deltas + delta-deltas.
FeatureMatrix Mfcc39(const Waveform &w, const FeatureConfig &cfg = {});

/// Binary container: "MXFT", uint32 T, uint32 K, T*K float32, all
/// little-endian; plus "<path>.cfg" holding the config as key=value lines.
void WriteFeatures(const std::filesystem::path &path, const FeatureMatrix &m,
                   const FeatureConfig &cfg);
FeatureMatrix ReadFeatures(const std::filesystem::path &path);

}  // namespace mixeval

#endif  // MIXEVAL_FEATURES_H_
