// src/features.cc

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

#include "mixeval/features.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "mixeval/error.h"

namespace mixeval {

namespace {

// The FFTW planner is not thread-safe; plans are created once per size under
// a lock and then executed through the new-array interface, which is.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = static_cast<double *>(fftw_malloc(sizeof(double) * n));
    out_ = static_cast<fftw_complex *>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  static const RealFft &ForSize(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<RealFft>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto &slot = cache[n];
    if (!slot) slot = std::make_unique<RealFft>(n);
    return *slot;
  }

  /// |X_k|^2 for k = 0..n/2.  `in` and `out` must come from fftw_malloc.
  void PowerSpectrum(double *in, fftw_complex *out,
                     std::span<double> power) const {
    fftw_execute_dft_r2c(plan_, in, out);
    for (std::size_t k = 0; k <= n_ / 2; ++k)
      power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }

 private:
  std::size_t n_;
  double *in_;
  fftw_complex *out_;
  fftw_plan plan_;
};

struct FftBuffers {
  explicit FftBuffers(std::size_t n)
      : in(static_cast<double *>(fftw_malloc(sizeof(double) * n))),
        out(static_cast<fftw_complex *>(
            fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {}
  ~FftBuffers() {
    fftw_free(in);
    fftw_free(out);
  }
  FftBuffers(const FftBuffers &) = delete;
  FftBuffers &operator=(const FftBuffers &) = delete;
  double *in;
  fftw_complex *out;
};

// Triangular filters between consecutive mel-spaced edge frequencies from
// 0 Hz to Nyquist, evaluated at FFT bin frequencies.
Matrix MelWeights(const FeatureConfig &cfg) {
  const std::size_t nfft = static_cast<std::size_t>(cfg.FftSize());
  const std::size_t bins = nfft / 2 + 1;
  const int m = cfg.mel_filters;
  const double mel_hi = HzToMel(cfg.sample_rate / 2.0);
  std::vector<double> edges(m + 2);
  for (int i = 0; i < m + 2; ++i) edges[i] = MelToHz(mel_hi * i / (m + 1));
  Matrix w(m, bins);
  for (int f = 0; f < m; ++f) {
    const double lo = edges[f], mid = edges[f + 1], hi = edges[f + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * cfg.sample_rate / nfft;
      if (hz > lo && hz < hi)
        w(f, k) = hz <= mid ? (hz - lo) / (mid - lo) : (hi - hz) / (hi - mid);
    }
  }
  return w;
}

std::vector<double> PreEmphasize(const Waveform &w, double coeff) {
  std::vector<double> out(w.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = w.samples[i] - (i > 0 ? coeff * w.samples[i - 1] : 0.0);
  return out;
}

// Shared front end: per-frame log energy and linear mel energies.
struct FrontEnd {
  std::vector<double> log_energy;
  Matrix mel;
};

FrontEnd RunFrontEnd(const Waveform &w, const FeatureConfig &cfg) {
  cfg.Validate();
  if (w.sample_rate != cfg.sample_rate)
    throw ArgumentError(Msg("waveform is ", w.sample_rate,
                            " Hz but features are configured for ",
                            cfg.sample_rate, " Hz"));
  if (w.empty()) throw ArgumentError("cannot featurize an empty waveform");

  const std::int64_t win = cfg.WindowSamples();
  const std::int64_t hop = cfg.HopSamples();
  const std::size_t nfft = static_cast<std::size_t>(cfg.FftSize());
  const std::int64_t frames =
      FrameCount(static_cast<std::int64_t>(w.size()), cfg);
  const std::vector<double> x = PreEmphasize(w, cfg.pre_emphasis);
  const Matrix weights = MelWeights(cfg);

  std::vector<double> hamming(win);
  for (std::int64_t n = 0; n < win; ++n)
    hamming[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n /
                                        static_cast<double>(win - 1));

  const RealFft &fft = RealFft::ForSize(nfft);
  FftBuffers buf(nfft);
  std::vector<double> power(nfft / 2 + 1);

  FrontEnd fe;
  fe.log_energy.resize(frames);
  fe.mel = Matrix(frames, cfg.mel_filters);
  for (std::int64_t t = 0; t < frames; ++t) {
    const std::int64_t start = t * hop;
    double energy = 0.0;
    std::fill(buf.in, buf.in + nfft, 0.0);
    for (std::int64_t n = 0; n < win; ++n) {
      const std::int64_t i = start + n;
      const double s = i < static_cast<std::int64_t>(x.size()) ? x[i] : 0.0;
      energy += s * s;
      buf.in[n] = s * hamming[n];
    }
    fe.log_energy[t] = std::log(std::max(energy, cfg.log_floor));
    fft.PowerSpectrum(buf.in, buf.out, power);
    for (int f = 0; f < cfg.mel_filters; ++f) {
      double acc = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k)
        acc += weights(f, k) * power[k];
      fe.mel(t, f) = acc;
    }
  }
  return fe;
}

}  // namespace

std::int64_t FeatureConfig::WindowSamples() const {
  return static_cast<std::int64_t>(std::llround(window_length * sample_rate));
}

std::int64_t FeatureConfig::HopSamples() const {
  return static_cast<std::int64_t>(std::llround(hop * sample_rate));
}

std::int64_t FeatureConfig::FftSize() const {
  std::int64_t n = 1;
  while (n < WindowSamples()) n <<= 1;
  return n;
}

void FeatureConfig::Validate() const {
  if (sample_rate <= 0) throw ArgumentError("sample_rate must be positive");
  if (!(HopSamples() > 0) || WindowSamples() < HopSamples())
    throw ArgumentError("need window >= hop > 0");
  if (WindowSamples() < 2) throw ArgumentError("window too short");
  if (cepstral_coeffs < 1 || cepstral_coeffs >= mel_filters)
    throw ArgumentError("need 0 < cepstral_coeffs < mel_filters");
  if (delta_window < 1) throw ArgumentError("delta_window must be >= 1");
  if (!(log_floor > 0.0)) throw ArgumentError("log_floor must be positive");
  if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0))
    throw ArgumentError("pre_emphasis must be in [0, 1)");
}

std::int64_t FrameCount(std::int64_t n_samples, const FeatureConfig &cfg) {
  if (n_samples <= 0) throw ArgumentError("frame count of an empty signal");
  const std::int64_t win = cfg.WindowSamples();
  if (n_samples < win) return 1;
  return 1 + (n_samples - win) / cfg.HopSamples();
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> MelCenterFrequencies(const FeatureConfig &cfg) {
  const double mel_hi = HzToMel(cfg.sample_rate / 2.0);
  std::vector<double> c(cfg.mel_filters);
  for (int i = 0; i < cfg.mel_filters; ++i)
    c[i] = MelToHz(mel_hi * (i + 1) / (cfg.mel_filters + 1));
  return c;
}

Matrix DctMatrix(std::size_t n) {
  Matrix d(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (std::size_t i = 0; i < n; ++i)
      d(k, i) = scale * std::cos(std::numbers::pi * k * (i + 0.5) / n);
  }
  return d;
}

Matrix MelFilterbankEnergies(const Waveform &w, const FeatureConfig &cfg) {
  return RunFrontEnd(w, cfg).mel;
}

Matrix Deltas(const Matrix &m, int window) {
  if (window < 1) throw ArgumentError("delta window must be >= 1");
  const auto rows = static_cast<std::int64_t>(m.rows());
  Matrix d(m.rows(), m.cols());
  if (rows == 0) return d;
  double denom = 0.0;
  for (int n = 1; n <= window; ++n) denom += n * n;
  denom *= 2.0;
  auto clamp = [rows](std::int64_t t) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(t, 0, rows - 1));
  };
  for (std::int64_t t = 0; t < rows; ++t) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double acc = 0.0;
      for (int n = 1; n <= window; ++n)
        acc += n * (m(clamp(t + n), c) - m(clamp(t - n), c));
      d(t, c) = acc / denom;
    }
  }
  return d;
}

FeatureMatrix Mfcc39(const Waveform &w, const FeatureConfig &cfg) {
  FrontEnd fe = RunFrontEnd(w, cfg);
  const std::size_t frames = fe.log_energy.size();
  const int nstatic = cfg.StaticDim();
  const Matrix dct = DctMatrix(cfg.mel_filters);

  Matrix stat(frames, nstatic);
  std::vector<double> logmel(cfg.mel_filters);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int f = 0; f < cfg.mel_filters; ++f)
      logmel[f] = std::log(std::max(fe.mel(t, f), cfg.log_floor));
    stat(t, 0) = fe.log_energy[t];
    for (int k = 1; k <= cfg.cepstral_coeffs; ++k) {
      double acc = 0.0;
      for (int f = 0; f < cfg.mel_filters; ++f) acc += dct(k, f) * logmel[f];
      stat(t, k) = acc;
    }
  }
  const Matrix d1 = Deltas(stat, cfg.delta_window);
  const Matrix d2 = Deltas(d1, cfg.delta_window);

  FeatureMatrix out;
  out.frame_rate = static_cast<double>(cfg.sample_rate) / cfg.HopSamples();
  out.frames = Matrix(frames, cfg.FeatureDim());
  for (std::size_t t = 0; t < frames; ++t) {
    for (int c = 0; c < nstatic; ++c) {
      out.frames(t, c) = stat(t, c);
      out.frames(t, nstatic + c) = d1(t, c);
      out.frames(t, 2 * nstatic + c) = d2(t, c);
    }
  }
  return out;
}

void WriteFeatures(const std::filesystem::path &path, const FeatureMatrix &m,
                   const FeatureConfig &cfg) {
  std::string bytes = "MXFT";
  auto put32 = [&bytes](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(char((v >> (8 * i)) & 0xff));
  };
  put32(static_cast<std::uint32_t>(m.frames.rows()));
  put32(static_cast<std::uint32_t>(m.frames.cols()));
  for (double v : m.frames.data()) {
    float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof(u));
    put32(u);
  }
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(Msg("cannot write ", path.string()));
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  std::ofstream side(path.string() + ".cfg", std::ios::trunc);
  if (!side) throw IoError(Msg("cannot write ", path.string(), ".cfg"));
  side.precision(17);
  side << "sample_rate=" << cfg.sample_rate << '\n'
       << "window_length=" << cfg.window_length << '\n'
       << "hop=" << cfg.hop << '\n'
       << "pre_emphasis=" << cfg.pre_emphasis << '\n'
       << "mel_filters=" << cfg.mel_filters << '\n'
       << "cepstral_coeffs=" << cfg.cepstral_coeffs << '\n'
       << "delta_window=" << cfg.delta_window << '\n'
       << "log_floor=" << cfg.log_floor << '\n'
       << "frame_rate=" << m.frame_rate << '\n';
}

FeatureMatrix ReadFeatures(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  std::vector<unsigned char> bytes(std::istreambuf_iterator<char>(is), {});
  auto get32 = [&bytes](std::size_t off) {
    return std::uint32_t(bytes[off]) | std::uint32_t(bytes[off + 1]) << 8 |
           std::uint32_t(bytes[off + 2]) << 16 |
           std::uint32_t(bytes[off + 3]) << 24;
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "MXFT", 4) != 0)
    throw FormatError(Msg(path.string(), ": not a feature file"));
  const std::size_t rows = get32(4), cols = get32(8);
  if (bytes.size() != 12 + rows * cols * 4)
    throw CorruptFileError(Msg(path.string(), ": payload size mismatch"));
  FeatureMatrix m;
  m.frames = Matrix(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    std::uint32_t u = get32(12 + 4 * i);
    float f;
    std::memcpy(&f, &u, sizeof(f));
    m.frames(i / cols, i % cols) = f;
  }
  std::ifstream side(path.string() + ".cfg");
  std::string line;
  while (std::getline(side, line)) {
    if (line.rfind("frame_rate=", 0) == 0) m.frame_rate = std::stod(line.substr(11));
  }
  return m;
}

}  // namespace mixeval
