// python/bindings.cc

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

// Python bindings for the mixeval core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mixeval/cli.h"
#include "mixeval/corpus.h"
#include "mixeval/error.h"
#include "mixeval/features.h"
#include "mixeval/phone-set.h"
#include "mixeval/scoring.h"
#include "mixeval/signal.h"
#include "mixeval/wave-io.h"

namespace py = pybind11;
using namespace mixeval;

namespace {

Waveform ToWaveform(py::array_t<double, py::array::c_style | py::array::forcecast> a,
                    int sample_rate) {
  if (a.ndim() != 1) throw ArgumentError("expected a 1-d signal");
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(a.data(), a.data() + a.size());
  return w;
}

py::array_t<double> ToArray(const std::vector<double> &v) {
  py::array_t<double> a(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
                        std::vector<py::ssize_t>{sizeof(double)});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<double> ToArray(const Matrix &m) {
  py::array_t<double> a({static_cast<py::ssize_t>(m.rows()),
                         static_cast<py::ssize_t>(m.cols())});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

Matrix ToMatrix(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw ArgumentError("expected a 2-d array");
  Matrix m(a.shape(0), a.shape(1));
  if (a.size() > 0) std::copy(a.data(), a.data() + a.size(), m.Row(0).data());
  return m;
}

FeatureConfig ConfigFrom(int sample_rate, double window_length, double hop) {
  FeatureConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.window_length = window_length;
  cfg.hop = hop;
  return cfg;
}

py::dict CountsDict(const AlignmentCounts &c) {
  py::dict d;
  d["substitutions"] = c.substitutions;
  d["deletions"] = c.deletions;
  d["insertions"] = c.insertions;
  d["ref_length"] = c.ref_length;
  d["errors"] = c.Errors();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mixeval core: corpus parsing, mixing, features and scoring";
  m.attr("__version__") = Version();

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def(
      "load_audio",
      [](const std::filesystem::path &path) {
        Waveform w = LoadAudio(path);
        return py::make_tuple(ToArray(w.samples), w.sample_rate);
      },
      py::arg("path"), "Reads a SPHERE or RIFF file; returns (samples, rate).");

  m.def(
      "write_wav",
      [](const std::filesystem::path &path, py::array_t<double> samples,
         int sample_rate) { WriteWav(path, ToWaveform(samples, sample_rate)); },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate") = 16000);

  m.def(
      "parse_phn",
      [](const std::filesystem::path &path) {
        std::vector<std::tuple<std::int64_t, std::int64_t, std::string>> out;
        for (const auto &e : ParsePhnFile(path).entries)
          out.emplace_back(e.begin, e.end, e.label);
        return out;
      },
      py::arg("path"));

  m.def(
      "collapse",
      [](const std::vector<std::string> &labels) {
        return CollapseMap::Default().CollapseSequence(labels);
      },
      py::arg("labels"), "Maps TIMIT labels to scoring classes, dropping silence.");

  m.def("scoring_classes", [] { return CollapseMap::Default().ScoringClasses(); });

  m.def(
      "signal_power",
      [](py::array_t<double> x) { return SignalPower(ToWaveform(x, 16000)); },
      py::arg("samples"));

  m.def(
      "gain_for_tir",
      [](double pt, double pi, double tir) { return GainForTir(pt, pi, TirSpec(tir)); },
      py::arg("p_target"), py::arg("p_interference"), py::arg("tir_db"));

  m.def(
      "mix_at_tir",
      [](py::array_t<double> target, py::array_t<double> interference,
         double tir, bool max_length) {
        MixRecord r = MixAtTir(ToWaveform(target, 16000),
                               ToWaveform(interference, 16000), TirSpec(tir),
                               max_length ? LengthPolicy::kMaxLength
                                          : LengthPolicy::kTargetLength);
        return py::make_tuple(ToArray(r.mixed.samples), r.gain);
      },
      py::arg("target"), py::arg("interference"), py::arg("tir_db"),
      py::arg("max_length") = false, "Returns (mixture, gain).");

  m.def(
      "frame_count",
      [](std::int64_t n, int sample_rate, double window_length, double hop) {
        return FrameCount(n, ConfigFrom(sample_rate, window_length, hop));
      },
      py::arg("num_samples"), py::arg("sample_rate") = 16000,
      py::arg("window_length") = 0.025, py::arg("hop") = 0.010);

  m.def(
      "mfcc39",
      [](py::array_t<double> x, int sample_rate, double window_length,
         double hop) {
        auto cfg = ConfigFrom(sample_rate, window_length, hop);
        return ToArray(Mfcc39(ToWaveform(x, sample_rate), cfg).frames);
      },
      py::arg("samples"), py::arg("sample_rate") = 16000,
      py::arg("window_length") = 0.025, py::arg("hop") = 0.010);

  m.def(
      "deltas",
      [](py::array_t<double> x, int window) {
        return ToArray(Deltas(ToMatrix(x), window));
      },
      py::arg("matrix"), py::arg("window") = 2);

  m.def(
      "edit_distance",
      [](const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
        return CountsDict(EditDistance(ref, hyp));
      },
      py::arg("ref"), py::arg("hyp"));

  m.def(
      "per",
      [](const std::vector<std::pair<PhoneSeq, PhoneSeq>> &pairs) {
        return Per(pairs);
      },
      py::arg("pairs"), "Pooled PER in percent over (ref, hyp) pairs.");

  m.def(
      "mixture_metrics",
      [](const std::vector<std::string> &phonemes,
         const std::vector<std::tuple<std::string, std::string, PhoneSeq>> &trials) {
        std::vector<MixtureTrial> t;
        for (const auto &[a, b, p] : trials) t.push_back({a, b, p});
        MixtureMetrics mm = ComputeMixtureMetrics(phonemes, t);
        const std::size_t n = mm.matrix.size();
        py::array_t<double> rates({static_cast<py::ssize_t>(n),
                                   static_cast<py::ssize_t>(n)});
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            rates.mutable_at(r, c) = mm.matrix.Rate(r, c);
        py::dict d;
        d["rates"] = rates;
        d["error_rate"] = mm.error_rate;
        d["avg_length"] = mm.avg_length;
        d["total_trials"] = mm.total_trials;
        return d;
      },
      py::arg("phonemes"), py::arg("trials"));

  m.def(
      "accuracy_oriented",
      [](const std::vector<std::string> &phonemes,
         py::array_t<double, py::array::c_style | py::array::forcecast> rates,
         const std::map<std::string, double> &accuracy) {
        const std::size_t n = phonemes.size();
        if (rates.ndim() != 2 || rates.shape(0) != static_cast<py::ssize_t>(n) ||
            rates.shape(1) != static_cast<py::ssize_t>(n))
          throw ArgumentError("rates must be len(phonemes) x len(phonemes)");
        PredictionRateMatrix matrix(phonemes);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            matrix.Set(r, c, rates.at(r, c), 1);
        OrientationCount oc = AccuracyOriented(matrix, accuracy);
        return py::make_tuple(oc.oriented, oc.total);
      },
      py::arg("phonemes"), py::arg("rates"), py::arg("accuracy"),
      "Returns (oriented, total) over unordered pairs.");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "mixeval");
        py::gil_scoped_release release;
        return RunCli(args);
      },
      py::arg("args"), "Runs the command line; returns the exit status.");
}
