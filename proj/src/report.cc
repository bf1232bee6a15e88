// src/report.cc

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

#include "mixeval/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"
#include "mixeval/error.h"

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json ReadJsonFile(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  try {
    return json::parse(is);
  } catch (const json::exception &e) {
    throw ParseError(Msg(path.string(), ": ", e.what()));
  }
}

std::string ReadFirstLine(const fs::path &path) {
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  return line;
}

std::vector<fs::path> SortedDirs(const fs::path &dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto &e : fs::directory_iterator(dir, ec))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string Fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Fixed(const std::optional<double> &v, int digits = 4) {
  return v ? Fixed(*v, digits) : "NA";
}

std::ofstream OpenCsv(const fs::path &path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  return os;
}

// Reads a transcribed set; nullopt-like failure is signalled by throwing.
std::vector<Hypothesis> LoadHyps(const fs::path &dir, const TestSetManifest &m,
                                 const CollapseMap &map) {
  if (fs::exists(dir / "error.txt"))
    throw ProtocolError(ReadFirstLine(dir / "error.txt"));
  return ReadHyps(dir / "hyps.tsv", m, map);
}

std::optional<VoiceReport> LoadVoice(const fs::path &root,
                                     const CollapseMap &map) {
  const fs::path vdir = root / "voice";
  if (!fs::exists(vdir / "plan.json")) return std::nullopt;
  const json plan = ReadJsonFile(vdir / "plan.json");
  const bool per_utt = plan.value("per_utterance_average", false);

  std::vector<VoiceSetResult> sets;
  for (const auto &combo_dir : SortedDirs(vdir)) {
    if (combo_dir.filename() == "baseline") continue;
    for (const auto &tir_dir : SortedDirs(combo_dir)) {
      for (const auto &set_dir : SortedDirs(tir_dir)) {
        if (!fs::exists(set_dir / "cell.json")) {
          // Never built; picked up as a failed planned cell below.
          continue;
        }
        const json cj = ReadJsonFile(set_dir / "cell.json");
        VoiceSetResult r;
        r.cell.combo = ParseCombo(cj.at("combo").get<std::string>());
        r.cell.tir = TirSpec(cj.at("tir_db").get<double>());
        r.cell.set_index = cj.at("set").get<int>();
        try {
          TestSetManifest m =
              ReadManifest(set_dir / "manifest.jsonl", r.cell.Name());
          r.per = ScoreTestSet(m, LoadHyps(set_dir, m, map), per_utt);
        } catch (const Error &e) {
          r.error = e.what();
        }
        sets.push_back(std::move(r));
      }
    }
  }

  // Planned cells that never produced a cell.json are failed sets.
  std::vector<VoiceSetResult> planned;
  {
    VoiceExperimentPlan p;
    p.combos.clear();
    for (const auto &c : plan.at("combos")) p.combos.push_back(ParseCombo(c.get<std::string>()));
    p.tir_grid.clear();
    for (const auto &t : plan.at("tir_grid")) p.tir_grid.emplace_back(t.get<double>());
    p.sets_per_cell = plan.at("sets_per_cell").get<int>();
    for (const auto &cell : EnumerateVoiceCells(p)) {
      auto it = std::find_if(sets.begin(), sets.end(), [&](const auto &s) {
        return s.cell.Name() == cell.Name();
      });
      if (it != sets.end()) {
        planned.push_back(*it);
      } else {
        VoiceSetResult r;
        r.cell = cell;
        r.error = "not built";
        planned.push_back(std::move(r));
      }
    }
  }

  std::optional<double> baseline;
  std::string status = "missing";
  const fs::path bdir = vdir / "baseline";
  if (fs::exists(bdir / "manifest.jsonl") || fs::exists(bdir / "error.txt")) {
    try {
      TestSetManifest m = ReadManifest(bdir / "manifest.jsonl", "voice/baseline");
      baseline = ScoreTestSet(m, LoadHyps(bdir, m, map), per_utt);
      status = "ok";
    } catch (const Error &) {
      status = "failed";
    }
  }
  return AggregateVoice(planned, baseline, status);
}

std::optional<StratifiedSet> LoadStratification(const fs::path &root,
                                                 const CollapseMap &map) {
  const fs::path seg = root / "phonemes" / "segments";
  if (!fs::exists(seg / "hyps.tsv")) return std::nullopt;
  TestSetManifest m = ReadManifest(seg / "manifest.jsonl", "phonemes/segments");
  Containment mode = Containment::kCollapsed;
  const fs::path sj = root / "phonemes" / "stratified" / "stratify.json";
  if (fs::exists(sj) &&
      ReadJsonFile(sj).value("containment", "collapsed") == "source")
    mode = Containment::kSource;
  return Stratify(m, ReadHyps(seg / "hyps.tsv", m, map), mode);
}

std::vector<PhonemeSetReport> LoadPhonemeSets(const fs::path &root,
                                              const CollapseMap &map) {
  std::vector<PhonemeSetReport> out;
  for (const auto &set_dir : SortedDirs(root / "phonemes" / "mix")) {
    if (!fs::exists(set_dir / "plan.json")) continue;
    const json plan = ReadJsonFile(set_dir / "plan.json");
    PhonemeSetReport r;
    r.name = plan.at("source_set").get<std::string>();
    r.phonemes = plan.at("phoneme_list").get<std::vector<std::string>>();
    std::vector<MixtureTrial> trials;
    for (auto [i, j] : EnumeratePhonemePairs(r.phonemes.size())) {
      const std::string &a = r.phonemes[i];
      const std::string &b = r.phonemes[j];
      const fs::path dir = set_dir / (a + "_" + b);
      try {
        TestSetManifest m = ReadManifest(dir / "manifest.jsonl");
        for (auto &h : LoadHyps(dir, m, map))
          trials.push_back({a, b, std::move(h.predicted)});
      } catch (const Error &) {
        r.failed_pairs.push_back(a + "_" + b);
      }
    }
    r.metrics = ComputeMixtureMetrics(r.phonemes, trials);
    out.push_back(std::move(r));
  }
  // Complete set first, as in the published tables.
  std::stable_sort(out.begin(), out.end(), [](const auto &x, const auto &y) {
    return (x.name == "complete") > (y.name == "complete");
  });
  return out;
}

void WritePlots(const ExperimentReport &report, const fs::path &dir) {
  fs::create_directories(dir);
  if (report.voice) {
    std::ofstream gp(dir / "per_vs_tir.gp", std::ios::trunc);
    gp << "# PER versus TIR per gender combination; dashed line: unmixed.\n"
       << "set datafile separator ','\n"
       << "set xlabel 'TIR (dB)'\nset ylabel 'PER (%)'\nset key top right\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output 'per_vs_tir.png'\n";
    if (report.voice->baseline_per)
      gp << "baseline = " << Fixed(*report.voice->baseline_per) << '\n';
    gp << "plot ";
    bool first = true;
    for (GenderCombo c : AllCombos()) {
      gp << (first ? "" : ", \\\n     ") << "'../per_vs_tir.csv' using "
         << "(strcol(1) eq '" << ComboName(c) << "' ? $2 : NaN):4 "
         << "with linespoints title '" << ComboName(c) << "'";
      first = false;
    }
    if (report.voice->baseline_per)
      gp << ", \\\n     baseline with lines dashtype 2 title 'unmixed'";
    gp << '\n';
  }
  for (const auto &set : report.phoneme_sets) {
    std::ofstream gp(dir / ("scatter_" + set.name + ".gp"), std::ios::trunc);
    gp << "# Mean prediction rate versus stratification accuracy ("
       << set.name << " set).\n"
       << "set datafile separator ','\n"
       << "set xlabel 'Stratification accuracy (%)'\n"
       << "set ylabel 'Average prediction rate (%)'\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output 'scatter_" << set.name << ".png'\n"
       << "plot '../scatter_" << set.name
       << ".csv' every ::1 using 2:3:1 with labels point pt 7 offset 1,1 "
          "notitle\n";
  }
}

}  // namespace

void AttachOrientation(ExperimentReport *report) {
  if (!report->stratification) return;
  const auto acc = report->stratification->Accuracies();
  for (auto &set : report->phoneme_sets) {
    set.orientation.reset();
    if (!set.metrics.matrix.Complete()) continue;
    bool have_all = std::all_of(set.phonemes.begin(), set.phonemes.end(),
                                [&](const auto &p) { return acc.count(p); });
    if (have_all) set.orientation = AccuracyOriented(set.metrics.matrix, acc);
  }
}

ExperimentReport LoadReport(const fs::path &run_root, const CollapseMap &map) {
  if (!fs::is_directory(run_root))
    throw IoError(Msg(run_root.string(), " is not a run directory"));
  ExperimentReport report;
  report.voice = LoadVoice(run_root, map);
  report.stratification = LoadStratification(run_root, map);
  report.phoneme_sets = LoadPhonemeSets(run_root, map);
  AttachOrientation(&report);
  return report;
}

std::vector<fs::path> EmitReports(const ExperimentReport &report,
                                  const fs::path &out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw IoError(Msg("cannot create ", out_dir.string()));
  std::vector<fs::path> written;

  {
    const fs::path p = out_dir / "per_vs_tir.csv";
    auto os = OpenCsv(p);
    os << "combo,tir_db,status,mean_per,set_pers\n";
    if (report.voice) {
      for (const auto &pt : report.voice->points) {
        os << ComboName(pt.combo) << ',' << Fixed(pt.tir_db, 1) << ','
           << pt.status << ',' << Fixed(pt.mean_per) << ',';
        for (std::size_t i = 0; i < pt.set_pers.size(); ++i)
          os << (i ? ";" : "") << Fixed(pt.set_pers[i]);
        os << '\n';
      }
      os << "unmixed,NA," << report.voice->baseline_status << ','
         << Fixed(report.voice->baseline_per) << ','
         << Fixed(report.voice->baseline_per) << '\n';
    }
    written.push_back(p);
  }

  for (const auto &set : report.phoneme_sets) {
    const fs::path p = out_dir / ("prediction_rates_" + set.name + ".csv");
    auto os = OpenCsv(p);
    WriteMatrixCsv(os, set.metrics.matrix);
    written.push_back(p);
  }

  {
    const fs::path p = out_dir / "stratification.csv";
    auto os = OpenCsv(p);
    os << "phoneme,occurrences,accuracy\n";
    if (report.stratification) {
      std::vector<std::pair<std::string, Stratum>> rows(
          report.stratification->per_phoneme.begin(),
          report.stratification->per_phoneme.end());
      std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        return a.second.kept > b.second.kept;
      });
      for (const auto &[ph, s] : rows)
        os << ph << ',' << s.kept << ',' << Fixed(100.0 * s.Accuracy(), 2)
           << '\n';
    }
    written.push_back(p);
  }

  {
    const fs::path p = out_dir / "summary.csv";
    auto os = OpenCsv(p);
    os << "set,status,trials,avg_length,error_rate,oriented,total_pairs,"
          "oriented_pct\n";
    for (const auto &set : report.phoneme_sets) {
      os << set.name << ',' << (set.failed_pairs.empty() ? "ok" : "partial")
         << ',' << set.metrics.total_trials << ','
         << Fixed(set.metrics.avg_length) << ','
         << Fixed(set.metrics.error_rate) << ',';
      if (set.orientation && set.orientation->total > 0) {
        os << set.orientation->oriented << ',' << set.orientation->total << ','
           << Fixed(100.0 * set.orientation->oriented / set.orientation->total,
                    1);
      } else {
        os << "NA,NA,NA";
      }
      os << '\n';
    }
    written.push_back(p);
  }

  const auto acc = report.stratification
                       ? report.stratification->Accuracies()
                       : std::map<std::string, double>{};
  for (const auto &set : report.phoneme_sets) {
    const fs::path p = out_dir / ("scatter_" + set.name + ".csv");
    auto os = OpenCsv(p);
    os << "phoneme,stratification_accuracy,mean_prediction_rate\n";
    for (std::size_t r = 0; r < set.phonemes.size(); ++r) {
      auto it = acc.find(set.phonemes[r]);
      os << set.phonemes[r] << ','
         << (it == acc.end() ? "NA" : Fixed(100.0 * it->second, 2)) << ','
         << Fixed(set.metrics.matrix.RowMean(r), 2) << '\n';
    }
    written.push_back(p);
  }

  WritePlots(report, out_dir / "plots");
  return written;
}

}  // namespace mixeval
