// include/mixeval/report.h

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

#ifndef MIXEVAL_REPORT_H_
#define MIXEVAL_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixeval/backend.h"
#include "mixeval/experiments.h"

namespace mixeval {

struct ExperimentReport {
  std::optional<VoiceReport> voice;
  std::optional<StratifiedSet> stratification;
  std::vector<PhonemeSetReport> phoneme_sets;
};

/// Fills in the orientation counts of every phoneme set from the
/// stratification accuracies (no-op without a stratification).
void AttachOrientation(ExperimentReport *report);

/// Rebuilds a report from a run directory by re-reading each manifest and
/// its hyps.tsv through the strict reader.  Sets without output or with an
/// error.txt are reported as failed.
ExperimentReport LoadReport(const std::filesystem::path &run_root,
                            const CollapseMap &map = CollapseMap::Default());

/// Writes per_vs_tir.csv, prediction_rates_<set>.csv, stratification.csv,
/// summary.csv and scatter_<set>.csv into out_dir, plus gnuplot scripts in
/// out_dir/plots.  Returns the CSV paths written.
std::vector<std::filesystem::path> EmitReports(
    const ExperimentReport &report, const std::filesystem::path &out_dir);

}  // namespace mixeval

#endif  // MIXEVAL_REPORT_H_
