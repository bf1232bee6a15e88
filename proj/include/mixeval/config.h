// include/mixeval/config.h

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

#ifndef MIXEVAL_CONFIG_H_
#define MIXEVAL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "mixeval/backend.h"
#include "mixeval/experiments.h"
#include "mixeval/features.h"

namespace mixeval {

/// Environment variable consulted when no corpus root is configured.
inline constexpr const char *kCorpusRootEnv = "MIXEVAL_TIMIT_ROOT";

/// Full description of a run.  Config files are JSON documents with the
/// same field names (see README); unknown keys are rejected.
struct RunConfig {
  std::optional<std::filesystem::path> corpus_root;
  std::filesystem::path output_root = "mixeval-out";
  bool include_sa = true;
  std::optional<std::filesystem::path> collapse_map;
  std::uint64_t seed = 0;
  int workers = 1;

  bool write_features = false;
  FeatureConfig features;

  VoiceExperimentPlan voice;
  PhonemeExperimentPlan phoneme;
  std::vector<std::string> phoneme_sets = {"complete", "stratified"};
  Containment containment = Containment::kCollapsed;

  BackendSpec backend;
  /// Set when the backend seed was given explicitly rather than inherited
  /// from `seed`.
  bool backend_seed_explicit = false;

  /// Throws ArgumentError / PlanError on invalid values.
  void Validate() const;
  /// Corpus root from the config or the environment; throws if neither.
  std::filesystem::path ResolveCorpusRoot() const;
  /// Applies the master seed to the plans and the corruption oracle.
  void PropagateSeed();
};

RunConfig ParseConfig(const nlohmann::json &j);
RunConfig LoadConfig(const std::filesystem::path &path);
nlohmann::ordered_json ConfigToJson(const RunConfig &cfg);

}  // namespace mixeval

#endif  // MIXEVAL_CONFIG_H_
