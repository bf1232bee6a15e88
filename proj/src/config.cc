// src/config.cc

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

#include "mixeval/config.h"

#include <cstdlib>
#include <fstream>
#include <set>

#include "mixeval/error.h"

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void RejectUnknown(const json &obj, const std::set<std::string> &allowed,
                   const std::string &where) {
  if (!obj.is_object())
    throw ArgumentError(Msg("config: '", where, "' must be an object"));
  for (const auto &[key, value] : obj.items())
    if (!allowed.count(key))
      throw ArgumentError(Msg("config: unknown key '", where.empty() ? "" : where + ".",
                              key, "'"));
}

template <typename T>
void Get(const json &obj, const char *key, T *out, const std::string &where) {
  if (!obj.contains(key)) return;
  try {
    *out = obj.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ArgumentError(Msg("config: bad value for '", where, key, "': ", e.what()));
  }
}

// Optional path: absent or null leaves it unset.
void GetPath(const json &obj, const char *key,
             std::optional<std::filesystem::path> *out, const std::string &where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  std::string s;
  Get(obj, key, &s, where);
  *out = s;
}

}  // namespace

void RunConfig::Validate() const {
  if (workers < 1) throw ArgumentError("workers must be >= 1");
  features.Validate();
  voice.Validate();
  backend.Validate();
  for (const auto &s : phoneme_sets)
    if (s != "complete" && s != "stratified")
      throw ArgumentError(Msg("unknown phoneme set '", s, "'"));
  if (phoneme.mixings_per_pair < 1)
    throw PlanError("mixings_per_pair must be >= 1");
}

fs::path RunConfig::ResolveCorpusRoot() const {
  if (corpus_root) return *corpus_root;
  if (const char *env = std::getenv(kCorpusRootEnv); env && *env) return env;
  throw ArgumentError(Msg("no corpus root: pass --timit-root, set corpus_root "
                          "in the config, or set ", kCorpusRootEnv));
}

void RunConfig::PropagateSeed() {
  voice.master_seed = seed;
  phoneme.master_seed = seed;
  if (!backend_seed_explicit) backend.seed = seed;
}

namespace {

RunConfig ParseFields(const json &j) {
  RunConfig cfg;
  RejectUnknown(j,
                {"corpus_root", "output_root", "include_sa", "collapse_map",
                 "seed", "workers", "features", "voice", "phoneme", "backend"},
                "");
  GetPath(j, "corpus_root", &cfg.corpus_root, "");
  if (j.contains("output_root"))
    cfg.output_root = j["output_root"].get<std::string>();
  Get(j, "include_sa", &cfg.include_sa, "");
  GetPath(j, "collapse_map", &cfg.collapse_map, "");
  Get(j, "seed", &cfg.seed, "");
  Get(j, "workers", &cfg.workers, "");

  if (j.contains("features")) {
    const json &f = j["features"];
    RejectUnknown(f,
                  {"enabled", "sample_rate", "window_length", "hop",
                   "pre_emphasis", "mel_filters", "cepstral_coeffs",
                   "delta_window", "log_floor"},
                  "features");
    const std::string w = "features.";
    Get(f, "enabled", &cfg.write_features, w);
    Get(f, "sample_rate", &cfg.features.sample_rate, w);
    Get(f, "window_length", &cfg.features.window_length, w);
    Get(f, "hop", &cfg.features.hop, w);
    Get(f, "pre_emphasis", &cfg.features.pre_emphasis, w);
    Get(f, "mel_filters", &cfg.features.mel_filters, w);
    Get(f, "cepstral_coeffs", &cfg.features.cepstral_coeffs, w);
    Get(f, "delta_window", &cfg.features.delta_window, w);
    Get(f, "log_floor", &cfg.features.log_floor, w);
  }

  if (j.contains("voice")) {
    const json &v = j["voice"];
    RejectUnknown(v,
                  {"combos", "tir_grid", "sets_per_cell", "exclude_same_speaker",
                   "active_speech_power", "per_utterance_average"},
                  "voice");
    const std::string w = "voice.";
    if (v.contains("combos")) {
      cfg.voice.combos.clear();
      for (const auto &c : v["combos"])
        cfg.voice.combos.push_back(ParseCombo(c.get<std::string>()));
    }
    if (v.contains("tir_grid")) {
      cfg.voice.tir_grid.clear();
      for (const auto &t : v["tir_grid"]) cfg.voice.tir_grid.emplace_back(t.get<double>());
    }
    Get(v, "sets_per_cell", &cfg.voice.sets_per_cell, w);
    Get(v, "exclude_same_speaker", &cfg.voice.exclude_same_speaker, w);
    Get(v, "active_speech_power", &cfg.voice.active_speech_power, w);
    Get(v, "per_utterance_average", &cfg.voice.per_utterance_average, w);
  }

  if (j.contains("phoneme")) {
    const json &p = j["phoneme"];
    RejectUnknown(p, {"phoneme_list", "mixings_per_pair", "sets", "containment"},
                  "phoneme");
    const std::string w = "phoneme.";
    Get(p, "phoneme_list", &cfg.phoneme.phoneme_list, w);
    Get(p, "mixings_per_pair", &cfg.phoneme.mixings_per_pair, w);
    Get(p, "sets", &cfg.phoneme_sets, w);
    if (p.contains("containment")) {
      const std::string c = p["containment"].get<std::string>();
      if (c == "collapsed")
        cfg.containment = Containment::kCollapsed;
      else if (c == "source")
        cfg.containment = Containment::kSource;
      else
        throw ArgumentError(Msg("config: bad phoneme.containment '", c, "'"));
    }
  }

  if (j.contains("backend")) {
    const json &b = j["backend"];
    RejectUnknown(b,
                  {"mode", "command", "exchange_dir", "timeout_seconds", "sub",
                   "del", "ins", "seed"},
                  "backend");
    const std::string w = "backend.";
    Get(b, "mode", &cfg.backend.mode, w);
    Get(b, "command", &cfg.backend.command, w);
    GetPath(b, "exchange_dir", &cfg.backend.exchange_dir, "backend.");
    Get(b, "timeout_seconds", &cfg.backend.timeout_seconds, w);
    Get(b, "sub", &cfg.backend.rates.sub, w);
    Get(b, "del", &cfg.backend.rates.del, w);
    Get(b, "ins", &cfg.backend.rates.ins, w);
    if (b.contains("seed")) {
      Get(b, "seed", &cfg.backend.seed, w);
      cfg.backend_seed_explicit = true;
    }
  }
  cfg.PropagateSeed();
  cfg.Validate();
  return cfg;
}

}  // namespace

RunConfig ParseConfig(const json &j) {
  try {
    return ParseFields(j);
  } catch (const json::exception &e) {
    throw ArgumentError(Msg("config: ", e.what()));
  }
}

RunConfig LoadConfig(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open config ", path.string()));
  json j;
  try {
    j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception &e) {
    throw ParseError(Msg(path.string(), ": ", e.what()));
  }
  try {
    return ParseConfig(j);
  } catch (const ArgumentError &e) {
    throw ArgumentError(Msg(path.string(), ": ", e.what()));
  }
}

ordered_json ConfigToJson(const RunConfig &cfg) {
  ordered_json j;
  j["corpus_root"] =
      cfg.corpus_root ? ordered_json(cfg.corpus_root->string()) : ordered_json();
  j["output_root"] = cfg.output_root.string();
  j["include_sa"] = cfg.include_sa;
  j["collapse_map"] =
      cfg.collapse_map ? ordered_json(cfg.collapse_map->string()) : ordered_json();
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  const auto &f = cfg.features;
  j["features"] = {{"enabled", cfg.write_features},
                   {"sample_rate", f.sample_rate},
                   {"window_length", f.window_length},
                   {"hop", f.hop},
                   {"pre_emphasis", f.pre_emphasis},
                   {"mel_filters", f.mel_filters},
                   {"cepstral_coeffs", f.cepstral_coeffs},
                   {"delta_window", f.delta_window},
                   {"log_floor", f.log_floor}};
  ordered_json combos = ordered_json::array();
  for (auto c : cfg.voice.combos) combos.push_back(std::string(ComboName(c)));
  ordered_json grid = ordered_json::array();
  for (auto t : cfg.voice.tir_grid) grid.push_back(t.db);
  j["voice"] = {{"combos", combos},
                {"tir_grid", grid},
                {"sets_per_cell", cfg.voice.sets_per_cell},
                {"exclude_same_speaker", cfg.voice.exclude_same_speaker},
                {"active_speech_power", cfg.voice.active_speech_power},
                {"per_utterance_average", cfg.voice.per_utterance_average}};
  j["phoneme"] = {
      {"phoneme_list", cfg.phoneme.phoneme_list},
      {"mixings_per_pair", cfg.phoneme.mixings_per_pair},
      {"sets", cfg.phoneme_sets},
      {"containment",
       cfg.containment == Containment::kCollapsed ? "collapsed" : "source"}};
  const auto &b = cfg.backend;
  j["backend"] = {{"mode", b.mode},
                  {"command", b.command},
                  {"exchange_dir", b.exchange_dir
                                       ? ordered_json(b.exchange_dir->string())
                                       : ordered_json()},
                  {"timeout_seconds", b.timeout_seconds},
                  {"sub", b.rates.sub},
                  {"del", b.rates.del},
                  {"ins", b.rates.ins},
                  {"seed", b.seed}};
  return j;
}

}  // namespace mixeval
