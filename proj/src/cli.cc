// src/cli.cc

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

#include "mixeval/cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixeval/config.h"
#include "mixeval/corpus.h"
#include "mixeval/error.h"
#include "mixeval/experiments.h"
#include "mixeval/features.h"
#include "mixeval/report.h"

#ifndef MIXEVAL_VERSION
#define MIXEVAL_VERSION "unknown"
#endif

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const char *Version() { return MIXEVAL_VERSION; }

namespace {

// Raw flag values.  Anything left unset keeps the config (or default) value.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> timit_root;
  std::optional<std::string> catalog;
  std::optional<std::string> collapse_map;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool no_sa = false;

  bool features = false;
  std::optional<int> sample_rate;
  std::optional<double> window_length, hop, pre_emphasis, log_floor;
  std::optional<int> mel_filters, cepstral_coeffs, delta_window;

  std::vector<std::string> combos;
  std::vector<double> tirs;
  std::optional<int> sets;
  bool allow_same_speaker = false;
  bool active_speech_power = false;
  bool per_utterance = false;

  std::vector<std::string> phonemes;
  std::optional<int> mixings;
  std::vector<std::string> phoneme_sets;
  std::optional<std::string> containment;

  std::optional<std::string> backend;
  std::optional<std::string> backend_cmd;
  std::optional<std::string> exchange_dir;
  std::optional<double> timeout;
  std::optional<double> sub_rate, del_rate, ins_rate;
  std::optional<std::uint64_t> backend_seed;

  // ingest / score / featurize / transcribe
  std::optional<std::string> refs, hyps, manifest;
};

void AddCommon(CLI::App *app, Flags *f) {
  app->add_option("--config", f->config, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", f->seed, "Master seed");
  app->add_option("--workers", f->workers, "Data-parallel width")
      ->check(CLI::PositiveNumber);
  app->add_option("--collapse-map", f->collapse_map,
                  "Phone collapse table (default: built-in 61 to 39 map)")
      ->check(CLI::ExistingFile);
}

void AddOutRoot(CLI::App *app, Flags *f) {
  app->add_option("--out", f->out, "Output root directory");
}

void AddCorpus(CLI::App *app, Flags *f) {
  app->add_option("--timit-root", f->timit_root,
                  std::string("TIMIT root (default: $") + kCorpusRootEnv + ")");
  app->add_option("--catalog", f->catalog, "Catalog written by 'ingest'")
      ->check(CLI::ExistingFile);
  app->add_flag("--no-sa", f->no_sa, "Skip the SA dialect sentences");
}

void AddFeatures(CLI::App *app, Flags *f) {
  app->add_flag("--features", f->features, "Also write MFCC feature files");
  app->add_option("--sample-rate", f->sample_rate);
  app->add_option("--window-length", f->window_length, "Seconds");
  app->add_option("--hop", f->hop, "Seconds");
  app->add_option("--pre-emphasis", f->pre_emphasis);
  app->add_option("--mel-filters", f->mel_filters);
  app->add_option("--cepstral-coeffs", f->cepstral_coeffs);
  app->add_option("--delta-window", f->delta_window);
  app->add_option("--log-floor", f->log_floor);
}

void AddVoice(CLI::App *app, Flags *f) {
  app->add_option("--combo", f->combos, "Gender combo(s): f-m f-f m-m m-f");
  app->add_option("--tir", f->tirs, "TIR value(s) in dB");
  app->add_option("--sets", f->sets, "Sets per cell")->check(CLI::PositiveNumber);
  app->add_flag("--allow-same-speaker", f->allow_same_speaker,
                "Let the interference come from the target's speaker");
  app->add_flag("--active-speech-power", f->active_speech_power,
                "Measure powers over aligned speech only");
  app->add_flag("--per-utterance", f->per_utterance,
                "Average per-utterance PERs instead of pooling");
}

void AddPhoneme(CLI::App *app, Flags *f) {
  app->add_option("--phonemes", f->phonemes, "Phoneme list");
  app->add_option("--mixings", f->mixings, "Mixings per pair")
      ->check(CLI::PositiveNumber);
  app->add_option("--set", f->phoneme_sets, "Source set(s): complete stratified");
  app->add_option("--containment", f->containment, "collapsed or source")
      ->check(CLI::IsMember({"collapsed", "source"}));
}

void AddBackend(CLI::App *app, Flags *f) {
  app->add_option("--backend", f->backend,
                  "echo, empty, corrupt, subprocess or directory")
      ->check(CLI::IsMember({"echo", "empty", "corrupt", "subprocess", "directory"}));
  app->add_option("--backend-cmd", f->backend_cmd,
                  "Command launched as '<cmd> --manifest M --out H'");
  app->add_option("--exchange-dir", f->exchange_dir,
                  "Exchange root for the directory backend");
  app->add_option("--timeout", f->timeout, "Directory backend timeout (s)");
  app->add_option("--sub-rate", f->sub_rate, "Corruption oracle");
  app->add_option("--del-rate", f->del_rate, "Corruption oracle");
  app->add_option("--ins-rate", f->ins_rate, "Corruption oracle");
  app->add_option("--backend-seed", f->backend_seed,
                  "Corruption oracle seed (default: master seed)");
}

// Loaded configuration with flag overrides applied.
struct Resolved {
  RunConfig cfg;
  bool backend_configured = false;
};

Resolved Resolve(const Flags &f) {
  Resolved r;
  json j = json::object();
  if (f.config) {
    std::ifstream is(*f.config);
    if (!is) throw IoError(Msg("cannot open config ", *f.config));
    try {
      j = json::parse(is, nullptr, true, true);
    } catch (const json::exception &e) {
      throw ParseError(Msg(*f.config, ": ", e.what()));
    }
    try {
      r.cfg = ParseConfig(j);
    } catch (const json::exception &e) {
      throw ArgumentError(Msg(*f.config, ": ", e.what()));
    }
    r.backend_configured = j.is_object() && j.contains("backend");
  }
  RunConfig &c = r.cfg;
  if (f.timit_root) c.corpus_root = *f.timit_root;
  if (f.collapse_map) c.collapse_map = *f.collapse_map;
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.no_sa) c.include_sa = false;

  if (f.features) c.write_features = true;
  if (f.sample_rate) c.features.sample_rate = *f.sample_rate;
  if (f.window_length) c.features.window_length = *f.window_length;
  if (f.hop) c.features.hop = *f.hop;
  if (f.pre_emphasis) c.features.pre_emphasis = *f.pre_emphasis;
  if (f.mel_filters) c.features.mel_filters = *f.mel_filters;
  if (f.cepstral_coeffs) c.features.cepstral_coeffs = *f.cepstral_coeffs;
  if (f.delta_window) c.features.delta_window = *f.delta_window;
  if (f.log_floor) c.features.log_floor = *f.log_floor;

  if (!f.combos.empty()) {
    c.voice.combos.clear();
    for (const auto &s : f.combos) c.voice.combos.push_back(ParseCombo(s));
  }
  if (!f.tirs.empty()) {
    c.voice.tir_grid.clear();
    for (double t : f.tirs) c.voice.tir_grid.emplace_back(t);
  }
  if (f.sets) c.voice.sets_per_cell = *f.sets;
  if (f.allow_same_speaker) c.voice.exclude_same_speaker = false;
  if (f.active_speech_power) c.voice.active_speech_power = true;
  if (f.per_utterance) c.voice.per_utterance_average = true;

  if (!f.phonemes.empty()) c.phoneme.phoneme_list = f.phonemes;
  if (f.mixings) c.phoneme.mixings_per_pair = *f.mixings;
  if (!f.phoneme_sets.empty()) c.phoneme_sets = f.phoneme_sets;
  if (f.containment)
    c.containment = *f.containment == "source" ? Containment::kSource
                                               : Containment::kCollapsed;

  if (f.backend) {
    c.backend.mode = *f.backend;
    r.backend_configured = true;
  }
  if (f.backend_cmd) c.backend.command = *f.backend_cmd;
  if (f.exchange_dir) c.backend.exchange_dir = *f.exchange_dir;
  if (f.timeout) c.backend.timeout_seconds = *f.timeout;
  if (f.sub_rate) c.backend.rates.sub = *f.sub_rate;
  if (f.del_rate) c.backend.rates.del = *f.del_rate;
  if (f.ins_rate) c.backend.rates.ins = *f.ins_rate;
  if (f.backend_seed) {
    c.backend.seed = *f.backend_seed;
    c.backend_seed_explicit = true;
  }
  c.PropagateSeed();
  c.Validate();
  return r;
}

CollapseMap LoadMap(const RunConfig &cfg) {
  return cfg.collapse_map ? CollapseMap::ReadFile(*cfg.collapse_map)
                          : CollapseMap::Default();
}

CorpusCatalog LoadCatalog(const Flags &f, const RunConfig &cfg) {
  if (f.catalog) return CorpusCatalog::ReadJson(*f.catalog);
  ScanOptions opts;
  opts.include_sa = cfg.include_sa;
  CorpusCatalog catalog = ScanCorpus(cfg.ResolveCorpusRoot(), opts);
  for (const auto &w : catalog.warnings())
    std::cerr << "warning: " << w << '\n';
  return catalog;
}

RunContext MakeContext(const RunConfig &cfg, const fs::path &out_root) {
  RunContext ctx;
  ctx.out_root = fs::absolute(out_root);
  ctx.map = LoadMap(cfg);
  const BackendSpec spec = cfg.backend;
  ctx.backend = [spec] { return MakeBackend(spec); };
  ctx.backend_identity = MakeBackend(spec)->Identity();
  ctx.workers = cfg.workers;
  ctx.write_features = cfg.write_features;
  ctx.features = cfg.features;
  ctx.containment = cfg.containment;
  return ctx;
}

void WriteLedger(const fs::path &root, const std::string &command,
                 const RunConfig &cfg, const std::string &backend_identity,
                 const std::vector<std::string> &args) {
  ordered_json j;
  j["command"] = command;
  j["version"] = Version();
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["backend"] = backend_identity;
  j["argv"] = args;
  j["config"] = ConfigToJson(cfg);
  const fs::path dir = root / "ledger";
  fs::create_directories(dir);
  std::ofstream os(dir / (command + ".json"), std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ledger in ", dir.string()));
  os << j.dump(2) << '\n';
}

fs::path OutRoot(const Flags &f, const RunConfig &cfg) {
  return f.out ? fs::path(*f.out) : cfg.output_root;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v);
  return buf;
}

void PrintVoice(const VoiceReport &v) {
  if (v.baseline_per)
    std::cout << "unmixed baseline: PER " << Percent(*v.baseline_per) << '\n';
  for (const auto &p : v.points) {
    std::cout << ComboName(p.combo) << " tir " << p.tir_db << " dB: ";
    if (p.mean_per)
      std::cout << "PER " << Percent(*p.mean_per);
    else
      std::cout << "no result";
    std::cout << " (" << p.status << ")\n";
  }
}

void PrintStratification(const StratifiedSet &s) {
  for (const auto &[ph, st] : s.per_phoneme)
    std::cout << ph << ": " << st.kept << "/" << st.total << " kept ("
              << Percent(100.0 * st.Accuracy()) << ")\n";
}

void PrintPhonemeSet(const PhonemeSetReport &r) {
  std::cout << r.name << ": " << r.metrics.total_trials << " trials, error rate "
            << Percent(r.metrics.error_rate) << ", avg length "
            << r.metrics.avg_length;
  if (r.orientation)
    std::cout << ", accuracy-oriented " << r.orientation->oriented << "/"
              << r.orientation->total;
  if (!r.failed_pairs.empty())
    std::cout << ", " << r.failed_pairs.size() << " failed pairs";
  std::cout << '\n';
}

TestSetManifest LoadSourceSet(const fs::path &out_root, const std::string &set) {
  const fs::path p = set == "complete"
                         ? out_root / "phonemes" / "segments" / "manifest.jsonl"
                         : out_root / "phonemes" / "stratified" / "manifest.jsonl";
  if (!fs::exists(p))
    throw ArgumentError(Msg("no ", set, " phoneme set at ", p.string(), " (run ",
                            set == "complete" ? "extract-phonemes" : "stratify",
                            " first)"));
  return ReadManifest(p, set == "complete" ? "phonemes/segments"
                                           : "phonemes/stratified");
}

bool AllOk(const ExperimentReport &r) {
  if (r.voice) {
    if (r.voice->baseline_status != "ok") return false;
    for (const auto &p : r.voice->points)
      if (p.status != "ok") return false;
  }
  for (const auto &s : r.phoneme_sets)
    if (!s.failed_pairs.empty()) return false;
  return true;
}

int CmdIngest(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  if (!f.out) throw UsageError("ingest: --out is required");
  ScanOptions opts;
  opts.include_sa = r.cfg.include_sa;
  CorpusCatalog catalog = ScanCorpus(r.cfg.ResolveCorpusRoot(), opts);
  for (const auto &w : catalog.warnings()) std::cerr << "warning: " << w << '\n';
  const fs::path out = *f.out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  catalog.WriteJson(out);
  for (Split s : {Split::kTrain, Split::kTest})
    for (Gender g : {Gender::kFemale, Gender::kMale})
      std::cout << SplitName(s) << ' ' << GenderName(g) << ": "
                << catalog.NumSpeakers(s, g) << " speakers, "
                << catalog.NumUtterances(s, g) << " utterances\n";
  WriteLedger(fs::absolute(out).parent_path(), "ingest", r.cfg, "", args);
  return 0;
}

int CmdMixVoices(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  const CorpusCatalog catalog = LoadCatalog(f, r.cfg);
  RunContext ctx = MakeContext(r.cfg, OutRoot(f, r.cfg));
  int status = 0;
  if (r.backend_configured) {
    VoiceReport v = RunVoiceExperiment(catalog, r.cfg.voice, ctx);
    PrintVoice(v);
    ExperimentReport rep;
    rep.voice = v;
    if (!AllOk(rep)) status = 1;
  } else {
    auto sets = BuildVoiceTestsets(catalog, r.cfg.voice, ctx);
    std::cout << sets.size() << " voice test sets written under "
              << (ctx.out_root / "voice").string() << '\n';
  }
  WriteLedger(ctx.out_root, "mix-voices", r.cfg,
              r.backend_configured ? ctx.backend_identity : "", args);
  if (status) std::cerr << "mix-voices: some cells failed (see error.txt)\n";
  return status;
}

int CmdExtract(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  const CorpusCatalog catalog = LoadCatalog(f, r.cfg);
  RunContext ctx = MakeContext(r.cfg, OutRoot(f, r.cfg));
  TestSetManifest m = ExtractPhonemeSet(catalog, ctx);
  std::cout << m.entries.size() << " phone segments written to "
            << (ctx.out_root / "phonemes" / "segments").string() << '\n';
  WriteLedger(ctx.out_root, "extract-phonemes", r.cfg, "", args);
  return 0;
}

int CmdStratify(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  RunContext ctx = MakeContext(r.cfg, OutRoot(f, r.cfg));
  TestSetManifest segments = LoadSourceSet(ctx.out_root, "complete");
  StratifiedSet s = RunStratification(segments, ctx);
  PrintStratification(s);
  WriteLedger(ctx.out_root, "stratify", r.cfg, ctx.backend_identity, args);
  return 0;
}

int CmdMixPhonemes(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  RunContext ctx = MakeContext(r.cfg, OutRoot(f, r.cfg));
  int status = 0;
  for (const auto &set : r.cfg.phoneme_sets) {
    PhonemeExperimentPlan plan = r.cfg.phoneme;
    plan.source_set = set;
    TestSetManifest source = LoadSourceSet(ctx.out_root, set);
    if (r.backend_configured) {
      PhonemeSetReport rep = RunPhonemeExperiment(plan, source, ctx);
      PrintPhonemeSet(rep);
      if (!rep.failed_pairs.empty()) status = 1;
    } else {
      auto pairs = BuildPhonemeTrials(plan, source, ctx);
      std::cout << set << ": " << pairs.size() << " pair manifests, "
                << plan.mixings_per_pair << " mixings each\n";
    }
  }
  WriteLedger(ctx.out_root, "mix-phonemes", r.cfg,
              r.backend_configured ? ctx.backend_identity : "", args);
  if (status) std::cerr << "mix-phonemes: some pairs failed (see error.txt)\n";
  return status;
}

int CmdFeaturize(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  if (!f.manifest) throw UsageError("featurize: --manifest is required");
  const fs::path in = *f.manifest;
  const fs::path out = f.out ? fs::path(*f.out) : in;
  TestSetManifest m = ReadManifest(in);
  const fs::path dir = fs::absolute(out).parent_path() / "features";
  fs::create_directories(dir);
  const FeatureConfig cfg = r.cfg.features;
  cfg.Validate();
  ParallelFor(m.entries.size(), r.cfg.workers, [&](std::size_t i, int) {
    ManifestEntry &e = m.entries[i];
    const fs::path p = dir / (e.id + ".mxf");
    WriteFeatures(p, Mfcc39(LoadAudio(e.audio), cfg), cfg);
    e.features = p;
  });
  WriteManifest(out, m);
  std::cout << m.entries.size() << " feature files written to "
            << dir.string() << '\n';
  WriteLedger(fs::absolute(out).parent_path(), "featurize", r.cfg, "", args);
  return 0;
}

int CmdScore(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  if (!f.refs || !f.hyps) throw UsageError("score: --refs and --hyps are required");
  const CollapseMap map = LoadMap(r.cfg);
  TestSetManifest m = ReadManifest(*f.refs);
  auto hyps = ReadHyps(*f.hyps, m, map);
  const fs::path csv = f.out ? fs::path(*f.out)
                             : fs::absolute(*f.hyps).parent_path() / "scores.csv";
  const double per =
      ScoreTestSet(m, hyps, r.cfg.voice.per_utterance_average, csv);
  std::cout << "PER " << Percent(per) << " over " << m.entries.size()
            << " utterances\n";
  WriteLedger(fs::absolute(csv).parent_path(), "score", r.cfg, "", args);
  return 0;
}

int CmdTranscribe(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  if (!f.manifest) throw UsageError("transcribe: --manifest is required");
  TestSetManifest m = ReadManifest(*f.manifest);
  const fs::path dir =
      f.out ? fs::path(*f.out) : fs::absolute(*f.manifest).parent_path();
  auto backend = MakeBackend(r.cfg.backend);
  auto hyps = Transcribe(m, *backend, dir, LoadMap(r.cfg));
  std::cout << hyps.size() << " hypotheses written to "
            << (dir / "hyps.tsv").string() << '\n';
  WriteLedger(fs::absolute(dir), "transcribe", r.cfg, backend->Identity(), args);
  return 0;
}

int CmdReport(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  const fs::path root = fs::absolute(OutRoot(f, r.cfg));
  ExperimentReport rep = LoadReport(root, LoadMap(r.cfg));
  AttachOrientation(&rep);
  auto files = EmitReports(rep, root / "reports");
  for (const auto &p : files) std::cout << p.string() << '\n';
  WriteLedger(root, "report", r.cfg, "", args);
  return 0;
}

int CmdRunAll(const Flags &f, const std::vector<std::string> &args) {
  Resolved r = Resolve(f);
  const CorpusCatalog catalog = LoadCatalog(f, r.cfg);
  RunContext ctx = MakeContext(r.cfg, OutRoot(f, r.cfg));
  fs::create_directories(ctx.out_root);
  catalog.WriteJson(ctx.out_root / "catalog.json");

  ExperimentReport rep;
  rep.voice = RunVoiceExperiment(catalog, r.cfg.voice, ctx);
  PrintVoice(*rep.voice);

  TestSetManifest segments = ExtractPhonemeSet(catalog, ctx);
  TestSetManifest stratified;
  const bool want_stratified =
      std::find(r.cfg.phoneme_sets.begin(), r.cfg.phoneme_sets.end(),
                "stratified") != r.cfg.phoneme_sets.end();
  rep.stratification = RunStratification(segments, ctx);
  PrintStratification(*rep.stratification);
  if (want_stratified) stratified = LoadSourceSet(ctx.out_root, "stratified");

  for (const auto &set : r.cfg.phoneme_sets) {
    PhonemeExperimentPlan plan = r.cfg.phoneme;
    plan.source_set = set;
    rep.phoneme_sets.push_back(RunPhonemeExperiment(
        plan, set == "complete" ? segments : stratified, ctx));
  }
  AttachOrientation(&rep);
  for (const auto &s : rep.phoneme_sets) PrintPhonemeSet(s);
  for (const auto &p : EmitReports(rep, ctx.out_root / "reports"))
    std::cout << p.string() << '\n';
  WriteLedger(ctx.out_root, "run-all", r.cfg, ctx.backend_identity, args);
  if (!AllOk(rep)) {
    std::cerr << "run-all: some cells or pairs failed (see error.txt files)\n";
    return 1;
  }
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string> &args) {
  CLI::App app{"mixeval: cocktail-party phoneme recognition evaluation",
               "mixeval"};
  app.set_version_flag("--version", std::string(Version()));
  app.require_subcommand(1);
  Flags f;

  auto *ingest = app.add_subcommand("ingest", "Scan a TIMIT tree into a catalog");
  AddCommon(ingest, &f);
  ingest->add_option("--timit-root", f.timit_root,
                     std::string("TIMIT root (default: $") + kCorpusRootEnv + ")");
  ingest->add_flag("--no-sa", f.no_sa, "Skip the SA dialect sentences");
  ingest->add_option("--out", f.out, "Catalog JSON to write");

  auto *mixv = app.add_subcommand(
      "mix-voices", "Build voice-mixture test sets (and score them with --backend)");
  AddCommon(mixv, &f);
  AddOutRoot(mixv, &f);
  AddCorpus(mixv, &f);
  AddVoice(mixv, &f);
  AddFeatures(mixv, &f);
  AddBackend(mixv, &f);

  auto *extract = app.add_subcommand("extract-phonemes",
                                     "Cut test utterances into phone segments");
  AddCommon(extract, &f);
  AddOutRoot(extract, &f);
  AddCorpus(extract, &f);

  auto *strat = app.add_subcommand("stratify",
                                   "Run the backend on every segment and filter");
  AddCommon(strat, &f);
  AddOutRoot(strat, &f);
  AddPhoneme(strat, &f);
  AddBackend(strat, &f);

  auto *mixp = app.add_subcommand(
      "mix-phonemes", "Build phoneme-pair mixtures (and score them with --backend)");
  AddCommon(mixp, &f);
  AddOutRoot(mixp, &f);
  AddPhoneme(mixp, &f);
  AddFeatures(mixp, &f);
  AddBackend(mixp, &f);

  auto *feat = app.add_subcommand("featurize", "Write MFCC features for a manifest");
  AddCommon(feat, &f);
  AddFeatures(feat, &f);
  feat->add_option("--manifest", f.manifest, "Input manifest.jsonl")
      ->check(CLI::ExistingFile);
  feat->add_option("--out", f.out, "Output manifest (default: overwrite input)");

  auto *score = app.add_subcommand("score", "Score hypotheses against a manifest");
  AddCommon(score, &f);
  score->add_option("--refs", f.refs, "Reference manifest.jsonl")
      ->check(CLI::ExistingFile);
  score->add_option("--hyps", f.hyps, "hyps.tsv")->check(CLI::ExistingFile);
  score->add_option("--out", f.out, "Per-utterance CSV (default: scores.csv next to hyps)");
  score->add_flag("--per-utterance", f.per_utterance,
                  "Average per-utterance PERs instead of pooling");

  auto *trans = app.add_subcommand("transcribe", "Run a backend on a manifest");
  AddCommon(trans, &f);
  AddBackend(trans, &f);
  trans->add_option("--manifest", f.manifest, "Input manifest.jsonl")
      ->check(CLI::ExistingFile);
  trans->add_option("--out", f.out, "Work directory for hyps.tsv");

  auto *report = app.add_subcommand("report", "Emit CSV reports for a run directory");
  AddCommon(report, &f);
  AddOutRoot(report, &f);

  auto *all = app.add_subcommand("run-all", "Run every experiment and emit reports");
  AddCommon(all, &f);
  AddOutRoot(all, &f);
  AddCorpus(all, &f);
  AddVoice(all, &f);
  AddPhoneme(all, &f);
  AddFeatures(all, &f);
  AddBackend(all, &f);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes from the back
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) return CmdIngest(f, args);
    if (*mixv) return CmdMixVoices(f, args);
    if (*extract) return CmdExtract(f, args);
    if (*strat) return CmdStratify(f, args);
    if (*mixp) return CmdMixPhonemes(f, args);
    if (*feat) return CmdFeaturize(f, args);
    if (*score) return CmdScore(f, args);
    if (*trans) return CmdTranscribe(f, args);
    if (*report) return CmdReport(f, args);
    if (*all) return CmdRunAll(f, args);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int RunCli(int argc, char **argv) {
  return RunCli(std::vector<std::string>(argv, argv + argc));
}

}  // namespace mixeval
