// src/experiments.cc

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

#include "mixeval/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "mixeval/error.h"
#include "mixeval/seeding.h"

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string TirDirName(double db) {
  char buf[32];
  if (db == std::floor(db) && db >= 0)
    std::snprintf(buf, sizeof(buf), "tir%02d", static_cast<int>(db));
  else
    std::snprintf(buf, sizeof(buf), "tir%g", db);
  return buf;
}

std::string Padded(long long v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*lld", width, v);
  return buf;
}

void WriteJsonFile(const fs::path &path, const ordered_json &j) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  os << j.dump(1) << '\n';
}

void WriteText(const fs::path &path, const std::string &text) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  os << text << '\n';
}

// Drops stale outputs so a rebuilt directory never mixes runs.
void ResetDir(const fs::path &dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
}

std::vector<std::pair<std::int64_t, std::int64_t>> SpeechSpans(
    const UtteranceRecord &u, const CollapseMap &map) {
  std::vector<std::pair<std::int64_t, std::int64_t>> spans;
  for (const auto &e : u.alignment.entries)
    if (map.Collapse(e.label)) spans.emplace_back(e.begin, e.end);
  return spans;
}

ordered_json MixJson(const MixRecord &r) {
  ordered_json j;
  j["target"] = r.target_id;
  j["interference"] = r.interference_id;
  j["tir_db"] = r.tir.db;
  j["gain"] = r.gain;
  j["peak_scale"] = r.peak_scale;
  j["seed_path"] = r.seed_path;
  return j;
}

void MaybeWriteFeatures(const RunContext &ctx, const Waveform &w,
                        const fs::path &dir, ManifestEntry *e) {
  if (!ctx.write_features) return;
  fs::create_directories(dir / "features");
  fs::path out = fs::absolute(dir / "features" / (e->id + ".mxf"));
  WriteFeatures(out, Mfcc39(w, ctx.features), ctx.features);
  e->features = out;
}

// Lazily created backend per worker thread.
class BackendPool {
 public:
  BackendPool(const RunContext &ctx, int workers)
      : ctx_(ctx), backends_(std::max(workers, 1)) {}
  Backend &For(int worker) {
    auto &slot = backends_.at(worker);
    if (!slot) {
      if (!ctx_.backend) throw ArgumentError("no backend configured");
      slot = ctx_.backend();
    }
    return *slot;
  }

 private:
  const RunContext &ctx_;
  std::vector<std::unique_ptr<Backend>> backends_;
};

}  // namespace

std::string_view ComboName(GenderCombo c) {
  switch (c) {
    case GenderCombo::kFM: return "f-m";
    case GenderCombo::kFF: return "f-f";
    case GenderCombo::kMM: return "m-m";
    case GenderCombo::kMF: return "m-f";
  }
  return "?";
}

GenderCombo ParseCombo(std::string_view s) {
  for (GenderCombo c : AllCombos())
    if (ComboName(c) == s) return c;
  throw ArgumentError(Msg("unknown gender combination '", s,
                          "' (expected f-m, f-f, m-m or m-f)"));
}

std::vector<GenderCombo> AllCombos() {
  return {GenderCombo::kFM, GenderCombo::kFF, GenderCombo::kMM,
          GenderCombo::kMF};
}

Gender TargetGender(GenderCombo c) {
  return c == GenderCombo::kFM || c == GenderCombo::kFF ? Gender::kFemale
                                                         : Gender::kMale;
}

Gender InterferenceGender(GenderCombo c) {
  return c == GenderCombo::kFM || c == GenderCombo::kMM ? Gender::kMale
                                                         : Gender::kFemale;
}

void VoiceExperimentPlan::Validate() const {
  if (combos.empty()) throw PlanError("no gender combinations planned");
  if (tir_grid.empty()) throw PlanError("empty TIR grid");
  if (sets_per_cell < 1) throw PlanError("sets_per_cell must be >= 1");
}

std::string VoiceCell::Name() const {
  return Msg("voice/", ComboName(combo), "/", TirDirName(tir.db), "/set",
             Padded(set_index, 3));
}

std::vector<VoiceCell> EnumerateVoiceCells(const VoiceExperimentPlan &plan) {
  plan.Validate();
  std::vector<VoiceCell> cells;
  for (GenderCombo c : plan.combos)
    for (TirSpec tir : plan.tir_grid)
      for (int s = 0; s < plan.sets_per_cell; ++s) cells.push_back({c, tir, s});
  return cells;
}

void PhonemeExperimentPlan::Validate(const CollapseMap &map) const {
  if (phoneme_list.empty()) throw PlanError("empty phoneme list");
  std::vector<std::string> sorted = phoneme_list;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PlanError("phoneme list contains duplicates");
  for (const auto &p : phoneme_list)
    if (!map.IsScoringClass(p))
      throw PlanError(Msg("phoneme '", p, "' is not a scoring class"));
  if (mixings_per_pair < 1) throw PlanError("mixings_per_pair must be >= 1");
  if (source_set.empty() ||
      source_set.find_first_of("/\\ ") != std::string::npos)
    throw PlanError(Msg("bad source set name '", source_set, "'"));
}

std::vector<std::pair<std::size_t, std::size_t>> EnumeratePhonemePairs(
    std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t, int)> &fn) {
  const int nthreads =
      static_cast<int>(std::min<std::size_t>(std::max(workers, 1), n));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (int w = 0; w < nthreads; ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i, w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto &t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

TestSetManifest BuildVoiceTestset(const CorpusCatalog &catalog,
                                  const VoiceExperimentPlan &plan,
                                  const VoiceCell &cell, const RunContext &ctx) {
  const auto targets = catalog.Select(Split::kTest, TargetGender(cell.combo));
  const auto pool = catalog.Select(Split::kTest, InterferenceGender(cell.combo));
  if (targets.empty())
    throw PlanError(Msg("no ", GenderName(TargetGender(cell.combo)),
                        " test utterances to use as targets"));
  if (pool.empty())
    throw PlanError(Msg("no ", GenderName(InterferenceGender(cell.combo)),
                        " test utterances to use as interference"));

  const fs::path dir = fs::absolute(ctx.out_root / cell.Name());
  ResetDir(dir);
  fs::create_directories(dir / "audio");

  TestSetManifest m;
  m.name = cell.Name();
  std::ofstream mix_log(dir / "mix.jsonl", std::ios::trunc);
  if (!mix_log) throw IoError(Msg("cannot write ", (dir / "mix.jsonl").string()));

  for (const UtteranceRecord *t : targets) {
    std::vector<const UtteranceRecord *> candidates;
    for (const UtteranceRecord *u : pool) {
      if (u->id == t->id) continue;
      if (plan.exclude_same_speaker && u->speaker == t->speaker) continue;
      candidates.push_back(u);
    }
    if (candidates.empty())
      throw PlanError(Msg("no interference candidates for ", t->id));
    const std::string seed_path =
        SeedPath(plan.master_seed,
                 {"voice", ComboName(cell.combo), Msg("tir=", cell.tir.db),
                  Msg("set=", cell.set_index), t->id});
    Rng rng = MakeRng(seed_path);
    const UtteranceRecord *interf = candidates[UniformIndex(rng, candidates.size())];

    const Waveform tw = t->LoadWaveform();
    const Waveform iw = interf->LoadWaveform();
    MixPowers powers;
    if (plan.active_speech_power) {
      powers.target = SignalPower(tw, SpeechSpans(*t, ctx.map));
      powers.interference = SignalPower(iw, SpeechSpans(*interf, ctx.map));
    }
    MixRecord rec;
    try {
      rec = MixAtTir(tw, iw, cell.tir, LengthPolicy::kTargetLength, powers);
    } catch (const DegenerateSignalError &e) {
      throw DegenerateSignalError(
          Msg(t->id, " + ", interf->id, ": ", e.what()));
    }
    rec.target_id = t->id;
    rec.interference_id = interf->id;
    rec.seed_path = seed_path;
    rec.peak_scale = PeakNormalize(&rec.mixed);

    ManifestEntry e;
    e.id = t->id;
    e.audio = dir / "audio" / (t->id + ".wav");
    WriteWav(e.audio, rec.mixed);
    MaybeWriteFeatures(ctx, rec.mixed, dir, &e);
    e.ref = ctx.map.CollapseSequence(t->alignment.Labels());
    e.tags["combo"] = std::string(ComboName(cell.combo));
    e.tags["tir_db"] = cell.tir.db;
    e.tags["set"] = cell.set_index;
    e.tags["interference"] = interf->id;
    m.entries.push_back(std::move(e));
    mix_log << MixJson(rec).dump() << '\n';
  }
  WriteManifest(dir / "manifest.jsonl", m);
  ordered_json cj;
  cj["combo"] = std::string(ComboName(cell.combo));
  cj["tir_db"] = cell.tir.db;
  cj["set"] = cell.set_index;
  WriteJsonFile(dir / "cell.json", cj);
  return m;
}

TestSetManifest BuildBaselineManifest(const CorpusCatalog &catalog,
                                      const RunContext &ctx) {
  const fs::path dir = fs::absolute(ctx.out_root / "voice" / "baseline");
  ResetDir(dir);
  TestSetManifest m;
  m.name = "voice/baseline";
  for (const auto &u : catalog.utterances()) {
    if (u.split != Split::kTest) continue;
    ManifestEntry e;
    e.id = u.id;
    e.audio = u.audio_path;
    if (ctx.write_features) MaybeWriteFeatures(ctx, u.LoadWaveform(), dir, &e);
    e.ref = ctx.map.CollapseSequence(u.alignment.Labels());
    e.tags["gender"] = std::string(GenderName(u.gender));
    m.entries.push_back(std::move(e));
  }
  if (m.entries.empty()) throw PlanError("catalog has no test utterances");
  WriteManifest(dir / "manifest.jsonl", m);
  return m;
}

namespace {

ordered_json VoicePlanJson(const VoiceExperimentPlan &plan) {
  ordered_json j;
  j["combos"] = ordered_json::array();
  for (auto c : plan.combos) j["combos"].push_back(std::string(ComboName(c)));
  j["tir_grid"] = ordered_json::array();
  for (auto t : plan.tir_grid) j["tir_grid"].push_back(t.db);
  j["sets_per_cell"] = plan.sets_per_cell;
  j["master_seed"] = plan.master_seed;
  j["exclude_same_speaker"] = plan.exclude_same_speaker;
  j["active_speech_power"] = plan.active_speech_power;
  j["per_utterance_average"] = plan.per_utterance_average;
  return j;
}

}  // namespace

std::vector<TestSetManifest> BuildVoiceTestsets(const CorpusCatalog &catalog,
                                                const VoiceExperimentPlan &plan,
                                                const RunContext &ctx) {
  const auto cells = EnumerateVoiceCells(plan);
  WriteJsonFile(ctx.out_root / "voice" / "plan.json", VoicePlanJson(plan));
  std::vector<TestSetManifest> out(cells.size());
  std::vector<std::string> errors(cells.size());
  ParallelFor(cells.size(), ctx.workers, [&](std::size_t i, int) {
    try {
      out[i] = BuildVoiceTestset(catalog, plan, cells[i], ctx);
    } catch (const Error &e) {
      errors[i] = e.what();
      WriteText(ctx.out_root / cells[i].Name() / "error.txt", e.what());
    }
  });
  for (const auto &e : errors)
    if (!e.empty()) throw PlanError(e);
  return out;
}

double ScoreTestSet(const TestSetManifest &m, std::span<const Hypothesis> hyps,
                    bool per_utterance, const fs::path &csv_path) {
  if (hyps.size() != m.entries.size())
    throw ProtocolError(Msg(m.name, ": hypothesis count mismatch"));
  std::vector<AlignmentCounts> counts;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    counts.push_back(EditDistance(m.entries[i].ref, hyps[i].predicted));
    ids.push_back(m.entries[i].id);
  }
  if (!csv_path.empty()) {
    std::ofstream os(csv_path, std::ios::trunc);
    if (!os) throw IoError(Msg("cannot write ", csv_path.string()));
    WriteAlignmentCsv(os, ids, counts);
  }
  return per_utterance ? MeanUtterancePer(counts) : PooledPer(counts);
}

VoiceReport AggregateVoice(const std::vector<VoiceSetResult> &sets,
                           std::optional<double> baseline_per,
                           std::string baseline_status) {
  std::map<std::pair<int, double>, std::vector<const VoiceSetResult *>> groups;
  for (const auto &s : sets)
    groups[{static_cast<int>(s.cell.combo), s.cell.tir.db}].push_back(&s);
  VoiceReport report;
  report.baseline_per = baseline_per;
  report.baseline_status = std::move(baseline_status);
  for (auto &[key, members] : groups) {
    std::sort(members.begin(), members.end(), [](auto *a, auto *b) {
      return a->cell.set_index < b->cell.set_index;
    });
    VoicePoint p;
    p.combo = static_cast<GenderCombo>(key.first);
    p.tir_db = key.second;
    double acc = 0.0;
    int ok = 0;
    for (const auto *s : members) {
      p.set_pers.push_back(s->per);
      if (s->per) {
        acc += *s->per;
        ++ok;
      }
    }
    if (ok) p.mean_per = acc / ok;
    p.status = ok == static_cast<int>(members.size()) ? "ok"
               : ok == 0                              ? "failed"
                                                      : "partial";
    report.points.push_back(std::move(p));
  }
  return report;
}

VoiceReport RunVoiceExperiment(const CorpusCatalog &catalog,
                               const VoiceExperimentPlan &plan,
                               const RunContext &ctx) {
  const auto cells = EnumerateVoiceCells(plan);
  WriteJsonFile(ctx.out_root / "voice" / "plan.json", VoicePlanJson(plan));
  BackendPool backends(ctx, ctx.workers);
  std::vector<VoiceSetResult> results(cells.size());
  std::optional<double> baseline;
  std::string baseline_status = "ok";

  // Job 0 is the unmixed baseline; job i > 0 is cells[i - 1].
  ParallelFor(cells.size() + 1, ctx.workers, [&](std::size_t job, int worker) {
    if (job == 0) {
      const fs::path dir = ctx.out_root / "voice" / "baseline";
      try {
        TestSetManifest m = BuildBaselineManifest(catalog, ctx);
        auto hyps = Transcribe(m, backends.For(worker), dir, ctx.map);
        baseline = ScoreTestSet(m, hyps, plan.per_utterance_average,
                                dir / "scores.csv");
      } catch (const Error &e) {
        baseline_status = "failed";
        WriteText(dir / "error.txt", e.what());
      }
      return;
    }
    const VoiceCell &cell = cells[job - 1];
    VoiceSetResult &r = results[job - 1];
    r.cell = cell;
    const fs::path dir = ctx.out_root / cell.Name();
    try {
      TestSetManifest m = BuildVoiceTestset(catalog, plan, cell, ctx);
      auto hyps = Transcribe(m, backends.For(worker), dir, ctx.map);
      r.per = ScoreTestSet(m, hyps, plan.per_utterance_average,
                           dir / "scores.csv");
    } catch (const Error &e) {
      r.error = e.what();
      WriteText(dir / "error.txt", e.what());
    }
  });
  return AggregateVoice(results, baseline, baseline_status);
}

TestSetManifest ExtractPhonemeSet(const CorpusCatalog &catalog,
                                  const RunContext &ctx) {
  const fs::path dir = fs::absolute(ctx.out_root / "phonemes" / "segments");
  ResetDir(dir);
  fs::create_directories(dir / "audio");
  std::vector<const UtteranceRecord *> utts;
  for (const auto &u : catalog.utterances())
    if (u.split == Split::kTest) utts.push_back(&u);
  if (utts.empty()) throw PlanError("catalog has no test utterances");

  std::vector<std::vector<ManifestEntry>> parts(utts.size());
  ParallelFor(utts.size(), ctx.workers, [&](std::size_t i, int) {
    for (auto &seg : ExtractSegments(*utts[i], ctx.map)) {
      ManifestEntry e;
      e.id = seg.Id();
      e.audio = dir / "audio" / (e.id + ".wav");
      WriteWav(e.audio, seg.audio);
      e.ref = {seg.collapsed};
      e.tags["label"] = seg.label;
      e.tags["utterance"] = seg.source_utterance;
      e.tags["begin"] = seg.begin;
      e.tags["end"] = seg.end;
      parts[i].push_back(std::move(e));
    }
  });
  TestSetManifest m;
  m.name = "phonemes/segments";
  for (auto &p : parts)
    for (auto &e : p) m.entries.push_back(std::move(e));
  WriteManifest(dir / "manifest.jsonl", m);
  return m;
}

StratifiedSet RunStratification(const TestSetManifest &segments,
                                const RunContext &ctx) {
  const std::size_t batch = std::max<std::size_t>(ctx.batch_size, 1);
  const std::size_t nbatches = (segments.entries.size() + batch - 1) / batch;
  const fs::path root = ctx.out_root / "phonemes" / "stratify";
  fs::remove_all(root);
  BackendPool backends(ctx, ctx.workers);
  std::vector<std::vector<Hypothesis>> parts(nbatches);
  ParallelFor(nbatches, ctx.workers, [&](std::size_t b, int worker) {
    TestSetManifest m;
    m.name = segments.name;  // oracle seeding stays batch-independent
    const std::size_t lo = b * batch;
    const std::size_t hi = std::min(lo + batch, segments.entries.size());
    m.entries.assign(segments.entries.begin() + lo,
                     segments.entries.begin() + hi);
    const fs::path dir = root / ("batch" + Padded(b, 4));
    fs::create_directories(dir);
    parts[b] = Transcribe(m, backends.For(worker), dir, ctx.map);
  });
  std::vector<Hypothesis> hyps;
  for (auto &p : parts)
    for (auto &h : p) hyps.push_back(std::move(h));
  WriteHyps(ctx.out_root / "phonemes" / "segments" / "hyps.tsv", hyps);

  StratifiedSet set = Stratify(segments, hyps, ctx.containment);
  TestSetManifest kept;
  kept.name = "phonemes/stratified";
  std::size_t k = 0;
  for (const auto &e : segments.entries) {
    if (k < set.kept_ids.size() && set.kept_ids[k] == e.id) {
      kept.entries.push_back(e);
      ++k;
    }
  }
  const fs::path out = ctx.out_root / "phonemes" / "stratified";
  ResetDir(out);
  WriteManifest(out / "manifest.jsonl", kept);
  ordered_json j;
  j["containment"] =
      ctx.containment == Containment::kCollapsed ? "collapsed" : "source";
  WriteJsonFile(out / "stratify.json", j);
  return set;
}

namespace {

struct Pool {
  std::vector<std::string> ids;
  std::vector<Waveform> audio;
};

std::vector<Pool> LoadPools(const PhonemeExperimentPlan &plan,
                            const TestSetManifest &source) {
  std::vector<Pool> pools(plan.phoneme_list.size());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < plan.phoneme_list.size(); ++i)
    index[plan.phoneme_list[i]] = i;
  for (const auto &e : source.entries) {
    if (e.ref.size() != 1) continue;
    auto it = index.find(e.ref[0]);
    if (it == index.end()) continue;
    Waveform w = LoadAudio(e.audio);
    if (w.empty() || SignalPower(w) <= 0.0) continue;
    pools[it->second].ids.push_back(e.id);
    pools[it->second].audio.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < pools.size(); ++i)
    if (pools[i].ids.empty())
      throw PlanError(Msg("phoneme '", plan.phoneme_list[i],
                          "' has no usable segments in the ", plan.source_set,
                          " set"));
  return pools;
}

std::string PairName(const std::string &a, const std::string &b) {
  return a + "_" + b;
}

TestSetManifest BuildPairTrials(const PhonemeExperimentPlan &plan,
                                const std::vector<Pool> &pools, std::size_t i,
                                std::size_t j, const RunContext &ctx) {
  const std::string &a = plan.phoneme_list[i];
  const std::string &b = plan.phoneme_list[j];
  const std::string rel =
      Msg("phonemes/mix/", plan.source_set, "/", PairName(a, b));
  const fs::path dir = fs::absolute(ctx.out_root / rel);
  ResetDir(dir);
  fs::create_directories(dir / "audio");
  std::ofstream mix_log(dir / "mix.jsonl", std::ios::trunc);

  TestSetManifest m;
  m.name = rel;
  for (int k = 0; k < plan.mixings_per_pair; ++k) {
    const std::string seed_path =
        SeedPath(plan.master_seed,
                 {"phoneme", plan.source_set, a, b, Msg("trial=", k)});
    Rng rng = MakeRng(seed_path);
    const std::size_t ia = UniformIndex(rng, pools[i].ids.size());
    const std::size_t ib = UniformIndex(rng, pools[j].ids.size());
    MixRecord rec = MixSegments(pools[i].audio[ia], pools[j].audio[ib]);
    rec.target_id = pools[i].ids[ia];
    rec.interference_id = pools[j].ids[ib];
    rec.seed_path = seed_path;
    rec.peak_scale = PeakNormalize(&rec.mixed);

    ManifestEntry e;
    e.id = Msg(PairName(a, b), "_", Padded(k, 5));
    e.audio = dir / "audio" / (e.id + ".wav");
    WriteWav(e.audio, rec.mixed);
    MaybeWriteFeatures(ctx, rec.mixed, dir, &e);
    e.ref = {a};
    e.tags["a"] = a;
    e.tags["b"] = b;
    e.tags["a_segment"] = rec.target_id;
    e.tags["b_segment"] = rec.interference_id;
    e.tags["trial"] = k;
    m.entries.push_back(std::move(e));
    mix_log << MixJson(rec).dump() << '\n';
  }
  WriteManifest(dir / "manifest.jsonl", m);
  ordered_json pj;
  pj["a"] = a;
  pj["b"] = b;
  WriteJsonFile(dir / "pair.json", pj);
  return m;
}

ordered_json PhonemePlanJson(const PhonemeExperimentPlan &plan) {
  ordered_json j;
  j["phoneme_list"] = plan.phoneme_list;
  j["mixings_per_pair"] = plan.mixings_per_pair;
  j["source_set"] = plan.source_set;
  j["master_seed"] = plan.master_seed;
  return j;
}

}  // namespace

std::vector<TestSetManifest> BuildPhonemeTrials(
    const PhonemeExperimentPlan &plan, const TestSetManifest &source,
    const RunContext &ctx) {
  plan.Validate(ctx.map);
  const auto pools = LoadPools(plan, source);
  const auto pairs = EnumeratePhonemePairs(plan.phoneme_list.size());
  const fs::path set_dir = ctx.out_root / "phonemes" / "mix" / plan.source_set;
  fs::remove_all(set_dir);
  WriteJsonFile(set_dir / "plan.json", PhonemePlanJson(plan));
  std::vector<TestSetManifest> out(pairs.size());
  ParallelFor(pairs.size(), ctx.workers, [&](std::size_t p, int) {
    out[p] = BuildPairTrials(plan, pools, pairs[p].first, pairs[p].second, ctx);
  });
  return out;
}

PhonemeSetReport RunPhonemeExperiment(const PhonemeExperimentPlan &plan,
                                      const TestSetManifest &source,
                                      const RunContext &ctx) {
  plan.Validate(ctx.map);
  const auto pools = LoadPools(plan, source);
  const auto pairs = EnumeratePhonemePairs(plan.phoneme_list.size());
  const fs::path set_dir = ctx.out_root / "phonemes" / "mix" / plan.source_set;
  fs::remove_all(set_dir);
  WriteJsonFile(set_dir / "plan.json", PhonemePlanJson(plan));

  BackendPool backends(ctx, ctx.workers);
  std::vector<std::vector<MixtureTrial>> trials(pairs.size());
  std::vector<std::string> errors(pairs.size());
  ParallelFor(pairs.size(), ctx.workers, [&](std::size_t p, int worker) {
    const auto [i, j] = pairs[p];
    const std::string &a = plan.phoneme_list[i];
    const std::string &b = plan.phoneme_list[j];
    const fs::path dir = ctx.out_root / "phonemes" / "mix" / plan.source_set /
                         PairName(a, b);
    try {
      TestSetManifest m = BuildPairTrials(plan, pools, i, j, ctx);
      auto hyps = Transcribe(m, backends.For(worker), dir, ctx.map);
      for (auto &h : hyps) trials[p].push_back({a, b, std::move(h.predicted)});
    } catch (const Error &e) {
      errors[p] = e.what();
      WriteText(dir / "error.txt", e.what());
    }
  });

  PhonemeSetReport report;
  report.name = plan.source_set;
  report.phonemes = plan.phoneme_list;
  std::vector<MixtureTrial> all;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!errors[p].empty()) {
      report.failed_pairs.push_back(PairName(plan.phoneme_list[pairs[p].first],
                                             plan.phoneme_list[pairs[p].second]));
      continue;
    }
    for (auto &t : trials[p]) all.push_back(std::move(t));
  }
  report.metrics = ComputeMixtureMetrics(plan.phoneme_list, all);
  return report;
}

}  // namespace mixeval
