// tests/unit/experiments-test.cc

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

#include <atomic>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "mixeval/error.h"
#include "mixeval/experiments.h"
#include "mixeval/wave-io.h"
#include "test-util.h"

using namespace mixeval;
using namespace mixeval::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunContext EchoContext(const fs::path &root, int workers = 2) {
  RunContext ctx;
  ctx.out_root = root;
  ctx.backend = [] { return std::make_unique<EchoBackend>(); };
  ctx.backend_identity = "oracle:echo";
  ctx.workers = workers;
  return ctx;
}

std::vector<json> ReadJsonLines(const fs::path &p) {
  std::ifstream is(p);
  std::vector<json> out;
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("combo names and genders") {
  CHECK(ComboName(GenderCombo::kFM) == "f-m");
  CHECK(ParseCombo("m-f") == GenderCombo::kMF);
  CHECK(TargetGender(GenderCombo::kMF) == Gender::kMale);
  CHECK(InterferenceGender(GenderCombo::kMF) == Gender::kFemale);
  CHECK(AllCombos().size() == 4);
  CHECK_THROWS_AS(ParseCombo("x-y"), ArgumentError);
}

TEST_CASE("default voice plan enumerates every cell once") {
  VoiceExperimentPlan plan;
  auto cells = EnumerateVoiceCells(plan);
  CHECK(cells.size() == 4 * 11 * 33);
  std::set<std::string> names;
  for (const auto &c : cells) names.insert(c.Name());
  CHECK(names.size() == cells.size());
  CHECK(cells.front().Name() == "voice/f-m/tir00/set000");
  plan.sets_per_cell = 0;
  CHECK_THROWS_AS(plan.Validate(), PlanError);
}

TEST_CASE("phoneme pairs are unordered with self-pairs") {
  for (std::size_t n : {1u, 2u, 5u, 10u}) {
    auto pairs = EnumeratePhonemePairs(n);
    std::set<std::pair<std::size_t, std::size_t>> brute;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) brute.insert({std::min(a, b), std::max(a, b)});
    CHECK(pairs.size() == brute.size());
    CHECK(std::set(pairs.begin(), pairs.end()) == brute);
  }
  CHECK(EnumeratePhonemePairs(10).size() == 55);
}

TEST_CASE("phoneme plan validation") {
  PhonemeExperimentPlan p;
  p.Validate(CollapseMap::Default());
  p.phoneme_list = {"ow", "ix"};
  CHECK_THROWS_AS(p.Validate(CollapseMap::Default()), PlanError);
  p.phoneme_list = {"ow", "ow"};
  CHECK_THROWS_AS(p.Validate(CollapseMap::Default()), PlanError);
  p = {};
  p.source_set = "a/b";
  CHECK_THROWS_AS(p.Validate(CollapseMap::Default()), PlanError);
}

TEST_CASE("parallel for visits every index exactly once") {
  for (int workers : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(257);
    ParallelFor(hits.size(), workers, [&](std::size_t i, int w) {
      REQUIRE(w >= 0);
      REQUIRE(w < workers);
      ++hits[i];
    });
    for (auto &h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(ParallelFor(10, 4, [](std::size_t i, int) {
                    if (i == 7) throw PlanError("boom");
                  }),
                  PlanError);
}

TEST_CASE("voice test set covers every target once with valid interference") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  VoiceExperimentPlan plan;
  plan.master_seed = 3;
  RunContext ctx = EchoContext(tmp.path());
  for (GenderCombo combo : AllCombos()) {
    VoiceCell cell{combo, TirSpec(9), 4};
    TestSetManifest m = BuildVoiceTestset(c, plan, cell, ctx);
    std::multiset<std::string> ids;
    for (const auto &e : m.entries) ids.insert(e.id);
    std::multiset<std::string> want;
    for (const auto *u : c.Select(Split::kTest, TargetGender(combo))) want.insert(u->id);
    CHECK(ids == want);
    for (const auto &e : m.entries) {
      const UtteranceRecord *t = c.Find(e.id);
      const UtteranceRecord *i = c.Find(e.tags["interference"].get<std::string>());
      REQUIRE(i);
      CHECK(i->gender == InterferenceGender(combo));
      CHECK(i->split == Split::kTest);
      CHECK(i->speaker != t->speaker);
      CHECK(e.ref == CollapseMap::Default().CollapseSequence(t->alignment.Labels()));
      CHECK(LoadAudio(e.audio).size() == static_cast<std::size_t>(t->num_samples));
    }
    const fs::path dir = tmp / cell.Name();
    CHECK(fs::exists(dir / "manifest.jsonl"));
    CHECK(fs::exists(dir / "cell.json"));
    auto mix = ReadJsonLines(dir / "mix.jsonl");
    REQUIRE(mix.size() == m.entries.size());
    for (std::size_t k = 0; k < mix.size(); ++k) {
      CHECK(mix[k]["target"] == m.entries[k].id);
      const UtteranceRecord *t = c.Find(m.entries[k].id);
      const UtteranceRecord *i = c.Find(mix[k]["interference"].get<std::string>());
      const double pt = SignalPower(t->LoadWaveform());
      const double pi = SignalPower(i->LoadWaveform());
      const double g = mix[k]["gain"].get<double>();
      CHECK(10 * std::log10(pt / (g * g * pi)) == doctest::Approx(9.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("same-speaker interference only when allowed") {
  TempDir tmp;
  SyntheticCorpusSpec spec;
  spec.test_speakers_per_gender = 1;
  spec.sentences_per_speaker = 3;
  WriteSyntheticCorpus(tmp / "c", spec);
  CorpusCatalog c = ScanCorpus(tmp / "c");
  VoiceExperimentPlan plan;
  RunContext ctx = EchoContext(tmp / "out");
  VoiceCell cell{GenderCombo::kFF, TirSpec(0), 0};
  CHECK_THROWS_AS(BuildVoiceTestset(c, plan, cell, ctx), PlanError);
  plan.exclude_same_speaker = false;
  TestSetManifest m = BuildVoiceTestset(c, plan, cell, ctx);
  for (const auto &e : m.entries) CHECK(e.tags["interference"] != e.id);
}

TEST_CASE("voice sets are a pure function of the seed") {
  TempDir a, b;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  VoiceExperimentPlan plan;
  plan.master_seed = 11;
  VoiceCell cell{GenderCombo::kMF, TirSpec(3), 1};
  BuildVoiceTestset(c, plan, cell, EchoContext(a.path()));
  BuildVoiceTestset(c, plan, cell, EchoContext(b.path()));
  for (const char *f : {"manifest.jsonl", "mix.jsonl", "cell.json"})
    CHECK(ReadFile(a / (cell.Name() + "/" + f)) == ReadFile(b / (cell.Name() + "/" + f)));
  for (const auto &e : fs::directory_iterator(a / (cell.Name() + "/audio")))
    CHECK(ReadFile(e.path()) ==
          ReadFile(b / (cell.Name() + "/audio/" + e.path().filename().string())));
}

TEST_CASE("echo voice experiment scores zero everywhere") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  VoiceExperimentPlan plan;
  plan.tir_grid = {TirSpec(0), TirSpec(30)};
  plan.sets_per_cell = 2;
  VoiceReport r = RunVoiceExperiment(c, plan, EchoContext(tmp.path(), 3));
  CHECK(r.points.size() == 8);
  CHECK(r.baseline_per == 0.0);
  CHECK(r.baseline_status == "ok");
  for (const auto &p : r.points) {
    CHECK(p.status == "ok");
    CHECK(p.mean_per == 0.0);
    CHECK(p.set_pers.size() == 2);
  }
  CHECK(fs::exists(tmp / "voice/f-m/tir30/set001/scores.csv"));
  CHECK(fs::exists(tmp / "voice/baseline/hyps.tsv"));
}

TEST_CASE("failed backend marks cells failed without aborting") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  VoiceExperimentPlan plan;
  plan.tir_grid = {TirSpec(0)};
  plan.sets_per_cell = 1;
  RunContext ctx = EchoContext(tmp.path());
  ctx.backend = [] {
    return std::make_unique<SubprocessBackend>("exit 1; true");
  };
  VoiceReport r = RunVoiceExperiment(c, plan, ctx);
  CHECK(r.baseline_status == "failed");
  for (const auto &p : r.points) {
    CHECK(p.status == "failed");
    CHECK_FALSE(p.mean_per.has_value());
  }
  CHECK(fs::exists(tmp / "voice/f-m/tir00/set000/error.txt"));
}

TEST_CASE("aggregation statuses") {
  std::vector<VoiceSetResult> sets;
  for (int s = 0; s < 3; ++s) {
    VoiceSetResult r;
    r.cell = {GenderCombo::kFF, TirSpec(6), s};
    if (s != 1) r.per = 10.0 * (s + 1);
    sets.push_back(r);
    VoiceSetResult f;
    f.cell = {GenderCombo::kMM, TirSpec(6), s};
    sets.push_back(f);
  }
  VoiceReport r = AggregateVoice(sets, 5.0, "ok");
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].combo == GenderCombo::kFF);
  CHECK(r.points[0].status == "partial");
  CHECK(r.points[0].mean_per == doctest::Approx(20.0));
  CHECK(r.points[1].status == "failed");
}

TEST_CASE("per-utterance averaging differs from pooling") {
  TestSetManifest m;
  m.name = "t";
  m.entries.push_back({"a", "/a.wav", std::nullopt, {"s"}});
  m.entries.push_back({"b", "/b.wav", std::nullopt, {"s", "t", "aa", "ih"}});
  std::vector<Hypothesis> h = {{"a", {}}, {"b", {"s", "t", "aa", "ih"}}};
  CHECK(ScoreTestSet(m, h, false) == doctest::Approx(20.0));
  CHECK(ScoreTestSet(m, h, true) == doctest::Approx(50.0));
}

TEST_CASE("phoneme set extraction and stratification") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  RunContext ctx = EchoContext(tmp.path());
  TestSetManifest seg = ExtractPhonemeSet(c, ctx);
  std::size_t want = 0;
  for (const auto &u : c.utterances())
    if (u.split == Split::kTest)
      want += CollapseMap::Default().CollapseSequence(u.alignment.Labels()).size();
  CHECK(seg.entries.size() == want);
  for (const auto &e : seg.entries) {
    CHECK(e.ref.size() == 1);
    CHECK(e.ref[0] != "sil");
  }
  ctx.batch_size = 7;
  StratifiedSet s = RunStratification(seg, ctx);
  CHECK(s.kept_ids.size() == seg.entries.size());
  TestSetManifest kept = ReadManifest(tmp / "phonemes/stratified/manifest.jsonl");
  CHECK(kept.entries.size() == seg.entries.size());
  CHECK(fs::exists(tmp / "phonemes/segments/hyps.tsv"));
}

TEST_CASE("phoneme experiment trial counts and references") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  RunContext ctx = EchoContext(tmp.path(), 4);
  TestSetManifest seg = ExtractPhonemeSet(c, ctx);
  PhonemeExperimentPlan plan;
  plan.mixings_per_pair = 6;
  auto trials = BuildPhonemeTrials(plan, seg, ctx);
  CHECK(trials.size() == 55);
  std::size_t total = 0;
  std::map<std::string, std::string> seg_label;
  for (const auto &e : seg.entries) seg_label[e.id] = e.ref[0];
  for (const auto &m : trials) {
    total += m.entries.size();
    for (const auto &e : m.entries) {
      const std::string a = e.tags["a"], b = e.tags["b"];
      CHECK(e.ref == PhoneSeq{a});
      CHECK(seg_label[e.tags["a_segment"].get<std::string>()] == a);
      CHECK(seg_label[e.tags["b_segment"].get<std::string>()] == b);
    }
  }
  CHECK(total == 55 * 6);

  PhonemeSetReport r = RunPhonemeExperiment(plan, seg, ctx);
  CHECK(r.metrics.total_trials == 55 * 6);
  CHECK(r.metrics.error_rate == 0.0);
  CHECK(r.failed_pairs.empty());
  CHECK(r.metrics.matrix.Complete());
  CHECK(r.metrics.avg_length == 1.0);
}

TEST_CASE("phoneme without segments is a plan error") {
  TempDir tmp;
  CorpusCatalog c = ScanCorpus(ShippedCorpus());
  RunContext ctx = EchoContext(tmp.path());
  TestSetManifest seg = ExtractPhonemeSet(c, ctx);
  PhonemeExperimentPlan plan;
  plan.phoneme_list = {"ow", "zh"};
  CHECK_THROWS_AS(RunPhonemeExperiment(plan, seg, ctx), PlanError);
}
