// src/backend.cc

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

#include "mixeval/backend.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "mixeval/error.h"
#include "mixeval/seeding.h"

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string ShellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string JoinIds(const std::vector<std::string> &ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > shown) out += Msg(", ... (", ids.size(), " total)");
  return out;
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string RelativeTo(const fs::path &p, const fs::path &base) {
  fs::path rel = p.lexically_relative(base);
  return (rel.empty() ? p : rel).generic_string();
}

void EnsureParent(const fs::path &path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

}  // namespace

void TestSetManifest::Validate() const {
  std::set<std::string> seen;
  for (const auto &e : entries) {
    if (e.id.empty()) throw ValidationError(Msg(name, ": entry with empty id"));
    if (e.id.find_first_of("\t\n\r ") != std::string::npos)
      throw ValidationError(Msg(name, ": id '", e.id, "' contains whitespace"));
    if (!seen.insert(e.id).second)
      throw ValidationError(Msg(name, ": duplicate id ", e.id));
    if (e.ref.empty())
      throw ValidationError(Msg(name, ": empty reference for ", e.id));
  }
}

void WriteManifest(const fs::path &path, const TestSetManifest &m) {
  m.Validate();
  EnsureParent(path);
  const fs::path base = fs::absolute(path).parent_path();
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  for (const auto &e : m.entries) {
    ordered_json line;
    line["id"] = e.id;
    line["audio"] = RelativeTo(e.audio, base);
    line["features"] =
        e.features ? ordered_json(RelativeTo(*e.features, base)) : ordered_json();
    line["ref"] = e.ref;
    line["tags"] = e.tags;
    os << line.dump() << '\n';
  }
  if (!os) throw IoError(Msg("write failed: ", path.string()));
}

TestSetManifest ReadManifest(const fs::path &path, std::string name) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  const fs::path base = fs::absolute(path).parent_path();
  TestSetManifest m;
  m.name = std::move(name);
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    if (line.empty()) continue;
    try {
      ordered_json j = ordered_json::parse(line);
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.audio = Resolve(base, j.at("audio").get<std::string>());
      if (j.contains("features") && !j["features"].is_null())
        e.features = Resolve(base, j["features"].get<std::string>());
      e.ref = j.at("ref").get<PhoneSeq>();
      if (j.contains("tags")) e.tags = j["tags"];
      m.entries.push_back(std::move(e));
    } catch (const ordered_json::exception &err) {
      throw ParseError(Msg(path.string(), ":", lineno, ": ", err.what()));
    }
  }
  m.Validate();
  return m;
}

void WriteHyps(const fs::path &path, std::span<const Hypothesis> hyps) {
  EnsureParent(path);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  for (const auto &h : hyps) {
    os << h.id << '\t';
    for (std::size_t i = 0; i < h.predicted.size(); ++i)
      os << (i ? " " : "") << h.predicted[i];
    os << '\n';
  }
}

std::vector<Hypothesis> ReadHyps(const fs::path &path, const TestSetManifest &m,
                                 const CollapseMap &map) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ProtocolError(Msg("backend output missing: ", path.string()));
  std::map<std::string, PhoneSeq> by_id;
  std::set<std::string> expected;
  for (const auto &e : m.entries) expected.insert(e.id);
  std::vector<std::string> unknown;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    const std::string where = Msg(path.string(), ":", lineno);
    if (line.find('\r') != std::string::npos)
      throw ProtocolError(Msg(where, ": CR in line (LF line endings required)"));
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ProtocolError(Msg(where, ": expected '<id>\\t<symbols>'"));
    std::string id = line.substr(0, tab);
    std::string rest = line.substr(tab + 1);
    if (rest.find('\t') != std::string::npos)
      throw ProtocolError(Msg(where, ": more than two fields"));
    PhoneSeq seq;
    if (!rest.empty()) {
      std::size_t pos = 0;
      while (true) {
        auto sp = rest.find(' ', pos);
        std::string sym = rest.substr(pos, sp - pos);
        if (sym.empty())
          throw ProtocolError(Msg(where, ": empty symbol (stray space)"));
        if (sym != kSilence) {
          if (!map.IsScoringClass(sym))
            throw InventoryError(
                Msg(where, ": symbol '", sym, "' is not a scoring class"));
          seq.push_back(std::move(sym));
        }
        if (sp == std::string::npos) break;
        pos = sp + 1;
      }
    }
    if (!expected.count(id)) {
      unknown.push_back(id);
      continue;
    }
    if (!by_id.emplace(id, std::move(seq)).second)
      throw ProtocolError(Msg(where, ": duplicate id ", id));
  }
  if (!unknown.empty())
    throw ProtocolError(Msg(path.string(), ": ids not in manifest: ",
                            JoinIds(unknown)));
  std::vector<std::string> missing;
  std::vector<Hypothesis> out;
  out.reserve(m.entries.size());
  for (const auto &e : m.entries) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) {
      missing.push_back(e.id);
      continue;
    }
    out.push_back({e.id, std::move(it->second)});
  }
  if (!missing.empty())
    throw ProtocolError(Msg(path.string(), ": no hypothesis for ids: ",
                            JoinIds(missing)));
  return out;
}

fs::path Backend::ExchangeDir(const fs::path &default_dir,
                              const std::string &) const {
  return default_dir;
}

std::vector<Hypothesis> Transcribe(const TestSetManifest &m, Backend &backend,
                                   const fs::path &work_dir,
                                   const CollapseMap &map) {
  const fs::path dir = backend.ExchangeDir(work_dir, m.name);
  fs::create_directories(dir);
  const fs::path manifest_path = dir / "manifest.jsonl";
  const fs::path hyps_path = dir / "hyps.tsv";
  WriteManifest(manifest_path, m);
  fs::remove(hyps_path);
  backend.Run(m, manifest_path, hyps_path);
  if (!fs::exists(hyps_path))
    throw ProtocolError(Msg(backend.Identity(), " produced no ",
                            hyps_path.string()));
  std::vector<Hypothesis> hyps = ReadHyps(hyps_path, m, map);
  if (fs::weakly_canonical(dir) != fs::weakly_canonical(work_dir))
    WriteHyps(work_dir / "hyps.tsv", hyps);
  return hyps;
}

void EchoBackend::Run(const TestSetManifest &m, const fs::path &,
                      const fs::path &hyps_path) {
  std::vector<Hypothesis> hyps;
  for (const auto &e : m.entries) hyps.push_back({e.id, e.ref});
  WriteHyps(hyps_path, hyps);
}

void EmptyBackend::Run(const TestSetManifest &m, const fs::path &,
                       const fs::path &hyps_path) {
  std::vector<Hypothesis> hyps;
  for (const auto &e : m.entries) hyps.push_back({e.id, {}});
  WriteHyps(hyps_path, hyps);
}

void CorruptionRates::Validate() const {
  for (double r : {sub, del, ins})
    if (!(r >= 0.0 && r <= 1.0))
      throw ArgumentError(Msg("corruption rate ", r, " outside [0, 1]"));
  if (sub + del > 1.0) throw ArgumentError("sub + del must not exceed 1");
}

std::vector<Hypothesis> OracleCorrupt(const TestSetManifest &m,
                                      const CorruptionRates &rates,
                                      std::uint64_t seed,
                                      const CollapseMap &map) {
  rates.Validate();
  const auto &classes = map.ScoringClasses();
  if (classes.size() < 2)
    throw ArgumentError("corruption needs at least two scoring classes");
  std::vector<Hypothesis> out;
  out.reserve(m.entries.size());
  for (const auto &e : m.entries) {
    Rng rng = MakeRng(SeedPath(seed, {"corrupt", m.name, e.id}));
    Hypothesis h{e.id, {}};
    for (const auto &tok : e.ref) {
      const double u = UniformReal(rng);
      if (u < rates.sub) {
        // Uniform over the classes other than tok.
        auto self = std::lower_bound(classes.begin(), classes.end(), tok);
        const bool in_set = self != classes.end() && *self == tok;
        const std::uint64_t n = classes.size() - (in_set ? 1 : 0);
        std::uint64_t k = UniformIndex(rng, n);
        if (in_set && k >= static_cast<std::uint64_t>(self - classes.begin()))
          ++k;
        h.predicted.push_back(classes[k]);
      } else if (u >= rates.sub + rates.del) {
        h.predicted.push_back(tok);
      }
      if (rates.ins > 0.0 && UniformReal(rng) < rates.ins)
        h.predicted.push_back(classes[UniformIndex(rng, classes.size())]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

CorruptBackend::CorruptBackend(CorruptionRates rates, std::uint64_t seed,
                               CollapseMap map)
    : rates_(rates), seed_(seed), map_(std::move(map)) {
  rates_.Validate();
}

std::string CorruptBackend::Identity() const {
  return Msg("oracle:corrupt(sub=", rates_.sub, ",del=", rates_.del,
             ",ins=", rates_.ins, ",seed=", seed_, ")");
}

void CorruptBackend::Run(const TestSetManifest &m, const fs::path &,
                         const fs::path &hyps_path) {
  WriteHyps(hyps_path, OracleCorrupt(m, rates_, seed_, map_));
}

SubprocessBackend::SubprocessBackend(std::string command)
    : command_(std::move(command)) {
  if (command_.empty()) throw ArgumentError("subprocess backend needs a command");
}

void SubprocessBackend::Run(const TestSetManifest &, const fs::path &manifest_path,
                            const fs::path &hyps_path) {
  const std::string cmd = command_ + " --manifest " +
                          ShellQuote(manifest_path.string()) + " --out " +
                          ShellQuote(hyps_path.string());
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw ProtocolError(Msg("backend command failed (status ", status,
                            "): ", cmd));
}

DirectoryBackend::DirectoryBackend(std::optional<fs::path> exchange_root,
                                   std::chrono::milliseconds timeout,
                                   std::chrono::milliseconds poll)
    : root_(std::move(exchange_root)), timeout_(timeout), poll_(poll) {}

std::string DirectoryBackend::Identity() const {
  return "directory:" + (root_ ? root_->string() : std::string("<work dirs>"));
}

fs::path DirectoryBackend::ExchangeDir(const fs::path &default_dir,
                                       const std::string &name) const {
  if (!root_) return default_dir;
  return *root_ / (name.empty() ? default_dir.filename().string() : name);
}

void DirectoryBackend::Run(const TestSetManifest &, const fs::path &,
                           const fs::path &hyps_path) {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (!fs::exists(hyps_path)) {
    if (std::chrono::steady_clock::now() >= deadline)
      throw ProtocolError(Msg("timed out waiting for ", hyps_path.string()));
    std::this_thread::sleep_for(poll_);
  }
}

void BackendSpec::Validate() const {
  if (mode == "echo" || mode == "empty") return;
  if (mode == "corrupt") {
    rates.Validate();
  } else if (mode == "subprocess") {
    if (command.empty()) throw ArgumentError("subprocess backend needs a command");
  } else if (mode == "directory") {
    if (!(timeout_seconds > 0)) throw ArgumentError("timeout must be positive");
  } else {
    throw ArgumentError(Msg("unknown backend mode '", mode, "'"));
  }
}

std::unique_ptr<Backend> MakeBackend(const BackendSpec &spec) {
  spec.Validate();
  if (spec.mode == "echo") return std::make_unique<EchoBackend>();
  if (spec.mode == "empty") return std::make_unique<EmptyBackend>();
  if (spec.mode == "corrupt")
    return std::make_unique<CorruptBackend>(spec.rates, spec.seed);
  if (spec.mode == "subprocess")
    return std::make_unique<SubprocessBackend>(spec.command);
  return std::make_unique<DirectoryBackend>(
      spec.exchange_dir,
      std::chrono::milliseconds(
          static_cast<std::int64_t>(spec.timeout_seconds * 1000)));
}

std::map<std::string, double> StratifiedSet::Accuracies() const {
  std::map<std::string, double> out;
  for (const auto &[ph, s] : per_phoneme) out[ph] = s.Accuracy();
  return out;
}

TestSetManifest WriteSegmentManifest(std::span<const PhoneSegment> segments,
                                     const fs::path &dir,
                                     const std::string &name) {
  const fs::path audio_dir = fs::absolute(dir) / "audio";
  fs::create_directories(audio_dir);
  TestSetManifest m;
  m.name = name;
  for (const auto &seg : segments) {
    ManifestEntry e;
    e.id = seg.Id();
    e.audio = audio_dir / (e.id + ".wav");
    WriteWav(e.audio, seg.audio);
    e.ref = {seg.collapsed};
    e.tags["label"] = seg.label;
    e.tags["utterance"] = seg.source_utterance;
    e.tags["begin"] = seg.begin;
    e.tags["end"] = seg.end;
    m.entries.push_back(std::move(e));
  }
  WriteManifest(dir / "manifest.jsonl", m);
  return m;
}

StratifiedSet Stratify(const TestSetManifest &segments,
                       std::span<const Hypothesis> hyps, Containment mode) {
  if (hyps.size() != segments.entries.size())
    throw ProtocolError("hypothesis count does not match the segment manifest");
  StratifiedSet out;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto &e = segments.entries[i];
    if (hyps[i].id != e.id)
      throw ProtocolError(Msg("hypothesis ", hyps[i].id, " out of order"));
    if (e.ref.size() != 1)
      throw ValidationError(Msg(e.id, ": segment reference must be one label"));
    std::string needle = e.ref[0];
    if (mode == Containment::kSource) {
      if (!e.tags.contains("label"))
        throw ValidationError(Msg(e.id, ": segment lacks its source label"));
      needle = e.tags["label"].get<std::string>();
    }
    Stratum &s = out.per_phoneme[e.ref[0]];
    ++s.total;
    if (Contains(hyps[i].predicted, needle)) {
      ++s.kept;
      out.kept_ids.push_back(e.id);
    }
  }
  return out;
}

StratifiedSet Stratify(std::span<const PhoneSegment> segments, Backend &backend,
                       const fs::path &dir, const CollapseMap &map,
                       Containment mode) {
  TestSetManifest m = WriteSegmentManifest(segments, dir, "segments");
  std::vector<Hypothesis> hyps = Transcribe(m, backend, dir, map);
  return Stratify(m, hyps, mode);
}

}  // namespace mixeval
