// include/mixeval/backend.h

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

#ifndef MIXEVAL_BACKEND_H_
#define MIXEVAL_BACKEND_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixeval/phone-set.h"
#include "mixeval/scoring.h"
#include "mixeval/signal.h"

namespace mixeval {

struct ManifestEntry {
  std::string id;
  std::filesystem::path audio;                    // absolute in memory
  std::optional<std::filesystem::path> features;  // absolute in memory
  PhoneSeq ref;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();
};

/// One evaluation job.  On disk (manifest.jsonl) each line is
///   {"id":..., "audio":..., "features":..., "ref":[...], "tags":{...}}
/// with paths relative to the manifest's directory.
struct TestSetManifest {
  /// Logical name, e.g. "voice/f-m/tir03/set000".  Not persisted; it keys
  /// oracle seeding and exchange directories.
  std::string name;
  std::vector<ManifestEntry> entries;

  /// Throws ValidationError on duplicate ids or empty references.
  void Validate() const;
};

void WriteManifest(const std::filesystem::path &path, const TestSetManifest &m);
TestSetManifest ReadManifest(const std::filesystem::path &path,
                             std::string name = "");

struct Hypothesis {
  std::string id;
  PhoneSeq predicted;
  bool operator==(const Hypothesis &) const = default;
};

/// hyps.tsv: "<id>\t<space separated symbols>" per line, LF endings.
void WriteHyps(const std::filesystem::path &path,
               std::span<const Hypothesis> hyps);

/// Strict reader.  Returns one hypothesis per manifest entry in manifest
/// order.  Throws ProtocolError listing missing, unknown or duplicated ids
/// and on malformed lines; InventoryError on a symbol outside the scoring
/// classes.  "sil" is accepted and removed.
std::vector<Hypothesis> ReadHyps(const std::filesystem::path &path,
                                 const TestSetManifest &m,
                                 const CollapseMap &map);

/// A phoneme recognizer reachable through the manifest/hyps exchange.  A
/// single instance is never driven concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  /// Recorded in the run ledger.
  virtual std::string Identity() const = 0;
  /// Reads the manifest at manifest_path and leaves its output at hyps_path.
  virtual void Run(const TestSetManifest &m,
                   const std::filesystem::path &manifest_path,
                   const std::filesystem::path &hyps_path) = 0;
  /// Where exchanges for manifest `name` happen when the caller does not
  /// care; backends with a configured exchange root override this.
  virtual std::filesystem::path ExchangeDir(
      const std::filesystem::path &default_dir, const std::string &name) const;
};

/// Writes <dir>/manifest.jsonl, runs the backend and reads its output back
/// through the strict reader.  The validated hypotheses also end up in
/// <work_dir>/hyps.tsv.
std::vector<Hypothesis> Transcribe(const TestSetManifest &m, Backend &backend,
                                   const std::filesystem::path &work_dir,
                                   const CollapseMap &map);

/// Returns the reference for every entry.
class EchoBackend : public Backend {
 public:
  std::string Identity() const override { return "oracle:echo"; }
  void Run(const TestSetManifest &m, const std::filesystem::path &,
           const std::filesystem::path &hyps_path) override;
};

/// Returns an empty prediction for every entry.
class EmptyBackend : public Backend {
 public:
  std::string Identity() const override { return "oracle:empty"; }
  void Run(const TestSetManifest &m, const std::filesystem::path &,
           const std::filesystem::path &hyps_path) override;
};

struct CorruptionRates {
  double sub = 0.0;
  double del = 0.0;
  double ins = 0.0;

  /// Throws ArgumentError unless each rate is in [0, 1] and sub + del <= 1.
  void Validate() const;
};

/// Corrupts references token by token: substitute (uniform over the other
/// scoring classes) with probability sub, delete with probability del, and
/// after each position insert a uniform symbol with probability ins.  Each
/// entry draws from its own stream seeded by (seed, manifest name, id).
std::vector<Hypothesis> OracleCorrupt(const TestSetManifest &m,
                                      const CorruptionRates &rates,
                                      std::uint64_t seed,
                                      const CollapseMap &map);

class CorruptBackend : public Backend {
 public:
  CorruptBackend(CorruptionRates rates, std::uint64_t seed,
                 CollapseMap map = CollapseMap::Default());
  std::string Identity() const override;
  void Run(const TestSetManifest &m, const std::filesystem::path &,
           const std::filesystem::path &hyps_path) override;

 private:
  CorruptionRates rates_;
  std::uint64_t seed_;
  CollapseMap map_;
};

/// Launches "<command> --manifest <path> --out <path>" through /bin/sh and
/// requires exit status 0.
class SubprocessBackend : public Backend {
 public:
  explicit SubprocessBackend(std::string command);
  std::string Identity() const override { return "subprocess:" + command_; }
  void Run(const TestSetManifest &m, const std::filesystem::path &manifest_path,
           const std::filesystem::path &hyps_path) override;

 private:
  std::string command_;
};

/// Passive exchange: the manifest is left in the exchange directory and an
/// external process is expected to produce hyps.tsv next to it (written
/// atomically, e.g. via rename).  Polls until the file appears.
class DirectoryBackend : public Backend {
 public:
  DirectoryBackend(std::optional<std::filesystem::path> exchange_root,
                   std::chrono::milliseconds timeout,
                   std::chrono::milliseconds poll = std::chrono::milliseconds(50));
  std::string Identity() const override;
  void Run(const TestSetManifest &m, const std::filesystem::path &manifest_path,
           const std::filesystem::path &hyps_path) override;
  std::filesystem::path ExchangeDir(const std::filesystem::path &default_dir,
                                    const std::string &name) const override;

 private:
  std::optional<std::filesystem::path> root_;
  std::chrono::milliseconds timeout_;
  std::chrono::milliseconds poll_;
};

/// Backend description as found in configs and on the command line:
///   echo | empty | corrupt | subprocess | directory
struct BackendSpec {
  std::string mode = "echo";
  std::string command;  // subprocess
  std::optional<std::filesystem::path> exchange_dir;  // directory
  double timeout_seconds = 3600.0;                    // directory
  CorruptionRates rates;                              // corrupt
  std::uint64_t seed = 0;                             // corrupt

  void Validate() const;
};

std::unique_ptr<Backend> MakeBackend(const BackendSpec &spec);

/// Which alphabet the stratification containment test uses.
enum class Containment {
  kCollapsed,  // scoring classes on both sides
  kSource,     // the segment's TIMIT label, matched verbatim
};

struct Stratum {
  std::int64_t total = 0;
  std::int64_t kept = 0;
  double Accuracy() const { return total ? double(kept) / double(total) : 0.0; }
};

struct StratifiedSet {
  std::map<std::string, Stratum> per_phoneme;  // keyed by scoring class
  std::vector<std::string> kept_ids;           // in manifest order
  std::map<std::string, double> Accuracies() const;
};

/// Manifest describing phone segments: ref = [scoring class], tags carry
/// "label" (TIMIT symbol), "utterance", "begin" and "end".  Segment audio is
/// written under <dir>/audio/.
TestSetManifest WriteSegmentManifest(std::span<const PhoneSegment> segments,
                                     const std::filesystem::path &dir,
                                     const std::string &name);

/// A segment is kept iff its hypothesis contains its label.
StratifiedSet Stratify(const TestSetManifest &segments,
                       std::span<const Hypothesis> hyps,
                       Containment mode = Containment::kCollapsed);

/// Exports the segments, runs the backend and stratifies.
StratifiedSet Stratify(std::span<const PhoneSegment> segments, Backend &backend,
                       const std::filesystem::path &dir, const CollapseMap &map,
                       Containment mode = Containment::kCollapsed);

}  // namespace mixeval

#endif  // MIXEVAL_BACKEND_H_
