// src/corpus.cc

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

#include "mixeval/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mixeval/error.h"

namespace mixeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::optional<fs::path> FindChildDir(const fs::path &dir,
                                     std::string_view name) {
  std::error_code ec;
  for (const auto &e : fs::directory_iterator(dir, ec)) {
    if (e.is_directory() && Lower(e.path().filename().string()) == name)
      return e.path();
  }
  return std::nullopt;
}

std::vector<fs::path> SortedSubdirs(const fs::path &dir) {
  std::vector<fs::path> out;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t ParseIndex(const std::string &field, const std::string &name,
                        int lineno) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != field.size() || v < 0)
    throw ParseError(
        Msg(name, ":", lineno, ": non-numeric sample index '", field, "'"));
  return v;
}

}  // namespace

void PhoneAlignment::Validate(std::optional<std::int64_t> num_samples) const {
  std::int64_t prev_end = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const PhoneEntry &e = entries[i];
    if (e.begin < 0 || e.begin >= e.end)
      throw ValidationError(Msg("phone ", i, " (", e.label, ") has span [",
                                e.begin, ", ", e.end, ")"));
    if (i > 0 && e.begin < prev_end)
      throw ValidationError(Msg("phone ", i, " (", e.label, ") at ", e.begin,
                                " overlaps previous span ending at ",
                                prev_end));
    prev_end = e.end;
  }
  if (num_samples && prev_end > *num_samples)
    throw ValidationError(Msg("alignment ends at ", prev_end,
                              " past audio length ", *num_samples));
}

std::vector<std::string> PhoneAlignment::Labels() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto &e : entries) out.push_back(e.label);
  return out;
}

PhoneAlignment ParsePhn(std::istream &is, const std::string &name) {
  PhoneAlignment ali;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string b, e, label, extra;
    if (!(ls >> b >> e >> label) || (ls >> extra))
      throw ParseError(
          Msg(name, ":", lineno, ": expected 'begin end label', got '", line,
              "'"));
    ali.entries.push_back(
        {ParseIndex(b, name, lineno), ParseIndex(e, name, lineno), label});
  }
  try {
    ali.Validate();
  } catch (const ValidationError &err) {
    throw ValidationError(Msg(name, ": ", err.what()));
  }
  return ali;
}

PhoneAlignment ParsePhnFile(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  return ParsePhn(is, path.string());
}

std::string_view GenderName(Gender g) {
  return g == Gender::kMale ? "male" : "female";
}

std::string_view SplitName(Split s) {
  return s == Split::kTrain ? "train" : "test";
}

Gender ParseGender(std::string_view s) {
  if (s == "male" || s == "m" || s == "M") return Gender::kMale;
  if (s == "female" || s == "f" || s == "F") return Gender::kFemale;
  throw ParseError(Msg("bad gender '", s, "'"));
}

Split ParseSplit(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw ParseError(Msg("bad split '", s, "'"));
}

Waveform UtteranceRecord::LoadWaveform() const {
  Waveform w = LoadAudio(audio_path);
  if (static_cast<std::int64_t>(w.size()) != num_samples)
    throw ValidationError(Msg(id, ": audio changed since it was cataloged"));
  return w;
}

CorpusCatalog::CorpusCatalog(fs::path root, std::vector<UtteranceRecord> utts,
                             std::vector<std::string> warnings)
    : root_(std::move(root)),
      utts_(std::move(utts)),
      warnings_(std::move(warnings)) {
  std::sort(utts_.begin(), utts_.end(),
            [](const auto &a, const auto &b) { return a.id < b.id; });
  for (std::size_t i = 1; i < utts_.size(); ++i)
    if (utts_[i].id == utts_[i - 1].id)
      throw ValidationError(Msg("duplicate utterance id ", utts_[i].id));
}

std::vector<const UtteranceRecord *> CorpusCatalog::Select(
    Split split, Gender gender) const {
  std::vector<const UtteranceRecord *> out;
  for (const auto &u : utts_)
    if (u.split == split && u.gender == gender) out.push_back(&u);
  return out;
}

std::size_t CorpusCatalog::NumUtterances(Split split, Gender gender) const {
  return Select(split, gender).size();
}

std::size_t CorpusCatalog::NumSpeakers(Split split, Gender gender) const {
  std::set<std::string> speakers;
  for (const auto *u : Select(split, gender)) speakers.insert(u->speaker);
  return speakers.size();
}

const UtteranceRecord *CorpusCatalog::Find(std::string_view id) const {
  auto it = std::lower_bound(
      utts_.begin(), utts_.end(), id,
      [](const UtteranceRecord &u, std::string_view k) { return u.id < k; });
  return it != utts_.end() && it->id == id ? &*it : nullptr;
}

bool CorpusCatalog::operator==(const CorpusCatalog &other) const {
  if (root_ != other.root_ || utts_.size() != other.utts_.size()) return false;
  for (std::size_t i = 0; i < utts_.size(); ++i) {
    const auto &a = utts_[i];
    const auto &b = other.utts_[i];
    if (a.id != b.id || a.speaker != b.speaker || a.gender != b.gender ||
        a.split != b.split || a.audio_path != b.audio_path ||
        a.phn_path != b.phn_path || a.num_samples != b.num_samples ||
        a.sample_rate != b.sample_rate || !(a.alignment == b.alignment))
      return false;
  }
  return true;
}

void CorpusCatalog::WriteJson(const fs::path &path) const {
  json doc;
  doc["root"] = root_.string();
  json records = json::array();
  for (const auto &u : utts_) {
    records.push_back({
        {"id", u.id},
        {"speaker", u.speaker},
        {"sentence", u.sentence},
        {"gender", GenderName(u.gender)},
        {"split", SplitName(u.split)},
        {"audio", u.audio_path.lexically_relative(root_).generic_string()},
        {"phn", u.phn_path.lexically_relative(root_).generic_string()},
    });
  }
  doc["utterances"] = std::move(records);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError(Msg("cannot write ", path.string()));
  os << doc.dump(1) << '\n';
}

CorpusCatalog CorpusCatalog::ReadJson(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception &e) {
    throw ParseError(Msg(path.string(), ": ", e.what()));
  }
  fs::path root = doc.at("root").get<std::string>();
  std::vector<UtteranceRecord> utts;
  for (const auto &r : doc.at("utterances")) {
    UtteranceRecord u;
    u.id = r.at("id").get<std::string>();
    u.speaker = r.at("speaker").get<std::string>();
    u.sentence = r.at("sentence").get<std::string>();
    u.gender = ParseGender(r.at("gender").get<std::string>());
    u.split = ParseSplit(r.at("split").get<std::string>());
    u.audio_path = root / r.at("audio").get<std::string>();
    u.phn_path = root / r.at("phn").get<std::string>();
    AudioInfo info = ProbeAudio(u.audio_path);
    u.sample_rate = info.sample_rate;
    u.num_samples = info.num_samples;
    u.alignment = ParsePhnFile(u.phn_path);
    u.alignment.Validate(u.num_samples);
    utts.push_back(std::move(u));
  }
  return CorpusCatalog(std::move(root), std::move(utts));
}

CorpusCatalog ScanCorpus(const fs::path &root_in, const ScanOptions &opts) {
  std::error_code ec;
  if (!fs::is_directory(root_in, ec))
    throw StructureError(Msg(root_in.string(), " is not a directory"));
  const fs::path root = fs::weakly_canonical(fs::absolute(root_in));

  std::vector<UtteranceRecord> utts;
  std::vector<std::string> warnings;
  for (Split split : {Split::kTrain, Split::kTest}) {
    auto split_dir = FindChildDir(root, SplitName(split));
    if (!split_dir)
      throw StructureError(Msg(root.string(), ": missing ",
                               Upper(std::string(SplitName(split))),
                               " directory"));
    for (const auto &dialect : SortedSubdirs(*split_dir)) {
      for (const auto &spk_dir : SortedSubdirs(dialect)) {
        const std::string speaker = Upper(spk_dir.filename().string());
        if (speaker.empty() || (speaker[0] != 'M' && speaker[0] != 'F')) {
          warnings.push_back(Msg(spk_dir.string(),
                                 ": speaker directory must start with M or F"));
          continue;
        }
        // Group files by sentence stem, case-insensitively.
        std::map<std::string, std::pair<fs::path, fs::path>> stems;
        for (const auto &f : fs::directory_iterator(spk_dir)) {
          if (!f.is_regular_file()) continue;
          std::string ext = Lower(f.path().extension().string());
          std::string stem = Upper(f.path().stem().string());
          if (ext == ".wav") {
            // Some distributions ship both SX1.WAV and SX1.WAV.wav; take the
            // plain one.
            if (stem.find('.') != std::string::npos) continue;
            stems[stem].first = f.path();
          } else if (ext == ".phn") {
            stems[stem].second = f.path();
          }
        }
        for (const auto &[stem, files] : stems) {
          if (!opts.include_sa && stem.rfind("SA", 0) == 0) continue;
          const std::string id = speaker + "_" + stem;
          if (files.first.empty() || files.second.empty()) {
            warnings.push_back(Msg(id, ": missing ",
                                   files.first.empty() ? "audio" : "alignment"));
            continue;
          }
          UtteranceRecord u;
          u.id = id;
          u.speaker = speaker;
          u.sentence = stem;
          u.gender = speaker[0] == 'M' ? Gender::kMale : Gender::kFemale;
          u.split = split;
          u.audio_path = files.first;
          u.phn_path = files.second;
          try {
            AudioInfo info = ProbeAudio(u.audio_path);
            u.sample_rate = info.sample_rate;
            u.num_samples = info.num_samples;
            u.alignment = ParsePhnFile(u.phn_path);
            u.alignment.Validate(u.num_samples);
          } catch (const Error &e) {
            warnings.push_back(Msg(id, ": ", e.what()));
            continue;
          }
          utts.push_back(std::move(u));
        }
      }
    }
  }
  return CorpusCatalog(root, std::move(utts), std::move(warnings));
}

}  // namespace mixeval
