// include/mixeval/phone-set.h

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

#ifndef MIXEVAL_PHONE_SET_H_
#define MIXEVAL_PHONE_SET_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixeval {

/// Target symbol marking a phone that is removed from scoring sequences.
inline constexpr std::string_view kSilence = "sil";

/// Many-to-one mapping from the TIMIT phone inventory onto the scoring
/// classes.  Phones mapped to kSilence are dropped.  Immutable once built;
/// safe to share across threads.
class CollapseMap {
 public:
  /// The 61-symbol TIMIT inventory with the Lee-Hon 39-class collapse
  /// (closures, pauses, epenthetic silence, h# and the glottal stop q all go
  /// to sil).
  static const CollapseMap &Default();

  /// Two-column text, one "<source> <target|sil>" pair per line.  Blank
  /// lines and lines starting with '#' are ignored.
  static CollapseMap Read(std::istream &is, const std::string &name = "<map>");
  static CollapseMap ReadFile(const std::filesystem::path &path);
  void Write(std::ostream &os) const;

  /// Returns the scoring class, or std::nullopt for silence.  Throws
  /// InventoryError for a symbol outside the source inventory.  Scoring
  /// classes themselves are accepted and map to themselves.
  std::optional<std::string> Collapse(std::string_view label) const;

  /// Collapses a sequence, dropping silence.
  std::vector<std::string> CollapseSequence(
      std::span<const std::string> labels) const;

  bool IsSource(std::string_view label) const;
  /// True for a non-silence scoring class.
  bool IsScoringClass(std::string_view symbol) const;

  /// Sorted source inventory.
  const std::vector<std::string> &SourceInventory() const { return sources_; }
  /// Sorted non-silence image of the map.
  const std::vector<std::string> &ScoringClasses() const { return classes_; }

 private:
  explicit CollapseMap(std::map<std::string, std::string, std::less<>> table);

  std::map<std::string, std::string, std::less<>> table_;
  std::vector<std::string> sources_;
  std::vector<std::string> classes_;
};

}  // namespace mixeval

#endif  // MIXEVAL_PHONE_SET_H_
