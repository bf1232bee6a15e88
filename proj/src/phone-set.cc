// src/phone-set.cc

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

#include "mixeval/phone-set.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mixeval/error.h"

namespace mixeval {

namespace {

// Lee & Hon (1989) reduction of the TIMIT phone set.
constexpr std::pair<const char *, const char *> kLeeHon[] = {
    {"aa", "aa"},   {"ae", "ae"},   {"ah", "ah"},   {"ao", "aa"},
    {"aw", "aw"},   {"ax", "ah"},   {"ax-h", "ah"}, {"axr", "er"},
    {"ay", "ay"},   {"b", "b"},     {"bcl", "sil"}, {"ch", "ch"},
    {"d", "d"},     {"dcl", "sil"}, {"dh", "dh"},   {"dx", "dx"},
    {"eh", "eh"},   {"el", "l"},    {"em", "m"},    {"en", "n"},
    {"eng", "ng"},  {"epi", "sil"}, {"er", "er"},   {"ey", "ey"},
    {"f", "f"},     {"g", "g"},     {"gcl", "sil"}, {"h#", "sil"},
    {"hh", "hh"},   {"hv", "hh"},   {"ih", "ih"},   {"ix", "ih"},
    {"iy", "iy"},   {"jh", "jh"},   {"k", "k"},     {"kcl", "sil"},
    {"l", "l"},     {"m", "m"},     {"n", "n"},     {"ng", "ng"},
    {"nx", "n"},    {"ow", "ow"},   {"oy", "oy"},   {"p", "p"},
    {"pau", "sil"}, {"pcl", "sil"}, {"q", "sil"},   {"r", "r"},
    {"s", "s"},     {"sh", "sh"},   {"t", "t"},     {"tcl", "sil"},
    {"th", "th"},   {"uh", "uh"},   {"uw", "uw"},   {"ux", "uw"},
    {"v", "v"},     {"w", "w"},     {"y", "y"},     {"z", "z"},
    {"zh", "sh"},
};

}  // namespace

CollapseMap::CollapseMap(std::map<std::string, std::string, std::less<>> table)
    : table_(std::move(table)) {
  std::set<std::string> image;
  for (const auto &[src, dst] : table_) {
    sources_.push_back(src);
    if (dst != kSilence) image.insert(dst);
  }
  classes_.assign(image.begin(), image.end());
}

const CollapseMap &CollapseMap::Default() {
  static const CollapseMap map = [] {
    std::map<std::string, std::string, std::less<>> table;
    for (const auto &[src, dst] : kLeeHon) table.emplace(src, dst);
    return CollapseMap(std::move(table));
  }();
  return map;
}

CollapseMap CollapseMap::Read(std::istream &is, const std::string &name) {
  std::map<std::string, std::string, std::less<>> table;
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string src, dst, extra;
    if (!(ls >> src >> dst) || (ls >> extra))
      throw ParseError(Msg(name, ":", lineno, ": expected two columns"));
    if (!table.emplace(src, dst).second)
      throw ParseError(Msg(name, ":", lineno, ": duplicate symbol ", src));
  }
  if (table.empty()) throw ParseError(Msg(name, ": empty collapse map"));
  return CollapseMap(std::move(table));
}

CollapseMap CollapseMap::ReadFile(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError(Msg("cannot open ", path.string()));
  return Read(is, path.string());
}

void CollapseMap::Write(std::ostream &os) const {
  for (const auto &[src, dst] : table_) os << src << ' ' << dst << '\n';
}

std::optional<std::string> CollapseMap::Collapse(std::string_view label) const {
  auto it = table_.find(label);
  if (it == table_.end()) {
    if (IsScoringClass(label)) return std::string(label);
    throw InventoryError(Msg("phone '", label, "' is not in the inventory"));
  }
  if (it->second == kSilence) return std::nullopt;
  return it->second;
}

std::vector<std::string> CollapseMap::CollapseSequence(
    std::span<const std::string> labels) const {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto &label : labels) {
    if (auto c = Collapse(label)) out.push_back(std::move(*c));
  }
  return out;
}

bool CollapseMap::IsSource(std::string_view label) const {
  return table_.find(label) != table_.end();
}

bool CollapseMap::IsScoringClass(std::string_view symbol) const {
  return std::binary_search(classes_.begin(), classes_.end(), symbol);
}

}  // namespace mixeval
