// include/mixeval/seeding.h

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

#ifndef MIXEVAL_SEEDING_H_
#define MIXEVAL_SEEDING_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>

namespace mixeval {

using Rng = std::mt19937_64;

/// Readable derivation path, e.g. "7/voice/f-m/tir=3/set=0/FAKS0_SI1573".
/// Recorded alongside every random draw so it can be replayed.
std::string SeedPath(std::uint64_t master,
                     std::initializer_list<std::string_view> parts);

/// Stable 64-bit seed for a derivation path (FNV-1a folded through a
/// SplitMix64 finalizer).  Independent of platform and of thread schedule.
std::uint64_t SeedFromPath(std::string_view path);

inline Rng MakeRng(std::string_view path) { return Rng(SeedFromPath(path)); }

/// Uniform integer in [0, n).  Uses rejection sampling so the sequence does
/// not depend on the standard library's distribution implementation.
std::uint64_t UniformIndex(Rng &rng, std::uint64_t n);

/// Uniform real in [0, 1) with 53 random bits.
double UniformReal(Rng &rng);

}  // namespace mixeval

#endif  // MIXEVAL_SEEDING_H_
