// Copyright 2026 The Imitate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IMITATE_RNG_H_
#define IMITATE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace imitate {

using Rng = std::mt19937_64;

// Derives an independent generator for a named stage ("init", "explore",
// "sample", ...) from one top-level seed, so each stage can be re-run on its
// own and still see the same random numbers.
Rng SubStream(std::uint64_t seed, std::string_view name);

std::uint64_t SubSeed(std::uint64_t seed, std::string_view name);

// Uniform integer in [0, n). Does not depend on the standard library's
// distribution implementation, so results are stable across toolchains.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t n);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
double UniformUnit(Rng& rng);

}  // namespace imitate

#endif  // IMITATE_RNG_H_
