// Copyright 2026 The QAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace qae {

/// Every random draw in the library goes through an explicitly seeded
/// std::mt19937_64. There is no process-global generator.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives a child seed from a base seed and a path of stream keys, e.g.
/// derive_seed(base, {trial_index, k}). Distinct paths give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Draws a multinomial sample of `shots` outcomes from `probabilities`
/// using conditional binomials. Probabilities must be non-negative and sum
/// to 1 within 1e-9. Throws DomainError otherwise.
std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         std::uint64_t shots, Rng& rng);

/// Convenience overload that owns its generator.
std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         std::uint64_t shots, std::uint64_t seed);

}  // namespace qae
