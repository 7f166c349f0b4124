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

#include "qae/rng.hpp"

#include <cmath>
#include <string>

#include "qae/errors.hpp"

namespace qae {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t key : path) {
    h = splitmix64(h ^ splitmix64(key + 0x632be59bd9b4e019ULL));
  }
  return h;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         std::uint64_t shots, Rng& rng) {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) {
      throw DomainError("sample_counts: negative or NaN probability " + std::to_string(p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("sample_counts: probabilities sum to " + std::to_string(total));
  }

  // Suffix masses make the conditional split exact when trailing outcomes
  // have zero weight.
  std::vector<double> suffix(probabilities.size() + 1, 0.0);
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    suffix[i] = suffix[i + 1] + probabilities[i];
  }

  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  std::uint64_t remaining = shots;
  for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
    const double p = probabilities[i];
    if (p <= 0.0) {
      continue;
    }
    if (suffix[i + 1] <= 0.0) {
      counts[i] = remaining;
      remaining = 0;
      break;
    }
    const double conditional = p / suffix[i];
    if (conditional >= 1.0) {
      counts[i] = remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<std::uint64_t> binom(remaining, conditional);
    const std::uint64_t drawn = binom(rng);
    counts[i] = drawn;
    remaining -= drawn;
  }
  return counts;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities,
                                         std::uint64_t shots, std::uint64_t seed) {
  Rng rng(seed);
  return sample_counts(probabilities, shots, rng);
}

}  // namespace qae
