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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qae/errors.hpp"
#include "qae/oracle.hpp"

namespace qae {
namespace {

// S by direct summation, independent of the library.
double reference_s(int n, double b_max) {
  const double size = std::ldexp(1.0, n);
  double s = 0.0;
  for (int x = 0; x < (1 << n); ++x) {
    const double v = std::sin((x + 0.5) * b_max / size);
    s += v * v;
  }
  return s / size;
}

TEST(Schedule, ExponentialIncrease) {
  EXPECT_EQ(GroverSchedule::eis(0).m_list, (std::vector<int>{0}));
  const auto s = GroverSchedule::eis(4);
  EXPECT_EQ(s.m_list, (std::vector<int>{0, 1, 2, 4, 8}));
  EXPECT_EQ(s.M(), 4);
  EXPECT_EQ(s.n_a(), 1 + 3 + 5 + 9 + 17);
  EXPECT_DOUBLE_EQ(s.sum_nq_squared(), 1 + 9 + 25 + 81 + 289);
  EXPECT_EQ(s.max_nq(), 17);
  EXPECT_THROW(GroverSchedule::eis(-1), DomainError);
}

TEST(Oracle, KnownValues) {
  const auto o = build_a_sin(3, 0.25);
  EXPECT_NEAR(o.S, reference_s(3, 0.25), 1e-15);
  EXPECT_NEAR(o.S, 0.020496, 5e-6);
  EXPECT_NEAR(o.theta_true, 0.143659, 5e-6);
  EXPECT_THROW(build_a_sin(0, 0.25), SizeError);
  EXPECT_THROW(build_a_sin(3, 0.0), DomainError);
}

TEST(Oracle, PreparedAmplitudesMatchClosedForm) {
  for (int n : {1, 2, 4, 6}) {
    const auto o = build_a_sin(n, 0.8);
    auto s = PureState::zero(n + 1);
    apply_a(s, o);
    const auto target = a_sin_amplitudes(o);
    const std::size_t reg = std::size_t{1} << n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(reg));
    for (std::size_t x = 0; x < reg; ++x) {
      const double a = (x + 0.5) * 0.8 / static_cast<double>(reg);
      EXPECT_NEAR(target[x], norm * std::cos(a), 1e-15);
      EXPECT_NEAR(target[x + reg], norm * std::sin(a), 1e-15);
      EXPECT_NEAR(std::abs(s[x] - target[x]), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(s[x + reg] - target[x + reg]), 0.0, 1e-12);
    }
    EXPECT_NEAR(marginal_probability(s, n, 1), o.S, 1e-12);
  }
}

TEST(Oracle, ADaggerInverts) {
  const auto o = build_a_sin(3, 0.5);
  auto s = PureState::zero(4);
  apply_a(s, o);
  apply_a_dagger(s, o);
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-12);
}

TEST(Oracle, GroverRotatesAngle) {
  const auto o = build_a_sin(3, 0.25);
  for (int m : {0, 1, 2, 4, 8, 16}) {
    const auto s = prepare_grover_state(o, m);
    const double expect = std::pow(std::sin((2 * m + 1) * o.theta_true), 2);
    EXPECT_NEAR(marginal_probability(s, o.ancilla(), 1), expect, 1e-11) << m;
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-11);
  }
}

TEST(Oracle, BranchStatesInvariantUnderGrover) {
  const auto o = build_a_sin(3, 0.6);
  const auto a = prepare_grover_state(o, 0);
  const auto g = prepare_grover_state(o, 3);
  for (int b : {0, 1}) {
    EXPECT_NEAR(overlap_abs(conditional_substate(a, b), conditional_substate(g, b)), 1.0, 1e-11);
  }
}

TEST(Oracle, DegenerateBranchThrows) {
  const auto s = PureState::zero(3);
  EXPECT_THROW(conditional_substate(s, 1), DegenerateBranchError);
}

TEST(Oracle, NoisyCompProbs) {
  const NoisyStateModel model{0.3, 0.9, 3, 2};
  const double q = std::pow(0.9, 3);
  const double pr1 = q * std::pow(std::sin(7 * 0.3), 2) + (1 - q) / 2;
  const auto [p0, p1] = noisy_comp_probs(model);
  EXPECT_NEAR(p1, pr1, 1e-14);
  EXPECT_NEAR(p0 + p1, 1.0, 1e-14);
  EXPECT_THROW((NoisyStateModel{0.3, 1.1, 1, 2}.validate()), DomainError);
  EXPECT_THROW((NoisyStateModel{0.3, 0.9, -1, 2}.validate()), DomainError);
}

TEST(Oracle, NoisyDistributionMixesUniform) {
  const auto o = build_a_sin(2, 0.9);
  const double p = 0.8;
  const int m = 2;
  const auto dist = noisy_outcome_distribution(o, p, m);
  const auto pure = prepare_grover_state(o, m).probabilities();
  const double q = p * p;
  ASSERT_EQ(dist.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(dist[i], q * pure[i] + (1 - q) / 8, 1e-14);
  }
}

TEST(Oracle, SampledFrequenciesWithinFiveSigma) {
  const auto o = build_a_sin(3, 0.25);
  const double p = 0.9;
  const int m = 2;
  const std::uint64_t shots = 100000;
  const auto counts = sample_noisy_outcomes(o, p, m, shots, 2024);
  const auto [c0, c1] = ancilla_counts(counts, o.n);
  EXPECT_EQ(c0 + c1, shots);
  const auto [q0, q1] = noisy_comp_probs(NoisyStateModel{o.theta_true, p, m, o.n});
  const double sd = std::sqrt(shots * q1 * q0);
  EXPECT_NEAR(static_cast<double>(c1), shots * q1, 5 * sd);
  const auto dist = noisy_outcome_distribution(o, p, m);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double sdi = std::sqrt(shots * dist[i] * (1 - dist[i]));
    EXPECT_NEAR(static_cast<double>(counts[i]), shots * dist[i], 5 * sdi + 1) << i;
  }
  EXPECT_EQ(counts, sample_noisy_outcomes(o, p, m, shots, 2024));
}

TEST(Oracle, FullyDepolarizedIsUniform) {
  auto s = PureState::zero(3);
  Rng rng(5);
  const std::uint64_t shots = 80000;
  const auto counts = sample_depolarized(s, 0.0, shots, rng);
  for (auto c : counts) {
    EXPECT_NEAR(static_cast<double>(c), shots / 8.0, 5 * std::sqrt(shots / 8.0 * 7 / 8));
  }
}

}  // namespace
}  // namespace qae
