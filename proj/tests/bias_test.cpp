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

#include "qae/bias.hpp"
#include "qae/errors.hpp"
#include "qae/metrology.hpp"

namespace qae {
namespace {

constexpr double kPi = std::numbers::pi;

// Solves tan(nq (theta + t)) = r tan(nq theta) for t near 0 by bisection.
double root_theta_p(double r, double theta, int nq) {
  auto f = [&](double t) {
    return std::sin(nq * (theta + t)) * std::cos(nq * theta) -
           r * std::sin(nq * theta) * std::cos(nq * (theta + t));
  };
  double lo = -kPi / (4 * nq);
  double hi = kPi / (4 * nq);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(Bias, ThetaPMatchesRootFind) {
  for (int nq : {1, 3, 9}) {
    for (double theta : {0.05, 0.143659, 0.4}) {
      for (double pc1 : {0.85, 0.95, 1.05}) {
        const auto b = theta_p_bias(0.95, pc1, theta, nq);
        EXPECT_NEAR(b.exact, root_theta_p(pc1 / 0.95, theta, nq), 1e-12)
            << nq << " " << theta << " " << pc1;
      }
    }
  }
}

TEST(Bias, ThetaPReductions) {
  EXPECT_DOUBLE_EQ(theta_p_bias(0.9, 0.9, 0.3, 5).exact, 0.0);
  EXPECT_DOUBLE_EQ(theta_p_bias(0.9, 0.9, 0.3, 5).linearized, 0.0);
  // Linear term agrees to second order in pc1/pc0 - 1.
  const double eps = 1e-4;
  const auto b = theta_p_bias(1.0, 1.0 + eps, 0.2, 3);
  EXPECT_NEAR(b.exact, b.linearized, 10 * eps * eps);
  EXPECT_NEAR(b.linearized, std::sin(2 * 3 * 0.2) * eps / 6, 1e-15);
  EXPECT_THROW(theta_p_bias(0.0, 0.9, 0.3, 1), DomainError);
}

TEST(Bias, CombinedOverlap) {
  const double c = std::cos(3 * 0.2);
  const double s = std::sin(3 * 0.2);
  EXPECT_NEAR(combined_overlap_sq(0.9, 0.8, 0.2, 3), 0.81 * c * c + 0.64 * s * s, 1e-15);
  EXPECT_NEAR(combined_overlap_sq(1.0, 1.0, 0.7, 5), 1.0, 1e-15);
}

TEST(Bias, PerfectBasisReducesToOptimal) {
  const NoisyStateModel m{0.16, 0.93, 4, 3};
  const auto a = biased_outcome_probs(m, 0.15, 1.0, 1.0, 0.0);
  const auto b = optimal_basis_probs(m, 0.15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-13);
  const auto c = biased_outcome_probs(m, 0.15, 0.9, 0.85, 0.3);
  EXPECT_NEAR(c[0] + c[1] + c[2], 1.0, 1e-13);
  EXPECT_THROW(biased_outcome_probs(m, 0.15, 1.0, 1.0, 0.6), DomainError);
}

TEST(Bias, PhaseBiasScalesQuadratically) {
  const double a = theta_phi_bias(0.1, 0.15, 0.14, 0.0, 5);
  const double b = theta_phi_bias(0.2, 0.15, 0.14, 0.0, 5);
  EXPECT_NEAR(b / a, 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(theta_phi_bias(0.0, 0.15, 0.14, 0.0, 5), 0.0);
  const double g = 0.5 * 0.01 * std::sin(2 * 5 * 0.15) * std::cos(2 * 5 * 0.14);
  EXPECT_NEAR(theta_phi_bias(0.1, 0.15, 0.14, 0.0, 5, true), -g / 5, 1e-15);
}

TEST(Bias, DegenerateDenominatorThrows) {
  // sin(2 nq (theta - theta_hat1)) = 1 when theta - theta_hat1 = pi / (4 nq).
  const int nq = 3;
  EXPECT_THROW(theta_phi_bias(0.1, 0.1 + kPi / (4 * nq), 0.1, 0.0, nq), BiasUndefined);
}

}  // namespace
}  // namespace qae
