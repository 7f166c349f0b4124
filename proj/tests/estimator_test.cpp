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
#include <limits>
#include <numbers>
#include <vector>

#include "qae/errors.hpp"
#include "qae/estimator.hpp"
#include "qae/metrology.hpp"
#include "qae/oracle.hpp"
#include "qae/rng.hpp"

namespace qae {
namespace {

constexpr double kPi = std::numbers::pi;

// Independent computational-basis log-likelihood.
double ref_loglik(double theta, double p, const std::vector<CountRecord>& recs) {
  double ll = 0.0;
  for (const auto& r : recs) {
    const double q = std::pow(p, r.m);
    const double s = std::sin((2 * r.m + 1) * theta);
    const double pr1 = q * s * s + (1 - q) / 2;
    if (r.counts[0] > 0) ll += r.counts[0] * std::log(1 - pr1);
    if (r.counts[1] > 0) ll += r.counts[1] * std::log(pr1);
  }
  return ll;
}

std::vector<CountRecord> sampled_records(const GroverSchedule& s, double theta, double p,
                                         std::uint64_t shots, std::uint64_t seed) {
  std::vector<CountRecord> recs;
  for (std::size_t k = 0; k < s.m_list.size(); ++k) {
    const int m = s.m_list[k];
    const auto [q0, q1] = noisy_comp_probs(NoisyStateModel{theta, p, m, 3});
    const std::vector<double> pr = {q0, q1};
    const auto c = sample_counts(pr, shots, derive_seed(seed, {k}));
    recs.push_back(make_record(m, OutcomeKind::kComputational, c));
  }
  return recs;
}

TEST(Records, ShapeAndValidation) {
  EXPECT_EQ(outcome_count(OutcomeKind::kComputational), 2u);
  EXPECT_EQ(outcome_count(OutcomeKind::kOptimal), 3u);
  const std::vector<std::uint64_t> c = {3, 7};
  const auto r = make_record(2, OutcomeKind::kComputational, c);
  EXPECT_DOUBLE_EQ(r.shots(), 10.0);
  CountRecord bad{0, OutcomeKind::kOptimal, {1.0, 2.0}};
  EXPECT_THROW(bad.validate(), DomainError);
  CountRecord neg{0, OutcomeKind::kComputational, {-1.0, 2.0}};
  EXPECT_THROW(neg.validate(), DomainError);
}

TEST(Loglik, HandWorkedExample) {
  // m = 1, p = 1, theta = pi/12: Pr(1) = sin^2(pi/4) = 1/2.
  const std::vector<CountRecord> recs = {{1, OutcomeKind::kComputational, {4.0, 6.0}}};
  EXPECT_NEAR(loglik_comp(kPi / 12, 1.0, recs), 10 * std::log(0.5), 1e-12);
  // theta = 0, p = 1: Pr(1) = 0, so observed ones hit the probability floor.
  EXPECT_NEAR(loglik_comp(0.0, 1.0, recs), 6 * std::log(kProbabilityFloor), 1e-6);
  const std::vector<CountRecord> zeros = {{1, OutcomeKind::kComputational, {5.0, 0.0}}};
  EXPECT_NEAR(loglik_comp(0.0, 1.0, zeros), 0.0, 1e-15);
}

TEST(Loglik, MatchesReference) {
  const auto recs = sampled_records(GroverSchedule::eis(4), 0.2, 0.93, 500, 17);
  for (double t : {0.05, 0.2, 0.9}) {
    for (double p : {0.6, 0.93, 1.0}) {
      EXPECT_NEAR(loglik_comp(t, p, recs), ref_loglik(t, p, recs), 1e-9);
    }
  }
}

TEST(Loglik, OptimalBasisUsesThreeOutcomeModel) {
  const double th1 = 0.15;
  const std::vector<CountRecord> recs = {{2, OutcomeKind::kOptimal, {30.0, 50.0, 20.0}}};
  const auto pr = optimal_basis_probs(NoisyStateModel{0.16, 0.9, 2, 3}, th1);
  const double ref = 30 * std::log(pr[0]) + 50 * std::log(pr[1]) + 20 * std::log(pr[2]);
  EXPECT_NEAR(loglik_opt(0.16, 0.9, recs, th1, 3), ref, 1e-10);
  // With perfect overlaps the 4-parameter model reduces to the optimal one.
  EXPECT_NEAR(loglik_4param(0.16, 0.9, 1.0, 1.0, recs, th1, 3), ref, 1e-10);
}

TEST(MleSearch, FindsQuadraticMaximum) {
  ParamGrid grid{{GridAxis{"x", -1, 1, 41, 21}, GridAxis{"y", 0, 2, 41, 21}}, 4};
  const auto r = mle_search(
      [](std::span<const double> v) {
        return -std::pow(v[0] - 0.123456, 2) - 3 * std::pow(v[1] - 1.654321, 2);
      },
      grid);
  EXPECT_NEAR(r.argmax[0], 0.123456, r.finest_cell[0]);
  EXPECT_NEAR(r.argmax[1], 1.654321, r.finest_cell[1]);
  ASSERT_EQ(r.level_best.size(), 5u);
  for (std::size_t i = 1; i < r.level_best.size(); ++i) {
    EXPECT_GE(r.level_best[i], r.level_best[i - 1]);
  }
}

TEST(MleSearch, TiesGoToSmallestTuple) {
  ParamGrid grid{{GridAxis{"x", 0, 1, 11, 11}, GridAxis{"y", 0, 1, 11, 11}}, 2};
  const auto r = mle_search([](std::span<const double>) { return 1.0; }, grid);
  EXPECT_DOUBLE_EQ(r.argmax[0], 0.0);
  EXPECT_DOUBLE_EQ(r.argmax[1], 0.0);
  EXPECT_TRUE(r.flat_axes[0]);
  EXPECT_TRUE(r.flat_axes[1]);
}

TEST(MleSearch, AllNonFiniteThrows) {
  ParamGrid grid{{GridAxis{"x", 0, 1, 11, 11}}, 1};
  EXPECT_THROW(
      mle_search([](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); },
                 grid),
      EstimationFailed);
  ParamGrid bad{{GridAxis{"x", 1, 0, 11, 11}}, 1};
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Estimate, FixedPMatchesBruteForce) {
  const auto s = GroverSchedule::eis(4);
  const auto recs = sampled_records(s, 0.143659, 1.0, 200, 5);
  const auto r = estimate_comp_fixed_p(recs, 1.0, theta_axis(s.max_nq()));
  const int n = 100000;
  double best = -std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = kPi / 2 * i / n;
    const double ll = ref_loglik(t, 1.0, recs);
    if (ll > best) {
      best = ll;
      best_t = t;
    }
  }
  EXPECT_GE(r.log_likelihood, best - 1e-9);
  EXPECT_NEAR(r.theta_hat, best_t, 2 * kPi / 2 / n);
}

TEST(Estimate, TwoParameterMatchesBruteForce) {
  const auto s = GroverSchedule::eis(3);
  const auto recs = sampled_records(s, 0.3, 0.9, 400, 8);
  const auto r = estimate_comp(recs, default_2param_grid(s));
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 4000; ++i) {
    for (int j = 0; j <= 250; ++j) {
      best = std::max(best, ref_loglik(kPi / 2 * i / 4000, 0.5 + 0.5 * j / 250, recs));
    }
  }
  EXPECT_GE(r.log_likelihood, best - 1e-9);
  EXPECT_NEAR(r.log_likelihood, ref_loglik(r.theta_hat, r.p_hat, recs), 1e-9);
  EXPECT_FALSE(r.p_unidentifiable);
}

TEST(Estimate, SingleCircuitFlagsP) {
  const auto s = GroverSchedule::eis(0);
  const auto recs = sampled_records(s, 0.3, 0.9, 1000, 3);
  const auto r = estimate_comp(recs, default_2param_grid(s));
  EXPECT_TRUE(r.p_unidentifiable);
  EXPECT_NEAR(std::pow(std::sin(r.theta_hat), 2), recs[0].counts[1] / 1000.0, 1e-6);
}

TEST(Estimate, RmseShrinksWithShots) {
  const auto s = GroverSchedule::eis(3);
  const double theta = 0.143659;
  auto rmse = [&](std::uint64_t shots) {
    double se = 0.0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
      const auto recs = sampled_records(s, theta, 1.0, shots, derive_seed(shots, {static_cast<std::uint64_t>(t)}));
      const auto r = estimate_comp_fixed_p(recs, 1.0, theta_axis(s.max_nq()));
      se += std::pow(r.theta_hat - theta, 2);
    }
    return std::sqrt(se / trials);
  };
  const double lo = rmse(100);
  const double hi = rmse(1600);
  // 16x the shots: expect about a 4x reduction.
  EXPECT_GT(lo / hi, 2.5);
  EXPECT_LT(lo / hi, 6.5);
}

TEST(Grids, Defaults) {
  const auto s = GroverSchedule::eis(7);
  EXPECT_EQ(theta_axis(s.max_nq()).points, 16 * 129 + 1);
  EXPECT_EQ(theta_axis(1).points, 201);
  const auto g = default_4param_grid(s);
  ASSERT_EQ(g.axes.size(), 4u);
  EXPECT_NO_THROW(g.validate());
  EXPECT_NO_THROW(default_2param_grid(s).validate());
}

}  // namespace
}  // namespace qae
