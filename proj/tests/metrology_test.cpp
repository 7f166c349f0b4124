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

#include <Eigen/Dense>

#include "qae/errors.hpp"
#include "qae/metrology.hpp"

namespace qae {
namespace {

using Eigen::MatrixXd;

// d rho / d(param) by central differences on the dense block-basis matrix.
MatrixXd drho_fd(NoisyStateModel model, Param which, double h = 1e-6) {
  NoisyStateModel lo = model;
  NoisyStateModel hi = model;
  if (which == Param::kTheta) {
    lo.theta -= h;
    hi.theta += h;
  } else {
    lo.p -= h;
    hi.p += h;
  }
  return (rho_block_dense(hi) - rho_block_dense(lo)) / (2 * h);
}

// Reference QFIM entries from the eigen-decomposition of q|psi><psi| + r I.
double ref_f_thth(const NoisyStateModel& m) {
  const double q = m.q();
  const double r = (1 - q) / m.d();
  return 4.0 * m.nq() * m.nq() * q * q / (q + 2 * r);
}

double ref_f_pp(const NoisyStateModel& m) {
  const double q = m.q();
  const double d = m.d();
  const double r = (1 - q) / d;
  const double dq = m.m * std::pow(m.p, m.m - 1);
  return dq * dq * ((1 - 1 / d) * (1 - 1 / d) / (q + r) + (d - 1) / (d * d * r));
}

const std::vector<NoisyStateModel> kModels = {
    {0.143659, 0.95, 1, 3}, {0.3, 0.9, 2, 2}, {0.7, 0.8, 4, 1}, {1.1, 0.99, 8, 3}};

TEST(Metrology, RhoIsAValidState) {
  for (const auto& m : kModels) {
    const MatrixXd rho = rho_block_dense(m);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-13);
    EXPECT_NEAR((rho - rho.transpose()).norm(), 0.0, 1e-15);
    const auto e = rho_eigensystem(m);
    EXPECT_NEAR(e.lambda0, m.q() + (1 - m.q()) / m.d(), 1e-15);
    EXPECT_NEAR(e.lambda_deg, (1 - m.q()) / m.d(), 1e-15);
    EXPECT_EQ(e.multiplicity, m.d() - 1);
  }
}

TEST(Metrology, SldSolvesLyapunovEquation) {
  for (const auto& m : kModels) {
    const MatrixXd rho = rho_block_dense(m);
    for (Param which : {Param::kTheta, Param::kP}) {
      const MatrixXd d = drho_fd(m, which);
      const MatrixXd ln = sld_numeric_dense(m, which);
      const MatrixXd lc = which == Param::kTheta ? sld_theta_closed(m).dense(m.d())
                                                 : sld_p_closed(m).dense(m.d());
      const double scale = std::max(1.0, d.norm());
      EXPECT_NEAR((0.5 * (rho * ln + ln * rho) - d).norm() / scale, 0.0, 1e-7);
      EXPECT_NEAR((ln - lc).norm() / std::max(1.0, lc.norm()), 0.0, 1e-10);
    }
  }
}

TEST(Metrology, QfimMatchesReference) {
  for (const auto& m : kModels) {
    const auto c = qfim_closed(m);
    const auto n = qfim_numeric(m);
    EXPECT_NEAR(c.f_theta_theta / ref_f_thth(m), 1.0, 1e-10);
    EXPECT_NEAR(c.f_pp / ref_f_pp(m), 1.0, 1e-10);
    EXPECT_NEAR(c.f_theta_p, 0.0, 1e-12);
    EXPECT_NEAR(n.f_theta_theta / c.f_theta_theta, 1.0, 1e-9);
    EXPECT_NEAR(n.f_pp / c.f_pp, 1.0, 1e-9);
    EXPECT_NEAR(n.f_theta_p, 0.0, 1e-9);
  }
}

TEST(Metrology, NoiselessQfiIsFourNqSquared) {
  for (int m : {0, 1, 3}) {
    const NoisyStateModel model{0.4, 1.0, m, 3};
    EXPECT_NEAR(qfim_closed(model).f_theta_theta, 4.0 * (2 * m + 1) * (2 * m + 1), 1e-12);
  }
  const NoisyStateModel pure{0.4, 1.0, 2, 3};
  EXPECT_TRUE(qfim_closed(pure).f_pp_singular);
  EXPECT_TRUE(std::isinf(qfim_closed(pure).f_pp));
  EXPECT_THROW(sld_p_closed(pure), SingularModelError);
  EXPECT_THROW(sld_numeric(pure, Param::kP), SingularModelError);
}

TEST(Metrology, QcrbIsAdditive) {
  const auto s = GroverSchedule::eis(4);
  double sum = 0.0;
  for (int m : s.m_list) sum += ref_f_thth(NoisyStateModel{0.2, 0.95, m, 3});
  EXPECT_NEAR(qcrb_theta(s, 3, 0.95, 100.0) * 100.0 * sum, 1.0, 1e-10);
  EXPECT_NEAR(ccrb_noiseless(s, 100.0), 1.0 / (4 * 100.0 * s.sum_nq_squared()), 1e-18);
}

TEST(Metrology, ComputationalFisherMatchesFiniteDifference) {
  const double theta = 0.3;
  const double p = 0.9;
  for (int m : {0, 1, 4}) {
    auto pr1 = [m](double t, double pp) {
      const double q = std::pow(pp, m);
      return q * std::pow(std::sin((2 * m + 1) * t), 2) + (1 - q) / 2;
    };
    const double h = 1e-6;
    const double a = pr1(theta, p);
    const double dt = (pr1(theta + h, p) - pr1(theta - h, p)) / (2 * h);
    const double ref = dt * dt / a + dt * dt / (1 - a);
    const auto model = comp_basis_model(m);
    EXPECT_NEAR(classical_fisher(model, theta, p, Param::kTheta) / ref, 1.0, 1e-6);
    const auto probs = model.probs(theta, p);
    EXPECT_NEAR(probs[1], a, 1e-14);
  }
}

TEST(Metrology, FiniteDifferenceFallbackAgrees) {
  auto model = comp_basis_model(2);
  const double analytic = classical_fisher(model, 0.25, 0.9, Param::kP);
  model.dprobs = nullptr;
  EXPECT_NEAR(classical_fisher(model, 0.25, 0.9, Param::kP) / analytic, 1.0, 1e-6);
}

TEST(Metrology, ZeroProbabilityOutcomesDropped) {
  // Noiseless m = 0 at theta = 0: Pr(1) = 0.
  std::size_t dropped = 0;
  const double f = classical_fisher(comp_basis_model(0), 0.0, 1.0, Param::kTheta, &dropped);
  EXPECT_EQ(dropped, 1u);
  EXPECT_TRUE(std::isfinite(f));
}

TEST(Metrology, NoisyCcrbBelowQcrbInformation) {
  const auto s = GroverSchedule::eis(5);
  const double theta = 0.143659;
  const auto b = ccrb_comp_noisy(s, theta, 0.95, 1.0);
  EXPECT_GE(b.variance, qcrb_theta(s, 3, 0.95, 1.0) * (1 - 1e-12));
  // With no noise the computational basis is optimal for theta alone.
  double info = 0.0;
  for (int m : s.m_list) info += classical_fisher(comp_basis_model(m), theta, 1.0, Param::kTheta);
  EXPECT_NEAR(1.0 / info / ccrb_noiseless(s, 1.0), 1.0, 1e-10);
  // Treating p as a nuisance can only cost information.
  EXPECT_GE(ccrb_comp_noisy(s, theta, 1.0, 1.0).variance, ccrb_noiseless(s, 1.0));
}

TEST(Metrology, OptimalBasisProbabilities) {
  for (const auto& m : kModels) {
    const MatrixXd rho = rho_block_dense(m);
    for (double off : {0.0, 0.01, -0.03}) {
      const double th1 = m.theta + off;
      const auto ob = optimal_basis(th1, m.nq());
      Eigen::VectorXd v0 = Eigen::VectorXd::Zero(m.d());
      Eigen::VectorXd v1 = Eigen::VectorXd::Zero(m.d());
      v0[0] = ob.vec0()[0];
      v0[1] = ob.vec0()[1];
      v1[0] = ob.vec1()[0];
      v1[1] = ob.vec1()[1];
      const auto pr = optimal_basis_probs(m, th1);
      const double a = v0.dot(rho * v0);
      const double b = v1.dot(rho * v1);
      EXPECT_NEAR(pr[0], a, 1e-13);
      EXPECT_NEAR(pr[1], b, 1e-13);
      EXPECT_NEAR(pr[2], 1 - a - b, 1e-13);
      EXPECT_NEAR(v0.dot(v1), 0.0, 1e-15);
    }
  }
}

TEST(Metrology, OptimalBasisSaturatesQfiAtTruth) {
  for (const auto& m : kModels) {
    const auto model = opt_basis_model(m.m, m.n, m.theta);
    const double cf = classical_fisher(model, m.theta, m.p, Param::kTheta);
    EXPECT_NEAR(cf / qfim_closed(m).f_theta_theta, 1.0, 1e-8);
  }
}

}  // namespace
}  // namespace qae
