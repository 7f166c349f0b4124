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

#include "qae/metrology.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qae/errors.hpp"

namespace qae {

namespace {

// d(p^m)/dp.
double dq_dp(const NoisyStateModel& model) {
  if (model.m == 0) return 0.0;
  return model.m * std::pow(model.p, model.m - 1);
}

}  // namespace

std::array<double, 2> RhoEigensystem::vec0() const {
  return {std::cos(block_angle), std::sin(block_angle)};
}

std::array<double, 2> RhoEigensystem::vec1() const {
  return {std::sin(block_angle), -std::cos(block_angle)};
}

Eigen::MatrixXd SldBlock::dense(int d) const {
  Eigen::MatrixXd out = diag_rest * Eigen::MatrixXd::Identity(d, d);
  out.topLeftCorner<2, 2>() += coeff * block;
  return out;
}

RhoEigensystem rho_eigensystem(const NoisyStateModel& model) {
  model.validate();
  const double q = model.q();
  const double d = model.d();
  RhoEigensystem e;
  e.lambda_deg = (1.0 - q) / d;
  e.lambda0 = q + e.lambda_deg;
  e.multiplicity = model.d() - 1;
  e.block_angle = model.nq() * model.theta;
  return e;
}

Eigen::MatrixXd rho_block_dense(const NoisyStateModel& model) {
  const auto e = rho_eigensystem(model);
  const int d = model.d();
  const double q = model.q();
  Eigen::MatrixXd rho = e.lambda_deg * Eigen::MatrixXd::Identity(d, d);
  const auto v = e.vec0();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) rho(i, j) += q * v[i] * v[j];
  }
  return rho;
}

Eigen::MatrixXd sld_numeric_dense(const NoisyStateModel& model, Param which) {
  model.validate();
  if (which == Param::kP && model.p >= 1.0 && model.m > 0) {
    throw SingularModelError("sld_numeric: L_p is singular at p = 1");
  }
  const auto e = rho_eigensystem(model);
  const int d = model.d();
  const double nq = model.nq();
  const double c = std::cos(e.block_angle);
  const double s = std::sin(e.block_angle);

  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(d, e.lambda_deg);
  lambda(0) = e.lambda0;

  Eigen::MatrixXd vecs = Eigen::MatrixXd::Identity(d, d);
  vecs(0, 0) = c;
  vecs(1, 0) = s;
  vecs(0, 1) = s;
  vecs(1, 1) = -c;

  Eigen::VectorXd dlambda = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd dvecs = Eigen::MatrixXd::Zero(d, d);
  if (which == Param::kTheta) {
    dvecs(0, 0) = -nq * s;
    dvecs(1, 0) = nq * c;
    dvecs(0, 1) = nq * c;
    dvecs(1, 1) = nq * s;
  } else {
    const double dq = dq_dp(model);
    dlambda.setConstant(-dq / d);
    dlambda(0) = dq * (1.0 - 1.0 / d);
  }

  // W(l, k) = <lambda_l | d lambda_k>.
  const Eigen::MatrixXd overlaps = vecs.transpose() * dvecs;
  Eigen::MatrixXd eigen_frame = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    if (lambda(j) > 0.0) eigen_frame(j, j) = dlambda(j) / lambda(j);
  }
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      if (k == l) continue;
      const double sum = lambda(k) + lambda(l);
      if (sum <= 0.0) continue;
      eigen_frame(l, k) += 2.0 * (lambda(k) - lambda(l)) / sum * overlaps(l, k);
    }
  }
  return vecs * eigen_frame * vecs.transpose();
}

SldBlock sld_numeric(const NoisyStateModel& model, Param which) {
  const Eigen::MatrixXd dense = sld_numeric_dense(model, which);
  SldBlock out;
  out.which = which;
  out.coeff = 1.0;
  out.diag_rest = dense(2, 2);
  out.block = dense.topLeftCorner<2, 2>() - out.diag_rest * Eigen::Matrix2d::Identity();
  return out;
}

SldBlock sld_theta_closed(const NoisyStateModel& model) {
  model.validate();
  const double q = model.q();
  const double d = model.d();
  const double nq = model.nq();
  const double two_x = 2.0 * nq * model.theta;
  SldBlock out;
  out.which = Param::kTheta;
  out.coeff = 2.0 * d * nq * q / (2.0 + (d - 2.0) * q);
  out.block << -std::sin(two_x), std::cos(two_x), std::cos(two_x), std::sin(two_x);
  out.diag_rest = 0.0;
  return out;
}

SldBlock sld_p_closed(const NoisyStateModel& model) {
  model.validate();
  SldBlock out;
  out.which = Param::kP;
  if (model.m == 0) {
    return out;
  }
  if (model.p >= 1.0) {
    throw SingularModelError("sld_p_closed: L_p is singular at p = 1");
  }
  const double q = model.q();
  const double d = model.d();
  const double dq = dq_dp(model);
  const double x = model.nq() * model.theta;
  const double c = std::cos(x);
  const double s = std::sin(x);
  out.coeff = d * dq / ((1.0 + (d - 1.0) * q) * (1.0 - q));
  out.block << c * c, c * s, c * s, s * s;
  out.diag_rest = -dq / (1.0 - q);
  return out;
}

Qfim qfim_closed(const NoisyStateModel& model) {
  model.validate();
  const double q = model.q();
  const double d = model.d();
  const double nq = model.nq();
  Qfim f;
  f.f_theta_theta = 4.0 * d * nq * nq * q * q / (2.0 + (d - 2.0) * q);
  f.f_theta_p = 0.0;
  if (model.m == 0) {
    f.f_pp = 0.0;
  } else if (model.p >= 1.0) {
    f.f_pp = std::numeric_limits<double>::infinity();
    f.f_pp_singular = true;
  } else {
    const double dq = dq_dp(model);
    f.f_pp = dq * dq * (d - 1.0) / ((1.0 - q) * (1.0 + (d - 1.0) * q));
  }
  return f;
}

Qfim qfim_numeric(const NoisyStateModel& model) {
  const Eigen::MatrixXd rho = rho_block_dense(model);
  const Eigen::MatrixXd lt = sld_numeric_dense(model, Param::kTheta);
  const Eigen::MatrixXd lp = sld_numeric_dense(model, Param::kP);
  auto element = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return 0.5 * (rho * (a * b + b * a)).trace();
  };
  Qfim f;
  f.f_theta_theta = element(lt, lt);
  f.f_pp = element(lp, lp);
  f.f_theta_p = element(lt, lp);
  return f;
}

double qcrb_theta(const GroverSchedule& schedule, int n, double p, double shots_per_circuit) {
  if (shots_per_circuit < 1.0) {
    throw DomainError("qcrb_theta: shots_per_circuit must be >= 1");
  }
  double total = 0.0;
  for (int m : schedule.m_list) {
    total += qfim_closed(NoisyStateModel{0.0, p, m, n}).f_theta_theta;
  }
  return 1.0 / (shots_per_circuit * total);
}

OutcomeModel comp_basis_model(int m) {
  const double nq = grover_nq(m);
  OutcomeModel model;
  model.probs = [m, nq](double theta, double p) {
    const double q = std::pow(p, m);
    const double c = std::cos(nq * theta);
    const double s = std::sin(nq * theta);
    return std::vector<double>{q * c * c + (1.0 - q) / 2.0, q * s * s + (1.0 - q) / 2.0};
  };
  model.dprobs = [m, nq](double theta, double p, Param which) {
    const double q = std::pow(p, m);
    if (which == Param::kTheta) {
      const double g = q * nq * std::sin(2.0 * nq * theta);
      return std::vector<double>{-g, g};
    }
    const double dq = m == 0 ? 0.0 : m * std::pow(p, m - 1);
    const double c = std::cos(nq * theta);
    const double s = std::sin(nq * theta);
    return std::vector<double>{dq * (c * c - 0.5), dq * (s * s - 0.5)};
  };
  return model;
}

OutcomeModel opt_basis_model(int m, int n, double theta_hat1) {
  OutcomeModel model;
  model.probs = [m, n, theta_hat1](double theta, double p) {
    const auto pr = optimal_basis_probs(NoisyStateModel{theta, p, m, n}, theta_hat1);
    return std::vector<double>(pr.begin(), pr.end());
  };
  model.dprobs = [m, n, theta_hat1](double theta, double p, Param which) {
    const double q = std::pow(p, m);
    const double nq = grover_nq(m);
    const double d = std::ldexp(1.0, n + 1);
    const double arg = 2.0 * nq * (theta - theta_hat1);
    if (which == Param::kTheta) {
      const double g = q * nq * std::cos(arg);
      return std::vector<double>{g, -g, 0.0};
    }
    const double dq = m == 0 ? 0.0 : m * std::pow(p, m - 1);
    const double sn = std::sin(arg);
    return std::vector<double>{dq * ((1.0 + sn) / 2.0 - 1.0 / d), dq * ((1.0 - sn) / 2.0 - 1.0 / d),
                               -dq * (d - 2.0) / d};
  };
  return model;
}

namespace {

std::vector<double> numeric_derivative(const OutcomeModel& model, double theta, double p,
                                       Param which) {
  auto central = [&](double h) {
    std::vector<double> plus;
    std::vector<double> minus;
    if (which == Param::kTheta) {
      plus = model.probs(theta + h, p);
      minus = model.probs(theta - h, p);
    } else {
      plus = model.probs(theta, p + h);
      minus = model.probs(theta, p - h);
    }
    for (std::size_t i = 0; i < plus.size(); ++i) plus[i] = (plus[i] - minus[i]) / (2.0 * h);
    return plus;
  };
  constexpr double kStep = 1e-6;
  const auto coarse = central(kStep);
  const auto fine = central(kStep / 2.0);
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

std::vector<double> derivative(const OutcomeModel& model, double theta, double p, Param which) {
  if (model.dprobs) return model.dprobs(theta, p, which);
  return numeric_derivative(model, theta, p, which);
}

void check_probs(const std::vector<double>& probs) {
  for (double v : probs) {
    if (v < 0.0) throw DomainError("classical_fisher: negative outcome probability");
  }
}

}  // namespace

double classical_fisher(const OutcomeModel& model, double theta, double p, Param which,
                        std::size_t* dropped) {
  const auto probs = model.probs(theta, p);
  check_probs(probs);
  const auto dprobs = derivative(model, theta, p, which);
  double f = 0.0;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) {
      ++skipped;
      continue;
    }
    f += dprobs[i] * dprobs[i] / probs[i];
  }
  if (dropped) *dropped = skipped;
  return f;
}

Eigen::Matrix2d classical_fisher_matrix(const OutcomeModel& model, double theta, double p) {
  const auto probs = model.probs(theta, p);
  check_probs(probs);
  const auto dt = derivative(model, theta, p, Param::kTheta);
  const auto dp = derivative(model, theta, p, Param::kP);
  Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    f(0, 0) += dt[i] * dt[i] / probs[i];
    f(0, 1) += dt[i] * dp[i] / probs[i];
    f(1, 1) += dp[i] * dp[i] / probs[i];
  }
  f(1, 0) = f(0, 1);
  return f;
}

NuisanceBound ccrb_comp_noisy(const GroverSchedule& schedule, double theta, double p,
                              double shots_per_circuit) {
  Eigen::Matrix2d total = Eigen::Matrix2d::Zero();
  for (int m : schedule.m_list) {
    total += classical_fisher_matrix(comp_basis_model(m), theta, p);
  }
  NuisanceBound b;
  const double det = total.determinant();
  if (total(1, 1) <= 1e-12 * std::max(1.0, total(0, 0)) || !(det > 0.0)) {
    b.p_row_dropped = true;
    b.variance = 1.0 / (shots_per_circuit * total(0, 0));
  } else {
    b.variance = total(1, 1) / det / shots_per_circuit;
  }
  return b;
}

double ccrb_noiseless(const GroverSchedule& schedule, double shots_per_circuit) {
  return 1.0 / (4.0 * shots_per_circuit * schedule.sum_nq_squared());
}

std::array<double, 2> OptimalBasis::vec0() const {
  return {std::cos(block_angle), std::sin(block_angle)};
}

std::array<double, 2> OptimalBasis::vec1() const {
  return {-std::sin(block_angle), std::cos(block_angle)};
}

OptimalBasis optimal_basis(double theta_hat, int nq) {
  OptimalBasis b;
  b.block_angle = nq * theta_hat + std::numbers::pi / 4.0;
  return b;
}

std::array<double, 3> optimal_basis_probs(const NoisyStateModel& model, double theta_hat1) {
  model.validate();
  const double q = model.q();
  const double d = model.d();
  const double sn = std::sin(2.0 * model.nq() * (model.theta - theta_hat1));
  const double mixed = (1.0 - q) / d;
  return {q * (1.0 + sn) / 2.0 + mixed, q * (1.0 - sn) / 2.0 + mixed, mixed * (d - 2.0)};
}

}  // namespace qae
