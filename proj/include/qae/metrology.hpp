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

// Quantum and classical Fisher information for the depolarized amplitude
// estimation state
//
//   rho = q |psi(N_q theta)><psi(N_q theta)| + (1 - q) I / d,   q = p^m.
//
// Operators are represented in the "block basis": the first two basis
// vectors are |psi_0>|0> and |psi_1>|1>, the remaining d - 2 span their
// orthogonal complement. In that basis rho is real and block diagonal, so
// every closed form below is independent of the (unknown) oracle states.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qae/oracle.hpp"

namespace qae {

enum class Param { kTheta, kP };

struct RhoEigensystem {
  double lambda0 = 0.0;     ///< q + (1 - q)/d
  double lambda_deg = 0.0;  ///< (1 - q)/d, multiplicity d - 1
  int multiplicity = 0;
  double block_angle = 0.0;  ///< N_q theta

  /// |lambda_0> = [cos, sin] and |lambda_1> = [sin, -cos] in the 2D block.
  std::array<double, 2> vec0() const;
  std::array<double, 2> vec1() const;
};

/// An SLD operator in block form:
///   L = coeff * block (+) 0  +  diag_rest * I_d.
/// diag_rest is therefore the only coefficient on the orthogonal complement.
struct SldBlock {
  Param which = Param::kTheta;
  double coeff = 0.0;
  Eigen::Matrix2d block = Eigen::Matrix2d::Zero();
  double diag_rest = 0.0;

  Eigen::MatrixXd dense(int d) const;
};

struct Qfim {
  double f_theta_theta = 0.0;
  double f_pp = 0.0;
  double f_theta_p = 0.0;
  /// Set when p = 1 (with m > 0): f_pp is reported as +infinity.
  bool f_pp_singular = false;
};

RhoEigensystem rho_eigensystem(const NoisyStateModel& model);

/// Dense rho in the block basis, d x d.
Eigen::MatrixXd rho_block_dense(const NoisyStateModel& model);

/// SLD from the generic spectral formula
///   L = sum_j (d lambda_j / lambda_j) |j><j|
///     + 2 sum_{k != l} (lambda_k - lambda_l)/(lambda_k + lambda_l) <l|d k> |l><k|
/// using closed-form derivatives of the eigen-pairs. Throws
/// SingularModelError for which = p at p = 1.
Eigen::MatrixXd sld_numeric_dense(const NoisyStateModel& model, Param which);
SldBlock sld_numeric(const NoisyStateModel& model, Param which);

SldBlock sld_theta_closed(const NoisyStateModel& model);
/// Throws SingularModelError at p = 1 with m > 0.
SldBlock sld_p_closed(const NoisyStateModel& model);

Qfim qfim_closed(const NoisyStateModel& model);
/// Full 2x2 QFIM from the dense SLDs and 1/2 Tr[rho {L_i, L_j}].
Qfim qfim_numeric(const NoisyStateModel& model);

/// Variance lower bound for theta over a whole schedule, by additivity of
/// the theta-theta QFIM element over independent circuits:
///   1 / (shots_per_circuit * sum_k F_thth(m_k)).
double qcrb_theta(const GroverSchedule& schedule, int n, double p, double shots_per_circuit);

/// Outcome distribution as a function of (theta, p), optionally with
/// analytic derivatives.
struct OutcomeModel {
  std::function<std::vector<double>(double theta, double p)> probs;
  std::function<std::vector<double>(double theta, double p, Param which)> dprobs;
};

/// Ancilla measurement in the computational basis after m Grover steps.
OutcomeModel comp_basis_model(int m);
/// Three-outcome {lambda_0, lambda_1, lambda_rest} measurement in the basis
/// optimal at theta_hat1.
OutcomeModel opt_basis_model(int m, int n, double theta_hat1);

/// Per-shot Fisher information sum_o (dPr_o)^2 / Pr_o for one parameter.
/// Outcomes with Pr_o <= 0 are skipped and counted in `dropped`. Uses the
/// model's analytic derivatives when present, otherwise a centered finite
/// difference with Richardson extrapolation (h = 1e-6).
double classical_fisher(const OutcomeModel& model, double theta, double p, Param which,
                        std::size_t* dropped = nullptr);

/// 2x2 classical Fisher information matrix over (theta, p).
Eigen::Matrix2d classical_fisher_matrix(const OutcomeModel& model, double theta, double p);

struct NuisanceBound {
  double variance = 0.0;  ///< [F^-1]_{theta,theta} / shots
  /// True when F_pp vanished and the p row was dropped before inversion.
  bool p_row_dropped = false;
};

/// Classical bound on theta with p as nuisance, computational-basis ancilla
/// measurement summed over the schedule.
NuisanceBound ccrb_comp_noisy(const GroverSchedule& schedule, double theta, double p,
                              double shots_per_circuit);

/// Noiseless computational-basis bound 1 / (4 shots sum_k N_q^2).
double ccrb_noiseless(const GroverSchedule& schedule, double shots_per_circuit);

struct OptimalBasis {
  double block_angle = 0.0;  ///< N_q theta_hat + pi/4
  std::array<double, 2> vec0() const;  ///< [cos, sin]
  std::array<double, 2> vec1() const;  ///< [-sin, cos]
  /// The remaining d - 2 projectors span the orthogonal complement.
  bool includes_complement = true;
};

OptimalBasis optimal_basis(double theta_hat, int nq);

/// (Pr_lambda0, Pr_lambda1, Pr_rest) for the basis optimal at theta_hat1.
std::array<double, 3> optimal_basis_probs(const NoisyStateModel& model, double theta_hat1);

}  // namespace qae
