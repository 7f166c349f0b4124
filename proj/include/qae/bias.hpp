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

// Outcome models for an imperfect basis change. With
//   C_0|psi_0> = pc0 |0> + ...,   C_1|psi_1> = pc1 |0> + ...
// and a residual relative phase phi_tilde, the lambda_0/lambda_1 outcomes
// lose weight |pc|^2 = pc0^2 cos^2(N_q theta) + pc1^2 sin^2(N_q theta) and
// the effective angle shifts by theta_p.

#pragma once

#include <array>

#include "qae/oracle.hpp"

namespace qae {

struct ThetaPBias {
  double exact = 0.0;       ///< arctan form
  double linearized = 0.0;  ///< sin(2 N_q theta)(pc1/pc0 - 1) / (2 N_q)
};

/// Angle shift from unequal overlaps: tan(N_q(theta + theta_p)) =
/// (pc1/pc0) tan(N_q theta). The exact branch is taken continuously through
/// the poles of tan. Requires pc0 > 0.
ThetaPBias theta_p_bias(double pc0, double pc1, double theta, int nq);

/// |pc|^2 for the given overlaps at angle N_q theta.
double combined_overlap_sq(double pc0, double pc1, double theta, int nq);

/// Three-outcome probabilities (lambda_0, lambda_1, rest) of the imperfect
/// basis, with cos(phi_tilde) ~ 1 - phi_tilde^2/2. theta_p uses the exact
/// arctan form. Requires |phi_tilde| <= 0.5 (DomainError otherwise).
std::array<double, 3> biased_outcome_probs(const NoisyStateModel& model, double theta_hat1,
                                           double pc0, double pc1, double phi_tilde);

/// Bias theta_phi induced by phi_tilde:
///   -gamma / (N_q sqrt(1 - sin^2(2 N_q (theta - theta_hat1 + theta_p)))),
///   gamma = phi_tilde^2/2 sin(2 N_q (theta + theta_p)) cos(2 N_q theta_hat1).
/// With `unit_denominator` the square root is replaced by 1. Throws
/// BiasUndefined when the square root is below 1e-6.
double theta_phi_bias(double phi_tilde, double theta, double theta_hat1, double theta_p, int nq,
                      bool unit_denominator = false);

}  // namespace qae
