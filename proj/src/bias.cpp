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

#include "qae/bias.hpp"

#include <algorithm>
#include <cmath>

#include "qae/errors.hpp"

namespace qae {

ThetaPBias theta_p_bias(double pc0, double pc1, double theta, int nq) {
  if (!(pc0 > 0.0)) {
    throw DomainError("theta_p_bias: pc0 must be positive");
  }
  const double ratio = pc1 / pc0;
  const double x = nq * theta;
  const double c = std::cos(x);
  const double s = std::sin(x);
  // (r - 1) tan / (1 + r tan^2), multiplied through by cos^2.
  ThetaPBias out;
  out.exact = std::atan((ratio - 1.0) * s * c / (c * c + ratio * s * s)) / nq;
  out.linearized = std::sin(2.0 * x) * (ratio - 1.0) / (2.0 * nq);
  return out;
}

double combined_overlap_sq(double pc0, double pc1, double theta, int nq) {
  const double c = std::cos(nq * theta);
  const double s = std::sin(nq * theta);
  return pc0 * pc0 * c * c + pc1 * pc1 * s * s;
}

std::array<double, 3> biased_outcome_probs(const NoisyStateModel& model, double theta_hat1,
                                           double pc0, double pc1, double phi_tilde) {
  model.validate();
  if (std::abs(phi_tilde) > 0.5) {
    throw DomainError("biased_outcome_probs: |phi_tilde| must be <= 0.5");
  }
  const int nq = model.nq();
  const double q = model.q();
  const double d = model.d();
  const double theta_p = theta_p_bias(pc0, pc1, model.theta, nq).exact;
  const double pc_sq = combined_overlap_sq(pc0, pc1, model.theta, nq);
  const double shift = std::sin(2.0 * nq * (model.theta - theta_hat1 + theta_p));
  const double phase = 0.5 * phi_tilde * phi_tilde * std::sin(2.0 * nq * (model.theta + theta_p)) *
                       std::cos(2.0 * nq * theta_hat1);
  const double mixed = (1.0 - q) / d;
  const double coherent = q * pc_sq * 0.5;
  return {coherent * (1.0 + shift - phase) + mixed, coherent * (1.0 - shift + phase) + mixed,
          mixed * (d - 2.0) + q * (1.0 - pc_sq)};
}

double theta_phi_bias(double phi_tilde, double theta, double theta_hat1, double theta_p, int nq,
                      bool unit_denominator) {
  const double gamma = 0.5 * phi_tilde * phi_tilde * std::sin(2.0 * nq * (theta + theta_p)) *
                       std::cos(2.0 * nq * theta_hat1);
  if (gamma == 0.0) return 0.0;
  double denom = 1.0;
  if (!unit_denominator) {
    const double sn = std::sin(2.0 * nq * (theta - theta_hat1 + theta_p));
    denom = std::sqrt(std::max(0.0, 1.0 - sn * sn));
    if (denom < 1e-6) {
      throw BiasUndefined("theta_phi_bias: degenerate denominator");
    }
  }
  return -gamma / (nq * denom);
}

}  // namespace qae
