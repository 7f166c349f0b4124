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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qae/oracle.hpp"

namespace qae {

/// Outcome classes a record tallies, in storage order.
///   kComputational: {ancilla 0, ancilla 1}
///   kOptimal:       {lambda_0, lambda_1, rest}
///   kPhase:         {X0, X1, Y0, Y1}
enum class OutcomeKind { kComputational, kOptimal, kPhase };

std::size_t outcome_count(OutcomeKind kind);

/// Tallies for one circuit. Sampled data holds integers; noise-free
/// synthetic data may hold expected (fractional) counts.
struct CountRecord {
  int m = 0;
  OutcomeKind kind = OutcomeKind::kComputational;
  std::vector<double> counts;

  double shots() const;
  /// Throws DomainError on a negative tally or a size mismatch with `kind`.
  void validate() const;
};

CountRecord make_record(int m, OutcomeKind kind, std::span<const std::uint64_t> counts);

/// Probability clip applied before every logarithm.
inline constexpr double kProbabilityFloor = 1e-300;

double loglik_comp(double theta, double p, std::span<const CountRecord> records);
double loglik_opt(double theta, double p, std::span<const CountRecord> records,
                  double theta_hat1, int n);
/// Biased-basis likelihood with phi_tilde = 0.
double loglik_4param(double theta, double p, double pc0, double pc1,
                     std::span<const CountRecord> records, double theta_hat1, int n);

struct GridAxis {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  int points = 51;  ///< coarse level
  int refine_points = 51;  ///< every refinement level
};

struct ParamGrid {
  std::vector<GridAxis> axes;
  int refinement_levels = 3;

  /// lower < upper, points >= 3, refine_points >= 3, levels >= 0.
  void validate() const;
};

/// theta on [0, pi/2]. The coarse point count is max(201, 16 N_q,max + 1)
/// so the fastest likelihood oscillation is sampled at least 8 times per
/// period; refinements use 201 points.
GridAxis theta_axis(int max_nq);
GridAxis p_axis(double lower = 0.5, double upper = 1.0);
GridAxis pc_axis(const std::string& name, double lower = 0.7, double upper = 1.0);

struct SearchResult {
  std::vector<double> argmax;
  double log_likelihood = 0.0;
  /// Max-min spread along an axis through the coarse argmax fell below 1e-9.
  std::vector<bool> flat_axes;
  /// Best log-likelihood after each level (coarse first).
  std::vector<double> level_best;
  /// Grid spacing of the final level, per axis.
  std::vector<double> finest_cell;
  std::size_t evaluations = 0;
};

using LogLikelihood = std::function<double(std::span<const double>)>;

/// Multi-level grid search: evaluate the coarse grid, then repeatedly
/// re-grid a +-2-cell window around the incumbent. Ties go to the
/// lexicographically smallest parameter tuple. Throws EstimationFailed if
/// every coarse evaluation is non-finite.
SearchResult mle_search(const LogLikelihood& loglik, const ParamGrid& grid);

struct EstimationResult {
  double theta_hat = 0.0;
  double p_hat = 1.0;
  std::optional<double> pc0_hat;
  std::optional<double> pc1_hat;
  double log_likelihood = 0.0;
  bool p_unidentifiable = false;
  SearchResult grid_meta;
};

/// (theta, p) from computational-basis ancilla records.
EstimationResult estimate_comp(std::span<const CountRecord> records, const ParamGrid& grid);
/// theta alone from computational-basis records with p held fixed.
EstimationResult estimate_comp_fixed_p(std::span<const CountRecord> records, double p,
                                       const GridAxis& theta);
/// (theta, p) from optimal-basis records.
EstimationResult estimate_opt(std::span<const CountRecord> records, double theta_hat1, int n,
                              const ParamGrid& grid);
/// (theta, p, pc0, pc1) from optimal-basis records under the biased model.
EstimationResult estimate_4param(std::span<const CountRecord> records, double theta_hat1, int n,
                                 const ParamGrid& grid);

/// Default grids for the estimators above.
ParamGrid default_2param_grid(const GroverSchedule& schedule);
ParamGrid default_4param_grid(const GroverSchedule& schedule);

}  // namespace qae
