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

// Two-step adaptive estimation: computational-basis MLE with VQC training,
// relative-phase estimation, then optimal-basis MLE.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qae/bias.hpp"
#include "qae/estimator.hpp"
#include "qae/oracle.hpp"
#include "qae/vqc.hpp"

namespace qae {

enum class BasisMode {
  kExact,    ///< Householder C_0, C_1 computed from the oracle (fidelity 1)
  kTrained,  ///< ansatz circuits trained during the first step
};

/// round-half-up sqrt(n_shot).
std::uint64_t first_step_shots(std::uint64_t n_shot);

struct AdaptiveConfig {
  std::uint64_t n_shot = 10000;
  GroverSchedule schedule = GroverSchedule::eis(7);
  int n_max_itr = 10;
  /// 0 selects the default round(sqrt(n_shot)).
  std::uint64_t n_phi_shot = 0;
  BasisMode basis_mode = BasisMode::kExact;
  int layers = 6;
  bool use_rz = false;
  double learning_rate = 0.1;
  /// Training cost shots per evaluation; 0 uses exact statevector costs.
  std::uint64_t shots_per_evaluation = 0;
  /// Overrides the default (theta, p) grid for both MLE steps.
  std::optional<ParamGrid> grid;
  std::uint64_t seed = 0;

  std::uint64_t first_shots() const { return first_step_shots(n_shot); }
  std::uint64_t second_shots() const { return n_shot - first_shots(); }
  std::uint64_t phi_shots() const { return n_phi_shot ? n_phi_shot : first_shots(); }
  ParamGrid resolved_grid() const;
  /// ConfigError with the offending field name.
  void validate() const;
};

struct RegisterPair {
  RegisterCircuit c0;
  RegisterCircuit c1;
  std::optional<Ansatz> ansatz0;
  std::optional<Ansatz> ansatz1;
};

struct TrainedBasis {
  RegisterPair circuits;
  double phi_hat = 0.0;     ///< [0, 2 pi)
  double theta_hat1 = 0.0;  ///< [0, pi/2]
};

struct FirstStepResult {
  EstimationResult mle;
  RegisterPair circuits;
  std::vector<TraceEntry> trace;
  std::vector<CountRecord> records;
  std::uint64_t shots = 0;  ///< ancilla-measurement shots only
  std::uint64_t gradient_shots = 0;
};

/// `initial` seeds the trained mode (random init when absent) and is ignored
/// in the exact mode.
FirstStepResult run_first_step(const SinOracle& oracle, double p_true,
                               const AdaptiveConfig& config,
                               const std::optional<std::pair<Ansatz, Ansatz>>& initial = {});

struct PhaseEstimate {
  double phi_hat = 0.0;
  CountRecord record;  ///< kPhase: {X0, X1, Y0, Y1}
};

/// Ancilla X/Y-basis probabilities after B' at m = 0:
/// {Pr^X(0), Pr^X(1), Pr^Y(0), Pr^Y(1)}.
std::array<double, 4> phase_probs(double theta, double phi);

double loglik_phase(double phi, double theta_hat1, const CountRecord& record);

/// Draws n_phi_shot shots per basis and maximizes the four-outcome
/// likelihood over phi. Throws PhaseUnidentifiable if |sin 2 theta_hat1| < 1e-3.
PhaseEstimate estimate_phase(const SinOracle& oracle, const RegisterPair& circuits,
                             double theta_hat1, std::uint64_t n_phi_shot, std::uint64_t seed);

/// B'(C_0, C_1), then Rz(-phi_hat) and Ry(-2 N_q theta_hat1 - pi/2) on the ancilla.
RegisterCircuit build_b(const TrainedBasis& trained, int nq);

/// {lambda_0, lambda_1, rest}: index 0, index 2^n, everything else.
std::array<std::uint64_t, 3> classify_outcomes(std::span<const std::uint64_t> counts, int n);

struct SecondStepResult {
  EstimationResult mle;
  std::vector<CountRecord> records;
  std::uint64_t shots = 0;
};

SecondStepResult run_second_step(const SinOracle& oracle, double p_true,
                                 const GroverSchedule& schedule, const TrainedBasis& trained,
                                 std::uint64_t shots_per_mk, const ParamGrid& grid,
                                 std::uint64_t seed);

struct AdaptiveResult {
  EstimationResult final;  ///< second step
  EstimationResult first;
  double phi_hat = 0.0;
  /// Phase estimation was skipped because theta_hat1 made it unidentifiable.
  bool phase_fallback = false;
  Fidelities fidelities;
  std::uint64_t n_query = 0;  ///< n_shot * N_A
  std::uint64_t first_shots = 0;
  std::uint64_t phase_shots = 0;
  std::uint64_t second_shots = 0;
  std::vector<TraceEntry> trace;
};

AdaptiveResult run_two_step_adaptive(
    const SinOracle& oracle, double p_true, const AdaptiveConfig& config,
    const std::optional<std::pair<Ansatz, Ansatz>>& initial = {});

/// Computational-basis MLAE with n_shot shots per schedule entry.
EstimationResult run_comp_mlae(const SinOracle& oracle, double p_true,
                               const GroverSchedule& schedule, std::uint64_t n_shot,
                               const ParamGrid& grid, std::uint64_t seed);

struct FourParamConfig {
  std::uint64_t shots_per_mk = 100000;
  double theta_hat1 = 0.0;
  /// Noise-free data: expected counts instead of samples (synthetic mode).
  bool expected_counts = false;
  /// Sample through injected imperfect C_0/C_1 instead of the biased model.
  bool injected = false;
  std::optional<ParamGrid> grid;
  std::uint64_t seed = 0;
};

/// Optimal-basis data at (theta_true, p, pc0, pc1) fitted with the biased
/// four-parameter likelihood.
EstimationResult run_four_param(const SinOracle& oracle, double p_true, double pc0_true,
                                double pc1_true, const GroverSchedule& schedule,
                                const FourParamConfig& config);

/// Optimal-basis records for run_four_param, exposed for inspection.
std::vector<CountRecord> four_param_records(const SinOracle& oracle, double p_true,
                                            double pc0_true, double pc1_true,
                                            const GroverSchedule& schedule,
                                            const FourParamConfig& config);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double phi);
/// Signed difference a - b wrapped into [-pi, pi).
double angle_diff(double a, double b);

}  // namespace qae
