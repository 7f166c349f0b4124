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

// Variational register circuits C_0, C_1 and their training.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qae/estimator.hpp"
#include "qae/oracle.hpp"
#include "qae/rng.hpp"
#include "qae/statevector.hpp"

namespace qae {

/// Hardware-efficient layered ansatz on register qubits 0..n-1. Each layer
/// applies Ry (then Rz when use_rz) to every qubit, followed by CX(q, q+1)
/// for q = 0..n-2. params[(layer * n + qubit) * k + r] with k = 1 or 2 and
/// r = 0 for Ry, 1 for Rz.
struct Ansatz {
  int n = 1;
  int layers = 1;
  bool use_rz = false;
  std::vector<double> params;

  static Ansatz zeros(int n, int layers, bool use_rz = false);
  /// Every parameter uniform in [0, 2 pi).
  static Ansatz random(int n, int layers, bool use_rz, Rng& rng);

  std::size_t param_count() const;
  std::size_t param_index(int layer, int qubit, bool rz = false) const;
  /// SizeError unless n >= 1, layers >= 1 and params has param_count() entries.
  void validate() const;

  /// Acts on qubits 0..n-1 of `state`.
  void apply(PureState& state) const;
  RegisterCircuit circuit() const;
};

/// B' = |0><0| (x) C_0 + |1><1| (x) C_1, controlled on the highest qubit.
void apply_bprime(PureState& state, const RegisterCircuit& c0, const RegisterCircuit& c1);
/// Copying overload for ansatz pairs. SizeError if either ansatz does not
/// span the register.
PureState apply_bprime(PureState state, const Ansatz& a0, const Ansatz& a1);

/// 1 - (1/n) sum_j Pr(register qubit j = 0), ancilla ignored.
double cost_local(const PureState& state);
/// The same quantity estimated from computational-basis counts over n + 1
/// qubits. Returns 0 for an empty tally.
double cost_local_counts(std::span<const std::uint64_t> counts, int n);

using CostFunction = std::function<double(std::span<const double>)>;

/// [cost(a_k + shift) - cost(a_k - shift)] / 2.
double grad_parameter_shift(const CostFunction& cost_at, std::span<const double> params,
                            std::size_t k, double shift = 1.5707963267948966);

struct TrainConfig {
  double learning_rate = 0.1;
  int n_max_itr = 100;  ///< iterations per schedule entry
  /// Shots per cost evaluation; 0 selects exact statevector costs.
  std::uint64_t shots_per_evaluation = 0;
  /// Ancilla-measurement shots per schedule entry, spread over iterations.
  std::uint64_t measure_shots_per_mk = 0;
  double p = 1.0;
  std::uint64_t seed = 0;

  /// DomainError unless learning_rate > 0, n_max_itr >= 1 and 0 < p <= 1.
  void validate() const;
};

struct TraceEntry {
  int m = 0;
  int iteration = 0;
  double cost = 0.0;
};

struct TrainResult {
  Ansatz ansatz0;
  Ansatz ansatz1;
  std::vector<TraceEntry> trace;
  /// One computational record per schedule entry from the measurement shots.
  std::vector<CountRecord> ancilla_records;
  std::uint64_t measure_shots = 0;
  std::uint64_t gradient_shots = 0;
  /// Sum over the schedule of the noiseless exact cost at the final params.
  double final_cost = 0.0;
};

/// Plain gradient descent, schedule entry by schedule entry: per iteration
/// measure, evaluate the cost, take parameter-shift gradients, update.
TrainResult train(const SinOracle& oracle, const GroverSchedule& schedule, Ansatz ansatz0,
                  Ansatz ansatz1, const TrainConfig& config);

/// `restarts` seeded random initializations; keeps the lowest final_cost
/// (first wins on ties).
TrainResult train_with_restarts(const SinOracle& oracle, const GroverSchedule& schedule,
                                int layers, bool use_rz, const TrainConfig& config,
                                int restarts = 5);

struct Fidelities {
  Complex pc0;
  Complex pc1;
};

/// pc_b = <0| C_b |psi_b>.
Fidelities fidelity_diagnostics(const RegisterCircuit& c0, const RegisterCircuit& c1,
                                const SinOracle& oracle);
Fidelities fidelity_diagnostics(const Ansatz& a0, const Ansatz& a1, const SinOracle& oracle);

/// Register state |psi_b> of A|0> (ancilla branch b), n qubits.
PureState branch_state(const SinOracle& oracle, int branch);

/// Householder reflection mapping psi to e^{i arg psi_0} |0>.
Eigen::MatrixXcd householder_to_zero(std::span<const Complex> psi);

/// Exact C_b built from the oracle's branch state.
RegisterCircuit exact_register_circuit(const SinOracle& oracle, int branch);

/// Imperfect C_b: the exact reflection followed by a real rotation in the
/// (|0>, |leak_index>) plane with <0|C_b|psi_b> = pc, then a global phase
/// e^{i phase} on the whole register.
RegisterCircuit injected_register_circuit(const SinOracle& oracle, int branch, double pc,
                                          double phase = 0.0, std::size_t leak_index = 1);

struct VarianceRow {
  int n = 0;
  int layers = 0;
  double grad_variance = 0.0;
  std::uint64_t seed = 0;
};

/// Evaluated on the B' output state for schedule {0}; replaces cost_local.
using StateCost = std::function<double(const PureState&)>;

/// Sample variance of the parameter-shift derivative with respect to the
/// first Ry of layer layers/2 on qubit 0 of C_0, over n_sample uniform
/// parameter draws for (C_0, C_1).
std::vector<VarianceRow> gradient_variance_experiment(std::span<const int> n_list,
                                                      std::span<const int> nl_list,
                                                      int n_sample, std::uint64_t seed,
                                                      double b_max = 0.25,
                                                      const StateCost& cost = {});

}  // namespace qae
