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
#include <utility>
#include <vector>

#include "qae/rng.hpp"
#include "qae/statevector.hpp"

namespace qae {

/// The sine-sum amplitude oracle on n register qubits plus one ancilla.
///
/// A|0> = (1/sqrt(2^n)) sum_x |x> (cos(a_x)|0> + sin(a_x)|1>) with
/// a_x = (x + 1/2) b_max / 2^n, so Pr(ancilla = 1) = S.
struct SinOracle {
  int n = 0;
  double b_max = 0.0;
  double S = 0.0;
  double theta_true = 0.0;  ///< arcsin(sqrt(S)), in [0, pi/2]

  int num_qubits() const { return n + 1; }
  int ancilla() const { return n; }
};

/// Sequence of Grover powers m_k.
struct GroverSchedule {
  std::vector<int> m_list;

  /// {0, 1, 2, 4, ..., 2^(M-1)}; M + 1 entries. M = 0 gives {0}.
  static GroverSchedule eis(int M);

  int M() const { return static_cast<int>(m_list.size()) - 1; }
  /// N_A = sum_k (2 m_k + 1).
  long long n_a() const;
  /// sum_k (2 m_k + 1)^2.
  double sum_nq_squared() const;
  int max_nq() const;
};

inline int grover_nq(int m) { return 2 * m + 1; }

/// Parametrization of the depolarized state after m Grover applications.
struct NoisyStateModel {
  double theta = 0.0;
  double p = 1.0;
  int m = 0;
  int n = 1;

  int d() const { return 1 << (n + 1); }
  int nq() const { return grover_nq(m); }
  /// p^m, the surviving pure-state weight.
  double q() const;
  /// Throws DomainError unless 0 < p <= 1, m >= 0 and 1 <= n <= 15.
  void validate() const;
};

/// Builds the oracle and its closed-form S and theta. Requires n >= 1 and
/// b_max > 0.
SinOracle build_a_sin(int n, double b_max);

/// Closed-form amplitude target of the oracle, length 2^(n+1).
std::vector<double> a_sin_amplitudes(const SinOracle& oracle);

void apply_a(PureState& state, const SinOracle& oracle);
void apply_a_dagger(PureState& state, const SinOracle& oracle);

/// G = A S_0 A^dagger S_f applied `times` times.
void apply_grover(PureState& state, const SinOracle& oracle, int times);

/// G^m A |0>.
PureState prepare_grover_state(const SinOracle& oracle, int m);

/// Normalized n-qubit register state on the branch ancilla = value.
/// Throws DegenerateBranchError if that branch has probability <= 1e-12.
PureState conditional_substate(const PureState& state, int ancilla_value);

/// (Pr(ancilla=0), Pr(ancilla=1)) for the depolarized state.
std::pair<double, double> noisy_comp_probs(const NoisyStateModel& model);

/// Full computational-basis outcome distribution of
///   p^m * basis(G^m A|0>) + (1 - p^m) I/d,
/// where `basis` is an optional change of basis applied before measurement.
std::vector<double> noisy_outcome_distribution(const SinOracle& oracle, double p, int m,
                                               const RegisterCircuit& basis = {});

/// Draws `shots` outcomes from q |state><state| + (1 - q) I/d: the pure
/// branch count is binomial, then each branch is multinomial.
std::vector<std::uint64_t> sample_depolarized(const PureState& state, double q,
                                              std::uint64_t shots, Rng& rng);

/// Per-shot branch sampling: with probability p^m a shot is drawn from the
/// pure state (after `basis`), otherwise uniformly over all d outcomes.
/// Returns counts over the d computational outcomes.
std::vector<std::uint64_t> sample_noisy_outcomes(const SinOracle& oracle, double p, int m,
                                                 std::uint64_t shots, std::uint64_t seed,
                                                 const RegisterCircuit& basis = {});

/// Sums outcome counts by the value of the ancilla (highest) qubit.
std::pair<std::uint64_t, std::uint64_t> ancilla_counts(std::span<const std::uint64_t> counts,
                                                       int n);

}  // namespace qae
