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

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qae {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 16;

/// Dense pure state over `num_qubits` qubits.
///
/// Basis index bit k holds qubit k. When a state represents an amplitude
/// estimation register, the ancilla is the highest-index qubit.
class PureState {
 public:
  /// |0...0> on `num_qubits` qubits. Throws SizeError outside [1, 16].
  static PureState zero(int num_qubits);

  /// Wraps an explicit amplitude vector. Its length must be a power of two;
  /// the vector is not renormalized.
  static PureState from_amplitudes(std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  int ancilla() const { return num_qubits_ - 1; }

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm_squared() const;

  /// |amplitude|^2 for every basis index.
  std::vector<double> probabilities() const;

  // Gates act in place and return *this for chaining.
  PureState& ry(int target, double angle);
  PureState& rz(int target, double angle);
  PureState& h(int target);
  PureState& x(int target);
  PureState& cx(int control, int target);
  /// Ry on `target` applied only where `control` is 1.
  PureState& cry(int control, int target, double angle);
  /// Arbitrary single-qubit 2x2 matrix.
  PureState& apply_1q(int target, const Eigen::Matrix2cd& gate);
  /// Dense unitary on `targets` (targets[0] is the least significant bit of
  /// the matrix index).
  PureState& apply_unitary(std::span<const int> targets, const Eigen::MatrixXcd& unitary);

 private:
  PureState(int num_qubits, std::vector<Complex> amplitudes);
  void check_qubit(int q) const;

  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// A circuit acting on a whole register-sized PureState.
using RegisterCircuit = std::function<void(PureState&)>;

/// Operation-style aliases for the state methods.
PureState init_zero(int num_qubits);
void apply_ry(PureState& state, int target, double angle);
void apply_rz(PureState& state, int target, double angle);
void apply_cx(PureState& state, int control, int target);

/// Applies `subcircuit` to the qubits `targets` (in that order) on the
/// subspace where `control` equals `control_value`. Targets must not contain
/// the control. Other qubits act as spectators.
void apply_controlled_unitary(PureState& state, int control, int control_value,
                              const RegisterCircuit& subcircuit, std::span<const int> targets);

/// Probability that `qubit` reads `value`.
double marginal_probability(const PureState& state, int qubit, int value);

/// Per-shot sampling over the computational basis of `state`.
std::vector<std::uint64_t> sample_state(const PureState& state, std::uint64_t shots,
                                        std::uint64_t seed);

/// |<a|b>|, the modulus of the overlap.
double overlap_abs(const PureState& a, const PureState& b);

/// <a|b>.
Complex inner_product(const PureState& a, const PureState& b);

}  // namespace qae
