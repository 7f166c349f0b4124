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

#include "qae/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qae/errors.hpp"
#include "qae/rng.hpp"

namespace qae {

PureState::PureState(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

PureState PureState::zero(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw SizeError("PureState: num_qubits must be in [1, 16], got " + std::to_string(num_qubits));
  }
  std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amps[0] = 1.0;
  return PureState(num_qubits, std::move(amps));
}

PureState PureState::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t len = amplitudes.size();
  if (len < 2 || !std::has_single_bit(len)) {
    throw SizeError("PureState: amplitude count must be a power of two >= 2");
  }
  const int nq = std::countr_zero(len);
  if (nq > kMaxQubits) {
    throw SizeError("PureState: more than 16 qubits");
  }
  return PureState(nq, std::move(amplitudes));
}

void PureState::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_) {
    throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(num_qubits_) + " qubits");
  }
}

double PureState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) {
    s += std::norm(a);
  }
  return s;
}

std::vector<double> PureState::probabilities() const {
  std::vector<double> out(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), out.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return out;
}

PureState& PureState::apply_1q(int target, const Eigen::Matrix2cd& gate) {
  check_qubit(target);
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t n = amplitudes_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amplitudes_[i];
      const Complex a1 = amplitudes_[i + stride];
      amplitudes_[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
      amplitudes_[i + stride] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
  }
  return *this;
}

PureState& PureState::ry(int target, double angle) {
  check_qubit(target);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t n = amplitudes_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a0 = amplitudes_[i];
      const Complex a1 = amplitudes_[i + stride];
      amplitudes_[i] = c * a0 - s * a1;
      amplitudes_[i + stride] = s * a0 + c * a1;
    }
  }
  return *this;
}

PureState& PureState::rz(int target, double angle) {
  check_qubit(target);
  const Complex phase0 = std::polar(1.0, -angle / 2.0);
  const Complex phase1 = std::polar(1.0, angle / 2.0);
  const std::size_t bit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    amplitudes_[i] *= (i & bit) ? phase1 : phase0;
  }
  return *this;
}

PureState& PureState::h(int target) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd g;
  g << r, r, r, -r;
  return apply_1q(target, g);
}

PureState& PureState::x(int target) {
  check_qubit(target);
  const std::size_t stride = std::size_t{1} << target;
  for (std::size_t base = 0; base < amplitudes_.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      std::swap(amplitudes_[i], amplitudes_[i + stride]);
    }
  }
  return *this;
}

PureState& PureState::cx(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw IndexError("cx: control and target must differ");
  }
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) {
      std::swap(amplitudes_[i], amplitudes_[i | tbit]);
    }
  }
  return *this;
}

PureState& PureState::cry(int control, int target, double angle) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw IndexError("cry: control and target must differ");
  }
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) {
      const Complex a0 = amplitudes_[i];
      const Complex a1 = amplitudes_[i | tbit];
      amplitudes_[i] = c * a0 - s * a1;
      amplitudes_[i | tbit] = s * a0 + c * a1;
    }
  }
  return *this;
}

PureState& PureState::apply_unitary(std::span<const int> targets, const Eigen::MatrixXcd& unitary) {
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  if (static_cast<std::size_t>(unitary.rows()) != sub ||
      static_cast<std::size_t>(unitary.cols()) != sub) {
    throw SizeError("apply_unitary: matrix size does not match target count");
  }
  std::size_t target_mask = 0;
  for (int t : targets) {
    check_qubit(t);
    const std::size_t b = std::size_t{1} << t;
    if (target_mask & b) {
      throw IndexError("apply_unitary: repeated target");
    }
    target_mask |= b;
  }

  std::vector<std::size_t> offsets(sub, 0);
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << t)) {
        offsets[j] |= std::size_t{1} << targets[t];
      }
    }
  }
  Eigen::VectorXcd in(sub);
  Eigen::VectorXcd out(sub);
  for (std::size_t base = 0; base < amplitudes_.size(); ++base) {
    if (base & target_mask) {
      continue;
    }
    for (std::size_t j = 0; j < sub; ++j) {
      in(j) = amplitudes_[base | offsets[j]];
    }
    out.noalias() = unitary * in;
    for (std::size_t j = 0; j < sub; ++j) {
      amplitudes_[base | offsets[j]] = out(j);
    }
  }
  return *this;
}

PureState init_zero(int num_qubits) { return PureState::zero(num_qubits); }

void apply_ry(PureState& state, int target, double angle) { state.ry(target, angle); }

void apply_rz(PureState& state, int target, double angle) { state.rz(target, angle); }

void apply_cx(PureState& state, int control, int target) { state.cx(control, target); }

void apply_controlled_unitary(PureState& state, int control, int control_value,
                              const RegisterCircuit& subcircuit, std::span<const int> targets) {
  const int nq = state.num_qubits();
  if (control < 0 || control >= nq) {
    throw IndexError("apply_controlled_unitary: control out of range");
  }
  if (control_value != 0 && control_value != 1) {
    throw DomainError("apply_controlled_unitary: control_value must be 0 or 1");
  }
  if (targets.empty()) {
    throw IndexError("apply_controlled_unitary: no targets");
  }
  std::size_t target_mask = 0;
  for (int t : targets) {
    if (t < 0 || t >= nq) {
      throw IndexError("apply_controlled_unitary: target out of range");
    }
    if (t == control) {
      throw IndexError("apply_controlled_unitary: targets overlap the control");
    }
    const std::size_t b = std::size_t{1} << t;
    if (target_mask & b) {
      throw IndexError("apply_controlled_unitary: repeated target");
    }
    target_mask |= b;
  }

  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  std::vector<std::size_t> offsets(sub, 0);
  for (std::size_t j = 0; j < sub; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << t)) {
        offsets[j] |= std::size_t{1} << targets[t];
      }
    }
  }
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t want = control_value ? cbit : 0;

  // Subcircuits are linear, so each spectator configuration can be pushed
  // through independently without renormalizing.
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if ((base & target_mask) || (base & cbit) != want) {
      continue;
    }
    std::vector<Complex> slice(sub);
    bool nonzero = false;
    for (std::size_t j = 0; j < sub; ++j) {
      slice[j] = state[base | offsets[j]];
      nonzero = nonzero || slice[j] != Complex{0.0, 0.0};
    }
    if (!nonzero) {
      continue;
    }
    PureState local = PureState::from_amplitudes(std::move(slice));
    subcircuit(local);
    if (local.dim() != sub) {
      throw SizeError("apply_controlled_unitary: subcircuit changed the register size");
    }
    for (std::size_t j = 0; j < sub; ++j) {
      state[base | offsets[j]] = local[j];
    }
  }
}

double marginal_probability(const PureState& state, int qubit, int value) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw IndexError("marginal_probability: qubit out of range");
  }
  const std::size_t bit = std::size_t{1} << qubit;
  double s = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (((i & bit) != 0) == (value != 0)) {
      s += std::norm(state[i]);
    }
  }
  return s;
}

std::vector<std::uint64_t> sample_state(const PureState& state, std::uint64_t shots,
                                        std::uint64_t seed) {
  auto probs = state.probabilities();
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return sample_counts(probs, shots, seed);
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) {
    throw SizeError("inner_product: dimension mismatch");
  }
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    s += std::conj(a[i]) * b[i];
  }
  return s;
}

double overlap_abs(const PureState& a, const PureState& b) { return std::abs(inner_product(a, b)); }

}  // namespace qae
