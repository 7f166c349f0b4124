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

#include "qae/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qae/errors.hpp"
#include "qae/rng.hpp"

namespace qae {

GroverSchedule GroverSchedule::eis(int M) {
  if (M < 0 || M > 20) {
    throw DomainError("GroverSchedule::eis: M must be in [0, 20]");
  }
  GroverSchedule s;
  s.m_list.push_back(0);
  for (int k = 0; k < M; ++k) {
    s.m_list.push_back(1 << k);
  }
  return s;
}

long long GroverSchedule::n_a() const {
  long long total = 0;
  for (int m : m_list) total += grover_nq(m);
  return total;
}

double GroverSchedule::sum_nq_squared() const {
  double total = 0.0;
  for (int m : m_list) {
    const double nq = grover_nq(m);
    total += nq * nq;
  }
  return total;
}

int GroverSchedule::max_nq() const {
  int best = 1;
  for (int m : m_list) best = std::max(best, grover_nq(m));
  return best;
}

double NoisyStateModel::q() const { return std::pow(p, m); }

void NoisyStateModel::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError("NoisyStateModel: p must lie in (0, 1], got " + std::to_string(p));
  }
  if (m < 0) {
    throw DomainError("NoisyStateModel: m must be non-negative");
  }
  if (n < 1 || n > kMaxQubits - 1) {
    throw DomainError("NoisyStateModel: n must lie in [1, 15]");
  }
}

SinOracle build_a_sin(int n, double b_max) {
  if (n < 1 || n > kMaxQubits - 1) {
    throw SizeError("build_a_sin: n must lie in [1, 15]");
  }
  if (!(b_max > 0.0)) {
    throw DomainError("build_a_sin: b_max must be positive");
  }
  SinOracle o;
  o.n = n;
  o.b_max = b_max;
  const double size = std::ldexp(1.0, n);
  double s = 0.0;
  for (long long x = 0; x < (1LL << n); ++x) {
    const double a = (static_cast<double>(x) + 0.5) * b_max / size;
    const double sa = std::sin(a);
    s += sa * sa;
  }
  o.S = s / size;
  o.theta_true = std::asin(std::sqrt(std::clamp(o.S, 0.0, 1.0)));
  return o;
}

std::vector<double> a_sin_amplitudes(const SinOracle& oracle) {
  const std::size_t reg = std::size_t{1} << oracle.n;
  const double size = static_cast<double>(reg);
  const double norm = 1.0 / std::sqrt(size);
  std::vector<double> amps(2 * reg);
  for (std::size_t x = 0; x < reg; ++x) {
    const double a = (static_cast<double>(x) + 0.5) * oracle.b_max / size;
    amps[x] = norm * std::cos(a);
    amps[x + reg] = norm * std::sin(a);
  }
  return amps;
}

namespace {

void check_size(const PureState& state, const SinOracle& oracle) {
  if (state.num_qubits() != oracle.num_qubits()) {
    throw SizeError("oracle expects " + std::to_string(oracle.num_qubits()) +
                    " qubits, state has " + std::to_string(state.num_qubits()));
  }
}

}  // namespace

// Hadamards on the register, then a controlled-Ry ladder onto the ancilla.
// Register bit k contributes angle b_max / 2^(n-1-k); the unconditional
// offset b_max / 2^n supplies the half-integer shift.
void apply_a(PureState& state, const SinOracle& oracle) {
  check_size(state, oracle);
  const int anc = oracle.ancilla();
  for (int k = 0; k < oracle.n; ++k) state.h(k);
  for (int k = 0; k < oracle.n; ++k) {
    state.cry(k, anc, std::ldexp(oracle.b_max, -(oracle.n - 1 - k)));
  }
  state.ry(anc, std::ldexp(oracle.b_max, -oracle.n));
}

void apply_a_dagger(PureState& state, const SinOracle& oracle) {
  check_size(state, oracle);
  const int anc = oracle.ancilla();
  state.ry(anc, -std::ldexp(oracle.b_max, -oracle.n));
  for (int k = oracle.n - 1; k >= 0; --k) {
    state.cry(k, anc, -std::ldexp(oracle.b_max, -(oracle.n - 1 - k)));
  }
  for (int k = oracle.n - 1; k >= 0; --k) state.h(k);
}

void apply_grover(PureState& state, const SinOracle& oracle, int times) {
  check_size(state, oracle);
  if (times < 0) {
    throw DomainError("apply_grover: times must be non-negative");
  }
  const std::size_t anc_bit = std::size_t{1} << oracle.ancilla();
  auto amps = state.amplitudes();
  for (int t = 0; t < times; ++t) {
    // S_f = -I + 2 I_n (x) |0><0|: flips the ancilla-1 branch.
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (i & anc_bit) amps[i] = -amps[i];
    }
    apply_a_dagger(state, oracle);
    // S_0 = -I + 2|0><0|.
    for (std::size_t i = 1; i < amps.size(); ++i) amps[i] = -amps[i];
    apply_a(state, oracle);
  }
}

PureState prepare_grover_state(const SinOracle& oracle, int m) {
  PureState s = PureState::zero(oracle.num_qubits());
  apply_a(s, oracle);
  apply_grover(s, oracle, m);
  return s;
}

PureState conditional_substate(const PureState& state, int ancilla_value) {
  if (state.num_qubits() < 2) {
    throw SizeError("conditional_substate: need a register and an ancilla");
  }
  const std::size_t reg = state.dim() / 2;
  const std::size_t offset = ancilla_value ? reg : 0;
  std::vector<Complex> sub(reg);
  double weight = 0.0;
  for (std::size_t x = 0; x < reg; ++x) {
    sub[x] = state[x + offset];
    weight += std::norm(sub[x]);
  }
  if (weight <= 1e-12) {
    throw DegenerateBranchError("conditional_substate: ancilla branch " +
                                std::to_string(ancilla_value) + " has zero weight");
  }
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& a : sub) a *= scale;
  return PureState::from_amplitudes(std::move(sub));
}

std::pair<double, double> noisy_comp_probs(const NoisyStateModel& model) {
  model.validate();
  const double q = model.q();
  const double c = std::cos(model.nq() * model.theta);
  const double s = std::sin(model.nq() * model.theta);
  const double mixed = (1.0 - q) / 2.0;
  return {q * c * c + mixed, q * s * s + mixed};
}

std::vector<double> noisy_outcome_distribution(const SinOracle& oracle, double p, int m,
                                               const RegisterCircuit& basis) {
  NoisyStateModel{0.0, p, m, oracle.n}.validate();
  PureState s = prepare_grover_state(oracle, m);
  if (basis) basis(s);
  const double q = std::pow(p, m);
  const double uniform = (1.0 - q) / static_cast<double>(s.dim());
  auto probs = s.probabilities();
  for (double& v : probs) v = q * v + uniform;
  return probs;
}

std::vector<std::uint64_t> sample_depolarized(const PureState& state, double q,
                                              std::uint64_t shots, Rng& rng) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("sample_depolarized: pure weight must be in [0, 1]");
  }
  std::uint64_t pure_shots = shots;
  if (q < 1.0) {
    std::binomial_distribution<std::uint64_t> branch(shots, q);
    pure_shots = branch(rng);
  }
  auto pure_probs = state.probabilities();
  double total = 0.0;
  for (double v : pure_probs) total += v;
  for (double& v : pure_probs) v /= total;

  auto counts = sample_counts(pure_probs, pure_shots, rng);
  const std::vector<double> uniform(state.dim(), 1.0 / static_cast<double>(state.dim()));
  const auto mixed = sample_counts(uniform, shots - pure_shots, rng);
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += mixed[i];
  return counts;
}

std::vector<std::uint64_t> sample_noisy_outcomes(const SinOracle& oracle, double p, int m,
                                                 std::uint64_t shots, std::uint64_t seed,
                                                 const RegisterCircuit& basis) {
  NoisyStateModel{0.0, p, m, oracle.n}.validate();
  Rng rng(seed);
  PureState s = prepare_grover_state(oracle, m);
  if (basis) basis(s);
  return sample_depolarized(s, std::pow(p, m), shots, rng);
}

std::pair<std::uint64_t, std::uint64_t> ancilla_counts(std::span<const std::uint64_t> counts,
                                                       int n) {
  const std::size_t reg = std::size_t{1} << n;
  if (counts.size() != 2 * reg) {
    throw SizeError("ancilla_counts: expected 2^(n+1) outcome counts");
  }
  std::uint64_t zero = 0;
  std::uint64_t one = 0;
  for (std::size_t i = 0; i < reg; ++i) zero += counts[i];
  for (std::size_t i = reg; i < 2 * reg; ++i) one += counts[i];
  return {zero, one};
}

}  // namespace qae
