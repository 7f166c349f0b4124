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

#include "qae/vqc.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "qae/errors.hpp"

namespace qae {

Ansatz Ansatz::zeros(int n, int layers, bool use_rz) {
  Ansatz a;
  a.n = n;
  a.layers = layers;
  a.use_rz = use_rz;
  a.params.assign(a.param_count(), 0.0);
  a.validate();
  return a;
}

Ansatz Ansatz::random(int n, int layers, bool use_rz, Rng& rng) {
  Ansatz a = zeros(n, layers, use_rz);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (double& v : a.params) v = angle(rng);
  return a;
}

std::size_t Ansatz::param_count() const {
  if (n < 1 || layers < 1) return 0;
  return static_cast<std::size_t>(layers) * n * (use_rz ? 2 : 1);
}

std::size_t Ansatz::param_index(int layer, int qubit, bool rz) const {
  if (layer < 0 || layer >= layers || qubit < 0 || qubit >= n || (rz && !use_rz)) {
    throw IndexError("Ansatz::param_index: no such rotation");
  }
  return (static_cast<std::size_t>(layer) * n + qubit) * (use_rz ? 2 : 1) + (rz ? 1 : 0);
}

void Ansatz::validate() const {
  if (n < 1 || n >= kMaxQubits) throw SizeError("Ansatz: n out of range");
  if (layers < 1) throw SizeError("Ansatz: need at least one layer");
  if (params.size() != param_count()) {
    throw SizeError("Ansatz: expected " + std::to_string(param_count()) + " parameters, got " +
                    std::to_string(params.size()));
  }
}

void Ansatz::apply(PureState& state) const {
  if (state.num_qubits() < n) throw SizeError("Ansatz::apply: state too small");
  const std::size_t stride = use_rz ? 2 : 1;
  std::size_t idx = 0;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n; ++q) {
      state.ry(q, params[idx]);
      if (use_rz) state.rz(q, params[idx + 1]);
      idx += stride;
    }
    for (int q = 0; q + 1 < n; ++q) state.cx(q, q + 1);
  }
}

RegisterCircuit Ansatz::circuit() const {
  return [a = *this](PureState& s) { a.apply(s); };
}

void apply_bprime(PureState& state, const RegisterCircuit& c0, const RegisterCircuit& c1) {
  const int nq = state.num_qubits();
  if (nq < 2) throw SizeError("apply_bprime: need a register and an ancilla");
  std::vector<int> targets(nq - 1);
  std::iota(targets.begin(), targets.end(), 0);
  apply_controlled_unitary(state, nq - 1, 0, c0, targets);
  apply_controlled_unitary(state, nq - 1, 1, c1, targets);
}

PureState apply_bprime(PureState state, const Ansatz& a0, const Ansatz& a1) {
  a0.validate();
  a1.validate();
  if (a0.n != state.num_qubits() - 1 || a1.n != state.num_qubits() - 1) {
    throw SizeError("apply_bprime: ansatz width does not match the register");
  }
  apply_bprime(state, a0.circuit(), a1.circuit());
  return state;
}

double cost_local(const PureState& state) {
  const int n = state.num_qubits() - 1;
  if (n < 1) throw SizeError("cost_local: need a register and an ancilla");
  std::vector<double> zero(n, 0.0);
  const auto amps = state.amplitudes();
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double w = std::norm(amps[i]);
    total += w;
    for (int j = 0; j < n; ++j) {
      if (!((i >> j) & 1U)) zero[j] += w;
    }
  }
  double acc = 0.0;
  for (double z : zero) acc += z / total;
  return std::clamp(1.0 - acc / n, 0.0, 1.0);
}

double cost_local_counts(std::span<const std::uint64_t> counts, int n) {
  if (n < 1 || counts.size() != (std::size_t{1} << (n + 1))) {
    throw SizeError("cost_local_counts: expected 2^(n+1) outcome counts");
  }
  std::vector<double> zero(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    total += c;
    for (int j = 0; j < n; ++j) {
      if (!((i >> j) & 1U)) zero[j] += c;
    }
  }
  if (total == 0.0) return 0.0;
  double acc = 0.0;
  for (double z : zero) acc += z / total;
  return 1.0 - acc / n;
}

double grad_parameter_shift(const CostFunction& cost_at, std::span<const double> params,
                            std::size_t k, double shift) {
  if (k >= params.size()) throw IndexError("grad_parameter_shift: parameter index out of range");
  std::vector<double> x(params.begin(), params.end());
  x[k] = params[k] + shift;
  const double plus = cost_at(x);
  x[k] = params[k] - shift;
  const double minus = cost_at(x);
  return 0.5 * (plus - minus);
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw DomainError("TrainConfig: learning_rate must be > 0");
  if (n_max_itr < 1) throw DomainError("TrainConfig: n_max_itr must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("TrainConfig: p must be in (0, 1]");
}

namespace {

double schedule_cost(const SinOracle& oracle, const GroverSchedule& schedule, const Ansatz& a0,
                     const Ansatz& a1) {
  double total = 0.0;
  for (int m : schedule.m_list) {
    total += cost_local(apply_bprime(prepare_grover_state(oracle, m), a0, a1));
  }
  return total;
}

}  // namespace

TrainResult train(const SinOracle& oracle, const GroverSchedule& schedule, Ansatz ansatz0,
                  Ansatz ansatz1, const TrainConfig& config) {
  config.validate();
  ansatz0.validate();
  ansatz1.validate();
  if (ansatz0.n != oracle.n || ansatz1.n != oracle.n) {
    throw SizeError("train: ansatz width does not match the oracle register");
  }
  const bool exact = config.shots_per_evaluation == 0;
  const int n = oracle.n;
  Rng rng(config.seed);

  TrainResult out;
  for (int m : schedule.m_list) {
    const PureState base = prepare_grover_state(oracle, m);
    const double q = std::pow(config.p, m);

    auto evaluate = [&](const Ansatz& x0, const Ansatz& x1) {
      const PureState s = apply_bprime(base, x0, x1);
      if (exact) return q * cost_local(s) + 0.5 * (1.0 - q);
      const auto counts = sample_depolarized(s, q, config.shots_per_evaluation, rng);
      out.gradient_shots += config.shots_per_evaluation;
      return cost_local_counts(counts, n);
    };

    double h0 = 0.0;
    double h1 = 0.0;
    const std::uint64_t per_itr = config.measure_shots_per_mk / config.n_max_itr;
    const std::uint64_t extra = config.measure_shots_per_mk % config.n_max_itr;
    for (int it = 0; it < config.n_max_itr; ++it) {
      const std::uint64_t shots = per_itr + (static_cast<std::uint64_t>(it) < extra ? 1 : 0);
      double cost = 0.0;
      const PureState s = apply_bprime(base, ansatz0, ansatz1);
      if (shots > 0) {
        const auto counts = sample_depolarized(s, q, shots, rng);
        const auto [z, o] = ancilla_counts(counts, n);
        h0 += static_cast<double>(z);
        h1 += static_cast<double>(o);
        out.measure_shots += shots;
        cost = exact ? q * cost_local(s) + 0.5 * (1.0 - q) : cost_local_counts(counts, n);
      } else {
        cost = evaluate(ansatz0, ansatz1);
      }
      out.trace.push_back({m, it, cost});

      std::vector<double> g0(ansatz0.params.size());
      std::vector<double> g1(ansatz1.params.size());
      Ansatz probe0 = ansatz0;
      Ansatz probe1 = ansatz1;
      auto cost0 = [&](std::span<const double> x) {
        probe0.params.assign(x.begin(), x.end());
        return evaluate(probe0, ansatz1);
      };
      auto cost1 = [&](std::span<const double> x) {
        probe1.params.assign(x.begin(), x.end());
        return evaluate(ansatz0, probe1);
      };
      for (std::size_t k = 0; k < g0.size(); ++k) {
        g0[k] = grad_parameter_shift(cost0, ansatz0.params, k);
      }
      for (std::size_t k = 0; k < g1.size(); ++k) {
        g1[k] = grad_parameter_shift(cost1, ansatz1.params, k);
      }
      for (std::size_t k = 0; k < g0.size(); ++k) ansatz0.params[k] -= config.learning_rate * g0[k];
      for (std::size_t k = 0; k < g1.size(); ++k) ansatz1.params[k] -= config.learning_rate * g1[k];
    }
    CountRecord rec;
    rec.m = m;
    rec.kind = OutcomeKind::kComputational;
    rec.counts = {h0, h1};
    out.ancilla_records.push_back(std::move(rec));
  }
  out.final_cost = schedule_cost(oracle, schedule, ansatz0, ansatz1);
  out.ansatz0 = std::move(ansatz0);
  out.ansatz1 = std::move(ansatz1);
  return out;
}

TrainResult train_with_restarts(const SinOracle& oracle, const GroverSchedule& schedule,
                                int layers, bool use_rz, const TrainConfig& config,
                                int restarts) {
  if (restarts < 1) throw DomainError("train_with_restarts: restarts must be >= 1");
  TrainResult best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    Rng init(derive_seed(config.seed, {static_cast<std::uint64_t>(r), 0}));
    Ansatz a0 = Ansatz::random(oracle.n, layers, use_rz, init);
    Ansatz a1 = Ansatz::random(oracle.n, layers, use_rz, init);
    TrainConfig cfg = config;
    cfg.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(r), 1});
    TrainResult res = train(oracle, schedule, std::move(a0), std::move(a1), cfg);
    if (!have || res.final_cost < best.final_cost) {
      best = std::move(res);
      have = true;
    }
  }
  return best;
}

PureState branch_state(const SinOracle& oracle, int branch) {
  PureState s = PureState::zero(oracle.num_qubits());
  apply_a(s, oracle);
  return conditional_substate(s, branch);
}

Fidelities fidelity_diagnostics(const RegisterCircuit& c0, const RegisterCircuit& c1,
                                const SinOracle& oracle) {
  PureState psi0 = branch_state(oracle, 0);
  PureState psi1 = branch_state(oracle, 1);
  c0(psi0);
  c1(psi1);
  return {psi0[0], psi1[0]};
}

Fidelities fidelity_diagnostics(const Ansatz& a0, const Ansatz& a1, const SinOracle& oracle) {
  a0.validate();
  a1.validate();
  if (a0.n != oracle.n || a1.n != oracle.n) {
    throw SizeError("fidelity_diagnostics: ansatz width does not match the oracle register");
  }
  return fidelity_diagnostics(a0.circuit(), a1.circuit(), oracle);
}

Eigen::MatrixXcd householder_to_zero(std::span<const Complex> psi) {
  const auto d = static_cast<Eigen::Index>(psi.size());
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = psi[i];
  const double norm = v.norm();
  if (!(norm > 0.0)) throw DomainError("householder_to_zero: zero vector");
  v /= norm;
  Complex phase = 1.0;
  if (std::abs(v(0)) > 1e-15) phase = v(0) / std::abs(v(0));
  Eigen::VectorXcd w = v;
  w(0) -= phase;
  const double ww = w.squaredNorm();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(d, d);
  if (ww < 1e-28) return out;
  out -= (2.0 / ww) * w * w.adjoint();
  return out;
}

namespace {

RegisterCircuit matrix_circuit(Eigen::MatrixXcd u, int n) {
  std::vector<int> targets(n);
  std::iota(targets.begin(), targets.end(), 0);
  return [u = std::move(u), targets](PureState& s) { s.apply_unitary(targets, u); };
}

}  // namespace

RegisterCircuit exact_register_circuit(const SinOracle& oracle, int branch) {
  const PureState psi = branch_state(oracle, branch);
  return matrix_circuit(householder_to_zero(psi.amplitudes()), oracle.n);
}

RegisterCircuit injected_register_circuit(const SinOracle& oracle, int branch, double pc,
                                          double phase, std::size_t leak_index) {
  if (!(pc >= 0.0 && pc <= 1.0)) throw DomainError("injected_register_circuit: pc not in [0, 1]");
  const std::size_t dim = std::size_t{1} << oracle.n;
  if (leak_index == 0 || leak_index >= dim) {
    throw IndexError("injected_register_circuit: leak_index out of range");
  }
  const PureState psi = branch_state(oracle, branch);
  Eigen::MatrixXcd h = householder_to_zero(psi.amplitudes());
  const auto d = static_cast<Eigen::Index>(dim);
  const auto j = static_cast<Eigen::Index>(leak_index);
  const double s = std::sqrt(1.0 - pc * pc);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(d, d);
  r(0, 0) = pc;
  r(j, 0) = s;
  r(0, j) = -s;
  r(j, j) = pc;
  return matrix_circuit(std::polar(1.0, phase) * r * h, oracle.n);
}

std::vector<VarianceRow> gradient_variance_experiment(std::span<const int> n_list,
                                                      std::span<const int> nl_list,
                                                      int n_sample, std::uint64_t seed,
                                                      double b_max, const StateCost& cost) {
  if (n_sample < 1) throw DomainError("gradient_variance_experiment: n_sample must be >= 1");
  const StateCost& cost_fn = cost ? cost : StateCost(cost_local);
  std::vector<VarianceRow> rows;
  for (int n : n_list) {
    const SinOracle oracle = build_a_sin(n, b_max);
    PureState base = PureState::zero(oracle.num_qubits());
    apply_a(base, oracle);
    for (int layers : nl_list) {
      const std::uint64_t row_seed =
          derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(layers)});
      Rng rng(row_seed);
      std::vector<double> grads;
      grads.reserve(n_sample);
      for (int s = 0; s < n_sample; ++s) {
        Ansatz a0 = Ansatz::random(n, layers, false, rng);
        const Ansatz a1 = Ansatz::random(n, layers, false, rng);
        const std::size_t k = a0.param_index(layers / 2, 0);
        Ansatz probe = a0;
        auto cost_at = [&](std::span<const double> x) {
          probe.params.assign(x.begin(), x.end());
          return cost_fn(apply_bprime(base, probe, a1));
        };
        grads.push_back(grad_parameter_shift(cost_at, a0.params, k));
      }
      const double mean = std::accumulate(grads.begin(), grads.end(), 0.0) / n_sample;
      double var = 0.0;
      for (double g : grads) var += (g - mean) * (g - mean);
      var = n_sample > 1 ? var / (n_sample - 1) : 0.0;
      rows.push_back({n, layers, var, row_seed});
    }
  }
  return rows;
}

}  // namespace qae
