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

#include "qae/adaptive.hpp"

#include <cmath>
#include <numbers>

#include "qae/errors.hpp"
#include "qae/rng.hpp"

namespace qae {

namespace {

constexpr double kPi = std::numbers::pi;

// Seed paths for the pipeline stages.
constexpr std::uint64_t kFirstStepStream = 1;
constexpr std::uint64_t kPhaseStream = 2;
constexpr std::uint64_t kSecondStepStream = 3;
constexpr std::uint64_t kInitStream = 4;

}  // namespace

std::uint64_t first_step_shots(std::uint64_t n_shot) {
  return static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n_shot))));
}

double wrap_angle(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

double angle_diff(double a, double b) { return wrap_angle(a - b + kPi) - kPi; }

ParamGrid AdaptiveConfig::resolved_grid() const {
  return grid ? *grid : default_2param_grid(schedule);
}

void AdaptiveConfig::validate() const {
  if (n_shot < 2) throw ConfigError("N_shot: must be >= 2");
  if (schedule.m_list.empty()) throw ConfigError("schedule: must not be empty");
  for (int m : schedule.m_list) {
    if (m < 0) throw ConfigError("schedule: Grover powers must be >= 0");
  }
  if (n_max_itr < 1) throw ConfigError("N_MaxItr: must be >= 1");
  if (layers < 1) throw ConfigError("N_L: must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("lr: must be > 0");
  if (grid) {
    try {
      grid->validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    if (grid->axes.size() != 2) throw ConfigError("grid: expected (theta, p) axes");
  }
}

FirstStepResult run_first_step(const SinOracle& oracle, double p_true,
                               const AdaptiveConfig& config,
                               const std::optional<std::pair<Ansatz, Ansatz>>& initial) {
  config.validate();
  const std::uint64_t seed = derive_seed(config.seed, {kFirstStepStream});
  const std::uint64_t shots = config.first_shots();
  FirstStepResult out;

  if (config.basis_mode == BasisMode::kExact) {
    for (std::size_t k = 0; k < config.schedule.m_list.size(); ++k) {
      const int m = config.schedule.m_list[k];
      const auto counts = sample_noisy_outcomes(oracle, p_true, m, shots, derive_seed(seed, {k}));
      const auto [h0, h1] = ancilla_counts(counts, oracle.n);
      out.records.push_back(
          CountRecord{m, OutcomeKind::kComputational,
                      {static_cast<double>(h0), static_cast<double>(h1)}});
      out.shots += shots;
    }
    out.circuits.c0 = exact_register_circuit(oracle, 0);
    out.circuits.c1 = exact_register_circuit(oracle, 1);
  } else {
    Ansatz a0;
    Ansatz a1;
    if (initial) {
      a0 = initial->first;
      a1 = initial->second;
    } else {
      Rng init(derive_seed(config.seed, {kInitStream}));
      a0 = Ansatz::random(oracle.n, config.layers, config.use_rz, init);
      a1 = Ansatz::random(oracle.n, config.layers, config.use_rz, init);
    }
    TrainConfig tc;
    tc.learning_rate = config.learning_rate;
    tc.n_max_itr = config.n_max_itr;
    tc.shots_per_evaluation = config.shots_per_evaluation;
    tc.measure_shots_per_mk = shots;
    tc.p = p_true;
    tc.seed = seed;
    TrainResult tr = train(oracle, config.schedule, std::move(a0), std::move(a1), tc);
    out.records = std::move(tr.ancilla_records);
    out.trace = std::move(tr.trace);
    out.shots = tr.measure_shots;
    out.gradient_shots = tr.gradient_shots;
    out.circuits.c0 = tr.ansatz0.circuit();
    out.circuits.c1 = tr.ansatz1.circuit();
    out.circuits.ansatz0 = std::move(tr.ansatz0);
    out.circuits.ansatz1 = std::move(tr.ansatz1);
  }
  out.mle = estimate_comp(out.records, config.resolved_grid());
  return out;
}

std::array<double, 4> phase_probs(double theta, double phi) {
  const double s2 = std::sin(2.0 * theta);
  const double x0 = 0.5 * (1.0 + s2 * std::cos(phi));
  const double y0 = 0.5 * (1.0 + s2 * std::sin(phi));
  return {x0, 1.0 - x0, y0, 1.0 - y0};
}

double loglik_phase(double phi, double theta_hat1, const CountRecord& record) {
  if (record.kind != OutcomeKind::kPhase) throw DomainError("loglik_phase: need a phase record");
  const auto pr = phase_probs(theta_hat1, phi);
  double ll = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (record.counts[i] != 0.0) {
      ll += record.counts[i] * std::log(std::max(pr[i], kProbabilityFloor));
    }
  }
  return ll;
}

PhaseEstimate estimate_phase(const SinOracle& oracle, const RegisterPair& circuits,
                             double theta_hat1, std::uint64_t n_phi_shot, std::uint64_t seed) {
  if (std::abs(std::sin(2.0 * theta_hat1)) < 1e-3) {
    throw PhaseUnidentifiable("estimate_phase: sin(2 theta_hat1) is too small");
  }
  PureState base = PureState::zero(oracle.num_qubits());
  apply_a(base, oracle);
  apply_bprime(base, circuits.c0, circuits.c1);
  const int anc = base.ancilla();

  PureState xs = base;
  xs.h(anc);
  PureState ys = base;
  ys.rz(anc, -kPi / 2.0).h(anc);

  Rng rng(seed);
  const double px = marginal_probability(xs, anc, 0);
  const double py = marginal_probability(ys, anc, 0);
  const std::vector<double> dx{px, 1.0 - px};
  const std::vector<double> dy{py, 1.0 - py};
  const auto cx = sample_counts(dx, n_phi_shot, rng);
  const auto cy = sample_counts(dy, n_phi_shot, rng);

  PhaseEstimate out;
  out.record.m = 0;
  out.record.kind = OutcomeKind::kPhase;
  out.record.counts = {static_cast<double>(cx[0]), static_cast<double>(cx[1]),
                       static_cast<double>(cy[0]), static_cast<double>(cy[1])};
  ParamGrid grid{{GridAxis{"phi", -kPi, kPi, 361, 201}}, 3};
  const auto& rec = out.record;
  const SearchResult sr = mle_search(
      [&rec, theta_hat1](std::span<const double> x) { return loglik_phase(x[0], theta_hat1, rec); },
      grid);
  out.phi_hat = wrap_angle(sr.argmax[0]);
  return out;
}

RegisterCircuit build_b(const TrainedBasis& trained, int nq) {
  return [circuits = trained.circuits, phi = trained.phi_hat, theta = trained.theta_hat1,
          nq](PureState& s) {
    apply_bprime(s, circuits.c0, circuits.c1);
    const int anc = s.ancilla();
    s.rz(anc, -phi);
    s.ry(anc, -2.0 * nq * theta - kPi / 2.0);
  };
}

std::array<std::uint64_t, 3> classify_outcomes(std::span<const std::uint64_t> counts, int n) {
  const std::size_t reg = std::size_t{1} << n;
  if (counts.size() != 2 * reg) throw SizeError("classify_outcomes: expected 2^(n+1) counts");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return {counts[0], counts[reg], total - counts[0] - counts[reg]};
}

SecondStepResult run_second_step(const SinOracle& oracle, double p_true,
                                 const GroverSchedule& schedule, const TrainedBasis& trained,
                                 std::uint64_t shots_per_mk, const ParamGrid& grid,
                                 std::uint64_t seed) {
  SecondStepResult out;
  for (std::size_t k = 0; k < schedule.m_list.size(); ++k) {
    const int m = schedule.m_list[k];
    const auto counts = sample_noisy_outcomes(oracle, p_true, m, shots_per_mk,
                                              derive_seed(seed, {k}),
                                              build_b(trained, grover_nq(m)));
    const auto cls = classify_outcomes(counts, oracle.n);
    out.records.push_back(make_record(m, OutcomeKind::kOptimal, cls));
    out.shots += shots_per_mk;
  }
  out.mle = estimate_opt(out.records, trained.theta_hat1, oracle.n, grid);
  return out;
}

AdaptiveResult run_two_step_adaptive(const SinOracle& oracle, double p_true,
                                     const AdaptiveConfig& config,
                                     const std::optional<std::pair<Ansatz, Ansatz>>& initial) {
  config.validate();
  AdaptiveResult out;
  FirstStepResult first = run_first_step(oracle, p_true, config, initial);
  out.first = first.mle;
  out.first_shots = first.shots;
  out.trace = std::move(first.trace);
  out.fidelities = fidelity_diagnostics(first.circuits.c0, first.circuits.c1, oracle);

  TrainedBasis trained{std::move(first.circuits), 0.0, first.mle.theta_hat};
  try {
    const auto pe = estimate_phase(oracle, trained.circuits, trained.theta_hat1,
                                   config.phi_shots(),
                                   derive_seed(config.seed, {kPhaseStream}));
    trained.phi_hat = pe.phi_hat;
    out.phase_shots = 2 * config.phi_shots();
  } catch (const PhaseUnidentifiable&) {
    out.phase_fallback = true;
  }
  out.phi_hat = trained.phi_hat;

  const SecondStepResult second =
      run_second_step(oracle, p_true, config.schedule, trained, config.second_shots(),
                      config.resolved_grid(), derive_seed(config.seed, {kSecondStepStream}));
  out.final = second.mle;
  out.second_shots = second.shots;
  out.n_query = config.n_shot * static_cast<std::uint64_t>(config.schedule.n_a());
  return out;
}

EstimationResult run_comp_mlae(const SinOracle& oracle, double p_true,
                               const GroverSchedule& schedule, std::uint64_t n_shot,
                               const ParamGrid& grid, std::uint64_t seed) {
  std::vector<CountRecord> records;
  for (std::size_t k = 0; k < schedule.m_list.size(); ++k) {
    const int m = schedule.m_list[k];
    const auto counts = sample_noisy_outcomes(oracle, p_true, m, n_shot, derive_seed(seed, {k}));
    const auto [h0, h1] = ancilla_counts(counts, oracle.n);
    records.push_back(CountRecord{m, OutcomeKind::kComputational,
                                  {static_cast<double>(h0), static_cast<double>(h1)}});
  }
  return estimate_comp(records, grid);
}

std::vector<CountRecord> four_param_records(const SinOracle& oracle, double p_true,
                                            double pc0_true, double pc1_true,
                                            const GroverSchedule& schedule,
                                            const FourParamConfig& config) {
  std::vector<CountRecord> records;
  TrainedBasis trained;
  if (config.injected) {
    trained.circuits.c0 = injected_register_circuit(oracle, 0, pc0_true);
    trained.circuits.c1 = injected_register_circuit(oracle, 1, pc1_true);
    trained.theta_hat1 = config.theta_hat1;
  }
  const double shots = static_cast<double>(config.shots_per_mk);
  for (std::size_t k = 0; k < schedule.m_list.size(); ++k) {
    const int m = schedule.m_list[k];
    const std::uint64_t seed = derive_seed(config.seed, {k});
    std::vector<double> probs;
    if (config.injected) {
      const RegisterCircuit b = build_b(trained, grover_nq(m));
      if (!config.expected_counts) {
        const auto counts =
            sample_noisy_outcomes(oracle, p_true, m, config.shots_per_mk, seed, b);
        records.push_back(make_record(m, OutcomeKind::kOptimal,
                                      classify_outcomes(counts, oracle.n)));
        continue;
      }
      const auto dist = noisy_outcome_distribution(oracle, p_true, m, b);
      const std::size_t reg = std::size_t{1} << oracle.n;
      probs = {dist[0], dist[reg], 1.0 - dist[0] - dist[reg]};
    } else {
      const auto pr = biased_outcome_probs(NoisyStateModel{oracle.theta_true, p_true, m, oracle.n},
                                           config.theta_hat1, pc0_true, pc1_true, 0.0);
      probs.assign(pr.begin(), pr.end());
    }
    if (config.expected_counts) {
      CountRecord rec{m, OutcomeKind::kOptimal, {}};
      for (double v : probs) rec.counts.push_back(shots * std::max(v, 0.0));
      records.push_back(std::move(rec));
    } else {
      double total = 0.0;
      for (double& v : probs) total += (v = std::max(v, 0.0));
      for (double& v : probs) v /= total;
      records.push_back(make_record(m, OutcomeKind::kOptimal,
                                    sample_counts(probs, config.shots_per_mk, seed)));
    }
  }
  return records;
}

EstimationResult run_four_param(const SinOracle& oracle, double p_true, double pc0_true,
                                double pc1_true, const GroverSchedule& schedule,
                                const FourParamConfig& config) {
  const auto records = four_param_records(oracle, p_true, pc0_true, pc1_true, schedule, config);
  const ParamGrid grid = config.grid ? *config.grid : default_4param_grid(schedule);
  return estimate_4param(records, config.theta_hat1, oracle.n, grid);
}

}  // namespace qae
