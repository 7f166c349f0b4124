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

#include "qae/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qae/adaptive.hpp"
#include "qae/errors.hpp"
#include "qae/experiment.hpp"
#include "qae/metrology.hpp"
#include "qae/rng.hpp"
#include "qae/vqc.hpp"

namespace qae {

std::map<std::string, double> default_tolerances() {
  return {{"c1.offdiag_abs", 1e-9}, {"c1.diag_rel", 1e-8},    {"c2.rel", 1e-8},
          {"c3.lower", 0.8},        {"c3.upper", 1.5},        {"c4.qcrb_factor", 1.5},
          {"c4.ccrb_factor", 0.9},  {"c4.min_fidelity", 0.999}, {"c5.min_ratio", 0.25},
          {"c6.slope", -1.0},       {"c6.slope_tol", 0.2},    {"c7.gap", 5e-3},
          {"c8.cells", 2.0},        {"c8.qcrb_factor", 2.0}};
}

void AcceptanceOptions::apply_defaults() {
  for (const auto& [k, v] : default_tolerances()) tolerances.emplace(k, v);
}

AcceptanceOptions parse_acceptance(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("verify config: expected a JSON object");
  AcceptanceOptions o;
  const auto known = default_tolerances();
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("field 'seed': expected a non-negative integer");
      o.seed = v.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError("field 'threads': expected an integer >= 1");
      }
      o.threads = v.get<int>();
    } else if (key == "criteria") {
      if (!v.is_array()) throw ConfigError("field 'criteria': expected an array");
      o.criteria.clear();
      for (const auto& c : v) {
        if (!c.is_number_integer() || c.get<int>() < 1 || c.get<int>() > 9) {
          throw ConfigError("field 'criteria': ids must be integers in [1, 9]");
        }
        o.criteria.push_back(c.get<int>());
      }
    } else if (key == "tolerances") {
      if (!v.is_object()) throw ConfigError("field 'tolerances': expected an object");
      for (const auto& [name, t] : v.items()) {
        if (!known.count(name)) throw ConfigError("unknown tolerance '" + name + "'");
        if (!t.is_number()) throw ConfigError("tolerance '" + name + "': expected a number");
        o.tolerances[name] = t.get<double>();
      }
    } else if (key == "manifest") {
      continue;
    } else {
      throw ConfigError("unknown field '" + key + "'");
    }
  }
  o.apply_defaults();
  return o;
}

namespace {

constexpr double kBmax = 0.25;
constexpr int kN = 3;
constexpr double kP = 0.95;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double tol(const AcceptanceOptions& o, const std::string& key) {
  const auto it = o.tolerances.find(key);
  if (it != o.tolerances.end()) return it->second;
  return default_tolerances().at(key);
}

CriterionResult make_result(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

struct QfimPoint {
  NoisyStateModel model;
};

std::vector<QfimPoint> qfim_points(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> theta(0.05, 1.5);
  std::uniform_real_distribution<double> p(0.8, 0.99);
  std::uniform_int_distribution<int> mi(0, 4);
  std::uniform_int_distribution<int> ni(2, 4);
  std::vector<QfimPoint> pts;
  for (int i = 0; i < 200; ++i) {
    NoisyStateModel m;
    m.theta = theta(rng);
    m.p = p(rng);
    m.m = 1 << mi(rng);
    m.n = ni(rng);
    pts.push_back({m});
  }
  return pts;
}

CriterionResult c1_qfim(const AcceptanceOptions& o) {
  CriterionResult r = make_result(1, "qfim_diagonal_closed_form");
  double off = 0.0;
  double rel = 0.0;
  for (const auto& pt : qfim_points(derive_seed(o.seed, {1}))) {
    const Qfim num_q = qfim_numeric(pt.model);
    const Qfim closed = qfim_closed(pt.model);
    off = std::max(off, std::abs(num_q.f_theta_p));
    rel = std::max(rel, std::abs(num_q.f_theta_theta - closed.f_theta_theta) /
                            std::abs(closed.f_theta_theta));
    rel = std::max(rel, std::abs(num_q.f_pp - closed.f_pp) / std::abs(closed.f_pp));
  }
  r.measured = rel;
  r.threshold = tol(o, "c1.diag_rel");
  r.pass = rel <= r.threshold && off < tol(o, "c1.offdiag_abs");
  r.detail = "max|F_theta_p|=" + num(off) + " (< " + num(tol(o, "c1.offdiag_abs")) + ")";
  r.time_budget = 60.0;
  return r;
}

CriterionResult c2_attainability(const AcceptanceOptions& o) {
  CriterionResult r = make_result(2, "optimal_basis_attains_qfi");
  double rel = 0.0;
  for (const auto& pt : qfim_points(derive_seed(o.seed, {1}))) {
    const auto& m = pt.model;
    const double fc =
        classical_fisher(opt_basis_model(m.m, m.n, m.theta), m.theta, m.p, Param::kTheta);
    const double fq = qfim_closed(m).f_theta_theta;
    rel = std::max(rel, std::abs(fc - fq) / fq);
  }
  r.measured = rel;
  r.threshold = tol(o, "c2.rel");
  r.pass = rel <= r.threshold;
  r.detail = "200 points";
  r.time_budget = 60.0;
  return r;
}

CriterionResult c3_noiseless_mlae(const AcceptanceOptions& o) {
  CriterionResult r = make_result(3, "noiseless_mlae_scaling");
  const SinOracle oracle = build_a_sin(kN, kBmax);
  const GroverSchedule s = GroverSchedule::eis(5);
  const std::uint64_t shots = 100;
  const int trials = 200;
  const std::uint64_t seed = derive_seed(o.seed, {3});
  std::vector<double> err(trials, 0.0);
  parallel_for(trials, o.threads, [&](std::size_t t) {
    std::vector<CountRecord> records;
    for (std::size_t k = 0; k < s.m_list.size(); ++k) {
      const auto counts =
          sample_noisy_outcomes(oracle, 1.0, s.m_list[k], shots, derive_seed(seed, {t, k}));
      const auto [h0, h1] = ancilla_counts(counts, oracle.n);
      records.push_back(make_record(s.m_list[k], OutcomeKind::kComputational,
                                    std::array<std::uint64_t, 2>{h0, h1}));
    }
    const auto est = estimate_comp_fixed_p(records, 1.0, theta_axis(s.max_nq()));
    err[t] = est.theta_hat - oracle.theta_true;
  });
  double sq = 0.0;
  for (double e : err) sq += e * e;
  const double rmse = std::sqrt(sq / trials);
  const double crb = 1.0 / (2.0 * std::sqrt(static_cast<double>(shots) * s.sum_nq_squared()));
  r.measured = rmse / crb;
  r.threshold = tol(o, "c3.upper");
  r.pass = r.measured >= tol(o, "c3.lower") && r.measured <= r.threshold;
  r.detail = "rmse=" + num(rmse) + " crb=" + num(crb) + " window=[" + num(tol(o, "c3.lower")) +
             ", " + num(r.threshold) + "]";
  r.time_budget = 120.0;
  return r;
}

CriterionResult c4_adaptive(const AcceptanceOptions& o) {
  CriterionResult r = make_result(4, "adaptive_bound_sandwich");
  const SinOracle oracle = build_a_sin(kN, kBmax);
  const GroverSchedule s = GroverSchedule::eis(5);
  const std::uint64_t n_shot = 2500;
  const int trials = 100;
  const std::uint64_t seed = derive_seed(o.seed, {4});
  AdaptiveConfig ac;
  ac.n_shot = n_shot;
  ac.schedule = s;
  ac.basis_mode = BasisMode::kExact;
  const ParamGrid grid = ac.resolved_grid();

  std::vector<std::array<double, 3>> out(trials);
  parallel_for(trials, o.threads, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(seed, {t});
    const auto comp = run_comp_mlae(oracle, kP, s, n_shot, grid, derive_seed(ts, {1}));
    AdaptiveConfig local = ac;
    local.seed = derive_seed(ts, {2});
    const auto opt = run_two_step_adaptive(oracle, kP, local);
    out[t] = {comp.theta_hat - oracle.theta_true, opt.final.theta_hat - oracle.theta_true,
              std::min(std::abs(opt.fidelities.pc0), std::abs(opt.fidelities.pc1))};
  });
  double sq_c = 0.0;
  double sq_o = 0.0;
  double fid = 1.0;
  for (const auto& v : out) {
    sq_c += v[0] * v[0];
    sq_o += v[1] * v[1];
    fid = std::min(fid, v[2]);
  }
  const double rmse_c = std::sqrt(sq_c / trials);
  const double rmse_o = std::sqrt(sq_o / trials);
  const double shots = static_cast<double>(n_shot);
  const double qcrb = std::sqrt(qcrb_theta(s, kN, kP, shots));
  const double ccrb = std::sqrt(ccrb_comp_noisy(s, oracle.theta_true, kP, shots).variance);
  r.measured = rmse_o / qcrb;
  r.threshold = tol(o, "c4.qcrb_factor");
  const double comp_ratio = rmse_c / ccrb;
  r.pass = r.measured <= r.threshold && comp_ratio >= tol(o, "c4.ccrb_factor") &&
           fid >= tol(o, "c4.min_fidelity");
  r.detail = "rmse_opt=" + num(rmse_o) + " qcrb=" + num(qcrb) + " rmse_comp/ccrb=" +
             num(comp_ratio) + " (>= " + num(tol(o, "c4.ccrb_factor")) + ") ccrb=" + num(ccrb) +
             " min_fidelity=" + num(fid);
  r.time_budget = 1200.0;
  return r;
}

CriterionResult c5_barren(const AcceptanceOptions& o) {
  CriterionResult r = make_result(5, "gradient_variance_no_collapse");
  const std::vector<int> ns = {4, 6, 8};
  const int layers = 6;
  std::vector<double> var(ns.size());
  const std::uint64_t seed = derive_seed(o.seed, {5});
  parallel_for(ns.size(), o.threads, [&](std::size_t i) {
    var[i] = gradient_variance_experiment(std::span<const int>(&ns[i], 1),
                                          std::span<const int>(&layers, 1), 300, seed, kBmax)
                 .front()
                 .grad_variance;
  });
  double min_ratio = INFINITY;
  std::string detail = "var:";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    detail += " n" + std::to_string(ns[i]) + "=" + num(var[i]);
    if (i > 0) min_ratio = std::min(min_ratio, var[i] / var[i - 1]);
  }
  r.measured = min_ratio;
  r.threshold = tol(o, "c5.min_ratio");
  r.pass = min_ratio >= r.threshold;
  r.detail = detail;
  r.time_budget = 600.0;
  return r;
}

std::vector<double> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw std::runtime_error("missing column " + name);
  const auto idx = static_cast<std::size_t>(it - t.header.begin());
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(std::stod(row[idx]));
  return out;
}

ExperimentConfig phase_config(const AcceptanceOptions& o) {
  ExperimentConfig c;
  c.experiment = "phase-mse";
  c.seed = derive_seed(o.seed, {6});
  c.threads = o.threads;
  c.n = kN;
  c.b_max = {kBmax};
  c.n_sample = 200;
  c.phi_shot_list = {100, 1000, 10000};
  c.phi_true = 0.7;
  return c;
}

CriterionResult c6_phase(const AcceptanceOptions& o) {
  CriterionResult r = make_result(6, "phase_mse_scaling");
  const Table t = run_experiment(phase_config(o)).results;
  const auto shots = column(t, "N_phi_shot");
  const auto mse = column(t, "mse");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    mx += std::log10(shots[i]);
    my += std::log10(mse[i]);
  }
  mx /= static_cast<double>(shots.size());
  my /= static_cast<double>(shots.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const double dx = std::log10(shots[i]) - mx;
    sxy += dx * (std::log10(mse[i]) - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  r.measured = slope;
  r.threshold = tol(o, "c6.slope_tol");
  r.pass = std::abs(slope - tol(o, "c6.slope")) <= r.threshold;
  std::string detail = "target " + num(tol(o, "c6.slope")) + " mse:";
  for (std::size_t i = 0; i < shots.size(); ++i) {
    detail += " " + num(shots[i]) + "->" + num(mse[i]);
  }
  r.detail = detail;
  r.time_budget = 300.0;
  return r;
}

CriterionResult c7_bias_model(const AcceptanceOptions& o) {
  CriterionResult r = make_result(7, "biased_model_vs_injected_simulation");
  const SinOracle oracle = build_a_sin(kN, kBmax);
  const std::size_t reg = std::size_t{1} << oracle.n;
  double gap = 0.0;
  for (int m : {1, 2, 4}) {
    for (double dtheta : {0.0, 0.01}) {
      const double theta_hat1 = oracle.theta_true + dtheta;
      for (double pc0 : {0.85, 0.9, 0.95, 1.0}) {
        for (double pc1 : {0.85, 0.9, 0.95, 1.0}) {
          for (double phi : {0.0, 0.05, 0.1}) {
            TrainedBasis tb;
            tb.circuits.c0 = injected_register_circuit(oracle, 0, pc0);
            tb.circuits.c1 = injected_register_circuit(oracle, 1, pc1, phi);
            tb.theta_hat1 = theta_hat1;
            const auto dist = noisy_outcome_distribution(oracle, kP, m, build_b(tb, grover_nq(m)));
            const std::array<double, 3> exact{dist[0], dist[reg], 1.0 - dist[0] - dist[reg]};
            const auto model = biased_outcome_probs(
                NoisyStateModel{oracle.theta_true, kP, m, oracle.n}, theta_hat1, pc0, pc1, phi);
            for (int i = 0; i < 3; ++i) gap = std::max(gap, std::abs(exact[i] - model[i]));
          }
        }
      }
    }
  }
  r.measured = gap;
  r.threshold = tol(o, "c7.gap");
  r.pass = gap < r.threshold;
  r.detail = "m in {1,2,4}, pc in [0.85,1], phi_tilde <= 0.1";
  r.time_budget = 60.0;
  return r;
}

CriterionResult c8_four_param(const AcceptanceOptions& o) {
  CriterionResult r = make_result(8, "four_parameter_recovery");
  const SinOracle oracle = build_a_sin(kN, kBmax);
  const GroverSchedule s = GroverSchedule::eis(5);
  const double pc0 = 0.942;
  const double pc1 = 0.880;
  FourParamConfig fc;
  fc.shots_per_mk = 100000;
  fc.theta_hat1 = oracle.theta_true;
  fc.expected_counts = true;
  const auto rec = run_four_param(oracle, kP, pc0, pc1, s, fc);
  const std::array<double, 4> truth{oracle.theta_true, kP, pc0, pc1};
  const std::array<double, 4> est{rec.theta_hat, rec.p_hat, rec.pc0_hat.value_or(NAN),
                                  rec.pc1_hat.value_or(NAN)};
  double cells = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    cells = std::max(cells, std::abs(est[i] - truth[i]) / rec.grid_meta.finest_cell[i]);
  }

  const int trials = 50;
  fc.expected_counts = false;
  std::vector<double> err(trials);
  const std::uint64_t seed = derive_seed(o.seed, {8});
  parallel_for(trials, o.threads, [&](std::size_t t) {
    FourParamConfig local = fc;
    local.seed = derive_seed(seed, {t});
    err[t] = run_four_param(oracle, kP, pc0, pc1, s, local).theta_hat - oracle.theta_true;
  });
  double sq = 0.0;
  for (double e : err) sq += e * e;
  const double rmse = std::sqrt(sq / trials);
  const double qcrb = std::sqrt(qcrb_theta(s, kN, kP, static_cast<double>(fc.shots_per_mk)));
  r.measured = cells;
  r.threshold = tol(o, "c8.cells");
  r.pass = cells <= r.threshold && rmse <= tol(o, "c8.qcrb_factor") * qcrb;
  r.detail = "est=(" + num(est[0]) + ", " + num(est[1]) + ", " + num(est[2]) + ", " +
             num(est[3]) + ") rmse/qcrb=" + num(rmse / qcrb) + " (<= " +
             num(tol(o, "c8.qcrb_factor")) + ")";
  r.time_budget = 900.0;
  return r;
}

CriterionResult c9_determinism(const AcceptanceOptions& o) {
  CriterionResult r = make_result(9, "byte_identical_reruns");
  ExperimentConfig a;
  a.experiment = "adaptive";
  a.seed = derive_seed(o.seed, {9});
  a.n = kN;
  a.b_max = {kBmax};
  a.n_shot = 400;
  a.M = 3;
  a.n_sample = 4;
  ExperimentConfig ph = phase_config(o);
  ph.n_sample = 20;

  int mismatches = 0;
  int runs = 0;
  for (ExperimentConfig c : {a, ph}) {
    c.threads = 1;
    const std::string first = run_experiment(c).results.to_csv();
    c.threads = std::max(2, o.threads);
    const std::string second = run_experiment(c).results.to_csv();
    const std::string third = run_experiment(c).results.to_csv();
    mismatches += (first != second) + (first != third);
    runs += 2;
  }
  r.measured = mismatches;
  r.threshold = 0.0;
  r.pass = mismatches == 0;
  r.detail = std::to_string(runs) + " reruns compared across thread counts";
  r.time_budget = 600.0;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = c1_qfim(options); break;
      case 2: r = c2_attainability(options); break;
      case 3: r = c3_noiseless_mlae(options); break;
      case 4: r = c4_adaptive(options); break;
      case 5: r = c5_barren(options); break;
      case 6: r = c6_phase(options); break;
      case 7: r = c7_bias_model(options); break;
      case 8: r = c8_four_param(options); break;
      case 9: r = c9_determinism(options); break;
      default: throw ConfigError("unknown criterion " + std::to_string(id));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.id = id;
    r.name = "error";
    r.pass = false;
    r.measured = NAN;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.time_budget > 0.0 && r.seconds > r.time_budget) {
    r.pass = false;
    r.detail += " [over time budget]";
  }
  return r;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << "c" << r.id << " " << r.name
     << " measured=" << num(r.measured) << " threshold=" << num(r.threshold);
  if (!r.detail.empty()) os << " | " << r.detail;
  return os.str();
}

}  // namespace qae
