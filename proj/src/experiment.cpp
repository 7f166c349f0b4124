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

#include "qae/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "qae/adaptive.hpp"
#include "qae/errors.hpp"
#include "qae/metrology.hpp"
#include "qae/rng.hpp"
#include "qae/vqc.hpp"

namespace qae {

using nlohmann::json;

ParamGrid GridSpec::two_param(const GroverSchedule& schedule) const {
  GridAxis theta = theta_axis(schedule.max_nq());
  if (theta_points > 0) theta.points = theta_points;
  theta.refine_points = theta_refine;
  GridAxis p{"p", p_lower, p_upper, p_points, p_refine};
  return ParamGrid{{theta, p}, refinement_levels};
}

ParamGrid GridSpec::four_param(const GroverSchedule& schedule) const {
  GridAxis theta = theta_axis(schedule.max_nq());
  if (theta_points > 0) theta.points = theta_points;
  theta.refine_points = fp_refine;
  GridAxis p{"p", p_lower, p_upper, fp_points, fp_refine};
  GridAxis pc0{"pc0", pc_lower, pc_upper, fp_points, fp_refine};
  GridAxis pc1{"pc1", pc_lower, pc_upper, fp_points, fp_refine};
  return ParamGrid{{theta, p, pc0, pc1}, fp_levels};
}

std::vector<int> ExperimentConfig::resolved_prefixes() const {
  if (!prefixes.empty()) return prefixes;
  std::vector<int> out(M + 1);
  for (int k = 0; k <= M; ++k) out[k] = k;
  return out;
}

namespace {

const std::set<std::string> kExperiments = {"qcrb-sweep", "mlae",   "adaptive", "four-param",
                                            "vqc-train",  "barren", "phase-mse"};

template <typename T>
T field(const json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + name + "': wrong type (got " + std::string(j.type_name()) +
                      ")");
  }
}

std::uint64_t unsigned_field(const json& j, const std::string& name) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<long long>() < 0)) {
    throw ConfigError("field '" + name + "': expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int int_field(const json& j, const std::string& name) {
  if (!j.is_number_integer()) throw ConfigError("field '" + name + "': expected an integer");
  const long long v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("field '" + name + "': integer out of range");
  }
  return static_cast<int>(v);
}

double number_field(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("field '" + name + "': expected a number");
  return j.get<double>();
}

template <typename T, typename F>
std::vector<T> list_field(const json& j, const std::string& name, F item) {
  if (!j.is_array()) throw ConfigError("field '" + name + "': expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(item(j[i], name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void require(bool ok, const std::string& name, const std::string& what) {
  if (!ok) throw ConfigError("field '" + name + "': " + what);
}

void parse_grid(const json& j, GridSpec& g) {
  if (!j.is_object()) throw ConfigError("field 'grid': expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string name = "grid." + key;
    if (key == "theta_points") g.theta_points = int_field(v, name);
    else if (key == "theta_refine") g.theta_refine = int_field(v, name);
    else if (key == "p_lower") g.p_lower = number_field(v, name);
    else if (key == "p_upper") g.p_upper = number_field(v, name);
    else if (key == "p_points") g.p_points = int_field(v, name);
    else if (key == "p_refine") g.p_refine = int_field(v, name);
    else if (key == "refinement_levels") g.refinement_levels = int_field(v, name);
    else if (key == "pc_lower") g.pc_lower = number_field(v, name);
    else if (key == "pc_upper") g.pc_upper = number_field(v, name);
    else if (key == "fp_points") g.fp_points = int_field(v, name);
    else if (key == "fp_refine") g.fp_refine = int_field(v, name);
    else if (key == "fp_levels") g.fp_levels = int_field(v, name);
    else throw ConfigError("unknown field '" + name + "'");
  }
  require(g.theta_points == 0 || g.theta_points >= 3, "grid.theta_points", "must be 0 or >= 3");
  require(g.theta_refine >= 3, "grid.theta_refine", "must be >= 3");
  require(g.p_lower > 0.0 && g.p_lower < g.p_upper && g.p_upper <= 1.0, "grid.p_lower",
          "need 0 < p_lower < p_upper <= 1");
  require(g.p_points >= 3, "grid.p_points", "must be >= 3");
  require(g.p_refine >= 3, "grid.p_refine", "must be >= 3");
  require(g.refinement_levels >= 0, "grid.refinement_levels", "must be >= 0");
  require(g.pc_lower > 0.0 && g.pc_lower < g.pc_upper && g.pc_upper <= 1.0, "grid.pc_lower",
          "need 0 < pc_lower < pc_upper <= 1");
  require(g.fp_points >= 3, "grid.fp_points", "must be >= 3");
  require(g.fp_refine >= 3, "grid.fp_refine", "must be >= 3");
  require(g.fp_levels >= 0, "grid.fp_levels", "must be >= 0");
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  bool have_sample = false;
  auto as_int = [](const json& v, const std::string& n) { return int_field(v, n); };
  auto as_u64 = [](const json& v, const std::string& n) { return unsigned_field(v, n); };
  for (const auto& [key, v] : j.items()) {
    if (key == "manifest") continue;
    if (key == "experiment") c.experiment = field<std::string>(v, key);
    else if (key == "seed") c.seed = unsigned_field(v, key);
    else if (key == "threads") c.threads = int_field(v, key);
    else if (key == "output") c.output = field<std::string>(v, key);
    else if (key == "n") c.n = int_field(v, key);
    else if (key == "b_max") {
      c.b_max = v.is_array() ? list_field<double>(v, key, number_field)
                             : std::vector<double>{number_field(v, key)};
    } else if (key == "p") c.p = number_field(v, key);
    else if (key == "N_shot") c.n_shot = unsigned_field(v, key);
    else if (key == "M") c.M = int_field(v, key);
    else if (key == "prefixes") c.prefixes = list_field<int>(v, key, as_int);
    else if (key == "N_sample") {
      c.n_sample = int_field(v, key);
      have_sample = true;
    } else if (key == "lr") c.lr = number_field(v, key);
    else if (key == "N_L") c.n_layers = int_field(v, key);
    else if (key == "N_MaxItr") c.n_max_itr = int_field(v, key);
    else if (key == "N_phi_shot") c.n_phi_shot = unsigned_field(v, key);
    else if (key == "basis") c.basis = field<std::string>(v, key);
    else if (key == "use_rz") c.use_rz = field<bool>(v, key);
    else if (key == "shots_per_evaluation") c.shots_per_evaluation = unsigned_field(v, key);
    else if (key == "pc0") c.pc0 = number_field(v, key);
    else if (key == "pc1") c.pc1 = number_field(v, key);
    else if (key == "injected") c.injected = field<bool>(v, key);
    else if (key == "theta_hat1") {
      if (v.is_null()) c.theta_hat1.reset();
      else c.theta_hat1 = number_field(v, key);
    } else if (key == "n_list") c.n_list = list_field<int>(v, key, as_int);
    else if (key == "N_L_list") c.nl_list = list_field<int>(v, key, as_int);
    else if (key == "N_phi_shot_list") c.phi_shot_list = list_field<std::uint64_t>(v, key, as_u64);
    else if (key == "phi_true") c.phi_true = number_field(v, key);
    else if (key == "restarts") c.restarts = int_field(v, key);
    else if (key == "train_schedule") c.train_schedule = list_field<int>(v, key, as_int);
    else if (key == "train_iterations") c.train_iterations = int_field(v, key);
    else if (key == "grid") parse_grid(v, c.grid);
    else throw ConfigError("unknown field '" + key + "'");
  }
  if (!have_sample && c.experiment == "barren") c.n_sample = 300;

  require(kExperiments.count(c.experiment) > 0, "experiment",
          "must be one of qcrb-sweep, mlae, adaptive, four-param, vqc-train, barren, phase-mse");
  require(c.threads >= 1, "threads", "must be >= 1");
  require(!c.output.empty(), "output", "must not be empty");
  require(c.n >= 1 && c.n <= 14, "n", "must lie in [1, 14]");
  require(!c.b_max.empty(), "b_max", "must not be empty");
  for (double b : c.b_max) require(b > 0.0 && std::isfinite(b), "b_max", "must be positive");
  require(c.p > 0.0 && c.p <= 1.0, "p", "must lie in (0, 1]");
  require(c.n_shot >= 2, "N_shot", "must be >= 2");
  require(c.M >= 0 && c.M <= 12, "M", "must lie in [0, 12]");
  for (int k : c.prefixes) require(k >= 0 && k <= c.M, "prefixes", "entries must lie in [0, M]");
  require(c.n_sample >= 0, "N_sample", "must be >= 0");
  require(c.lr > 0.0, "lr", "must be > 0");
  require(c.n_layers >= 1, "N_L", "must be >= 1");
  require(c.n_max_itr >= 1, "N_MaxItr", "must be >= 1");
  require(c.basis == "exact" || c.basis == "trained", "basis", "must be 'exact' or 'trained'");
  require(c.pc0 > 0.0 && c.pc0 <= 1.0, "pc0", "must lie in (0, 1]");
  require(c.pc1 > 0.0 && c.pc1 <= 1.0, "pc1", "must lie in (0, 1]");
  if (c.theta_hat1) {
    require(*c.theta_hat1 >= 0.0 && *c.theta_hat1 <= std::numbers::pi / 2.0, "theta_hat1",
            "must lie in [0, pi/2]");
  }
  for (int v : c.n_list) require(v >= 1 && v <= 14, "n_list", "entries must lie in [1, 14]");
  for (int v : c.nl_list) require(v >= 1, "N_L_list", "entries must be >= 1");
  for (auto v : c.phi_shot_list) require(v >= 1, "N_phi_shot_list", "entries must be >= 1");
  require(c.restarts >= 1, "restarts", "must be >= 1");
  require(!c.train_schedule.empty(), "train_schedule", "must not be empty");
  for (int m : c.train_schedule) require(m >= 0, "train_schedule", "entries must be >= 0");
  require(c.train_iterations >= 1, "train_iterations", "must be >= 1");
  if (c.experiment == "barren" || c.experiment == "phase-mse") {
    require(c.b_max.size() == 1, "b_max", "this experiment takes a single value");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json g = {{"theta_points", c.grid.theta_points},
            {"theta_refine", c.grid.theta_refine},
            {"p_lower", c.grid.p_lower},
            {"p_upper", c.grid.p_upper},
            {"p_points", c.grid.p_points},
            {"p_refine", c.grid.p_refine},
            {"refinement_levels", c.grid.refinement_levels},
            {"pc_lower", c.grid.pc_lower},
            {"pc_upper", c.grid.pc_upper},
            {"fp_points", c.grid.fp_points},
            {"fp_refine", c.grid.fp_refine},
            {"fp_levels", c.grid.fp_levels}};
  json j = {{"experiment", c.experiment},
            {"seed", c.seed},
            {"threads", c.threads},
            {"output", c.output},
            {"n", c.n},
            {"b_max", c.b_max},
            {"p", c.p},
            {"N_shot", c.n_shot},
            {"M", c.M},
            {"prefixes", c.prefixes},
            {"N_sample", c.n_sample},
            {"lr", c.lr},
            {"N_L", c.n_layers},
            {"N_MaxItr", c.n_max_itr},
            {"N_phi_shot", c.n_phi_shot},
            {"basis", c.basis},
            {"use_rz", c.use_rz},
            {"shots_per_evaluation", c.shots_per_evaluation},
            {"pc0", c.pc0},
            {"pc1", c.pc1},
            {"injected", c.injected},
            {"theta_hat1", c.theta_hat1 ? json(*c.theta_hat1) : json(nullptr)},
            {"n_list", c.n_list},
            {"N_L_list", c.nl_list},
            {"N_phi_shot_list", c.phi_shot_list},
            {"phi_true", c.phi_true},
            {"restarts", c.restarts},
            {"train_schedule", c.train_schedule},
            {"train_iterations", c.train_iterations},
            {"grid", g}};
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

// Seed-path tags per experiment.
enum Tag : std::uint64_t {
  kTagQcrb = 1,
  kTagMlae = 2,
  kTagAdaptive = 3,
  kTagFourParam = 4,
  kTagVqc = 5,
  kTagPhase = 7,
  kTagPretrain = 8,
};

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

std::uint64_t row_seed(const ExperimentConfig& c, Tag tag, double b, std::uint64_t k) {
  return derive_seed(c.seed, {tag, std::bit_cast<std::uint64_t>(b), k});
}

double rms(double sum_sq, std::size_t count) {
  return count ? std::sqrt(sum_sq / static_cast<double>(count))
               : std::numeric_limits<double>::quiet_NaN();
}

struct TrialOutcome {
  bool ok_a = false;
  bool ok_b = false;
  double err_a = 0.0;
  double err_b = 0.0;
  std::array<double, 3> extra{};
};

RunOutput run_qcrb_sweep(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"b_max",  "p",          "N_query",    "ccrb_noiseless_m0", "ccrb_noiseless_eis",
                        "ccrb_noisy", "qcrb_noisy", "seed"};
  for (double b : c.b_max) {
    const SinOracle oracle = build_a_sin(c.n, b);
    for (int k : c.resolved_prefixes()) {
      const GroverSchedule s = GroverSchedule::eis(k);
      const std::uint64_t n_query = c.n_shot * static_cast<std::uint64_t>(s.n_a());
      const double shots = static_cast<double>(c.n_shot);
      out.results.rows.push_back(
          {format_double(b), format_double(c.p), fmt(n_query),
           format_double(std::sqrt(1.0 / (4.0 * static_cast<double>(n_query)))),
           format_double(std::sqrt(ccrb_noiseless(s, shots))),
           format_double(std::sqrt(ccrb_comp_noisy(s, oracle.theta_true, c.p, shots).variance)),
           format_double(std::sqrt(qcrb_theta(s, c.n, c.p, shots))),
           fmt(row_seed(c, kTagQcrb, b, k))});
    }
  }
  return out;
}

RunOutput run_mlae(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"b_max", "N_query", "rmse", "ccrb_noisy", "failures", "seed"};
  if (c.n_sample == 0) return out;
  for (double b : c.b_max) {
    const SinOracle oracle = build_a_sin(c.n, b);
    for (int k : c.resolved_prefixes()) {
      const GroverSchedule s = GroverSchedule::eis(k);
      const ParamGrid grid = c.grid.two_param(s);
      const std::uint64_t seed = row_seed(c, kTagMlae, b, k);
      std::vector<TrialOutcome> trials(c.n_sample);
      parallel_for(trials.size(), c.threads, [&](std::size_t t) {
        try {
          const auto r = run_comp_mlae(oracle, c.p, s, c.n_shot, grid, derive_seed(seed, {t}));
          trials[t].err_a = r.theta_hat - oracle.theta_true;
          trials[t].ok_a = true;
        } catch (const std::exception&) {
        }
      });
      double sq = 0.0;
      std::size_t ok = 0;
      int failures = 0;
      for (const auto& t : trials) {
        if (t.ok_a) {
          sq += t.err_a * t.err_a;
          ++ok;
        } else {
          ++failures;
        }
      }
      const double shots = static_cast<double>(c.n_shot);
      out.results.rows.push_back(
          {format_double(b), fmt(c.n_shot * static_cast<std::uint64_t>(s.n_a())),
           format_double(rms(sq, ok)),
           format_double(std::sqrt(ccrb_comp_noisy(s, oracle.theta_true, c.p, shots).variance)),
           fmt(failures), fmt(seed)});
    }
  }
  return out;
}

std::optional<std::pair<Ansatz, Ansatz>> pretrain(const ExperimentConfig& c,
                                                  const SinOracle& oracle, double b) {
  if (c.basis != "trained") return std::nullopt;
  TrainConfig tc;
  tc.learning_rate = c.lr;
  tc.n_max_itr = c.train_iterations;
  tc.p = 1.0;
  tc.seed = row_seed(c, kTagPretrain, b, 0);
  TrainResult tr = train_with_restarts(oracle, GroverSchedule{c.train_schedule}, c.n_layers,
                                       c.use_rz, tc, c.restarts);
  return std::make_pair(std::move(tr.ansatz0), std::move(tr.ansatz1));
}

RunOutput run_adaptive(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"b_max",      "N_query",    "rmse_comp", "rmse_opt",
                        "ccrb_noiseless_m0", "ccrb_noiseless_eis", "ccrb_noisy",
                        "qcrb_noisy", "phase_fallbacks", "failures", "seed"};
  if (c.n_sample == 0) return out;
  for (double b : c.b_max) {
    const SinOracle oracle = build_a_sin(c.n, b);
    const auto initial = pretrain(c, oracle, b);
    for (int k : c.resolved_prefixes()) {
      const GroverSchedule s = GroverSchedule::eis(k);
      const ParamGrid grid = c.grid.two_param(s);
      const std::uint64_t seed = row_seed(c, kTagAdaptive, b, k);
      AdaptiveConfig ac;
      ac.n_shot = c.n_shot;
      ac.schedule = s;
      ac.n_max_itr = c.n_max_itr;
      ac.n_phi_shot = c.n_phi_shot;
      ac.basis_mode = c.basis == "trained" ? BasisMode::kTrained : BasisMode::kExact;
      ac.layers = c.n_layers;
      ac.use_rz = c.use_rz;
      ac.learning_rate = c.lr;
      ac.shots_per_evaluation = c.shots_per_evaluation;
      ac.grid = grid;

      std::vector<TrialOutcome> trials(c.n_sample);
      parallel_for(trials.size(), c.threads, [&](std::size_t t) {
        const std::uint64_t ts = derive_seed(seed, {t});
        try {
          const auto r = run_comp_mlae(oracle, c.p, s, c.n_shot, grid, derive_seed(ts, {1}));
          trials[t].err_a = r.theta_hat - oracle.theta_true;
          trials[t].ok_a = true;
        } catch (const std::exception&) {
        }
        try {
          AdaptiveConfig local = ac;
          local.seed = derive_seed(ts, {2});
          const auto r = run_two_step_adaptive(oracle, c.p, local, initial);
          trials[t].err_b = r.final.theta_hat - oracle.theta_true;
          trials[t].extra[0] = r.phase_fallback ? 1.0 : 0.0;
          trials[t].ok_b = true;
        } catch (const std::exception&) {
        }
      });
      double sq_a = 0.0;
      double sq_b = 0.0;
      std::size_t ok_a = 0;
      std::size_t ok_b = 0;
      int failures = 0;
      int fallbacks = 0;
      for (const auto& t : trials) {
        if (t.ok_a) {
          sq_a += t.err_a * t.err_a;
          ++ok_a;
        }
        if (t.ok_b) {
          sq_b += t.err_b * t.err_b;
          ++ok_b;
          fallbacks += t.extra[0] > 0.0 ? 1 : 0;
        }
        if (!t.ok_a || !t.ok_b) ++failures;
      }
      const double shots = static_cast<double>(c.n_shot);
      const std::uint64_t n_query = c.n_shot * static_cast<std::uint64_t>(s.n_a());
      out.results.rows.push_back(
          {format_double(b), fmt(n_query), format_double(rms(sq_a, ok_a)),
           format_double(rms(sq_b, ok_b)),
           format_double(std::sqrt(1.0 / (4.0 * static_cast<double>(n_query)))),
           format_double(std::sqrt(ccrb_noiseless(s, shots))),
           format_double(std::sqrt(ccrb_comp_noisy(s, oracle.theta_true, c.p, shots).variance)),
           format_double(std::sqrt(qcrb_theta(s, c.n, c.p, shots))), fmt(fallbacks),
           fmt(failures), fmt(seed)});
    }
  }
  return out;
}

RunOutput run_four_param_experiment(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"b_max",       "N_query",      "rmse_theta",   "qcrb_noisy", "mean_p_hat",
                        "mean_pc0_hat", "mean_pc1_hat", "failures", "seed"};
  if (c.n_sample == 0) return out;
  for (double b : c.b_max) {
    const SinOracle oracle = build_a_sin(c.n, b);
    for (int k : c.resolved_prefixes()) {
      const GroverSchedule s = GroverSchedule::eis(k);
      const std::uint64_t seed = row_seed(c, kTagFourParam, b, k);
      FourParamConfig fc;
      fc.shots_per_mk = c.n_shot;
      fc.theta_hat1 = c.theta_hat1.value_or(oracle.theta_true);
      fc.injected = c.injected;
      fc.grid = c.grid.four_param(s);
      std::vector<TrialOutcome> trials(c.n_sample);
      parallel_for(trials.size(), c.threads, [&](std::size_t t) {
        try {
          FourParamConfig local = fc;
          local.seed = derive_seed(seed, {t});
          const auto r = run_four_param(oracle, c.p, c.pc0, c.pc1, s, local);
          trials[t].err_a = r.theta_hat - oracle.theta_true;
          trials[t].extra = {r.p_hat, r.pc0_hat.value_or(0.0), r.pc1_hat.value_or(0.0)};
          trials[t].ok_a = true;
        } catch (const std::exception&) {
        }
      });
      double sq = 0.0;
      std::array<double, 3> sums{};
      std::size_t ok = 0;
      int failures = 0;
      for (const auto& t : trials) {
        if (!t.ok_a) {
          ++failures;
          continue;
        }
        sq += t.err_a * t.err_a;
        for (int i = 0; i < 3; ++i) sums[i] += t.extra[i];
        ++ok;
      }
      const double denom = ok ? static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
      out.results.rows.push_back(
          {format_double(b), fmt(c.n_shot * static_cast<std::uint64_t>(s.n_a())),
           format_double(rms(sq, ok)),
           format_double(std::sqrt(qcrb_theta(s, c.n, c.p, static_cast<double>(c.n_shot)))),
           format_double(sums[0] / denom), format_double(sums[1] / denom),
           format_double(sums[2] / denom), fmt(failures), fmt(seed)});
    }
  }
  return out;
}

RunOutput run_vqc_train(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"b_max", "restart", "final_cost", "abs_pc0", "abs_pc1", "seed"};
  Table trace;
  trace.header = {"b_max", "restart", "m", "iteration", "cost"};
  for (double b : c.b_max) {
    const SinOracle oracle = build_a_sin(c.n, b);
    const std::uint64_t base = row_seed(c, kTagVqc, b, 0);
    std::vector<TrainResult> results(c.restarts);
    std::vector<std::uint64_t> seeds(c.restarts);
    parallel_for(results.size(), c.threads, [&](std::size_t r) {
      seeds[r] = derive_seed(base, {r});
      Rng init(derive_seed(seeds[r], {0}));
      Ansatz a0 = Ansatz::random(oracle.n, c.n_layers, c.use_rz, init);
      Ansatz a1 = Ansatz::random(oracle.n, c.n_layers, c.use_rz, init);
      TrainConfig tc;
      tc.learning_rate = c.lr;
      tc.n_max_itr = c.train_iterations;
      tc.shots_per_evaluation = c.shots_per_evaluation;
      tc.p = c.p;
      tc.seed = derive_seed(seeds[r], {1});
      results[r] = train(oracle, GroverSchedule{c.train_schedule}, std::move(a0), std::move(a1), tc);
    });
    for (std::size_t r = 0; r < results.size(); ++r) {
      const auto& tr = results[r];
      const auto f = fidelity_diagnostics(tr.ansatz0, tr.ansatz1, oracle);
      out.results.rows.push_back({format_double(b), fmt(static_cast<std::uint64_t>(r)),
                                  format_double(tr.final_cost), format_double(std::abs(f.pc0)),
                                  format_double(std::abs(f.pc1)), fmt(seeds[r])});
      for (const auto& e : tr.trace) {
        trace.rows.push_back({format_double(b), fmt(static_cast<std::uint64_t>(r)), fmt(e.m),
                              fmt(e.iteration), format_double(e.cost)});
      }
    }
  }
  out.extra.emplace_back("trace", std::move(trace));
  return out;
}

RunOutput run_barren(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"n", "N_L", "grad_variance", "seed"};
  if (c.n_sample == 0) return out;
  std::vector<std::pair<int, int>> cells;
  for (int n : c.n_list) {
    for (int nl : c.nl_list) cells.emplace_back(n, nl);
  }
  std::vector<VarianceRow> rows(cells.size());
  parallel_for(cells.size(), c.threads, [&](std::size_t i) {
    const int n = cells[i].first;
    const int nl = cells[i].second;
    rows[i] = gradient_variance_experiment(std::span<const int>(&n, 1),
                                           std::span<const int>(&nl, 1), c.n_sample, c.seed,
                                           c.b_max[0])
                  .front();
  });
  for (const auto& r : rows) {
    out.results.rows.push_back(
        {fmt(r.n), fmt(r.layers), format_double(r.grad_variance), fmt(r.seed)});
  }
  return out;
}

RunOutput run_phase_mse(const ExperimentConfig& c) {
  RunOutput out;
  out.results.header = {"N_phi_shot", "mse", "seed"};
  if (c.n_sample == 0) return out;
  const SinOracle oracle = build_a_sin(c.n, c.b_max[0]);
  RegisterPair circuits;
  circuits.c0 = exact_register_circuit(oracle, 0);
  circuits.c1 = injected_register_circuit(oracle, 1, 1.0, c.phi_true);
  for (std::uint64_t shots : c.phi_shot_list) {
    const std::uint64_t seed = row_seed(c, kTagPhase, c.b_max[0], shots);
    std::vector<double> sq(c.n_sample, 0.0);
    parallel_for(sq.size(), c.threads, [&](std::size_t t) {
      const auto pe =
          estimate_phase(oracle, circuits, oracle.theta_true, shots, derive_seed(seed, {t}));
      const double d = angle_diff(pe.phi_hat, c.phi_true);
      sq[t] = d * d;
    });
    double total = 0.0;
    for (double v : sq) total += v;
    out.results.rows.push_back(
        {fmt(shots), format_double(total / static_cast<double>(c.n_sample)), fmt(seed)});
  }
  return out;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "qcrb-sweep") return run_qcrb_sweep(c);
  if (c.experiment == "mlae") return run_mlae(c);
  if (c.experiment == "adaptive") return run_adaptive(c);
  if (c.experiment == "four-param") return run_four_param_experiment(c);
  if (c.experiment == "vqc-train") return run_vqc_train(c);
  if (c.experiment == "barren") return run_barren(c);
  if (c.experiment == "phase-mse") return run_phase_mse(c);
  throw ConfigError("field 'experiment': unknown experiment '" + c.experiment + "'");
}

void write_run(const ExperimentConfig& c, const RunOutput& out, double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output);
  fs::create_directories(dir);
  auto write = [](const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
  };
  write(dir / "results.csv", out.results.to_csv());
  std::vector<std::string> files = {"results.csv"};
  for (const auto& [stem, table] : out.extra) {
    write(dir / (stem + ".csv"), table.to_csv());
    files.push_back(stem + ".csv");
  }
  json manifest = to_json(c);
  manifest["manifest"] = {
      {"version", kVersion},
      {"wall_time_seconds", wall_seconds},
      {"rows", out.results.rows.size()},
      {"files", files},
      {"row_seed_rule", "derive_seed(seed, {experiment tag, bits(b_max), prefix or shot count})"},
      {"theta_p_form", "exact arctan"},
      {"restart_policy", "uniform [0, 2pi) init, keep lowest final cost"},
      {"sqrt_shot_rounding", "half up; remainder to the second step"}};
  write(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace qae
