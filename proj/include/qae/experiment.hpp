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

// Experiment configuration and runners behind `qae run`.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qae/estimator.hpp"
#include "qae/oracle.hpp"

namespace qae {

struct GridSpec {
  int theta_points = 0;  ///< 0: max(201, 16 N_q,max + 1)
  int theta_refine = 201;
  double p_lower = 0.5;
  double p_upper = 1.0;
  int p_points = 51;
  int p_refine = 51;
  int refinement_levels = 3;
  double pc_lower = 0.7;
  double pc_upper = 1.0;
  /// Four-parameter search: coarse/refine points for p, pc0, pc1 and theta
  /// refinement, plus its own level count.
  int fp_points = 11;
  int fp_refine = 21;
  int fp_levels = 6;

  ParamGrid two_param(const GroverSchedule& schedule) const;
  ParamGrid four_param(const GroverSchedule& schedule) const;
};

struct ExperimentConfig {
  std::string experiment = "adaptive";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output = "qae_out";

  int n = 3;
  std::vector<double> b_max = {0.25};
  double p = 0.95;
  std::uint64_t n_shot = 10000;
  int M = 7;
  /// Schedule prefixes eis(k) to evaluate; empty means 0..M.
  std::vector<int> prefixes;
  int n_sample = 200;

  double lr = 0.1;
  int n_layers = 6;
  int n_max_itr = 10;
  std::uint64_t n_phi_shot = 0;
  std::string basis = "exact";
  bool use_rz = false;
  std::uint64_t shots_per_evaluation = 0;

  double pc0 = 0.942;
  double pc1 = 0.880;
  bool injected = false;
  std::optional<double> theta_hat1;

  std::vector<int> n_list = {4, 6, 8, 10, 12};
  std::vector<int> nl_list = {4, 6, 8, 10, 12, 14};

  std::vector<std::uint64_t> phi_shot_list = {100, 1000, 10000};
  double phi_true = 0.7;

  int restarts = 5;
  std::vector<int> train_schedule = {2};
  int train_iterations = 500;

  GridSpec grid;

  std::vector<int> resolved_prefixes() const;
};

/// Parses and validates a JSON object. Unknown keys and bad values throw
/// ConfigError naming the field. A top-level "manifest" key is ignored so
/// run manifests round-trip.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// 17 significant digits.
std::string format_double(double v);

struct RunOutput {
  Table results;
  /// Additional tables keyed by file stem (e.g. "trace").
  std::vector<std::pair<std::string, Table>> extra;
};

RunOutput run_experiment(const ExperimentConfig& cfg);

/// Writes results.csv, any extra tables and manifest.json under cfg.output.
void write_run(const ExperimentConfig& cfg, const RunOutput& out, double wall_seconds);

/// Calls body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qae
