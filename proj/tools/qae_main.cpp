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

// qae run <config> | qae verify <config>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qae/acceptance.hpp"
#include "qae/errors.hpp"
#include "qae/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qae::ConfigError("config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw qae::ConfigError("config: parse error in '" + path + "': " + e.what());
  }
}

int do_run(const std::string& path, const Overrides& ov) {
  auto j = read_json(path);
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.threads) j["threads"] = *ov.threads;
  if (ov.out) j["output"] = *ov.out;
  const qae::ExperimentConfig cfg = qae::parse_config(j);
  const auto start = std::chrono::steady_clock::now();
  const qae::RunOutput out = qae::run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  qae::write_run(cfg, out, secs);
  std::cerr << "qae: " << cfg.experiment << " wrote " << out.results.rows.size() << " rows to "
            << cfg.output << " in " << secs << " s\n";
  return 0;
}

int do_verify(const std::string& path, const Overrides& ov) {
  auto j = read_json(path);
  if (ov.seed) j["seed"] = *ov.seed;
  if (ov.threads) j["threads"] = *ov.threads;
  const qae::AcceptanceOptions opts = qae::parse_acceptance(j);
  std::string report;
  bool all = true;
  for (int id : opts.criteria) {
    const auto r = qae::run_criterion(id, opts);
    const std::string line = qae::format_result(r);
    std::cout << line << std::endl;
    std::cerr << "  c" << r.id << " took " << r.seconds << " s (budget " << r.time_budget
              << " s)\n";
    report += line + "\n";
    all = all && r.pass;
  }
  if (ov.out) {
    const std::filesystem::path p(*ov.out);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << report;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive amplitude estimation simulator"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;

  auto add_common = [&](CLI::App* sub, const std::string& out_help) {
    sub->add_option("config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the base seed");
    sub->add_option("--threads", threads, "Worker threads for trial-level parallelism")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out, out_help);
  };
  CLI::App* run = app.add_subcommand("run", "Run an experiment and write CSV + manifest");
  add_common(run, "Output directory");
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  add_common(verify, "Write the pass/fail report to this file");

  CLI11_PARSE(app, argc, argv);

  auto* active = run->parsed() ? run : verify;
  if (active->count("--seed")) ov.seed = seed;
  if (active->count("--threads")) ov.threads = threads;
  if (active->count("--out")) ov.out = out;

  try {
    return run->parsed() ? do_run(config, ov) : do_verify(config, ov);
  } catch (const qae::ConfigError& e) {
    std::cerr << "qae: invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qae: error: " << e.what() << "\n";
    return 1;
  }
}
