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


#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qae/errors.hpp"
#include "qae/experiment.hpp"

namespace qae {
namespace {

using nlohmann::json;

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("qae_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(Config, Defaults) {
  const auto c = parse_config(json::object());
  EXPECT_EQ(c.experiment, "adaptive");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.n_shot, 10000u);
  EXPECT_EQ(c.M, 7);
  EXPECT_EQ(c.resolved_prefixes().size(), 8u);
  EXPECT_EQ(parse_config(json{{"experiment", "barren"}}).n_sample, 300);
  EXPECT_EQ(parse_config(json{{"b_max", 0.5}}).b_max, std::vector<double>{0.5});
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(json{{"bogus", 1}}).find("bogus"), std::string::npos);
  EXPECT_NE(config_error(json{{"p", 1.5}}).find("'p'"), std::string::npos);
  EXPECT_NE(config_error(json{{"p", "high"}}).find("'p'"), std::string::npos);
  EXPECT_NE(config_error(json{{"threads", 0}}).find("threads"), std::string::npos);
  EXPECT_NE(config_error(json{{"N_sample", -1}}).find("N_sample"), std::string::npos);
  EXPECT_NE(config_error(json{{"basis", "magic"}}).find("basis"), std::string::npos);
  EXPECT_NE(config_error(json{{"grid", {{"p_points", 1}}}}).find("grid.p_points"),
            std::string::npos);
  EXPECT_NE(config_error(json{{"n_list", {4, "x"}}}).find("n_list[1]"), std::string::npos);
  EXPECT_FALSE(config_error(json::array()).empty());
  ExperimentConfig c;
  c.experiment = "nope";
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
  EXPECT_EQ(t.to_csv(), "a,b\n1,2\n3,4\n");
}

TEST(Run, ZeroSamplesGivesHeadersOnly) {
  for (const std::string e : {"mlae", "adaptive", "phase-mse"}) {
    auto c = parse_config(json{{"experiment", e}, {"N_sample", 0}});
    const auto out = run_experiment(c);
    EXPECT_TRUE(out.results.rows.empty()) << e;
    EXPECT_FALSE(out.results.header.empty()) << e;
  }
}

TEST(Run, AdaptiveHeader) {
  auto c = parse_config(json{{"experiment", "adaptive"}, {"N_sample", 0}});
  const auto h = run_experiment(c).results.header;
  const std::vector<std::string> lead = {"b_max",     "N_query",           "rmse_comp",
                                         "rmse_opt",  "ccrb_noiseless_m0", "ccrb_noiseless_eis",
                                         "ccrb_noisy", "qcrb_noisy"};
  ASSERT_GE(h.size(), lead.size());
  for (std::size_t i = 0; i < lead.size(); ++i) EXPECT_EQ(h[i], lead[i]);
}

TEST(Run, QcrbSweepValues) {
  auto c = parse_config(json{{"experiment", "qcrb-sweep"}, {"M", 2}, {"N_shot", 100}});
  const auto out = run_experiment(c);
  ASSERT_EQ(out.results.rows.size(), 3u);
  // Prefix eis(0): the noiseless m = 0 bound is 1 / (4 N_shot).
  const auto& h = out.results.header;
  const auto col = std::find(h.begin(), h.end(), "ccrb_noiseless_m0") - h.begin();
  EXPECT_NEAR(std::stod(out.results.rows[0][col]), std::sqrt(1.0 / 400.0), 1e-12);
}

TEST(Run, ThreadCountDoesNotChangeResults) {
  json j = {{"experiment", "mlae"}, {"N_sample", 6}, {"M", 2}, {"N_shot", 200},
            {"b_max", {0.25, 0.5}}, {"seed", 11}};
  j["threads"] = 1;
  const auto a = run_experiment(parse_config(j)).results.to_csv();
  j["threads"] = 3;
  const auto b = run_experiment(parse_config(j)).results.to_csv();
  EXPECT_EQ(a, b);
  j["seed"] = 12;
  EXPECT_NE(a, run_experiment(parse_config(j)).results.to_csv());
}

TEST(Run, ManifestRoundTrips) {
  const auto dir = temp_dir("manifest");
  json j = {{"experiment", "phase-mse"}, {"N_sample", 3}, {"N_phi_shot_list", {50}},
            {"seed", 5}, {"output", dir.string()}};
  const auto c = parse_config(j);
  const auto out = run_experiment(c);
  write_run(c, out, 0.5);
  ASSERT_TRUE(std::filesystem::exists(dir / "results.csv"));
  EXPECT_EQ(slurp(dir / "results.csv"), out.results.to_csv());
  const auto back = load_config((dir / "manifest.json").string());
  EXPECT_EQ(to_json(back), to_json(c));
  // Re-running from the manifest reproduces the table.
  EXPECT_EQ(run_experiment(back).results.to_csv(), out.results.to_csv());
  std::filesystem::remove_all(dir);
}

TEST(Run, CommentsAllowedInConfigFiles) {
  const auto dir = temp_dir("comments");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "c.json");
    f << "{\n  // sweep\n  \"experiment\": \"qcrb-sweep\", \"M\": 1\n}\n";
  }
  EXPECT_EQ(load_config((dir / "c.json").string()).M, 1);
  EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(ParallelFor, CoversRangeAndRethrows) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace qae
