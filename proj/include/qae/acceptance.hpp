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

// End-to-end acceptance checks shared by `qae verify` and the acceptance
// test binary.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace qae {

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;       ///< wall time, excluded from the report line
  double time_budget = 0.0;   ///< seconds; exceeding it fails the criterion
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  int threads = 1;
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::map<std::string, double> tolerances;

  /// Fills every tolerance that is not already set.
  void apply_defaults();
};

std::map<std::string, double> default_tolerances();

/// Reads {"seed", "threads", "criteria", "tolerances"}; ConfigError on an
/// unknown key, an unknown tolerance name or an unknown criterion id.
AcceptanceOptions parse_acceptance(const nlohmann::json& j);

CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// One deterministic line: "[PASS] c4 name measured=... threshold=... detail".
std::string format_result(const CriterionResult& r);

}  // namespace qae
