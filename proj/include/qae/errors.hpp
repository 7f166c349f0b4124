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

#pragma once

#include <stdexcept>
#include <string>

namespace qae {

/// Register size outside the supported range or mismatched between operands.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Qubit index out of range, or control/target overlap.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conditioning on an ancilla branch that carries no probability weight.
class DegenerateBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested quantity is singular at this parameter point (e.g. L_p at p = 1).
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Likelihood is non-finite on the whole search grid.
class EstimationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phase likelihood is flat because sin(2 theta) vanishes.
class PhaseUnidentifiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bias formula has a vanishing denominator.
class BiasUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qae
