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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qae/errors.hpp"
#include "qae/statevector.hpp"

namespace qae {
namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Deterministic, non-trivial normalized state.
PureState test_state(int nq) {
  std::vector<Complex> a(std::size_t{1} << nq);
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = Complex(std::cos(0.7 * i + 0.3), std::sin(1.3 * i - 0.2) * 0.5);
    norm += std::norm(a[i]);
  }
  for (auto& v : a) v /= std::sqrt(norm);
  return PureState::from_amplitudes(a);
}

VectorXcd to_vec(const PureState& s) {
  VectorXcd v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) v[i] = s[i];
  return v;
}

// Kronecker embedding of a single-qubit gate at `target` in an nq-qubit space.
MatrixXcd embed(const Matrix2cd& g, int target, int nq) {
  const std::size_t d = std::size_t{1} << nq;
  MatrixXcd u = MatrixXcd::Zero(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    const int b = (col >> target) & 1;
    for (int r = 0; r < 2; ++r) {
      const std::size_t row = (col & ~(std::size_t{1} << target)) | (std::size_t(r) << target);
      u(row, col) += g(r, b);
    }
  }
  return u;
}

Matrix2cd ry_mat(double t) {
  Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

Matrix2cd rz_mat(double t) {
  Matrix2cd m;
  m << std::exp(-kI * (t / 2)), 0.0, 0.0, std::exp(kI * (t / 2));
  return m;
}

void expect_state_eq(const PureState& s, const VectorXcd& v, double tol = 1e-12) {
  ASSERT_EQ(s.dim(), static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - v[i]), 0.0, tol) << "index " << i;
  }
}

TEST(PureState, ZeroState) {
  const auto s = PureState::zero(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s[0], Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
  EXPECT_THROW(PureState::zero(0), SizeError);
  EXPECT_THROW(PureState::zero(kMaxQubits + 1), SizeError);
}

TEST(PureState, FromAmplitudesNeedsPowerOfTwo) {
  EXPECT_THROW(PureState::from_amplitudes(std::vector<Complex>(3)), SizeError);
}

TEST(PureState, SingleQubitGatesMatchMatrices) {
  const int nq = 3;
  Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Matrix2cd x;
  x << 0, 1, 1, 0;
  for (int t = 0; t < nq; ++t) {
    const auto s0 = test_state(nq);
    auto s = s0;
    s.ry(t, 0.83);
    expect_state_eq(s, embed(ry_mat(0.83), t, nq) * to_vec(s0));
    s = s0;
    s.rz(t, -1.1);
    expect_state_eq(s, embed(rz_mat(-1.1), t, nq) * to_vec(s0));
    s = s0;
    s.h(t);
    expect_state_eq(s, embed(h, t, nq) * to_vec(s0));
    s = s0;
    s.x(t);
    expect_state_eq(s, embed(x, t, nq) * to_vec(s0));
  }
}

TEST(PureState, CxMatchesPermutation) {
  const int nq = 3;
  const auto s0 = test_state(nq);
  for (int c = 0; c < nq; ++c) {
    for (int t = 0; t < nq; ++t) {
      if (c == t) continue;
      auto s = s0;
      s.cx(c, t);
      VectorXcd expect(s0.dim());
      for (std::size_t i = 0; i < s0.dim(); ++i) {
        const std::size_t j = ((i >> c) & 1) ? i ^ (std::size_t{1} << t) : i;
        expect[j] = s0[i];
      }
      expect_state_eq(s, expect);
    }
  }
}

TEST(PureState, CxRejectsBadQubits) {
  auto s = PureState::zero(2);
  EXPECT_THROW(s.cx(0, 0), IndexError);
  EXPECT_THROW(s.cx(0, 2), IndexError);
  EXPECT_THROW(s.ry(-1, 0.1), IndexError);
}

TEST(PureState, CryIsControlledRy) {
  const int nq = 2;
  const auto s0 = test_state(nq);
  auto s = s0;
  s.cry(1, 0, 0.9);
  // |0><0|_1 (x) I + |1><1|_1 (x) Ry
  MatrixXcd u = MatrixXcd::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 1) = 1;
  const auto r = ry_mat(0.9);
  u.block(2, 2, 2, 2) = r;
  expect_state_eq(s, u * to_vec(s0));
}

TEST(PureState, ApplyUnitaryTargetOrder) {
  // A two-qubit unitary on targets {2, 0}: targets[0] is the low bit.
  const int nq = 3;
  const auto s0 = test_state(nq);
  MatrixXcd u(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) u(r, c) = Complex(std::cos(r + 2.0 * c), std::sin(r * c + 1.0));
  const Eigen::HouseholderQR<MatrixXcd> qr(u);
  const MatrixXcd q = qr.householderQ();
  auto s = s0;
  const std::vector<int> targets = {2, 0};
  s.apply_unitary(targets, q);
  VectorXcd expect = VectorXcd::Zero(8);
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t sub = ((i >> 2) & 1) | (((i >> 0) & 1) << 1);
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t j = (i & 0b010) | ((k & 1) << 2) | ((k >> 1) & 1);
      expect[j] += q(k, sub) * s0[i];
    }
  }
  expect_state_eq(s, expect);
}

TEST(PureState, ControlledUnitaryActsOnBranchOnly) {
  const int nq = 3;
  const auto s0 = test_state(nq);
  auto s = s0;
  const std::vector<int> targets = {0, 1};
  apply_controlled_unitary(
      s, 2, 1, [](PureState& r) { r.ry(0, 0.4).cx(0, 1); }, targets);
  // Oracle: build the 2-qubit unitary and apply it to the upper half.
  MatrixXcd u(4, 4);
  for (int c = 0; c < 4; ++c) {
    std::vector<Complex> basis(4);
    basis[c] = 1;
    auto b = PureState::from_amplitudes(basis);
    b.ry(0, 0.4).cx(0, 1);
    for (int r = 0; r < 4; ++r) u(r, c) = b[r];
  }
  VectorXcd v = to_vec(s0);
  VectorXcd expect = v;
  expect.tail(4) = u * v.tail(4);
  expect_state_eq(s, expect);
  EXPECT_THROW(apply_controlled_unitary(s, 0, 1, [](PureState&) {}, targets), IndexError);
}

TEST(PureState, GatesPreserveNorm) {
  auto s = test_state(4);
  for (int k = 0; k < 20; ++k) {
    s.ry(k % 4, 0.1 * k).rz((k + 1) % 4, 0.3 * k).h((k + 2) % 4).cx(k % 4, (k + 3) % 4);
  }
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(PureState, MarginalAndOverlap) {
  auto s = PureState::zero(2);
  s.ry(1, 2 * std::asin(std::sqrt(0.3)));
  EXPECT_NEAR(marginal_probability(s, 1, 1), 0.3, 1e-14);
  EXPECT_NEAR(marginal_probability(s, 0, 0), 1.0, 1e-14);
  const auto t = PureState::zero(2);
  EXPECT_NEAR(overlap_abs(s, t), std::sqrt(0.7), 1e-14);
  EXPECT_NEAR(std::abs(inner_product(s, s)), 1.0, 1e-14);
}

TEST(PureState, SampleStateDeterministic) {
  auto s = test_state(3);
  const auto a = sample_state(s, 1000, 11);
  EXPECT_EQ(a, sample_state(s, 1000, 11));
  std::uint64_t total = 0;
  for (auto c : a) total += c;
  EXPECT_EQ(total, 1000u);
}

}  // namespace
}  // namespace qae
