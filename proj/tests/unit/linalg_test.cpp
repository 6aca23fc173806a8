// Copyright 2026 The metavqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "metavqt/error.hpp"
#include "metavqt/linalg.hpp"
#include "test_util.hpp"

namespace metavqt {
namespace {

using testing::diag_state;
using testing::random_density;

const Complex kI(0.0, 1.0);

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

StateVector bell() {
  ComplexVector a = ComplexVector::Zero(4);
  a(0) = a(3) = 1.0 / std::sqrt(2.0);
  return StateVector(2, a);
}

TEST(HermitianEig, PauliSpectra) {
  for (const auto& m : {pauli_z(), pauli_x()}) {
    const auto s = hermitian_eig(m);
    EXPECT_NEAR(s.eigenvalues(0), -1.0, 1e-12);
    EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-12);
  }
}

TEST(HermitianEig, TwoByTwoRoots) {
  ComplexMatrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto s = hermitian_eig(m);
  // Roots of (2 - x)^2 - 1.
  EXPECT_NEAR(s.eigenvalues(0), 2.0 - 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues(1), 2.0 + 1.0, 1e-12);
}

TEST(HermitianEig, ReconstructsRandomMatrices) {
  std::mt19937_64 gen(7);
  for (std::size_t dim : {2u, 4u, 8u, 16u}) {
    const ComplexMatrix m = testing::random_hermitian(dim, gen);
    const auto s = hermitian_eig(m);
    for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) {
      EXPECT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
    }
    const ComplexMatrix v = s.eigenvectors;
    const ComplexMatrix back = v * s.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
    EXPECT_LE((back - m).norm(), 1e-8 * m.norm());
    EXPECT_LE((v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm(), 1e-8);
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
      EXPECT_LE((m * v.col(i) - s.eigenvalues(i) * v.col(i)).norm(), 1e-8 * m.norm());
    }
  }
}

TEST(HermitianEig, RejectsBadInput) {
  ComplexMatrix rect(2, 3);
  rect.setZero();
  ComplexMatrix skew(2, 2);
  skew << 0, 1, 0, 0;
  try {
    hermitian_eig(rect);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotSquare);
  }
  try {
    hermitian_eig(skew);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotHermitian);
  }
}

TEST(Expm, ZeroMatrixGivesIdentity) {
  const ComplexMatrix r = expm_hermitian(ComplexMatrix::Zero(4, 4), -1.0);
  EXPECT_LE((r - ComplexMatrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(Expm, DiagonalClosedForm) {
  const ComplexMatrix r = expm_hermitian(pauli_z(), -1.0);
  EXPECT_NEAR(r(0, 0).real(), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r(1, 1).real(), std::exp(1.0), 1e-12);
  EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-14);
}

TEST(Expm, PauliXTrace) {
  const ComplexMatrix r = expm_hermitian(pauli_x(), -1.0);
  EXPECT_NEAR(r.trace().real(), 2.0 * std::cosh(1.0), 1e-12);
  EXPECT_NEAR(r.trace().real(), 3.0862, 1e-4);
}

TEST(Expm, InverseProperty) {
  std::mt19937_64 gen(11);
  for (std::size_t n = 1; n <= 4; ++n) {
    const ComplexMatrix m = testing::random_hermitian(std::size_t{1} << n, gen);
    const double beta = 0.7;
    const ComplexMatrix prod = expm_hermitian(m, -beta) * expm_hermitian(m, beta);
    EXPECT_LE((prod - ComplexMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PartialTrace, BellGivesMaximallyMixed) {
  const std::size_t keep[] = {0};
  const DensityMatrix r = partial_trace(bell(), keep);
  EXPECT_LE((r.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-12);
}

TEST(PartialTrace, ProductState) {
  ComplexVector a = ComplexVector::Zero(4);
  a(1) = 1.0;  // |01>
  const std::size_t keep[] = {0};
  const DensityMatrix r = partial_trace(StateVector(2, a), keep);
  EXPECT_NEAR(r.matrix()(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r.matrix()(1, 1)), 0.0, 1e-14);
  const std::size_t keep1[] = {1};
  const DensityMatrix r1 = partial_trace(StateVector(2, a), keep1);
  EXPECT_NEAR(r1.matrix()(1, 1).real(), 1.0, 1e-14);
}

TEST(PartialTrace, GhzKeepTwo) {
  ComplexVector a = ComplexVector::Zero(8);
  a(0) = a(7) = 1.0 / std::sqrt(2.0);
  const std::size_t keep[] = {0, 1};
  const DensityMatrix r = partial_trace(DensityMatrix::from_pure(StateVector(3, a)), keep);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  EXPECT_LE((r.matrix() - expected).norm(), 1e-12);
}

TEST(PartialTrace, RejectsBadKeepSets) {
  const std::size_t out_of_range[] = {2};
  const std::size_t duplicate[] = {0, 0};
  for (auto keep : {std::span<const std::size_t>(out_of_range),
                    std::span<const std::size_t>(duplicate), std::span<const std::size_t>()}) {
    try {
      partial_trace(bell(), keep);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kIndexOutOfRange);
    }
  }
}

TEST(PartialTrace, MatchesDefinitionAndIsValid) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    const StateVector psi = testing::random_state(n, gen);
    const std::size_t keep[] = {0};
    const DensityMatrix r = partial_trace(psi, keep);
    EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_GE(hermitian_eigenvalues(r.matrix())(0), -1e-9);
  }
  // General keep set against the density-matrix path and the fast path.
  const StateVector psi = testing::random_state(4, gen);
  const std::size_t keep[] = {0, 1};
  const DensityMatrix a = partial_trace(psi, keep);
  const DensityMatrix b = partial_trace(DensityMatrix::from_pure(psi), keep);
  const DensityMatrix c = reduce_leading(psi, 2);
  EXPECT_LE((a.matrix() - b.matrix()).norm(), 1e-12);
  EXPECT_LE((a.matrix() - c.matrix()).norm(), 1e-12);
  const std::size_t keep_odd[] = {1, 3};
  const DensityMatrix d = partial_trace(psi, keep_odd);
  const DensityMatrix e = partial_trace(DensityMatrix::from_pure(psi), keep_odd);
  EXPECT_LE((d.matrix() - e.matrix()).norm(), 1e-12);
  // Direct sum over the traced qubits 0 and 2.
  const auto& amp = psi.amplitudes();
  ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int t = 0; t < 4; ++t) {
        auto idx = [](int kept, int traced) {
          const int q0 = traced >> 1, q1 = kept >> 1, q2 = traced & 1, q3 = kept & 1;
          return (q0 << 3) | (q1 << 2) | (q2 << 1) | q3;
        };
        direct(i, j) += amp(idx(i, t)) * std::conj(amp(idx(j, t)));
      }
    }
  }
  EXPECT_LE((d.matrix() - direct).norm(), 1e-12);
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(1)), std::log(2.0), 1e-12);
  std::mt19937_64 gen(5);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_pure(testing::random_state(3, gen))),
              0.0, 1e-9);
  const double expected = -0.75 * std::log(0.75) - 0.25 * std::log(0.25);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.75, 0.25})), expected, 1e-12);
  EXPECT_NEAR(expected, 0.5623, 1e-4);
}

TEST(Entropy, UnitaryInvarianceAndBounds) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const DensityMatrix rho = random_density(n, n, gen);
    const ComplexMatrix u = testing::random_unitary(rho.dim(), gen);
    const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
    const DensityMatrix r2(n, (rotated + rotated.adjoint()) / 2.0);
    const double s = von_neumann_entropy(rho);
    EXPECT_NEAR(von_neumann_entropy(r2), s, 1e-8);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, static_cast<double>(n) * std::log(2.0) + 1e-12);
  }
}

TEST(DensityMatrix, RejectsInvalid) {
  ComplexMatrix m(2, 2);
  m << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix(1, m), Error);
  m << 0.5, 0, 0, 0.6;
  EXPECT_THROW(DensityMatrix(1, m), Error);
  m << 0.5, kI, 0.0, 0.5;
  EXPECT_THROW(DensityMatrix(1, m), Error);
}

TEST(Fidelity, Examples) {
  std::mt19937_64 gen(1);
  const DensityMatrix rho = random_density(2, 2, gen);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-8);
  const auto zero = DensityMatrix::basis_state(1, 0);
  const auto one = DensityMatrix::basis_state(1, 1);
  EXPECT_NEAR(fidelity(zero, one), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, DensityMatrix::maximally_mixed(1)), 0.5, 1e-12);
  try {
    fidelity(zero, DensityMatrix::maximally_mixed(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDimensionMismatch);
  }
}

TEST(Fidelity, PureStateOverlapAndSymmetry) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a = testing::random_state(2, gen);
    const StateVector b = testing::random_state(2, gen);
    const double overlap = std::norm(a.amplitudes().dot(b.amplitudes()));
    const auto ra = DensityMatrix::from_pure(a);
    const auto rb = DensityMatrix::from_pure(b);
    EXPECT_NEAR(fidelity(ra, rb), overlap, 1e-6);
    const DensityMatrix m1 = random_density(2, 1, gen);
    const DensityMatrix m2 = random_density(2, 2, gen);
    EXPECT_NEAR(fidelity(m1, m2), fidelity(m2, m1), 1e-8);
  }
}

TEST(TraceDistance, Examples) {
  std::mt19937_64 gen(4);
  const DensityMatrix rho = random_density(2, 2, gen);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-12);
  EXPECT_NEAR(trace_distance(DensityMatrix::basis_state(1, 0), DensityMatrix::basis_state(1, 1)),
              1.0, 1e-12);
  const double expected = 0.5 * (0.37 + 0.08 + 0.08 + 0.21);
  EXPECT_NEAR(trace_distance(diag_state({0.62, 0.17, 0.17, 0.04}),
                             DensityMatrix::maximally_mixed(2)),
              expected, 1e-12);
  EXPECT_NEAR(expected, 0.37, 1e-12);
}

TEST(TraceDistance, MetricAndFidelityBounds) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix a = random_density(2, 1 + trial % 2, gen);
    const DensityMatrix b = random_density(2, 2, gen);
    const DensityMatrix c = random_density(2, 2, gen);
    const double ab = trace_distance(a, b);
    EXPECT_NEAR(ab, trace_distance(b, a), 1e-12);
    EXPECT_LE(ab, trace_distance(a, c) + trace_distance(c, b) + 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    const double f = fidelity(a, b);
    EXPECT_LE(1.0 - std::sqrt(f), ab + 1e-8);
    EXPECT_LE(ab, std::sqrt(1.0 - f) + 1e-8);
  }
}

TEST(Kl, Examples) {
  const std::vector<double> p{0.3, 0.7};
  EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-15);
  EXPECT_NEAR(kl_divergence(std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}),
              std::log(2.0), 1e-12);
  const double expected = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
  EXPECT_NEAR(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{0.75, 0.25}),
              expected, 1e-12);
  EXPECT_NEAR(expected, 0.1438, 1e-4);
}

TEST(Kl, Errors) {
  try {
    kl_divergence(std::vector<double>{0.5, 0.6}, std::vector<double>{0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotNormalized);
  }
  KlOptions strict;
  strict.flooring = false;
  try {
    kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kZeroSupport);
  }
  EXPECT_TRUE(std::isfinite(
      kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0})));
}

TEST(Kl, NonNegative) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(4), q(4);
    double sp = 0, sq = 0;
    for (int i = 0; i < 4; ++i) {
      sp += p[i] = u(gen);
      sq += q[i] = u(gen) + 1e-3;
    }
    for (int i = 0; i < 4; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    EXPECT_GE(kl_divergence(p, q), 0.0);
  }
}

}  // namespace
}  // namespace metavqt
