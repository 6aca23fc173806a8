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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace metavqt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

/// Largest elementwise |A - A^dagger|.
double hermiticity_error(const ComplexMatrix& m);

/// Pure state over n qubits. Qubit 0 is the most significant bit of the
/// basis index.
class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(std::size_t n_qubits);
  /// Takes ownership of amplitudes; length must be 2^n and the norm must be 1
  /// within `norm_tol`.
  StateVector(std::size_t n_qubits, ComplexVector amplitudes,
              double norm_tol = 1e-10);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(amplitudes_.size());
  }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  ComplexVector& mutable_amplitudes() noexcept { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  std::size_t n_qubits_;
  ComplexVector amplitudes_;
};

/// Mixed state over n qubits. Construction validates Hermiticity, unit trace
/// and positivity.
class DensityMatrix {
 public:
  DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix);

  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);
  /// Computational basis projector |index><index|.
  static DensityMatrix basis_state(std::size_t n_qubits, std::size_t index);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  struct Unchecked {};
  DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix, Unchecked);
  friend DensityMatrix partial_trace(const DensityMatrix&,
                                     std::span<const std::size_t>);
  friend DensityMatrix partial_trace(const StateVector&,
                                     std::span<const std::size_t>);
  friend DensityMatrix reduce_leading(const StateVector&, std::size_t);

  std::size_t n_qubits_;
  ComplexMatrix matrix_;
};

struct Spectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // orthonormal columns
};

Spectrum hermitian_eig(const ComplexMatrix& m, double tol = kHermitianTol);

/// Eigenvalues only; same checks as hermitian_eig.
RealVector hermitian_eigenvalues(const ComplexMatrix& m,
                                 double tol = kHermitianTol);

/// V diag(exp(scale * lambda)) V^dagger.
ComplexMatrix expm_hermitian(const ComplexMatrix& m, double scale);

/// Reduced state on the `keep` qubits, ordered ascending.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> keep);
DensityMatrix partial_trace(const StateVector& psi,
                            std::span<const std::size_t> keep);

/// Reduced state on qubits [0, n_keep) of a pure state, traced over the
/// trailing register. Fast path of partial_trace.
DensityMatrix reduce_leading(const StateVector& psi, std::size_t n_keep);

inline constexpr double kEntropyClamp = 1e-12;

/// -sum lambda ln lambda in nats, eigenvalues below 1e-12 treated as 0.
double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 1/2 Tr|rho - sigma|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

struct KlOptions {
  double floor = 1e-12;
  bool flooring = true;
  double normalization_tol = 1e-9;
};

/// sum_i p_i ln(p_i / q_i), terms with p_i = 0 contribute 0.
double kl_divergence(std::span<const double> p, std::span<const double> q,
                     const KlOptions& options = {});

}  // namespace metavqt
