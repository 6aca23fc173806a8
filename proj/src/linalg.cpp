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

#include "metavqt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "metavqt/error.hpp"

namespace metavqt {
namespace {

bool is_power_of_two_dim(std::size_t dim, std::size_t n_qubits) {
  return n_qubits < 63 && dim == (std::size_t{1} << n_qubits);
}

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols() << ", expected square";
    fail(Errc::kNotSquare, os.str());
  }
}

void require_hermitian(const ComplexMatrix& m, double tol) {
  require_square(m);
  const double err = hermiticity_error(m);
  if (!(err <= tol)) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |A - A^dagger| = " << err;
    fail(Errc::kNotHermitian, os.str());
  }
}

// Symmetrised copy; removes rounding asymmetry before handing to the solver.
ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().adjoint();
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "density matrices have dimensions " << a.dim() << " and " << b.dim();
    fail(Errc::kDimensionMismatch, os.str());
  }
}

std::vector<std::size_t> validated_keep(std::span<const std::size_t> keep,
                                        std::size_t n_qubits) {
  if (keep.empty()) {
    fail(Errc::kIndexOutOfRange, "partial_trace: keep set is empty");
  }
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(Errc::kIndexOutOfRange, "partial_trace: duplicate qubit in keep set");
  }
  if (sorted.back() >= n_qubits) {
    std::ostringstream os;
    os << "partial_trace: qubit " << sorted.back() << " out of range for "
       << n_qubits << " qubits";
    fail(Errc::kIndexOutOfRange, os.str());
  }
  return sorted;
}

// Splits a full basis index into (kept index, traced index) given which
// qubits are kept. Qubit q sits at bit (n - 1 - q).
struct IndexSplit {
  std::vector<std::size_t> kept_bits;
  std::vector<std::size_t> traced_bits;

  IndexSplit(const std::vector<std::size_t>& keep, std::size_t n) {
    std::vector<bool> is_kept(n, false);
    for (std::size_t q : keep) is_kept[q] = true;
    for (std::size_t q = 0; q < n; ++q) {
      (is_kept[q] ? kept_bits : traced_bits).push_back(n - 1 - q);
    }
  }

  // Full index from a kept index k and traced index t; both use the same
  // MSB-first convention within their own registers.
  std::size_t compose(std::size_t k, std::size_t t) const {
    std::size_t full = 0;
    const std::size_t nk = kept_bits.size();
    for (std::size_t i = 0; i < nk; ++i) {
      if ((k >> (nk - 1 - i)) & 1U) full |= std::size_t{1} << kept_bits[i];
    }
    const std::size_t nt = traced_bits.size();
    for (std::size_t i = 0; i < nt; ++i) {
      if ((t >> (nt - 1 - i)) & 1U) full |= std::size_t{1} << traced_bits[i];
    }
    return full;
  }
};

}  // namespace

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits),
      amplitudes_(ComplexVector::Zero(std::size_t{1} << n_qubits)) {
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, ComplexVector amplitudes,
                         double norm_tol)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (!is_power_of_two_dim(static_cast<std::size_t>(amplitudes_.size()),
                           n_qubits_)) {
    fail(Errc::kDimensionMismatch, "state vector length is not 2^n_qubits");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > norm_tol) {
    fail(Errc::kInvalidSize, "state vector is not normalised");
  }
}

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  if (!is_power_of_two_dim(static_cast<std::size_t>(matrix_.rows()),
                           n_qubits_)) {
    fail(Errc::kInvalidDensityMatrix, "density matrix is not 2^n x 2^n");
  }
  require_square(matrix_);
  if (hermiticity_error(matrix_) > kHermitianTol) {
    fail(Errc::kInvalidDensityMatrix, "density matrix is not Hermitian");
  }
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "density matrix trace is " << trace;
    fail(Errc::kInvalidDensityMatrix, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      hermitian_part(matrix_), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()[0] < -1e-9) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << solver.eigenvalues()[0];
    fail(Errc::kInvalidDensityMatrix, os.str());
  }
}

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix matrix,
                             Unchecked)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix(psi.n_qubits(), a * a.adjoint(), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return DensityMatrix(
      n_qubits, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim),
      Unchecked{});
}

DensityMatrix DensityMatrix::basis_state(std::size_t n_qubits,
                                         std::size_t index) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (static_cast<Eigen::Index>(index) >= dim) {
    fail(Errc::kIndexOutOfRange, "basis index out of range");
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(n_qubits, std::move(m), Unchecked{});
}

Spectrum hermitian_eig(const ComplexMatrix& m, double tol) {
  require_hermitian(m, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    fail(Errc::kNotHermitian, "eigensolver did not converge");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m, double tol) {
  require_hermitian(m, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ComplexMatrix expm_hermitian(const ComplexMatrix& m, double scale) {
  const Spectrum s = hermitian_eig(m);
  RealVector factors = (scale * s.eigenvalues).array().exp().matrix();
  return s.eigenvectors * factors.asDiagonal() * s.eigenvectors.adjoint();
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> keep) {
  const auto kept = validated_keep(keep, rho.n_qubits());
  const IndexSplit split(kept, rho.n_qubits());
  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << (rho.n_qubits() - kept.size());
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk),
                                          static_cast<Eigen::Index>(dk));
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        acc += m(static_cast<Eigen::Index>(split.compose(i, t)),
                 static_cast<Eigen::Index>(split.compose(j, t)));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return DensityMatrix(kept.size(), std::move(out), DensityMatrix::Unchecked{});
}

DensityMatrix partial_trace(const StateVector& psi,
                            std::span<const std::size_t> keep) {
  const auto kept = validated_keep(keep, psi.n_qubits());
  bool leading = true;
  for (std::size_t i = 0; i < kept.size(); ++i) leading &= kept[i] == i;
  if (leading) return reduce_leading(psi, kept.size());

  const IndexSplit split(kept, psi.n_qubits());
  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << (psi.n_qubits() - kept.size());
  ComplexMatrix block(static_cast<Eigen::Index>(dk),
                      static_cast<Eigen::Index>(dt));
  for (std::size_t k = 0; k < dk; ++k) {
    for (std::size_t t = 0; t < dt; ++t) {
      block(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
          psi.amplitudes()[static_cast<Eigen::Index>(split.compose(k, t))];
    }
  }
  return DensityMatrix(kept.size(), block * block.adjoint(),
                       DensityMatrix::Unchecked{});
}

DensityMatrix reduce_leading(const StateVector& psi, std::size_t n_keep) {
  if (n_keep == 0 || n_keep > psi.n_qubits()) {
    fail(Errc::kIndexOutOfRange, "reduce_leading: invalid register split");
  }
  const auto dk = static_cast<Eigen::Index>(std::size_t{1} << n_keep);
  const auto dt =
      static_cast<Eigen::Index>(std::size_t{1} << (psi.n_qubits() - n_keep));
  using RowMajor =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> block(psi.amplitudes().data(), dk, dt);
  return DensityMatrix(n_keep, block * block.adjoint(),
                       DensityMatrix::Unchecked{});
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda > kEntropyClamp) s -= lambda * std::log(lambda);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(
      hermitian_eigenvalues(rho.matrix(), kHermitianTol));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const ComplexMatrix root = psd_sqrt(rho.matrix());
  const ComplexMatrix inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(inner),
                                                      Eigen::EigenvaluesOnly);
  const double tr = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      hermitian_part(rho.matrix() - sigma.matrix()), Eigen::EigenvaluesOnly);
  return std::clamp(0.5 * solver.eigenvalues().cwiseAbs().sum(), 0.0, 1.0);
}

double kl_divergence(std::span<const double> p, std::span<const double> q,
                     const KlOptions& options) {
  if (p.size() != q.size()) {
    fail(Errc::kDimensionMismatch, "kl_divergence: length mismatch");
  }
  for (auto dist : {p, q}) {
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    if (std::abs(total - 1.0) > options.normalization_tol) {
      std::ostringstream os;
      os << "kl_divergence: distribution sums to " << total;
      fail(Errc::kNotNormalized, os.str());
    }
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    double qi = q[i];
    if (qi < options.floor) {
      if (!options.flooring) {
        std::ostringstream os;
        os << "kl_divergence: q[" << i << "] = " << qi
           << " has no support where p > 0";
        fail(Errc::kZeroSupport, os.str());
      }
      qi = options.floor;
    }
    kl += p[i] * std::log(p[i] / qi);
  }
  return std::max(kl, 0.0);
}

}  // namespace metavqt
