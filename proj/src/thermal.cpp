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

#include "metavqt/thermal.hpp"

#include <cmath>
#include <sstream>

#include "metavqt/error.hpp"
#include "metavqt/io.hpp"

namespace metavqt {
namespace {

void require_positive_temperature(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    fail(Errc::kNonPositiveBeta, "temperature must be positive and finite");
  }
}

PauliSum total_z(std::size_t n) {
  std::vector<PauliString> terms;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Pauli> l(n, Pauli::I);
    l[i] = Pauli::Z;
    terms.emplace_back(1.0, std::move(l));
  }
  return PauliSum(n, std::move(terms));
}

}  // namespace

ThermalPoint exact_gibbs_dense(const ComplexMatrix& h, std::size_t n_qubits,
                               double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "beta must be positive and finite, got " << beta;
    fail(Errc::kNonPositiveBeta, os.str());
  }
  const Spectrum s = hermitian_eig(h);
  const double e0 = s.eigenvalues[0];
  RealVector weights =
      (-beta * (s.eigenvalues.array() - e0)).exp().matrix();
  const double shifted_sum = weights.sum();
  weights /= shifted_sum;
  const double log_z = -beta * e0 + std::log(shifted_sum);
  ComplexMatrix rho =
      s.eigenvectors * weights.asDiagonal() * s.eigenvectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return ThermalPoint{beta, DensityMatrix(n_qubits, std::move(rho)),
                      std::exp(log_z), log_z, -log_z / beta};
}

ThermalPoint exact_gibbs(const PauliSum& hs, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "beta must be positive and finite, got " << beta;
    fail(Errc::kNonPositiveBeta, os.str());
  }
  return exact_gibbs_dense(to_dense(hs), hs.n_qubits(), beta);
}

double free_energy_of_state(const DensityMatrix& rho, const PauliSum& hs,
                            double T) {
  require_positive_temperature(T);
  return expectation(hs, rho) - T * von_neumann_entropy(rho);
}

double magnetization(const HamiltonianFamily& family, double h, double T) {
  if (family.param_dim() != 1) {
    fail(Errc::kConfigInvalid,
         "magnetization needs a one-parameter family, " + family.name() +
             " has " + std::to_string(family.param_dim()));
  }
  require_positive_temperature(T);
  const double params[] = {h};
  const ThermalPoint tp = exact_gibbs(family.build(params), 1.0 / T);
  return expectation(total_z(family.n_qubits()), tp.gibbs_state);
}

double susceptibility(const HamiltonianFamily& family, double h, double T,
                      double dh) {
  if (!(dh > 0.0 && dh <= 0.1)) {
    std::ostringstream os;
    os << "field step must be in (0, 0.1], got " << dh;
    fail(Errc::kConfigInvalid, os.str());
  }
  return (magnetization(family, h + dh, T) - magnetization(family, h - dh, T)) /
         (2.0 * dh);
}

std::vector<double> default_temperature_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.02 * i);
  return grid;
}

SusceptibilityScan scan_susceptibility(const HamiltonianFamily& family,
                                       double h,
                                       std::span<const double> T_grid,
                                       double dh) {
  if (T_grid.empty()) fail(Errc::kEmptyGrid, "temperature grid is empty");
  if (T_grid.size() < 5) {
    fail(Errc::kInvalidGrid, "temperature grid needs at least 5 points");
  }
  for (std::size_t i = 1; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > T_grid[i - 1])) {
      fail(Errc::kInvalidGrid, "temperature grid must be strictly ascending");
    }
  }
  SusceptibilityScan scan{h, {T_grid.begin(), T_grid.end()}, {}, 0};
  scan.chi.reserve(T_grid.size());
  for (double T : T_grid) scan.chi.push_back(susceptibility(family, h, T, dh));
  for (std::size_t i = 1; i < scan.chi.size(); ++i) {
    if (scan.chi[i] > scan.chi[scan.argmax]) scan.argmax = i;
  }
  return scan;
}

double crossover_temperature(const HamiltonianFamily& family, double h,
                             std::span<const double> T_grid, double dh) {
  return scan_susceptibility(family, h, T_grid, dh).crossover_temperature();
}

void write_susceptibility_csv(const std::filesystem::path& path,
                              std::span<const SusceptibilityScan> scans) {
  CsvTable t{{"h", "T", "chi"}, {}};
  for (const auto& s : scans) {
    for (std::size_t i = 0; i < s.temperatures.size(); ++i) {
      t.rows.push_back({s.h, s.temperatures[i], s.chi[i]});
    }
  }
  write_file_atomic(path, t.to_string());
}

void write_crossover_csv(const std::filesystem::path& path,
                         std::span<const SusceptibilityScan> scans) {
  CsvTable t{{"h", "T_star", "interior"}, {}};
  for (const auto& s : scans) {
    t.rows.push_back(
        {s.h, s.crossover_temperature(), s.interior_maximum() ? 1.0 : 0.0});
  }
  write_file_atomic(path, t.to_string());
}

}  // namespace metavqt
