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

#include <filesystem>
#include <span>
#include <vector>

#include "metavqt/family.hpp"
#include "metavqt/linalg.hpp"
#include "metavqt/pauli.hpp"

namespace metavqt {

/// Exact thermal equilibrium of a Hamiltonian at inverse temperature beta
/// (k_B = 1).
struct ThermalPoint {
  double beta;
  DensityMatrix gibbs_state;
  double partition_fn;  // may overflow to inf at large beta*|E0|
  double log_partition_fn;
  double free_energy;
};

ThermalPoint exact_gibbs(const PauliSum& hs, double beta);
ThermalPoint exact_gibbs_dense(const ComplexMatrix& h, std::size_t n_qubits,
                               double beta);

/// <H> - T S(rho).
double free_energy_of_state(const DensityMatrix& rho, const PauliSum& hs,
                            double T);

/// <sum_i Z_i> on the exact Gibbs state of a one-parameter family.
double magnetization(const HamiltonianFamily& family, double h, double T);

inline constexpr double kDefaultFieldStep = 1e-3;

/// Central difference (M(h + dh) - M(h - dh)) / (2 dh), dh in (0, 0.1].
double susceptibility(const HamiltonianFamily& family, double h, double T,
                      double dh = kDefaultFieldStep);

/// T in {0.02, 0.04, ..., 1.0}.
std::vector<double> default_temperature_grid();

struct SusceptibilityScan {
  double h;
  std::vector<double> temperatures;
  std::vector<double> chi;
  std::size_t argmax;  // smallest index on ties

  double crossover_temperature() const { return temperatures[argmax]; }
  bool interior_maximum() const {
    return argmax > 0 && argmax + 1 < temperatures.size();
  }
};

SusceptibilityScan scan_susceptibility(const HamiltonianFamily& family,
                                       double h,
                                       std::span<const double> T_grid,
                                       double dh = kDefaultFieldStep);

/// Grid entry maximising chi(h, T); ties resolve to the smallest T.
double crossover_temperature(const HamiltonianFamily& family, double h,
                             std::span<const double> T_grid,
                             double dh = kDefaultFieldStep);

/// CSV "h,T,chi" over every scan, in input order.
void write_susceptibility_csv(const std::filesystem::path& path,
                              std::span<const SusceptibilityScan> scans);
/// CSV "h,T_star,interior".
void write_crossover_csv(const std::filesystem::path& path,
                         std::span<const SusceptibilityScan> scans);

}  // namespace metavqt
