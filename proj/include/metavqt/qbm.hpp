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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "metavqt/family.hpp"
#include "metavqt/linalg.hpp"
#include "metavqt/training.hpp"

namespace metavqt {

/// Computational-basis diagonal of rho.
std::vector<double> visible_distribution(const DensityMatrix& rho);

/// KL(p_target || diag(rho_model)).
double qbm_loss(std::span<const double> p_target, const DensityMatrix& rho_model);

struct QbmConfig {
  std::vector<double> p_target;
  HamiltonianFamily family = HamiltonianFamily::heisenberg_fields();
  double beta = 1.0;
  std::size_t epochs = 200;
  double lr = 0.1;
  double grad_step = 1e-4;
  std::uint64_t seed = 0;
  /// Starting coefficients; seeded uniform in [-1, 1] per entry if unset.
  std::optional<std::vector<double>> init;
  std::size_t threads = 1;
};

struct QbmReport {
  std::vector<double> kl_history;
  /// Trace distance between the prepared and exact Gibbs state at the
  /// coefficients of each epoch.
  std::vector<double> trace_distance_history;
  std::vector<std::vector<double>> coefficient_history;
  std::vector<double> initial_coefficients;
  std::vector<double> final_coefficients;
  /// Visible distribution at the last evaluated coefficients.
  std::vector<double> final_p_model;
  std::size_t preparer_invocations = 0;
};

/// Gradient descent on the Hamiltonian coefficients against a frozen
/// preparer: one centre evaluation plus two probes per coefficient each
/// epoch. Throws CheckpointMismatch if the preparer does not fit the family.
QbmReport train_qbm(const QbmConfig& config, const Preparer& preparer);

}  // namespace metavqt
