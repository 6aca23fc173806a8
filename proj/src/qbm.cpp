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

#include "metavqt/qbm.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "metavqt/error.hpp"
#include "metavqt/parallel.hpp"
#include "metavqt/rng.hpp"
#include "metavqt/thermal.hpp"

namespace metavqt {

std::vector<double> visible_distribution(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  std::vector<double> p(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    p[static_cast<std::size_t>(i)] = std::max(m(i, i).real(), 0.0);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    fail(Errc::kInvalidDensityMatrix, "diagonal does not sum to one");
  }
  return p;
}

double qbm_loss(std::span<const double> p_target, const DensityMatrix& rho_model) {
  const auto q = visible_distribution(rho_model);
  return kl_divergence(p_target, q);
}

QbmReport train_qbm(const QbmConfig& cfg, const Preparer& preparer) {
  const std::size_t dim = cfg.family.param_dim();
  if (preparer.spec().n_system() != cfg.family.n_qubits() ||
      preparer.spec().param_dim() != dim) {
    fail(Errc::kCheckpointMismatch,
         "preparer does not fit family " + cfg.family.name());
  }
  if (cfg.p_target.size() != (std::size_t{1} << cfg.family.n_qubits())) {
    fail(Errc::kDimensionMismatch, "target distribution has wrong length");
  }
  const double mass = std::accumulate(cfg.p_target.begin(), cfg.p_target.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-9) fail(Errc::kNotNormalized, "target does not sum to one");
  if (!(cfg.lr > 0.0) || !(cfg.grad_step > 0.0) || !(cfg.beta > 0.0)) {
    fail(Errc::kConfigInvalid, "lr, grad_step and beta must be positive");
  }

  QbmReport report;
  std::vector<double> coeffs;
  if (cfg.init) {
    if (cfg.init->size() != dim) fail(Errc::kConfigInvalid, "initial coefficients have wrong length");
    coeffs = *cfg.init;
  } else {
    Rng rng = Rng(cfg.seed).split("qbm/init");
    for (std::size_t k = 0; k < dim; ++k) coeffs.push_back(rng.uniform(-1.0, 1.0));
  }
  report.initial_coefficients = coeffs;

  const std::size_t n_eval = 1 + 2 * dim;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto rhos = parallel_map(
        n_eval,
        [&](std::size_t k) {
          std::vector<double> x = coeffs;
          if (k > 0) x[(k - 1) / 2] += ((k - 1) % 2 == 0) ? cfg.grad_step : -cfg.grad_step;
          return preparer.prepare(x);
        },
        cfg.threads);
    report.preparer_invocations += n_eval;

    std::vector<double> losses;
    for (const auto& rho : rhos) {
      const double l = qbm_loss(cfg.p_target, rho);
      if (!std::isfinite(l)) {
        fail(Errc::kNonFiniteLoss, "KL loss not finite at epoch " + std::to_string(epoch));
      }
      losses.push_back(l);
    }
    const ThermalPoint exact = exact_gibbs(cfg.family.build(coeffs), cfg.beta);
    report.kl_history.push_back(losses[0]);
    report.trace_distance_history.push_back(trace_distance(rhos[0], exact.gibbs_state));
    report.coefficient_history.push_back(coeffs);
    report.final_p_model = visible_distribution(rhos[0]);
    for (std::size_t k = 0; k < dim; ++k) {
      const double g = (losses[1 + 2 * k] - losses[2 + 2 * k]) / (2.0 * cfg.grad_step);
      coeffs[k] -= cfg.lr * g;
    }
  }
  report.final_coefficients = coeffs;
  return report;
}

}  // namespace metavqt
