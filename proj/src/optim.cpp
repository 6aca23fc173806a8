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

#include "metavqt/optim.hpp"

#include <cmath>
#include <string>

#include "metavqt/error.hpp"
#include "metavqt/parallel.hpp"

namespace metavqt {

AdamState::AdamState(std::size_t n_params, double lr_)
    : m(n_params, 0.0), v(n_params, 0.0), lr(lr_) {
  if (!(lr_ > 0.0)) fail(Errc::kConfigInvalid, "learning rate must be positive");
}

void adam_step(AdamState& s, std::span<double> params,
               std::span<const double> grads) {
  if (params.size() != s.m.size() || grads.size() != s.m.size()) {
    fail(Errc::kLengthMismatch,
         "adam_step: state has " + std::to_string(s.m.size()) +
             " entries, params " + std::to_string(params.size()) +
             ", grads " + std::to_string(grads.size()));
  }
  ++s.step;
  const double t = static_cast<double>(s.step);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g;
    s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g * g;
    const double m_hat = s.m[i] / c1;
    const double v_hat = s.v[i] / c2;
    params[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.eps);
  }
}

std::vector<double> grad_central_diff(const LossFn& loss,
                                      std::span<const double> params,
                                      double step, std::size_t threads) {
  if (!(step > 0.0)) fail(Errc::kConfigInvalid, "finite-difference step must be positive");
  const std::size_t n = params.size();
  const std::vector<double> base(params.begin(), params.end());
  const auto probes = parallel_map(
      2 * n,
      [&](std::size_t k) {
        std::vector<double> p = base;
        p[k / 2] += (k % 2 == 0) ? step : -step;
        const double value = loss(p);
        if (!std::isfinite(value)) {
          fail(Errc::kNonFiniteLoss,
               "loss is not finite at probe of coordinate " + std::to_string(k / 2));
        }
        return value;
      },
      threads);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = (probes[2 * i] - probes[2 * i + 1]) / (2.0 * step);
  }
  return g;
}

}  // namespace metavqt
