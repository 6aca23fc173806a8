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
#include <functional>
#include <span>
#include <vector>

namespace metavqt {

struct AdamState {
  AdamState(std::size_t n_params, double lr);

  std::size_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
  double lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update in place. Throws LengthMismatch.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads);

using LossFn = std::function<double(std::span<const double>)>;

/// g_i = (L(p + s e_i) - L(p - s e_i)) / 2s. Probes may run on `threads`
/// workers; the result is identical to the serial one. Throws
/// NonFiniteLoss if any probe is not finite.
std::vector<double> grad_central_diff(const LossFn& loss,
                                      std::span<const double> params,
                                      double step = 1e-4,
                                      std::size_t threads = 1);

}  // namespace metavqt
