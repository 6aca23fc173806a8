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

#include "metavqt/mlp.hpp"

#include <cmath>
#include <string>

#include "metavqt/error.hpp"

namespace metavqt {
namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) fail(Errc::kShapeMismatch, "network needs input and output layers");
  for (auto s : sizes_) {
    if (s == 0) fail(Errc::kShapeMismatch, "layer widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes_[l]);
    weights_.push_back(Eigen::MatrixXd::Zero(rows, cols));
    biases_.push_back(Eigen::VectorXd::Zero(rows));
  }
}

Mlp Mlp::random(std::vector<std::size_t> layer_sizes, Rng& rng) {
  Mlp net(std::move(layer_sizes));
  for (auto& w : net.weights_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-bound, bound);
    }
  }
  return net;
}

std::size_t Mlp::n_params() const noexcept {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Eigen::VectorXd Mlp::check_input(std::span<const double> h) const {
  if (h.size() != input_size()) {
    fail(Errc::kShapeMismatch, "network expects " + std::to_string(input_size()) +
                                   " inputs, got " + std::to_string(h.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
}

std::vector<double> Mlp::forward(std::span<const double> h) const {
  Eigen::VectorXd a = check_input(h);
  const std::size_t last = weights_.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    Eigen::VectorXd z = weights_[l] * a + biases_[l];
    a = (l == last) ? z : sigmoid(z);
  }
  return {a.data(), a.data() + a.size()};
}

Mlp::Gradients Mlp::backward(std::span<const double> h,
                             std::span<const double> output_grad) const {
  if (output_grad.size() != output_size()) {
    fail(Errc::kShapeMismatch, "output gradient has wrong length");
  }
  const std::size_t L = weights_.size();
  std::vector<Eigen::VectorXd> acts{check_input(h)};
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::VectorXd z = weights_[l] * acts.back() + biases_[l];
    acts.push_back(l + 1 == L ? z : sigmoid(z));
  }
  std::vector<Eigen::MatrixXd> dw(L);
  std::vector<Eigen::VectorXd> db(L);
  Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(
      output_grad.data(), static_cast<Eigen::Index>(output_grad.size()));
  for (std::size_t l = L; l-- > 0;) {
    dw[l] = delta * acts[l].transpose();
    db[l] = delta;
    delta = weights_[l].transpose() * delta;
    if (l > 0) {
      const Eigen::VectorXd& s = acts[l];
      delta = delta.cwiseProduct(s.cwiseProduct(Eigen::VectorXd::Ones(s.size()) - s));
    }
  }
  Gradients g;
  g.params.reserve(n_params());
  for (std::size_t l = 0; l < L; ++l) {
    for (Eigen::Index r = 0; r < dw[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < dw[l].cols(); ++c) g.params.push_back(dw[l](r, c));
    }
    for (Eigen::Index r = 0; r < db[l].size(); ++r) g.params.push_back(db[l](r));
  }
  g.input.assign(delta.data(), delta.data() + delta.size());
  return g;
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> out;
  out.reserve(n_params());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) out.push_back(weights_[l](r, c));
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) out.push_back(biases_[l](r));
  }
  return out;
}

void Mlp::unflatten(std::span<const double> values) {
  if (values.size() != n_params()) {
    fail(Errc::kShapeMismatch, "parameter vector has " + std::to_string(values.size()) +
                                   " entries, network has " + std::to_string(n_params()));
  }
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) weights_[l](r, c) = values[k++];
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) biases_[l](r) = values[k++];
  }
}

bool operator==(const Mlp& a, const Mlp& b) {
  return a.sizes_ == b.sizes_ && a.flatten() == b.flatten();
}

}  // namespace metavqt
