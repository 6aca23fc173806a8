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

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "metavqt/rng.hpp"

namespace metavqt {

/// Fully connected network: sigmoid on hidden layers, identity output.
class Mlp {
 public:
  /// All weights and biases zero. layer_sizes = {input, hidden..., output}.
  explicit Mlp(std::vector<std::size_t> layer_sizes);
  /// Weights uniform in +-1/sqrt(fan_in), biases zero.
  static Mlp random(std::vector<std::size_t> layer_sizes, Rng& rng);

  const std::vector<std::size_t>& layer_sizes() const noexcept { return sizes_; }
  std::size_t input_size() const noexcept { return sizes_.front(); }
  std::size_t output_size() const noexcept { return sizes_.back(); }
  std::size_t n_layers() const noexcept { return weights_.size(); }
  std::size_t n_params() const noexcept;

  const Eigen::MatrixXd& weight(std::size_t layer) const { return weights_.at(layer); }
  const Eigen::VectorXd& bias(std::size_t layer) const { return biases_.at(layer); }
  Eigen::MatrixXd& weight(std::size_t layer) { return weights_.at(layer); }
  Eigen::VectorXd& bias(std::size_t layer) { return biases_.at(layer); }

  /// Throws ShapeMismatch if |h| differs from the input width.
  std::vector<double> forward(std::span<const double> h) const;

  struct Gradients {
    std::vector<double> params;  // flatten() order
    std::vector<double> input;
  };
  /// Pulls dL/d(output) back to the parameters and the input.
  Gradients backward(std::span<const double> h,
                     std::span<const double> output_grad) const;

  /// Layer by layer: weights row-major, then biases.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> values);

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  Eigen::VectorXd check_input(std::span<const double> h) const;

  std::vector<std::size_t> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace metavqt
