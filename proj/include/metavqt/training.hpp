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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metavqt/circuit.hpp"
#include "metavqt/family.hpp"
#include "metavqt/linalg.hpp"
#include "metavqt/mlp.hpp"
#include "metavqt/rng.hpp"

namespace metavqt {

using ParamGrid = std::vector<std::vector<double>>;

enum class GradientMethod { kCentralDifference, kAdjoint };

std::string_view gradient_method_name(GradientMethod m);
GradientMethod gradient_method_from_name(std::string_view name);

/// A trained (or initial) state preparer: circuit, trainable store and an
/// optional network that supplies the external angles from h.
class Preparer {
 public:
  Preparer(AnsatzSpec spec, std::vector<double> trainables,
           std::optional<Mlp> mlp = std::nullopt);

  const AnsatzSpec& spec() const noexcept { return program_.spec(); }
  const CircuitProgram& program() const noexcept { return program_; }
  const std::vector<double>& trainables() const noexcept { return trainables_; }
  const std::optional<Mlp>& mlp() const noexcept { return mlp_; }

  std::vector<double> externals(std::span<const double> h) const;
  StateVector state(std::span<const double> h) const;
  /// Reduced system state for Hamiltonian parameters h.
  DensityMatrix prepare(std::span<const double> h) const;

  friend bool operator==(const Preparer& a, const Preparer& b) {
    return a.spec() == b.spec() && a.trainables_ == b.trainables_ &&
           a.mlp_ == b.mlp_;
  }

 private:
  CircuitProgram program_;
  std::vector<double> trainables_;
  std::optional<Mlp> mlp_;
};

using StatePreparer = std::function<DensityMatrix(std::span<const double>)>;

inline constexpr double kSlopeInitScale = 0.1;

/// Circuit angles uniform in (-pi, pi); encoding slopes (the weights that
/// multiply h) uniform in (-kSlopeInitScale, kSlopeInitScale).
std::vector<double> random_trainables(const AnsatzSpec& spec, Rng& rng);

/// Same gate list with every External(k) replaced by Trainable(k). The
/// input must have no trainable slots.
AnsatzSpec externals_as_trainables(const AnsatzSpec& spec);

struct MetaTrainConfig {
  HamiltonianFamily family = HamiltonianFamily::tfim(2);
  double beta = 1.0;
  ParamGrid h_train;
  std::size_t epochs = 500;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::size_t su2_layers = 2;
  std::size_t hva_layers = 2;
  /// Defaults to the system size.
  std::optional<std::size_t> n_ancilla;
  /// NN variant only.
  std::vector<std::size_t> hidden_sizes = {16, 16, 16};
  double grad_step = 1e-4;
  GradientMethod gradient = GradientMethod::kCentralDifference;
  std::size_t threads = 1;
  std::function<void(std::size_t epoch, double loss)> on_epoch;

  std::size_t ancillas() const { return n_ancilla.value_or(family.n_qubits()); }
  /// Throws ConfigInvalid listing every problem.
  void validate(bool nn) const;
};

struct TrainReport {
  std::string algorithm;
  HamiltonianFamily family;
  double beta;
  ParamGrid h_train;
  std::vector<double> loss_history;
  Preparer preparer;
  double wall_time_s = 0.0;
  /// Free energy of the prepared state at each training point after the
  /// last update.
  std::vector<double> final_free_energies;
};

/// Free energy of the circuit's reduced state for one parameter point.
double point_free_energy(const CircuitProgram& program,
                         std::span<const double> trainables,
                         std::span<const double> externals,
                         const PauliSum& hamiltonian,
                         std::span<const double> h, double beta);

/// Sum over h_train of the free energy of the prepared reduced state.
double global_loss(const AnsatzSpec& spec, std::span<const double> trainables,
                   const HamiltonianFamily& family, const ParamGrid& h_train,
                   double beta, std::size_t threads = 1);

/// Exact derivative of point_free_energy with respect to every trainable
/// and external slot (adjoint differentiation of the circuit). Returns the
/// free energy.
double point_free_energy_gradient(const CircuitProgram& program,
                                  std::span<const double> trainables,
                                  std::span<const double> externals,
                                  const ComplexMatrix& hamiltonian,
                                  std::span<const double> h, double beta,
                                  std::span<double> trainable_grads,
                                  std::span<double> external_grads);

TrainReport train_meta_vqt(const MetaTrainConfig& config);
TrainReport train_nn_meta_vqt(const MetaTrainConfig& config);

struct VqtConfig {
  double beta = 1.0;
  std::size_t epochs = 100;
  double lr = 0.01;
  double grad_step = 1e-4;
  GradientMethod gradient = GradientMethod::kCentralDifference;
  std::size_t threads = 1;
};

struct VqtReport {
  std::vector<double> h;
  std::vector<double> loss_history;
  /// Circuit with External angles turned into trainables when the initial
  /// preparer carried a network.
  AnsatzSpec spec;
  std::vector<double> trainables;
  double free_energy;
  double exact_free_energy;
  double fidelity;
  double trace_distance;
};

/// Single-point VQT at fixed h starting from `init`.
VqtReport train_vqt_single(const HamiltonianFamily& family,
                           std::span<const double> h, const Preparer& init,
                           const VqtConfig& config);

struct EvalPoint {
  std::vector<double> h;
  double fidelity;
  double trace_distance;
  double free_energy;
  double exact_free_energy;
  /// NaN when |exact_free_energy| < 1e-9 (degenerate denominator).
  double rel_error;
  bool degenerate_denominator;
};

struct EvalSummary {
  double mean_fidelity;
  double min_fidelity;
  double mean_trace_distance;
  double std_trace_distance;
  double max_rel_error;
  double mean_rel_error;
};

std::vector<EvalPoint> evaluate_on_grid(const StatePreparer& preparer,
                                        const HamiltonianFamily& family,
                                        const ParamGrid& h_test, double beta,
                                        std::size_t threads = 1);
std::vector<EvalPoint> evaluate_on_grid(const Preparer& preparer,
                                        const HamiltonianFamily& family,
                                        const ParamGrid& h_test, double beta,
                                        std::size_t threads = 1);
EvalSummary summarize(const std::vector<EvalPoint>& points);

/// n points evenly spaced over [lo, hi], each a one-element vector.
ParamGrid uniform_grid(double lo, double hi, std::size_t n);
/// Cartesian product of two one-dimensional grids, first axis outermost.
ParamGrid product_grid(std::span<const double> first, std::span<const double> second);
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace metavqt
