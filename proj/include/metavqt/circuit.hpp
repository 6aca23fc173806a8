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
#include <span>
#include <variant>
#include <vector>

#include "metavqt/family.hpp"
#include "metavqt/linalg.hpp"
#include "metavqt/pauli.hpp"

namespace metavqt {

// Gate conventions: RX/RY/RZ(a) = exp(-i a P / 2) for the single-qubit
// Pauli P, PauliRotation(a) = exp(-i a P) for a full-register string P.

enum class GateKind { kRY, kRZ, kRX, kCNOT, kPauliRotation };

/// Angle read directly from the trainable store.
struct TrainableAngle {
  std::size_t slot;
  friend bool operator==(const TrainableAngle&, const TrainableAngle&) = default;
};

/// Angle sum_k (w_k h^k + b_k), weights and biases in the trainable store.
struct EncodedAngle {
  std::vector<std::size_t> weight_slots;
  std::vector<std::size_t> bias_slots;
  friend bool operator==(const EncodedAngle&, const EncodedAngle&) = default;
};

/// Angle supplied from outside the circuit, e.g. by a neural network.
struct ExternalAngle {
  std::size_t slot;
  friend bool operator==(const ExternalAngle&, const ExternalAngle&) = default;
};

using AngleSource =
    std::variant<std::monostate, TrainableAngle, EncodedAngle, ExternalAngle>;

struct GateOp {
  GateKind kind;
  /// Single-qubit rotations: {qubit}. CNOT: {control, target}.
  /// PauliRotation: qubits where `letters` is not I.
  std::vector<std::size_t> targets;
  /// PauliRotation only; one letter per register qubit.
  std::vector<Pauli> letters;
  AngleSource angle;

  static GateOp rotation(GateKind kind, std::size_t qubit, AngleSource angle);
  static GateOp cnot(std::size_t control, std::size_t target);
  static GateOp pauli_rotation(std::vector<Pauli> letters, AngleSource angle);

  bool parameterized() const noexcept {
    return !std::holds_alternative<std::monostate>(angle);
  }
  friend bool operator==(const GateOp&, const GateOp&) = default;
};

enum class AngleMode { kTrainable, kExternal };

/// Gate program over n_system + n_ancilla qubits (system on the leading
/// indices) plus the sizes of the stores its angles read from.
class AnsatzSpec {
 public:
  AnsatzSpec(std::size_t n_system, std::size_t n_ancilla,
             std::size_t param_dim);

  std::size_t n_system() const noexcept { return n_system_; }
  std::size_t n_ancilla() const noexcept { return n_ancilla_; }
  std::size_t n_total() const noexcept { return n_system_ + n_ancilla_; }
  std::size_t param_dim() const noexcept { return param_dim_; }
  std::size_t n_trainable() const noexcept { return n_trainable_; }
  std::size_t n_external() const noexcept { return n_external_; }
  const std::vector<GateOp>& gates() const noexcept { return gates_; }

  /// Appends a gate, growing the store sizes to cover its slots.
  void add_gate(GateOp gate);
  /// Appends a fragment on the same register, renumbering its slots after
  /// the ones already in use.
  void append(const AnsatzSpec& fragment);

  /// Throws SlotMismatch or BadTarget on any broken invariant.
  void validate() const;

  friend bool operator==(const AnsatzSpec&, const AnsatzSpec&) = default;

 private:
  std::size_t n_system_;
  std::size_t n_ancilla_;
  std::size_t param_dim_;
  std::size_t n_trainable_ = 0;
  std::size_t n_external_ = 0;
  std::vector<GateOp> gates_;
};

/// CNOT(i -> i+1) for i = 0 .. n_tot-2.
AnsatzSpec build_cnot_chain(std::size_t n_tot);

/// `layers` x (RZ then RY on every qubit with encoded angles, then a CNOT
/// chain). Uses exactly 4 * n_tot * layers * param_dim trainable slots.
AnsatzSpec build_su2_encoding(std::size_t n_tot, std::size_t layers,
                              std::size_t param_dim);

/// Same layout as the encoding, each angle a single trainable or external
/// slot.
AnsatzSpec build_su2_layers(std::size_t n_tot, std::size_t layers,
                            AngleMode mode);

/// Places the pattern's terms over an n_tot-wire chain: terms spanning at
/// most two adjacent wires slide over every offset; longer string terms are
/// tiled in consecutive system-sized blocks. Duplicates are dropped; order
/// follows the pattern.
std::vector<std::vector<Pauli>> tile_pattern(const PauliSum& pattern,
                                             std::size_t n_tot);

/// One PauliRotation per tiled term, each with its own angle, then a CNOT
/// chain.
AnsatzSpec build_hva_layer(const PauliSum& pattern, std::size_t n_tot,
                           AngleMode mode = AngleMode::kTrainable);

/// Encoding layers followed by HVA layers, every angle trainable.
AnsatzSpec meta_vqt_ansatz(const HamiltonianFamily& family,
                           std::size_t encoding_layers,
                           std::size_t hva_layers, std::size_t n_ancilla);

/// SU2 layers followed by HVA layers, every angle external.
AnsatzSpec nn_meta_vqt_ansatz(const HamiltonianFamily& family,
                              std::size_t su2_layers, std::size_t hva_layers,
                              std::size_t n_ancilla);

/// Angle of every gate (0 for CNOT).
std::vector<double> resolve_angles(const AnsatzSpec& spec,
                                   std::span<const double> trainables,
                                   std::span<const double> externals,
                                   std::span<const double> h);

void apply_gate_inplace(StateVector& state, const GateOp& gate, double angle);
StateVector apply_gate(StateVector state, const GateOp& gate, double angle);

/// Runs the circuit on |0...0>.
StateVector simulate(const AnsatzSpec& spec, std::span<const double> trainables,
                     std::span<const double> externals,
                     std::span<const double> h);

/// Trace over the trailing ancilla register.
DensityMatrix reduced_state(const StateVector& psi, std::size_t n_system);

/// Precompiled form of an AnsatzSpec for repeated simulation and adjoint
/// differentiation.
class CircuitProgram {
 public:
  explicit CircuitProgram(const AnsatzSpec& spec);

  const AnsatzSpec& spec() const noexcept { return spec_; }

  StateVector run(std::span<const double> angles) const;

  /// d<psi|O (x) I|psi>/d angle_k for every gate k (0 for CNOT), with O
  /// acting on the system register and psi = run(angles).
  std::vector<double> angle_gradient(std::span<const double> angles,
                                     const StateVector& psi,
                                     const ComplexMatrix& system_observable) const;

  /// Chain rule from per-gate angle gradients to the trainable and external
  /// stores; adds into the outputs.
  void accumulate_slot_gradients(std::span<const double> gate_gradients,
                                 std::span<const double> h,
                                 std::span<double> trainable_grads,
                                 std::span<double> external_grads) const;

 private:
  struct Step {
    bool is_cnot;
    PauliMasks masks;
    double angle_scale;
    std::uint64_t control_bit;
    std::uint64_t target_bit;
  };
  void apply(ComplexVector& amps, const Step& step, double angle) const;

  AnsatzSpec spec_;
  std::vector<Step> steps_;
};

}  // namespace metavqt
