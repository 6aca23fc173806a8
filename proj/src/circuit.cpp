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

#include "metavqt/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "metavqt/error.hpp"

namespace metavqt {
namespace {

Pauli axis_of(GateKind kind) {
  switch (kind) {
    case GateKind::kRX: return Pauli::X;
    case GateKind::kRY: return Pauli::Y;
    case GateKind::kRZ: return Pauli::Z;
    default: break;
  }
  return Pauli::I;
}

std::vector<Pauli> single_qubit_letters(std::size_t n, std::size_t q,
                                        Pauli p) {
  std::vector<Pauli> l(n, Pauli::I);
  l[q] = p;
  return l;
}

void check_slots(std::size_t slot, std::size_t size, const char* store) {
  if (slot >= size) {
    std::ostringstream os;
    os << store << " slot " << slot << " outside store of size " << size;
    fail(Errc::kSlotMismatch, os.str());
  }
}

// exp(-i theta P) applied in place.
void rotate(ComplexVector& a, const PauliMasks& m, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto dim = static_cast<std::uint64_t>(a.size());
  Complex* amp = a.data();
  if (m.flip_mask == 0) {
    // Diagonal: phase is +-1 since no Y letters.
    const Complex plus(c, -s);
    const Complex minus(c, s);
    for (std::uint64_t x = 0; x < dim; ++x) {
      amp[x] *= (std::popcount(x & m.phase_mask) % 2 == 0) ? plus : minus;
    }
    return;
  }
  const std::uint64_t high = std::bit_floor(m.flip_mask);
  const Complex minus_is(0.0, -s);
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (x & high) continue;
    const std::uint64_t y = x ^ m.flip_mask;
    const Complex ax = amp[x];
    const Complex ay = amp[y];
    amp[x] = c * ax + minus_is * m.phase(y) * ay;
    amp[y] = c * ay + minus_is * m.phase(x) * ax;
  }
}

void cnot(ComplexVector& a, std::uint64_t control_bit,
          std::uint64_t target_bit) {
  const auto dim = static_cast<std::uint64_t>(a.size());
  Complex* amp = a.data();
  for (std::uint64_t x = 0; x < dim; ++x) {
    if ((x & control_bit) && !(x & target_bit)) {
      std::swap(amp[x], amp[x | target_bit]);
    }
  }
}

// <lam| P |phi>.
Complex pauli_matrix_element(const ComplexVector& lam, const ComplexVector& phi,
                             const PauliMasks& m) {
  const auto dim = static_cast<std::uint64_t>(phi.size());
  Complex acc = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) {
    const std::uint64_t y = x ^ m.flip_mask;
    acc += std::conj(lam[static_cast<Eigen::Index>(x)]) * m.phase(y) *
           phi[static_cast<Eigen::Index>(y)];
  }
  return acc;
}

}  // namespace

GateOp GateOp::rotation(GateKind kind, std::size_t qubit, AngleSource angle) {
  if (kind == GateKind::kCNOT || kind == GateKind::kPauliRotation) {
    fail(Errc::kBadTarget, "GateOp::rotation needs RX, RY or RZ");
  }
  return GateOp{kind, {qubit}, {}, std::move(angle)};
}

GateOp GateOp::cnot(std::size_t control, std::size_t target) {
  return GateOp{GateKind::kCNOT, {control, target}, {}, std::monostate{}};
}

GateOp GateOp::pauli_rotation(std::vector<Pauli> letters, AngleSource angle) {
  std::vector<std::size_t> support;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    if (letters[q] != Pauli::I) support.push_back(q);
  }
  return GateOp{GateKind::kPauliRotation, std::move(support),
                std::move(letters), std::move(angle)};
}

AnsatzSpec::AnsatzSpec(std::size_t n_system, std::size_t n_ancilla,
                       std::size_t param_dim)
    : n_system_(n_system), n_ancilla_(n_ancilla), param_dim_(param_dim) {
  if (n_system == 0) fail(Errc::kBadSplit, "ansatz needs a system register");
  if (n_system + n_ancilla > 20) {
    fail(Errc::kTooLarge, "ansatz register exceeds 20 qubits");
  }
}

void AnsatzSpec::add_gate(GateOp gate) {
  std::visit(
      [this](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, TrainableAngle>) {
          n_trainable_ = std::max(n_trainable_, src.slot + 1);
        } else if constexpr (std::is_same_v<T, ExternalAngle>) {
          n_external_ = std::max(n_external_, src.slot + 1);
        } else if constexpr (std::is_same_v<T, EncodedAngle>) {
          for (auto s : src.weight_slots) n_trainable_ = std::max(n_trainable_, s + 1);
          for (auto s : src.bias_slots) n_trainable_ = std::max(n_trainable_, s + 1);
        }
      },
      gate.angle);
  gates_.push_back(std::move(gate));
}

void AnsatzSpec::append(const AnsatzSpec& fragment) {
  if (fragment.n_total() != n_total()) {
    fail(Errc::kBadTarget, "fragment register size differs from ansatz");
  }
  const std::size_t t_off = n_trainable_;
  const std::size_t e_off = n_external_;
  for (GateOp g : fragment.gates_) {
    std::visit(
        [&](auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TrainableAngle>) {
            src.slot += t_off;
          } else if constexpr (std::is_same_v<T, ExternalAngle>) {
            src.slot += e_off;
          } else if constexpr (std::is_same_v<T, EncodedAngle>) {
            for (auto& s : src.weight_slots) s += t_off;
            for (auto& s : src.bias_slots) s += t_off;
          }
        },
        g.angle);
    add_gate(std::move(g));
  }
  // Keep declared sizes even if the fragment's last slots are unused.
  n_trainable_ = std::max(n_trainable_, t_off + fragment.n_trainable_);
  n_external_ = std::max(n_external_, e_off + fragment.n_external_);
}

void AnsatzSpec::validate() const {
  const std::size_t n = n_total();
  std::vector<bool> t_used(n_trainable_, false);
  std::vector<bool> e_used(n_external_, false);
  for (const auto& g : gates_) {
    switch (g.kind) {
      case GateKind::kCNOT:
        if (g.targets.size() != 2 || g.targets[0] == g.targets[1] ||
            g.targets[0] >= n || g.targets[1] >= n) {
          fail(Errc::kBadTarget, "CNOT needs two distinct in-range qubits");
        }
        if (g.parameterized()) fail(Errc::kSlotMismatch, "CNOT has an angle");
        break;
      case GateKind::kPauliRotation:
        if (g.letters.size() != n) {
          fail(Errc::kBadTarget, "PauliRotation letters do not cover register");
        }
        break;
      default:
        if (g.targets.size() != 1 || g.targets[0] >= n) {
          fail(Errc::kBadTarget, "rotation target out of range");
        }
        break;
    }
    if (g.kind != GateKind::kCNOT && !g.parameterized()) {
      fail(Errc::kSlotMismatch, "rotation gate has no angle source");
    }
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TrainableAngle>) {
            check_slots(src.slot, n_trainable_, "trainable");
            t_used[src.slot] = true;
          } else if constexpr (std::is_same_v<T, ExternalAngle>) {
            check_slots(src.slot, n_external_, "external");
            e_used[src.slot] = true;
          } else if constexpr (std::is_same_v<T, EncodedAngle>) {
            if (src.weight_slots.size() != param_dim_ ||
                src.bias_slots.size() != param_dim_) {
              fail(Errc::kSlotMismatch,
                   "encoded angle slot arrays must have length param_dim");
            }
            for (auto s : src.weight_slots) {
              check_slots(s, n_trainable_, "trainable");
              t_used[s] = true;
            }
            for (auto s : src.bias_slots) {
              check_slots(s, n_trainable_, "trainable");
              t_used[s] = true;
            }
          }
        },
        g.angle);
  }
  const auto unused_t = std::find(t_used.begin(), t_used.end(), false);
  if (unused_t != t_used.end()) {
    fail(Errc::kSlotMismatch,
         "trainable slot " + std::to_string(unused_t - t_used.begin()) +
             " is never referenced");
  }
  const auto unused_e = std::find(e_used.begin(), e_used.end(), false);
  if (unused_e != e_used.end()) {
    fail(Errc::kSlotMismatch,
         "external slot " + std::to_string(unused_e - e_used.begin()) +
             " is never referenced");
  }
}

std::vector<double> resolve_angles(const AnsatzSpec& spec,
                                   std::span<const double> trainables,
                                   std::span<const double> externals,
                                   std::span<const double> h) {
  if (trainables.size() != spec.n_trainable()) {
    std::ostringstream os;
    os << "trainable store has " << trainables.size() << " values, ansatz needs "
       << spec.n_trainable();
    fail(Errc::kSlotMismatch, os.str());
  }
  if (externals.size() != spec.n_external()) {
    std::ostringstream os;
    os << "external store has " << externals.size() << " values, ansatz needs "
       << spec.n_external();
    fail(Errc::kSlotMismatch, os.str());
  }
  if (h.size() != spec.param_dim()) {
    std::ostringstream os;
    os << "ansatz encodes " << spec.param_dim() << " Hamiltonian parameter(s), got "
       << h.size();
    fail(Errc::kSlotMismatch, os.str());
  }
  std::vector<double> angles;
  angles.reserve(spec.gates().size());
  for (const auto& g : spec.gates()) {
    angles.push_back(std::visit(
        [&](const auto& src) -> double {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TrainableAngle>) {
            return trainables[src.slot];
          } else if constexpr (std::is_same_v<T, ExternalAngle>) {
            return externals[src.slot];
          } else if constexpr (std::is_same_v<T, EncodedAngle>) {
            double a = 0.0;
            for (std::size_t k = 0; k < src.weight_slots.size(); ++k) {
              a += trainables[src.weight_slots[k]] * h[k] +
                   trainables[src.bias_slots[k]];
            }
            return a;
          } else {
            return 0.0;
          }
        },
        g.angle));
  }
  return angles;
}

void apply_gate_inplace(StateVector& state, const GateOp& gate, double angle) {
  const std::size_t n = state.n_qubits();
  for (auto t : gate.targets) {
    if (t >= n) {
      std::ostringstream os;
      os << "gate target " << t << " outside " << n << "-qubit register";
      fail(Errc::kBadTarget, os.str());
    }
  }
  ComplexVector& amps = state.mutable_amplitudes();
  switch (gate.kind) {
    case GateKind::kCNOT:
      if (gate.targets.size() != 2 || gate.targets[0] == gate.targets[1]) {
        fail(Errc::kBadTarget, "CNOT needs two distinct qubits");
      }
      cnot(amps, std::uint64_t{1} << (n - 1 - gate.targets[0]),
           std::uint64_t{1} << (n - 1 - gate.targets[1]));
      return;
    case GateKind::kPauliRotation:
      if (gate.letters.size() != n) {
        fail(Errc::kBadTarget, "PauliRotation letters do not cover register");
      }
      rotate(amps, PauliMasks::of(gate.letters), angle);
      return;
    default:
      if (gate.targets.size() != 1) {
        fail(Errc::kBadTarget, "rotation needs exactly one target");
      }
      rotate(amps,
             PauliMasks::of(
                 single_qubit_letters(n, gate.targets[0], axis_of(gate.kind))),
             0.5 * angle);
      return;
  }
}

StateVector apply_gate(StateVector state, const GateOp& gate, double angle) {
  apply_gate_inplace(state, gate, angle);
  return state;
}

StateVector simulate(const AnsatzSpec& spec, std::span<const double> trainables,
                     std::span<const double> externals,
                     std::span<const double> h) {
  const auto angles = resolve_angles(spec, trainables, externals, h);
  return CircuitProgram(spec).run(angles);
}

DensityMatrix reduced_state(const StateVector& psi, std::size_t n_system) {
  if (n_system == 0 || n_system >= psi.n_qubits()) {
    std::ostringstream os;
    os << "cannot split " << psi.n_qubits() << " qubits into a " << n_system
       << "-qubit system and a nonempty ancilla register";
    fail(Errc::kBadSplit, os.str());
  }
  return reduce_leading(psi, n_system);
}

CircuitProgram::CircuitProgram(const AnsatzSpec& spec) : spec_(spec) {
  spec_.validate();
  const std::size_t n = spec_.n_total();
  steps_.reserve(spec_.gates().size());
  for (const auto& g : spec_.gates()) {
    Step s{};
    switch (g.kind) {
      case GateKind::kCNOT:
        s.is_cnot = true;
        s.control_bit = std::uint64_t{1} << (n - 1 - g.targets[0]);
        s.target_bit = std::uint64_t{1} << (n - 1 - g.targets[1]);
        break;
      case GateKind::kPauliRotation:
        s.masks = PauliMasks::of(g.letters);
        s.angle_scale = 1.0;
        break;
      default:
        s.masks = PauliMasks::of(
            single_qubit_letters(n, g.targets[0], axis_of(g.kind)));
        s.angle_scale = 0.5;
        break;
    }
    steps_.push_back(s);
  }
}

void CircuitProgram::apply(ComplexVector& amps, const Step& step,
                           double angle) const {
  if (step.is_cnot) {
    cnot(amps, step.control_bit, step.target_bit);
  } else {
    rotate(amps, step.masks, step.angle_scale * angle);
  }
}

StateVector CircuitProgram::run(std::span<const double> angles) const {
  if (angles.size() != steps_.size()) {
    fail(Errc::kSlotMismatch, "angle count does not match gate count");
  }
  StateVector psi(spec_.n_total());
  ComplexVector& amps = psi.mutable_amplitudes();
  for (std::size_t k = 0; k < steps_.size(); ++k) apply(amps, steps_[k], angles[k]);
  return psi;
}

std::vector<double> CircuitProgram::angle_gradient(
    std::span<const double> angles, const StateVector& psi,
    const ComplexMatrix& system_observable) const {
  if (angles.size() != steps_.size()) {
    fail(Errc::kSlotMismatch, "angle count does not match gate count");
  }
  const auto ds = static_cast<Eigen::Index>(std::size_t{1} << spec_.n_system());
  const auto da = static_cast<Eigen::Index>(std::size_t{1} << spec_.n_ancilla());
  if (system_observable.rows() != ds || system_observable.cols() != ds) {
    fail(Errc::kDimensionMismatch, "observable does not match system register");
  }
  using RowMajor =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  ComplexVector phi = psi.amplitudes();
  ComplexVector lam(phi.size());
  Eigen::Map<RowMajor>(lam.data(), ds, da) =
      system_observable * Eigen::Map<const RowMajor>(phi.data(), ds, da);

  std::vector<double> grads(steps_.size(), 0.0);
  for (std::size_t k = steps_.size(); k-- > 0;) {
    const Step& s = steps_[k];
    if (!s.is_cnot) {
      const Complex z = pauli_matrix_element(lam, phi, s.masks);
      grads[k] = 2.0 * s.angle_scale * z.imag();
    }
    apply(phi, s, -angles[k]);
    apply(lam, s, -angles[k]);
  }
  return grads;
}

void CircuitProgram::accumulate_slot_gradients(
    std::span<const double> gate_gradients, std::span<const double> h,
    std::span<double> trainable_grads, std::span<double> external_grads) const {
  if (gate_gradients.size() != steps_.size() ||
      trainable_grads.size() != spec_.n_trainable() ||
      external_grads.size() != spec_.n_external() ||
      h.size() != spec_.param_dim()) {
    fail(Errc::kSlotMismatch, "gradient buffers do not match the ansatz");
  }
  const auto& gates = spec_.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const double g = gate_gradients[k];
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, TrainableAngle>) {
            trainable_grads[src.slot] += g;
          } else if constexpr (std::is_same_v<T, ExternalAngle>) {
            external_grads[src.slot] += g;
          } else if constexpr (std::is_same_v<T, EncodedAngle>) {
            for (std::size_t i = 0; i < src.weight_slots.size(); ++i) {
              trainable_grads[src.weight_slots[i]] += g * h[i];
              trainable_grads[src.bias_slots[i]] += g;
            }
          }
        },
        gates[k].angle);
  }
}

}  // namespace metavqt
