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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metavqt/pauli.hpp"

namespace metavqt {

enum class FamilyKind { kTfim, kKitaevRing, kHeisenbergFields, kGenericQbm };

/// A parameterised Hamiltonian H(h) with h of fixed length param_dim().
class HamiltonianFamily {
 public:
  static HamiltonianFamily tfim(std::size_t n, double J = 1.0);
  static HamiltonianFamily kitaev_ring(std::size_t L, double J = 1.0);
  /// Parameters (J, h).
  static HamiltonianFamily heisenberg_fields();
  /// H(h) = sum_k h[k] basis[k].
  static HamiltonianFamily generic_qbm(std::string name,
                                       std::vector<PauliSum> basis);
  /// -h sum_i Z_i, one parameter.
  static HamiltonianFamily free_spins(std::size_t n);
  /// The six two-qubit (J, h) Hamiltonians of increasing commuting-block
  /// count, row in 1..6.
  static HamiltonianFamily block_study(int row);
  /// Heisenberg-with-fields written as a two-element QBM basis.
  static HamiltonianFamily heisenberg_qbm();

  /// "tfim", "kitaev", "heisenberg", "free-spins", "heisenberg-qbm",
  /// "blocks-1" .. "blocks-6". `n` and `J` are ignored where fixed.
  static HamiltonianFamily from_name(std::string_view name, std::size_t n,
                                     double J = 1.0);

  FamilyKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t param_dim() const noexcept { return param_dim_; }
  double coupling() const noexcept { return J_; }
  /// Operator basis of a generic family; empty otherwise.
  const std::vector<PauliSum>& basis() const noexcept { return basis_; }

  PauliSum build(std::span<const double> h) const;
  /// Term structure with every parameter set to 1; drives HVA layouts.
  PauliSum pattern() const;

 private:
  HamiltonianFamily(FamilyKind kind, std::string name, std::size_t n,
                    std::size_t p, double J, std::vector<PauliSum> basis = {});

  FamilyKind kind_;
  std::string name_;
  std::size_t n_qubits_;
  std::size_t param_dim_;
  double J_;
  std::vector<PauliSum> basis_;
};

}  // namespace metavqt
