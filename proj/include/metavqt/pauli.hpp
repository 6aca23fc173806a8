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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metavqt/linalg.hpp"

namespace metavqt {

enum class Pauli : std::uint8_t { I, X, Y, Z };

char pauli_char(Pauli p) noexcept;
Pauli pauli_from_char(char c);

/// Letters over n qubits plus a real coefficient. letters[q] acts on qubit q.
struct PauliString {
  double coefficient = 1.0;
  std::vector<Pauli> letters;

  PauliString() = default;
  PauliString(double coef, std::vector<Pauli> l)
      : coefficient(coef), letters(std::move(l)) {}
  /// Parses e.g. "XXI".
  PauliString(double coef, std::string_view letters);

  std::size_t n_qubits() const noexcept { return letters.size(); }
  std::string letter_string() const;
  bool commutes_with(const PauliString& other) const;
  bool is_identity() const noexcept;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Bit masks describing a Pauli string's action on a basis index, with qubit
/// q at bit (n - 1 - q): P|x> = i^n_y (-1)^popcount(x & phase_mask) |x ^ flip_mask>.
struct PauliMasks {
  std::uint64_t flip_mask = 0;
  std::uint64_t phase_mask = 0;
  unsigned n_y = 0;

  static PauliMasks of(std::span<const Pauli> letters);
  /// Phase of the matrix element <x ^ flip | P | x>.
  Complex phase(std::uint64_t x) const noexcept;
};

/// Canonical real-weighted sum of Pauli strings: duplicate letter arrays are
/// merged in first-appearance order and terms with |coef| < 1e-14 dropped.
class PauliSum {
 public:
  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(std::size_t n_qubits, std::vector<PauliString> terms);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliString>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  PauliSum scaled(double factor) const;
  PauliSum operator+(const PauliSum& other) const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<PauliString> terms_;
};

inline constexpr double kDropTolerance = 1e-14;
inline constexpr std::size_t kMaxDenseQubits = 10;

/// -J sum X_i X_{i+1} - h sum Z_i on an open chain.
PauliSum build_tfim(std::size_t n, double J, double h);

/// -J sum X_i X_{i+1} - J Y_1 (prod Z) Y_L - h sum Z_i.
PauliSum build_kitaev_ring(std::size_t L, double J, double h);

/// Two-qubit -J (XX + YY + ZZ) - h sum_i (X_i + Y_i + Z_i).
PauliSum build_heisenberg_fields(double J, double h);

/// sum_k coeffs[k] * basis[k].
PauliSum build_qbm_hamiltonian(std::span<const double> coeffs,
                               std::span<const PauliSum> basis);

/// Dense 2^n x 2^n matrix.
ComplexMatrix to_dense(const PauliSum& hs);

/// Tr[H rho].
double expectation(const PauliSum& hs, const DensityMatrix& rho);

/// Tr[P rho] for a single string, complex to expose the imaginary residue.
Complex pauli_expectation(std::span<const Pauli> letters,
                          const ComplexMatrix& rho);

struct BlockPartition {
  std::vector<std::vector<std::size_t>> groups;  // term indices
  std::size_t count() const noexcept { return groups.size(); }
};

inline constexpr std::size_t kExactBlockLimit = 24;

/// Fewest mutually commuting blocks covering the terms. Sums with more than
/// kExactBlockLimit terms fall back to first-fit in term order.
BlockPartition commuting_blocks(const PauliSum& hs);

/// One term per line: "<coef> <letters>".
std::string to_text(const PauliSum& hs);
PauliSum pauli_sum_from_text(std::string_view text);

}  // namespace metavqt
