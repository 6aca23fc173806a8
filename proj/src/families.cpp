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

#include "metavqt/family.hpp"

#include <charconv>
#include <sstream>

#include "metavqt/error.hpp"

namespace metavqt {

HamiltonianFamily::HamiltonianFamily(FamilyKind kind, std::string name,
                                     std::size_t n, std::size_t p, double J,
                                     std::vector<PauliSum> basis)
    : kind_(kind),
      name_(std::move(name)),
      n_qubits_(n),
      param_dim_(p),
      J_(J),
      basis_(std::move(basis)) {}

HamiltonianFamily HamiltonianFamily::tfim(std::size_t n, double J) {
  if (n < 2) fail(Errc::kInvalidSize, "TFIM needs at least 2 qubits");
  return {FamilyKind::kTfim, "tfim", n, 1, J};
}

HamiltonianFamily HamiltonianFamily::kitaev_ring(std::size_t L, double J) {
  if (L < 3) fail(Errc::kInvalidSize, "Kitaev ring needs at least 3 sites");
  return {FamilyKind::kKitaevRing, "kitaev", L, 1, J};
}

HamiltonianFamily HamiltonianFamily::heisenberg_fields() {
  return {FamilyKind::kHeisenbergFields, "heisenberg", 2, 2, 0.0};
}

HamiltonianFamily HamiltonianFamily::generic_qbm(std::string name,
                                                 std::vector<PauliSum> basis) {
  if (basis.empty()) fail(Errc::kLengthMismatch, "QBM basis is empty");
  const std::size_t n = basis.front().n_qubits();
  for (const auto& b : basis) {
    if (b.n_qubits() != n) {
      fail(Errc::kDimensionMismatch, "QBM basis elements differ in size");
    }
  }
  const std::size_t p = basis.size();
  return {FamilyKind::kGenericQbm, std::move(name), n, p, 0.0,
          std::move(basis)};
}

HamiltonianFamily HamiltonianFamily::free_spins(std::size_t n) {
  std::vector<PauliString> field;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Pauli> l(n, Pauli::I);
    l[i] = Pauli::Z;
    field.emplace_back(-1.0, std::move(l));
  }
  return generic_qbm("free-spins", {PauliSum(n, std::move(field))});
}

HamiltonianFamily HamiltonianFamily::heisenberg_qbm() {
  PauliSum coupling(2, {{-1.0, "XX"}, {-1.0, "YY"}, {-1.0, "ZZ"}});
  PauliSum fields(2, {{-1.0, "ZI"}, {-1.0, "IZ"}, {-1.0, "XI"},
                      {-1.0, "IX"}, {-1.0, "YI"}, {-1.0, "IY"}});
  return generic_qbm("heisenberg-qbm", {std::move(coupling), std::move(fields)});
}

HamiltonianFamily HamiltonianFamily::block_study(int row) {
  std::vector<PauliString> coupling{{-1.0, "XX"}};
  std::vector<PauliString> fields;
  switch (row) {
    case 1:
      break;
    case 2:
      fields = {{-1.0, "XI"}, {-1.0, "IX"}};
      break;
    case 3:
      fields = {{-1.0, "XI"}, {-1.0, "IX"}, {-1.0, "ZI"}, {-1.0, "IZ"}};
      break;
    case 4:
    case 5:
    case 6:
      fields = {{-1.0, "XI"}, {-1.0, "IX"}, {-1.0, "ZI"},
                {-1.0, "IZ"}, {-1.0, "YI"}, {-1.0, "IY"}};
      if (row >= 5) coupling.emplace_back(-1.0, "YY");
      if (row == 6) coupling.emplace_back(-1.0, "ZZ");
      break;
    default:
      fail(Errc::kConfigInvalid,
           "block-study row must be in 1..6, got " + std::to_string(row));
  }
  std::vector<PauliSum> basis{PauliSum(2, std::move(coupling))};
  if (!fields.empty()) basis.emplace_back(2, std::move(fields));
  return generic_qbm("blocks-" + std::to_string(row), std::move(basis));
}

HamiltonianFamily HamiltonianFamily::from_name(std::string_view name,
                                               std::size_t n, double J) {
  if (name == "tfim") return tfim(n, J);
  if (name == "kitaev") return kitaev_ring(n, J);
  if (name == "heisenberg") return heisenberg_fields();
  if (name == "heisenberg-qbm") return heisenberg_qbm();
  if (name == "free-spins") return free_spins(n);
  if (name.starts_with("blocks-")) {
    int row = 0;
    const auto digits = name.substr(7);
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), row);
    if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
      return block_study(row);
    }
  }
  fail(Errc::kConfigInvalid,
       "unknown Hamiltonian family '" + std::string(name) + "'");
}

PauliSum HamiltonianFamily::build(std::span<const double> h) const {
  if (h.size() != param_dim_) {
    std::ostringstream os;
    os << name_ << " takes " << param_dim_ << " parameter(s), got "
       << h.size();
    fail(Errc::kLengthMismatch, os.str());
  }
  switch (kind_) {
    case FamilyKind::kTfim: return build_tfim(n_qubits_, J_, h[0]);
    case FamilyKind::kKitaevRing: return build_kitaev_ring(n_qubits_, J_, h[0]);
    case FamilyKind::kHeisenbergFields:
      return build_heisenberg_fields(h[0], h[1]);
    case FamilyKind::kGenericQbm: return build_qbm_hamiltonian(h, basis_);
  }
  fail(Errc::kConfigInvalid, "unhandled family kind");
}

PauliSum HamiltonianFamily::pattern() const {
  const std::vector<double> ones(param_dim_, 1.0);
  if (kind_ == FamilyKind::kTfim || kind_ == FamilyKind::kKitaevRing) {
    // The coupling may be configured to zero; the layout still needs it.
    return kind_ == FamilyKind::kTfim ? build_tfim(n_qubits_, 1.0, 1.0)
                                      : build_kitaev_ring(n_qubits_, 1.0, 1.0);
  }
  return build(ones);
}

}  // namespace metavqt
