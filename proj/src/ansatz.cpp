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

#include <algorithm>

#include "metavqt/circuit.hpp"
#include "metavqt/error.hpp"

namespace metavqt {
namespace {

AngleSource next_angle(AngleMode mode, std::size_t slot) {
  if (mode == AngleMode::kExternal) return ExternalAngle{slot};
  return TrainableAngle{slot};
}

void add_chain(AnsatzSpec& spec) {
  for (std::size_t q = 0; q + 1 < spec.n_total(); ++q) {
    spec.add_gate(GateOp::cnot(q, q + 1));
  }
}

}  // namespace

AnsatzSpec build_cnot_chain(std::size_t n_tot) {
  AnsatzSpec spec(n_tot, 0, 0);
  add_chain(spec);
  return spec;
}

AnsatzSpec build_su2_encoding(std::size_t n_tot, std::size_t layers,
                              std::size_t param_dim) {
  if (layers == 0) fail(Errc::kConfigInvalid, "encoding needs at least one layer");
  if (param_dim == 0) fail(Errc::kConfigInvalid, "encoding needs param_dim >= 1");
  AnsatzSpec spec(n_tot, 0, param_dim);
  std::size_t next = 0;
  auto encoded = [&] {
    EncodedAngle a;
    for (std::size_t k = 0; k < param_dim; ++k) a.weight_slots.push_back(next++);
    for (std::size_t k = 0; k < param_dim; ++k) a.bias_slots.push_back(next++);
    return a;
  };
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n_tot; ++q) {
      spec.add_gate(GateOp::rotation(GateKind::kRZ, q, encoded()));
      spec.add_gate(GateOp::rotation(GateKind::kRY, q, encoded()));
    }
    add_chain(spec);
  }
  return spec;
}

AnsatzSpec build_su2_layers(std::size_t n_tot, std::size_t layers,
                            AngleMode mode) {
  AnsatzSpec spec(n_tot, 0, 0);
  std::size_t next = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < n_tot; ++q) {
      spec.add_gate(GateOp::rotation(GateKind::kRZ, q, next_angle(mode, next++)));
      spec.add_gate(GateOp::rotation(GateKind::kRY, q, next_angle(mode, next++)));
    }
    add_chain(spec);
  }
  return spec;
}

std::vector<std::vector<Pauli>> tile_pattern(const PauliSum& pattern,
                                             std::size_t n_tot) {
  const std::size_t n_sys = pattern.n_qubits();
  if (n_sys == 0 || n_sys > n_tot) {
    fail(Errc::kBadTarget, "pattern register does not fit the circuit");
  }
  std::vector<std::vector<Pauli>> out;
  auto place = [&](const std::vector<Pauli>& segment, std::size_t offset) {
    std::vector<Pauli> letters(n_tot, Pauli::I);
    std::copy(segment.begin(), segment.end(), letters.begin() + offset);
    if (std::find(out.begin(), out.end(), letters) == out.end()) {
      out.push_back(std::move(letters));
    }
  };
  for (const auto& term : pattern.terms()) {
    const auto& l = term.letters;
    const auto first = std::find_if(l.begin(), l.end(),
                                    [](Pauli p) { return p != Pauli::I; });
    if (first == l.end()) continue;
    const auto last = std::find_if(l.rbegin(), l.rend(),
                                   [](Pauli p) { return p != Pauli::I; });
    const std::size_t lo = static_cast<std::size_t>(first - l.begin());
    const std::size_t hi = l.size() - 1 - static_cast<std::size_t>(last - l.rbegin());
    const std::vector<Pauli> segment(l.begin() + lo, l.begin() + hi + 1);
    const std::size_t span = segment.size();
    if (span <= 2) {
      for (std::size_t o = 0; o + span <= n_tot; ++o) place(segment, o);
    } else {
      for (std::size_t o = lo; o + span <= n_tot; o += n_sys) place(segment, o);
    }
  }
  return out;
}

AnsatzSpec build_hva_layer(const PauliSum& pattern, std::size_t n_tot,
                           AngleMode mode) {
  AnsatzSpec spec(n_tot, 0, 0);
  std::size_t next = 0;
  for (auto& letters : tile_pattern(pattern, n_tot)) {
    spec.add_gate(GateOp::pauli_rotation(std::move(letters),
                                         next_angle(mode, next++)));
  }
  add_chain(spec);
  return spec;
}

namespace {

AnsatzSpec rebase(const HamiltonianFamily& family, std::size_t n_ancilla,
                  std::size_t param_dim, const AnsatzSpec& body) {
  AnsatzSpec spec(family.n_qubits(), n_ancilla, param_dim);
  spec.append(body);
  return spec;
}

}  // namespace

AnsatzSpec meta_vqt_ansatz(const HamiltonianFamily& family,
                           std::size_t encoding_layers, std::size_t hva_layers,
                           std::size_t n_ancilla) {
  const std::size_t n_tot = family.n_qubits() + n_ancilla;
  AnsatzSpec body(n_tot, 0, family.param_dim());
  body.append(build_su2_encoding(n_tot, encoding_layers, family.param_dim()));
  const PauliSum pattern = family.pattern();
  for (std::size_t l = 0; l < hva_layers; ++l) {
    body.append(build_hva_layer(pattern, n_tot, AngleMode::kTrainable));
  }
  return rebase(family, n_ancilla, family.param_dim(), body);
}

AnsatzSpec nn_meta_vqt_ansatz(const HamiltonianFamily& family,
                              std::size_t su2_layers, std::size_t hva_layers,
                              std::size_t n_ancilla) {
  const std::size_t n_tot = family.n_qubits() + n_ancilla;
  AnsatzSpec body(n_tot, 0, family.param_dim());
  body.append(build_su2_layers(n_tot, su2_layers, AngleMode::kExternal));
  const PauliSum pattern = family.pattern();
  for (std::size_t l = 0; l < hva_layers; ++l) {
    body.append(build_hva_layer(pattern, n_tot, AngleMode::kExternal));
  }
  return rebase(family, n_ancilla, family.param_dim(), body);
}

}  // namespace metavqt
