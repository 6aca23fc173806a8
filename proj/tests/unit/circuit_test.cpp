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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "metavqt/ansatz_json.hpp"
#include "metavqt/circuit.hpp"
#include "metavqt/error.hpp"
#include "test_util.hpp"

namespace metavqt {
namespace {

using std::numbers::pi;

std::vector<Pauli> letters(const std::string& s) {
  std::vector<Pauli> out;
  for (char c : s) out.push_back(pauli_from_char(c));
  return out;
}

std::string to_string(const std::vector<Pauli>& l) {
  std::string s;
  for (Pauli p : l) s.push_back(pauli_char(p));
  return s;
}

StateVector basis(std::size_t n, std::size_t index) {
  ComplexVector a = ComplexVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(n, a);
}

TEST(Gates, RyPiFlips) {
  const StateVector out =
      apply_gate(StateVector(1), GateOp::rotation(GateKind::kRY, 0, TrainableAngle{0}), pi);
  EXPECT_NEAR(std::abs(out.amplitudes()(1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(out.amplitudes()(0)), 0.0, 1e-12);
}

TEST(Gates, CnotOnTen) {
  const StateVector out = apply_gate(basis(2, 0b10), GateOp::cnot(0, 1), 0.0);
  EXPECT_NEAR(std::abs(out.amplitudes()(0b11)), 1.0, 1e-15);
}

TEST(Gates, XxRotation) {
  const StateVector out = apply_gate(
      StateVector(2), GateOp::pauli_rotation(letters("XX"), TrainableAngle{0}), pi / 4);
  EXPECT_NEAR(std::abs(out.amplitudes()(0) - std::cos(pi / 4)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out.amplitudes()(3) - Complex(0, -std::sin(pi / 4))), 0.0, 1e-12);
}

TEST(Gates, MatchDenseExponentials) {
  std::mt19937_64 gen(31);
  const char* strings[] = {"XYZ", "YIY", "ZZI", "IXI", "YZY", "XXX"};
  for (const char* s : strings) {
    const StateVector psi = testing::random_state(3, gen);
    const double theta = 0.37;
    const ComplexMatrix p = to_dense(PauliSum(3, {PauliString(1.0, s)}));
    // exp(-i theta P) = cos(theta) I - i sin(theta) P for any Pauli string.
    const ComplexMatrix u = std::cos(theta) * ComplexMatrix::Identity(8, 8) -
                            Complex(0, std::sin(theta)) * p;
    const StateVector out =
        apply_gate(psi, GateOp::pauli_rotation(letters(s), TrainableAngle{0}), theta);
    EXPECT_LE((out.amplitudes() - u * psi.amplitudes()).norm(), 1e-12) << s;
  }
  // Single-qubit rotations use the half angle.
  const StateVector psi = testing::random_state(3, gen);
  const StateVector a = apply_gate(psi, GateOp::rotation(GateKind::kRZ, 1, TrainableAngle{0}), 0.8);
  const StateVector b =
      apply_gate(psi, GateOp::pauli_rotation(letters("IZI"), TrainableAngle{0}), 0.4);
  EXPECT_LE((a.amplitudes() - b.amplitudes()).norm(), 1e-14);
  const StateVector c = apply_gate(psi, GateOp::rotation(GateKind::kRX, 2, TrainableAngle{0}), 0.8);
  const StateVector d =
      apply_gate(psi, GateOp::pauli_rotation(letters("IIX"), TrainableAngle{0}), 0.4);
  EXPECT_LE((c.amplitudes() - d.amplitudes()).norm(), 1e-14);
}

TEST(Gates, BadTarget) {
  try {
    apply_gate(StateVector(2), GateOp::rotation(GateKind::kRY, 2, TrainableAngle{0}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBadTarget);
  }
  EXPECT_THROW(apply_gate(StateVector(2), GateOp::cnot(1, 1), 0.0), Error);
}

TEST(Gates, NormPreservedThroughDeepRandomCircuits) {
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> ang(-pi, pi);
  const char pl[] = "IXYZ";
  for (std::size_t n : {2u, 5u, 8u}) {
    StateVector psi(n);
    for (int depth = 0; depth < 100; ++depth) {
      const auto q = static_cast<std::size_t>(gen() % n);
      switch (gen() % 5) {
        case 0: apply_gate_inplace(psi, GateOp::rotation(GateKind::kRY, q, TrainableAngle{0}), ang(gen)); break;
        case 1: apply_gate_inplace(psi, GateOp::rotation(GateKind::kRZ, q, TrainableAngle{0}), ang(gen)); break;
        case 2: apply_gate_inplace(psi, GateOp::rotation(GateKind::kRX, q, TrainableAngle{0}), ang(gen)); break;
        case 3: apply_gate_inplace(psi, GateOp::cnot(q, (q + 1) % n), 0.0); break;
        default: {
          std::string s;
          for (std::size_t k = 0; k < n; ++k) s.push_back(pl[gen() % 4]);
          apply_gate_inplace(psi, GateOp::pauli_rotation(letters(s), TrainableAngle{0}), ang(gen));
        }
      }
      ASSERT_LE(std::abs(psi.norm() - 1.0), 1e-9);
    }
  }
}

TEST(Gates, RotationSquared) {
  std::mt19937_64 gen(33);
  for (const char* s : {"XYZI", "ZZZZ", "IYXI"}) {
    const StateVector psi = testing::random_state(4, gen);
    const GateOp g = GateOp::pauli_rotation(letters(s), TrainableAngle{0});
    const StateVector twice = apply_gate(apply_gate(psi, g, 0.3), g, 0.3);
    const StateVector doubled = apply_gate(psi, g, 0.6);
    EXPECT_LE((twice.amplitudes() - doubled.amplitudes()).norm(), 1e-10);
  }
}

TEST(Encoding, SlotCounts) {
  EXPECT_EQ(build_su2_encoding(4, 2, 1).n_trainable(), 4u * 4 * 2 * 1);
  EXPECT_EQ(build_su2_encoding(8, 4, 1).n_trainable(), 4u * 8 * 4 * 1);
  EXPECT_EQ(build_su2_encoding(4, 3, 2).n_trainable(), 4u * 4 * 3 * 2);
  const AnsatzSpec enc = build_su2_encoding(3, 1, 1);
  // RZ, RY per qubit then the CNOT chain.
  ASSERT_EQ(enc.gates().size(), 3u * 2 + 2);
  EXPECT_EQ(enc.gates()[0].kind, GateKind::kRZ);
  EXPECT_EQ(enc.gates()[1].kind, GateKind::kRY);
  EXPECT_EQ(enc.gates()[6], GateOp::cnot(0, 1));
  EXPECT_EQ(enc.gates()[7], GateOp::cnot(1, 2));
  EXPECT_NO_THROW(enc.validate());
}

TEST(Encoding, ZeroWeightsDecoupleH) {
  std::mt19937_64 gen(34);
  std::uniform_real_distribution<double> u(-pi, pi);
  const AnsatzSpec spec = build_su2_encoding(3, 2, 1);
  std::vector<double> params(spec.n_trainable());
  for (auto& x : params) x = u(gen);
  for (const auto& g : spec.gates()) {
    if (const auto* e = std::get_if<EncodedAngle>(&g.angle)) params[e->weight_slots[0]] = 0.0;
  }
  const StateVector a = simulate(spec, params, {}, std::vector<double>{-1.5});
  const StateVector b = simulate(spec, params, {}, std::vector<double>{0.7});
  EXPECT_LE((a.amplitudes() - b.amplitudes()).norm(), 1e-14);
}

TEST(Encoding, AngleIsLinearInEachParameter) {
  std::mt19937_64 gen(35);
  std::uniform_real_distribution<double> u(-2, 2);
  const AnsatzSpec spec = build_su2_encoding(2, 1, 2);
  std::vector<double> params(spec.n_trainable());
  for (auto& x : params) x = u(gen);
  const std::vector<double> h0{0.3, -0.4}, h1{1.3, -0.4}, h2{0.3, 0.6};
  const auto a0 = resolve_angles(spec, params, {}, h0);
  const auto a1 = resolve_angles(spec, params, {}, h1);
  const auto a2 = resolve_angles(spec, params, {}, h2);
  for (std::size_t k = 0; k < spec.gates().size(); ++k) {
    const auto* e = std::get_if<EncodedAngle>(&spec.gates()[k].angle);
    if (!e) continue;
    EXPECT_NEAR(a1[k] - a0[k], params[e->weight_slots[0]], 1e-12);
    EXPECT_NEAR(a2[k] - a0[k], params[e->weight_slots[1]], 1e-12);
  }
}

TEST(Hva, TfimLayout) {
  const auto fam = HamiltonianFamily::tfim(2);
  const auto tiled = tile_pattern(fam.pattern(), 4);
  std::vector<std::string> got;
  for (const auto& l : tiled) got.push_back(to_string(l));
  EXPECT_EQ(got, (std::vector<std::string>{"XXII", "IXXI", "IIXX", "ZIII", "IZII", "IIZI",
                                           "IIIZ"}));
  const AnsatzSpec layer = build_hva_layer(fam.pattern(), 4);
  EXPECT_EQ(layer.n_trainable(), 7u);
  EXPECT_EQ(layer.gates().size(), 7u + 3u);
}

TEST(Hva, KitaevStringTiledTwice) {
  const auto fam = HamiltonianFamily::kitaev_ring(3);
  std::vector<std::string> got;
  for (const auto& l : tile_pattern(fam.pattern(), 6)) got.push_back(to_string(l));
  EXPECT_NE(std::find(got.begin(), got.end(), "YZYIII"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "IIIYZY"), got.end());
  EXPECT_EQ(got.size(), 5u + 2u + 6u);
}

TEST(Hva, EmptyPatternIsChainOnly) {
  const AnsatzSpec layer = build_hva_layer(PauliSum(2), 4);
  EXPECT_EQ(layer.n_trainable(), 0u);
  ASSERT_EQ(layer.gates().size(), 3u);
  for (const auto& g : layer.gates()) EXPECT_EQ(g.kind, GateKind::kCNOT);
}

TEST(Ansatz, MetaSlotCountHandCount) {
  const AnsatzSpec spec = meta_vqt_ansatz(HamiltonianFamily::tfim(2), 2, 2, 2);
  // Encoding 4*4*2*1 = 32; each HVA layer has 3 XX + 4 Z gates.
  EXPECT_EQ(spec.n_trainable(), 32u + 7u * 2u);
  EXPECT_EQ(spec.n_system(), 2u);
  EXPECT_EQ(spec.n_ancilla(), 2u);
  EXPECT_NO_THROW(spec.validate());
  const AnsatzSpec nn = nn_meta_vqt_ansatz(HamiltonianFamily::heisenberg_fields(), 4, 0, 2);
  EXPECT_EQ(nn.n_trainable(), 0u);
  EXPECT_EQ(nn.n_external(), 4u * 4u * 2u);
}

TEST(Ansatz, ValidateCatchesUnusedSlots) {
  AnsatzSpec spec(1, 0, 1);
  spec.add_gate(GateOp::rotation(GateKind::kRY, 0, TrainableAngle{1}));
  try {
    spec.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSlotMismatch);
  }
  AnsatzSpec bad_enc(1, 0, 2);
  bad_enc.add_gate(GateOp::rotation(GateKind::kRY, 0, EncodedAngle{{0}, {1}}));
  EXPECT_THROW(bad_enc.validate(), Error);
}

TEST(Simulate, TrivialCircuits) {
  const AnsatzSpec empty(2, 1, 1);
  const StateVector a = simulate(empty, {}, {}, std::vector<double>{0.5});
  EXPECT_NEAR(std::abs(a.amplitudes()(0)), 1.0, 1e-15);
  const AnsatzSpec hva = build_hva_layer(HamiltonianFamily::tfim(2).pattern(), 3);
  const std::vector<double> zeros(hva.n_trainable(), 0.0);
  AnsatzSpec with_dim(3, 0, 1);
  with_dim.append(hva);
  const StateVector b = simulate(with_dim, zeros, {}, std::vector<double>{0.0});
  EXPECT_NEAR(std::abs(b.amplitudes()(0)), 1.0, 1e-15);
}

TEST(Simulate, BellCircuitReducesToMixed) {
  AnsatzSpec spec(1, 1, 0);
  spec.add_gate(GateOp::rotation(GateKind::kRY, 0, TrainableAngle{0}));
  spec.add_gate(GateOp::cnot(0, 1));
  const std::vector<double> params{pi / 2};
  const DensityMatrix r = reduced_state(simulate(spec, params, {}, {}), 1);
  EXPECT_LE((r.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm(), 1e-12);
}

TEST(Simulate, SlotMismatch) {
  const AnsatzSpec spec = meta_vqt_ansatz(HamiltonianFamily::tfim(2), 1, 1, 2);
  const std::vector<double> short_params(spec.n_trainable() - 1, 0.0);
  try {
    simulate(spec, short_params, {}, std::vector<double>{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSlotMismatch);
  }
  const std::vector<double> params(spec.n_trainable(), 0.0);
  EXPECT_THROW(simulate(spec, params, {}, std::vector<double>{0.0, 1.0}), Error);
}

TEST(ReducedState, BadSplit) {
  const StateVector psi(3);
  for (std::size_t n : {0u, 3u, 4u}) {
    try {
      reduced_state(psi, n);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kBadSplit);
    }
  }
}

TEST(Adjoint, MatchesFiniteDifferences) {
  std::mt19937_64 gen(36);
  std::uniform_real_distribution<double> u(-pi, pi);
  const AnsatzSpec spec = meta_vqt_ansatz(HamiltonianFamily::kitaev_ring(3), 1, 1, 3);
  const CircuitProgram program(spec);
  std::vector<double> params(spec.n_trainable());
  for (auto& x : params) x = u(gen);
  const std::vector<double> h{0.9};
  const ComplexMatrix obs = testing::random_hermitian(8, gen);
  auto value = [&](const std::vector<double>& p) {
    const StateVector psi = program.run(resolve_angles(spec, p, {}, h));
    const DensityMatrix rho = reduced_state(psi, 3);
    return (obs * rho.matrix()).trace().real();
  };
  const auto angles = resolve_angles(spec, params, {}, h);
  const auto gate = program.angle_gradient(angles, program.run(angles), obs);
  std::vector<double> grads(spec.n_trainable(), 0.0);
  program.accumulate_slot_gradients(gate, h, grads, {});
  const double step = 1e-5;
  for (std::size_t k = 0; k < params.size(); k += 7) {
    auto plus = params, minus = params;
    plus[k] += step;
    minus[k] -= step;
    EXPECT_NEAR(grads[k], (value(plus) - value(minus)) / (2 * step), 1e-7) << k;
  }
}

TEST(AnsatzJson, RoundTrip) {
  for (const AnsatzSpec& spec :
       {meta_vqt_ansatz(HamiltonianFamily::kitaev_ring(3), 2, 1, 3),
        nn_meta_vqt_ansatz(HamiltonianFamily::heisenberg_fields(), 2, 1, 2)}) {
    const auto doc = ansatz_to_json(spec);
    EXPECT_EQ(doc.at("schema_version"), kSchemaVersion);
    EXPECT_EQ(ansatz_from_json(nlohmann::json::parse(doc.dump())), spec);
  }
}

TEST(AnsatzJson, RejectsUnknownMajorVersion) {
  auto doc = ansatz_to_json(build_su2_encoding(2, 1, 1));
  doc["schema_version"] = kSchemaVersion + 1;
  try {
    ansatz_from_json(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSchemaVersion);
  }
  doc["schema_version"] = kSchemaVersion;
  doc["gates"][0]["kind"] = "RQ";
  EXPECT_THROW(ansatz_from_json(doc), Error);
}

}  // namespace
}  // namespace metavqt
