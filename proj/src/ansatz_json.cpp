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

#include "metavqt/ansatz_json.hpp"

#include <string>

#include "metavqt/error.hpp"

namespace metavqt {
namespace {

using nlohmann::json;

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kCNOT: return "CNOT";
    case GateKind::kPauliRotation: return "PauliRotation";
  }
  return "?";
}

GateKind kind_from_name(const std::string& s) {
  if (s == "RX") return GateKind::kRX;
  if (s == "RY") return GateKind::kRY;
  if (s == "RZ") return GateKind::kRZ;
  if (s == "CNOT") return GateKind::kCNOT;
  if (s == "PauliRotation") return GateKind::kPauliRotation;
  fail(Errc::kParseError, "unknown gate kind '" + s + "'");
}

json angle_to_json(const AngleSource& a) {
  return std::visit(
      [](const auto& src) -> json {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, TrainableAngle>) {
          return {{"source", "trainable"}, {"slot", src.slot}};
        } else if constexpr (std::is_same_v<T, ExternalAngle>) {
          return {{"source", "external"}, {"slot", src.slot}};
        } else if constexpr (std::is_same_v<T, EncodedAngle>) {
          return {{"source", "encoded"},
                  {"weights", src.weight_slots},
                  {"biases", src.bias_slots}};
        } else {
          return nullptr;
        }
      },
      a);
}

AngleSource angle_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  const auto src = j.at("source").get<std::string>();
  if (src == "trainable") return TrainableAngle{j.at("slot").get<std::size_t>()};
  if (src == "external") return ExternalAngle{j.at("slot").get<std::size_t>()};
  if (src == "encoded") {
    return EncodedAngle{j.at("weights").get<std::vector<std::size_t>>(),
                        j.at("biases").get<std::vector<std::size_t>>()};
  }
  fail(Errc::kParseError, "unknown angle source '" + src + "'");
}

}  // namespace

void check_schema_version(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version")) {
    fail(Errc::kSchemaVersion, "document has no schema_version");
  }
  const auto& v = doc.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    fail(Errc::kSchemaVersion,
         "unsupported schema_version " + v.dump() + ", expected " +
             std::to_string(kSchemaVersion));
  }
}

json ansatz_to_json(const AnsatzSpec& spec) {
  json gates = json::array();
  for (const auto& g : spec.gates()) {
    json jg = {{"kind", kind_name(g.kind)}, {"targets", g.targets}};
    if (g.kind == GateKind::kPauliRotation) {
      std::string letters;
      for (Pauli p : g.letters) letters.push_back(pauli_char(p));
      jg["letters"] = letters;
    }
    jg["angle"] = angle_to_json(g.angle);
    gates.push_back(std::move(jg));
  }
  return {{"schema_version", kSchemaVersion},
          {"type", "ansatz"},
          {"n_system", spec.n_system()},
          {"n_ancilla", spec.n_ancilla()},
          {"param_dim", spec.param_dim()},
          {"n_trainable", spec.n_trainable()},
          {"n_external", spec.n_external()},
          {"gates", std::move(gates)}};
}

AnsatzSpec ansatz_from_json(const json& doc) {
  check_schema_version(doc);
  try {
    AnsatzSpec spec(doc.at("n_system").get<std::size_t>(),
                    doc.at("n_ancilla").get<std::size_t>(),
                    doc.at("param_dim").get<std::size_t>());
    for (const auto& jg : doc.at("gates")) {
      const GateKind kind = kind_from_name(jg.at("kind").get<std::string>());
      GateOp g{kind, jg.at("targets").get<std::vector<std::size_t>>(), {},
               angle_from_json(jg.at("angle"))};
      if (kind == GateKind::kPauliRotation) {
        for (char c : jg.at("letters").get<std::string>()) {
          g.letters.push_back(pauli_from_char(c));
        }
      }
      spec.add_gate(std::move(g));
    }
    if (spec.n_trainable() != doc.at("n_trainable").get<std::size_t>() ||
        spec.n_external() != doc.at("n_external").get<std::size_t>()) {
      fail(Errc::kSlotMismatch, "declared store sizes disagree with gate slots");
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(Errc::kParseError, std::string("malformed ansatz document: ") + e.what());
  }
}

}  // namespace metavqt
