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

#include "metavqt/checkpoint.hpp"

#include <cmath>

#include "metavqt/ansatz_json.hpp"
#include "metavqt/error.hpp"
#include "metavqt/io.hpp"

namespace metavqt {
namespace {

using nlohmann::json;

json family_to_json(const HamiltonianFamily& f) {
  json j = {{"name", f.name()}, {"n_qubits", f.n_qubits()},
            {"param_dim", f.param_dim()}, {"J", f.coupling()}};
  if (f.kind() == FamilyKind::kGenericQbm) {
    json basis = json::array();
    for (const auto& b : f.basis()) basis.push_back(to_text(b));
    j["basis"] = basis;
  }
  return j;
}

HamiltonianFamily family_from_json(const json& j) {
  const auto name = j.at("name").get<std::string>();
  const auto n = j.at("n_qubits").get<std::size_t>();
  if (j.contains("basis")) {
    std::vector<PauliSum> basis;
    for (const auto& t : j.at("basis")) basis.push_back(pauli_sum_from_text(t.get<std::string>()));
    return HamiltonianFamily::generic_qbm(name, std::move(basis));
  }
  return HamiltonianFamily::from_name(name, n, j.at("J").get<double>());
}

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

json mlp_to_json(const Mlp& net) {
  return {{"layer_sizes", net.layer_sizes()},
          {"hidden_activation", "sigmoid"},
          {"output_activation", "identity"},
          {"parameters", net.flatten()}};
}

Mlp mlp_from_json(const json& j) {
  Mlp net(j.at("layer_sizes").get<std::vector<std::size_t>>());
  net.unflatten(j.at("parameters").get<std::vector<double>>());
  return net;
}

json checkpoint_to_json(const Checkpoint& c) {
  return {{"schema_version", kSchemaVersion},
          {"type", "checkpoint"},
          {"family", family_to_json(c.family)},
          {"beta", c.beta},
          {"ansatz", ansatz_to_json(c.preparer.spec())},
          {"trainables", c.preparer.trainables()},
          {"mlp", c.preparer.mlp() ? mlp_to_json(*c.preparer.mlp()) : json(nullptr)}};
}

Checkpoint checkpoint_from_json(const json& doc) {
  check_schema_version(doc);
  try {
    if (doc.at("type").get<std::string>() != "checkpoint") {
      fail(Errc::kParseError, "document is not a checkpoint");
    }
    HamiltonianFamily family = family_from_json(doc.at("family"));
    AnsatzSpec spec = ansatz_from_json(doc.at("ansatz"));
    if (spec.n_system() != family.n_qubits() || spec.param_dim() != family.param_dim()) {
      fail(Errc::kCheckpointMismatch, "stored circuit does not fit family " + family.name());
    }
    std::optional<Mlp> net;
    if (!doc.at("mlp").is_null()) net = mlp_from_json(doc.at("mlp"));
    Preparer prep(std::move(spec), doc.at("trainables").get<std::vector<double>>(),
                  std::move(net));
    return Checkpoint{std::move(family), doc.at("beta").get<double>(), std::move(prep)};
  } catch (const json::exception& e) {
    fail(Errc::kParseError, std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, checkpoint_to_json(ckpt).dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::kParseError, path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

Checkpoint checkpoint_of(const TrainReport& r) {
  return Checkpoint{r.family, r.beta, r.preparer};
}

json train_report_to_json(const TrainReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"type", "train_report"},
          {"algorithm", r.algorithm},
          {"family", family_to_json(r.family)},
          {"beta", r.beta},
          {"h_train", r.h_train},
          {"loss_history", r.loss_history},
          {"final_free_energies", r.final_free_energies},
          {"wall_time_s", r.wall_time_s},
          {"checkpoint", checkpoint_to_json(checkpoint_of(r))}};
}

json eval_points_to_json(const std::vector<EvalPoint>& points) {
  json rows = json::array();
  for (const auto& p : points) {
    rows.push_back({{"h", p.h},
                    {"fidelity", p.fidelity},
                    {"trace_distance", p.trace_distance},
                    {"free_energy", p.free_energy},
                    {"exact_free_energy", p.exact_free_energy},
                    {"rel_error", finite_or_null(p.rel_error)}});
  }
  return rows;
}

}  // namespace metavqt
