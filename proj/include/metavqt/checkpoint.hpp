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

#include <filesystem>
#include <json.hpp>

#include "metavqt/training.hpp"

namespace metavqt {

/// Everything needed to reload a trained preparer for inference.
struct Checkpoint {
  HamiltonianFamily family;
  double beta;
  Preparer preparer;
};

nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
/// Throws SchemaVersion, ParseError, or CheckpointMismatch when the stored
/// circuit does not fit the stored family.
Checkpoint checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

Checkpoint checkpoint_of(const TrainReport& report);

nlohmann::json train_report_to_json(const TrainReport& report);
nlohmann::json eval_points_to_json(const std::vector<EvalPoint>& points);

}  // namespace metavqt
