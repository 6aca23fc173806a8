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

#include <json.hpp>

#include "metavqt/circuit.hpp"

namespace metavqt {

/// Major version written to every JSON artifact; readers reject others.
inline constexpr int kSchemaVersion = 1;

/// Throws SchemaVersion unless doc["schema_version"] has a supported major.
void check_schema_version(const nlohmann::json& doc);

nlohmann::json ansatz_to_json(const AnsatzSpec& spec);
/// Throws ParseError on malformed documents, SlotMismatch/BadTarget if the
/// decoded program fails validation.
AnsatzSpec ansatz_from_json(const nlohmann::json& doc);

}  // namespace metavqt
