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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "metavqt/config.hpp"
#include "metavqt/io.hpp"

namespace metavqt {

struct NamedTable {
  std::string name;
  CsvTable table;
};

struct ExperimentRecord {
  RunConfig config;
  /// Git blob hash of the serialized config and any input checkpoint.
  std::string input_hash;
  /// Emitted in this order, one CSV each.
  std::vector<NamedTable> tables;
  std::map<std::string, double> metrics;
  std::vector<std::string> artifacts;
  std::string started_at;
  std::string finished_at;
};

struct RunOptions {
  /// Progress lines; silent when empty.
  std::function<void(std::string_view)> log;
  /// Print a progress line every this many epochs.
  std::size_t log_every = 50;
  /// Write artifacts under the output directory.
  bool write_artifacts = true;
};

/// SHA-1 of "blob <size>\0<content>", lowercase hex.
std::string content_hash(std::string_view content);

/// $METAVQT_OUT_DIR, or "runs" when unset.
std::filesystem::path default_output_dir();
/// config.out_dir, or <default>/<command>-<hash prefix>.
std::filesystem::path output_dir_for(const ExperimentRecord& record);

/// Runs one command. Writes record.json, the command's JSON artifacts and
/// every table as CSV when options.write_artifacts is set.
ExperimentRecord run(const RunConfig& config, const RunOptions& options = {});

/// One CSV per table, named <table>.csv. Throws IncompleteRecord when the
/// record has no tables or an empty table.
std::vector<std::filesystem::path> emit_plotdata(const ExperimentRecord& record,
                                                 const std::filesystem::path& dir);

nlohmann::json record_to_json(const ExperimentRecord& record);
/// Machine-readable failure document.
nlohmann::json error_json(std::string_view command, std::string_view code,
                          std::string_view message);

/// Commuting-block study rows: id, block count and, when known, the trace
/// distance mean and standard deviation of a trained preparer.
struct BlockStudyRow {
  std::string id;
  std::size_t blocks;
  std::optional<double> td_mean;
  std::optional<double> td_std;
};
/// The six block-study Hamiltonians with their block counts; trace
/// distances are taken from `trace_distances` by id where present.
std::vector<BlockStudyRow> block_study_rows(
    const std::map<std::string, std::pair<double, double>>& trace_distances = {});
CsvTable block_study_table(const std::vector<BlockStudyRow>& rows);

/// Column names for the parameters of a family ("h", or "J","h").
std::vector<std::string> parameter_names(const HamiltonianFamily& family);

}  // namespace metavqt
