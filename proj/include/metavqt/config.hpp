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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "metavqt/rng.hpp"
#include "metavqt/training.hpp"

namespace metavqt {

enum class Command {
  kTrainMeta,
  kTrainNnMeta,
  kEval,
  kWarmstartVqt,
  kQbm,
  kPhaseScan,
  kOracle
};

std::string_view command_name(Command c);
/// Throws ParseError for unknown names.
Command command_from_name(std::string_view name);

/// One axis of a parameter grid: uniform(a, b, n), random(a, b, n) or
/// list(x1, x2, ...).
struct GridAxis {
  enum class Kind { kUniform, kRandom, kList };
  Kind kind;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::vector<double> values;

  friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Axes joined by "x" form a product grid, first axis outermost.
struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t dim() const noexcept { return axes.size(); }
  bool empty() const noexcept { return axes.empty(); }
  std::string to_string() const;
  /// Random axes draw from `rng` in axis order.
  ParamGrid resolve(Rng& rng) const;
  /// Values of a one-axis grid.
  std::vector<double> values(Rng& rng) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws ParseError.
GridSpec parse_grid(std::string_view text);

struct RunConfig {
  Command command = Command::kOracle;

  std::string family = "tfim";
  std::size_t n = 2;
  double J = 1.0;
  double beta = 1.0;
  std::size_t n_ancilla = 2;

  std::size_t epochs = 500;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::size_t su2_layers = 2;
  std::size_t hva_layers = 2;
  std::vector<std::size_t> hidden = {16, 16, 16};
  double grad_step = 1e-4;
  GradientMethod gradient = GradientMethod::kCentralDifference;
  std::size_t threads = 1;

  GridSpec h_train;
  GridSpec h_test;

  std::string out_dir;
  std::string checkpoint;

  std::size_t vqt_epochs = 100;
  double vqt_lr = 0.01;
  std::size_t vqt_seeds = 3;

  std::vector<double> qbm_target = {0.62, 0.17, 0.17, 0.04};
  std::size_t qbm_epochs = 200;
  double qbm_lr = 0.1;
  std::vector<double> qbm_init;

  GridSpec scan_h;
  GridSpec scan_T;
  double scan_dh = 1e-3;

  HamiltonianFamily make_family() const;
  /// Root RNG for this run.
  Rng rng() const { return Rng(seed); }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Flat "key = value" pairs in the order given; later entries override.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Splits a document into key/value pairs. '#' starts a comment. Throws
/// ParseError with the offending line number.
KeyValues parse_key_values(std::string_view text);

/// Applies file entries then flag entries on top of the defaults, fills
/// command-dependent defaults and validates. Throws ParseError for unknown
/// keys or unparseable values and ValidationError listing all violations.
RunConfig parse_config(const KeyValues& file_entries,
                       const KeyValues& flag_entries = {});
RunConfig parse_config_text(std::string_view text);

/// Every key, one per line; parse_config_text(serialize(c)) == c.
std::string serialize(const RunConfig& config);

/// Throws ValidationError listing every violation.
void validate(const RunConfig& config);

/// Keys accepted by parse_config.
const std::vector<std::string>& config_keys();

}  // namespace metavqt
