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

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "metavqt/config.hpp"
#include "metavqt/error.hpp"
#include "metavqt/experiment.hpp"
#include "metavqt/io.hpp"
#include "metavqt/pauli.hpp"

namespace {

using metavqt::KeyValues;

int report_error(std::string_view command, std::string_view code, const std::string& msg,
                 int status) {
  std::cerr << metavqt::error_json(command, code, msg).dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-learned variational Gibbs state preparation"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> sets;
  std::string out_dir;
  bool quiet = false;
  bool print_config = false;
  std::size_t log_every = 50;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"train-meta", "Train a Meta-VQT circuit on a Hamiltonian family"},
      {"train-nn-meta", "Train an NN-Meta-VQT network and circuit"},
      {"eval", "Evaluate a checkpoint against exact Gibbs states"},
      {"warmstart-vqt", "Compare checkpoint-initialised and random single-point VQT"},
      {"qbm", "Train a quantum Boltzmann machine on a frozen preparer"},
      {"phase-scan", "Susceptibility and crossover-temperature scan"},
      {"oracle", "Exact free energies and commuting blocks over a grid"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("-s,--set", sets, "Override a key: --set train.epochs=200");
    sub->add_option("-o,--out", out_dir, "Output directory");
    sub->add_flag("-q,--quiet", quiet, "No progress output");
    sub->add_option("--log-every", log_every, "Progress line interval in epochs");
    sub->add_flag("--print-config", print_config,
                  "Print the resolved configuration and exit");
  }

  std::string inspect_family = "tfim";
  std::size_t inspect_n = 2;
  double inspect_J = 1.0;
  std::vector<double> inspect_params;
  CLI::App* inspect = app.add_subcommand("inspect", "Print a Hamiltonian as Pauli terms");
  inspect->add_option("--family", inspect_family, "Family name");
  inspect->add_option("--n", inspect_n, "System size");
  inspect->add_option("--J", inspect_J, "Coupling");
  inspect->add_option("--params", inspect_params, "Hamiltonian parameters")->required();

  CLI::App* keys = app.add_subcommand("keys", "List configuration keys");

  CLI11_PARSE(app, argc, argv);

  if (keys->parsed()) {
    for (const auto& k : metavqt::config_keys()) std::cout << k << "\n";
    return 0;
  }
  if (inspect->parsed()) {
    try {
      const auto fam = metavqt::HamiltonianFamily::from_name(inspect_family, inspect_n, inspect_J);
      const auto hs = fam.build(inspect_params);
      std::cout << metavqt::to_text(hs);
      std::cout << "# commuting blocks: " << metavqt::commuting_blocks(hs).count() << "\n";
      return 0;
    } catch (const metavqt::Error& e) {
      return report_error("inspect", metavqt::errc_name(e.code()), e.what(), 2);
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  metavqt::RunConfig config;
  try {
    KeyValues file_entries;
    if (!config_file.empty()) {
      file_entries = metavqt::parse_key_values(metavqt::read_file(config_file));
    }
    KeyValues flags{{"command", command}};
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw metavqt::Error(metavqt::Errc::kParseError,
                             "--set " + s + ": expected key=value");
      }
      flags.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) flags.emplace_back("io.out_dir", out_dir);
    config = metavqt::parse_config(file_entries, flags);
  } catch (const metavqt::Error& e) {
    return report_error(command, metavqt::errc_name(e.code()), e.what(), 2);
  }

  if (print_config) {
    std::cout << metavqt::serialize(config);
    return 0;
  }

  metavqt::RunOptions opts;
  opts.log_every = log_every;
  if (!quiet) opts.log = [](std::string_view line) { std::cerr << line << "\n"; };
  try {
    const auto record = metavqt::run(config, opts);
    std::cout << metavqt::record_to_json(record).dump(2) << "\n";
    return 0;
  } catch (const metavqt::Error& e) {
    return report_error(command, metavqt::errc_name(e.code()), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error(command, "Internal", e.what(), 1);
  }
}
