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

#include "metavqt/experiment.hpp"

#include <openssl/sha.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "metavqt/ansatz_json.hpp"
#include "metavqt/checkpoint.hpp"
#include "metavqt/error.hpp"
#include "metavqt/qbm.hpp"
#include "metavqt/thermal.hpp"

namespace metavqt {
namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::vector<CsvCell> cells(std::span<const double> v) { return {v.begin(), v.end()}; }

CsvTable eval_table(const HamiltonianFamily& family, const std::vector<EvalPoint>& pts) {
  CsvTable t{parameter_names(family), {}};
  for (const char* c : {"G_var", "G_exact", "fidelity", "trace_distance", "rel_error"}) {
    t.columns.push_back(c);
  }
  for (const auto& p : pts) {
    auto row = cells(p.h);
    row.insert(row.end(), {p.free_energy, p.exact_free_energy, p.fidelity, p.trace_distance});
    if (p.degenerate_denominator) {
      row.emplace_back(std::string());
    } else {
      row.emplace_back(p.rel_error);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable loss_table(const std::vector<double>& losses, const char* name) {
  CsvTable t{{"epoch", name}, {}};
  for (std::size_t i = 0; i < losses.size(); ++i) {
    t.rows.push_back({static_cast<double>(i), losses[i]});
  }
  return t;
}

void add_summary(ExperimentRecord& rec, const std::vector<EvalPoint>& pts) {
  const EvalSummary s = summarize(pts);
  rec.metrics["mean_fidelity"] = s.mean_fidelity;
  rec.metrics["min_fidelity"] = s.min_fidelity;
  rec.metrics["mean_trace_distance"] = s.mean_trace_distance;
  rec.metrics["std_trace_distance"] = s.std_trace_distance;
  rec.metrics["max_rel_error"] = s.max_rel_error;
  rec.metrics["mean_rel_error"] = s.mean_rel_error;
}

MetaTrainConfig meta_config(const RunConfig& c, const HamiltonianFamily& family,
                            const ParamGrid& h_train, const RunOptions& opts) {
  MetaTrainConfig m;
  m.family = family;
  m.beta = c.beta;
  m.h_train = h_train;
  m.epochs = c.epochs;
  m.lr = c.lr;
  m.seed = c.seed;
  m.su2_layers = c.su2_layers;
  m.hva_layers = c.hva_layers;
  m.n_ancilla = c.n_ancilla;
  m.hidden_sizes = c.hidden;
  m.grad_step = c.grad_step;
  m.gradient = c.gradient;
  m.threads = c.threads;
  if (opts.log && opts.log_every > 0) {
    m.on_epoch = [&opts](std::size_t epoch, double loss) {
      if (epoch % opts.log_every == 0) {
        opts.log("epoch " + std::to_string(epoch) + " loss " + format_double(loss));
      }
    };
  }
  return m;
}

void write_json(const std::filesystem::path& path, const json& doc,
                ExperimentRecord& rec) {
  write_file_atomic(path, doc.dump(2) + "\n");
  rec.artifacts.push_back(path.string());
}

void run_oracle(ExperimentRecord& rec, const HamiltonianFamily& family,
                const ParamGrid& grid) {
  CsvTable t{parameter_names(family), {}};
  t.columns.insert(t.columns.end(), {"G_exact", "log_Z"});
  for (const auto& h : grid) {
    const ThermalPoint tp = exact_gibbs(family.build(h), rec.config.beta);
    auto row = cells(h);
    row.insert(row.end(), {tp.free_energy, tp.log_partition_fn});
    t.rows.push_back(std::move(row));
  }
  rec.tables.push_back({"oracle", std::move(t)});
  const std::size_t blocks = commuting_blocks(family.pattern()).count();
  rec.tables.push_back({"blocks", CsvTable{{"hamiltonian", "blocks"},
                                           {{family.name(), static_cast<double>(blocks)}}}});
  rec.metrics["commuting_blocks"] = static_cast<double>(blocks);
}

}  // namespace

std::string content_hash(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::ostringstream os;
  for (unsigned char b : digest) os << std::hex << std::setw(2) << std::setfill('0') << int(b);
  return os.str();
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("METAVQT_OUT_DIR"); env && *env) return env;
  return "runs";
}

std::filesystem::path output_dir_for(const ExperimentRecord& rec) {
  if (!rec.config.out_dir.empty()) return rec.config.out_dir;
  return default_output_dir() /
         (std::string(command_name(rec.config.command)) + "-" + rec.input_hash.substr(0, 12));
}

std::vector<std::string> parameter_names(const HamiltonianFamily& family) {
  if (family.param_dim() == 1) return {"h"};
  if (family.param_dim() == 2) return {"J", "h"};
  std::vector<std::string> out;
  for (std::size_t k = 0; k < family.param_dim(); ++k) out.push_back("h" + std::to_string(k + 1));
  return out;
}

std::vector<BlockStudyRow> block_study_rows(
    const std::map<std::string, std::pair<double, double>>& trace_distances) {
  std::vector<BlockStudyRow> rows;
  for (int r = 1; r <= 6; ++r) {
    const HamiltonianFamily f = HamiltonianFamily::block_study(r);
    BlockStudyRow row{f.name(), commuting_blocks(f.pattern()).count(), {}, {}};
    if (const auto it = trace_distances.find(f.name()); it != trace_distances.end()) {
      row.td_mean = it->second.first;
      row.td_std = it->second.second;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable block_study_table(const std::vector<BlockStudyRow>& rows) {
  CsvTable t{{"hamiltonian", "blocks", "td_mean", "td_std"}, {}};
  auto opt = [](const std::optional<double>& x) -> CsvCell {
    if (x) return *x;
    return std::string();
  };
  for (const auto& r : rows) {
    t.rows.push_back({r.id, static_cast<double>(r.blocks), opt(r.td_mean), opt(r.td_std)});
  }
  return t;
}

ExperimentRecord run(const RunConfig& config, const RunOptions& opts) {
  validate(config);
  ExperimentRecord rec;
  rec.config = config;
  rec.started_at = utc_now();
  std::string inputs = serialize(config);
  std::optional<Checkpoint> ckpt;
  if (!config.checkpoint.empty() && config.command != Command::kTrainMeta &&
      config.command != Command::kTrainNnMeta && config.command != Command::kOracle &&
      config.command != Command::kPhaseScan) {
    inputs += read_file(config.checkpoint);
    ckpt = load_checkpoint(config.checkpoint);
  }
  rec.input_hash = content_hash(inputs);
  const std::filesystem::path dir = output_dir_for(rec);
  const HamiltonianFamily family = config.make_family();
  const Rng root = config.rng();
  Rng train_rng = root.split("grid/train");
  Rng test_rng = root.split("grid/test");
  const ParamGrid h_train = config.h_train.resolve(train_rng);
  const ParamGrid h_test = config.h_test.resolve(test_rng);
  const std::size_t threads = config.threads;

  auto require_family = [&](const Checkpoint& c) {
    if (c.family.n_qubits() != family.n_qubits() ||
        c.family.param_dim() != family.param_dim()) {
      fail(Errc::kCheckpointMismatch, "checkpoint family " + c.family.name() +
                                          " does not match configured family " +
                                          family.name());
    }
  };

  switch (config.command) {
    case Command::kOracle:
      run_oracle(rec, family, h_test);
      break;

    case Command::kTrainMeta:
    case Command::kTrainNnMeta: {
      const MetaTrainConfig mc = meta_config(config, family, h_train, opts);
      const TrainReport report = config.command == Command::kTrainMeta
                                     ? train_meta_vqt(mc)
                                     : train_nn_meta_vqt(mc);
      rec.tables.push_back({"loss", loss_table(report.loss_history, "global_loss")});
      CsvTable train_pts{parameter_names(family), {}};
      train_pts.columns.push_back("G_var");
      for (std::size_t i = 0; i < h_train.size(); ++i) {
        auto row = cells(h_train[i]);
        row.emplace_back(report.final_free_energies[i]);
        train_pts.rows.push_back(std::move(row));
      }
      rec.tables.push_back({"train_points", std::move(train_pts)});
      const auto pts = evaluate_on_grid(report.preparer, family, h_test, config.beta, threads);
      rec.tables.push_back({"eval", eval_table(family, pts)});
      add_summary(rec, pts);
      rec.metrics["final_loss"] =
          report.loss_history.empty() ? std::nan("") : report.loss_history.back();
      rec.metrics["wall_time_s"] = report.wall_time_s;
      if (opts.write_artifacts) {
        write_json(dir / "checkpoint.json", checkpoint_to_json(checkpoint_of(report)), rec);
        write_json(dir / "train_report.json", train_report_to_json(report), rec);
      }
      break;
    }

    case Command::kEval: {
      require_family(*ckpt);
      const auto pts = evaluate_on_grid(ckpt->preparer, family, h_test, config.beta, threads);
      rec.tables.push_back({"eval", eval_table(family, pts)});
      add_summary(rec, pts);
      if (family.name().starts_with("blocks-")) {
        const EvalSummary s = summarize(pts);
        rec.tables.push_back(
            {"block_study", block_study_table(block_study_rows(
                           {{family.name(), {s.mean_trace_distance, s.std_trace_distance}}}))});
      }
      break;
    }

    case Command::kWarmstartVqt: {
      require_family(*ckpt);
      VqtConfig vc;
      vc.beta = config.beta;
      vc.epochs = config.vqt_epochs;
      vc.lr = config.vqt_lr;
      vc.grad_step = config.grad_step;
      vc.gradient = config.gradient;
      vc.threads = threads;
      const AnsatzSpec random_spec =
          ckpt->preparer.mlp() ? externals_as_trainables(ckpt->preparer.spec())
                               : ckpt->preparer.spec();
      CsvTable summary{parameter_names(family), {}};
      summary.columns.insert(summary.columns.end(),
                             {"init", "seed", "fidelity", "trace_distance", "G_var", "G_exact"});
      CsvTable curves{parameter_names(family), {}};
      curves.columns.insert(curves.columns.end(), {"init", "seed", "epoch", "loss"});
      double meta_sum = 0.0;
      double rand_sum = 0.0;
      std::size_t meta_n = 0;
      std::size_t rand_n = 0;
      auto record_run = [&](const VqtReport& r, const std::string& init, double seed) {
        auto row = cells(r.h);
        row.insert(row.end(), {CsvCell(init), CsvCell(seed), CsvCell(r.fidelity),
                               CsvCell(r.trace_distance), CsvCell(r.free_energy),
                               CsvCell(r.exact_free_energy)});
        summary.rows.push_back(std::move(row));
        for (std::size_t e = 0; e < r.loss_history.size(); ++e) {
          auto c = cells(r.h);
          c.insert(c.end(), {CsvCell(init), CsvCell(seed), CsvCell(static_cast<double>(e)),
                             CsvCell(r.loss_history[e])});
          curves.rows.push_back(std::move(c));
        }
      };
      for (const auto& h : h_test) {
        const VqtReport meta = train_vqt_single(family, h, ckpt->preparer, vc);
        record_run(meta, "meta", 0.0);
        meta_sum += meta.fidelity;
        ++meta_n;
        for (std::size_t s = 0; s < config.vqt_seeds; ++s) {
          Rng rng = root.split("warmstart/random/" + std::to_string(s));
          const Preparer init(random_spec, random_trainables(random_spec, rng));
          const VqtReport rnd = train_vqt_single(family, h, init, vc);
          record_run(rnd, "random", static_cast<double>(s));
          rand_sum += rnd.fidelity;
          ++rand_n;
        }
        if (opts.log) opts.log("warm start done at h = " + format_double(h[0]));
      }
      rec.tables.push_back({"warmstart", std::move(summary)});
      rec.tables.push_back({"warmstart_loss", std::move(curves)});
      rec.metrics["mean_fidelity_meta_init"] = meta_sum / static_cast<double>(meta_n);
      rec.metrics["mean_fidelity_random_init"] = rand_sum / static_cast<double>(rand_n);
      break;
    }

    case Command::kQbm: {
      require_family(*ckpt);
      QbmConfig qc;
      qc.p_target = config.qbm_target;
      qc.family = family;
      qc.beta = config.beta;
      qc.epochs = config.qbm_epochs;
      qc.lr = config.qbm_lr;
      qc.grad_step = config.grad_step;
      qc.seed = config.seed;
      if (!config.qbm_init.empty()) qc.init = config.qbm_init;
      qc.threads = threads;
      const QbmReport r = train_qbm(qc, ckpt->preparer);
      CsvTable t{{"epoch", "kl", "trace_distance"}, {}};
      for (const auto& name : parameter_names(family)) t.columns.push_back(name);
      for (std::size_t e = 0; e < r.kl_history.size(); ++e) {
        std::vector<CsvCell> row{static_cast<double>(e), r.kl_history[e],
                                 r.trace_distance_history[e]};
        for (double x : r.coefficient_history[e]) row.emplace_back(x);
        t.rows.push_back(std::move(row));
      }
      rec.tables.push_back({"qbm", std::move(t)});
      CsvTable dist{{"outcome", "p_target", "p_model"}, {}};
      for (std::size_t k = 0; k < r.final_p_model.size(); ++k) {
        dist.rows.push_back({static_cast<double>(k), config.qbm_target[k], r.final_p_model[k]});
      }
      rec.tables.push_back({"qbm_distribution", std::move(dist)});
      double td = 0.0;
      for (double x : r.trace_distance_history) td += x;
      rec.metrics["final_kl"] = r.kl_history.empty() ? std::nan("") : r.kl_history.back();
      rec.metrics["mean_trace_distance"] =
          r.trace_distance_history.empty()
              ? std::nan("")
              : td / static_cast<double>(r.trace_distance_history.size());
      rec.metrics["preparer_invocations"] = static_cast<double>(r.preparer_invocations);
      for (std::size_t k = 0; k < r.final_coefficients.size(); ++k) {
        rec.metrics["final_" + parameter_names(family)[k]] = r.final_coefficients[k];
      }
      break;
    }

    case Command::kPhaseScan: {
      Rng scan_rng = root.split("grid/scan");
      const auto hs = config.scan_h.values(scan_rng);
      const auto temps = config.scan_T.values(scan_rng);
      CsvTable chi{{"h", "T", "chi"}, {}};
      CsvTable cross{{"h", "T_star", "interior"}, {}};
      std::size_t interior = 0;
      for (double h : hs) {
        const SusceptibilityScan s = scan_susceptibility(family, h, temps, config.scan_dh);
        for (std::size_t i = 0; i < s.temperatures.size(); ++i) {
          chi.rows.push_back({h, s.temperatures[i], s.chi[i]});
        }
        cross.rows.push_back(
            {h, s.crossover_temperature(), s.interior_maximum() ? 1.0 : 0.0});
        if (s.interior_maximum()) ++interior;
      }
      rec.tables.push_back({"susceptibility", std::move(chi)});
      rec.tables.push_back({"crossover", std::move(cross)});
      rec.metrics["interior_maxima"] = static_cast<double>(interior);
      rec.metrics["scanned_fields"] = static_cast<double>(hs.size());
      break;
    }
  }

  rec.finished_at = utc_now();
  if (opts.write_artifacts) {
    for (const auto& p : emit_plotdata(rec, dir)) rec.artifacts.push_back(p.string());
    rec.artifacts.push_back((dir / "record.json").string());
    write_file_atomic(dir / "record.json", record_to_json(rec).dump(2) + "\n");
  }
  return rec;
}

std::vector<std::filesystem::path> emit_plotdata(const ExperimentRecord& rec,
                                                 const std::filesystem::path& dir) {
  if (rec.tables.empty()) fail(Errc::kIncompleteRecord, "record has no metric tables");
  for (const auto& t : rec.tables) {
    if (t.table.rows.empty()) {
      fail(Errc::kIncompleteRecord, "table '" + t.name + "' has no rows");
    }
  }
  std::vector<std::filesystem::path> out;
  for (const auto& t : rec.tables) {
    const auto path = dir / (t.name + ".csv");
    write_file_atomic(path, t.table.to_string());
    out.push_back(path);
  }
  return out;
}

json record_to_json(const ExperimentRecord& rec) {
  json metrics = json::object();
  for (const auto& [k, v] : rec.metrics) {
    metrics[k] = std::isfinite(v) ? json(v) : json(nullptr);
  }
  json tables = json::array();
  for (const auto& t : rec.tables) {
    tables.push_back({{"name", t.name}, {"columns", t.table.columns},
                      {"rows", t.table.rows.size()}});
  }
  return {{"schema_version", kSchemaVersion},
          {"type", "experiment_record"},
          {"command", command_name(rec.config.command)},
          {"config", serialize(rec.config)},
          {"input_hash", rec.input_hash},
          {"metrics", metrics},
          {"tables", tables},
          {"artifacts", rec.artifacts},
          {"started_at", rec.started_at},
          {"finished_at", rec.finished_at}};
}

json error_json(std::string_view command, std::string_view code, std::string_view message) {
  return {{"schema_version", kSchemaVersion},
          {"type", "error"},
          {"command", command},
          {"code", code},
          {"message", message}};
}

}  // namespace metavqt
