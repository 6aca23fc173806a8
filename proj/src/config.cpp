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

#include "metavqt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "metavqt/error.hpp"
#include "metavqt/io.hpp"

namespace metavqt {
namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::kTrainMeta, "train-meta"},     {Command::kTrainNnMeta, "train-nn-meta"},
    {Command::kEval, "eval"},                {Command::kWarmstartVqt, "warmstart-vqt"},
    {Command::kQbm, "qbm"},                  {Command::kPhaseScan, "phase-scan"},
    {Command::kOracle, "oracle"}};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string normalize_minus(std::string_view s) {
  std::string out(s);
  const std::string minus = "\xE2\x88\x92";  // U+2212
  for (auto pos = out.find(minus); pos != std::string::npos; pos = out.find(minus, pos)) {
    out.replace(pos, minus.size(), "-");
  }
  return out;
}

double parse_double(std::string_view text, const std::string& what) {
  const std::string s = trim(normalize_minus(text));
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(Errc::kParseError, what + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

long long parse_int(std::string_view text, const std::string& what) {
  const std::string s = trim(normalize_minus(text));
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(Errc::kParseError, what + ": '" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> parse_list(std::string_view text, const std::string& what) {
  std::string s = trim(text);
  if (s.starts_with("list(") && s.ends_with(")")) s = s.substr(5, s.size() - 6);
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_double(item, what));
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

std::string axis_to_string(const GridAxis& a) {
  switch (a.kind) {
    case GridAxis::Kind::kUniform:
    case GridAxis::Kind::kRandom:
      return std::string(a.kind == GridAxis::Kind::kUniform ? "uniform(" : "random(") +
             format_double(a.lo) + ", " + format_double(a.hi) + ", " +
             std::to_string(a.count) + ")";
    case GridAxis::Kind::kList:
      return "list(" + join_doubles(a.values) + ")";
  }
  return {};
}

GridAxis parse_axis(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || !text.ends_with(")")) {
    fail(Errc::kParseError, "grid axis '" + text + "' must look like name(...)");
  }
  const std::string name = trim(text.substr(0, open));
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  GridAxis a{};
  if (name == "list") {
    a.kind = GridAxis::Kind::kList;
    a.values = parse_list(body, "grid list");
    if (a.values.empty()) fail(Errc::kParseError, "grid list is empty");
    return a;
  }
  if (name != "uniform" && name != "random") {
    fail(Errc::kParseError, "unknown grid axis '" + name + "'");
  }
  const auto parts = split(body, ',');
  if (parts.size() != 3) {
    fail(Errc::kParseError, name + "(lo, hi, n) takes three arguments");
  }
  a.kind = name == "uniform" ? GridAxis::Kind::kUniform : GridAxis::Kind::kRandom;
  a.lo = parse_double(parts[0], name + " lower bound");
  a.hi = parse_double(parts[1], name + " upper bound");
  const long long n = parse_int(parts[2], name + " point count");
  if (n < 1) fail(Errc::kParseError, name + " point count must be at least 1");
  a.count = static_cast<std::size_t>(n);
  return a;
}

std::string sizes_to_string(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::size_t parse_count(std::string_view text, const std::string& key) {
  const long long v = parse_int(text, key);
  // Negative counts are a validation problem, not a syntax one.
  return v < 0 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(v);
}

struct Setter {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto count = [&t](const std::string& key, std::size_t RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) { c.*field = parse_count(v, key); },
                [field](const RunConfig& c) { return std::to_string(c.*field); }};
    };
    auto real = [&t](const std::string& key, double RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) { c.*field = parse_double(v, key); },
                [field](const RunConfig& c) { return format_double(c.*field); }};
    };
    auto text = [&t](const std::string& key, std::string RunConfig::*field) {
      t[key] = {[field](RunConfig& c, const std::string& v) { c.*field = v; },
                [field](const RunConfig& c) { return c.*field; }};
    };
    auto grid = [&t](const std::string& key, GridSpec RunConfig::*field) {
      t[key] = {[field](RunConfig& c, const std::string& v) { c.*field = parse_grid(v); },
                [field](const RunConfig& c) { return (c.*field).to_string(); }};
    };
    auto reals = [&t](const std::string& key, std::vector<double> RunConfig::*field) {
      t[key] = {[key, field](RunConfig& c, const std::string& v) { c.*field = parse_list(v, key); },
                [field](const RunConfig& c) { return "list(" + join_doubles(c.*field) + ")"; }};
    };
    t["command"] = {[](RunConfig& c, const std::string& v) { c.command = command_from_name(v); },
                    [](const RunConfig& c) { return std::string(command_name(c.command)); }};
    text("model.family", &RunConfig::family);
    count("model.n", &RunConfig::n);
    real("model.J", &RunConfig::J);
    real("model.beta", &RunConfig::beta);
    count("model.n_ancilla", &RunConfig::n_ancilla);
    count("train.epochs", &RunConfig::epochs);
    real("train.lr", &RunConfig::lr);
    t["train.seed"] = {[](RunConfig& c, const std::string& v) {
                         const long long s = parse_int(v, "train.seed");
                         if (s < 0) fail(Errc::kParseError, "train.seed must be non-negative");
                         c.seed = static_cast<std::uint64_t>(s);
                       },
                       [](const RunConfig& c) { return std::to_string(c.seed); }};
    count("train.su2_layers", &RunConfig::su2_layers);
    count("train.hva_layers", &RunConfig::hva_layers);
    t["train.hidden"] = {[](RunConfig& c, const std::string& v) {
                           c.hidden.clear();
                           if (trim(v).empty()) return;
                           for (const auto& item : split(v, ',')) {
                             c.hidden.push_back(parse_count(item, "train.hidden"));
                           }
                         },
                         [](const RunConfig& c) { return sizes_to_string(c.hidden); }};
    real("train.grad_step", &RunConfig::grad_step);
    t["train.gradient"] = {
        [](RunConfig& c, const std::string& v) {
          try {
            c.gradient = gradient_method_from_name(v);
          } catch (const Error& e) {
            fail(Errc::kParseError, std::string("train.gradient: ") + e.what());
          }
        },
        [](const RunConfig& c) { return std::string(gradient_method_name(c.gradient)); }};
    count("train.threads", &RunConfig::threads);
    grid("grid.train", &RunConfig::h_train);
    grid("grid.test", &RunConfig::h_test);
    text("io.out_dir", &RunConfig::out_dir);
    text("io.checkpoint", &RunConfig::checkpoint);
    count("vqt.epochs", &RunConfig::vqt_epochs);
    real("vqt.lr", &RunConfig::vqt_lr);
    count("vqt.seeds", &RunConfig::vqt_seeds);
    reals("qbm.target", &RunConfig::qbm_target);
    count("qbm.epochs", &RunConfig::qbm_epochs);
    real("qbm.lr", &RunConfig::qbm_lr);
    reals("qbm.init", &RunConfig::qbm_init);
    grid("scan.h", &RunConfig::scan_h);
    grid("scan.T", &RunConfig::scan_T);
    real("scan.dh", &RunConfig::scan_dh);
    return t;
  }();
  return table;
}

void fill_defaults(RunConfig& c, const std::set<std::string>& given) {
  if (!given.count("train.lr")) c.lr = c.command == Command::kTrainNnMeta ? 0.001 : 0.01;
  std::size_t n_sys = c.n;
  try {
    n_sys = c.make_family().n_qubits();
  } catch (const Error&) {
  }
  if (!given.count("model.n_ancilla")) c.n_ancilla = n_sys;
  const bool two_param = c.family == "heisenberg" || c.family == "heisenberg-qbm" ||
                         (c.family.starts_with("blocks-") && c.family != "blocks-1");
  if (!given.count("grid.train")) {
    if (c.family == "kitaev") {
      c.h_train = parse_grid("uniform(0.7, 1.2, 20)");
    } else if (two_param) {
      c.h_train = parse_grid("random(-2, 2, 10) x random(-2, 2, 10)");
    } else {
      c.h_train = parse_grid("uniform(-2, 2, 10)");
    }
  }
  if (!given.count("grid.test")) {
    if (c.family == "kitaev") {
      c.h_test = parse_grid("uniform(0.7, 1.2, 40)");
    } else if (two_param) {
      c.h_test = parse_grid("uniform(-2, 2, 10) x uniform(-2, 2, 10)");
    } else {
      c.h_test = parse_grid("uniform(-2, 2, 40)");
    }
  }
  if (!given.count("scan.h")) c.scan_h = parse_grid("list(0.7, 0.8, 0.9, 1, 1.1, 1.2)");
  if (!given.count("scan.T")) c.scan_T = parse_grid("uniform(0.02, 1, 50)");
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

Command command_from_name(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  fail(Errc::kParseError, "unknown command '" + std::string(name) + "'");
}

std::string GridSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i) out += " x ";
    out += axis_to_string(axes[i]);
  }
  return out;
}

std::vector<double> GridSpec::values(Rng& rng) const {
  if (axes.size() != 1) fail(Errc::kConfigInvalid, "expected a one-axis grid");
  const GridAxis& a = axes[0];
  switch (a.kind) {
    case GridAxis::Kind::kUniform: return linspace(a.lo, a.hi, a.count);
    case GridAxis::Kind::kList: return a.values;
    case GridAxis::Kind::kRandom: {
      std::vector<double> v(a.count);
      for (auto& x : v) x = rng.uniform(a.lo, a.hi);
      return v;
    }
  }
  return {};
}

ParamGrid GridSpec::resolve(Rng& rng) const {
  ParamGrid grid{{}};
  for (const auto& axis : axes) {
    const auto vals = GridSpec{{axis}}.values(rng);
    ParamGrid next;
    for (const auto& prefix : grid) {
      for (double v : vals) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  if (axes.empty()) grid.clear();
  return grid;
}

GridSpec parse_grid(std::string_view text) {
  std::string s = normalize_minus(text);
  const std::string times = "\xC3\x97";  // U+00D7
  for (auto pos = s.find(times); pos != std::string::npos; pos = s.find(times, pos)) {
    s.replace(pos, times.size(), " x ");
  }
  GridSpec g;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const bool end = i == s.size();
    if (!end && s[i] == '(') ++depth;
    if (!end && s[i] == ')') --depth;
    if (end || (depth == 0 && (s[i] == 'x' || s[i] == 'X') && i > 0 &&
                (s[i - 1] == ' ' || s[i - 1] == ')'))) {
      const std::string part = trim(std::string_view(s).substr(start, i - start));
      if (part.empty()) fail(Errc::kParseError, "empty grid axis in '" + s + "'");
      g.axes.push_back(parse_axis(part));
      start = i + 1;
    }
  }
  if (depth != 0) fail(Errc::kParseError, "unbalanced parentheses in grid '" + s + "'");
  return g;
}

HamiltonianFamily RunConfig::make_family() const {
  return HamiltonianFamily::from_name(family, n, J);
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line(text.substr(start, end - start));
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(Errc::kParseError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(Errc::kParseError, "line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    if (end == text.size()) break;
  }
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, s] : setters()) k.push_back(key);
    return k;
  }();
  return keys;
}

RunConfig parse_config(const KeyValues& file_entries, const KeyValues& flag_entries) {
  RunConfig c;
  std::set<std::string> given;
  auto apply = [&](const KeyValues& entries, const char* origin) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& [key, value] = entries[i];
      const auto it = setters().find(key);
      const std::string where = std::string(origin) + " entry " + std::to_string(i + 1);
      if (it == setters().end()) {
        fail(Errc::kParseError, where + ": unknown key '" + key + "'");
      }
      try {
        it->second.set(c, value);
      } catch (const Error& e) {
        fail(Errc::kParseError, where + " (" + key + "): " + e.what());
      }
      given.insert(key);
    }
  };
  apply(file_entries, "config");
  apply(flag_entries, "flag");
  fill_defaults(c, given);
  validate(c);
  return c;
}

RunConfig parse_config_text(std::string_view text) {
  const KeyValues entries = parse_key_values(text);
  // Re-tag unknown keys with their line numbers.
  std::size_t line_no = 0;
  std::size_t start = 0;
  std::vector<std::size_t> lines;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line(text.substr(start, end - start));
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!trim(line).empty()) lines.push_back(line_no);
    start = end + 1;
    if (end == text.size()) break;
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!setters().count(entries[i].first)) {
      fail(Errc::kParseError, "line " + std::to_string(lines[i]) + ": unknown key '" +
                                  entries[i].first + "'");
    }
    try {
      RunConfig scratch;
      setters().at(entries[i].first).set(scratch, entries[i].second);
    } catch (const Error& e) {
      fail(Errc::kParseError, "line " + std::to_string(lines[i]) + " (" + entries[i].first +
                                  "): " + e.what());
    }
  }
  return parse_config(entries);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  for (const auto& [key, s] : setters()) os << key << " = " << s.get(c) << "\n";
  return os.str();
}

void validate(const RunConfig& c) {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  constexpr auto kBad = static_cast<std::size_t>(-1);
  std::optional<HamiltonianFamily> family;
  try {
    family = c.make_family();
    family->pattern();
  } catch (const Error& e) {
    problems.push_back(std::string("model: ") + e.what());
  }
  need(c.beta > 0.0 && std::isfinite(c.beta), "model.beta must be positive");
  need(c.n != kBad, "model.n must be non-negative");
  need(c.n_ancilla != kBad, "model.n_ancilla must be non-negative");
  need(c.epochs != kBad, "train.epochs must be non-negative");
  need(c.lr > 0.0 && std::isfinite(c.lr), "train.lr must be positive");
  need(c.su2_layers != kBad, "train.su2_layers must be non-negative");
  need(c.hva_layers != kBad, "train.hva_layers must be non-negative");
  need(std::all_of(c.hidden.begin(), c.hidden.end(),
                   [](std::size_t w) { return w != kBad && w > 0; }),
       "train.hidden widths must be positive");
  need(c.grad_step > 0.0, "train.grad_step must be positive");
  need(c.threads != kBad && c.threads >= 1, "train.threads must be at least 1");
  need(c.vqt_epochs != kBad, "vqt.epochs must be non-negative");
  need(c.vqt_lr > 0.0, "vqt.lr must be positive");
  need(c.vqt_seeds != kBad && c.vqt_seeds >= 1, "vqt.seeds must be at least 1");
  need(c.qbm_epochs != kBad, "qbm.epochs must be non-negative");
  need(c.qbm_lr > 0.0, "qbm.lr must be positive");
  need(c.scan_dh > 0.0 && c.scan_dh <= 0.1, "scan.dh must lie in (0, 0.1]");
  if (family) {
    const std::size_t p = family->param_dim();
    need(c.h_train.dim() == p, "grid.train must have " + std::to_string(p) + " axis/axes");
    need(c.h_test.dim() == p, "grid.test must have " + std::to_string(p) + " axis/axes");
    need(family->n_qubits() + (c.n_ancilla == kBad ? 0 : c.n_ancilla) <= 16,
         "system plus ancilla register exceeds 16 qubits");
    if (c.command == Command::kTrainMeta) {
      need(c.su2_layers >= 1, "train-meta needs train.su2_layers >= 1");
    }
    if (c.command == Command::kQbm) {
      const double mass = std::accumulate(c.qbm_target.begin(), c.qbm_target.end(), 0.0);
      need(c.qbm_target.size() == (std::size_t{1} << family->n_qubits()),
           "qbm.target must have 2^n entries");
      need(std::abs(mass - 1.0) <= 1e-9, "qbm.target must sum to 1");
      need(std::all_of(c.qbm_target.begin(), c.qbm_target.end(),
                       [](double x) { return x >= 0.0; }),
           "qbm.target entries must be non-negative");
      need(c.qbm_init.empty() || c.qbm_init.size() == p,
           "qbm.init must be empty or have param_dim entries");
    }
    if (c.command == Command::kPhaseScan) {
      need(p == 1, "phase-scan needs a single-field family");
      need(c.scan_h.dim() == 1, "scan.h must have one axis");
      need(c.scan_T.dim() == 1, "scan.T must have one axis");
    }
  }
  if (c.command == Command::kEval || c.command == Command::kWarmstartVqt ||
      c.command == Command::kQbm) {
    need(!c.checkpoint.empty(), std::string(command_name(c.command)) +
                                    " needs io.checkpoint");
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << problems.size() << " problem(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
    fail(Errc::kValidationError, os.str());
  }
}

}  // namespace metavqt
