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

#include "metavqt/training.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "metavqt/error.hpp"
#include "metavqt/optim.hpp"
#include "metavqt/parallel.hpp"
#include "metavqt/thermal.hpp"

namespace metavqt {
namespace {

DensityMatrix system_state(const StateVector& psi, std::size_t n_system) {
  if (psi.n_qubits() == n_system) return DensityMatrix::from_pure(psi);
  return reduced_state(psi, n_system);
}

std::vector<PauliSum> build_all(const HamiltonianFamily& family,
                                const ParamGrid& grid) {
  std::vector<PauliSum> out;
  out.reserve(grid.size());
  for (const auto& h : grid) out.push_back(family.build(h));
  return out;
}

void check_finite(double loss, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    fail(Errc::kNonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch));
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct PointGrad {
  double value;
  std::vector<double> grad;
};

}  // namespace

std::string_view gradient_method_name(GradientMethod m) {
  return m == GradientMethod::kAdjoint ? "adjoint" : "central-difference";
}

GradientMethod gradient_method_from_name(std::string_view name) {
  if (name == "central-difference") return GradientMethod::kCentralDifference;
  if (name == "adjoint") return GradientMethod::kAdjoint;
  fail(Errc::kConfigInvalid, "unknown gradient method '" + std::string(name) + "'");
}

Preparer::Preparer(AnsatzSpec spec, std::vector<double> trainables,
                   std::optional<Mlp> mlp)
    : program_(spec), trainables_(std::move(trainables)), mlp_(std::move(mlp)) {
  const AnsatzSpec& s = program_.spec();
  if (trainables_.size() != s.n_trainable()) {
    fail(Errc::kSlotMismatch, "preparer has " + std::to_string(trainables_.size()) +
                                  " trainables, circuit needs " +
                                  std::to_string(s.n_trainable()));
  }
  const std::size_t n_ext = mlp_ ? mlp_->output_size() : 0;
  if (n_ext != s.n_external()) {
    fail(Errc::kSlotMismatch, "network output width " + std::to_string(n_ext) +
                                  " does not match " + std::to_string(s.n_external()) +
                                  " external circuit angles");
  }
  if (mlp_ && mlp_->input_size() != s.param_dim()) {
    fail(Errc::kShapeMismatch, "network input width does not match param_dim");
  }
}

std::vector<double> Preparer::externals(std::span<const double> h) const {
  if (!mlp_) return {};
  return mlp_->forward(h);
}

StateVector Preparer::state(std::span<const double> h) const {
  const auto ext = externals(h);
  return program_.run(resolve_angles(spec(), trainables_, ext, h));
}

DensityMatrix Preparer::prepare(std::span<const double> h) const {
  return system_state(state(h), spec().n_system());
}

std::vector<double> random_trainables(const AnsatzSpec& spec, Rng& rng) {
  std::vector<bool> slope(spec.n_trainable(), false);
  for (const auto& g : spec.gates()) {
    if (const auto* e = std::get_if<EncodedAngle>(&g.angle)) {
      for (auto s : e->weight_slots) slope[s] = true;
    }
  }
  std::vector<double> out(spec.n_trainable());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = slope[i] ? rng.uniform(-kSlopeInitScale, kSlopeInitScale)
                      : rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return out;
}

AnsatzSpec externals_as_trainables(const AnsatzSpec& spec) {
  if (spec.n_trainable() != 0) {
    fail(Errc::kSlotMismatch, "circuit already has trainable slots");
  }
  AnsatzSpec out(spec.n_system(), spec.n_ancilla(), spec.param_dim());
  for (GateOp g : spec.gates()) {
    if (const auto* e = std::get_if<ExternalAngle>(&g.angle)) {
      g.angle = TrainableAngle{e->slot};
    }
    out.add_gate(std::move(g));
  }
  return out;
}

void MetaTrainConfig::validate(bool nn) const {
  std::vector<std::string> problems;
  if (h_train.empty()) problems.push_back("h_train is empty");
  for (std::size_t i = 0; i < h_train.size(); ++i) {
    if (h_train[i].size() != family.param_dim()) {
      problems.push_back("h_train[" + std::to_string(i) + "] has " +
                         std::to_string(h_train[i].size()) + " entries, family " +
                         family.name() + " takes " + std::to_string(family.param_dim()));
      break;
    }
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) problems.push_back("beta must be positive");
  if (!(lr > 0.0) || !std::isfinite(lr)) problems.push_back("lr must be positive");
  if (!(grad_step > 0.0)) problems.push_back("grad_step must be positive");
  if (!nn && su2_layers == 0) problems.push_back("encoding needs at least one SU2 layer");
  if (nn && su2_layers + hva_layers == 0) problems.push_back("circuit has no layers");
  if (nn) {
    for (auto w : hidden_sizes) {
      if (w == 0) problems.push_back("hidden layer width must be positive");
    }
  }
  if (family.n_qubits() + ancillas() > 16) problems.push_back("register exceeds 16 qubits");
  if (threads == 0) problems.push_back("threads must be at least 1");
  if (!problems.empty()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
    fail(Errc::kConfigInvalid, os.str());
  }
}

double point_free_energy(const CircuitProgram& program,
                         std::span<const double> trainables,
                         std::span<const double> externals,
                         const PauliSum& hamiltonian, std::span<const double> h,
                         double beta) {
  const auto angles = resolve_angles(program.spec(), trainables, externals, h);
  const DensityMatrix rho = system_state(program.run(angles), program.spec().n_system());
  return free_energy_of_state(rho, hamiltonian, 1.0 / beta);
}

double point_free_energy_gradient(const CircuitProgram& program,
                                  std::span<const double> trainables,
                                  std::span<const double> externals,
                                  const ComplexMatrix& hamiltonian,
                                  std::span<const double> h, double beta,
                                  std::span<double> trainable_grads,
                                  std::span<double> external_grads) {
  const AnsatzSpec& spec = program.spec();
  const auto angles = resolve_angles(spec, trainables, externals, h);
  const StateVector psi = program.run(angles);
  const DensityMatrix rho = system_state(psi, spec.n_system());
  const double T = 1.0 / beta;
  const Spectrum sp = hermitian_eig(rho.matrix());
  RealVector log_l(sp.eigenvalues.size());
  for (Eigen::Index i = 0; i < log_l.size(); ++i) {
    log_l(i) = std::log(std::max(sp.eigenvalues(i), kEntropyClamp));
  }
  const double energy = (hamiltonian * rho.matrix()).trace().real();
  const double g = energy - T * entropy_of_spectrum(sp.eigenvalues);
  if (spec.n_ancilla() == 0) {
    // Pure system state: entropy is flat to first order.
    const auto gate = program.angle_gradient(angles, psi, hamiltonian);
    program.accumulate_slot_gradients(gate, h, trainable_grads, external_grads);
    return g;
  }
  const ComplexMatrix observable =
      hamiltonian + T * sp.eigenvectors * log_l.cast<Complex>().asDiagonal() *
                        sp.eigenvectors.adjoint();
  const auto gate = program.angle_gradient(angles, psi, observable);
  program.accumulate_slot_gradients(gate, h, trainable_grads, external_grads);
  return g;
}

double global_loss(const AnsatzSpec& spec, std::span<const double> trainables,
                   const HamiltonianFamily& family, const ParamGrid& h_train,
                   double beta, std::size_t threads) {
  const CircuitProgram program(spec);
  const auto hams = build_all(family, h_train);
  const auto terms = parallel_map(
      h_train.size(),
      [&](std::size_t i) {
        return point_free_energy(program, trainables, {}, hams[i], h_train[i], beta);
      },
      threads);
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

TrainReport train_meta_vqt(const MetaTrainConfig& cfg) {
  cfg.validate(false);
  const auto start = std::chrono::steady_clock::now();
  const AnsatzSpec spec =
      meta_vqt_ansatz(cfg.family, cfg.su2_layers, cfg.hva_layers, cfg.ancillas());
  Rng init = Rng(cfg.seed).split("meta-vqt/init");
  std::vector<double> params = random_trainables(spec, init);

  const CircuitProgram program(spec);
  const auto hams = build_all(cfg.family, cfg.h_train);
  std::vector<ComplexMatrix> dense;
  if (cfg.gradient == GradientMethod::kAdjoint) {
    for (const auto& H : hams) dense.push_back(to_dense(H));
  }
  const std::size_t n_points = cfg.h_train.size();
  auto loss = [&](std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
      total += point_free_energy(program, x, {}, hams[i], cfg.h_train[i], cfg.beta);
    }
    return total;
  };

  AdamState adam(params.size(), cfg.lr);
  std::vector<double> history;
  history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double value = 0.0;
    std::vector<double> grad(params.size(), 0.0);
    if (cfg.gradient == GradientMethod::kAdjoint) {
      const auto parts = parallel_map(
          n_points,
          [&](std::size_t i) {
            PointGrad pg{0.0, std::vector<double>(params.size(), 0.0)};
            pg.value = point_free_energy_gradient(program, params, {}, dense[i],
                                                  cfg.h_train[i], cfg.beta, pg.grad, {});
            return pg;
          },
          cfg.threads);
      for (const auto& pg : parts) {
        value += pg.value;
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += pg.grad[k];
      }
    } else {
      value = loss(params);
      grad = grad_central_diff(loss, params, cfg.grad_step, cfg.threads);
    }
    check_finite(value, epoch);
    history.push_back(value);
    if (cfg.on_epoch) cfg.on_epoch(epoch, value);
    adam_step(adam, params, grad);
  }

  std::vector<double> finals;
  for (std::size_t i = 0; i < n_points; ++i) {
    finals.push_back(point_free_energy(program, params, {}, hams[i], cfg.h_train[i], cfg.beta));
  }
  return TrainReport{"meta-vqt", cfg.family, cfg.beta, cfg.h_train, std::move(history),
                     Preparer(spec, std::move(params)), seconds_since(start),
                     std::move(finals)};
}

TrainReport train_nn_meta_vqt(const MetaTrainConfig& cfg) {
  cfg.validate(true);
  const auto start = std::chrono::steady_clock::now();
  const AnsatzSpec spec =
      nn_meta_vqt_ansatz(cfg.family, cfg.su2_layers, cfg.hva_layers, cfg.ancillas());
  std::vector<std::size_t> sizes{cfg.family.param_dim()};
  sizes.insert(sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
  sizes.push_back(spec.n_external());
  Rng init = Rng(cfg.seed).split("nn-meta-vqt/init");
  Mlp net = Mlp::random(sizes, init);
  std::vector<double> params = net.flatten();

  const CircuitProgram program(spec);
  const auto hams = build_all(cfg.family, cfg.h_train);
  std::vector<ComplexMatrix> dense;
  if (cfg.gradient == GradientMethod::kAdjoint) {
    for (const auto& H : hams) dense.push_back(to_dense(H));
  }
  const std::size_t n_points = cfg.h_train.size();
  const std::size_t n_ext = spec.n_external();

  AdamState adam(params.size(), cfg.lr);
  std::vector<double> history;
  history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto parts = parallel_map(
        n_points,
        [&](std::size_t i) {
          const auto& h = cfg.h_train[i];
          const std::vector<double> ext = net.forward(h);
          PointGrad pg{0.0, {}};
          std::vector<double> angle_grad(n_ext, 0.0);
          if (cfg.gradient == GradientMethod::kAdjoint) {
            pg.value = point_free_energy_gradient(program, {}, ext, dense[i], h,
                                                  cfg.beta, {}, angle_grad);
          } else {
            auto point = [&](std::span<const double> a) {
              return point_free_energy(program, {}, a, hams[i], h, cfg.beta);
            };
            pg.value = point(ext);
            angle_grad = grad_central_diff(point, ext, cfg.grad_step, 1);
          }
          pg.grad = net.backward(h, angle_grad).params;
          return pg;
        },
        cfg.threads);
    double value = 0.0;
    std::vector<double> grad(params.size(), 0.0);
    for (const auto& pg : parts) {
      value += pg.value;
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += pg.grad[k];
    }
    check_finite(value, epoch);
    history.push_back(value);
    if (cfg.on_epoch) cfg.on_epoch(epoch, value);
    adam_step(adam, params, grad);
    net.unflatten(params);
  }

  std::vector<double> finals;
  for (std::size_t i = 0; i < n_points; ++i) {
    finals.push_back(point_free_energy(program, {}, net.forward(cfg.h_train[i]), hams[i],
                                       cfg.h_train[i], cfg.beta));
  }
  return TrainReport{"nn-meta-vqt", cfg.family, cfg.beta, cfg.h_train, std::move(history),
                     Preparer(spec, {}, std::move(net)), seconds_since(start),
                     std::move(finals)};
}

VqtReport train_vqt_single(const HamiltonianFamily& family, std::span<const double> h,
                           const Preparer& init, const VqtConfig& cfg) {
  if (h.size() != family.param_dim()) {
    fail(Errc::kConfigInvalid, "h has wrong length for family " + family.name());
  }
  if (!(cfg.beta > 0.0) || !(cfg.lr > 0.0) || !(cfg.grad_step > 0.0)) {
    fail(Errc::kConfigInvalid, "beta, lr and grad_step must be positive");
  }
  if (init.spec().n_system() != family.n_qubits() ||
      init.spec().param_dim() != family.param_dim()) {
    fail(Errc::kConfigInvalid, "initial circuit does not match family " + family.name());
  }
  AnsatzSpec spec = init.mlp() ? externals_as_trainables(init.spec()) : init.spec();
  std::vector<double> params = init.mlp() ? init.externals(h) : init.trainables();

  const CircuitProgram program(spec);
  const PauliSum H = family.build(h);
  const ComplexMatrix dense = to_dense(H);
  auto loss = [&](std::span<const double> x) {
    return point_free_energy(program, x, {}, H, h, cfg.beta);
  };

  AdamState adam(params.size(), cfg.lr);
  std::vector<double> history;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double value;
    std::vector<double> grad(params.size(), 0.0);
    if (cfg.gradient == GradientMethod::kAdjoint) {
      value = point_free_energy_gradient(program, params, {}, dense, h, cfg.beta, grad, {});
    } else {
      value = loss(params);
      grad = grad_central_diff(loss, params, cfg.grad_step, cfg.threads);
    }
    check_finite(value, epoch);
    history.push_back(value);
    adam_step(adam, params, grad);
  }

  const auto ext = std::vector<double>{};
  const DensityMatrix rho = system_state(
      program.run(resolve_angles(spec, params, ext, h)), spec.n_system());
  const ThermalPoint exact = exact_gibbs(H, cfg.beta);
  return VqtReport{{h.begin(), h.end()},
                   std::move(history),
                   std::move(spec),
                   std::move(params),
                   free_energy_of_state(rho, H, 1.0 / cfg.beta),
                   exact.free_energy,
                   fidelity(rho, exact.gibbs_state),
                   trace_distance(rho, exact.gibbs_state)};
}

std::vector<EvalPoint> evaluate_on_grid(const StatePreparer& preparer,
                                        const HamiltonianFamily& family,
                                        const ParamGrid& h_test, double beta,
                                        std::size_t threads) {
  if (h_test.empty()) fail(Errc::kEmptyGrid, "test grid is empty");
  if (!(beta > 0.0)) fail(Errc::kNonPositiveBeta, "beta must be positive");
  return parallel_map(
      h_test.size(),
      [&](std::size_t i) {
        const auto& h = h_test[i];
        const PauliSum H = family.build(h);
        const DensityMatrix rho = preparer(h);
        const ThermalPoint exact = exact_gibbs(H, beta);
        EvalPoint p;
        p.h = h;
        p.fidelity = fidelity(rho, exact.gibbs_state);
        p.trace_distance = trace_distance(rho, exact.gibbs_state);
        p.free_energy = free_energy_of_state(rho, H, 1.0 / beta);
        p.exact_free_energy = exact.free_energy;
        p.degenerate_denominator = std::abs(exact.free_energy) < 1e-9;
        p.rel_error = p.degenerate_denominator
                          ? std::numeric_limits<double>::quiet_NaN()
                          : std::abs(p.free_energy - exact.free_energy) /
                                std::abs(exact.free_energy);
        return p;
      },
      threads);
}

std::vector<EvalPoint> evaluate_on_grid(const Preparer& preparer,
                                        const HamiltonianFamily& family,
                                        const ParamGrid& h_test, double beta,
                                        std::size_t threads) {
  if (preparer.spec().n_system() != family.n_qubits() ||
      preparer.spec().param_dim() != family.param_dim()) {
    fail(Errc::kCheckpointMismatch,
         "preparer was not built for family " + family.name());
  }
  return evaluate_on_grid(
      [&preparer](std::span<const double> h) { return preparer.prepare(h); }, family,
      h_test, beta, threads);
}

EvalSummary summarize(const std::vector<EvalPoint>& points) {
  if (points.empty()) fail(Errc::kEmptyGrid, "no evaluation points");
  EvalSummary s{0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
  std::size_t n_rel = 0;
  for (const auto& p : points) {
    s.mean_fidelity += p.fidelity;
    s.min_fidelity = std::min(s.min_fidelity, p.fidelity);
    s.mean_trace_distance += p.trace_distance;
    if (!p.degenerate_denominator) {
      s.max_rel_error = std::max(s.max_rel_error, p.rel_error);
      s.mean_rel_error += p.rel_error;
      ++n_rel;
    }
  }
  const double n = static_cast<double>(points.size());
  s.mean_fidelity /= n;
  s.mean_trace_distance /= n;
  if (n_rel) s.mean_rel_error /= static_cast<double>(n_rel);
  double var = 0.0;
  for (const auto& p : points) {
    const double d = p.trace_distance - s.mean_trace_distance;
    var += d * d;
  }
  s.std_trace_distance = std::sqrt(var / n);
  return s;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (i + 1 == n) ? hi
                          : lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(n - 1);
  }
  return out;
}

ParamGrid uniform_grid(double lo, double hi, std::size_t n) {
  ParamGrid g;
  for (double x : linspace(lo, hi, n)) g.push_back({x});
  return g;
}

ParamGrid product_grid(std::span<const double> first, std::span<const double> second) {
  ParamGrid g;
  for (double a : first) {
    for (double b : second) g.push_back({a, b});
  }
  return g;
}

}  // namespace metavqt
