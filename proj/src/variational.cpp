// Copyright 2026 The qpbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpbc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qpbc {

uint32_t AnsatzSpec::n_params() const {
  int hi = -1;
  for (const auto& g : generators) hi = std::max(hi, g.param);
  return uint32_t(hi + 1);
}

void AnsatzSpec::validate() const {
  for (int b : initial_occupation) {
    if (b != 0 && b != 1) throw InputError("occupation bits must be 0 or 1");
  }
  std::set<int> used;
  for (const auto& g : generators) {
    if (g.word.n_qubits != n_qubits()) {
      throw DimensionError("generator does not match ansatz width");
    }
    if (g.word.is_identity()) throw InputError("identity generator");
    if (g.param < 0) throw InputError("negative parameter index");
    used.insert(g.param);
  }
  for (int p = 0; p < int(used.size()); ++p) {
    if (!used.count(p)) {
      throw InputError("parameter indices must be contiguous from 0");
    }
  }
}

Circuit AnsatzSpec::to_circuit() const {
  validate();
  Circuit c(n_qubits());
  c.add_preparation(initial_occupation);
  for (const auto& g : generators) {
    c.add_pauli_exp_param(g.word, g.param, g.scale);
  }
  return c;
}

AnsatzSpec ansatz_from_cluster(const FermionOperator& cluster_at_unit,
                               uint32_t n_modes,
                               const std::vector<int>& occupation,
                               int param_index) {
  if (occupation.size() != n_modes) {
    throw DimensionError("occupation length does not match mode count");
  }
  PauliSum k = jordan_wigner(cluster_at_unit, n_modes);
  AnsatzSpec spec;
  spec.initial_occupation = occupation;
  for (const auto& [w, c] : k.terms()) {
    if (std::abs(c.real()) > 1e-12) {
      throw InputError("cluster operator is not anti-Hermitian");
    }
    // e^{i a P} realized as e^{-i (-a theta) P} at unit theta.
    spec.generators.push_back({w, param_index, -c.imag()});
  }
  spec.validate();
  return spec;
}

VqeCost::VqeCost(PauliSum h, AnsatzSpec ansatz,
                 std::vector<SymmetryOperator> symmetries, Backend backend,
                 MitigationFlags flags, ConfusionModel model)
    : h_(std::move(h)),
      ansatz_(std::move(ansatz)),
      backend_(backend),
      flags_(flags),
      model_(std::move(model)) {
  if (!h_.is_hermitian()) throw InputError("cost requires a Hermitian operator");
  ansatz_.validate();
  if (ansatz_.n_qubits() != h_.n_qubits()) {
    throw DimensionError("ansatz and operator widths differ");
  }
  plan_ = make_measurement_plan(h_, PartitionStrategy::general,
                                std::move(symmetries));
}

CostEval VqeCost::operator()(const std::vector<double>& theta) const {
  CostEval eval;
  if (backend_.kind == Backend::Kind::statevector) {
    StateVector psi = run_statevector(ansatz_.to_circuit(), theta);
    double v = exact_expectation(psi, h_);
    eval.value = eval.e_raw = eval.e_spam = eval.e_pmsv = eval.e_spam_pmsv = v;
    return eval;
  }
  const uint64_t run_seed = backend_.base_seed + 1000 * eval_counter_++;
  eval.seed = run_seed;
  Circuit base = ansatz_.to_circuit();
  std::vector<ShotTable> tables;
  for (size_t i = 0; i < plan_.entries.size(); ++i) {
    Circuit c = base;
    for (const auto& g : plan_.entries[i].circuit) c.add_clifford(g);
    tables.push_back(
        sample(c, theta, backend_.shots, backend_.noise, run_seed + i));
  }
  const bool have_model = model_.n_qubits() == h_.n_qubits();
  auto run = [&](bool spam, bool pmsv) {
    return mitigated_expectation(plan_, tables, h_, model_, {spam, pmsv});
  };
  auto raw = run(false, false);
  auto pmsv_only = run(false, true);
  eval.e_raw = raw.value;
  eval.e_pmsv = pmsv_only.value;
  if (have_model) {
    eval.e_spam = run(true, false).value;
    auto both = run(true, true);
    eval.e_spam_pmsv = both.value;
  } else {
    if (flags_.spam) throw InputError("SPAM requested without a model");
    eval.e_spam = raw.value;
    eval.e_spam_pmsv = pmsv_only.value;
  }
  auto selected = run(flags_.spam, flags_.pmsv);
  eval.value = selected.value;
  eval.stddev = selected.stddev;
  eval.discard_fraction = selected.discard_fraction;
  return eval;
}

std::pair<double, double> transqse_energy(double theta,
                                          const TransQseProblem& problem,
                                          const Backend& backend,
                                          const MitigationFlags& flags) {
  if (problem.taylor_order != 0 && problem.taylor_order != 1) {
    throw InputError("taylor_order must be 0 or 1");
  }
  Backend b0 = backend, b1 = backend, b2 = backend;
  b1.base_seed += 7919;
  b2.base_seed += 15823;
  VqeCost c_h(problem.h, problem.ansatz, {}, b0, flags);
  VqeCost c_hl(problem.h_lambda, problem.ansatz, {}, b1, flags);
  VqeCost c_l(problem.lambda_op, problem.ansatz, {}, b2, flags);
  CostEval eh = c_h({theta});
  CostEval ehl = c_hl({theta});
  CostEval es = c_l({theta});
  double a = eh.value + ehl.value;
  double s1 = es.value;
  double var_a = eh.stddev * eh.stddev + ehl.stddev * ehl.stddev;
  double var_s = es.stddev * es.stddev;
  if (problem.taylor_order == 0) {
    double denom = 1.0 + s1;
    if (std::abs(denom) < 0.1) {
      throw NumericalError("subspace overlap near -1; rational form unstable");
    }
    double value = a / denom;
    double var = var_a / (denom * denom) +
                 (a * a / std::pow(denom, 4)) * var_s;
    return {value, std::sqrt(var)};
  }
  double value = a * (1.0 - s1);
  double var = (1.0 - s1) * (1.0 - s1) * var_a + a * a * var_s;
  return {value, std::sqrt(var)};
}

const TraceStep& OptimizationTrace::best() const {
  if (steps.empty()) throw InputError("empty optimization trace");
  return *std::min_element(
      steps.begin(), steps.end(),
      [](const TraceStep& a, const TraceStep& b) { return a.value < b.value; });
}

double wrap_angle(double theta) {
  const double pi = std::numbers::pi;
  double t = std::fmod(theta + pi, 2 * pi);
  if (t <= 0) t += 2 * pi;
  return t - pi;
}

namespace {

TraceStep to_step(const std::vector<double>& theta, const CostEval& e) {
  TraceStep s;
  s.theta = theta;
  s.value = e.value;
  s.stddev = e.stddev;
  s.e_raw = e.e_raw;
  s.e_spam = e.e_spam;
  s.e_pmsv = e.e_pmsv;
  s.e_spam_pmsv = e.e_spam_pmsv;
  s.discard_fraction = e.discard_fraction;
  s.seed = e.seed;
  return s;
}

}  // namespace

OptimizationTrace rotosolve(const CostFn& cost, std::vector<double> theta,
                            int max_sweeps, double tol, int frequency) {
  if (frequency < 1) throw InputError("frequency must be positive");
  const double pi = std::numbers::pi;
  const double shift = pi / (2.0 * frequency);
  OptimizationTrace trace;
  CostEval current = cost(theta);
  trace.steps.push_back(to_step(theta, current));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double sweep_start = current.value;
    for (size_t d = 0; d < theta.size(); ++d) {
      double e0 = current.value;
      std::vector<double> tp = theta, tm = theta;
      tp[d] = theta[d] + shift;
      tm[d] = theta[d] - shift;
      double ep = cost(tp).value;
      double em = cost(tm).value;
      // Minimizer of the fitted sinusoid in u = frequency * theta_d:
      // u* = u - pi/2 - atan2(2E0 - E+ - E-, E+ - E-).
      double phi = std::atan2(2.0 * e0 - ep - em, ep - em);
      double u = frequency * theta[d] - pi / 2.0 - phi;
      theta[d] = wrap_angle(u) / frequency;
      current = cost(theta);
      trace.steps.push_back(to_step(theta, current));
    }
    if (sweep_start - current.value < tol) break;
  }
  return trace;
}

std::vector<double> parameter_shift_gradient(const CostFn& cost,
                                             const std::vector<double>& theta) {
  const double shift = std::numbers::pi / 4.0;
  std::vector<double> grad(theta.size());
  for (size_t d = 0; d < theta.size(); ++d) {
    std::vector<double> tp = theta, tm = theta;
    tp[d] += shift;
    tm[d] -= shift;
    grad[d] = cost(tp).value - cost(tm).value;
  }
  return grad;
}

OptimizationTrace sgd(const CostFn& cost, std::vector<double> theta,
                      double learning_rate, int steps) {
  if (learning_rate <= 0) throw InputError("learning rate must be positive");
  OptimizationTrace trace;
  trace.steps.push_back(to_step(theta, cost(theta)));
  for (int step = 0; step < steps; ++step) {
    auto grad = parameter_shift_gradient(cost, theta);
    for (size_t d = 0; d < theta.size(); ++d) {
      theta[d] -= learning_rate * grad[d];
    }
    trace.steps.push_back(to_step(theta, cost(theta)));
  }
  return trace;
}

std::string trace_to_csv(const OptimizationTrace& trace) {
  std::ostringstream out;
  size_t n_theta = trace.steps.empty() ? 0 : trace.steps[0].theta.size();
  out << "step";
  for (size_t d = 0; d < n_theta; ++d) out << ",theta" << d;
  out << ",e_raw,e_spam,e_pmsv,e_spam_pmsv,stddev,discard_fraction,seed\n";
  out.precision(12);
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out << i;
    for (double t : s.theta) out << "," << t;
    out << "," << s.e_raw << "," << s.e_spam << "," << s.e_pmsv << ","
        << s.e_spam_pmsv << "," << s.stddev << "," << s.discard_fraction
        << "," << s.seed << "\n";
  }
  return out.str();
}

AnsatzSpec load_ansatz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open ansatz file: " + path);
  try {
    nlohmann::json j;
    in >> j;
    AnsatzSpec spec;
    spec.initial_occupation =
        j.at("initial_occupation").get<std::vector<int>>();
    for (const auto& g : j.at("generators")) {
      AnsatzSpec::Generator gen;
      gen.word = PauliWord::from_string(g.at("pauli").get<std::string>());
      gen.param = g.value("param", 0);
      gen.scale = g.value("scale", 1.0);
      spec.generators.push_back(gen);
    }
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("ansatz document error: ") + e.what());
  }
}

void save_ansatz(const AnsatzSpec& ansatz, const std::string& path) {
  ansatz.validate();
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : ansatz.generators) {
    gens.push_back(
        {{"pauli", g.word.str()}, {"param", g.param}, {"scale", g.scale}});
  }
  nlohmann::json j{{"initial_occupation", ansatz.initial_occupation},
                   {"generators", gens}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write ansatz file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qpbc
