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

#include "qpbc/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace qpbc {

namespace {

using nlohmann::json;

const std::vector<std::string> kKinds{"vqe", "transqse"};
const std::vector<std::string> kUnits{"hartree", "kj_per_mol"};
const std::vector<std::string> kOptimizers{"rotosolve", "sgd"};
const std::vector<std::string> kBackends{"statevector", "shots"};
const std::vector<std::string> kNoises{"none", "synthetic"};
const std::vector<std::string> kMitigations{"none", "spam", "pmsv",
                                            "spam+pmsv"};

void require_choice(const std::string& value,
                    const std::vector<std::string>& allowed,
                    const std::string& field) {
  if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
    throw InputError("invalid " + field + ": " + value);
  }
}

void require_file(const std::string& path, const std::string& field) {
  if (path.empty()) throw InputError("missing required path: " + field);
  if (!std::filesystem::exists(path)) {
    throw InputError("missing file for " + field + ": " + path);
  }
}

MitigationFlags parse_mitigation(const std::string& s) {
  MitigationFlags flags;
  flags.spam = (s == "spam" || s == "spam+pmsv");
  flags.pmsv = (s == "pmsv" || s == "spam+pmsv");
  return flags;
}

}  // namespace

double to_kj_per_mol(double value, const std::string& unit) {
  if (unit == "hartree") return value * kKjPerMolPerHartree;
  if (unit == "kj_per_mol") return value;
  throw InputError("unknown energy unit: " + unit);
}

void ExperimentConfig::validate() const {
  require_choice(kind, kKinds, "kind");
  require_choice(unit, kUnits, "unit");
  require_choice(optimizer, kOptimizers, "optimizer");
  require_choice(backend, kBackends, "backend");
  require_choice(noise, kNoises, "noise");
  require_choice(mitigation, kMitigations, "mitigation");
  require_file(hamiltonian, "hamiltonian");
  require_file(ansatz, "ansatz");
  if (!symmetries.empty()) require_file(symmetries, "symmetries");
  if (!lambda.empty()) require_file(lambda, "lambda");
  if (!confusion_model.empty()) {
    require_file(confusion_model, "confusion_model");
  }
  if (kind == "transqse" && lambda.empty()) {
    throw InputError("transqse requires an overlap-operator file");
  }
  if (taylor_order != 0 && taylor_order != 1) {
    throw InputError("taylor_order must be 0 or 1");
  }
  if (backend == "shots" && shots == 0) {
    throw InputError("shots must be positive on the shot backend");
  }
  MitigationFlags flags = parse_mitigation(mitigation);
  if (flags.spam && backend == "shots" && confusion_model.empty()) {
    throw InputError("spam mitigation requires a confusion_model file");
  }
  for (int s : sector_signs) {
    if (s != 1 && s != -1) throw InputError("sector signs must be +-1");
  }
  if (max_sweeps <= 0) throw InputError("max_sweeps must be positive");
  if (tol <= 0) throw InputError("tol must be positive");
  if (learning_rate <= 0) throw InputError("learning_rate must be positive");
  if (sgd_steps <= 0) throw InputError("sgd_steps must be positive");
}

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  static const std::vector<std::string> known{
      "kind",         "hamiltonian",   "ansatz",        "symmetries",
      "lambda",       "confusion_model", "unit",        "e_hf_reference",
      "sector_signs", "optimizer",     "max_sweeps",    "tol",
      "learning_rate", "sgd_steps",    "theta0",        "taylor_order",
      "backend",      "shots",         "seed",          "noise",
      "mitigation"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("unknown config field: " + key);
    }
  }
  ExperimentConfig c;
  try {
    c.kind = j.value("kind", c.kind);
    c.hamiltonian = j.value("hamiltonian", c.hamiltonian);
    c.ansatz = j.value("ansatz", c.ansatz);
    c.symmetries = j.value("symmetries", c.symmetries);
    c.lambda = j.value("lambda", c.lambda);
    c.confusion_model = j.value("confusion_model", c.confusion_model);
    c.unit = j.value("unit", c.unit);
    if (j.contains("e_hf_reference") && !j["e_hf_reference"].is_null()) {
      c.e_hf_reference = j["e_hf_reference"].get<double>();
      c.has_e_hf_reference = true;
    }
    if (j.contains("sector_signs")) {
      c.sector_signs = j["sector_signs"].get<std::vector<int>>();
    }
    c.optimizer = j.value("optimizer", c.optimizer);
    c.max_sweeps = j.value("max_sweeps", c.max_sweeps);
    c.tol = j.value("tol", c.tol);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.sgd_steps = j.value("sgd_steps", c.sgd_steps);
    if (j.contains("theta0")) {
      c.theta0 = j["theta0"].get<std::vector<double>>();
    }
    c.taylor_order = j.value("taylor_order", c.taylor_order);
    c.backend = j.value("backend", c.backend);
    c.shots = j.value("shots", c.shots);
    c.seed = j.value("seed", c.seed);
    c.noise = j.value("noise", c.noise);
    c.mitigation = j.value("mitigation", c.mitigation);
  } catch (const json::exception& e) {
    throw InputError(std::string("config field type error: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig config = experiment_config_from_json_text(text.str());
  // Relative data paths are taken relative to the config file.
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) {
      p = (base / p).string();
    }
  };
  resolve(config.hamiltonian);
  resolve(config.ansatz);
  resolve(config.symmetries);
  resolve(config.lambda);
  resolve(config.confusion_model);
  return config;
}

std::string experiment_config_to_json_text(const ExperimentConfig& c) {
  json j;
  j["kind"] = c.kind;
  j["hamiltonian"] = c.hamiltonian;
  j["ansatz"] = c.ansatz;
  j["symmetries"] = c.symmetries;
  j["lambda"] = c.lambda;
  j["confusion_model"] = c.confusion_model;
  j["unit"] = c.unit;
  if (c.has_e_hf_reference) {
    j["e_hf_reference"] = c.e_hf_reference;
  } else {
    j["e_hf_reference"] = nullptr;
  }
  j["sector_signs"] = c.sector_signs;
  j["optimizer"] = c.optimizer;
  j["max_sweeps"] = c.max_sweeps;
  j["tol"] = c.tol;
  j["learning_rate"] = c.learning_rate;
  j["sgd_steps"] = c.sgd_steps;
  j["theta0"] = c.theta0;
  j["taylor_order"] = c.taylor_order;
  j["backend"] = c.backend;
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["noise"] = c.noise;
  j["mitigation"] = c.mitigation;
  return j.dump(2) + "\n";
}

uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = experiment_config_to_json_text(config);
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  PauliSum h = load_pauli_sum(config.hamiltonian);
  AnsatzSpec ansatz = load_ansatz(config.ansatz);
  std::vector<SymmetryOperator> syms;
  if (!config.symmetries.empty()) syms = load_symmetries(config.symmetries);
  if (!config.sector_signs.empty()) {
    if (config.sector_signs.size() != syms.size()) {
      throw InputError("sector_signs length does not match the symmetry set");
    }
    for (size_t i = 0; i < syms.size(); ++i) {
      syms[i].sign = config.sector_signs[i];
    }
  }

  Backend backend;
  backend.kind = config.backend == "shots" ? Backend::Kind::shots
                                           : Backend::Kind::statevector;
  backend.shots = config.shots;
  backend.base_seed = config.seed;
  if (config.noise == "synthetic") {
    backend.noise = NoiseModel::synthetic_default(h.n_qubits());
  }
  MitigationFlags flags = parse_mitigation(config.mitigation);
  ConfusionModel model = ConfusionModel::identity(0);
  if (!config.confusion_model.empty()) {
    model = load_confusion_model(config.confusion_model);
  }

  std::vector<double> theta0 = config.theta0;
  if (theta0.empty()) theta0.assign(ansatz.n_params(), 1e-5);
  if (theta0.size() != ansatz.n_params()) {
    throw InputError("theta0 length does not match the ansatz");
  }

  CostFn cost;
  int frequency = 1;
  if (config.kind == "vqe") {
    auto vqe = std::make_shared<VqeCost>(h, ansatz, syms, backend, flags,
                                         model);
    cost = [vqe](const std::vector<double>& t) { return (*vqe)(t); };
    // Pauli-exponential ansatz expectations are pi-periodic.
    frequency = 2;
  } else {
    TransQseProblem problem;
    problem.h = h;
    problem.lambda_op = load_pauli_sum(config.lambda);
    problem.h_lambda = h * problem.lambda_op;
    problem.ansatz = ansatz;
    problem.taylor_order = config.taylor_order;
    auto counter = std::make_shared<uint64_t>(0);
    cost = [problem, backend, flags,
            counter](const std::vector<double>& t) {
      if (t.size() != 1) {
        throw InputError("transqse optimizes a single parameter");
      }
      Backend b = backend;
      b.base_seed += 100000 * (*counter)++;
      auto [value, stddev] = transqse_energy(t[0], problem, b, flags);
      CostEval e;
      e.value = value;
      e.stddev = stddev;
      e.e_raw = e.e_spam = e.e_pmsv = e.e_spam_pmsv = value;
      e.seed = b.base_seed;
      return e;
    };
  }

  ExperimentResult result;
  if (config.optimizer == "rotosolve") {
    result.trace =
        rotosolve(cost, theta0, config.max_sweeps, config.tol, frequency);
  } else {
    result.trace = sgd(cost, theta0, config.learning_rate, config.sgd_steps);
  }
  const TraceStep& best = result.trace.best();
  result.final_theta = best.theta;
  result.energy = best.value;
  result.energy_kj_mol = to_kj_per_mol(best.value, config.unit);
  result.stddev_kj_mol = to_kj_per_mol(best.stddev, config.unit);
  result.discard_fraction = best.discard_fraction;
  if (config.has_e_hf_reference) {
    result.delta_e_kj_mol = result.energy_kj_mol - config.e_hf_reference;
    result.has_delta_e = true;
  }
  result.seed = config.seed;
  result.hash = config_hash(config);
  return result;
}

void write_run_directory(const ExperimentConfig& config,
                         const ExperimentResult& result,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(out_dir) / name,
                      std::ios::binary);
    if (!out) throw ResourceError("cannot write " + name + " in " + out_dir);
    out << text;
  };
  write("config.json", experiment_config_to_json_text(config));

  json seeds;
  seeds["base_seed"] = result.seed;
  json step_seeds = json::array();
  for (const TraceStep& s : result.trace.steps) step_seeds.push_back(s.seed);
  seeds["step_seeds"] = step_seeds;
  write("seeds.json", seeds.dump(2) + "\n");

  write("trace.csv", trace_to_csv(result.trace));

  json r;
  r["version"] = result.version;
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(result.hash));
  r["config_hash"] = hash_hex;
  r["final_theta"] = result.final_theta;
  r["energy"] = result.energy;
  r["energy_kj_mol"] = result.energy_kj_mol;
  r["stddev_kj_mol"] = result.stddev_kj_mol;
  if (result.has_delta_e) {
    r["delta_e_kj_mol"] = result.delta_e_kj_mol;
  } else {
    r["delta_e_kj_mol"] = nullptr;
  }
  r["discard_fraction"] = result.discard_fraction;
  r["reference_note"] = reference_energy_note();
  write("result.json", r.dump(2) + "\n");
}

std::string convergence_plot_svg(const OptimizationTrace& trace) {
  const int width = 640, height = 400;
  const int left = 70, right = 20, top = 20, bottom = 40;
  const struct Series {
    const char* label;
    const char* color;
    double TraceStep::* field;
  } series[] = {
      {"raw", "#888888", &TraceStep::e_raw},
      {"spam", "#1f77b4", &TraceStep::e_spam},
      {"pmsv", "#2ca02c", &TraceStep::e_pmsv},
      {"spam+pmsv", "#d62728", &TraceStep::e_spam_pmsv},
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const TraceStep& s : trace.steps) {
    for (const Series& sr : series) {
      lo = std::min(lo, s.*sr.field);
      hi = std::max(hi, s.*sr.field);
    }
  }
  if (trace.steps.empty()) lo = hi = 0.0;
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const size_t n = std::max<size_t>(trace.steps.size(), 2);
  auto x_of = [&](size_t i) {
    return left + double(i) * (width - left - right) / double(n - 1);
  };
  auto y_of = [&](double e) {
    return top + (hi - e) * (height - top - bottom) / (hi - lo);
  };
  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << (height - bottom)
      << "\" x2=\"" << (width - right) << "\" y2=\"" << (height - bottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << (height - bottom) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (width / 2) << "\" y=\"" << (height - 8)
      << "\" text-anchor=\"middle\" font-size=\"14\">step</text>\n";
  svg << "<text x=\"16\" y=\"" << (height / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "16 "
      << (height / 2) << ")\">energy</text>\n";
  svg << "<text x=\"" << (left - 6) << "\" y=\"" << (top + 5)
      << "\" text-anchor=\"end\" font-size=\"12\">" << hi << "</text>\n";
  svg << "<text x=\"" << (left - 6) << "\" y=\"" << (height - bottom)
      << "\" text-anchor=\"end\" font-size=\"12\">" << lo << "</text>\n";
  int legend_y = top + 12;
  for (const Series& sr : series) {
    std::ostringstream points;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
      points << x_of(i) << "," << y_of(trace.steps[i].*sr.field) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << sr.color
        << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
    svg << "<text x=\"" << (width - right - 90) << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << sr.color << "\">" << sr.label
        << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

TableReport reproduce_table(const std::string& which, uint64_t shots,
                            uint64_t seed) {
  TableReport report;
  report.table = which;
  report.shots = shots;
  if (which == "IV") {
    report.theta = -0.09283;
    report.published_p00 = 0.9910;
    report.published_p11 = 0.0090;
  } else if (which == "V") {
    report.theta = -0.53038;
    report.published_p00 = 0.7447;
    report.published_p11 = 0.2553;
  } else {
    throw InputError("unknown table: " + which);
  }
  Circuit circuit(2);
  circuit.add_pauli_exp(PauliWord::from_string("YX"), report.theta);
  ShotTable table = sample(circuit, {}, shots, NoiseModel{}, seed);
  auto count = [&](uint64_t bits) {
    auto it = table.counts.find(bits);
    return it == table.counts.end() ? uint64_t{0} : it->second;
  };
  report.p00 = double(count(0b00)) / double(shots);
  report.p11 = double(count(0b11)) / double(shots);
  return report;
}

std::string table_report_text(const TableReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << "Table " << r.table << " (theta = " << r.theta << ", " << r.shots
      << " shots, noiseless)\n";
  out << "  P(00) = " << r.p00 << "  published " << r.published_p00
      << "  |diff| = " << std::abs(r.p00 - r.published_p00) << "\n";
  out << "  P(11) = " << r.p11 << "  published " << r.published_p11
      << "  |diff| = " << std::abs(r.p11 - r.published_p11) << "\n";
  out << "  P(00) + P(11) = " << (r.p00 + r.p11) << "\n";
  return out.str();
}

std::string reference_energy_note() {
  return "Published absolute energies and delta-E optima are reference "
         "metadata only, not reproducible: integrals unpublished. Shipped "
         "fixtures are synthetic stand-ins preserving the published "
         "operator structure.";
}

std::vector<ParityTarget> targets_from_symmetries(
    const std::vector<SymmetryOperator>& symmetries) {
  std::vector<ParityTarget> targets;
  for (const SymmetryOperator& s : symmetries) {
    if (!s.word.is_diagonal()) {
      throw InputError("parity targets require diagonal symmetry words");
    }
    if (s.sign != 1 && s.sign != -1) {
      throw InputError("symmetry sign must be +-1");
    }
    targets.push_back({s.word.z, s.sign});
  }
  return targets;
}

}  // namespace qpbc
