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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpbc/workbench.hpp"

namespace {

using namespace qpbc;

// Exit conventions: 0 success, 1 validation failure, 2 runtime error,
// 64 usage error.
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;
constexpr int kUsageError = 64;

int run_ham_validate(const std::string& path) {
  FermionHamiltonianData data = load_fermion_hamiltonian(path);
  data.validate();
  std::cout << "valid: " << path << "\n"
            << "  modes: " << data.n_modes << "\n"
            << "  mesh: [" << data.mesh.L1 << ", " << data.mesh.L2 << ", "
            << data.mesh.L3 << "]\n"
            << "  one-body entries: " << data.one_body.size() << "\n"
            << "  two-body entries: " << data.two_body.size() << "\n"
            << "  unit: " << data.unit << "\n"
            << "  constant: " << data.constant << "\n";
  return kOk;
}

int run_taper(const std::string& ham_path, const std::string& sym_path,
              const std::vector<int>& sector, const std::string& out_path) {
  PauliSum h = load_pauli_sum(ham_path);
  std::vector<SymmetryOperator> syms = load_symmetries(sym_path);
  std::optional<std::vector<int>> sector_override;
  if (!sector.empty()) sector_override = sector;
  auto [reduced, map] = taper(h, syms, sector_override);
  std::cout << "tapered " << map.n_full << " -> " << map.n_reduced()
            << " qubits\n";
  std::cout << "  removed qubits:";
  for (uint32_t q : map.removed_qubits) std::cout << " " << q;
  std::cout << "\n  retained qubits:";
  for (uint32_t q : map.retained_qubits) std::cout << " " << q;
  std::cout << "\n  terms: " << reduced.size() << "\n";
  if (!out_path.empty()) {
    save_pauli_sum(reduced, out_path);
    std::cout << "  wrote " << out_path << "\n";
  }
  return kOk;
}

int run_partition(const std::string& ham_path, const std::string& strategy) {
  PauliSum h = load_pauli_sum(ham_path);
  PartitionStrategy s = strategy == "qubitwise" ? PartitionStrategy::qubitwise
                                                : PartitionStrategy::general;
  std::vector<PauliWord> words;
  for (const auto& [w, c] : h.terms()) {
    if (!w.is_identity()) words.push_back(w);
  }
  auto sets = partition_commuting(words, s);
  std::cout << sets.size() << " commuting sets (" << strategy << ")\n";
  for (size_t i = 0; i < sets.size(); ++i) {
    std::cout << "  set " << i << ":";
    for (const PauliWord& w : sets[i].members) std::cout << " " << w.str();
    std::cout << "\n";
  }
  return kOk;
}

int run_spam_calibrate(uint32_t qubits, uint64_t shots, uint64_t seed,
                       const std::string& noise, const std::string& out) {
  NoiseModel model;
  if (noise == "synthetic") {
    model = NoiseModel::synthetic_default(qubits);
  } else if (noise != "none") {
    throw InputError("invalid noise: " + noise);
  }
  Sampler backend = [&model](const Circuit& c, uint64_t n, uint64_t s) {
    return sample(c, {}, n, model, s);
  };
  ConfusionModel confusion = calibrate_spam(
      backend, qubits, shots, ConfusionModel::Mode::per_qubit, seed);
  save_confusion_model(confusion, out);
  std::cout << "calibrated " << qubits << "-qubit readout model ("
            << shots << " shots per preparation)\n  wrote " << out << "\n";
  return kOk;
}

int run_experiment_cmd(const ExperimentConfig& config,
                       const std::string& out_dir) {
  ExperimentResult result = run_experiment(config);
  write_run_directory(config, result, out_dir);
  std::cout << "run complete (" << result.trace.steps.size() << " steps)\n";
  std::cout << "  energy: " << result.energy_kj_mol << " kJ/mol";
  if (config.backend == "shots") {
    std::cout << " +- " << result.stddev_kj_mol;
  }
  std::cout << "\n";
  if (result.has_delta_e) {
    std::cout << "  delta E: " << result.delta_e_kj_mol << " kJ/mol\n";
  }
  std::cout << "  theta:";
  for (double t : result.final_theta) std::cout << " " << t;
  std::cout << "\n  discard fraction: " << result.discard_fraction << "\n"
            << "  wrote " << out_dir << "\n"
            << "note: " << reference_energy_note() << "\n";
  return kOk;
}

int run_pmsv_filter(const std::string& table_path, const std::string& sym_path,
                    const std::string& out) {
  ShotTable table = load_shot_table(table_path);
  auto targets = targets_from_symmetries(load_symmetries(sym_path));
  auto [filtered, discard] = pmsv_postselect(table, targets);
  std::cout << "kept " << filtered.total() << " of " << table.total()
            << " shots (discard fraction " << discard << ")\n";
  if (!out.empty()) {
    save_shot_table(filtered, out);
    std::cout << "  wrote " << out << "\n";
  }
  return kOk;
}

// Rebuild a trace from its delimited export; accepts any theta arity.
OptimizationTrace parse_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty trace file: " + path);
  std::vector<std::string> header;
  {
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) header.push_back(f);
  }
  size_t n_theta = 0;
  while (n_theta + 1 < header.size() &&
         header[n_theta + 1] == "theta" + std::to_string(n_theta)) {
    ++n_theta;
  }
  if (header.size() != n_theta + 8) {
    throw InputError("unrecognized trace header in " + path);
  }
  OptimizationTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f;
    std::vector<std::string> row;
    while (std::getline(fields, f, ',')) row.push_back(f);
    if (row.size() != header.size()) {
      throw InputError("malformed trace row in " + path);
    }
    TraceStep s;
    for (size_t d = 0; d < n_theta; ++d) {
      s.theta.push_back(std::stod(row[1 + d]));
    }
    s.e_raw = std::stod(row[n_theta + 1]);
    s.e_spam = std::stod(row[n_theta + 2]);
    s.e_pmsv = std::stod(row[n_theta + 3]);
    s.e_spam_pmsv = std::stod(row[n_theta + 4]);
    s.stddev = std::stod(row[n_theta + 5]);
    s.discard_fraction = std::stod(row[n_theta + 6]);
    s.seed = std::stoull(row[n_theta + 7]);
    s.value = s.e_raw;
    trace.steps.push_back(s);
  }
  return trace;
}

int run_report(const std::string& run_dir, const std::string& out_dir) {
  namespace fs = std::filesystem;
  OptimizationTrace trace =
      parse_trace_csv((fs::path(run_dir) / "trace.csv").string());
  fs::path out = out_dir.empty() ? fs::path(run_dir) : fs::path(out_dir);
  fs::create_directories(out);
  {
    std::ofstream csv(out / "report.csv", std::ios::binary);
    if (!csv) throw ResourceError("cannot write report.csv");
    csv << trace_to_csv(trace);
  }
  {
    std::ofstream svg(out / "plot.svg", std::ios::binary);
    if (!svg) throw ResourceError("cannot write plot.svg");
    svg << convergence_plot_svg(trace);
  }
  std::cout << "report for " << run_dir << " (" << trace.steps.size()
            << " steps)\n  wrote " << (out / "report.csv").string() << "\n"
            << "  wrote " << (out / "plot.svg").string() << "\n";
  return kOk;
}

int run_reproduce_tables(const std::string& which, uint64_t shots,
                         uint64_t seed) {
  std::vector<std::string> tables;
  if (which == "all") {
    tables = {"IV", "V"};
  } else {
    tables = {which};
  }
  for (const std::string& t : tables) {
    std::cout << table_report_text(reproduce_table(t, shots, seed));
  }
  std::cout << "note: " << reference_energy_note() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-system model Hamiltonian workbench"};
  app.require_subcommand(1);

  // ham validate
  auto* ham = app.add_subcommand("ham", "Fermionic Hamiltonian files");
  ham->require_subcommand(1);
  auto* ham_validate =
      ham->add_subcommand("validate", "Check a Hamiltonian file");
  std::string ham_file;
  ham_validate->add_option("file", ham_file, "Hamiltonian file")->required();

  // taper
  auto* taper_cmd = app.add_subcommand("taper", "Taper symmetries out");
  std::string taper_ham, taper_syms, taper_out;
  std::vector<int> taper_sector;
  taper_cmd->add_option("--hamiltonian", taper_ham, "Pauli-sum file")
      ->required();
  taper_cmd->add_option("--symmetries", taper_syms, "Symmetry-set file")
      ->required();
  taper_cmd->add_option("--sector", taper_sector, "Sector signs (+-1)");
  taper_cmd->add_option("--out", taper_out, "Output Pauli-sum file");

  // partition
  auto* partition_cmd =
      app.add_subcommand("partition", "Group terms into commuting sets");
  std::string part_ham, part_strategy = "general";
  partition_cmd->add_option("--hamiltonian", part_ham, "Pauli-sum file")
      ->required();
  partition_cmd
      ->add_option("--strategy", part_strategy, "general or qubitwise")
      ->check(CLI::IsMember({"general", "qubitwise"}));

  // spam calibrate
  auto* spam = app.add_subcommand("spam", "Readout-error models");
  spam->require_subcommand(1);
  auto* spam_calibrate =
      spam->add_subcommand("calibrate", "Estimate a confusion model");
  uint32_t spam_qubits = 0;
  uint64_t spam_shots = 24000, spam_seed = 0;
  std::string spam_noise = "synthetic", spam_out;
  spam_calibrate->add_option("--qubits", spam_qubits, "Qubit count")
      ->required();
  spam_calibrate->add_option("--shots", spam_shots, "Shots per preparation");
  spam_calibrate->add_option("--seed", spam_seed, "Sampling seed");
  spam_calibrate->add_option("--noise", spam_noise, "none or synthetic");
  spam_calibrate->add_option("--out", spam_out, "Output model file")
      ->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "Execute an experiment config");
  std::string run_config, run_out = "run";
  std::optional<uint64_t> run_seed, run_shots;
  std::optional<std::string> run_backend, run_mitigation;
  run_cmd->add_option("--config", run_config, "Experiment config file")
      ->required();
  run_cmd->add_option("--seed", run_seed, "Override the config seed");
  run_cmd->add_option("--shots", run_shots, "Override the shot count");
  run_cmd
      ->add_option("--backend", run_backend, "statevector or shots")
      ->check(CLI::IsMember({"statevector", "shots"}));
  run_cmd
      ->add_option("--mitigation", run_mitigation,
                   "none, spam, pmsv or spam+pmsv")
      ->check(CLI::IsMember({"none", "spam", "pmsv", "spam+pmsv"}));
  run_cmd->add_option("--out", run_out, "Run directory");

  // pmsv filter
  auto* pmsv = app.add_subcommand("pmsv", "Parity post-selection");
  pmsv->require_subcommand(1);
  auto* pmsv_filter = pmsv->add_subcommand("filter", "Filter a shot table");
  std::string pmsv_table, pmsv_syms, pmsv_out;
  pmsv_filter->add_option("--table", pmsv_table, "Shot-table file")
      ->required();
  pmsv_filter->add_option("--symmetries", pmsv_syms, "Symmetry-set file")
      ->required();
  pmsv_filter->add_option("--out", pmsv_out, "Filtered table file");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "Render a run directory report");
  std::string report_run, report_out;
  report_cmd->add_option("--run", report_run, "Run directory")->required();
  report_cmd->add_option("--out", report_out, "Output directory");

  // reproduce-tables
  auto* tables_cmd = app.add_subcommand(
      "reproduce-tables", "Noiseless two-outcome probability tables");
  std::string tables_which = "all";
  uint64_t tables_shots = 1000000, tables_seed = 0;
  tables_cmd->add_option("--table", tables_which, "IV, V or all")
      ->check(CLI::IsMember({"IV", "V", "all"}));
  tables_cmd->add_option("--shots", tables_shots, "Shot count");
  tables_cmd->add_option("--seed", tables_seed, "Sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (ham_validate->parsed()) return run_ham_validate(ham_file);
    if (taper_cmd->parsed()) {
      return run_taper(taper_ham, taper_syms, taper_sector, taper_out);
    }
    if (partition_cmd->parsed()) {
      return run_partition(part_ham, part_strategy);
    }
    if (spam_calibrate->parsed()) {
      return run_spam_calibrate(spam_qubits, spam_shots, spam_seed,
                                spam_noise, spam_out);
    }
    if (run_cmd->parsed()) {
      ExperimentConfig config = load_experiment_config(run_config);
      if (run_seed) config.seed = *run_seed;
      if (run_shots) config.shots = *run_shots;
      if (run_backend) config.backend = *run_backend;
      if (run_mitigation) config.mitigation = *run_mitigation;
      return run_experiment_cmd(config, run_out);
    }
    if (pmsv_filter->parsed()) {
      return run_pmsv_filter(pmsv_table, pmsv_syms, pmsv_out);
    }
    if (report_cmd->parsed()) return run_report(report_run, report_out);
    if (tables_cmd->parsed()) {
      return run_reproduce_tables(tables_which, tables_shots, tables_seed);
    }
    std::cerr << "no subcommand selected\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
