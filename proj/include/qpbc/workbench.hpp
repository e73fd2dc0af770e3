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

#ifndef QPBC_WORKBENCH_HPP
#define QPBC_WORKBENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qpbc/variational.hpp"

namespace qpbc {

inline constexpr const char* kVersion = "qpbc 1.0.0";
inline constexpr double kKjPerMolPerHartree = 2625.4996394798254;

// Converts a value in the named unit ("hartree" or "kj_per_mol").
double to_kj_per_mol(double value, const std::string& unit);

/// Declarative description of one experiment; file paths are resolved
/// relative to the working directory.
struct ExperimentConfig {
  std::string kind = "vqe";  // vqe | transqse

  std::string hamiltonian;      // Pauli-sum file, required
  std::string ansatz;           // ansatz file, required
  std::string symmetries;       // symmetry-set file, optional
  std::string lambda;           // overlap-operator Pauli-sum file (transqse)
  std::string confusion_model;  // readout model file, optional
  std::string unit = "hartree"; // unit of the Hamiltonian coefficients

  double e_hf_reference = 0.0;  // kJ/mol baseline for delta E
  bool has_e_hf_reference = false;
  std::vector<int> sector_signs;  // overrides the declared symmetry signs

  std::string optimizer = "rotosolve";  // rotosolve | sgd
  int max_sweeps = 10;
  double tol = 1e-3;
  double learning_rate = 0.4;
  int sgd_steps = 50;
  std::vector<double> theta0;  // empty: every parameter starts at 1e-5
  int taylor_order = 1;        // transqse cost form

  std::string backend = "statevector";  // statevector | shots
  uint64_t shots = 24000;
  uint64_t seed = 0;
  std::string noise = "none";        // none | synthetic
  std::string mitigation = "none";   // none | spam | pmsv | spam+pmsv

  // Enum fields, positivity, and referenced-file existence.
  void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from_json_text(const std::string& text);
// Canonical serialization; equal configs produce byte-equal text.
std::string experiment_config_to_json_text(const ExperimentConfig& config);

// FNV-1a hash of the canonical config text.
uint64_t config_hash(const ExperimentConfig& config);

struct ExperimentResult {
  OptimizationTrace trace;
  std::vector<double> final_theta;
  double energy = 0.0;         // best cost value, input units
  double energy_kj_mol = 0.0;
  double stddev_kj_mol = 0.0;
  double delta_e_kj_mol = 0.0;  // relative to e_hf_reference
  bool has_delta_e = false;
  double discard_fraction = 0.0;
  uint64_t seed = 0;
  uint64_t hash = 0;
  std::string version = kVersion;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Persists config.json, seeds.json, trace.csv and result.json; the four
// files are sufficient to re-execute the run bit-identically.
void write_run_directory(const ExperimentConfig& config,
                         const ExperimentResult& result,
                         const std::string& out_dir);

// Energy-versus-step convergence plot with one polyline per mitigation
// variant, as a standalone SVG document.
std::string convergence_plot_svg(const OptimizationTrace& trace);

/// Noiseless probability check against the published two-outcome tables.
struct TableReport {
  std::string table;  // "IV" or "V"
  double theta = 0.0;
  uint64_t shots = 0;
  double p00 = 0.0, p11 = 0.0;
  double published_p00 = 0.0, published_p11 = 0.0;
};

TableReport reproduce_table(const std::string& which,
                            uint64_t shots = 1000000, uint64_t seed = 0);
std::string table_report_text(const TableReport& report);

// Fixed disclaimer attached to published absolute energies.
std::string reference_energy_note();

// Parity targets read off diagonal symmetry words: mask from the Z support,
// expected sign from the declared sector eigenvalue.
std::vector<ParityTarget> targets_from_symmetries(
    const std::vector<SymmetryOperator>& symmetries);

}  // namespace qpbc

#endif
