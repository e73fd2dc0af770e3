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

#ifndef QPBC_MITIGATION_HPP
#define QPBC_MITIGATION_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpbc/measurement.hpp"
#include "qpbc/simulator.hpp"

namespace qpbc {

/// Readout confusion model; matrices are column stochastic with
/// M[observed][prepared].
struct ConfusionModel {
  enum class Mode { per_qubit, full };
  Mode mode = Mode::per_qubit;
  std::vector<Eigen::Matrix2d> per_qubit;
  Eigen::MatrixXd full;

  uint32_t n_qubits() const;
  void validate() const;
  // Full response matrix on 2^n outcomes (per_qubit mode expands the
  // Kronecker product); guarded at 10 qubits.
  Eigen::MatrixXd response_matrix() const;
  static ConfusionModel identity(uint32_t n);
};

using Sampler =
    std::function<ShotTable(const Circuit&, uint64_t shots, uint64_t seed)>;

// Estimate the confusion model by preparing basis states through the
// sampler.  per_qubit uses the all-zeros and all-ones preparations; full
// prepares every basis state (n <= 10).
ConfusionModel calibrate_spam(const Sampler& backend, uint32_t n_qubits,
                              uint64_t shots,
                              ConfusionModel::Mode mode =
                                  ConfusionModel::Mode::per_qubit,
                              uint64_t seed = 0);

// Least-squares inverse of the confusion model followed by projection onto
// the probability simplex; output weights sum to the input total.
WeightedCounts spam_correct(const ShotTable& table,
                            const ConfusionModel& model);
WeightedCounts spam_correct(const WeightedCounts& table,
                            const ConfusionModel& model);

// Euclidean projection onto {x >= 0, sum x = target}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double target);

// Keep only outcomes whose parity matches every target.
std::pair<ShotTable, double> pmsv_postselect(
    const ShotTable& table, const std::vector<ParityTarget>& targets);
std::pair<WeightedCounts, double> pmsv_postselect(
    const WeightedCounts& table, const std::vector<ParityTarget>& targets);

struct MitigationFlags {
  bool spam = false;
  bool pmsv = false;
};

struct MitigationResult {
  double value = 0.0;
  double stddev = 0.0;
  double discard_fraction = 0.0;
};

// SPAM correction first, then PMSV per circuit with the plan's targets,
// then estimation.  discard_fraction aggregates over all circuits.
MitigationResult mitigated_expectation(const MeasurementPlan& plan,
                                       const std::vector<ShotTable>& tables,
                                       const PauliSum& h,
                                       const ConfusionModel& model,
                                       const MitigationFlags& flags);

// Confusion model file: {"mode", "matrices": [[..2x2..], ...] | [[..full..]]}.
ConfusionModel load_confusion_model(const std::string& path);
void save_confusion_model(const ConfusionModel& model, const std::string& path);

}  // namespace qpbc

#endif
