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

#ifndef QPBC_VARIATIONAL_HPP
#define QPBC_VARIATIONAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "qpbc/fermion.hpp"
#include "qpbc/mitigation.hpp"

namespace qpbc {

/// Product-of-Pauli-exponentials ansatz applied to a basis state.  Each
/// generator applies e^{-i (scale * theta[param]) word}.
struct AnsatzSpec {
  struct Generator {
    PauliWord word;
    int param = 0;
    double scale = 1.0;
  };

  std::vector<int> initial_occupation;
  std::vector<Generator> generators;

  uint32_t n_qubits() const {
    return uint32_t(initial_occupation.size());
  }
  uint32_t n_params() const;
  void validate() const;
  Circuit to_circuit() const;  // preparation X's, then parameterized rotations
};

// Trotterized realization of e^{cluster * theta}: one Pauli rotation per
// JW term of the anti-Hermitian cluster evaluated at unit amplitude.
AnsatzSpec ansatz_from_cluster(const FermionOperator& cluster_at_unit,
                               uint32_t n_modes,
                               const std::vector<int>& occupation,
                               int param_index = 0);

struct Backend {
  enum class Kind { statevector, shots };
  Kind kind = Kind::statevector;
  uint64_t shots = 24000;
  NoiseModel noise;
  uint64_t base_seed = 0;
};

/// One cost evaluation with every mitigation variant for trace logging.
struct CostEval {
  double value = 0.0;   // the variant selected by the flags
  double stddev = 0.0;
  double e_raw = 0.0;
  double e_spam = 0.0;
  double e_pmsv = 0.0;
  double e_spam_pmsv = 0.0;
  double discard_fraction = 0.0;
  uint64_t seed = 0;
};

using CostFn = std::function<CostEval(const std::vector<double>&)>;

/// VQE cost: builds the measurement plan once, then evaluates by exact
/// state-vector algebra or seeded shot sampling.
class VqeCost {
 public:
  VqeCost(PauliSum h, AnsatzSpec ansatz,
          std::vector<SymmetryOperator> symmetries, Backend backend,
          MitigationFlags flags,
          ConfusionModel model = ConfusionModel::identity(0));

  CostEval operator()(const std::vector<double>& theta) const;
  const MeasurementPlan& plan() const { return plan_; }

 private:
  PauliSum h_;
  AnsatzSpec ansatz_;
  Backend backend_;
  MitigationFlags flags_;
  ConfusionModel model_;
  MeasurementPlan plan_;
  mutable uint64_t eval_counter_ = 0;
};

struct TransQseProblem {
  PauliSum h;
  PauliSum h_lambda;   // Hermitian product H Lambda
  PauliSum lambda_op;  // Lambda
  AnsatzSpec ansatz;
  int taylor_order = 0;  // 0: exact rational form, 1: first-order expansion
};

// Energy (h0 + h1) / (1 + s1) or first order (h0 + h1)(1 - s1); stddev by
// the delta method over the three estimates.
std::pair<double, double> transqse_energy(double theta,
                                          const TransQseProblem& problem,
                                          const Backend& backend,
                                          const MitigationFlags& flags);

struct TraceStep {
  std::vector<double> theta;
  double e_raw = 0.0;
  double e_spam = 0.0;
  double e_pmsv = 0.0;
  double e_spam_pmsv = 0.0;
  double value = 0.0;
  double stddev = 0.0;
  double discard_fraction = 0.0;
  uint64_t seed = 0;
};

struct OptimizationTrace {
  std::vector<TraceStep> steps;

  const TraceStep& best() const;
};

// Coordinate-wise sinusoid minimizer; records every accepted update.
// frequency is the angular frequency of the cost in each coordinate:
// 1 for A*sin(theta + phi) + C, 2 for expectation values of e^{-i theta P}
// ansatz rotations (which are pi-periodic).  Shifts are +-pi/(2*frequency).
OptimizationTrace rotosolve(const CostFn& cost, std::vector<double> theta0,
                            int max_sweeps = 10, double tol = 1e-3,
                            int frequency = 1);

// Two-point parameter-shift descent with +-pi/4 shifts.
OptimizationTrace sgd(const CostFn& cost, std::vector<double> theta0,
                      double learning_rate, int steps = 50);

// Parameter-shift gradient, exact for involutory generators.
std::vector<double> parameter_shift_gradient(const CostFn& cost,
                                             const std::vector<double>& theta);

double wrap_angle(double theta);  // to (-pi, pi]

std::string trace_to_csv(const OptimizationTrace& trace);

// Ansatz file: {"initial_occupation": [...], "generators":
// [{"pauli", "param", "scale"}]}.
AnsatzSpec load_ansatz(const std::string& path);
void save_ansatz(const AnsatzSpec& ansatz, const std::string& path);

}  // namespace qpbc

#endif
