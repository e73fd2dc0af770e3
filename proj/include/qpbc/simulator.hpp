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

#ifndef QPBC_SIMULATOR_HPP
#define QPBC_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpbc/measurement.hpp"
#include "qpbc/pauli.hpp"

namespace qpbc {

using StateVector = Eigen::VectorXcd;

struct CircuitOp {
  enum class Kind { pauli_exp, clifford, x_gate };
  Kind kind;
  PauliWord word;       // pauli_exp generator
  double angle = 0.0;   // pauli_exp constant angle
  int param_index = -1; // >= 0: angle taken from the parameter vector
  double param_scale = 1.0;  // multiplies the referenced parameter
  CliffordGate gate{CliffordGate::Kind::H, 0};
  uint32_t target = 0;  // x_gate
};

/// Gate list applied left to right to |0...0>; measurement is terminal.
struct Circuit {
  uint32_t n_qubits = 0;
  std::vector<CircuitOp> ops;

  explicit Circuit(uint32_t n = 0) : n_qubits(n) {}

  void add_x(uint32_t q);
  // Prepends nothing; X gates setting the given occupation pattern.
  void add_preparation(const std::vector<int>& occupation);
  void add_pauli_exp(const PauliWord& w, double angle);
  void add_pauli_exp_param(const PauliWord& w, int param_index,
                           double scale = 1.0);
  void add_clifford(const CliffordGate& g);

  uint32_t n_params() const;  // 1 + max referenced index, 0 if none
};

struct NoiseModel {
  // Per-qubit (p(1|0), p(0|1)); empty means ideal readout.
  std::vector<std::pair<double, double>> readout_flip;
  double depolarizing_1q = 0.0;
  double depolarizing_2q = 0.0;

  bool is_noiseless() const;
  void validate() const;
  // Uniform readout error on every qubit.
  static NoiseModel uniform_readout(uint32_t n, double p10, double p01);
  // The synthetic stand-in profile used throughout.
  static NoiseModel synthetic_default(uint32_t n);
};

StateVector run_statevector(const Circuit& circuit,
                            const std::vector<double>& params);

// In-place action of a Pauli word on amplitudes.
void apply_pauli(const PauliWord& w, StateVector& psi);

double exact_expectation(const StateVector& psi, const PauliSum& op);

ShotTable sample(const Circuit& circuit, const std::vector<double>& params,
                 uint64_t shots, const NoiseModel& noise, uint64_t seed);

std::string circuit_to_json_text(const Circuit& circuit);

}  // namespace qpbc

#endif
