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

#include "qpbc/simulator.hpp"

#include <bit>
#include <cmath>
#include <random>

#include <json.hpp>

namespace qpbc {

void Circuit::add_x(uint32_t q) {
  if (q >= n_qubits) throw InputError("X target out of range");
  CircuitOp op;
  op.kind = CircuitOp::Kind::x_gate;
  op.target = q;
  ops.push_back(op);
}

void Circuit::add_preparation(const std::vector<int>& occupation) {
  if (occupation.size() != n_qubits) {
    throw DimensionError("occupation length does not match circuit");
  }
  for (uint32_t q = 0; q < n_qubits; ++q) {
    if (occupation[q]) add_x(q);
  }
}

void Circuit::add_pauli_exp(const PauliWord& w, double angle) {
  if (w.n_qubits != n_qubits) throw DimensionError("generator size mismatch");
  CircuitOp op;
  op.kind = CircuitOp::Kind::pauli_exp;
  op.word = w;
  op.angle = angle;
  ops.push_back(op);
}

void Circuit::add_pauli_exp_param(const PauliWord& w, int param_index,
                                  double scale) {
  if (w.n_qubits != n_qubits) throw DimensionError("generator size mismatch");
  if (param_index < 0) throw InputError("negative parameter index");
  CircuitOp op;
  op.kind = CircuitOp::Kind::pauli_exp;
  op.word = w;
  op.param_index = param_index;
  op.param_scale = scale;
  ops.push_back(op);
}

void Circuit::add_clifford(const CliffordGate& g) {
  uint32_t hi = std::max(g.target, g.kind == CliffordGate::Kind::CX
                                       ? g.control
                                       : g.target);
  if (hi >= n_qubits) throw InputError("gate target out of range");
  CircuitOp op;
  op.kind = CircuitOp::Kind::clifford;
  op.gate = g;
  ops.push_back(op);
}

uint32_t Circuit::n_params() const {
  int hi = -1;
  for (const auto& op : ops) hi = std::max(hi, op.param_index);
  return uint32_t(hi + 1);
}

bool NoiseModel::is_noiseless() const {
  if (depolarizing_1q > 0 || depolarizing_2q > 0) return false;
  for (const auto& [p10, p01] : readout_flip) {
    if (p10 > 0 || p01 > 0) return false;
  }
  return true;
}

void NoiseModel::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(depolarizing_1q) || !in_unit(depolarizing_2q)) {
    throw InputError("depolarizing probability out of [0,1]");
  }
  for (const auto& [p10, p01] : readout_flip) {
    if (!in_unit(p10) || !in_unit(p01)) {
      throw InputError("readout probability out of [0,1]");
    }
  }
}

NoiseModel NoiseModel::uniform_readout(uint32_t n, double p10, double p01) {
  NoiseModel m;
  m.readout_flip.assign(n, {p10, p01});
  return m;
}

NoiseModel NoiseModel::synthetic_default(uint32_t n) {
  NoiseModel m = uniform_readout(n, 0.02, 0.03);
  m.depolarizing_1q = 0.001;
  m.depolarizing_2q = 0.01;
  return m;
}

void apply_pauli(const PauliWord& w, StateVector& psi) {
  const Eigen::Index dim = psi.size();
  if (dim != (Eigen::Index{1} << w.n_qubits)) {
    throw DimensionError("state size does not match word");
  }
  cdouble global{1.0, 0.0};
  switch (std::popcount(w.x & w.z) & 3) {
    case 0: global = {1.0, 0.0}; break;
    case 1: global = {0.0, 1.0}; break;
    case 2: global = {-1.0, 0.0}; break;
    case 3: global = {0.0, -1.0}; break;
  }
  StateVector out(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    cdouble amp = global;
    if (std::popcount(uint64_t(b) & w.z) & 1) amp = -amp;
    out(Eigen::Index(uint64_t(b) ^ w.x)) = amp * psi(b);
  }
  psi = std::move(out);
}

namespace {

void apply_clifford(const CliffordGate& g, StateVector& psi) {
  const Eigen::Index dim = psi.size();
  const Eigen::Index tm = Eigen::Index{1} << g.target;
  switch (g.kind) {
    case CliffordGate::Kind::H: {
      const double inv = 1.0 / std::sqrt(2.0);
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (b & tm) continue;
        cdouble a0 = psi(b), a1 = psi(b | tm);
        psi(b) = inv * (a0 + a1);
        psi(b | tm) = inv * (a0 - a1);
      }
      break;
    }
    case CliffordGate::Kind::S: {
      const cdouble i{0.0, 1.0};
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (b & tm) psi(b) *= i;
      }
      break;
    }
    case CliffordGate::Kind::CX: {
      const Eigen::Index cm = Eigen::Index{1} << g.control;
      for (Eigen::Index b = 0; b < dim; ++b) {
        if ((b & cm) && !(b & tm)) std::swap(psi(b), psi(b | tm));
      }
      break;
    }
  }
}

void apply_x(uint32_t q, StateVector& psi) {
  const Eigen::Index tm = Eigen::Index{1} << q;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    if (!(b & tm)) std::swap(psi(b), psi(b | tm));
  }
}

void apply_pauli_exp(const PauliWord& w, double theta, StateVector& psi) {
  // e^{-i theta P} = cos(theta) I - i sin(theta) P; exact because P^2 = I.
  StateVector p = psi;
  apply_pauli(w, p);
  psi = std::cos(theta) * psi - cdouble{0.0, 1.0} * std::sin(theta) * p;
}

double resolve_angle(const CircuitOp& op, const std::vector<double>& params) {
  if (op.param_index < 0) return op.angle;
  if (size_t(op.param_index) >= params.size()) {
    throw InputError("parameter vector too short");
  }
  return op.param_scale * params[size_t(op.param_index)];
}

// Uniform double in [0,1) with 53 bits, independent of library details.
double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

std::vector<uint32_t> support(const PauliWord& w) {
  std::vector<uint32_t> qs;
  for (uint32_t q = 0; q < w.n_qubits; ++q) {
    if (((w.x | w.z) >> q) & 1) qs.push_back(q);
  }
  return qs;
}

std::vector<uint32_t> op_support(const CircuitOp& op) {
  switch (op.kind) {
    case CircuitOp::Kind::pauli_exp: return support(op.word);
    case CircuitOp::Kind::x_gate: return {op.target};
    case CircuitOp::Kind::clifford:
      if (op.gate.kind == CliffordGate::Kind::CX) {
        return {op.gate.control, op.gate.target};
      }
      return {op.gate.target};
  }
  return {};
}

// One Monte Carlo Pauli-twirl trajectory: after each gate, with the
// width-appropriate probability, a uniform non-identity Pauli error on the
// gate's support.
void run_ops(const Circuit& circuit, const std::vector<double>& params,
             const NoiseModel& noise, std::mt19937_64* rng, StateVector& psi) {
  for (const auto& op : circuit.ops) {
    switch (op.kind) {
      case CircuitOp::Kind::pauli_exp:
        apply_pauli_exp(op.word, resolve_angle(op, params), psi);
        break;
      case CircuitOp::Kind::clifford:
        apply_clifford(op.gate, psi);
        break;
      case CircuitOp::Kind::x_gate:
        apply_x(op.target, psi);
        break;
    }
    if (rng == nullptr) continue;
    auto qs = op_support(op);
    if (qs.empty()) continue;
    double p = qs.size() == 1 ? noise.depolarizing_1q : noise.depolarizing_2q;
    if (p <= 0 || uniform01(*rng) >= p) continue;
    uint64_t pick;
    do {
      pick = rng->operator()() & ((uint64_t{1} << (2 * qs.size())) - 1);
    } while (pick == 0);
    PauliWord err(circuit.n_qubits, 0, 0);
    for (size_t i = 0; i < qs.size(); ++i) {
      if ((pick >> (2 * i)) & 1) err.x |= uint64_t{1} << qs[i];
      if ((pick >> (2 * i + 1)) & 1) err.z |= uint64_t{1} << qs[i];
    }
    apply_pauli(err, psi);
  }
}

uint64_t draw_outcome(const StateVector& psi, std::mt19937_64& rng) {
  double r = uniform01(rng);
  double acc = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    acc += std::norm(psi(b));
    if (r < acc) return uint64_t(b);
  }
  return uint64_t(psi.size() - 1);
}

uint64_t readout(uint64_t bits, uint32_t n, const NoiseModel& noise,
                 std::mt19937_64& rng) {
  if (noise.readout_flip.empty()) return bits;
  if (noise.readout_flip.size() != n) {
    throw DimensionError("readout model does not match qubit count");
  }
  for (uint32_t q = 0; q < n; ++q) {
    const auto& [p10, p01] = noise.readout_flip[q];
    double p = ((bits >> q) & 1) ? p01 : p10;
    if (p > 0 && uniform01(rng) < p) bits ^= uint64_t{1} << q;
  }
  return bits;
}

}  // namespace

StateVector run_statevector(const Circuit& circuit,
                            const std::vector<double>& params) {
  if (circuit.n_qubits > 24) throw ResourceError("statevector too large");
  StateVector psi = StateVector::Zero(Eigen::Index{1} << circuit.n_qubits);
  psi(0) = 1.0;
  run_ops(circuit, params, NoiseModel{}, nullptr, psi);
  double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw NumericalError("state norm drifted: " + std::to_string(norm));
  }
  return psi;
}

double exact_expectation(const StateVector& psi, const PauliSum& op) {
  if (!op.is_hermitian()) {
    throw InputError("expectation requires a Hermitian operator");
  }
  if (psi.size() != (Eigen::Index{1} << op.n_qubits())) {
    throw DimensionError("state size does not match operator");
  }
  cdouble acc{0.0, 0.0};
  for (const auto& [w, c] : op.terms()) {
    StateVector p = psi;
    apply_pauli(w, p);
    acc += c * (psi.adjoint() * p)(0, 0);
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw NumericalError("non-real expectation residue");
  }
  return acc.real();
}

ShotTable sample(const Circuit& circuit, const std::vector<double>& params,
                 uint64_t shots, const NoiseModel& noise, uint64_t seed) {
  if (shots == 0) throw InputError("shots must be positive");
  noise.validate();
  std::mt19937_64 rng(seed);
  ShotTable table;
  table.n_bits = circuit.n_qubits;
  table.seed = seed;

  const bool trajectories =
      noise.depolarizing_1q > 0 || noise.depolarizing_2q > 0;
  if (!trajectories) {
    StateVector psi = run_statevector(circuit, params);
    for (uint64_t s = 0; s < shots; ++s) {
      uint64_t bits = draw_outcome(psi, rng);
      table.counts[readout(bits, circuit.n_qubits, noise, rng)]++;
    }
    return table;
  }
  for (uint64_t s = 0; s < shots; ++s) {
    StateVector psi = StateVector::Zero(Eigen::Index{1} << circuit.n_qubits);
    psi(0) = 1.0;
    run_ops(circuit, params, noise, &rng, psi);
    uint64_t bits = draw_outcome(psi, rng);
    table.counts[readout(bits, circuit.n_qubits, noise, rng)]++;
  }
  return table;
}

std::string circuit_to_json_text(const Circuit& circuit) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : circuit.ops) {
    switch (op.kind) {
      case CircuitOp::Kind::pauli_exp: {
        nlohmann::json j{{"op", "pauli_exp"}, {"pauli", op.word.str()}};
        if (op.param_index >= 0) j["param"] = op.param_index;
        else j["angle"] = op.angle;
        ops.push_back(j);
        break;
      }
      case CircuitOp::Kind::clifford:
        ops.push_back({{"op", "clifford"}, {"gate", op.gate.str()}});
        break;
      case CircuitOp::Kind::x_gate:
        ops.push_back({{"op", "x"}, {"target", op.target}});
        break;
    }
  }
  return nlohmann::json{{"n_qubits", circuit.n_qubits}, {"ops", ops}}.dump(2);
}

}  // namespace qpbc
