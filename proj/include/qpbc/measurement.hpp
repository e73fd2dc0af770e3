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

#ifndef QPBC_MEASUREMENT_HPP
#define QPBC_MEASUREMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpbc/pauli.hpp"
#include "qpbc/symmetry.hpp"

namespace qpbc {

/// Terms measurable by one circuit, plus the symmetries that ride along.
struct CommutingSet {
  std::vector<PauliWord> members;
  std::vector<SymmetryOperator> attached_symmetries;
};

enum class PartitionStrategy { general, qubitwise };

// Greedy coloring of the conflict graph, vertices visited in descending
// degree (ties by input order).  Identity words are rejected.
std::vector<CommutingSet> partition_commuting(
    const std::vector<PauliWord>& terms, PartitionStrategy strategy);

// Append each symmetry to every set whose members all commute with it.
void attach_symmetries(std::vector<CommutingSet>& sets,
                       const std::vector<SymmetryOperator>& syms);

struct CliffordGate {
  enum class Kind { H, S, CX };
  Kind kind;
  uint32_t target = 0;
  uint32_t control = 0;  // CX only

  std::string str() const;
};

/// Measured eigenvalue of an operator read off the output bits:
/// sign * (-1)^popcount(bits & mask).
struct ResultMap {
  uint64_t mask = 0;
  int sign = 1;
};

/// Post-selection target: keep outcomes with
/// (-1)^popcount(bits & mask) == expected_sign.
struct ParityTarget {
  uint64_t mask = 0;
  int expected_sign = 1;
};

struct PlanEntry {
  CommutingSet set;
  std::vector<CliffordGate> circuit;
  std::map<PauliWord, ResultMap> member_map;
  std::vector<ParityTarget> targets;  // one per attached symmetry
};

struct MeasurementPlan {
  uint32_t n_qubits = 0;
  std::vector<PlanEntry> entries;
};

// Clifford conjugation of a signed diagonal-free word by one gate, in the
// Heisenberg sense w -> g w g+.  Exposed for verification.
void conjugate_by_gate(const CliffordGate& g, uint64_t& x, uint64_t& z,
                       int& sign);

// Diagonalize a commuting set: emits H/S/CX gates and the result maps.
// Throws SymmetryError if the set violates its commutation invariant.
PlanEntry synthesize_measurement(const CommutingSet& set, uint32_t n_qubits);

// Partition the non-identity terms of h, attach symmetries, synthesize.
MeasurementPlan make_measurement_plan(const PauliSum& h,
                                      PartitionStrategy strategy,
                                      const std::vector<SymmetryOperator>& syms);

/// Histogram of measured bitstrings for one circuit.  Bit q of the key is
/// qubit q's outcome.
struct ShotTable {
  std::string circuit_id;
  uint32_t n_bits = 0;
  std::map<uint64_t, uint64_t> counts;
  uint64_t seed = 0;

  uint64_t total() const;
};

/// Real-weighted variant produced by SPAM correction.
struct WeightedCounts {
  uint32_t n_bits = 0;
  std::map<uint64_t, double> weights;

  double total() const;
};

WeightedCounts to_weighted(const ShotTable& table);

// Combine shot tables (one per plan entry, in order) into the expectation
// of the operator whose coefficients are given by h.  Returns (value,
// stddev); stddev is the root sum of squares of per-set standard errors.
std::pair<double, double> estimate_expectation(const MeasurementPlan& plan,
                                               const std::vector<ShotTable>& tables,
                                               const PauliSum& h);
std::pair<double, double> estimate_expectation(
    const MeasurementPlan& plan, const std::vector<WeightedCounts>& tables,
    const PauliSum& h);

std::string bitstring(uint64_t bits, uint32_t n);  // qubit 0 leftmost
uint64_t parse_bitstring(const std::string& s);

// Shot-table file: {"circuit_id", "n_bits", "seed", "counts": {"bits": n}}.
ShotTable load_shot_table(const std::string& path);
void save_shot_table(const ShotTable& table, const std::string& path);

// Inspection dump of circuits and result maps.
std::string plan_to_json_text(const MeasurementPlan& plan);

}  // namespace qpbc

#endif
