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

#ifndef QPBC_PAULI_HPP
#define QPBC_PAULI_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qpbc/common.hpp"

namespace qpbc {

/// An n-qubit Pauli word in symplectic (x|z) representation.
///
/// Qubit q carries the letter selected by (x_q, z_q):
/// (0,0) = I, (1,0) = X, (1,1) = Y, (0,1) = Z.
/// With the convention Y = iXZ the matrix of a word is the plain Kronecker
/// product of the single-qubit Pauli matrices, so Hermitian sums have real
/// canonical coefficients.
///
/// Bit packing is little-endian in the qubit index (qubit 0 = lowest bit);
/// string rendering puts qubit 0 leftmost.
struct PauliWord {
  uint32_t n_qubits = 0;
  uint64_t x = 0;
  uint64_t z = 0;

  PauliWord() = default;
  PauliWord(uint32_t n, uint64_t x_bits, uint64_t z_bits);

  static PauliWord identity(uint32_t n);
  // Single-letter constructors, e.g. PauliWord::single(4, 'Z', 2) == IIZI.
  static PauliWord single(uint32_t n, char letter, uint32_t qubit);
  // Parse from a string over IXYZ, qubit 0 leftmost.
  static PauliWord from_string(std::string_view s);

  char letter(uint32_t qubit) const;
  bool is_identity() const { return x == 0 && z == 0; }
  // True when the word contains only I and Z letters.
  bool is_diagonal() const { return x == 0; }
  uint32_t weight() const;  // number of non-identity letters

  std::string str() const;

  auto operator<=>(const PauliWord&) const = default;
};

/// A Pauli word together with a unit phase from {1, i, -1, -i}.
struct PhasedWord {
  PauliWord word;
  cdouble phase{1.0, 0.0};
};

// Product of two words: (a)(b) = phase * c with c the symplectic sum.
PhasedWord multiply(const PauliWord& a, const PauliWord& b);
PhasedWord multiply(const PhasedWord& a, const PhasedWord& b);

// True iff a and b commute (symplectic inner product is even).
bool commutes(const PauliWord& a, const PauliWord& b);

// Qubit-wise commutation: letters agree or one is I on every qubit.
bool commutes_qubitwise(const PauliWord& a, const PauliWord& b);

/// Complex-weighted sum of Pauli words, kept canonical: one entry per word,
/// coefficients below the pruning tolerance dropped.
class PauliSum {
 public:
  static constexpr double kPruneTol = 1e-12;

  PauliSum() = default;
  explicit PauliSum(uint32_t n_qubits) : n_qubits_(n_qubits) {}

  uint32_t n_qubits() const { return n_qubits_; }
  const std::map<PauliWord, cdouble>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliWord& w, cdouble coeff);
  cdouble coefficient(const PauliWord& w) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cdouble scalar);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cdouble s) { return a *= s; }
  friend PauliSum operator*(cdouble s, PauliSum a) { return a *= s; }
  PauliSum operator*(const PauliSum& other) const;

  // All canonical coefficients real within tol.
  bool is_hermitian(double tol = 1e-10) const;

  std::string str() const;

 private:
  uint32_t n_qubits_ = 0;
  std::map<PauliWord, cdouble> terms_;
};

// ab - ba as a pruned sum; empty result means the operators commute.
PauliSum sum_commutator(const PauliSum& a, const PauliSum& b);

// Contract idle qubits held at fixed computational-basis values.  Every fixed
// qubit must carry only I or Z letters; each Z contributes (-1)^bit to the
// coefficient.  Remaining qubits are relabeled in ascending original order.
PauliSum restrict_support(const PauliSum& op,
                          const std::map<uint32_t, int>& fixed_bits);

// Like restrict_support but first drops terms with X or Y letters on fixed
// qubits (their partial expectation on the fixed bits vanishes).  Preserves
// expectation values on states that are products of |fixed> and anything on
// the remaining qubits.
PauliSum contract_on_reference(const PauliSum& op,
                               const std::map<uint32_t, int>& fixed_bits);

// Dense Kronecker-product expansion; guarded at 12 qubits.
Eigen::MatrixXcd dense_matrix(const PauliSum& op);
Eigen::MatrixXcd dense_matrix(const PauliWord& w);

// Pauli-sum file format: {"n_qubits": n, "terms": [{"pauli": "...",
// "coeff": [re, im]}, ...]}.
PauliSum load_pauli_sum(const std::string& path);
void save_pauli_sum(const PauliSum& op, const std::string& path);
PauliSum pauli_sum_from_json_text(const std::string& text);
std::string pauli_sum_to_json_text(const PauliSum& op);

}  // namespace qpbc

#endif
