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

// Test-only dense-matrix oracles, independent of the implementation paths
// they check.  Everything here builds matrices from first principles
// (explicit 2x2 Paulis and Kronecker products) rather than going through
// qpbc::dense_matrix.

#ifndef QPBC_TESTS_ORACLES_HPP
#define QPBC_TESTS_ORACLES_HPP

#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpbc/pauli.hpp"

namespace qpbc::oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli2x2(char letter) {
  Mat m(2, 2);
  const std::complex<double> i{0, 1};
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Matrix of a Pauli string given qubit-0-leftmost; qubit 0 is the lowest
// bit of the basis index, so it is the rightmost Kronecker factor.
inline Mat word_matrix(const std::string& letters) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) m = kron(pauli2x2(c), m);
  return m;
}

inline Mat sum_matrix(const PauliSum& s) {
  Eigen::Index dim = Eigen::Index{1} << s.n_qubits();
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [w, c] : s.terms()) m += c * word_matrix(w.str());
  return m;
}

inline PauliWord random_word(std::mt19937_64& rng, uint32_t n) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::string s;
  for (uint32_t q = 0; q < n; ++q) s.push_back("IXYZ"[letter(rng)]);
  return PauliWord::from_string(s);
}

inline PauliSum random_hermitian_sum(std::mt19937_64& rng, uint32_t n,
                                     int n_terms) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  PauliSum s(n);
  for (int i = 0; i < n_terms; ++i) s.add(random_word(rng, n), coeff(rng));
  return s;
}

inline Vec random_state(std::mt19937_64& rng, uint32_t n) {
  std::normal_distribution<double> g;
  Vec v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  v.normalize();
  return v;
}

}  // namespace qpbc::oracle

#endif
