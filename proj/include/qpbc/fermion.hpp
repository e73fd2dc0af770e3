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

#ifndef QPBC_FERMION_HPP
#define QPBC_FERMION_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpbc/common.hpp"
#include "qpbc/pauli.hpp"

namespace qpbc {

/// Spin orbital labeled by k-point triple, orbital index (energy-ascending
/// per k-point) and spin (0 = up, 1 = down).
struct SpinOrbital {
  std::array<int, 3> k{0, 0, 0};
  int p = 0;
  int sigma = 0;

  auto operator<=>(const SpinOrbital&) const = default;
  std::string str() const;
};

/// The [L1 L2 L3] k-point mesh; momentum arithmetic is componentwise mod L.
struct KPointMesh {
  int L1 = 1, L2 = 1, L3 = 1;

  KPointMesh() = default;
  KPointMesh(int l1, int l2, int l3);
  std::array<int, 3> dims() const { return {L1, L2, L3}; }
};

/// One product of creation/annihilation factors with a complex coefficient.
/// Factors are stored in application order (rightmost factor acts first is
/// NOT implied; the product reads left to right as written).
struct FermionTerm {
  // (mode index, is_creation)
  std::vector<std::pair<uint32_t, bool>> factors;
  cdouble coeff{1.0, 0.0};
};

/// Sum of products of ladder operators over plain mode indices.
class FermionOperator {
 public:
  FermionOperator() = default;

  void add_term(FermionTerm term);
  const std::vector<FermionTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  FermionOperator adjoint() const;
  FermionOperator& operator+=(const FermionOperator& other);
  FermionOperator& operator-=(const FermionOperator& other);
  FermionOperator& operator*=(cdouble s);

 private:
  std::vector<FermionTerm> terms_;
};

// Jordan-Wigner image with Z strings on lower-indexed modes.
PauliSum jordan_wigner(const FermionOperator& op, uint32_t n_modes);

// True iff created minus annihilated momentum vanishes componentwise mod
// (L1, L2, L3).
bool conserves_momentum(
    const std::vector<std::pair<SpinOrbital, bool>>& excitation,
    const KPointMesh& mesh);

struct SingleExcitation {
  SpinOrbital a, i;  // occupied i -> virtual a
  auto operator<=>(const SingleExcitation&) const = default;
};

struct DoubleExcitation {
  SpinOrbital a, i, b, j;
  auto operator<=>(const DoubleExcitation&) const = default;
};

struct ExcitationList {
  std::vector<SingleExcitation> singles;
  std::vector<DoubleExcitation> doubles;
};

// All spin-conserving momentum-conserving singles and doubles, deduplicated
// under pair swap (A,I)<->(B,J) and, for same-spin quadruples, the
// antisymmetry exchange of the two target (source) indices.  Deterministic
// lexicographic ordering.
ExcitationList generate_uccsd_pbc(const std::vector<SpinOrbital>& occupied,
                                  const std::vector<SpinOrbital>& virtuals,
                                  const KPointMesh& mesh);

struct AmplitudeRow {
  bool is_double = true;
  SpinOrbital a, i, b, j;  // b, j unused for singles
  cdouble t{0.0, 0.0};
};

struct AmplitudeTable {
  std::vector<AmplitudeRow> rows;
};

// Keep every row with |t| >= max|t| / ratio, preserving input order.
AmplitudeTable screen_amplitudes(const AmplitudeTable& table, double ratio);

// Delimited text: kA,pA,sA,kI,pI,sI,kB,pB,sB,kJ,pJ,sJ,re,im (one row per
// double).  Lines beginning with '#' are comments; s is "u" or "d".
AmplitudeTable load_amplitude_table(const std::string& path);

// Mode numbering for the 2-cell chain: cell-major, then orbital, then spin,
// so mode = cell * modes_per_cell + orbital * 2 + spin and the translation
// is a contiguous block swap.
uint32_t chain_mode(uint32_t cell, uint32_t orbital, uint32_t spin,
                    uint32_t modes_per_cell);

// Anti-Hermitian cluster T - T^dagger for the 2-cell chain: both
// inter-cell doubles share amplitude theta/2.  Only cells == 2 and
// modes_per_cell == 4 are supported.
FermionOperator transqse_cluster(double theta, uint32_t cells,
                                 uint32_t modes_per_cell);

// Single-term variant: (theta/2) * (first inter-cell double) - h.c.,
// the generator of the localized correlated state.
FermionOperator transqse_local_cluster(double theta, uint32_t cells,
                                       uint32_t modes_per_cell);

// Pauli-sum expansion of the fermionic mode-permutation unitary swapping
// cell 0 with cell 1 under JW ordering.  Hermitian and squares to identity.
PauliSum translation_operator(uint32_t cells, uint32_t modes_per_cell);

/// Ingested one- and two-body coefficients with k-point labels.
struct FermionHamiltonianData {
  uint32_t n_modes = 0;
  KPointMesh mesh;
  std::vector<SpinOrbital> orbital_table;  // defines mode indices
  std::map<std::pair<uint32_t, uint32_t>, cdouble> one_body;
  std::map<std::array<uint32_t, 4>, cdouble> two_body;
  std::string unit = "hartree";
  double constant = 0.0;

  std::optional<uint32_t> mode_of(const SpinOrbital& so) const;
  // Momentum-conservation and Hermiticity checks; throws InputError with
  // the offending entry named.
  void validate(double hermiticity_tol = 1e-8) const;
  // H = sum h^P_Q c+_P c_Q + 1/2 sum h^{PR}_{QS} c+_P c_Q c+_R c_S + const.
  FermionOperator to_fermion_operator() const;
};

FermionHamiltonianData load_fermion_hamiltonian(const std::string& path);
FermionHamiltonianData fermion_hamiltonian_from_json_text(
    const std::string& text);

}  // namespace qpbc

#endif
