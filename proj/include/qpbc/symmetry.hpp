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

#ifndef QPBC_SYMMETRY_HPP
#define QPBC_SYMMETRY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpbc/pauli.hpp"

namespace qpbc {

/// A Pauli symmetry with the eigenvalue expected in the target sector.
struct SymmetryOperator {
  PauliWord word;
  int sign = 1;  // word eigenvalue in the sector, +1 or -1
};

/// Record of a tapering: which qubits were removed, the Clifford basis
/// changes that expose them, the sector eigenvalues substituted, and the
/// relabeling of the retained qubits.
///
/// Each conjugation is by (X_q + s)/sqrt(2) with s the (conjugated)
/// symmetry word; applied in order they map every symmetry onto a single
/// X on its removed qubit.
class TaperingMap {
 public:
  struct Conjugation {
    PauliWord x_word;   // X on the removed qubit
    PauliWord sym_word; // conjugated symmetry word
    double sym_phase;   // +-1 phase picked up while conjugating
  };

  uint32_t n_full = 0;
  std::vector<uint32_t> removed_qubits;   // one per symmetry, in order
  std::vector<Conjugation> conjugations;
  std::vector<int> sector_signs;          // substituted X eigenvalues
  std::vector<uint32_t> retained_qubits;  // ascending original indices

  uint32_t n_reduced() const {
    return n_full - static_cast<uint32_t>(removed_qubits.size());
  }

  // Taper an operator that commutes with all symmetries.
  PauliSum apply(const PauliSum& op) const;

  // Taper a single Hermitian word (e.g. an ansatz generator): returns the
  // +-1 sign and the reduced word.  Throws SymmetryError if the conjugated
  // word has a Y or Z residue on a removed qubit.
  std::pair<double, PauliWord> apply_word(const PauliWord& w) const;
};

// True iff every term of h commutes with the symmetry word.
bool verify_symmetry(const PauliSum& h, const SymmetryOperator& s);

// Taper h against the given symmetries.  The sector defaults to the
// declared symmetry signs; pass sector_override to select another joint
// eigenspace.  Preconditions: symmetries verify against h, mutually
// commute, and are independent.
std::pair<PauliSum, TaperingMap> taper(
    const PauliSum& h, const std::vector<SymmetryOperator>& symmetries,
    const std::optional<std::vector<int>>& sector_override = std::nullopt);

// Reference bitstring on the retained qubits; checks the occupation lies in
// the selected sector.  Valid for diagonal (Z-type) symmetry words.
std::vector<int> taper_state_prep(const std::vector<int>& reference_occupation,
                                  const TaperingMap& map);

// Eigenvalue of each symmetry word on a computational-basis occupation;
// requires diagonal words.
std::vector<int> sector_from_reference(
    const std::vector<SymmetryOperator>& symmetries,
    const std::vector<int>& occupation);

// Z2 symmetry discovery: kernel of the symplectic matrix of h's terms,
// reported as diagonal-or-general Pauli words with sign +1.  Convenience
// only; known symmetry sets are normally supplied explicitly.
std::vector<SymmetryOperator> find_z2_symmetries(const PauliSum& h);

// Symmetry-set file: [{"pauli": "...", "sign": +-1}, ...].
std::vector<SymmetryOperator> load_symmetries(const std::string& path);
void save_symmetries(const std::vector<SymmetryOperator>& syms,
                     const std::string& path);

}  // namespace qpbc

#endif
