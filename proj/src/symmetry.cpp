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

#include "qpbc/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpbc {

namespace {

// Conjugate a phased word by (A + B)/sqrt(2) where A = X on the removed
// qubit and B = sym_phase * sym_word; A and B anticommute, so the result is
// always a single phased word: 1/2 (A + B) P (A + B).
PhasedWord conjugate_one(const TaperingMap::Conjugation& c,
                         const PhasedWord& p) {
  PhasedWord a{c.x_word, 1.0};
  PhasedWord b{c.sym_word, c.sym_phase};
  PauliSum acc(p.word.n_qubits);
  for (const auto& left : {a, b}) {
    for (const auto& right : {a, b}) {
      PhasedWord r = multiply(multiply(left, p), right);
      acc.add(r.word, 0.5 * r.phase);
    }
  }
  if (acc.size() != 1) {
    throw SymmetryError("conjugation did not yield a single Pauli word");
  }
  const auto& [w, coeff] = *acc.terms().begin();
  return {w, coeff};
}

PhasedWord conjugate_all(const TaperingMap& map, const PhasedWord& p) {
  PhasedWord cur = p;
  for (const auto& c : map.conjugations) cur = conjugate_one(c, cur);
  return cur;
}

}  // namespace

bool verify_symmetry(const PauliSum& h, const SymmetryOperator& s) {
  if (h.n_qubits() != s.word.n_qubits) {
    throw DimensionError("symmetry and Hamiltonian qubit counts differ");
  }
  for (const auto& [w, c] : h.terms()) {
    if (!commutes(w, s.word)) return false;
  }
  return true;
}

PauliSum TaperingMap::apply(const PauliSum& op) const {
  if (op.n_qubits() != n_full) {
    throw DimensionError("operator qubit count does not match tapering map");
  }
  uint64_t removed_mask = 0;
  for (uint32_t q : removed_qubits) removed_mask |= uint64_t{1} << q;

  PauliSum out(n_reduced());
  for (const auto& [w, c] : op.terms()) {
    PhasedWord conj = conjugate_all(*this, {w, 1.0});
    if (std::abs(conj.phase.imag()) > 1e-12) {
      throw SymmetryError("non-real phase while tapering term " + w.str());
    }
    double sign = conj.phase.real();
    if (conj.word.z & removed_mask) {
      throw SymmetryError("term " + w.str() +
                          " does not commute with the symmetry set");
    }
    for (size_t i = 0; i < removed_qubits.size(); ++i) {
      if ((conj.word.x >> removed_qubits[i]) & 1) sign *= sector_signs[i];
    }
    PauliWord reduced(n_reduced(), 0, 0);
    for (size_t i = 0; i < retained_qubits.size(); ++i) {
      uint32_t q = retained_qubits[i];
      if ((conj.word.x >> q) & 1) reduced.x |= uint64_t{1} << i;
      if ((conj.word.z >> q) & 1) reduced.z |= uint64_t{1} << i;
    }
    out.add(reduced, sign * c);
  }
  return out;
}

std::pair<double, PauliWord> TaperingMap::apply_word(const PauliWord& w) const {
  PauliSum tmp(n_full);
  tmp.add(w, 1.0);
  PauliSum reduced = apply(tmp);
  if (reduced.size() != 1) {
    throw SymmetryError("word did not taper to a single term: " + w.str());
  }
  const auto& [rw, c] = *reduced.terms().begin();
  return {c.real(), rw};
}

std::pair<PauliSum, TaperingMap> taper(
    const PauliSum& h, const std::vector<SymmetryOperator>& symmetries,
    const std::optional<std::vector<int>>& sector_override) {
  if (symmetries.empty()) throw InputError("no symmetries supplied");
  for (size_t i = 0; i < symmetries.size(); ++i) {
    if (symmetries[i].word.is_identity()) {
      throw InputError("symmetry word must be non-identity");
    }
    if (!verify_symmetry(h, symmetries[i])) {
      throw SymmetryError("symmetry " + symmetries[i].word.str() +
                          " fails verification against the Hamiltonian");
    }
    for (size_t j = i + 1; j < symmetries.size(); ++j) {
      if (!commutes(symmetries[i].word, symmetries[j].word)) {
        throw InputError("symmetry words do not mutually commute");
      }
    }
  }
  // Independence over GF(2).
  {
    std::vector<std::pair<uint64_t, uint64_t>> rows;
    for (const auto& s : symmetries) rows.emplace_back(s.word.x, s.word.z);
    size_t rank = 0;
    for (int bit = 127; bit >= 0 && rank < rows.size(); --bit) {
      uint64_t xm = bit >= 64 ? uint64_t{1} << (bit - 64) : 0;
      uint64_t zm = bit < 64 ? uint64_t{1} << bit : 0;
      size_t pivot = rank;
      while (pivot < rows.size() &&
             !((rows[pivot].first & xm) || (rows[pivot].second & zm))) {
        ++pivot;
      }
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (r != rank &&
            ((rows[r].first & xm) || (rows[r].second & zm))) {
          rows[r].first ^= rows[rank].first;
          rows[r].second ^= rows[rank].second;
        }
      }
      ++rank;
    }
    if (rank < symmetries.size()) {
      throw InputError("symmetry set is linearly dependent");
    }
  }
  std::vector<int> sector;
  if (sector_override) {
    if (sector_override->size() != symmetries.size()) {
      throw InputError("sector override size mismatch");
    }
    sector = *sector_override;
  } else {
    for (const auto& s : symmetries) sector.push_back(s.sign);
  }

  TaperingMap map;
  map.n_full = h.n_qubits();
  std::vector<PhasedWord> work;
  for (const auto& s : symmetries) work.push_back({s.word, 1.0});

  for (size_t i = 0; i < work.size(); ++i) {
    // Conjugate through the maps already built.
    PhasedWord cur = work[i];
    for (const auto& c : map.conjugations) cur = conjugate_one(c, cur);
    if (std::abs(cur.phase.imag()) > 1e-12) {
      throw SymmetryError("non-real phase on conjugated symmetry");
    }
    // Lowest-index qubit with a plain Z letter, not already removed.
    std::optional<uint32_t> pivot;
    for (uint32_t q = 0; q < map.n_full; ++q) {
      bool already = std::find(map.removed_qubits.begin(),
                               map.removed_qubits.end(),
                               q) != map.removed_qubits.end();
      if (already) continue;
      if (!((cur.word.x >> q) & 1) && ((cur.word.z >> q) & 1)) {
        pivot = q;
        break;
      }
    }
    if (!pivot) {
      throw InputError("no removable qubit for symmetry " +
                       symmetries[i].word.str());
    }
    map.conjugations.push_back(
        {PauliWord::single(map.n_full, 'X', *pivot), cur.word,
         cur.phase.real()});
    map.removed_qubits.push_back(*pivot);
    map.sector_signs.push_back(sector[i]);
  }
  for (uint32_t q = 0; q < map.n_full; ++q) {
    if (std::find(map.removed_qubits.begin(), map.removed_qubits.end(), q) ==
        map.removed_qubits.end()) {
      map.retained_qubits.push_back(q);
    }
  }
  return {map.apply(h), map};
}

std::vector<int> sector_from_reference(
    const std::vector<SymmetryOperator>& symmetries,
    const std::vector<int>& occupation) {
  std::vector<int> sector;
  for (const auto& s : symmetries) {
    if (!s.word.is_diagonal()) {
      throw InputError("sector from reference requires diagonal symmetries");
    }
    if (occupation.size() != s.word.n_qubits) {
      throw DimensionError("occupation length mismatch");
    }
    int parity = 0;
    for (uint32_t q = 0; q < s.word.n_qubits; ++q) {
      if (((s.word.z >> q) & 1) && occupation[q]) parity ^= 1;
    }
    sector.push_back(parity ? -1 : 1);
  }
  return sector;
}

std::vector<int> taper_state_prep(const std::vector<int>& reference_occupation,
                                  const TaperingMap& map) {
  if (reference_occupation.size() != map.n_full) {
    throw DimensionError("occupation length does not match tapering map");
  }
  // Consistency: the conjugated symmetry words are diagonal here (Z-type
  // symmetry sets), so their eigenvalue on the reference must match the
  // selected sector.
  for (size_t i = 0; i < map.conjugations.size(); ++i) {
    const auto& c = map.conjugations[i];
    if (!c.sym_word.is_diagonal()) {
      throw SymmetryError(
          "state tapering requires diagonal symmetry words");
    }
    int parity = 0;
    for (uint32_t q = 0; q < map.n_full; ++q) {
      if (((c.sym_word.z >> q) & 1) && reference_occupation[q]) parity ^= 1;
    }
    double eig = (parity ? -1.0 : 1.0) * c.sym_phase;
    if (eig != map.sector_signs[i]) {
      throw SymmetryError("reference occupation lies outside the sector of " +
                          c.sym_word.str());
    }
  }
  std::vector<int> out;
  for (uint32_t q : map.retained_qubits) out.push_back(reference_occupation[q]);
  return out;
}

std::vector<SymmetryOperator> find_z2_symmetries(const PauliSum& h) {
  const uint32_t n = h.n_qubits();
  // A word (x_s, z_s) commutes with every term (x_t, z_t) iff
  // x_s.z_t + z_s.x_t = 0 mod 2 for all t: the kernel of the symplectic
  // matrix with rows (z_t | x_t).
  std::vector<std::pair<uint64_t, uint64_t>> rows;  // (acts on x_s, on z_s)
  for (const auto& [w, c] : h.terms()) rows.emplace_back(w.z, w.x);

  // Gaussian elimination tracking the kernel basis of the 2n-dim space.
  const uint32_t dim = 2 * n;
  std::vector<std::pair<uint64_t, uint64_t>> basis(dim);
  for (uint32_t i = 0; i < dim; ++i) {
    if (i < n) basis[i] = {uint64_t{1} << i, 0};
    else basis[i] = {0, uint64_t{1} << (i - n)};
  }
  std::vector<std::pair<uint64_t, uint64_t>> kernel = basis;
  for (const auto& [rx, rz] : rows) {
    std::vector<std::pair<uint64_t, uint64_t>> next;
    std::optional<std::pair<uint64_t, uint64_t>> lead;
    for (const auto& v : kernel) {
      int dot = (std::popcount(v.first & rx) + std::popcount(v.second & rz)) & 1;
      if (!dot) {
        next.push_back(v);
      } else if (!lead) {
        lead = v;
      } else {
        next.push_back({v.first ^ lead->first, v.second ^ lead->second});
      }
    }
    kernel = std::move(next);
  }
  std::vector<SymmetryOperator> out;
  for (const auto& [x, z] : kernel) {
    if (x == 0 && z == 0) continue;
    out.push_back({PauliWord(n, x, z), 1});
  }
  return out;
}

std::vector<SymmetryOperator> load_symmetries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open symmetry file: " + path);
  try {
    nlohmann::json j;
    in >> j;
    std::vector<SymmetryOperator> out;
    for (const auto& e : j) {
      SymmetryOperator s;
      s.word = PauliWord::from_string(e.at("pauli").get<std::string>());
      s.sign = e.at("sign").get<int>();
      if (s.sign != 1 && s.sign != -1) {
        throw InputError("symmetry sign must be +1 or -1");
      }
      out.push_back(s);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("symmetry document error: ") + e.what());
  }
}

void save_symmetries(const std::vector<SymmetryOperator>& syms,
                     const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : syms) {
    j.push_back({{"pauli", s.word.str()}, {"sign", s.sign}});
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write symmetry file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qpbc
