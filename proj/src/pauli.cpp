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

#include "qpbc/pauli.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpbc {

namespace {

constexpr cdouble kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_same_size(const PauliWord& a, const PauliWord& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionError("Pauli words act on different qubit counts: " +
                         std::to_string(a.n_qubits) + " vs " +
                         std::to_string(b.n_qubits));
  }
}

uint64_t qubit_mask(uint32_t n) {
  return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
}

}  // namespace

PauliWord::PauliWord(uint32_t n, uint64_t x_bits, uint64_t z_bits)
    : n_qubits(n), x(x_bits), z(z_bits) {
  if (n > 64) throw DimensionError("at most 64 qubits supported");
  if ((x_bits | z_bits) & ~qubit_mask(n)) {
    throw DimensionError("bit-vector extends past n_qubits");
  }
}

PauliWord PauliWord::identity(uint32_t n) { return PauliWord(n, 0, 0); }

PauliWord PauliWord::single(uint32_t n, char letter, uint32_t qubit) {
  if (qubit >= n) throw DimensionError("qubit index out of range");
  uint64_t bit = uint64_t{1} << qubit;
  switch (letter) {
    case 'I': return PauliWord(n, 0, 0);
    case 'X': return PauliWord(n, bit, 0);
    case 'Y': return PauliWord(n, bit, bit);
    case 'Z': return PauliWord(n, 0, bit);
    default: throw InputError(std::string("invalid Pauli letter: ") + letter);
  }
}

PauliWord PauliWord::from_string(std::string_view s) {
  if (s.size() > 64) throw DimensionError("at most 64 qubits supported");
  PauliWord w(static_cast<uint32_t>(s.size()), 0, 0);
  for (size_t q = 0; q < s.size(); ++q) {
    uint64_t bit = uint64_t{1} << q;
    switch (s[q]) {
      case 'I': break;
      case 'X': w.x |= bit; break;
      case 'Y': w.x |= bit; w.z |= bit; break;
      case 'Z': w.z |= bit; break;
      default:
        throw InputError(std::string("invalid Pauli letter: ") + s[q]);
    }
  }
  return w;
}

char PauliWord::letter(uint32_t qubit) const {
  if (qubit >= n_qubits) throw DimensionError("qubit index out of range");
  bool xb = (x >> qubit) & 1, zb = (z >> qubit) & 1;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

uint32_t PauliWord::weight() const {
  return static_cast<uint32_t>(std::popcount(x | z));
}

std::string PauliWord::str() const {
  std::string s(n_qubits, 'I');
  for (uint32_t q = 0; q < n_qubits; ++q) s[q] = letter(q);
  return s;
}

PhasedWord multiply(const PauliWord& a, const PauliWord& b) {
  check_same_size(a, b);
  // Per-qubit phase accumulation: sigma_a sigma_b = i^t sigma_{a xor b} with
  // t = +1 on the cyclic pairs (X,Y), (Y,Z), (Z,X) and -1 on their reverses.
  int t = 0;
  uint64_t support = a.x | a.z | b.x | b.z;
  while (support) {
    uint32_t q = static_cast<uint32_t>(std::countr_zero(support));
    support &= support - 1;
    int ax = (a.x >> q) & 1, az = (a.z >> q) & 1;
    int bx = (b.x >> q) & 1, bz = (b.z >> q) & 1;
    if ((ax | az) == 0 || (bx | bz) == 0) continue;
    if (ax == bx && az == bz) continue;  // P*P = I
    // Letters as 0..2 over {X, Y, Z} for the Levi-Civita sign.
    int la = ax && az ? 1 : (ax ? 0 : 2);
    int lb = bx && bz ? 1 : (bx ? 0 : 2);
    t += ((lb - la) % 3 + 3) % 3 == 1 ? 1 : -1;
  }
  PauliWord c(a.n_qubits, a.x ^ b.x, a.z ^ b.z);
  return {c, kPhases[((t % 4) + 4) % 4]};
}

PhasedWord multiply(const PhasedWord& a, const PhasedWord& b) {
  PhasedWord r = multiply(a.word, b.word);
  r.phase *= a.phase * b.phase;
  return r;
}

bool commutes(const PauliWord& a, const PauliWord& b) {
  check_same_size(a, b);
  int parity = std::popcount(a.x & b.z) + std::popcount(a.z & b.x);
  return parity % 2 == 0;
}

bool commutes_qubitwise(const PauliWord& a, const PauliWord& b) {
  check_same_size(a, b);
  for (uint32_t q = 0; q < a.n_qubits; ++q) {
    char la = a.letter(q), lb = b.letter(q);
    if (la != 'I' && lb != 'I' && la != lb) return false;
  }
  return true;
}

void PauliSum::add(const PauliWord& w, cdouble coeff) {
  if (w.n_qubits != n_qubits_) {
    throw DimensionError("term qubit count does not match sum");
  }
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (std::abs(coeff) > kPruneTol) terms_.emplace(w, coeff);
    return;
  }
  it->second += coeff;
  if (std::abs(it->second) <= kPruneTol) terms_.erase(it);
}

cdouble PauliSum::coefficient(const PauliWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? cdouble{0, 0} : it->second;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionError("cannot add sums on different qubit counts");
  }
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionError("cannot subtract sums on different qubit counts");
  }
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(cdouble scalar) {
  std::map<PauliWord, cdouble> scaled;
  for (const auto& [w, c] : terms_) {
    cdouble v = c * scalar;
    if (std::abs(v) > kPruneTol) scaled.emplace(w, v);
  }
  terms_ = std::move(scaled);
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionError("cannot multiply sums on different qubit counts");
  }
  PauliSum out(n_qubits_);
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : other.terms_) {
      PhasedWord p = multiply(wa, wb);
      out.add(p.word, ca * cb * p.phase);
    }
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [w, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

std::string PauliSum::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)*"
       << w.str();
  }
  if (first) os << "0";
  return os.str();
}

PauliSum sum_commutator(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("commutator of sums on different qubit counts");
  }
  return a * b - b * a;
}

PauliSum restrict_support(const PauliSum& op,
                          const std::map<uint32_t, int>& fixed_bits) {
  uint64_t fixed_mask = 0, value_mask = 0;
  for (const auto& [q, bit] : fixed_bits) {
    if (q >= op.n_qubits()) throw DimensionError("fixed qubit out of range");
    fixed_mask |= uint64_t{1} << q;
    if (bit) value_mask |= uint64_t{1} << q;
  }
  // New index of each retained qubit, in ascending original order.
  std::vector<int> relabel(op.n_qubits(), -1);
  uint32_t next = 0;
  for (uint32_t q = 0; q < op.n_qubits(); ++q) {
    if (!((fixed_mask >> q) & 1)) relabel[q] = static_cast<int>(next++);
  }
  PauliSum out(next);
  for (const auto& [w, c] : op.terms()) {
    if (w.x & fixed_mask) {
      throw ContractionError("non-diagonal letter on fixed qubit in term " +
                             w.str());
    }
    double sign = std::popcount(w.z & fixed_mask & value_mask) % 2 ? -1.0 : 1.0;
    PauliWord nw(next, 0, 0);
    for (uint32_t q = 0; q < op.n_qubits(); ++q) {
      if (relabel[q] < 0) continue;
      uint64_t bit = uint64_t{1} << relabel[q];
      if ((w.x >> q) & 1) nw.x |= bit;
      if ((w.z >> q) & 1) nw.z |= bit;
    }
    out.add(nw, sign * c);
  }
  return out;
}

PauliSum contract_on_reference(const PauliSum& op,
                               const std::map<uint32_t, int>& fixed_bits) {
  uint64_t fixed_mask = 0;
  for (const auto& [q, bit] : fixed_bits) {
    if (q >= op.n_qubits()) throw DimensionError("fixed qubit out of range");
    fixed_mask |= uint64_t{1} << q;
  }
  PauliSum diagonal(op.n_qubits());
  for (const auto& [w, c] : op.terms()) {
    if (w.x & fixed_mask) continue;
    diagonal.add(w, c);
  }
  return restrict_support(diagonal, fixed_bits);
}

Eigen::MatrixXcd dense_matrix(const PauliWord& w) {
  if (w.n_qubits > 12) {
    throw ResourceError("dense oracle capped at 12 qubits");
  }
  const auto dim = size_t{1} << w.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  cdouble y_phase = kPhases[std::popcount(w.x & w.z) % 4];
  for (size_t col = 0; col < dim; ++col) {
    size_t row = col ^ w.x;
    double sign = std::popcount(col & w.z) % 2 ? -1.0 : 1.0;
    m(row, col) = y_phase * sign;
  }
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliSum& op) {
  if (op.n_qubits() > 12) {
    throw ResourceError("dense oracle capped at 12 qubits");
  }
  const auto dim = size_t{1} << op.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, c] : op.terms()) m += c * dense_matrix(w);
  return m;
}

PauliSum pauli_sum_from_json_text(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    uint32_t n = j.at("n_qubits").get<uint32_t>();
    PauliSum out(n);
    for (const auto& term : j.at("terms")) {
      PauliWord w =
          PauliWord::from_string(term.at("pauli").get<std::string>());
      if (w.n_qubits != n) {
        throw InputError("pauli string length does not match n_qubits: " +
                         w.str());
      }
      auto coeff = term.at("coeff");
      out.add(w,
              cdouble(coeff.at(0).get<double>(), coeff.at(1).get<double>()));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("pauli-sum document error: ") + e.what());
  }
}

std::string pauli_sum_to_json_text(const PauliSum& op) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : op.terms()) {
    terms.push_back({{"pauli", w.str()}, {"coeff", {c.real(), c.imag()}}});
  }
  nlohmann::json j = {{"n_qubits", op.n_qubits()}, {"terms", terms}};
  return j.dump(2);
}

PauliSum load_pauli_sum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pauli-sum file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return pauli_sum_from_json_text(ss.str());
}

void save_pauli_sum(const PauliSum& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write pauli-sum file: " + path);
  out << pauli_sum_to_json_text(op) << "\n";
}

}  // namespace qpbc
