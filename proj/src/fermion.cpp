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

#include "qpbc/fermion.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpbc {

namespace {

// Annihilator a_p = Z_0..Z_{p-1} (X_p + iY_p)/2; creator is the adjoint.
PauliSum ladder_jw(uint32_t mode, bool create, uint32_t n_modes) {
  if (mode >= n_modes) {
    throw DimensionError("mode index " + std::to_string(mode) +
                         " out of range for " + std::to_string(n_modes) +
                         " modes");
  }
  uint64_t zstring = (uint64_t{1} << mode) - 1;
  uint64_t bit = uint64_t{1} << mode;
  PauliSum out(n_modes);
  out.add(PauliWord(n_modes, bit, zstring), 0.5);             // Z...X
  cdouble y_coeff = create ? cdouble{0, -0.5} : cdouble{0, 0.5};
  out.add(PauliWord(n_modes, bit, zstring | bit), y_coeff);   // Z...Y
  return out;
}

int mod_reduce(int v, int L) { return ((v % L) + L) % L; }

}  // namespace

std::string SpinOrbital::str() const {
  std::ostringstream os;
  os << "(" << k[0];
  if (k[1] != 0 || k[2] != 0) os << "," << k[1] << "," << k[2];
  os << "," << p << "," << (sigma == 0 ? "u" : "d") << ")";
  return os.str();
}

KPointMesh::KPointMesh(int l1, int l2, int l3) : L1(l1), L2(l2), L3(l3) {
  if (l1 <= 0 || l2 <= 0 || l3 <= 0) {
    throw InputError("k-point mesh dimensions must be positive");
  }
}

void FermionOperator::add_term(FermionTerm term) {
  if (std::abs(term.coeff) == 0.0) return;
  terms_.push_back(std::move(term));
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out;
  for (const auto& t : terms_) {
    FermionTerm adj;
    adj.coeff = std::conj(t.coeff);
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      adj.factors.emplace_back(it->first, !it->second);
    }
    out.add_term(std::move(adj));
  }
  return out;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

FermionOperator& FermionOperator::operator-=(const FermionOperator& other) {
  for (const auto& t : other.terms_) {
    FermionTerm neg = t;
    neg.coeff = -neg.coeff;
    terms_.push_back(std::move(neg));
  }
  return *this;
}

FermionOperator& FermionOperator::operator*=(cdouble s) {
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

PauliSum jordan_wigner(const FermionOperator& op, uint32_t n_modes) {
  PauliSum out(n_modes);
  for (const auto& term : op.terms()) {
    PauliSum product(n_modes);
    product.add(PauliWord::identity(n_modes), term.coeff);
    for (const auto& [mode, create] : term.factors) {
      product = product * ladder_jw(mode, create, n_modes);
    }
    out += product;
  }
  return out;
}

bool conserves_momentum(
    const std::vector<std::pair<SpinOrbital, bool>>& excitation,
    const KPointMesh& mesh) {
  std::array<int, 3> total{0, 0, 0};
  for (const auto& [so, create] : excitation) {
    for (int a = 0; a < 3; ++a) total[a] += create ? so.k[a] : -so.k[a];
  }
  auto dims = mesh.dims();
  for (int a = 0; a < 3; ++a) {
    if (mod_reduce(total[a], dims[a]) != 0) return false;
  }
  return true;
}

ExcitationList generate_uccsd_pbc(const std::vector<SpinOrbital>& occupied,
                                  const std::vector<SpinOrbital>& virtuals,
                                  const KPointMesh& mesh) {
  for (const auto& o : occupied) {
    if (std::find(virtuals.begin(), virtuals.end(), o) != virtuals.end()) {
      throw InputError("occupied and virtual sets overlap at " + o.str());
    }
  }

  // All spin-conserving (virtual, occupied) pairs, lexicographically sorted.
  std::vector<SingleExcitation> pairs;
  for (const auto& a : virtuals) {
    for (const auto& i : occupied) {
      if (a.sigma == i.sigma) pairs.push_back({a, i});
    }
  }
  std::sort(pairs.begin(), pairs.end());

  ExcitationList out;
  for (const auto& p : pairs) {
    if (conserves_momentum({{p.a, true}, {p.i, false}}, mesh)) {
      out.singles.push_back(p);
    }
  }

  for (size_t u = 0; u < pairs.size(); ++u) {
    for (size_t v = u + 1; v < pairs.size(); ++v) {
      const auto& pu = pairs[u];
      const auto& pv = pairs[v];
      if (pu.a == pv.a || pu.i == pv.i) continue;  // repeated ladder factor
      if (!conserves_momentum(
              {{pu.a, true}, {pu.i, false}, {pv.a, true}, {pv.i, false}},
              mesh)) {
        continue;
      }
      if (pu.a.sigma == pv.a.sigma) {
        // Same-spin quadruple: the exchanged pairing generates the same
        // operator up to antisymmetry; keep the lexicographically smaller.
        SingleExcitation q1{pu.a, pv.i}, q2{pv.a, pu.i};
        if (q2 < q1) std::swap(q1, q2);
        std::pair<SingleExcitation, SingleExcitation> alt{q1, q2};
        if (alt < std::pair{pu, pv}) continue;
      }
      out.doubles.push_back({pu.a, pu.i, pv.a, pv.i});
    }
  }
  return out;
}

AmplitudeTable screen_amplitudes(const AmplitudeTable& table, double ratio) {
  if (table.rows.empty()) throw InputError("empty amplitude table");
  if (ratio < 1.0) throw InputError("screening ratio must be >= 1");
  double max_t = 0.0;
  for (const auto& r : table.rows) max_t = std::max(max_t, std::abs(r.t));
  AmplitudeTable out;
  for (const auto& r : table.rows) {
    if (std::abs(r.t) >= max_t / ratio) out.rows.push_back(r);
  }
  return out;
}

AmplitudeTable load_amplitude_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open amplitude table: " + path);
  AmplitudeTable out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    AmplitudeRow row;
    std::string sa, si, sb, sj;
    double re, im;
    if (!(ls >> row.a.k[0] >> row.a.p >> sa >> row.i.k[0] >> row.i.p >> si >>
          row.b.k[0] >> row.b.p >> sb >> row.j.k[0] >> row.j.p >> sj >> re >>
          im)) {
      throw InputError("malformed amplitude row at line " +
                       std::to_string(lineno) + " of " + path);
    }
    auto spin = [&](const std::string& s) {
      if (s == "u") return 0;
      if (s == "d") return 1;
      throw InputError("bad spin label '" + s + "' at line " +
                       std::to_string(lineno) + " of " + path);
    };
    row.a.sigma = spin(sa);
    row.i.sigma = spin(si);
    row.b.sigma = spin(sb);
    row.j.sigma = spin(sj);
    row.t = {re, im};
    out.rows.push_back(row);
  }
  return out;
}

uint32_t chain_mode(uint32_t cell, uint32_t orbital, uint32_t spin,
                    uint32_t modes_per_cell) {
  return cell * modes_per_cell + orbital * 2 + spin;
}

namespace {

void check_chain_geometry(uint32_t cells, uint32_t modes_per_cell) {
  if (cells != 2 || modes_per_cell != 4) {
    throw InputError("only the 2-cell, 4-mode-per-cell chain is supported");
  }
}

FermionTerm intercell_double(double amp, uint32_t target_cell,
                             uint32_t source_cell) {
  // a+_{t,1,up} a_{s,0,up} a+_{t,1,dn} a_{s,0,dn}
  FermionTerm t;
  t.coeff = amp;
  t.factors = {{chain_mode(target_cell, 1, 0, 4), true},
               {chain_mode(source_cell, 0, 0, 4), false},
               {chain_mode(target_cell, 1, 1, 4), true},
               {chain_mode(source_cell, 0, 1, 4), false}};
  return t;
}

}  // namespace

FermionOperator transqse_local_cluster(double theta, uint32_t cells,
                                       uint32_t modes_per_cell) {
  check_chain_geometry(cells, modes_per_cell);
  FermionOperator t;
  if (theta != 0.0) t.add_term(intercell_double(theta / 2.0, 1, 0));
  FermionOperator result = t;
  result -= t.adjoint();
  return result;
}

FermionOperator transqse_cluster(double theta, uint32_t cells,
                                 uint32_t modes_per_cell) {
  check_chain_geometry(cells, modes_per_cell);
  FermionOperator t;
  if (theta != 0.0) {
    t.add_term(intercell_double(theta / 2.0, 1, 0));
    t.add_term(intercell_double(theta / 2.0, 0, 1));
  }
  FermionOperator result = t;
  result -= t.adjoint();
  return result;
}

PauliSum translation_operator(uint32_t cells, uint32_t modes_per_cell) {
  if (cells != 2) {
    throw InputError("translation operator only supported for 2 cells");
  }
  uint32_t n = cells * modes_per_cell;
  if (n > 12) throw InputError("translation operator capped at 12 modes");

  PauliSum lambda(n);
  lambda.add(PauliWord::identity(n), 1.0);
  for (uint32_t m = 0; m < modes_per_cell; ++m) {
    uint32_t p = m, q = m + modes_per_cell;
    // Fermionic exchange of modes p and q:
    // 1 + a+_p a_q + a+_q a_p - n_p - n_q.
    FermionOperator ex;
    FermionTerm id;
    id.coeff = 1.0;
    ex.add_term(id);
    ex.add_term({{{p, true}, {q, false}}, 1.0});
    ex.add_term({{{q, true}, {p, false}}, 1.0});
    ex.add_term({{{p, true}, {p, false}}, -1.0});
    ex.add_term({{{q, true}, {q, false}}, -1.0});
    lambda = lambda * jordan_wigner(ex, n);
  }
  return lambda;
}

std::optional<uint32_t> FermionHamiltonianData::mode_of(
    const SpinOrbital& so) const {
  for (uint32_t m = 0; m < orbital_table.size(); ++m) {
    if (orbital_table[m] == so) return m;
  }
  return std::nullopt;
}

void FermionHamiltonianData::validate(double hermiticity_tol) const {
  if (orbital_table.size() != n_modes) {
    throw InputError("orbital_table has " +
                     std::to_string(orbital_table.size()) + " rows, expected " +
                     std::to_string(n_modes));
  }
  auto dims = mesh.dims();
  for (const auto& so : orbital_table) {
    for (int a = 0; a < 3; ++a) {
      if (!(-dims[a] / 2 < so.k[a] && so.k[a] <= dims[a] / 2) &&
          !(dims[a] == 1 && so.k[a] == 0)) {
        throw InputError("orbital " + so.str() + " outside the mesh range");
      }
    }
  }
  auto check_mode = [&](uint32_t m, const std::string& where) {
    if (m >= n_modes) {
      throw InputError("mode index " + std::to_string(m) + " out of range in " +
                       where);
    }
  };
  for (const auto& [key, h] : one_body) {
    auto [P, Q] = key;
    check_mode(P, "one_body");
    check_mode(Q, "one_body");
    std::string name = "one_body[" + std::to_string(P) + "," +
                       std::to_string(Q) + "]";
    if (!conserves_momentum(
            {{orbital_table[P], true}, {orbital_table[Q], false}}, mesh)) {
      throw InputError(name + " violates crystal momentum conservation");
    }
    auto pair_it = one_body.find({Q, P});
    cdouble partner =
        pair_it == one_body.end() ? cdouble{0, 0} : pair_it->second;
    if (std::abs(partner - std::conj(h)) > hermiticity_tol) {
      throw InputError(name + " breaks Hermiticity: conjugate entry [" +
                       std::to_string(Q) + "," + std::to_string(P) +
                       "] does not match");
    }
  }
  for (const auto& [key, h] : two_body) {
    auto [P, Q, R, S] = key;
    for (uint32_t m : {P, Q, R, S}) check_mode(m, "two_body");
    std::string name = "two_body[" + std::to_string(P) + "," +
                       std::to_string(Q) + "," + std::to_string(R) + "," +
                       std::to_string(S) + "]";
    if (!conserves_momentum({{orbital_table[P], true},
                             {orbital_table[Q], false},
                             {orbital_table[R], true},
                             {orbital_table[S], false}},
                            mesh)) {
      throw InputError(name + " violates crystal momentum conservation");
    }
    // (c+_P c_Q c+_R c_S)^dagger = c+_S c_R c+_Q c_P.
    auto pair_it = two_body.find(std::array<uint32_t, 4>{S, R, Q, P});
    cdouble partner =
        pair_it == two_body.end() ? cdouble{0, 0} : pair_it->second;
    if (std::abs(partner - std::conj(h)) > hermiticity_tol) {
      throw InputError(name + " breaks Hermiticity: conjugate entry [" +
                       std::to_string(S) + "," + std::to_string(R) + "," +
                       std::to_string(Q) + "," + std::to_string(P) +
                       "] does not match");
    }
  }
}

FermionOperator FermionHamiltonianData::to_fermion_operator() const {
  FermionOperator h;
  if (constant != 0.0) {
    FermionTerm c;
    c.coeff = constant;
    h.add_term(c);
  }
  for (const auto& [key, coeff] : one_body) {
    h.add_term({{{key.first, true}, {key.second, false}}, coeff});
  }
  for (const auto& [key, coeff] : two_body) {
    h.add_term({{{key[0], true}, {key[1], false}, {key[2], true},
                 {key[3], false}},
                0.5 * coeff});
  }
  return h;
}

FermionHamiltonianData fermion_hamiltonian_from_json_text(
    const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    FermionHamiltonianData data;
    data.n_modes = j.at("n_modes").get<uint32_t>();
    auto mesh = j.at("mesh");
    data.mesh = KPointMesh(mesh.at(0).get<int>(), mesh.at(1).get<int>(),
                           mesh.at(2).get<int>());
    if (j.contains("unit")) data.unit = j.at("unit").get<std::string>();
    if (j.contains("constant")) {
      data.constant = j.at("constant").get<double>();
    }
    for (const auto& row : j.at("orbital_table")) {
      SpinOrbital so;
      auto k = row.at("k");
      so.k = {k.at(0).get<int>(), k.at(1).get<int>(), k.at(2).get<int>()};
      so.p = row.at("p").get<int>();
      std::string s = row.at("sigma").get<std::string>();
      if (s != "u" && s != "d") throw InputError("sigma must be 'u' or 'd'");
      so.sigma = s == "u" ? 0 : 1;
      data.orbital_table.push_back(so);
    }
    for (const auto& e : j.value("one_body", nlohmann::json::array())) {
      data.one_body[{e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>()}] =
          cdouble(e.at(2).get<double>(), e.at(3).get<double>());
    }
    for (const auto& e : j.value("two_body", nlohmann::json::array())) {
      data.two_body[{e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>(),
                     e.at(2).get<uint32_t>(), e.at(3).get<uint32_t>()}] =
          cdouble(e.at(4).get<double>(), e.at(5).get<double>());
    }
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("fermion Hamiltonian document error: ") +
                     e.what());
  }
}

FermionHamiltonianData load_fermion_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fermion Hamiltonian: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fermion_hamiltonian_from_json_text(ss.str());
}

}  // namespace qpbc
