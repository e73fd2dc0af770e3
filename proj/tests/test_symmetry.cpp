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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qpbc/fermion.hpp"
#include "qpbc/symmetry.hpp"
#include "oracles.hpp"

using namespace qpbc;

namespace {

// Keep only the terms of h that commute with every symmetry word; used to
// manufacture random symmetric Hamiltonians.
PauliSum symmetrize(const PauliSum& h,
                    const std::vector<SymmetryOperator>& syms) {
  PauliSum out(h.n_qubits());
  for (const auto& [w, c] : h.terms()) {
    bool ok = true;
    for (const auto& s : syms) ok = ok && commutes(w, s.word);
    if (ok) out.add(w, c);
  }
  return out;
}

// Sorted spectrum of h restricted to the joint eigenspace selected by the
// sector signs, computed from the dense projector.
std::vector<double> sector_spectrum(const PauliSum& h,
                                    const std::vector<SymmetryOperator>& syms,
                                    const std::vector<int>& sector) {
  Eigen::MatrixXcd hm = oracle::sum_matrix(h);
  Eigen::Index dim = hm.rows();
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(dim, dim);
  for (size_t i = 0; i < syms.size(); ++i) {
    Eigen::MatrixXcd sm = oracle::word_matrix(syms[i].word.str());
    proj = proj * 0.5 *
           (Eigen::MatrixXcd::Identity(dim, dim) + double(sector[i]) * sm);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> psolve(proj);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (psolve.eigenvalues()(i) > 0.5) cols.push_back(i);
  }
  Eigen::MatrixXcd basis(dim, Eigen::Index(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) {
    basis.col(Eigen::Index(i)) = psolve.eigenvectors().col(cols[i]);
  }
  Eigen::MatrixXcd restricted = basis.adjoint() * hm * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(restricted);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> full_spectrum(const PauliSum& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::sum_matrix(h));
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SymmetryOperator> chain_symmetry_set() {
  return {{PauliWord::from_string("ZIZI"), -1},
          {PauliWord::from_string("IZIZ"), -1}};
}

}  // namespace

TEST_CASE("verify_symmetry accepts commuting and rejects anticommuting") {
  PauliSum h(2);
  h.add(PauliWord::from_string("ZZ"), 0.5);
  h.add(PauliWord::from_string("XX"), 0.25);
  CHECK(verify_symmetry(h, {PauliWord::from_string("ZZ"), 1}));
  CHECK(verify_symmetry(h, {PauliWord::from_string("YY"), 1}));
  CHECK_FALSE(verify_symmetry(h, {PauliWord::from_string("ZI"), 1}));

  PauliSum h4(4);
  h4.add(PauliWord::from_string("XZXI"), 1.0);
  CHECK(verify_symmetry(h4, {PauliWord::from_string("ZZZZ"), 1}));
  CHECK_FALSE(verify_symmetry(h4, {PauliWord::from_string("ZZII"), 1}));

  PauliSum mism(3);
  mism.add(PauliWord::identity(3), 1.0);
  CHECK_THROWS_AS(verify_symmetry(mism, {PauliWord::from_string("ZZ"), 1}),
                  DimensionError);
}

TEST_CASE("tapering ZZ against itself leaves the sector constant") {
  PauliSum h(2);
  h.add(PauliWord::from_string("ZZ"), 1.0);
  auto [reduced, map] = taper(h, {{PauliWord::from_string("ZZ"), 1}});
  CHECK(map.n_reduced() == 1);
  CHECK(map.removed_qubits == std::vector<uint32_t>{0});
  CHECK(reduced.size() == 1);
  CHECK(reduced.coefficient(PauliWord::identity(1)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));

  auto [reduced2, map2] =
      taper(h, {{PauliWord::from_string("ZZ"), 1}}, std::vector<int>{-1});
  CHECK(reduced2.coefficient(PauliWord::identity(1)).real() ==
        doctest::Approx(-1.0).epsilon(1e-12));
  (void)map2;
}

TEST_CASE("tapered spectra match dense sector spectra on random inputs") {
  std::mt19937_64 rng(401);
  auto syms = chain_symmetry_set();
  std::uniform_int_distribution<int> coin(0, 1);
  int nontrivial = 0;
  for (int trial = 0; trial < 30; ++trial) {
    PauliSum h = symmetrize(oracle::random_hermitian_sum(rng, 4, 24), syms);
    if (h.empty()) continue;
    std::vector<int> sector{coin(rng) ? 1 : -1, coin(rng) ? 1 : -1};
    auto [reduced, map] = taper(h, syms, sector);
    REQUIRE(map.n_reduced() == 2);
    auto got = full_spectrum(reduced);
    auto want = sector_spectrum(h, syms, sector);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got[i] - want[i]) < 1e-10);
    }
    ++nontrivial;
  }
  CHECK(nontrivial >= 25);
}

TEST_CASE("reference state |1100> tapers to |00>") {
  auto syms = chain_symmetry_set();
  PauliSum h(4);
  h.add(PauliWord::from_string("ZIII"), -0.3);
  h.add(PauliWord::from_string("IZII"), -0.2);
  h.add(PauliWord::from_string("ZIZI"), 0.1);
  h.add(PauliWord::from_string("IZIZ"), 0.1);
  h.add(PauliWord::from_string("XXXX"), 0.05);

  std::vector<int> occ{1, 1, 0, 0};
  CHECK(sector_from_reference(syms, occ) == std::vector<int>{-1, -1});

  auto [reduced, map] = taper(h, syms);
  CHECK(map.removed_qubits == std::vector<uint32_t>{0, 1});
  CHECK(map.retained_qubits == std::vector<uint32_t>{2, 3});
  CHECK(taper_state_prep(occ, map) == std::vector<int>{0, 0});

  // Occupation outside the sector is rejected.
  CHECK_THROWS_AS(taper_state_prep({1, 0, 0, 0}, map), SymmetryError);
}

TEST_CASE("basis-state energies survive tapering") {
  std::mt19937_64 rng(402);
  auto syms = chain_symmetry_set();
  for (int trial = 0; trial < 20; ++trial) {
    PauliSum h = symmetrize(oracle::random_hermitian_sum(rng, 4, 20), syms);
    if (h.empty()) continue;
    // Random sector-consistent occupation.
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<int> occ(4);
    for (auto& b : occ) b = bit(rng);
    auto sector = sector_from_reference(syms, occ);
    auto [reduced, map] = taper(h, syms, sector);
    auto occ_red = taper_state_prep(occ, map);

    auto basis_energy = [](const PauliSum& op, const std::vector<int>& bits) {
      Eigen::MatrixXcd m = oracle::sum_matrix(op);
      Eigen::Index idx = 0;
      for (size_t q = 0; q < bits.size(); ++q) {
        if (bits[q]) idx |= Eigen::Index{1} << q;
      }
      return m(idx, idx).real();
    };
    CHECK(basis_energy(h, occ) ==
          doctest::Approx(basis_energy(reduced, occ_red)).epsilon(1e-12));
  }
}

TEST_CASE("third symmetry tapers to a two-qubit parity word") {
  auto syms = chain_symmetry_set();
  PauliSum h(4);
  h.add(PauliWord::from_string("ZIZI"), 0.1);
  h.add(PauliWord::from_string("IZIZ"), 0.2);
  h.add(PauliWord::from_string("IZZI"), 0.3);
  auto [reduced, map] = taper(h, syms);
  (void)reduced;

  auto [sign, word] = map.apply_word(PauliWord::from_string("IZZI"));
  CHECK(word == PauliWord::from_string("ZZ"));
  CHECK(std::abs(std::abs(sign) - 1.0) < 1e-12);
  // Consistency against the |1100> -> |00> reference: IZZI has eigenvalue
  // -1 there while ZZ on |00> gives +1.
  CHECK(sign == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("tapering preserves commutation") {
  std::mt19937_64 rng(403);
  auto syms = chain_symmetry_set();
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum a = symmetrize(oracle::random_hermitian_sum(rng, 4, 12), syms);
    PauliSum b = a * a;  // guaranteed to commute with a
    if (a.empty() || b.empty()) continue;
    auto [ra, map] = taper(a, syms);
    PauliSum rb = map.apply(b);
    CHECK(sum_commutator(ra, rb).empty());
  }
}

TEST_CASE("tapered double-excitation generator reproduces full energies") {
  // 4 modes: occupied 0,1 and virtual 2,3; generator of the paired double.
  FermionOperator t;
  t.add_term({{{2, true}, {0, false}, {3, true}, {1, false}}, 0.37});
  FermionOperator k = t;
  k -= t.adjoint();
  PauliSum kq = jordan_wigner(k, 4);

  auto syms = chain_symmetry_set();
  PauliSum h(4);
  h.add(PauliWord::from_string("ZIII"), -0.4);
  h.add(PauliWord::from_string("IZII"), -0.35);
  h.add(PauliWord::from_string("IIZI"), 0.15);
  h.add(PauliWord::from_string("IIIZ"), 0.18);
  h.add(PauliWord::from_string("ZZII"), 0.07);
  for (const auto& s : syms) {
    PauliSum sw(4);
    sw.add(s.word, 1.0);
    CHECK(sum_commutator(kq, sw).empty());
  }

  std::vector<int> occ{1, 1, 0, 0};
  auto sector = sector_from_reference(syms, occ);
  auto [hred, map] = taper(h, syms, sector);
  PauliSum kred = map.apply(kq);
  // The reduced generator is a two-term XY rotation generator.
  CHECK(kred.n_qubits() == 2);
  CHECK(kred.size() == 2);

  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(16);
  full(0b0011) = 1.0;  // modes 0 and 1 occupied
  Eigen::VectorXcd psi =
      (oracle::sum_matrix(kq)).exp() * full;
  double e_full =
      (psi.adjoint() * oracle::sum_matrix(h) * psi)(0, 0).real();

  Eigen::VectorXcd red = Eigen::VectorXcd::Zero(4);
  red(0) = 1.0;  // |00> from taper_state_prep
  REQUIRE(taper_state_prep(occ, map) == std::vector<int>{0, 0});
  Eigen::VectorXcd psir = (oracle::sum_matrix(kred)).exp() * red;
  double e_red =
      (psir.adjoint() * oracle::sum_matrix(hred) * psir)(0, 0).real();

  CHECK(e_full == doctest::Approx(e_red).epsilon(1e-10));
}

TEST_CASE("taper input validation") {
  PauliSum h(2);
  h.add(PauliWord::from_string("ZZ"), 1.0);
  h.add(PauliWord::from_string("XX"), 0.5);

  CHECK_THROWS_AS(taper(h, {}), InputError);
  CHECK_THROWS_AS(taper(h, {{PauliWord::from_string("ZI"), 1}}),
                  SymmetryError);
  CHECK_THROWS_AS(taper(h, {{PauliWord::from_string("ZZ"), 1},
                            {PauliWord::from_string("ZZ"), 1}}),
                  InputError);
  CHECK_THROWS_AS(
      taper(h, {{PauliWord::from_string("ZZ"), 1}}, std::vector<int>{1, 1}),
      InputError);

  PauliSum hx(2);
  hx.add(PauliWord::from_string("XI"), 1.0);
  hx.add(PauliWord::from_string("IX"), 0.5);
  CHECK_THROWS_AS(taper(hx, {{PauliWord::from_string("XX"), 1}}), InputError);

  // Applying the map to a non-commuting operator fails.
  auto [r, map] = taper(h, {{PauliWord::from_string("ZZ"), 1}});
  (void)r;
  PauliSum bad(2);
  bad.add(PauliWord::from_string("XI"), 1.0);
  CHECK_THROWS_AS(map.apply(bad), SymmetryError);
  PauliSum wrong_dim(3);
  wrong_dim.add(PauliWord::identity(3), 1.0);
  CHECK_THROWS_AS(map.apply(wrong_dim), DimensionError);
}

TEST_CASE("discovered Z2 symmetries commute with every term") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum h = oracle::random_hermitian_sum(rng, 5, 6);
    auto syms = find_z2_symmetries(h);
    for (const auto& s : syms) {
      CHECK_FALSE(s.word.is_identity());
      CHECK(verify_symmetry(h, s));
    }
    // Basis vectors are pairwise independent: XOR of any two is nonzero.
    for (size_t i = 0; i < syms.size(); ++i) {
      for (size_t j = i + 1; j < syms.size(); ++j) {
        CHECK((syms[i].word.x != syms[j].word.x ||
               syms[i].word.z != syms[j].word.z));
      }
    }
  }

  PauliSum h2(2);
  h2.add(PauliWord::from_string("XX"), 1.0);
  h2.add(PauliWord::from_string("ZZ"), 0.5);
  auto syms2 = find_z2_symmetries(h2);
  CHECK(syms2.size() == 2);
}

TEST_CASE("symmetry files round-trip") {
  std::string path = "symmetry_roundtrip.json";
  std::vector<SymmetryOperator> syms{{PauliWord::from_string("ZIZI"), -1},
                                     {PauliWord::from_string("IZIZ"), -1},
                                     {PauliWord::from_string("IZZI"), 1}};
  save_symmetries(syms, path);
  auto loaded = load_symmetries(path);
  REQUIRE(loaded.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(loaded[i].word == syms[i].word);
    CHECK(loaded[i].sign == syms[i].sign);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_symmetries("missing_symmetries.json"), InputError);
}

TEST_CASE("fixture symmetry set loads and matches the model parities") {
  auto syms =
      load_symmetries(std::string(QPBC_FIXTURE_DIR) + "/chain_symmetries.json");
  REQUIRE(syms.size() == 3);
  CHECK(syms[0].word == PauliWord::from_string("ZIZI"));
  CHECK(syms[0].sign == -1);
  CHECK(syms[1].word == PauliWord::from_string("IZIZ"));
  CHECK(syms[1].sign == -1);
  CHECK(syms[2].word == PauliWord::from_string("IZZI"));
  CHECK(syms[2].sign == -1);
  CHECK(sector_from_reference(syms, {1, 1, 0, 0}) ==
        std::vector<int>{-1, -1, -1});
}
