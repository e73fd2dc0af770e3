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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qpbc/variational.hpp"

using namespace qpbc;

namespace {

const std::string kFixtures = QPBC_FIXTURE_DIR;

AnsatzSpec yx_ansatz() {
  AnsatzSpec spec;
  spec.initial_occupation = {0, 0};
  spec.generators.push_back({PauliWord::from_string("YX"), 0, 1.0});
  return spec;
}

// Closed form for the YX ansatz on a real 2-qubit operator: the state
// cos(theta)|00> + sin(theta)|11> gives <ZI> = <IZ> = cos(2 theta),
// <ZZ> = 1, <XX> = sin(2 theta), <YY> = -sin(2 theta).
double yx_energy(const PauliSum& h, double theta) {
  auto c = [&](const char* s) {
    return h.coefficient(PauliWord::from_string(s)).real();
  };
  return c("II") + c("ZZ") + (c("ZI") + c("IZ")) * std::cos(2 * theta) +
         (c("XX") - c("YY")) * std::sin(2 * theta);
}

Backend statevector_backend() {
  Backend b;
  b.kind = Backend::Kind::statevector;
  return b;
}

Backend shot_backend(uint64_t shots, uint64_t seed) {
  Backend b;
  b.kind = Backend::Kind::shots;
  b.shots = shots;
  b.base_seed = seed;
  return b;
}

CostFn wrap(const VqeCost& cost) {
  return [&cost](const std::vector<double>& t) { return cost(t); };
}

// Basis-state index for an occupation pattern, qubit 0 = lowest bit.
uint64_t basis_index(const std::vector<int>& occ) {
  uint64_t idx = 0;
  for (size_t q = 0; q < occ.size(); ++q) {
    if (occ[q]) idx |= uint64_t{1} << q;
  }
  return idx;
}

}  // namespace

TEST_CASE("identity ansatz on the vacuum measures z exactly") {
  PauliSum h(1);
  h.add(PauliWord::from_string("Z"), 1.0);
  AnsatzSpec spec;
  spec.initial_occupation = {0};
  VqeCost cost(h, spec, {}, statevector_backend(), {});
  CostEval e = cost({});
  CHECK(e.value == 1.0);
  CHECK(e.stddev == 0.0);
}

TEST_CASE("yx ansatz energies match the closed form on both fixtures") {
  for (const char* name : {"iron_2q_hamiltonian.json",
                           "chain_2q_hamiltonian.json"}) {
    PauliSum h = load_pauli_sum(kFixtures + "/" + name);
    VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
    for (double theta : {-1.3, -0.53038, -0.09283, 0.0, 0.4, 1.1}) {
      CHECK(std::abs(cost({theta}).value - yx_energy(h, theta)) < 1e-12);
    }
  }
}

TEST_CASE("shot estimates stay within five standard errors of exact") {
  std::mt19937_64 rng(2026);
  int failures = 0;
  for (int trial = 0; trial < 30; ++trial) {
    PauliSum h = oracle::random_hermitian_sum(rng, 2, 4);
    VqeCost exact(h, yx_ansatz(), {}, statevector_backend(), {});
    VqeCost shots(h, yx_ansatz(), {}, shot_backend(24000, 100 + trial), {});
    double theta = 0.37;
    CostEval want = exact({theta});
    CostEval got = shots({theta});
    if (std::abs(got.value - want.value) > 5.0 * got.stddev + 1e-9) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("theta zero reproduces the reference-state energy") {
  PauliSum h = load_pauli_sum(kFixtures + "/iron_2q_hamiltonian.json");
  VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
  oracle::Vec psi0 = oracle::Vec::Zero(4);
  psi0(0) = 1.0;
  double e_hf = (psi0.adjoint() * oracle::sum_matrix(h) * psi0)(0).real();
  CHECK(std::abs(cost({0.0}).value - e_hf) < 1e-12);
}

TEST_CASE("noiseless shots on the symmetric ansatz discard nothing") {
  PauliSum h = load_pauli_sum(kFixtures + "/chain_2q_hamiltonian.json");
  std::vector<SymmetryOperator> syms{{PauliWord::from_string("ZZ"), 1}};
  MitigationFlags flags;
  flags.pmsv = true;
  VqeCost cost(h, yx_ansatz(), syms, shot_backend(8000, 7), flags);
  for (double theta : {-0.8, 0.0, 0.61}) {
    CostEval e = cost({theta});
    CHECK(e.discard_fraction == 0.0);
    CHECK(e.e_pmsv == e.e_raw);
  }
}

TEST_CASE("rotosolve solves a plain cosine in one step") {
  CostFn cost = [](const std::vector<double>& t) {
    CostEval e;
    e.value = std::cos(t[0]);
    return e;
  };
  OptimizationTrace trace = rotosolve(cost, {0.0}, 10, 1e-9);
  const TraceStep& best = trace.best();
  CHECK(std::abs(best.value + 1.0) < 1e-9);
  CHECK(std::abs(std::abs(best.theta[0]) - std::numbers::pi) < 1e-9);
  CHECK(std::abs(trace.steps[1].value + 1.0) < 1e-9);
}

TEST_CASE("rotosolve finds the analytic minimizer of a shifted sinusoid") {
  CostFn cost = [](const std::vector<double>& t) {
    CostEval e;
    e.value = 2.0 * std::sin(t[0] + 0.3) + 1.0;
    return e;
  };
  for (double theta0 : {-2.5, -0.4, 0.0, 1.9}) {
    OptimizationTrace trace = rotosolve(cost, {theta0}, 10, 1e-9);
    const TraceStep& best = trace.best();
    CHECK(std::abs(best.value + 1.0) < 1e-9);
    CHECK(std::abs(best.theta[0] - (-0.3 - std::numbers::pi / 2)) < 1e-9);
  }
}

TEST_CASE("rotosolve finishes a separable two-parameter sinusoid in one sweep") {
  CostFn cost = [](const std::vector<double>& t) {
    CostEval e;
    e.value = std::sin(t[0] + 0.2) + 0.5 * std::sin(t[1] - 1.1) + 2.0;
    return e;
  };
  OptimizationTrace trace = rotosolve(cost, {0.7, -0.9}, 10, 1e-9);
  CHECK(std::abs(trace.best().value - 0.5) < 1e-9);
  // Initial point plus one accepted update per coordinate per sweep; the
  // second sweep stops after failing to improve.
  CHECK(trace.steps.size() <= 5);
}

TEST_CASE("rotosolve at doubled frequency pins both fixture optima") {
  struct Case {
    const char* file;
    double theta_star;
  };
  for (const Case& c : {Case{"iron_2q_hamiltonian.json", -0.53038},
                        Case{"chain_2q_hamiltonian.json", -0.09283}}) {
    PauliSum h = load_pauli_sum(kFixtures + "/" + c.file);
    VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
    OptimizationTrace trace = rotosolve(wrap(cost), {1e-5}, 10, 1e-9, 2);
    const TraceStep& best = trace.best();
    CHECK(std::abs(best.theta[0] - c.theta_star) < 1e-6);
    // The cost is an exact sinusoid in 2 theta, so the first update lands
    // on the optimum: three accepted points at most matter.
    CHECK(std::abs(trace.steps[1].value - best.value) < 1e-12);
    for (size_t i = 1; i < trace.steps.size(); ++i) {
      CHECK(trace.steps[i].value <= trace.steps[i - 1].value + 1e-12);
    }
  }
}

TEST_CASE("noiseless optimization reaches the dense-grid optimum") {
  for (const char* name : {"iron_2q_hamiltonian.json",
                           "chain_2q_hamiltonian.json"}) {
    PauliSum h = load_pauli_sum(kFixtures + "/" + name);
    VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200000; ++i) {
      double theta = -std::numbers::pi + i * (2 * std::numbers::pi / 200000);
      grid_min = std::min(grid_min, yx_energy(h, theta));
    }
    OptimizationTrace trace = rotosolve(wrap(cost), {1e-5}, 10, 1e-9, 2);
    CHECK(trace.best().value <= grid_min + 1e-8);
    CHECK(std::abs(trace.best().value - grid_min) < 1e-8);
  }
}

TEST_CASE("parameter-shift gradients match central finite differences") {
  PauliSum h = load_pauli_sum(kFixtures + "/chain_2q_hamiltonian.json");
  VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
  CostFn f = wrap(cost);
  const double fd = 1e-5;
  for (double theta : {-1.1, -0.09283, 0.0, 0.7}) {
    auto grad = parameter_shift_gradient(f, {theta});
    double central =
        (f({theta + fd}).value - f({theta - fd}).value) / (2 * fd);
    CHECK(std::abs(grad[0] - central) < 1e-6);
  }
}

TEST_CASE("even costs have zero gradient at the origin") {
  PauliSum h(2);
  h.add(PauliWord::from_string("ZI"), -0.3);
  h.add(PauliWord::from_string("IZ"), -0.3);
  h.add(PauliWord::from_string("ZZ"), -0.1);
  VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
  auto grad = parameter_shift_gradient(wrap(cost), {0.0});
  CHECK(std::abs(grad[0]) < 1e-12);
  OptimizationTrace trace = sgd(wrap(cost), {0.0}, 0.5, 3);
  for (const TraceStep& s : trace.steps) {
    CHECK(std::abs(s.theta[0]) < 1e-12);
  }
}

TEST_CASE("sgd and rotosolve agree on the one-parameter optimum") {
  PauliSum h = load_pauli_sum(kFixtures + "/iron_2q_hamiltonian.json");
  VqeCost cost(h, yx_ansatz(), {}, statevector_backend(), {});
  OptimizationTrace roto = rotosolve(wrap(cost), {1e-5}, 10, 1e-9, 2);
  OptimizationTrace desc = sgd(wrap(cost), {1e-5}, 0.4, 60);
  CHECK(std::abs(roto.best().theta[0] - desc.best().theta[0]) < 1e-3);
  CHECK(std::abs(roto.best().value - desc.best().value) < 1e-6);
}

TEST_CASE("transqse with a vanishing overlap operator is form independent") {
  PauliSum h = load_pauli_sum(kFixtures + "/iron_2q_hamiltonian.json");
  TransQseProblem problem;
  problem.h = h;
  problem.h_lambda = PauliSum(2);
  problem.lambda_op = PauliSum(2);
  problem.ansatz = yx_ansatz();
  Backend b = statevector_backend();
  for (double theta : {-0.5, 0.0, 0.3}) {
    problem.taylor_order = 0;
    auto [exact, s0] = transqse_energy(theta, problem, b, {});
    problem.taylor_order = 1;
    auto [first, s1] = transqse_energy(theta, problem, b, {});
    CHECK(exact == first);
    CHECK(std::abs(exact - yx_energy(h, theta)) < 1e-12);
  }
}

TEST_CASE("transqse first order stays within the taylor remainder bound") {
  PauliSum h = load_pauli_sum(kFixtures + "/transqse_hamiltonian.json");
  PauliSum lambda = translation_operator(2, 4);
  TransQseProblem problem;
  problem.h = h;
  problem.h_lambda = h * lambda;
  problem.lambda_op = lambda;
  problem.ansatz = load_ansatz(kFixtures + "/transqse_ansatz.json");
  REQUIRE(problem.h_lambda.is_hermitian());
  REQUIRE(sum_commutator(h, lambda).empty());
  Backend b = statevector_backend();
  for (int i = 0; i <= 24; ++i) {
    double theta = -0.3 + i * 0.025;
    problem.taylor_order = 0;
    auto [exact, se] = transqse_energy(theta, problem, b, {});
    problem.taylor_order = 1;
    auto [first, sf] = transqse_energy(theta, problem, b, {});
    StateVector psi =
        run_statevector(problem.ansatz.to_circuit(), {theta});
    double a = exact_expectation(psi, problem.h) +
               exact_expectation(psi, problem.h_lambda);
    double s1 = exact_expectation(psi, lambda);
    CHECK(std::abs(exact - first) <= 2.0 * s1 * s1 * std::abs(a) + 1e-12);
  }
}

TEST_CASE("transqse exact form at theta zero matches dense algebra") {
  PauliSum h = load_pauli_sum(kFixtures + "/transqse_hamiltonian.json");
  PauliSum lambda = translation_operator(2, 4);
  TransQseProblem problem;
  problem.h = h;
  problem.h_lambda = h * lambda;
  problem.lambda_op = lambda;
  problem.ansatz = load_ansatz(kFixtures + "/transqse_ansatz.json");
  problem.taylor_order = 0;
  auto [value, stddev] = transqse_energy(0.0, problem, statevector_backend(),
                                         {});
  oracle::Vec psi0 =
      oracle::Vec::Zero(256);
  psi0(basis_index(problem.ansatz.initial_occupation)) = 1.0;
  oracle::Mat hm = oracle::sum_matrix(h);
  oracle::Mat lm = oracle::sum_matrix(lambda);
  double h0 = (psi0.adjoint() * hm * psi0)(0).real();
  double h1 = (psi0.adjoint() * hm * lm * psi0)(0).real();
  double s1 = (psi0.adjoint() * lm * psi0)(0).real();
  CHECK(std::abs(value - (h0 + h1) / (1.0 + s1)) < 1e-10);
  CHECK(stddev == 0.0);
}

TEST_CASE("transqse rejects unstable denominators and bad orders") {
  PauliSum h = load_pauli_sum(kFixtures + "/iron_2q_hamiltonian.json");
  TransQseProblem problem;
  problem.h = h;
  problem.h_lambda = PauliSum(2);
  problem.lambda_op = PauliSum(2);
  problem.lambda_op.add(PauliWord::identity(2), -1.0);
  problem.ansatz = yx_ansatz();
  problem.taylor_order = 0;
  Backend b = statevector_backend();
  CHECK_THROWS_AS(transqse_energy(0.0, problem, b, {}), NumericalError);
  problem.taylor_order = 2;
  CHECK_THROWS_AS(transqse_energy(0.0, problem, b, {}), InputError);
}

TEST_CASE("cluster-derived ansatz reproduces the exponential of the cluster") {
  FermionOperator cluster = transqse_local_cluster(1.0, 2, 4);
  std::vector<int> occ{1, 1, 0, 0, 1, 1, 0, 0};
  AnsatzSpec spec = ansatz_from_cluster(cluster, 8, occ);
  CHECK(spec.n_params() == 1);
  for (double theta : {-0.7, 0.3}) {
    StateVector got = run_statevector(spec.to_circuit(), {theta});
    // All generator words commute, so the product equals the single
    // exponential of theta times the JW image of the cluster.
    oracle::Mat k = oracle::Mat::Zero(256, 256);
    PauliSum jw = jordan_wigner(cluster, 8);
    for (const auto& [w, c] : jw.terms()) {
      k += theta * c * oracle::word_matrix(w.str());
    }
    oracle::Vec psi0 = oracle::Vec::Zero(256);
    psi0(basis_index(occ)) = 1.0;
    // exp(k) psi0 by the plain Taylor series; ||k|| < 1 so it converges
    // far below the comparison tolerance by 60 terms.
    oracle::Vec want = psi0;
    oracle::Vec term = psi0;
    for (int n = 1; n <= 60; ++n) {
      term = (k * term / double(n)).eval();
      want += term;
    }
    CHECK((got - want).norm() < 1e-10);
  }
}

TEST_CASE("cluster conversion rejects operators with a hermitian part") {
  FermionOperator t;
  FermionTerm term;
  term.factors = {{2, true}, {0, false}};
  term.coeff = {0.4, 0.0};
  t.add_term(term);
  FermionOperator sym = t;
  sym += t.adjoint();
  CHECK_THROWS_AS(ansatz_from_cluster(sym, 4, {1, 0, 1, 0}), InputError);
}

TEST_CASE("ansatz validation rejects malformed specifications") {
  AnsatzSpec bad = yx_ansatz();
  bad.generators[0].param = 1;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = yx_ansatz();
  bad.generators[0].word = PauliWord::from_string("YXZ");
  CHECK_THROWS_AS(bad.validate(), DimensionError);
  bad = yx_ansatz();
  bad.initial_occupation = {0, 2};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = yx_ansatz();
  bad.generators[0].word = PauliWord::identity(2);
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("spam without a confusion model is rejected on shot backends") {
  PauliSum h = load_pauli_sum(kFixtures + "/iron_2q_hamiltonian.json");
  MitigationFlags flags;
  flags.spam = true;
  VqeCost cost(h, yx_ansatz(), {}, shot_backend(1000, 1), flags);
  CHECK_THROWS_AS(cost({0.1}), InputError);
}

TEST_CASE("wrap angle maps into the half-open principal interval") {
  const double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
  CHECK(wrap_angle(-7 * pi) == doctest::Approx(pi));
}

TEST_CASE("trace export writes one labeled row per step") {
  CostFn cost = [](const std::vector<double>& t) {
    CostEval e;
    e.value = std::cos(t[0]);
    e.e_raw = e.e_spam = e.e_pmsv = e.e_spam_pmsv = e.value;
    return e;
  };
  OptimizationTrace trace = rotosolve(cost, {0.2}, 2, 1e-9);
  std::istringstream csv(trace_to_csv(trace));
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line ==
        "step,theta0,e_raw,e_spam,e_pmsv,e_spam_pmsv,stddev,"
        "discard_fraction,seed");
  size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == trace.steps.size());
}

TEST_CASE("ansatz files round trip through disk") {
  AnsatzSpec spec = load_ansatz(kFixtures + "/transqse_ansatz.json");
  CHECK(spec.n_qubits() == 8);
  CHECK(spec.generators.size() == 8);
  AnsatzSpec derived = ansatz_from_cluster(transqse_local_cluster(1.0, 2, 4),
                                           8, {1, 1, 0, 0, 1, 1, 0, 0});
  REQUIRE(spec.generators.size() == derived.generators.size());
  for (size_t i = 0; i < spec.generators.size(); ++i) {
    CHECK(spec.generators[i].word == derived.generators[i].word);
    CHECK(spec.generators[i].param == derived.generators[i].param);
    CHECK(spec.generators[i].scale ==
          doctest::Approx(derived.generators[i].scale).epsilon(1e-12));
  }
  std::string tmp =
      (std::filesystem::temp_directory_path() / "ansatz_rt.json").string();
  save_ansatz(spec, tmp);
  AnsatzSpec back = load_ansatz(tmp);
  CHECK(back.initial_occupation == spec.initial_occupation);
  REQUIRE(back.generators.size() == spec.generators.size());
  for (size_t i = 0; i < spec.generators.size(); ++i) {
    CHECK(back.generators[i].word == spec.generators[i].word);
    CHECK(back.generators[i].scale == spec.generators[i].scale);
  }
  std::remove(tmp.c_str());
}

TEST_CASE("shipped yx ansatz fixture matches the inline definition") {
  AnsatzSpec spec = load_ansatz(kFixtures + "/yx_ansatz.json");
  AnsatzSpec want = yx_ansatz();
  CHECK(spec.initial_occupation == want.initial_occupation);
  REQUIRE(spec.generators.size() == 1);
  CHECK(spec.generators[0].word == want.generators[0].word);
  CHECK(spec.generators[0].scale == 1.0);
}
