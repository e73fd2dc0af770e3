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

#include "qpbc/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace qpbc {

std::string CliffordGate::str() const {
  switch (kind) {
    case Kind::H: return "H(" + std::to_string(target) + ")";
    case Kind::S: return "S(" + std::to_string(target) + ")";
    case Kind::CX:
      return "CX(" + std::to_string(control) + "," + std::to_string(target) +
             ")";
  }
  return "?";
}

std::vector<CommutingSet> partition_commuting(
    const std::vector<PauliWord>& terms, PartitionStrategy strategy) {
  if (terms.empty()) return {};
  const uint32_t n = terms[0].n_qubits;
  for (const auto& t : terms) {
    if (t.n_qubits != n) throw DimensionError("mixed qubit counts");
    if (t.is_identity()) {
      throw InputError("identity term has no measurement; exclude it");
    }
  }
  auto compatible = [&](const PauliWord& a, const PauliWord& b) {
    return strategy == PartitionStrategy::qubitwise ? commutes_qubitwise(a, b)
                                                    : commutes(a, b);
  };
  const size_t m = terms.size();
  std::vector<std::vector<size_t>> conflicts(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (!compatible(terms[i], terms[j])) {
        conflicts[i].push_back(j);
        conflicts[j].push_back(i);
      }
    }
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return conflicts[a].size() > conflicts[b].size();
  });
  std::vector<int> color(m, -1);
  int n_colors = 0;
  for (size_t v : order) {
    std::vector<char> used(n_colors + 1, 0);
    for (size_t u : conflicts[v]) {
      if (color[u] >= 0) used[color[u]] = 1;
    }
    int c = 0;
    while (used[c]) ++c;
    color[v] = c;
    n_colors = std::max(n_colors, c + 1);
  }
  std::vector<CommutingSet> sets(n_colors);
  for (size_t i = 0; i < m; ++i) sets[color[i]].members.push_back(terms[i]);
  return sets;
}

void attach_symmetries(std::vector<CommutingSet>& sets,
                       const std::vector<SymmetryOperator>& syms) {
  for (auto& set : sets) {
    for (const auto& s : syms) {
      bool ok = true;
      for (const auto& w : set.members) ok = ok && commutes(w, s.word);
      if (ok) set.attached_symmetries.push_back(s);
    }
  }
}

void conjugate_by_gate(const CliffordGate& g, uint64_t& x, uint64_t& z,
                       int& sign) {
  const uint64_t tm = uint64_t{1} << g.target;
  switch (g.kind) {
    case CliffordGate::Kind::H: {
      if ((x & tm) && (z & tm)) sign = -sign;
      uint64_t xt = x & tm, zt = z & tm;
      x = (x & ~tm) | (zt ? tm : 0);
      z = (z & ~tm) | (xt ? tm : 0);
      break;
    }
    case CliffordGate::Kind::S: {
      if (x & tm) {
        if (z & tm) sign = -sign;
        z ^= tm;
      }
      break;
    }
    case CliffordGate::Kind::CX: {
      const uint64_t cm = uint64_t{1} << g.control;
      bool xc = x & cm, zc = z & cm, xt = x & tm, zt = z & tm;
      if (xc && zt && (xt == zc)) sign = -sign;
      if (xc) x ^= tm;
      if (zt) z ^= cm;
      break;
    }
  }
}

namespace {

struct WorkWord {
  uint64_t x, z;
  int sign;
};

void apply_gate(std::vector<CliffordGate>& circuit,
                std::vector<WorkWord>& words, CliffordGate g) {
  for (auto& w : words) conjugate_by_gate(g, w.x, w.z, w.sign);
  circuit.push_back(g);
}

}  // namespace

PlanEntry synthesize_measurement(const CommutingSet& set, uint32_t n_qubits) {
  std::vector<PauliWord> all = set.members;
  for (const auto& s : set.attached_symmetries) all.push_back(s.word);
  for (size_t i = 0; i < all.size(); ++i) {
    if (all[i].n_qubits != n_qubits) {
      throw DimensionError("word qubit count does not match plan");
    }
    for (size_t j = i + 1; j < all.size(); ++j) {
      if (!commutes(all[i], all[j])) {
        throw InputError("measurement set is not mutually commuting");
      }
    }
  }

  PlanEntry entry;
  entry.set = set;
  std::vector<WorkWord> words;
  for (const auto& w : all) words.push_back({w.x, w.z, 1});

  for (auto& cur : words) {
    if (cur.x == 0) continue;
    uint32_t q = uint32_t(std::countr_zero(cur.x));
    if ((cur.z >> q) & 1) {
      apply_gate(entry.circuit, words, {CliffordGate::Kind::S, q});
    }
    for (uint32_t r = 0; r < n_qubits; ++r) {
      if (r != q && ((cur.x >> r) & 1)) {
        apply_gate(entry.circuit, words, {CliffordGate::Kind::CX, r, q});
      }
    }
    for (uint32_t r = 0; r < n_qubits; ++r) {
      if (r != q && ((cur.z >> r) & 1)) {
        // CZ(q, r) from the available generators.
        apply_gate(entry.circuit, words, {CliffordGate::Kind::H, r});
        apply_gate(entry.circuit, words, {CliffordGate::Kind::CX, r, q});
        apply_gate(entry.circuit, words, {CliffordGate::Kind::H, r});
      }
    }
    if ((cur.z >> q) & 1) {
      apply_gate(entry.circuit, words, {CliffordGate::Kind::S, q});
    }
    apply_gate(entry.circuit, words, {CliffordGate::Kind::H, q});
  }

  for (size_t i = 0; i < words.size(); ++i) {
    if (words[i].x != 0) {
      throw SymmetryError("diagonalization failed for " + all[i].str());
    }
  }
  for (size_t i = 0; i < set.members.size(); ++i) {
    entry.member_map[set.members[i]] = {words[i].z, words[i].sign};
  }
  for (size_t i = 0; i < set.attached_symmetries.size(); ++i) {
    const auto& w = words[set.members.size() + i];
    entry.targets.push_back(
        {w.z, set.attached_symmetries[i].sign * w.sign});
  }
  return entry;
}

MeasurementPlan make_measurement_plan(
    const PauliSum& h, PartitionStrategy strategy,
    const std::vector<SymmetryOperator>& syms) {
  std::vector<PauliWord> terms;
  for (const auto& [w, c] : h.terms()) {
    if (!w.is_identity()) terms.push_back(w);
  }
  MeasurementPlan plan;
  plan.n_qubits = h.n_qubits();
  auto sets = partition_commuting(terms, strategy);
  attach_symmetries(sets, syms);
  for (const auto& s : sets) {
    plan.entries.push_back(synthesize_measurement(s, plan.n_qubits));
  }
  return plan;
}

uint64_t ShotTable::total() const {
  uint64_t t = 0;
  for (const auto& [b, c] : counts) t += c;
  return t;
}

double WeightedCounts::total() const {
  double t = 0;
  for (const auto& [b, w] : weights) t += w;
  return t;
}

WeightedCounts to_weighted(const ShotTable& table) {
  WeightedCounts out;
  out.n_bits = table.n_bits;
  for (const auto& [b, c] : table.counts) out.weights[b] = double(c);
  return out;
}

namespace {

// Shared estimator over integer or real weights.  Per set the combined
// random variable sum_w c_w eig_w(bits) is averaged; its sample variance
// captures within-set covariance, sets are treated as independent.
template <typename Table>
std::pair<double, double> estimate_impl(const MeasurementPlan& plan,
                                        const std::vector<Table>& tables,
                                        const PauliSum& h) {
  if (tables.size() != plan.entries.size()) {
    throw InputError("one shot table per measurement circuit is required");
  }
  if (h.n_qubits() != plan.n_qubits) {
    throw DimensionError("operator does not match plan qubit count");
  }
  double value = 0.0;
  for (const auto& [w, c] : h.terms()) {
    if (w.is_identity()) {
      value += c.real();
      continue;
    }
    bool found = false;
    for (const auto& e : plan.entries) found = found || e.member_map.count(w);
    if (!found) {
      throw InputError("no measurement circuit covers term " + w.str());
    }
  }
  double var = 0.0;
  for (size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& entry = plan.entries[i];
    std::vector<std::pair<ResultMap, double>> terms;
    for (const auto& [w, rm] : entry.member_map) {
      cdouble c = h.coefficient(w);
      if (std::abs(c) > 0) terms.push_back({rm, c.real()});
    }
    double total = 0.0;
    for (const auto& [b, cnt] : tables[i].get_counts()) total += double(cnt);
    if (total <= 0) throw InputError("empty shot table for circuit " +
                                     std::to_string(i));
    double mean = 0.0, second = 0.0;
    for (const auto& [b, cnt] : tables[i].get_counts()) {
      double v = 0.0;
      for (const auto& [rm, c] : terms) {
        int parity = std::popcount(b & rm.mask) & 1;
        v += c * rm.sign * (parity ? -1.0 : 1.0);
      }
      mean += double(cnt) * v;
      second += double(cnt) * v * v;
    }
    mean /= total;
    second /= total;
    value += mean;
    var += std::max(0.0, second - mean * mean) / total;
  }
  return {value, std::sqrt(var)};
}

struct IntView {
  const ShotTable& t;
  const std::map<uint64_t, uint64_t>& get_counts() const { return t.counts; }
};
struct RealView {
  const WeightedCounts& t;
  const std::map<uint64_t, double>& get_counts() const { return t.weights; }
};

}  // namespace

std::pair<double, double> estimate_expectation(
    const MeasurementPlan& plan, const std::vector<ShotTable>& tables,
    const PauliSum& h) {
  std::vector<IntView> views;
  for (const auto& t : tables) views.push_back({t});
  return estimate_impl(plan, views, h);
}

std::pair<double, double> estimate_expectation(
    const MeasurementPlan& plan, const std::vector<WeightedCounts>& tables,
    const PauliSum& h) {
  std::vector<RealView> views;
  for (const auto& t : tables) views.push_back({t});
  return estimate_impl(plan, views, h);
}

std::string bitstring(uint64_t bits, uint32_t n) {
  std::string s(n, '0');
  for (uint32_t q = 0; q < n; ++q) {
    if ((bits >> q) & 1) s[q] = '1';
  }
  return s;
}

uint64_t parse_bitstring(const std::string& s) {
  uint64_t bits = 0;
  for (size_t q = 0; q < s.size(); ++q) {
    if (s[q] == '1') bits |= uint64_t{1} << q;
    else if (s[q] != '0') throw InputError("bad bitstring: " + s);
  }
  return bits;
}

ShotTable load_shot_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open shot table: " + path);
  try {
    nlohmann::json j;
    in >> j;
    ShotTable t;
    t.circuit_id = j.at("circuit_id").get<std::string>();
    t.n_bits = j.at("n_bits").get<uint32_t>();
    t.seed = j.value("seed", uint64_t{0});
    for (const auto& [k, v] : j.at("counts").items()) {
      if (k.size() != t.n_bits) {
        throw InputError("bitstring length mismatch: '" + k + "' is not " +
                         std::to_string(t.n_bits) + " bits");
      }
      t.counts[parse_bitstring(k)] = v.get<uint64_t>();
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("shot table document error: ") + e.what());
  }
}

void save_shot_table(const ShotTable& table, const std::string& path) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [b, c] : table.counts) {
    counts[bitstring(b, table.n_bits)] = c;
  }
  nlohmann::json j{{"circuit_id", table.circuit_id},
                   {"n_bits", table.n_bits},
                   {"seed", table.seed},
                   {"counts", counts}};
  std::ofstream out(path);
  if (!out) throw InputError("cannot write shot table: " + path);
  out << j.dump(2) << "\n";
}

std::string plan_to_json_text(const MeasurementPlan& plan) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : plan.entries) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : e.circuit) gates.push_back(g.str());
    nlohmann::json members = nlohmann::json::object();
    for (const auto& [w, rm] : e.member_map) {
      members[w.str()] = {{"bits", bitstring(rm.mask, plan.n_qubits)},
                          {"sign", rm.sign}};
    }
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : e.targets) {
      targets.push_back({{"bits", bitstring(t.mask, plan.n_qubits)},
                         {"expected_sign", t.expected_sign}});
    }
    entries.push_back({{"circuit", gates},
                       {"members", members},
                       {"targets", targets}});
  }
  return nlohmann::json{{"n_qubits", plan.n_qubits}, {"entries", entries}}
      .dump(2);
}

}  // namespace qpbc
