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

#include "qpbc/mitigation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace qpbc {

namespace {

constexpr double kColumnTol = 1e-9;
constexpr double kConditionBound = 1e6;
constexpr uint32_t kMaxFullQubits = 10;

void check_column_stochastic(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double sum = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) < -kColumnTol || m(i, j) > 1 + kColumnTol) {
        throw InputError("confusion entry out of [0,1]");
      }
      sum += m(i, j);
    }
    if (std::abs(sum - 1.0) > kColumnTol) {
      throw InputError("confusion column does not sum to 1");
    }
  }
}

}  // namespace

uint32_t ConfusionModel::n_qubits() const {
  if (mode == Mode::per_qubit) return uint32_t(per_qubit.size());
  uint32_t n = 0;
  while ((Eigen::Index{1} << n) < full.rows()) ++n;
  return n;
}

void ConfusionModel::validate() const {
  if (mode == Mode::per_qubit) {
    if (per_qubit.empty()) throw InputError("empty confusion model");
    for (const auto& m : per_qubit) check_column_stochastic(m);
  } else {
    if (full.rows() != full.cols() || full.rows() == 0 ||
        std::popcount(uint64_t(full.rows())) != 1) {
      throw InputError("full confusion matrix must be square 2^n x 2^n");
    }
    if (n_qubits() > kMaxFullQubits) {
      throw ResourceError("full confusion model limited to 10 qubits");
    }
    check_column_stochastic(full);
  }
}

Eigen::MatrixXd ConfusionModel::response_matrix() const {
  validate();
  if (mode == Mode::full) return full;
  if (n_qubits() > kMaxFullQubits) {
    throw ResourceError("confusion model expansion limited to 10 qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits();
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index obs = 0; obs < dim; ++obs) {
    for (Eigen::Index prep = 0; prep < dim; ++prep) {
      double p = 1.0;
      for (uint32_t q = 0; q < n_qubits(); ++q) {
        p *= per_qubit[q](int((obs >> q) & 1), int((prep >> q) & 1));
      }
      m(obs, prep) = p;
    }
  }
  return m;
}

ConfusionModel ConfusionModel::identity(uint32_t n) {
  ConfusionModel m;
  m.mode = Mode::per_qubit;
  m.per_qubit.assign(n, Eigen::Matrix2d::Identity());
  return m;
}

ConfusionModel calibrate_spam(const Sampler& backend, uint32_t n_qubits,
                              uint64_t shots, ConfusionModel::Mode mode,
                              uint64_t seed) {
  if (shots == 0) throw InputError("calibration requires shots > 0");
  if (mode == ConfusionModel::Mode::per_qubit) {
    Circuit zeros(n_qubits);
    Circuit ones(n_qubits);
    for (uint32_t q = 0; q < n_qubits; ++q) ones.add_x(q);
    ShotTable t0 = backend(zeros, shots, seed);
    ShotTable t1 = backend(ones, shots, seed + 1);
    ConfusionModel m;
    m.mode = mode;
    m.per_qubit.assign(n_qubits, Eigen::Matrix2d::Zero());
    for (uint32_t q = 0; q < n_qubits; ++q) {
      uint64_t ones_from_zero = 0, zeros_from_one = 0;
      for (const auto& [b, c] : t0.counts) {
        if ((b >> q) & 1) ones_from_zero += c;
      }
      for (const auto& [b, c] : t1.counts) {
        if (!((b >> q) & 1)) zeros_from_one += c;
      }
      double p10 = double(ones_from_zero) / double(shots);
      double p01 = double(zeros_from_one) / double(shots);
      m.per_qubit[q] << 1 - p10, p01, p10, 1 - p01;
    }
    return m;
  }
  if (n_qubits > kMaxFullQubits) {
    throw ResourceError("full calibration limited to 10 qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ConfusionModel m;
  m.mode = mode;
  m.full = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index prep = 0; prep < dim; ++prep) {
    Circuit c(n_qubits);
    for (uint32_t q = 0; q < n_qubits; ++q) {
      if ((prep >> q) & 1) c.add_x(q);
    }
    ShotTable t = backend(c, shots, seed + uint64_t(prep));
    for (const auto& [b, cnt] : t.counts) {
      m.full(Eigen::Index(b), prep) = double(cnt) / double(shots);
    }
  }
  return m;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double target) {
  if (target <= 0) throw InputError("simplex target must be positive");
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int k = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - target) / double(i + 1);
    if (u[i] - t > 0) {
      tau = t;
      k = int(i + 1);
    }
  }
  (void)k;
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = std::max(0.0, v(i) - tau);
  }
  return out;
}

WeightedCounts spam_correct(const WeightedCounts& table,
                            const ConfusionModel& model) {
  if (model.n_qubits() != table.n_bits) {
    throw DimensionError("confusion model does not match table width");
  }
  Eigen::MatrixXd m = model.response_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  double smax = svd.singularValues()(0);
  if (smin <= 0 || smax / smin > kConditionBound) {
    throw NumericalError("confusion model is ill-conditioned");
  }
  const Eigen::Index dim = m.rows();
  double total = table.total();
  if (total <= 0) throw InputError("empty table");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
  for (const auto& [b, w] : table.weights) p(Eigen::Index(b)) = w / total;
  Eigen::VectorXd q = svd.solve(p);
  Eigen::VectorXd proj = project_to_simplex(q, 1.0);
  WeightedCounts out;
  out.n_bits = table.n_bits;
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (proj(b) > 0) out.weights[uint64_t(b)] = proj(b) * total;
  }
  return out;
}

WeightedCounts spam_correct(const ShotTable& table,
                            const ConfusionModel& model) {
  return spam_correct(to_weighted(table), model);
}

namespace {

bool passes(uint64_t bits, const std::vector<ParityTarget>& targets) {
  for (const auto& t : targets) {
    int parity = std::popcount(bits & t.mask) & 1;
    if ((parity ? -1 : 1) != t.expected_sign) return false;
  }
  return true;
}

void check_targets(uint32_t n_bits, const std::vector<ParityTarget>& targets) {
  for (const auto& t : targets) {
    if (t.mask == 0) throw InputError("empty parity target");
    if (n_bits < 64 && (t.mask >> n_bits) != 0) {
      throw InputError("parity target beyond measured bits");
    }
  }
}

}  // namespace

std::pair<ShotTable, double> pmsv_postselect(
    const ShotTable& table, const std::vector<ParityTarget>& targets) {
  check_targets(table.n_bits, targets);
  ShotTable out = table;
  out.counts.clear();
  uint64_t kept = 0;
  for (const auto& [b, c] : table.counts) {
    if (passes(b, targets)) {
      out.counts[b] = c;
      kept += c;
    }
  }
  uint64_t total = table.total();
  double discard =
      total == 0 ? 0.0 : 1.0 - double(kept) / double(total);
  return {out, discard};
}

std::pair<WeightedCounts, double> pmsv_postselect(
    const WeightedCounts& table, const std::vector<ParityTarget>& targets) {
  check_targets(table.n_bits, targets);
  WeightedCounts out;
  out.n_bits = table.n_bits;
  double kept = 0;
  for (const auto& [b, w] : table.weights) {
    if (passes(b, targets)) {
      out.weights[b] = w;
      kept += w;
    }
  }
  double total = table.total();
  double discard = total <= 0 ? 0.0 : 1.0 - kept / total;
  return {out, discard};
}

MitigationResult mitigated_expectation(const MeasurementPlan& plan,
                                       const std::vector<ShotTable>& tables,
                                       const PauliSum& h,
                                       const ConfusionModel& model,
                                       const MitigationFlags& flags) {
  if (tables.size() != plan.entries.size()) {
    throw InputError("one shot table per measurement circuit is required");
  }
  std::vector<WeightedCounts> processed;
  double grand_total = 0.0, kept_total = 0.0;
  for (size_t i = 0; i < tables.size(); ++i) {
    WeightedCounts w = flags.spam ? spam_correct(tables[i], model)
                                  : to_weighted(tables[i]);
    grand_total += w.total();
    if (flags.pmsv) {
      auto [filtered, discard] = pmsv_postselect(w, plan.entries[i].targets);
      (void)discard;
      w = std::move(filtered);
    }
    kept_total += w.total();
    processed.push_back(std::move(w));
  }
  MitigationResult result;
  result.discard_fraction =
      grand_total <= 0 ? 0.0 : 1.0 - kept_total / grand_total;
  auto [value, stddev] = estimate_expectation(plan, processed, h);
  result.value = value;
  result.stddev = stddev;
  return result;
}

ConfusionModel load_confusion_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open confusion model: " + path);
  ConfusionModel m;
  try {
    nlohmann::json j;
    in >> j;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "per_qubit") {
      m.mode = ConfusionModel::Mode::per_qubit;
      for (const auto& mat : j.at("matrices")) {
        Eigen::Matrix2d q;
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) q(r, c) = mat.at(r).at(c).get<double>();
        }
        m.per_qubit.push_back(q);
      }
    } else if (mode == "full") {
      m.mode = ConfusionModel::Mode::full;
      const auto& mat = j.at("matrix");
      Eigen::Index dim = Eigen::Index(mat.size());
      m.full.resize(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
          m.full(r, c) = mat.at(size_t(r)).at(size_t(c)).get<double>();
        }
      }
    } else {
      throw InputError("unknown confusion model mode: " + mode);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("confusion model document error: ") +
                     e.what());
  }
  m.validate();
  return m;
}

void save_confusion_model(const ConfusionModel& model,
                          const std::string& path) {
  model.validate();
  nlohmann::json j;
  if (model.mode == ConfusionModel::Mode::per_qubit) {
    j["mode"] = "per_qubit";
    nlohmann::json mats = nlohmann::json::array();
    for (const auto& m : model.per_qubit) {
      mats.push_back({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
    }
    j["matrices"] = mats;
  } else {
    j["mode"] = "full";
    nlohmann::json mat = nlohmann::json::array();
    for (Eigen::Index r = 0; r < model.full.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < model.full.cols(); ++c) {
        row.push_back(model.full(r, c));
      }
      mat.push_back(row);
    }
    j["matrix"] = mat;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write confusion model: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qpbc
