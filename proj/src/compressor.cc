// Copyright 2026 The subpure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subpure/compressor.h"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <Eigen/SVD>

#include "json.hpp"
#include "subpure/error.h"
#include "subpure/encoder.h"

namespace subpure {

ProductCertificate split_subsystems(const StateVector& state, const QubitPartition& partition, double tolerance) {
  const double residual = 2.0 - purity_sum(state, partition);
  if (residual > tolerance) {
    throw Error(ErrorCode::kNotProduct, "purity residual " + std::to_string(residual) +
                                            " exceeds tolerance " + std::to_string(tolerance));
  }
  const Eigen::MatrixXcd m = coefficient_matrix(state, partition);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // M = sum_k s_k u_k v_k^dagger, so psi = sum_k s_k u_k (x) conj(v_k).
  Eigen::VectorXcd u = svd.matrixU().col(0);
  Eigen::VectorXcd v = svd.matrixV().col(0).conjugate();

  Eigen::Index lead = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    if (std::abs(u(i)) > std::abs(u(lead)) + 1e-12) lead = i;
  }
  const Amplitude gauge = std::abs(u(lead)) > 0 ? std::conj(u(lead)) / std::abs(u(lead)) : Amplitude(1.0);
  u *= gauge;
  v /= gauge;

  ProductCertificate cert;
  cert.phi = StateVector::normalized(std::vector<Amplitude>(u.data(), u.data() + u.size()));
  cert.eta = StateVector::normalized(std::vector<Amplitude>(v.data(), v.data() + v.size()));
  cert.partition = partition;
  cert.residual = residual;
  const double s0 = svd.singularValues()(0);
  cert.schmidt_fidelity = s0 * s0;
  return cert;
}

double rebalanced_probability(const StateVector& phi, const StateVector& eta, std::uint64_t g) {
  const double x = std::norm(phi[g]);
  const double y = std::norm(eta[g]);
  return x + y > 0.0 ? 2.0 * x * y / (x + y) : 0.0;
}

GarbageSelection select_garbage_basis(const StateVector& phi, const StateVector& eta, GarbageRule rule) {
  if (phi.n_qubits() != eta.n_qubits()) throw Error(ErrorCode::kDimension, "phi and eta differ in size");
  std::optional<std::uint64_t> best;
  double best_score = -1.0;
  for (std::size_t g = 0; g < phi.dim(); ++g) {
    if (std::abs(phi[g]) <= kOverlapFloor || std::abs(eta[g]) <= kOverlapFloor) continue;
    const double score = rule == GarbageRule::kPlusProbability ? 0.5 * (std::norm(phi[g]) + std::norm(eta[g]))
                                                               : rebalanced_probability(phi, eta, g);
    if (score > best_score) {
      best_score = score;
      best = g;
    }
  }
  if (!best) throw Error(ErrorCode::kOrthogonalSupports, "phi and eta have disjoint computational supports");
  const Amplitude r = phi[*best] / eta[*best];
  return GarbageSelection{*best, rule, std::abs(r), std::arg(r), 0.5 * (std::norm(phi[*best]) + std::norm(eta[*best]))};
}

namespace {

bool supports_overlap(const StateVector& a, const StateVector& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (std::abs(a[i]) > kOverlapFloor && std::abs(b[i]) > kOverlapFloor) return true;
  }
  return false;
}

}  // namespace

Decorrelation decorrelate(const StateVector& phi, const StateVector& eta) {
  if (phi.n_qubits() != eta.n_qubits()) throw Error(ErrorCode::kDimension, "phi and eta differ in size");
  Decorrelation d{DecorrelationRecord{{}, std::numbers::pi / 4}, eta};
  for (unsigned q = 0; q < eta.n_qubits() && !supports_overlap(phi, d.eta); ++q) {
    kernels::ry(d.eta.amplitudes(), d.eta.n_qubits(), q, d.record.angle);
    d.record.rotated_qubits.push_back(q);
  }
  // Ry(pi/4) on every qubit spreads a basis state over the whole register;
  // only an exact cancellation on phi's entire support can survive that.
  if (!supports_overlap(phi, d.eta)) {
    throw Error(ErrorCode::kOrthogonalSupports, "decorrelation did not produce overlapping supports");
  }
  return d;
}

StateVector undo_decorrelation(const DecorrelationRecord& record, StateVector eta) {
  for (auto it = record.rotated_qubits.rbegin(); it != record.rotated_qubits.rend(); ++it) {
    if (*it >= eta.n_qubits()) throw Error(ErrorCode::kCorruptCompactState, "decorrelation qubit out of range");
    kernels::ry(eta.amplitudes(), eta.n_qubits(), *it, -record.angle);
  }
  return eta;
}

StateVector pad_qubits(const StateVector& s, unsigned n_qubits) {
  if (n_qubits < s.n_qubits()) throw Error(ErrorCode::kDimension, "cannot pad to fewer qubits");
  const unsigned extra = n_qubits - s.n_qubits();
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  for (std::size_t i = 0; i < s.dim(); ++i) amps[i << extra] = s[i];
  return StateVector(std::move(amps));
}

namespace {

StateVector unpad_qubits(const StateVector& s, unsigned n_qubits) {
  const unsigned extra = s.n_qubits() - n_qubits;
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  double dropped = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i & ((std::size_t{1} << extra) - 1)) {
      dropped += std::norm(s[i]);
    } else {
      amps[i >> extra] = s[i];
    }
  }
  if (dropped > 1e-8) throw Error(ErrorCode::kCorruptCompactState, "padding qubits are not in |0>");
  return StateVector(std::move(amps));
}

unsigned register_size(const ProductCertificate& cert) { return std::max(cert.phi.n_qubits(), cert.eta.n_qubits()); }

}  // namespace

CompactState compress(const ProductCertificate& cert, AncillaPrep ancilla) {
  const unsigned m = register_size(cert);
  const StateVector phi = pad_qubits(cert.phi, m);
  Decorrelation dec = decorrelate(phi, pad_qubits(cert.eta, m));
  GarbageSelection sel = select_garbage_basis(phi, dec.eta);
  if (ancilla == AncillaPrep::kRebalanced &&
      rebalanced_probability(phi, dec.eta, sel.index) < kMinPostselectProbability) {
    sel = select_garbage_basis(phi, dec.eta, GarbageRule::kRebalancedProbability);
  }

  std::vector<Amplitude> anc(2);
  if (ancilla == AncillaPrep::kRebalanced) {
    const double norm = std::sqrt(1.0 + sel.ratio * sel.ratio);
    anc[0] = std::polar(sel.ratio, sel.phase) / norm;
    anc[1] = 1.0 / norm;
  } else {
    anc[0] = anc[1] = 1.0 / std::sqrt(2.0);
  }
  StateVector joint = tensor_product(tensor_product(StateVector(std::move(anc)), phi), dec.eta);
  const unsigned n = joint.n_qubits();
  for (unsigned i = 0; i < m; ++i) kernels::cswap(joint.amplitudes(), n, 0, 1 + i, 1 + m + i);

  std::vector<unsigned> second(m);
  for (unsigned i = 0; i < m; ++i) second[i] = 1 + m + i;
  MeasurementOutcome out = measure_subsystem(joint, second, Postselect{sel.index});

  CompactState c;
  c.state = std::move(out.post_state);
  c.partition = cert.partition;
  c.garbage = sel;
  c.decorrelation = std::move(dec.record);
  c.postselect_probability = out.probability;
  c.ancilla = ancilla;
  return c;
}

StateVector ideal_compact_state(const ProductCertificate& cert, const DecorrelationRecord& decorrelation) {
  const unsigned m = register_size(cert);
  std::vector<Amplitude> amps(std::size_t{2} << m);
  const StateVector phi = pad_qubits(cert.phi, m);
  StateVector eta = pad_qubits(cert.eta, m);
  for (unsigned q : decorrelation.rotated_qubits) kernels::ry(eta.amplitudes(), m, q, decorrelation.angle);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < phi.dim(); ++i) {
    amps[i] = r * phi[i];
    amps[phi.dim() + i] = r * eta[i];
  }
  return StateVector(std::move(amps));
}

StateVector decompress_product(const CompactState& compact) {
  const auto& part = compact.partition;
  const unsigned m = compact.register_qubits();
  const auto n_a = static_cast<unsigned>(part.subsystem_a.size());
  const auto n_b = static_cast<unsigned>(part.subsystem_b.size());
  if (std::max(n_a, n_b) != m) throw Error(ErrorCode::kCorruptCompactState, "register size does not match partition");

  // Each ancilla projection consumes one copy of the compact state.
  const std::vector<unsigned> ancilla{0};
  StateVector phi, eta;
  try {
    phi = measure_subsystem(compact.state, ancilla, Postselect{0}).post_state;
    eta = measure_subsystem(compact.state, ancilla, Postselect{1}).post_state;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kImpossibleOutcome) throw;
    throw Error(ErrorCode::kCorruptCompactState, "an ancilla branch carries no weight");
  }
  eta = undo_decorrelation(compact.decorrelation, std::move(eta));
  phi = unpad_qubits(phi, n_a);
  eta = unpad_qubits(eta, n_b);

  const StateVector prod = tensor_product(phi, eta);
  const auto table = bipartite_index_table(part);
  std::vector<Amplitude> amps(prod.dim());
  for (std::size_t k = 0; k < prod.dim(); ++k) amps[table[k]] = prod[k];
  return StateVector(std::move(amps));
}

StateVector decompress(const CompactState& compact, const LayeredAnsatz& a, const ParamVector& params) {
  return apply_adjoint(a, params, decompress_product(compact));
}

namespace {

nlohmann::ordered_json amps_json(const StateVector& s) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) arr.push_back({s[i].real(), s[i].imag()});
  return arr;
}

StateVector amps_from_json(const nlohmann::json& j) {
  std::vector<Amplitude> amps;
  for (const auto& e : j) amps.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return StateVector(std::move(amps));
}

}  // namespace

void write_compact_archive(std::ostream& out, const std::vector<CompactRecord>& records) {
  for (const auto& r : records) {
    const auto& c = r.compact;
    nlohmann::ordered_json j;
    j["sample"] = r.sample_index;
    j["label"] = r.label;
    j["n_qubits"] = c.state.n_qubits();
    j["amplitudes"] = amps_json(c.state);
    j["subsystem_a"] = c.partition.subsystem_a;
    j["subsystem_b"] = c.partition.subsystem_b;
    j["garbage_index"] = c.garbage.index;
    j["garbage_rule"] = c.garbage.rule == GarbageRule::kPlusProbability ? "plus_probability" : "rebalanced_probability";
    j["ratio"] = c.garbage.ratio;
    j["phase"] = c.garbage.phase;
    j["plus_probability"] = c.garbage.plus_probability;
    j["postselect_probability"] = c.postselect_probability;
    j["ancilla"] = c.ancilla == AncillaPrep::kRebalanced ? "rebalanced" : "plus";
    j["decorrelation"] = {{"qubits", c.decorrelation.rotated_qubits}, {"angle", c.decorrelation.angle}};
    j["stage1_residual"] = r.stage1_residual;
    j["stage1_checkpoint"] = r.stage1_checkpoint;
    out << j.dump() << '\n';
  }
}

std::vector<CompactRecord> read_compact_archive(std::istream& in) {
  std::vector<CompactRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CompactRecord r;
      r.sample_index = j.at("sample").get<std::size_t>();
      r.label = j.at("label").get<int>();
      auto& c = r.compact;
      c.state = amps_from_json(j.at("amplitudes"));
      if (c.state.n_qubits() != j.at("n_qubits").get<unsigned>()) {
        throw Error(ErrorCode::kParse, "amplitude count disagrees with n_qubits");
      }
      c.partition.subsystem_a = j.at("subsystem_a").get<std::vector<unsigned>>();
      c.partition.subsystem_b = j.at("subsystem_b").get<std::vector<unsigned>>();
      c.partition.validate(c.partition.n_qubits());
      c.garbage.index = j.at("garbage_index").get<std::uint64_t>();
      const auto rule = j.at("garbage_rule").get<std::string>();
      if (rule != "plus_probability" && rule != "rebalanced_probability") {
        throw Error(ErrorCode::kParse, "unknown garbage rule");
      }
      c.garbage.rule = rule == "plus_probability" ? GarbageRule::kPlusProbability : GarbageRule::kRebalancedProbability;
      c.garbage.ratio = j.at("ratio").get<double>();
      c.garbage.phase = j.at("phase").get<double>();
      c.garbage.plus_probability = j.at("plus_probability").get<double>();
      c.postselect_probability = j.at("postselect_probability").get<double>();
      const auto anc = j.at("ancilla").get<std::string>();
      if (anc != "rebalanced" && anc != "plus") throw Error(ErrorCode::kParse, "unknown ancilla preparation");
      c.ancilla = anc == "plus" ? AncillaPrep::kPlus : AncillaPrep::kRebalanced;
      c.decorrelation.rotated_qubits = j.at("decorrelation").at("qubits").get<std::vector<unsigned>>();
      c.decorrelation.angle = j.at("decorrelation").at("angle").get<double>();
      r.stage1_residual = j.at("stage1_residual").get<double>();
      r.stage1_checkpoint = j.at("stage1_checkpoint").get<std::string>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "compact archive line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace subpure
