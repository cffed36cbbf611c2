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

#include "subpure/state.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "subpure/error.h"

namespace subpure {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kInvalidGate: return "invalid gate";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kImpossibleOutcome: return "impossible outcome";
    case ErrorCode::kValidity: return "validity error";
    case ErrorCode::kConfiguration: return "configuration error";
    case ErrorCode::kEncoding: return "encoding error";
    case ErrorCode::kSampling: return "sampling error";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kTrainingDivergence: return "training divergence";
    case ErrorCode::kNotProduct: return "not a product state";
    case ErrorCode::kOrthogonalSupports: return "orthogonal supports";
    case ErrorCode::kCorruptCompactState: return "corrupt compact state";
    case ErrorCode::kDegenerateBranch: return "degenerate branch";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "io error";
  }
  return "error";
}

namespace {

void check_qubit(const StateVector& s, unsigned q) {
  if (q >= s.n_qubits()) {
    throw Error(ErrorCode::kIndex, "qubit " + std::to_string(q) + " out of range for " +
                                       std::to_string(s.n_qubits()) + "-qubit state");
  }
}

}  // namespace

StateVector::StateVector(unsigned n_qubits) : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits) {
  amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty() || !std::has_single_bit(amps_.size())) {
    throw Error(ErrorCode::kDimension,
                "amplitude count " + std::to_string(amps_.size()) + " is not a power of two");
  }
  n_qubits_ = static_cast<unsigned>(std::countr_zero(amps_.size()));
}

StateVector StateVector::basis(unsigned n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw Error(ErrorCode::kIndex, "basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::normalized(std::vector<Amplitude> amplitudes) {
  StateVector s(std::move(amplitudes));
  const double n = s.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::kValidity, "cannot normalize a zero vector");
  for (auto& a : s.amps_) a /= n;
  return s;
}

StateVector StateVector::random(unsigned n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    a = {re, im};
  }
  return normalized(std::move(amps));
}

StateVector StateVector::random_real(unsigned n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) a = gauss(rng);
  return normalized(std::move(amps));
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol) throw Error(ErrorCode::kValidity, "state is not normalized");
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  std::vector<Amplitude> out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  }
  return StateVector(std::move(out));
}

DensityMatrix::DensityMatrix(unsigned n_qubits, Eigen::MatrixXcd entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw Error(ErrorCode::kDimension, "density matrix shape does not match qubit count");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
  return DensityMatrix(state.n_qubits(), v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(unsigned n_qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return DensityMatrix(n_qubits, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

void DensityMatrix::validate(double tol) const {
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::kValidity, "density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Amplitude(1.0)) > tol) {
    throw Error(ErrorCode::kValidity, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorCode::kValidity, "density matrix has a negative eigenvalue");
  }
}

QubitPartition QubitPartition::contiguous(unsigned n_qubits, unsigned n_a) {
  if (n_a > n_qubits) throw Error(ErrorCode::kConfiguration, "subsystem A larger than register");
  QubitPartition p;
  for (unsigned q = 0; q < n_qubits; ++q) (q < n_a ? p.subsystem_a : p.subsystem_b).push_back(q);
  return p;
}

QubitPartition QubitPartition::halves(unsigned n_qubits) {
  if (n_qubits % 2 != 0) {
    throw Error(ErrorCode::kConfiguration, "equal bipartition needs an even qubit count");
  }
  return contiguous(n_qubits, n_qubits / 2);
}

void QubitPartition::validate(unsigned n) const {
  std::vector<bool> seen(n, false);
  for (const auto* list : {&subsystem_a, &subsystem_b}) {
    for (unsigned q : *list) {
      if (q >= n) throw Error(ErrorCode::kIndex, "partition qubit out of range");
      if (seen[q]) throw Error(ErrorCode::kIndex, "partition subsystems overlap");
      seen[q] = true;
    }
  }
  if (n_qubits() != n) throw Error(ErrorCode::kIndex, "partition does not cover the register");
}

namespace {

// Full-register index for each assignment of `qubits`, sub-index order
// following the list (first listed = MSB).
std::vector<std::size_t> scatter_table(const std::vector<unsigned>& qubits, unsigned n_qubits) {
  const std::size_t count = std::size_t{1} << qubits.size();
  std::vector<std::size_t> table(count, 0);
  const auto k = static_cast<unsigned>(qubits.size());
  for (std::size_t sub = 0; sub < count; ++sub) {
    std::size_t full = 0;
    for (unsigned j = 0; j < k; ++j) {
      if ((sub >> (k - 1 - j)) & 1) full |= std::size_t{1} << qubit_shift(n_qubits, qubits[j]);
    }
    table[sub] = full;
  }
  return table;
}

}  // namespace

std::vector<std::size_t> bipartite_index_table(const QubitPartition& partition) {
  const unsigned n = partition.n_qubits();
  const auto ta = scatter_table(partition.subsystem_a, n);
  const auto tb = scatter_table(partition.subsystem_b, n);
  std::vector<std::size_t> table(ta.size() * tb.size());
  for (std::size_t a = 0; a < ta.size(); ++a) {
    for (std::size_t b = 0; b < tb.size(); ++b) table[a * tb.size() + b] = ta[a] | tb[b];
  }
  return table;
}

Eigen::MatrixXcd coefficient_matrix(const StateVector& state, const QubitPartition& partition) {
  partition.validate(state.n_qubits());
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << partition.subsystem_a.size());
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << partition.subsystem_b.size());
  const auto table = bipartite_index_table(partition);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = state[table[static_cast<std::size_t>(a * cols + b)]];
  }
  return m;
}

namespace kernels {

void ry(std::span<Amplitude> amps, unsigned n_qubits, unsigned q, double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const std::size_t bit = std::size_t{1} << qubit_shift(n_qubits, q);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | bit];
    amps[i] = c * a0 - s * a1;
    amps[i | bit] = s * a0 + c * a1;
  }
}

void cnot(std::span<Amplitude> amps, unsigned n_qubits, unsigned control, unsigned target) {
  const std::size_t cbit = std::size_t{1} << qubit_shift(n_qubits, control);
  const std::size_t tbit = std::size_t{1} << qubit_shift(n_qubits, target);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

void cswap(std::span<Amplitude> amps, unsigned n_qubits, unsigned control, unsigned a, unsigned b) {
  const std::size_t cbit = std::size_t{1} << qubit_shift(n_qubits, control);
  const std::size_t abit = std::size_t{1} << qubit_shift(n_qubits, a);
  const std::size_t bbit = std::size_t{1} << qubit_shift(n_qubits, b);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    // Visit each |..1_a..0_b..> once and exchange with |..0_a..1_b..>.
    if ((i & cbit) && (i & abit) && !(i & bbit)) std::swap(amps[i], amps[(i & ~abit) | bbit]);
  }
}

void hadamard(std::span<Amplitude> amps, unsigned n_qubits, unsigned q) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::size_t bit = std::size_t{1} << qubit_shift(n_qubits, q);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | bit];
    amps[i] = r * (a0 + a1);
    amps[i | bit] = r * (a0 - a1);
  }
}

double ry_generator_overlap(std::span<const Amplitude> lambda, std::span<const Amplitude> psi,
                            unsigned n_qubits, unsigned q) {
  // (-iY/2) maps (a0, a1) -> (-a1/2, a0/2).
  const std::size_t bit = std::size_t{1} << qubit_shift(n_qubits, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const std::size_t j = i | bit;
    acc += (std::conj(lambda[j]) * psi[i]).real() - (std::conj(lambda[i]) * psi[j]).real();
  }
  return 0.5 * acc;
}

}  // namespace kernels

StateVector apply_ry(StateVector state, unsigned qubit, double angle) {
  check_qubit(state, qubit);
  kernels::ry(state.amplitudes(), state.n_qubits(), qubit, angle);
  return state;
}

StateVector apply_cnot(StateVector state, unsigned control, unsigned target) {
  check_qubit(state, control);
  check_qubit(state, target);
  if (control == target) throw Error(ErrorCode::kInvalidGate, "CNOT control equals target");
  kernels::cnot(state.amplitudes(), state.n_qubits(), control, target);
  return state;
}

StateVector apply_cswap(StateVector state, unsigned control, unsigned target_a, unsigned target_b) {
  check_qubit(state, control);
  check_qubit(state, target_a);
  check_qubit(state, target_b);
  if (control == target_a || control == target_b || target_a == target_b) {
    throw Error(ErrorCode::kInvalidGate, "CSWAP indices must be distinct");
  }
  kernels::cswap(state.amplitudes(), state.n_qubits(), control, target_a, target_b);
  return state;
}

StateVector apply_h(StateVector state, unsigned qubit) {
  check_qubit(state, qubit);
  kernels::hadamard(state.amplitudes(), state.n_qubits(), qubit);
  return state;
}

DensityMatrix partial_trace(const StateVector& state, const QubitPartition& partition, Subsystem keep) {
  Eigen::MatrixXcd m = coefficient_matrix(state, partition);
  const auto kept = static_cast<unsigned>(partition.qubits(keep).size());
  // rho_A = M M^dagger, rho_B = (M^T)(M^T)^dagger; written out as the
  // index summation over the traced register.
  if (keep == Subsystem::kB) m.transposeInPlace();
  const Eigen::Index dim = m.rows();
  Eigen::MatrixXcd rho(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      Amplitude acc = 0.0;
      for (Eigen::Index t = 0; t < m.cols(); ++t) acc += m(i, t) * std::conj(m(j, t));
      rho(i, j) = acc;
      rho(j, i) = std::conj(acc);
    }
  }
  return DensityMatrix(kept, std::move(rho));
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.entries().cwiseAbs2().sum();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()[k];
    if (lambda < -1e-10) throw Error(ErrorCode::kValidity, "negative eigenvalue in entropy");
    if (lambda < 1e-12) continue;
    s -= lambda * std::log(lambda);
  }
  return std::max(s, 0.0);
}

namespace {

struct MeasureLayout {
  std::vector<std::size_t> measured;   // full index for each outcome
  std::vector<std::size_t> remaining;  // full index for each remaining sub-index
  std::vector<unsigned> rest_qubits;
};

MeasureLayout measure_layout(const StateVector& state, std::span<const unsigned> qubits) {
  const unsigned n = state.n_qubits();
  std::vector<bool> is_measured(n, false);
  for (unsigned q : qubits) {
    check_qubit(state, q);
    if (is_measured[q]) throw Error(ErrorCode::kIndex, "qubit listed twice for measurement");
    is_measured[q] = true;
  }
  MeasureLayout layout;
  for (unsigned q = 0; q < n; ++q) {
    if (!is_measured[q]) layout.rest_qubits.push_back(q);
  }
  layout.measured = scatter_table(std::vector<unsigned>(qubits.begin(), qubits.end()), n);
  layout.remaining = scatter_table(layout.rest_qubits, n);
  return layout;
}

MeasurementOutcome collapse(const StateVector& state, const MeasureLayout& layout, std::uint64_t outcome) {
  const std::size_t offset = layout.measured[outcome];
  std::vector<Amplitude> rest(layout.remaining.size());
  double mass = 0.0;
  for (std::size_t r = 0; r < rest.size(); ++r) {
    rest[r] = state[offset | layout.remaining[r]];
    mass += std::norm(rest[r]);
  }
  if (mass <= 1e-12) {
    throw Error(ErrorCode::kImpossibleOutcome,
                "outcome " + std::to_string(outcome) + " has probability " + std::to_string(mass));
  }
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& a : rest) a *= scale;
  return MeasurementOutcome{outcome, mass, StateVector(std::move(rest))};
}

}  // namespace

std::vector<double> outcome_probabilities(const StateVector& state, std::span<const unsigned> qubits) {
  const auto layout = measure_layout(state, qubits);
  std::vector<double> probs(layout.measured.size(), 0.0);
  for (std::size_t o = 0; o < probs.size(); ++o) {
    for (std::size_t r : layout.remaining) probs[o] += std::norm(state[layout.measured[o] | r]);
  }
  return probs;
}

MeasurementOutcome measure_subsystem(const StateVector& state, std::span<const unsigned> qubits,
                                     MeasurementMode mode) {
  if (const auto* post = std::get_if<Postselect>(&mode)) {
    const auto layout = measure_layout(state, qubits);
    if (post->basis_index >= layout.measured.size()) {
      throw Error(ErrorCode::kIndex, "postselected outcome out of range");
    }
    return collapse(state, layout, post->basis_index);
  }
  std::mt19937_64 rng(std::get<Sampled>(mode).seed);
  return measure_subsystem(state, qubits, rng);
}

MeasurementOutcome measure_subsystem(const StateVector& state, std::span<const unsigned> qubits,
                                     std::mt19937_64& rng) {
  const auto layout = measure_layout(state, qubits);
  const auto probs = outcome_probabilities(state, qubits);
  std::discrete_distribution<std::uint64_t> pick(probs.begin(), probs.end());
  return collapse(state, layout, pick(rng));
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw Error(ErrorCode::kDimension, "inner product of unequal registers");
  Amplitude acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity_pure(const StateVector& a, const StateVector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

}  // namespace subpure
