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

#ifndef SUBPURE_STATE_H_
#define SUBPURE_STATE_H_

// Dense statevector engine.
//
// Ordering convention used everywhere in the library: qubit 0 is the most
// significant bit of the basis index, so for n qubits the bit belonging to
// qubit q of basis index i is (i >> (n - 1 - q)) & 1.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace subpure {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;

/// Bit shift of qubit `q` inside an `n_qubits` register.
constexpr unsigned qubit_shift(unsigned n_qubits, unsigned q) { return n_qubits - 1 - q; }

class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(unsigned n_qubits);
  /// Takes ownership of `amplitudes`; the length must be a power of two.
  /// No normalization is performed.
  explicit StateVector(std::vector<Amplitude> amplitudes);

  static StateVector basis(unsigned n_qubits, std::uint64_t index);
  /// Normalizes `amplitudes` (throws kValidity for a zero vector).
  static StateVector normalized(std::vector<Amplitude> amplitudes);
  /// Haar-like random state: i.i.d. complex Gaussians, normalized.
  static StateVector random(unsigned n_qubits, std::mt19937_64& rng);
  static StateVector random_real(unsigned n_qubits, std::mt19937_64& rng);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  /// Throws kValidity if |norm - 1| exceeds `tol`.
  void check_normalized(double tol = kNormTolerance) const;

 private:
  unsigned n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

/// |a> (x) |b>, with `a` occupying the low-indexed (most significant) qubits.
StateVector tensor_product(const StateVector& a, const StateVector& b);

class DensityMatrix {
 public:
  DensityMatrix(unsigned n_qubits, Eigen::MatrixXcd entries);

  static DensityMatrix pure(const StateVector& state);
  static DensityMatrix maximally_mixed(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  /// Throws kValidity when the matrix is not Hermitian, not unit trace, or
  /// has an eigenvalue below -`tol`.
  void validate(double tol = 1e-10) const;

 private:
  unsigned n_qubits_;
  Eigen::MatrixXcd entries_;
};

enum class Subsystem { kA, kB };

/// Ordered qubit lists of a bipartition. Within each list the first entry is
/// the most significant bit of the subsystem's own basis index.
struct QubitPartition {
  std::vector<unsigned> subsystem_a;
  std::vector<unsigned> subsystem_b;

  /// A = qubits [0, n_a), B = [n_a, n_qubits).
  static QubitPartition contiguous(unsigned n_qubits, unsigned n_a);
  /// Equal halves; throws kConfiguration for odd n.
  static QubitPartition halves(unsigned n_qubits);

  unsigned n_qubits() const {
    return static_cast<unsigned>(subsystem_a.size() + subsystem_b.size());
  }
  const std::vector<unsigned>& qubits(Subsystem s) const {
    return s == Subsystem::kA ? subsystem_a : subsystem_b;
  }
  /// Throws kIndex when the lists overlap or do not cover 0..n_qubits-1.
  void validate(unsigned n_qubits) const;
};

/// Full-register basis index for every (a, b) pair, laid out row-major as
/// table[a * 2^|B| + b]. Lets callers view a state as a 2^|A| x 2^|B| matrix.
std::vector<std::size_t> bipartite_index_table(const QubitPartition& partition);

/// The state reshaped as the 2^|A| x 2^|B| coefficient matrix M with
/// psi = sum_ab M_ab |a>|b>.
Eigen::MatrixXcd coefficient_matrix(const StateVector& state, const QubitPartition& partition);

struct MeasurementOutcome {
  std::uint64_t basis_index = 0;
  double probability = 0.0;
  StateVector post_state;
};

struct Sampled {
  std::uint64_t seed = 0;
};
struct Postselect {
  std::uint64_t basis_index = 0;
};
using MeasurementMode = std::variant<Sampled, Postselect>;

// Gates. Each returns a new state; indices are validated.
StateVector apply_ry(StateVector state, unsigned qubit, double angle);
StateVector apply_cnot(StateVector state, unsigned control, unsigned target);
StateVector apply_cswap(StateVector state, unsigned control, unsigned target_a, unsigned target_b);
StateVector apply_h(StateVector state, unsigned qubit);

DensityMatrix partial_trace(const StateVector& state, const QubitPartition& partition, Subsystem keep);

double purity(const DensityMatrix& rho);

/// S = -Tr(rho ln rho) in nats. Eigenvalues in [-1e-10, 1e-12) contribute zero;
/// anything more negative raises kValidity.
double von_neumann_entropy(const DensityMatrix& rho);

/// Measures `qubits` in the computational basis. The outcome index uses the
/// order of `qubits` (first listed = most significant). Measured qubits are
/// removed; the remaining qubits keep their relative order.
MeasurementOutcome measure_subsystem(const StateVector& state, std::span<const unsigned> qubits,
                                     MeasurementMode mode);
MeasurementOutcome measure_subsystem(const StateVector& state, std::span<const unsigned> qubits,
                                     std::mt19937_64& rng);

/// Outcome distribution of measuring `qubits` (same index convention as above).
std::vector<double> outcome_probabilities(const StateVector& state, std::span<const unsigned> qubits);

/// <a|b>, conjugate-linear in `a`.
Amplitude inner_product(const StateVector& a, const StateVector& b);
double fidelity_pure(const StateVector& a, const StateVector& b);

namespace kernels {

// Unchecked in-place kernels over raw amplitude buffers; the validated
// wrappers above and the ansatz code are built on these.
void ry(std::span<Amplitude> amps, unsigned n_qubits, unsigned q, double angle);
void cnot(std::span<Amplitude> amps, unsigned n_qubits, unsigned control, unsigned target);
void cswap(std::span<Amplitude> amps, unsigned n_qubits, unsigned control, unsigned a, unsigned b);
void hadamard(std::span<Amplitude> amps, unsigned n_qubits, unsigned q);

/// Applies the generator -iY/2 of Ry to qubit q and returns Re<lambda|(-iY/2)|psi>
/// without materializing the rotated vector.
double ry_generator_overlap(std::span<const Amplitude> lambda, std::span<const Amplitude> psi,
                            unsigned n_qubits, unsigned q);

}  // namespace kernels

}  // namespace subpure

#endif  // SUBPURE_STATE_H_
