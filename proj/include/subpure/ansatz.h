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

#ifndef SUBPURE_ANSATZ_H_
#define SUBPURE_ANSATZ_H_

#include <array>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "subpure/state.h"

namespace subpure {

/// Trainable rotation angles in radians.
struct ParamVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  /// Uniform in [-pi, pi].
  static ParamVector random(std::size_t count, std::uint64_t seed);
  static ParamVector zeros(std::size_t count) { return ParamVector{std::vector<double>(count, 0.0)}; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

/// `depth` repetitions of [one Ry per qubit; CNOT(i, i+1) for i ascending].
/// Angle of the Ry on qubit q in layer d is params[d * n_qubits + q].
struct LayeredAnsatz {
  unsigned n_qubits = 0;
  unsigned depth = 0;

  std::size_t parameter_count() const { return std::size_t{n_qubits} * depth; }
  /// The entangler of one layer as ordered (control, target) pairs.
  std::vector<std::pair<unsigned, unsigned>> ladder() const;

  friend bool operator==(const LayeredAnsatz&, const LayeredAnsatz&) = default;
};

/// |0><0| (x) V0 + |1><1| (x) V1 with V0, V1 layered ansaetze acting on every
/// qubit except `index_qubit` (in ascending order). Parameters are the
/// concatenation [block0 params, block1 params].
struct BlockDiagonalAnsatz {
  unsigned index_qubit = 0;
  LayeredAnsatz block0;
  LayeredAnsatz block1;

  unsigned n_qubits() const { return block0.n_qubits + 1; }
  std::size_t parameter_count() const { return block0.parameter_count() + block1.parameter_count(); }
  void validate() const;

  friend bool operator==(const BlockDiagonalAnsatz&, const BlockDiagonalAnsatz&) = default;
};

StateVector apply_ansatz(const LayeredAnsatz& a, const ParamVector& params, StateVector state);
StateVector apply_adjoint(const LayeredAnsatz& a, const ParamVector& params, StateVector state);

StateVector apply_block_diagonal(const BlockDiagonalAnsatz& b, const ParamVector& params0,
                                 const ParamVector& params1, StateVector state);

/// d/dtheta_k of Re<g|U(theta)|psi_in>, i.e. the gradient of any real cost C
/// whose output-space gradient is g = 2 dC/d(psi_out*). `output` must be
/// U(theta)|psi_in>. One backward sweep (adjoint differentiation); the input
/// vectors need not be normalized.
std::vector<double> backpropagate(const LayeredAnsatz& a, const ParamVector& params,
                                  std::span<const Amplitude> output, std::span<const Amplitude> output_grad);

/// Block-diagonal counterpart of the above; `params` is the concatenation
/// [params0, params1] and the result is laid out the same way.
std::vector<double> backpropagate(const BlockDiagonalAnsatz& b, const ParamVector& params,
                                  std::span<const Amplitude> output, std::span<const Amplitude> output_grad);

/// Splits a register into its index-qubit |0> and |1> branches (unnormalized,
/// remaining qubits in ascending order), and the inverse.
std::array<std::vector<Amplitude>, 2> split_branches(std::span<const Amplitude> amps, unsigned n_qubits,
                                                     unsigned index_qubit);
std::vector<Amplitude> join_branches(const std::array<std::vector<Amplitude>, 2>& branches,
                                     unsigned index_qubit);

/// Splits concatenated block-diagonal parameters.
std::pair<ParamVector, ParamVector> split_block_params(const BlockDiagonalAnsatz& b, const ParamVector& params);

using ScalarCost = std::function<double(const ParamVector&)>;

/// Two-term shift rule [C(theta_k + pi/2) - C(theta_k - pi/2)] / 2 per
/// component. Exact when C is an expectation value of a circuit in which each
/// angle drives exactly one Ry gate.
std::vector<double> parameter_shift_gradient(const ScalarCost& cost, const ParamVector& params);

/// Shift rule for costs bilinear in two circuit copies, C(theta) = F(theta, theta)
/// (swap-test style costs such as purity). Each copy is shifted on its own
/// and the two contributions are summed.
using TwoCopyCost = std::function<double(const ParamVector&, const ParamVector&)>;
std::vector<double> parameter_shift_gradient(const TwoCopyCost& cost, const ParamVector& params);

/// Central differences with step h.
std::vector<double> finite_difference_gradient(const ScalarCost& cost, const ParamVector& params,
                                               double h = 1e-5);

// Checkpoints.
using AnyAnsatz = std::variant<LayeredAnsatz, BlockDiagonalAnsatz>;
std::size_t parameter_count(const AnyAnsatz& a);
unsigned ansatz_qubits(const AnyAnsatz& a);

nlohmann::ordered_json checkpoint_to_json(const AnyAnsatz& a, const ParamVector& params);
/// Throws kParse on malformed input and kParameter on a shape mismatch.
std::pair<AnyAnsatz, ParamVector> checkpoint_from_json(const nlohmann::json& j);

}  // namespace subpure

#endif  // SUBPURE_ANSATZ_H_
