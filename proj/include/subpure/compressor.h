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

#ifndef SUBPURE_COMPRESSOR_H_
#define SUBPURE_COMPRESSOR_H_

// Stage 2: fold a product state |phi>|eta> into the (m + 1)-qubit state
// (|0>|phi> + |1>|eta>)/sqrt(2), m = max(n_A, n_B), and undo it.
//
// The circuit prepares an ancilla, swaps the two registers conditioned on it
// (one CSWAP per qubit pair), then post-selects the second register on a
// computational basis state g. With the ancilla prepared as
// (c e^{i alpha}|0> + |1>)/sqrt(1 + c^2), c e^{i alpha} = <g|phi>/<g|eta>,
// both branches come out with equal weight. The post-selection is simulated
// exactly; its success probability is recorded instead of amplified.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subpure/ansatz.h"
#include "subpure/state.h"

namespace subpure {

struct ProductCertificate {
  StateVector phi;  // subsystem A factor
  StateVector eta;  // subsystem B factor
  QubitPartition partition;
  double residual = 0.0;          // 2 - (Tr rho_A^2 + Tr rho_B^2)
  double schmidt_fidelity = 0.0;  // |<phi (x) eta|psi>|^2 = largest Schmidt weight
};

/// Dominant Schmidt pair of `state`. The pair's phase is fixed so that the
/// largest-magnitude entry of phi (first in basis order on ties) is real and
/// positive. Throws kNotProduct when the residual exceeds `tolerance`.
ProductCertificate split_subsystems(const StateVector& state, const QubitPartition& partition, double tolerance);

/// Which post-selection probability the garbage index maximizes: the one seen
/// with a |+> ancilla, or the one of the rebalanced ancilla compress() uses,
/// 2 |<g|phi>|^2 |<g|eta>|^2 / (|<g|phi>|^2 + |<g|eta>|^2).
enum class GarbageRule { kPlusProbability, kRebalancedProbability };

struct GarbageSelection {
  std::uint64_t index = 0;
  GarbageRule rule = GarbageRule::kPlusProbability;
  double ratio = 1.0;  // c = |<g|phi> / <g|eta>|
  double phase = 0.0;  // alpha = arg(<g|phi> / <g|eta>)
  /// Success probability with a |+> ancilla: (|<g|eta>|^2 + |<g|phi>|^2) / 2.
  double plus_probability = 0.0;
};

inline constexpr double kOverlapFloor = 1e-10;
inline constexpr double kMinPostselectProbability = 1e-12;

/// Picks the basis state with the largest post-selection probability under
/// `rule` among those where both |<g|phi>| and |<g|eta>| exceed
/// kOverlapFloor. Throws kOrthogonalSupports when there is none.
GarbageSelection select_garbage_basis(const StateVector& phi, const StateVector& eta,
                                      GarbageRule rule = GarbageRule::kPlusProbability);

/// Success probability of the rebalanced preparation for a selection.
double rebalanced_probability(const StateVector& phi, const StateVector& eta, std::uint64_t g);

/// Ancilla-controlled Ry rotations applied to the |1> branch register, in order.
struct DecorrelationRecord {
  std::vector<unsigned> rotated_qubits;
  double angle = 0.0;

  bool is_identity() const { return rotated_qubits.empty(); }
  friend bool operator==(const DecorrelationRecord&, const DecorrelationRecord&) = default;
};

struct Decorrelation {
  DecorrelationRecord record;
  StateVector eta;
};

/// Identity when phi and eta already share support. Otherwise rotates the
/// qubits of eta by Ry(pi/4), one after another in ascending order, until the
/// supports overlap.
Decorrelation decorrelate(const StateVector& phi, const StateVector& eta);
StateVector undo_decorrelation(const DecorrelationRecord& record, StateVector eta);

enum class AncillaPrep { kRebalanced, kPlus };

struct CompactState {
  StateVector state;  // qubit 0 is the index ancilla
  QubitPartition partition;
  GarbageSelection garbage;
  DecorrelationRecord decorrelation;
  double postselect_probability = 0.0;
  AncillaPrep ancilla = AncillaPrep::kRebalanced;

  unsigned register_qubits() const { return state.n_qubits() - 1; }
};

/// Zero-pads `s` with trailing |0> qubits up to `n_qubits`.
StateVector pad_qubits(const StateVector& s, unsigned n_qubits);

/// The garbage index follows the |+> rule. With the rebalanced ancilla, an index
/// whose success probability would fall below kMinPostselectProbability is
/// replaced by the rebalanced-rule choice.
CompactState compress(const ProductCertificate& cert, AncillaPrep ancilla = AncillaPrep::kRebalanced);

/// (|0>|phi> + |1>|eta>)/sqrt(2) for a certificate, padded like compress(),
/// with `decorrelation` applied to the eta branch.
StateVector ideal_compact_state(const ProductCertificate& cert, const DecorrelationRecord& decorrelation = {});

/// Recovers phi (x) eta in the original qubit order of the partition.
StateVector decompress_product(const CompactState& compact);

/// decompress_product followed by U(theta)^dagger.
StateVector decompress(const CompactState& compact, const LayeredAnsatz& a, const ParamVector& params);

/// One compact-state archive line: the state plus provenance.
struct CompactRecord {
  std::size_t sample_index = 0;
  int label = 0;
  CompactState compact;
  double stage1_residual = 0.0;
  std::string stage1_checkpoint;  // path or identifier of the encoder checkpoint
};

void write_compact_archive(std::ostream& out, const std::vector<CompactRecord>& records);
std::vector<CompactRecord> read_compact_archive(std::istream& in);

}  // namespace subpure

#endif  // SUBPURE_COMPRESSOR_H_
