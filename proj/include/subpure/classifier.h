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

#ifndef SUBPURE_CLASSIFIER_H_
#define SUBPURE_CLASSIFIER_H_

// Variational classifier on compact states. The model output is <Z> on a
// readout qubit after V(theta); the label is its sign (0 counts as bars) and
// the training cost is sum_i (l_i - <Z>_i)^2.

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "subpure/ansatz.h"
#include "subpure/state.h"
#include "subpure/swap_test.h"
#include "subpure/trace.h"

namespace subpure {

struct LabeledState {
  StateVector state;
  int label = 0;  // +1 bars, -1 stripes
};

struct ClassifierConfig {
  AnyAnsatz ansatz;
  double learning_rate = 0.05;
  std::size_t max_iters = 100;
  unsigned readout_qubit = 1;
  std::uint64_t seed = 0;
  /// Block-diagonal only: rescale each input's index-register branches to equal
  /// weight before computing gradients.
  bool reweight = false;

  /// Layered V on `n_qubits`, readout on qubit 1 (first qubit after the ancilla).
  static ClassifierConfig generic(unsigned n_qubits, unsigned depth);
  /// Block-diagonal V with index qubit 0 and the readout on the last qubit.
  static ClassifierConfig block_diagonal(unsigned n_qubits, unsigned depth);

  void validate() const;
};

double z_expectation(const StateVector& state, const ParamVector& params, const AnyAnsatz& ansatz,
                     unsigned readout_qubit);

/// <psi|Z_q|psi> of a bare state.
double z_expectation(const StateVector& state, unsigned qubit);

double classification_cost(const ParamVector& params, std::span<const LabeledState> data,
                           const ClassifierConfig& config);

struct ClassifierGradient {
  double cost = 0.0;
  std::vector<double> gradient;  // of the summed cost
};

ClassifierGradient classification_cost_gradient(const ParamVector& params, std::span<const LabeledState> data,
                                                const ClassifierConfig& config);

/// Same gradient assembled from the parameter-shift rule on each <Z>_i.
std::vector<double> classification_shift_gradient(const ParamVector& params, std::span<const LabeledState> data,
                                                  const ClassifierConfig& config);

inline int label_from_expectation(double z) { return z >= 0.0 ? 1 : -1; }

int predict(const StateVector& state, const ParamVector& params, const ClassifierConfig& config);

struct BranchWeights {
  double w0 = 0.5;
  double w1 = 0.5;
};

/// Exact index-register branch probabilities.
BranchWeights estimate_branch_weights(const StateVector& state, unsigned index_qubit);
/// Shot estimate from measuring the index register `budget.shots` times.
BranchWeights estimate_branch_weights(const StateVector& state, unsigned index_qubit, const ShotBudget& budget);

/// Scales branch b by 1/sqrt(2 w_b); with exact weights both branches end up
/// with probability 1/2. Throws kDegenerateBranch for a weight below 1e-12.
StateVector reweight_branches(const StateVector& state, unsigned index_qubit, const BranchWeights& weights);

/// Gradient of (l - <Z>)^2 for one sample after branch reweighting.
std::vector<double> reweighted_gradient(const LabeledState& sample, const ParamVector& params,
                                        const ClassifierConfig& config, const BranchWeights& weights);

struct ClassifierResult {
  ParamVector params;
  TrainTrace trace;
};

/// Gradient descent on the summed cost with step lr * grad / N (N = training
/// set size). The trace records the summed cost. Throws TrainingDivergence.
ClassifierResult train_classifier(std::span<const LabeledState> train, const ClassifierConfig& config);

struct EvalReport {
  double accuracy = 0.0;
  double bars_accuracy = 0.0;
  double stripes_accuracy = 0.0;
  // Rows: true class, columns: predicted class.
  std::size_t bars_as_bars = 0;
  std::size_t bars_as_stripes = 0;
  std::size_t stripes_as_bars = 0;
  std::size_t stripes_as_stripes = 0;
  double cost = 0.0;

  std::size_t total() const { return bars_as_bars + bars_as_stripes + stripes_as_bars + stripes_as_stripes; }
};

EvalReport evaluate(const ParamVector& params, std::span<const LabeledState> data, const ClassifierConfig& config);

nlohmann::ordered_json report_to_json(const EvalReport& r);

}  // namespace subpure

#endif  // SUBPURE_CLASSIFIER_H_
