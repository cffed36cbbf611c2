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

#ifndef SUBPURE_ENCODER_H_
#define SUBPURE_ENCODER_H_

// Stage 1: train a shared layered circuit U(theta) so that every dataset state
// leaves it as a product across the A|B cut, by maximizing the averaged
// subsystem purity sum C(theta) = < Tr(rho_A^2) + Tr(rho_B^2) >, whose maximum
// is 2.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subpure/ansatz.h"
#include "subpure/bas.h"
#include "subpure/state.h"
#include "subpure/trace.h"

namespace subpure {

struct Stage1Config {
  unsigned depth = 3;
  double learning_rate = 0.05;
  std::size_t max_iters = 500;
  double convergence_tol = 1e-3;  // on 2 - C
  std::optional<std::size_t> minibatch_size;  // full batch when unset
  std::uint64_t minibatch_seed = 0;
  std::uint64_t seed = 0;  // parameter initialization
  std::optional<QubitPartition> partition;  // equal halves when unset
  std::optional<ParamVector> initial_params;

  void validate() const;
};

struct Stage1Result {
  LayeredAnsatz ansatz;
  QubitPartition partition;
  ParamVector params;
  TrainTrace trace;
  bool converged = false;
};

std::vector<StateVector> dataset_states(const std::vector<BasSample>& samples);

/// Tr(rho_A^2) + Tr(rho_B^2) of one (output) state.
double purity_sum(const StateVector& state, const QubitPartition& partition);

double purity_cost(const LayeredAnsatz& a, const ParamVector& params, std::span<const StateVector> dataset,
                   const QubitPartition& partition);

struct CostGradient {
  double cost = 0.0;
  std::vector<double> gradient;
};

/// Exact cost and analytic gradient (adjoint sweep per sample), averaged over
/// `dataset` in index order.
CostGradient purity_cost_gradient(const LayeredAnsatz& a, const ParamVector& params,
                                  std::span<const StateVector> dataset, const QubitPartition& partition);

/// Same gradient via the two-copy parameter-shift rule.
std::vector<double> purity_shift_gradient(const LayeredAnsatz& a, const ParamVector& params,
                                          std::span<const StateVector> dataset, const QubitPartition& partition);

/// Mean von Neumann entropy of the kept subsystem after U(theta). Diagnostic only.
double entropy_cost(const LayeredAnsatz& a, const ParamVector& params, std::span<const StateVector> dataset,
                    const QubitPartition& partition, Subsystem keep);

/// Gradient ascent on C. Stops after max_iters or once 2 - C < convergence_tol.
/// Throws TrainingDivergence on a non-finite cost.
Stage1Result train_stage1(std::span<const StateVector> dataset, const Stage1Config& config);

/// Cost-circuit evaluations one parameter-shift iteration needs:
/// N * (2 * parameter_count + 1).
std::size_t shift_evaluations_per_iteration(std::size_t samples, const LayeredAnsatz& a);

}  // namespace subpure

#endif  // SUBPURE_ENCODER_H_
