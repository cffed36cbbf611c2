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

#include "subpure/encoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "subpure/error.h"
#include "subpure/parallel.h"

namespace subpure {

void Stage1Config::validate() const {
  if (depth == 0) throw Error(ErrorCode::kConfiguration, "depth must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kConfiguration, "learning rate must be positive");
  }
  if (max_iters == 0) throw Error(ErrorCode::kConfiguration, "max_iters must be positive");
  if (!(convergence_tol >= 0.0)) throw Error(ErrorCode::kConfiguration, "convergence tolerance must be >= 0");
  if (minibatch_size && *minibatch_size == 0) throw Error(ErrorCode::kConfiguration, "empty minibatch");
}

std::vector<StateVector> dataset_states(const std::vector<BasSample>& samples) {
  std::vector<StateVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.state);
  return out;
}

double purity_sum(const StateVector& state, const QubitPartition& partition) {
  const Eigen::MatrixXcd m = coefficient_matrix(state, partition);
  const Eigen::MatrixXcd rho_a = m * m.adjoint();
  const Eigen::MatrixXcd rho_b_t = m.adjoint() * m;  // transpose of rho_B
  return rho_a.cwiseAbs2().sum() + rho_b_t.cwiseAbs2().sum();
}

namespace {

void check_dataset(std::span<const StateVector> dataset, const LayeredAnsatz& a, const QubitPartition& partition) {
  if (dataset.empty()) throw Error(ErrorCode::kConfiguration, "empty dataset");
  for (const auto& s : dataset) {
    if (s.n_qubits() != a.n_qubits) throw Error(ErrorCode::kDimension, "dataset state does not match the ansatz");
  }
  partition.validate(a.n_qubits);
}

struct SampleTerm {
  double cost = 0.0;
  std::vector<double> gradient;
};

SampleTerm sample_term(const LayeredAnsatz& a, const ParamVector& params, const StateVector& input,
                       const QubitPartition& partition, const std::vector<std::size_t>& table) {
  StateVector out = apply_ansatz(a, params, input);
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << partition.subsystem_a.size());
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << partition.subsystem_b.size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = out[table[static_cast<std::size_t>(i * cols + j)]];
  }
  const Eigen::MatrixXcd rho_a = m * m.adjoint();
  const Eigen::MatrixXcd gram_b = m.adjoint() * m;
  SampleTerm t;
  t.cost = rho_a.cwiseAbs2().sum() + gram_b.cwiseAbs2().sum();
  // d Tr((MM^+)^2) = Re<4 MM^+M | dM>, and the B term has the same form.
  const Eigen::MatrixXcd g = 4.0 * (rho_a * m + m * gram_b);
  std::vector<Amplitude> g_full(out.dim());
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g_full[table[static_cast<std::size_t>(i * cols + j)]] = g(i, j);
  }
  t.gradient = backpropagate(a, params, out.amplitudes(), g_full);
  return t;
}

CostGradient averaged(const LayeredAnsatz& a, const ParamVector& params, std::span<const StateVector> dataset,
                      std::span<const std::size_t> indices, const QubitPartition& partition) {
  const auto table = bipartite_index_table(partition);
  std::vector<SampleTerm> terms(indices.size());
  parallel_for(indices.size(), [&](std::size_t k) {
    terms[k] = sample_term(a, params, dataset[indices[k]], partition, table);
  });
  CostGradient cg;
  cg.gradient.assign(a.parameter_count(), 0.0);
  for (const auto& t : terms) {
    cg.cost += t.cost;
    for (std::size_t p = 0; p < cg.gradient.size(); ++p) cg.gradient[p] += t.gradient[p];
  }
  const auto count = static_cast<double>(indices.size());
  cg.cost /= count;
  for (auto& g : cg.gradient) g /= count;
  return cg;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

double purity_cost(const LayeredAnsatz& a, const ParamVector& params, std::span<const StateVector> dataset,
                   const QubitPartition& partition) {
  check_dataset(dataset, a, partition);
  std::vector<double> per(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) { per[i] = purity_sum(apply_ansatz(a, params, dataset[i]), partition); });
  return std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(dataset.size());
}

CostGradient purity_cost_gradient(const LayeredAnsatz& a, const ParamVector& params,
                                  std::span<const StateVector> dataset, const QubitPartition& partition) {
  check_dataset(dataset, a, partition);
  const auto idx = iota_indices(dataset.size());
  return averaged(a, params, dataset, idx, partition);
}

std::vector<double> purity_shift_gradient(const LayeredAnsatz& a, const ParamVector& params,
                                          std::span<const StateVector> dataset, const QubitPartition& partition) {
  check_dataset(dataset, a, partition);
  // Two-copy form: Tr(rho_A(x) rho_A(y)) + Tr(rho_B(x) rho_B(y)) with
  // x = U(theta1)psi and y = U(theta2)psi, i.e. the swap-test observable.
  const TwoCopyCost cost = [&](const ParamVector& first, const ParamVector& second) {
    double acc = 0.0;
    for (const auto& psi : dataset) {
      const Eigen::MatrixXcd mx = coefficient_matrix(apply_ansatz(a, first, psi), partition);
      const Eigen::MatrixXcd my = coefficient_matrix(apply_ansatz(a, second, psi), partition);
      acc += ((mx * mx.adjoint()) * (my * my.adjoint())).trace().real();
      acc += ((mx.transpose() * mx.conjugate()) * (my.transpose() * my.conjugate())).trace().real();
    }
    return acc / static_cast<double>(dataset.size());
  };
  return parameter_shift_gradient(cost, params);
}

double entropy_cost(const LayeredAnsatz& a, const ParamVector& params, std::span<const StateVector> dataset,
                    const QubitPartition& partition, Subsystem keep) {
  check_dataset(dataset, a, partition);
  double acc = 0.0;
  for (const auto& psi : dataset) {
    acc += von_neumann_entropy(partial_trace(apply_ansatz(a, params, psi), partition, keep));
  }
  return acc / static_cast<double>(dataset.size());
}

std::size_t shift_evaluations_per_iteration(std::size_t samples, const LayeredAnsatz& a) {
  return samples * (2 * a.parameter_count() + 1);
}

Stage1Result train_stage1(std::span<const StateVector> dataset, const Stage1Config& config) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorCode::kConfiguration, "empty dataset");
  const unsigned n = dataset.front().n_qubits();
  Stage1Result result;
  result.ansatz = LayeredAnsatz{n, config.depth};
  result.partition = config.partition ? *config.partition : QubitPartition::halves(n);
  check_dataset(dataset, result.ansatz, result.partition);
  result.params = config.initial_params ? *config.initial_params
                                        : ParamVector::random(result.ansatz.parameter_count(), config.seed);
  if (result.params.size() != result.ansatz.parameter_count()) {
    throw Error(ErrorCode::kParameter, "initial parameters do not match the ansatz");
  }

  const auto all = iota_indices(dataset.size());
  std::vector<std::size_t> order = all;
  std::size_t cursor = dataset.size();
  std::mt19937_64 batch_rng(config.minibatch_seed);
  const bool minibatch = config.minibatch_size && *config.minibatch_size < dataset.size();

  double cumulative = 0.0;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    CostGradient cg;
    if (minibatch) {
      const std::size_t bs = *config.minibatch_size;
      if (cursor + bs > order.size()) {
        std::shuffle(order.begin(), order.end(), batch_rng);
        cursor = 0;
      }
      const std::span<const std::size_t> batch(order.data() + cursor, bs);
      cursor += bs;
      cg = averaged(result.ansatz, result.params, dataset, batch, result.partition);
      cg.cost = purity_cost(result.ansatz, result.params, dataset, result.partition);
    } else {
      cg = averaged(result.ansatz, result.params, dataset, all, result.partition);
    }

    TraceRecord rec;
    rec.iteration = it;
    rec.cost = cg.cost;
    rec.residual = 2.0 - cg.cost;
    rec.normalized_residual = rec.residual / 2.0;
    for (double g : cg.gradient) rec.grad_l1 += std::abs(g);
    if (!std::isfinite(cg.cost) || !std::isfinite(rec.grad_l1)) {
      result.trace.push_back(rec);
      throw TrainingDivergence("non-finite purity cost at iteration " + std::to_string(it), result.trace);
    }
    if (rec.residual < config.convergence_tol) {
      rec.cum_delta_theta_l1 = cumulative;
      result.trace.push_back(rec);
      result.converged = true;
      break;
    }
    for (std::size_t p = 0; p < cg.gradient.size(); ++p) {
      const double step = config.learning_rate * cg.gradient[p];
      result.params[p] += step;
      rec.step_l1 += std::abs(step);
    }
    if (!std::isfinite(rec.step_l1)) {
      result.trace.push_back(rec);
      throw TrainingDivergence("non-finite parameter update at iteration " + std::to_string(it), result.trace);
    }
    cumulative += rec.step_l1;
    rec.cum_delta_theta_l1 = cumulative;
    result.trace.push_back(rec);
  }
  return result;
}

}  // namespace subpure
