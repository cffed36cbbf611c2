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

#include "subpure/classifier.h"

#include <cmath>
#include <random>

#include "subpure/error.h"
#include "subpure/parallel.h"

namespace subpure {

ClassifierConfig ClassifierConfig::generic(unsigned n_qubits, unsigned depth) {
  ClassifierConfig c;
  c.ansatz = LayeredAnsatz{n_qubits, depth};
  c.readout_qubit = n_qubits > 1 ? 1 : 0;
  return c;
}

ClassifierConfig ClassifierConfig::block_diagonal(unsigned n_qubits, unsigned depth) {
  if (n_qubits < 2) throw Error(ErrorCode::kConfiguration, "block-diagonal classifier needs >= 2 qubits");
  ClassifierConfig c;
  c.ansatz = BlockDiagonalAnsatz{0, LayeredAnsatz{n_qubits - 1, depth}, LayeredAnsatz{n_qubits - 1, depth}};
  c.readout_qubit = n_qubits - 1;
  return c;
}

void ClassifierConfig::validate() const {
  if (const auto* b = std::get_if<BlockDiagonalAnsatz>(&ansatz)) b->validate();
  if (readout_qubit >= ansatz_qubits(ansatz)) throw Error(ErrorCode::kIndex, "readout qubit out of range");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kConfiguration, "learning rate must be positive");
  }
  if (max_iters == 0) throw Error(ErrorCode::kConfiguration, "max_iters must be positive");
  if (reweight && !std::holds_alternative<BlockDiagonalAnsatz>(ansatz)) {
    throw Error(ErrorCode::kConfiguration, "branch reweighting needs the block-diagonal ansatz");
  }
}

namespace {

StateVector apply_any(const AnyAnsatz& ansatz, const ParamVector& params, const StateVector& state) {
  if (ansatz_qubits(ansatz) != state.n_qubits()) {
    throw Error(ErrorCode::kDimension, "state does not match the classifier register");
  }
  if (const auto* l = std::get_if<LayeredAnsatz>(&ansatz)) return apply_ansatz(*l, params, state);
  const auto& b = std::get<BlockDiagonalAnsatz>(ansatz);
  const auto [p0, p1] = split_block_params(b, params);
  return apply_block_diagonal(b, p0, p1, state);
}

std::vector<double> backprop_any(const AnyAnsatz& ansatz, const ParamVector& params, const StateVector& out,
                                 std::span<const Amplitude> g) {
  if (const auto* l = std::get_if<LayeredAnsatz>(&ansatz)) return backpropagate(*l, params, out.amplitudes(), g);
  return backpropagate(std::get<BlockDiagonalAnsatz>(ansatz), params, out.amplitudes(), g);
}

void check_data(std::span<const LabeledState> data) {
  if (data.empty()) throw Error(ErrorCode::kConfiguration, "empty dataset");
  for (const auto& d : data) {
    if (d.label != 1 && d.label != -1) throw Error(ErrorCode::kConfiguration, "labels must be +1 or -1");
  }
}

struct SampleTerm {
  double cost = 0.0;
  std::vector<double> gradient;
};

// (l - <Z>)^2 and its gradient: d<Z> = Re<2 Z psi | d psi>.
SampleTerm sample_term(const ParamVector& params, const StateVector& input, int label,
                       const ClassifierConfig& config) {
  const StateVector out = apply_any(config.ansatz, params, input);
  const unsigned n = out.n_qubits();
  const std::size_t bit = std::size_t{1} << qubit_shift(n, config.readout_qubit);
  std::vector<Amplitude> g(out.dim());
  double z = 0.0;
  for (std::size_t i = 0; i < out.dim(); ++i) {
    const double sign = (i & bit) ? -1.0 : 1.0;
    z += sign * std::norm(out[i]);
    g[i] = 2.0 * sign * out[i];
  }
  const double err = label - z;
  SampleTerm t;
  t.cost = err * err;
  t.gradient = backprop_any(config.ansatz, params, out, g);
  for (auto& v : t.gradient) v *= -2.0 * err;
  return t;
}

StateVector training_input(const LabeledState& s, const ClassifierConfig& config) {
  if (!config.reweight) return s.state;
  const unsigned idx = std::get<BlockDiagonalAnsatz>(config.ansatz).index_qubit;
  return reweight_branches(s.state, idx, estimate_branch_weights(s.state, idx));
}

}  // namespace

double z_expectation(const StateVector& state, unsigned qubit) {
  if (qubit >= state.n_qubits()) throw Error(ErrorCode::kIndex, "readout qubit out of range");
  const std::size_t bit = std::size_t{1} << qubit_shift(state.n_qubits(), qubit);
  double z = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) z += ((i & bit) ? -1.0 : 1.0) * std::norm(state[i]);
  return z;
}

double z_expectation(const StateVector& state, const ParamVector& params, const AnyAnsatz& ansatz,
                     unsigned readout_qubit) {
  return z_expectation(apply_any(ansatz, params, state), readout_qubit);
}

double classification_cost(const ParamVector& params, std::span<const LabeledState> data,
                           const ClassifierConfig& config) {
  config.validate();
  check_data(data);
  std::vector<double> terms(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    const double err = data[i].label - z_expectation(data[i].state, params, config.ansatz, config.readout_qubit);
    terms[i] = err * err;
  });
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc;
}

ClassifierGradient classification_cost_gradient(const ParamVector& params, std::span<const LabeledState> data,
                                                const ClassifierConfig& config) {
  config.validate();
  check_data(data);
  std::vector<SampleTerm> terms(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    terms[i] = sample_term(params, data[i].state, data[i].label, config);
  });
  ClassifierGradient cg;
  cg.gradient.assign(params.size(), 0.0);
  for (const auto& t : terms) {
    cg.cost += t.cost;
    for (std::size_t p = 0; p < params.size(); ++p) cg.gradient[p] += t.gradient[p];
  }
  return cg;
}

std::vector<double> classification_shift_gradient(const ParamVector& params, std::span<const LabeledState> data,
                                                  const ClassifierConfig& config) {
  config.validate();
  check_data(data);
  std::vector<double> grad(params.size(), 0.0);
  for (const auto& d : data) {
    const ScalarCost z = [&](const ParamVector& p) {
      return z_expectation(d.state, p, config.ansatz, config.readout_qubit);
    };
    const double err = d.label - z(params);
    const auto dz = parameter_shift_gradient(z, params);
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += -2.0 * err * dz[k];
  }
  return grad;
}

int predict(const StateVector& state, const ParamVector& params, const ClassifierConfig& config) {
  return label_from_expectation(z_expectation(state, params, config.ansatz, config.readout_qubit));
}

BranchWeights estimate_branch_weights(const StateVector& state, unsigned index_qubit) {
  const std::vector<unsigned> q{index_qubit};
  const auto probs = outcome_probabilities(state, q);
  return BranchWeights{probs[0], probs[1]};
}

BranchWeights estimate_branch_weights(const StateVector& state, unsigned index_qubit, const ShotBudget& budget) {
  if (budget.shots == 0) throw Error(ErrorCode::kConfiguration, "shot budget must be positive");
  const auto exact = estimate_branch_weights(state, index_qubit);
  std::mt19937_64 rng(budget.seed);
  std::binomial_distribution<std::size_t> draw(budget.shots, exact.w1);
  const std::size_t ones = draw(rng);
  ShotCounter::add(budget.shots);
  const auto shots = static_cast<double>(budget.shots);
  return BranchWeights{static_cast<double>(budget.shots - ones) / shots, static_cast<double>(ones) / shots};
}

StateVector reweight_branches(const StateVector& state, unsigned index_qubit, const BranchWeights& weights) {
  if (weights.w0 < 1e-12 || weights.w1 < 1e-12) {
    throw Error(ErrorCode::kDegenerateBranch, "index-register branch weight below 1e-12");
  }
  if (index_qubit >= state.n_qubits()) throw Error(ErrorCode::kIndex, "index qubit out of range");
  auto branches = split_branches(state.amplitudes(), state.n_qubits(), index_qubit);
  const double s0 = 1.0 / std::sqrt(2.0 * weights.w0);
  const double s1 = 1.0 / std::sqrt(2.0 * weights.w1);
  for (auto& a : branches[0]) a *= s0;
  for (auto& a : branches[1]) a *= s1;
  return StateVector(join_branches(branches, index_qubit));
}

std::vector<double> reweighted_gradient(const LabeledState& sample, const ParamVector& params,
                                        const ClassifierConfig& config, const BranchWeights& weights) {
  const auto* b = std::get_if<BlockDiagonalAnsatz>(&config.ansatz);
  if (!b) throw Error(ErrorCode::kConfiguration, "reweighted gradients need the block-diagonal ansatz");
  const StateVector balanced = reweight_branches(sample.state, b->index_qubit, weights);
  return sample_term(params, balanced, sample.label, config).gradient;
}

ClassifierResult train_classifier(std::span<const LabeledState> train, const ClassifierConfig& config) {
  config.validate();
  check_data(train);
  std::vector<LabeledState> inputs;
  inputs.reserve(train.size());
  for (const auto& s : train) inputs.push_back(LabeledState{training_input(s, config), s.label});

  ClassifierResult result;
  result.params = ParamVector::random(parameter_count(config.ansatz), config.seed);
  const double scale = config.learning_rate / static_cast<double>(train.size());
  double cumulative = 0.0;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    const auto cg = classification_cost_gradient(result.params, inputs, config);
    TraceRecord rec;
    rec.iteration = it;
    rec.cost = cg.cost;
    rec.residual = cg.cost;
    rec.normalized_residual = cg.cost / static_cast<double>(train.size());
    for (double g : cg.gradient) rec.grad_l1 += std::abs(g);
    if (!std::isfinite(cg.cost) || !std::isfinite(rec.grad_l1)) {
      result.trace.push_back(rec);
      throw TrainingDivergence("non-finite classification cost at iteration " + std::to_string(it), result.trace);
    }
    for (std::size_t p = 0; p < cg.gradient.size(); ++p) {
      const double step = scale * cg.gradient[p];
      result.params[p] -= step;
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

EvalReport evaluate(const ParamVector& params, std::span<const LabeledState> data, const ClassifierConfig& config) {
  config.validate();
  check_data(data);
  EvalReport r;
  for (const auto& d : data) {
    const double z = z_expectation(d.state, params, config.ansatz, config.readout_qubit);
    const int pred = label_from_expectation(z);
    r.cost += (d.label - z) * (d.label - z);
    if (d.label > 0) {
      ++(pred > 0 ? r.bars_as_bars : r.bars_as_stripes);
    } else {
      ++(pred > 0 ? r.stripes_as_bars : r.stripes_as_stripes);
    }
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.accuracy = ratio(r.bars_as_bars + r.stripes_as_stripes, r.total());
  r.bars_accuracy = ratio(r.bars_as_bars, r.bars_as_bars + r.bars_as_stripes);
  r.stripes_accuracy = ratio(r.stripes_as_stripes, r.stripes_as_bars + r.stripes_as_stripes);
  return r;
}

nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["bars_accuracy"] = r.bars_accuracy;
  j["stripes_accuracy"] = r.stripes_accuracy;
  j["confusion"] = {{"bars_as_bars", r.bars_as_bars},
                    {"bars_as_stripes", r.bars_as_stripes},
                    {"stripes_as_bars", r.stripes_as_bars},
                    {"stripes_as_stripes", r.stripes_as_stripes}};
  j["cost"] = r.cost;
  j["count"] = r.total();
  return j;
}

}  // namespace subpure
