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

#include "subpure/ansatz.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "subpure/error.h"

namespace subpure {

ParamVector ParamVector::random(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  ParamVector p;
  p.values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) p.values.push_back(u(rng));
  return p;
}

std::vector<std::pair<unsigned, unsigned>> LayeredAnsatz::ladder() const {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned i = 0; i + 1 < n_qubits; ++i) pairs.emplace_back(i, i + 1);
  return pairs;
}

namespace {

void check_params(const LayeredAnsatz& a, const ParamVector& params) {
  if (params.size() != a.parameter_count()) {
    throw Error(ErrorCode::kParameter, "ansatz expects " + std::to_string(a.parameter_count()) +
                                           " parameters, got " + std::to_string(params.size()));
  }
  for (double v : params.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kParameter, "non-finite parameter");
  }
}

void check_state(unsigned n_qubits, std::size_t dim) {
  if (dim != (std::size_t{1} << n_qubits)) {
    throw Error(ErrorCode::kDimension, "state size does not match the ansatz register");
  }
}

void forward(const LayeredAnsatz& a, const ParamVector& params, std::span<Amplitude> amps) {
  const unsigned n = a.n_qubits;
  for (unsigned d = 0; d < a.depth; ++d) {
    for (unsigned q = 0; q < n; ++q) kernels::ry(amps, n, q, params[std::size_t{d} * n + q]);
    for (unsigned q = 0; q + 1 < n; ++q) kernels::cnot(amps, n, q, q + 1);
  }
}

void inverse(const LayeredAnsatz& a, const ParamVector& params, std::span<Amplitude> amps) {
  const unsigned n = a.n_qubits;
  for (unsigned d = a.depth; d-- > 0;) {
    for (unsigned q = n - 1; q-- > 0;) kernels::cnot(amps, n, q, q + 1);
    for (unsigned q = n; q-- > 0;) kernels::ry(amps, n, q, -params[std::size_t{d} * n + q]);
  }
}

}  // namespace

void BlockDiagonalAnsatz::validate() const {
  if (block0.n_qubits != block1.n_qubits) {
    throw Error(ErrorCode::kConfiguration, "block-diagonal blocks act on different registers");
  }
  if (index_qubit > block0.n_qubits) throw Error(ErrorCode::kIndex, "index qubit out of range");
}

StateVector apply_ansatz(const LayeredAnsatz& a, const ParamVector& params, StateVector state) {
  check_params(a, params);
  check_state(a.n_qubits, state.dim());
  forward(a, params, state.amplitudes());
  return state;
}

StateVector apply_adjoint(const LayeredAnsatz& a, const ParamVector& params, StateVector state) {
  check_params(a, params);
  check_state(a.n_qubits, state.dim());
  inverse(a, params, state.amplitudes());
  return state;
}

std::array<std::vector<Amplitude>, 2> split_branches(std::span<const Amplitude> amps, unsigned n_qubits,
                                                     unsigned index_qubit) {
  const std::size_t bit = std::size_t{1} << qubit_shift(n_qubits, index_qubit);
  const std::size_t low = bit - 1;
  std::array<std::vector<Amplitude>, 2> out;
  out[0].resize(amps.size() / 2);
  out[1].resize(amps.size() / 2);
  for (std::size_t r = 0; r < amps.size() / 2; ++r) {
    // Insert a zero bit at the index-qubit position.
    const std::size_t full = ((r & ~low) << 1) | (r & low);
    out[0][r] = amps[full];
    out[1][r] = amps[full | bit];
  }
  return out;
}

std::vector<Amplitude> join_branches(const std::array<std::vector<Amplitude>, 2>& branches,
                                     unsigned index_qubit) {
  const std::size_t half = branches[0].size();
  const auto n_qubits = static_cast<unsigned>(std::countr_zero(half)) + 1;
  const std::size_t bit = std::size_t{1} << qubit_shift(n_qubits, index_qubit);
  const std::size_t low = bit - 1;
  std::vector<Amplitude> amps(2 * half);
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t full = ((r & ~low) << 1) | (r & low);
    amps[full] = branches[0][r];
    amps[full | bit] = branches[1][r];
  }
  return amps;
}

std::pair<ParamVector, ParamVector> split_block_params(const BlockDiagonalAnsatz& b, const ParamVector& params) {
  if (params.size() != b.parameter_count()) {
    throw Error(ErrorCode::kParameter, "block-diagonal ansatz expects " + std::to_string(b.parameter_count()) +
                                           " parameters, got " + std::to_string(params.size()));
  }
  const auto cut = params.values.begin() + static_cast<std::ptrdiff_t>(b.block0.parameter_count());
  return {ParamVector{{params.values.begin(), cut}}, ParamVector{{cut, params.values.end()}}};
}

StateVector apply_block_diagonal(const BlockDiagonalAnsatz& b, const ParamVector& params0,
                                 const ParamVector& params1, StateVector state) {
  b.validate();
  check_params(b.block0, params0);
  check_params(b.block1, params1);
  check_state(b.n_qubits(), state.dim());
  auto branches = split_branches(state.amplitudes(), state.n_qubits(), b.index_qubit);
  forward(b.block0, params0, branches[0]);
  forward(b.block1, params1, branches[1]);
  return StateVector(join_branches(branches, b.index_qubit));
}

std::vector<double> backpropagate(const LayeredAnsatz& a, const ParamVector& params,
                                  std::span<const Amplitude> output, std::span<const Amplitude> output_grad) {
  check_params(a, params);
  check_state(a.n_qubits, output.size());
  check_state(a.n_qubits, output_grad.size());
  const unsigned n = a.n_qubits;
  std::vector<Amplitude> psi(output.begin(), output.end());
  std::vector<Amplitude> lambda(output_grad.begin(), output_grad.end());
  std::vector<double> grad(a.parameter_count(), 0.0);
  for (unsigned d = a.depth; d-- > 0;) {
    for (unsigned q = n - 1; q-- > 0;) {
      kernels::cnot(psi, n, q, q + 1);
      kernels::cnot(lambda, n, q, q + 1);
    }
    for (unsigned q = n; q-- > 0;) {
      const std::size_t k = std::size_t{d} * n + q;
      // psi is the state right after Ry(theta_k); dRy/dtheta = (-iY/2) Ry.
      grad[k] = kernels::ry_generator_overlap(lambda, psi, n, q);
      kernels::ry(psi, n, q, -params[k]);
      kernels::ry(lambda, n, q, -params[k]);
    }
  }
  return grad;
}

std::vector<double> backpropagate(const BlockDiagonalAnsatz& b, const ParamVector& params,
                                  std::span<const Amplitude> output, std::span<const Amplitude> output_grad) {
  b.validate();
  const auto [p0, p1] = split_block_params(b, params);
  check_state(b.n_qubits(), output.size());
  check_state(b.n_qubits(), output_grad.size());
  const auto out = split_branches(output, b.n_qubits(), b.index_qubit);
  const auto g = split_branches(output_grad, b.n_qubits(), b.index_qubit);
  auto grad = backpropagate(b.block0, p0, out[0], g[0]);
  const auto grad1 = backpropagate(b.block1, p1, out[1], g[1]);
  grad.insert(grad.end(), grad1.begin(), grad1.end());
  return grad;
}

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "cost evaluation returned a non-finite value");
  return v;
}

}  // namespace

std::vector<double> parameter_shift_gradient(const ScalarCost& cost, const ParamVector& params) {
  constexpr double kShift = std::numbers::pi / 2;
  std::vector<double> grad(params.size());
  ParamVector shifted = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kShift;
    const double plus = checked(cost(shifted));
    shifted[k] = params[k] - kShift;
    const double minus = checked(cost(shifted));
    shifted[k] = params[k];
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

std::vector<double> parameter_shift_gradient(const TwoCopyCost& cost, const ParamVector& params) {
  constexpr double kShift = std::numbers::pi / 2;
  std::vector<double> grad(params.size());
  ParamVector shifted = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kShift;
    const double first_plus = checked(cost(shifted, params));
    const double second_plus = checked(cost(params, shifted));
    shifted[k] = params[k] - kShift;
    const double first_minus = checked(cost(shifted, params));
    const double second_minus = checked(cost(params, shifted));
    shifted[k] = params[k];
    grad[k] = 0.5 * (first_plus - first_minus) + 0.5 * (second_plus - second_minus);
  }
  return grad;
}

std::vector<double> finite_difference_gradient(const ScalarCost& cost, const ParamVector& params, double h) {
  std::vector<double> grad(params.size());
  ParamVector shifted = params;
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + h;
    const double plus = checked(cost(shifted));
    shifted[k] = params[k] - h;
    const double minus = checked(cost(shifted));
    shifted[k] = params[k];
    grad[k] = (plus - minus) / (2 * h);
  }
  return grad;
}

std::size_t parameter_count(const AnyAnsatz& a) {
  return std::visit([](const auto& x) { return x.parameter_count(); }, a);
}

unsigned ansatz_qubits(const AnyAnsatz& a) {
  if (const auto* l = std::get_if<LayeredAnsatz>(&a)) return l->n_qubits;
  return std::get<BlockDiagonalAnsatz>(a).n_qubits();
}

namespace {

nlohmann::ordered_json layered_json(const LayeredAnsatz& a) {
  nlohmann::ordered_json j;
  j["n_qubits"] = a.n_qubits;
  j["depth"] = a.depth;
  j["entangler"] = "cnot_ladder_ascending";
  return j;
}

LayeredAnsatz layered_from_json(const nlohmann::json& j) {
  if (j.at("entangler").get<std::string>() != "cnot_ladder_ascending") {
    throw Error(ErrorCode::kParse, "unsupported entangler");
  }
  return LayeredAnsatz{j.at("n_qubits").get<unsigned>(), j.at("depth").get<unsigned>()};
}

}  // namespace

nlohmann::ordered_json checkpoint_to_json(const AnyAnsatz& a, const ParamVector& params) {
  nlohmann::ordered_json j;
  if (const auto* l = std::get_if<LayeredAnsatz>(&a)) {
    j["kind"] = "layered";
    j["ansatz"] = layered_json(*l);
  } else {
    const auto& b = std::get<BlockDiagonalAnsatz>(a);
    j["kind"] = "block_diagonal";
    j["index_qubit"] = b.index_qubit;
    j["block0"] = layered_json(b.block0);
    j["block1"] = layered_json(b.block1);
  }
  j["params"] = params.values;
  return j;
}

std::pair<AnyAnsatz, ParamVector> checkpoint_from_json(const nlohmann::json& j) {
  try {
    AnyAnsatz a;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "layered") {
      a = layered_from_json(j.at("ansatz"));
    } else if (kind == "block_diagonal") {
      BlockDiagonalAnsatz b{j.at("index_qubit").get<unsigned>(), layered_from_json(j.at("block0")),
                            layered_from_json(j.at("block1"))};
      b.validate();
      a = b;
    } else {
      throw Error(ErrorCode::kParse, "unknown ansatz kind '" + kind + "'");
    }
    ParamVector p{j.at("params").get<std::vector<double>>()};
    if (p.size() != parameter_count(a)) {
      throw Error(ErrorCode::kParameter, "checkpoint holds " + std::to_string(p.size()) +
                                             " parameters, ansatz needs " + std::to_string(parameter_count(a)));
    }
    return {a, p};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("checkpoint: ") + e.what());
  }
}

}  // namespace subpure
