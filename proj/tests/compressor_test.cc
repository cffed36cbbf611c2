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
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "subpure/bas.h"
#include "subpure/encoder.h"
#include "subpure/error.h"

namespace subpure {
namespace {

// Places phi on the A qubits and eta on the B qubits of `p`.
StateVector scatter_product(const StateVector& phi, const StateVector& eta, const QubitPartition& p) {
  const StateVector prod = tensor_product(phi, eta);
  const auto table = bipartite_index_table(p);
  std::vector<Amplitude> amps(prod.dim());
  for (std::size_t k = 0; k < prod.dim(); ++k) amps[table[k]] = prod[k];
  return StateVector(std::move(amps));
}

QubitPartition interleaved(unsigned n) {
  QubitPartition p;
  for (unsigned q = 0; q < n; ++q) (q % 2 ? p.subsystem_b : p.subsystem_a).push_back(q);
  return p;
}

void expect_error(ErrorCode code, auto&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(SplitSubsystems, RecoversFactorsUpToPhase) {
  std::mt19937_64 rng(3);
  for (unsigned n_a : {1u, 2u, 3u}) {
    const auto phi = StateVector::random(n_a, rng);
    const auto eta = StateVector::random(4 - n_a + 1, rng);
    const auto p = QubitPartition::contiguous(phi.n_qubits() + eta.n_qubits(), n_a);
    const auto cert = split_subsystems(tensor_product(phi, eta), p, 1e-9);
    EXPECT_NEAR(fidelity_pure(cert.phi, phi), 1.0, 1e-10);
    EXPECT_NEAR(fidelity_pure(cert.eta, eta), 1.0, 1e-10);
    EXPECT_NEAR(cert.residual, 0.0, 1e-10);
    EXPECT_NEAR(cert.schmidt_fidelity, 1.0, 1e-10);
    // The product of the returned factors reproduces the input exactly, phase included.
    const auto back = tensor_product(cert.phi, cert.eta);
    const auto orig = tensor_product(phi, eta);
    EXPECT_NEAR(std::abs(inner_product(back, orig)), 1.0, 1e-10);
  }
}

TEST(SplitSubsystems, GaugeMakesLargestPhiEntryRealPositive) {
  std::mt19937_64 rng(4);
  const auto phi = StateVector::random(2, rng);
  const auto eta = StateVector::random(2, rng);
  const auto cert = split_subsystems(tensor_product(phi, eta), QubitPartition::halves(4), 1e-9);
  std::size_t lead = 0;
  for (std::size_t i = 1; i < cert.phi.dim(); ++i) {
    if (std::abs(cert.phi[i]) > std::abs(cert.phi[lead])) lead = i;
  }
  EXPECT_GT(cert.phi[lead].real(), 0.0);
  EXPECT_NEAR(cert.phi[lead].imag(), 0.0, 1e-12);
}

TEST(SplitSubsystems, NonContiguousPartition) {
  std::mt19937_64 rng(5);
  const auto p = interleaved(5);
  const auto phi = StateVector::random(3, rng);
  const auto eta = StateVector::random(2, rng);
  const auto cert = split_subsystems(scatter_product(phi, eta, p), p, 1e-9);
  EXPECT_NEAR(fidelity_pure(cert.phi, phi), 1.0, 1e-10);
  EXPECT_NEAR(fidelity_pure(cert.eta, eta), 1.0, 1e-10);
}

TEST(SplitSubsystems, BellStateIsNotProduct) {
  const auto bell = StateVector::normalized({1.0, 0.0, 0.0, 1.0});
  expect_error(ErrorCode::kNotProduct, [&] { split_subsystems(bell, QubitPartition::halves(2), 0.05); });
}

TEST(SplitSubsystems, SchmidtFidelityBoundedByResidual) {
  // Slightly entangled states: the dominant pair keeps at least 1 - residual of the weight.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int t = 0; t < 30; ++t) {
    auto s = tensor_product(StateVector::random(2, rng), StateVector::random(2, rng));
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& a : amps) a += Amplitude(noise(rng), noise(rng));
    const auto noisy = StateVector::normalized(std::move(amps));
    const auto cert = split_subsystems(noisy, QubitPartition::halves(4), 2.0);
    EXPECT_GE(cert.schmidt_fidelity, 1.0 - cert.residual - 1e-12);
    EXPECT_NEAR(std::norm(inner_product(tensor_product(cert.phi, cert.eta), noisy)), cert.schmidt_fidelity, 1e-10);
  }
}

TEST(SelectGarbage, IdenticalBasisStates) {
  const auto z = StateVector(3);
  const auto sel = select_garbage_basis(z, z);
  EXPECT_EQ(sel.index, 0u);
  EXPECT_DOUBLE_EQ(sel.ratio, 1.0);
  EXPECT_DOUBLE_EQ(sel.phase, 0.0);
  EXPECT_DOUBLE_EQ(sel.plus_probability, 1.0);
}

TEST(SelectGarbage, DisjointSupportsRejected) {
  expect_error(ErrorCode::kOrthogonalSupports,
               [] { select_garbage_basis(StateVector::basis(1, 0), StateVector::basis(1, 1)); });
  expect_error(ErrorCode::kDimension, [] { select_garbage_basis(StateVector(1), StateVector(2)); });
}

TEST(SelectGarbage, MatchesBruteForceArgmax) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto phi = StateVector::random(3, rng);
    const auto eta = StateVector::random(3, rng);
    const auto sel = select_garbage_basis(phi, eta);
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t g = 0; g < phi.dim(); ++g) {
      const double p = (std::norm(phi[g]) + std::norm(eta[g])) / 2.0;
      if (p > best) best = p, arg = g;
    }
    EXPECT_EQ(sel.index, arg);
    EXPECT_DOUBLE_EQ(sel.plus_probability, best);
    const Amplitude r = phi[arg] / eta[arg];
    EXPECT_NEAR(sel.ratio, std::abs(r), 1e-12);
    EXPECT_NEAR(sel.phase, std::arg(r), 1e-12);
  }
}

TEST(SelectGarbage, SkipsEntriesBelowOverlapFloor) {
  // Largest phi entry sits where eta vanishes; the selection must avoid it.
  const auto phi = StateVector::normalized({0.9, 0.1, 0.0, 0.0});
  const auto eta = StateVector::normalized({0.0, 0.1, 1.0, 0.0});
  EXPECT_EQ(select_garbage_basis(phi, eta).index, 1u);
}

TEST(SelectGarbage, RebalancedRuleMatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto phi = StateVector::random(3, rng);
    const auto eta = StateVector::random(3, rng);
    const auto sel = select_garbage_basis(phi, eta, GarbageRule::kRebalancedProbability);
    EXPECT_EQ(sel.rule, GarbageRule::kRebalancedProbability);
    for (std::size_t g = 0; g < phi.dim(); ++g) {
      EXPECT_LE(rebalanced_probability(phi, eta, g), rebalanced_probability(phi, eta, sel.index));
    }
  }
}

TEST(Compress, FallsBackWhenPlusRuleIsImpossible) {
  // Index 0 wins the |+> rule but leaves the rebalanced preparation ~1e-16 success.
  const auto phi = StateVector::normalized({1.0, 0.1, 0.0, 0.0});
  const auto eta = StateVector::normalized({1e-8, 1.0, 1.0, 1.0});
  EXPECT_EQ(select_garbage_basis(phi, eta).index, 0u);
  const auto p = QubitPartition::halves(4);
  const auto cert = split_subsystems(tensor_product(phi, eta), p, 1e-9);
  const auto c = compress(cert);
  EXPECT_EQ(c.garbage.rule, GarbageRule::kRebalancedProbability);
  EXPECT_EQ(c.garbage.index, 1u);
  EXPECT_GE(c.postselect_probability, kMinPostselectProbability);
  EXPECT_GE(fidelity_pure(c.state, ideal_compact_state(cert, c.decorrelation)), 1.0 - 1e-8);
  // The |+> preparation has no such problem and keeps the default rule.
  EXPECT_EQ(compress(cert, AncillaPrep::kPlus).garbage.rule, GarbageRule::kPlusProbability);
}

TEST(Decorrelate, IdentityWhenSupportsOverlap) {
  std::mt19937_64 rng(8);
  const auto phi = StateVector::random(3, rng);
  const auto eta = StateVector::random(3, rng);
  const auto d = decorrelate(phi, eta);
  EXPECT_TRUE(d.record.is_identity());
  EXPECT_NEAR(fidelity_pure(d.eta, eta), 1.0, 1e-15);
}

TEST(Decorrelate, RotatesUntilOverlapAndUndoes) {
  const auto phi = StateVector::basis(3, 0);
  const auto eta = StateVector::basis(3, 7);
  const auto d = decorrelate(phi, eta);
  EXPECT_EQ(d.record.rotated_qubits, (std::vector<unsigned>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(d.record.angle, std::numbers::pi / 4);
  EXPECT_GT(std::abs(d.eta[0]), kOverlapFloor);
  EXPECT_NEAR(fidelity_pure(undo_decorrelation(d.record, d.eta), eta), 1.0, 1e-12);

  const auto partial = decorrelate(StateVector::basis(2, 0), StateVector::basis(2, 2));
  EXPECT_EQ(partial.record.rotated_qubits, (std::vector<unsigned>{0}));
}

TEST(PadQubits, AppendsTrailingZeros) {
  const auto s = StateVector::normalized({1.0, 2.0});
  const auto p = pad_qubits(s, 3);
  ASSERT_EQ(p.n_qubits(), 3u);
  EXPECT_EQ(p[0], s[0]);
  EXPECT_EQ(p[4], s[1]);
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  expect_error(ErrorCode::kDimension, [&] { pad_qubits(p, 2); });
}

TEST(Compress, IdenticalFactors) {
  std::mt19937_64 rng(9);
  // A real, non-negative factor leaves no phase for the gauge to move between the two sides.
  const auto raw = StateVector::random_real(2, rng);
  std::vector<Amplitude> mags;
  for (const auto& a : raw.amplitudes()) mags.emplace_back(std::abs(a));
  const auto phi = StateVector::normalized(std::move(mags));
  const auto cert = split_subsystems(tensor_product(phi, phi), QubitPartition::halves(4), 1e-9);
  const auto c = compress(cert);
  EXPECT_EQ(c.state.n_qubits(), 3u);
  EXPECT_NEAR(c.garbage.ratio, 1.0, 1e-10);
  EXPECT_NEAR(c.garbage.phase, 0.0, 1e-10);
  EXPECT_NEAR(fidelity_pure(c.state, tensor_product(StateVector::normalized({1.0, 1.0}), cert.phi)), 1.0, 1e-10);
}

TEST(Compress, QubitCountsForBarsAndStripes) {
  for (unsigned side : {2u, 4u, 8u, 16u}) {
    const unsigned n = 2 * log2_side(side);
    const BasGrid g{side, BasKind::kBars, 1};
    const auto s = encode_amplitude(g);
    const unsigned n_a = n / 2 + (n % 2);
    const auto cert = split_subsystems(s, QubitPartition::contiguous(n, n_a), 1e-9);
    EXPECT_EQ(compress(cert).state.n_qubits(), n_a + 1);
  }
  // Uneven splits: 6 -> 4 and 8 -> 5 (the larger side sets the register).
  std::mt19937_64 rng(10);
  for (auto [n, n_a] : {std::pair{6u, 3u}, std::pair{8u, 4u}, std::pair{6u, 2u}, std::pair{8u, 3u}}) {
    const auto phi = StateVector::random(n_a, rng);
    const auto eta = StateVector::random(n - n_a, rng);
    const auto cert = split_subsystems(tensor_product(phi, eta), QubitPartition::contiguous(n, n_a), 1e-9);
    EXPECT_EQ(compress(cert).state.n_qubits(), std::max(n_a, n - n_a) + 1);
  }
}

TEST(Compress, BranchesBalancedAndMatchIdeal) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const unsigned n = 3 + t % 4;
    const unsigned n_a = 1 + t % (n - 1);
    const auto p = t % 2 ? QubitPartition::contiguous(n, n_a) : interleaved(n);
    const auto phi = StateVector::random(static_cast<unsigned>(p.subsystem_a.size()), rng);
    const auto eta = StateVector::random(static_cast<unsigned>(p.subsystem_b.size()), rng);
    const auto cert = split_subsystems(scatter_product(phi, eta, p), p, 1e-9);
    const auto c = compress(cert);
    const auto probs = outcome_probabilities(c.state, std::vector<unsigned>{0});
    EXPECT_NEAR(probs[0], 0.5, 1e-8);
    EXPECT_NEAR(probs[1], 0.5, 1e-8);
    EXPECT_GE(fidelity_pure(c.state, ideal_compact_state(cert, c.decorrelation)), 1.0 - 1e-8);
    // Exact success probability of the rebalanced preparation.
    const double ratio = c.garbage.ratio;
    const auto ph = pad_qubits(cert.phi, c.register_qubits());
    EXPECT_NEAR(c.postselect_probability, 2.0 * std::norm(ph[c.garbage.index]) / (1.0 + ratio * ratio), 1e-12);
  }
}

TEST(Compress, PlusAncillaSuccessProbability) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto cert =
        split_subsystems(tensor_product(StateVector::random(2, rng), StateVector::random(3, rng)),
                         QubitPartition::contiguous(5, 2), 1e-9);
    const auto c = compress(cert, AncillaPrep::kPlus);
    EXPECT_NEAR(c.postselect_probability, c.garbage.plus_probability, 1e-12);
  }
}

TEST(Compress, DisjointSupportsGetDecorrelated) {
  const auto p = QubitPartition::halves(4);
  const auto cert = split_subsystems(tensor_product(StateVector::basis(2, 0), StateVector::basis(2, 3)), p, 1e-9);
  const auto c = compress(cert);
  EXPECT_FALSE(c.decorrelation.is_identity());
  EXPECT_GE(fidelity_pure(c.state, ideal_compact_state(cert, c.decorrelation)), 1.0 - 1e-8);
  EXPECT_NEAR(fidelity_pure(decompress_product(c), scatter_product(cert.phi, cert.eta, p)), 1.0, 1e-10);
}

TEST(Decompress, ProductRoundTrip) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const unsigned n = 2 + t % 6;
    const auto p = t % 3 ? QubitPartition::contiguous(n, 1 + t % (n - 1)) : interleaved(n);
    const auto psi = scatter_product(StateVector::random(static_cast<unsigned>(p.subsystem_a.size()), rng),
                                     StateVector::random(static_cast<unsigned>(p.subsystem_b.size()), rng), p);
    const auto cert = split_subsystems(psi, p, 1e-9);
    for (auto prep : {AncillaPrep::kRebalanced, AncillaPrep::kPlus}) {
      EXPECT_NEAR(fidelity_pure(decompress_product(compress(cert, prep)), psi), 1.0, 1e-10);
    }
  }
}

TEST(Decompress, UndoesEncoderCircuit) {
  std::mt19937_64 rng(14);
  const LayeredAnsatz a{4, 2};
  const auto params = ParamVector::random(a.parameter_count(), 15);
  const auto part = QubitPartition::halves(4);
  const auto prod = tensor_product(StateVector::random(2, rng), StateVector::random(2, rng));
  const auto input = apply_adjoint(a, params, prod);
  const auto cert = split_subsystems(apply_ansatz(a, params, input), part, 1e-9);
  EXPECT_NEAR(fidelity_pure(decompress(compress(cert), a, params), input), 1.0, 1e-10);
}

TEST(Decompress, CorruptStatesRejected) {
  const auto cert = split_subsystems(StateVector(4), QubitPartition::halves(4), 1e-9);
  auto c = compress(cert);
  auto zeroed = c;
  for (std::size_t i = zeroed.state.dim() / 2; i < zeroed.state.dim(); ++i) zeroed.state[i] = 0.0;
  zeroed.state = StateVector::normalized({zeroed.state.amplitudes().begin(), zeroed.state.amplitudes().end()});
  expect_error(ErrorCode::kCorruptCompactState, [&] { decompress_product(zeroed); });
  auto wrong = c;
  wrong.partition = QubitPartition::halves(6);
  expect_error(ErrorCode::kCorruptCompactState, [&] { decompress_product(wrong); });
}

TEST(CompactArchive, RoundTrip) {
  std::mt19937_64 rng(16);
  std::vector<CompactRecord> records;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto p = i % 2 ? QubitPartition::halves(4) : interleaved(5);
    const auto psi = scatter_product(StateVector::random(static_cast<unsigned>(p.subsystem_a.size()), rng),
                                     StateVector::random(static_cast<unsigned>(p.subsystem_b.size()), rng), p);
    const auto cert = split_subsystems(psi, p, 1e-9);
    records.push_back({i, i % 2 ? 1 : -1, compress(cert, i == 3 ? AncillaPrep::kPlus : AncillaPrep::kRebalanced),
                       cert.residual, "stage1.json"});
  }
  records.push_back({9, 1, compress(split_subsystems(tensor_product(StateVector::basis(2, 0), StateVector::basis(2, 3)),
                                                     QubitPartition::halves(4), 1e-9)),
                     0.0, "stage1.json"});
  std::stringstream buf;
  write_compact_archive(buf, records);
  const auto back = read_compact_archive(buf);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = records[i];
    const auto& b = back[i];
    EXPECT_EQ(a.sample_index, b.sample_index);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.stage1_residual, b.stage1_residual);
    EXPECT_EQ(a.stage1_checkpoint, b.stage1_checkpoint);
    EXPECT_EQ(a.compact.partition.subsystem_a, b.compact.partition.subsystem_a);
    EXPECT_EQ(a.compact.partition.subsystem_b, b.compact.partition.subsystem_b);
    EXPECT_EQ(a.compact.garbage.index, b.compact.garbage.index);
    EXPECT_EQ(a.compact.garbage.rule, b.compact.garbage.rule);
    EXPECT_EQ(a.compact.decorrelation, b.compact.decorrelation);
    EXPECT_EQ(a.compact.ancilla, b.compact.ancilla);
    EXPECT_EQ(a.compact.postselect_probability, b.compact.postselect_probability);
    for (std::size_t k = 0; k < a.compact.state.dim(); ++k) EXPECT_EQ(a.compact.state[k], b.compact.state[k]);
  }
}

TEST(CompactArchive, MalformedLineRejected) {
  std::stringstream buf("{\"sample\": 0, \"label\": 1}\n");
  expect_error(ErrorCode::kParse, [&] { read_compact_archive(buf); });
}

TEST(Compress, BarsAndStripesDatasetIsExact) {
  // Every 4x4 pattern is already a product across the row/column cut.
  const auto samples = enumerate_bas(4);
  const auto p = QubitPartition::halves(4);
  for (const auto& s : samples) {
    const auto cert = split_subsystems(s.state, p, 1e-9);
    EXPECT_GE(std::sqrt(cert.schmidt_fidelity), std::sqrt(1.0 - cert.residual) - 1e-12);
    const auto c = compress(cert);
    EXPECT_EQ(c.state.n_qubits(), 3u);
    EXPECT_NEAR(fidelity_pure(decompress_product(c), s.state), 1.0, 1e-10);
  }
}

}  // namespace
}  // namespace subpure
