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

#include "subpure/bas.h"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "subpure/error.h"

namespace subpure {
namespace {

std::set<std::pair<int, std::uint64_t>> keys(const std::vector<BasSample>& v) {
  std::set<std::pair<int, std::uint64_t>> out;
  for (const auto& s : v) out.emplace(static_cast<int>(s.grid.kind), s.grid.mask);
  return out;
}

TEST(Enumerate, PublishedCounts) {
  EXPECT_EQ(enumerate_bas(8).size(), 508u);
  EXPECT_EQ(enumerate_bas(16).size(), 131068u);
}

TEST(Enumerate, CountFormulaAndBalance) {
  for (unsigned side : {2u, 4u, 8u, 16u}) {
    const auto all = enumerate_bas(side);
    EXPECT_EQ(all.size(), (std::size_t{1} << (side + 1)) - 4);
    std::size_t bars = 0;
    for (const auto& s : all) bars += s.label == 1;
    EXPECT_EQ(2 * bars, all.size());
    EXPECT_EQ(keys(all).size(), all.size());
  }
}

TEST(Enumerate, SideTwoExhaustive) {
  const auto all = enumerate_bas(2);
  ASSERT_EQ(all.size(), 4u);
  // Bars light one column, stripes one row; 2x2 pixels row-major.
  EXPECT_EQ(all[0].grid.pixels(), (std::vector<std::uint8_t>{1, 0, 1, 0}));
  EXPECT_EQ(all[1].grid.pixels(), (std::vector<std::uint8_t>{0, 1, 0, 1}));
  EXPECT_EQ(all[2].grid.pixels(), (std::vector<std::uint8_t>{1, 1, 0, 0}));
  EXPECT_EQ(all[3].grid.pixels(), (std::vector<std::uint8_t>{0, 0, 1, 1}));
  EXPECT_EQ(all[0].label, 1);
  EXPECT_EQ(all[3].label, -1);
}

TEST(Enumerate, GridInvariants) {
  for (const auto& s : enumerate_bas(4)) {
    const auto px = s.grid.pixels();
    std::size_t lit = 0;
    for (auto p : px) lit += p;
    EXPECT_GT(lit, 0u);
    EXPECT_LT(lit, px.size());
    for (unsigned r = 0; r < 4; ++r) {
      for (unsigned c = 0; c < 4; ++c) {
        if (s.grid.kind == BasKind::kBars) {
          EXPECT_EQ(px[r * 4 + c], px[c]);
        } else {
          EXPECT_EQ(px[r * 4 + c], px[r * 4]);
        }
      }
    }
  }
}

TEST(Enumerate, NonPowerOfTwo) {
  try {
    enumerate_bas(6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

TEST(Encode, LeftColumn) {
  const auto s = encode_amplitude(BasGrid{2, BasKind::kBars, 0b01});
  const double a = 1 / std::sqrt(2.0);
  EXPECT_NEAR(s[0].real(), a, 1e-15);
  EXPECT_EQ(s[1], Amplitude(0.0));
  EXPECT_NEAR(s[2].real(), a, 1e-15);
  EXPECT_EQ(s[3], Amplitude(0.0));
}

TEST(Encode, QubitCounts) {
  EXPECT_EQ(encode_amplitude(BasGrid{8, BasKind::kBars, 5}).n_qubits(), 6u);
  EXPECT_EQ(encode_amplitude(BasGrid{16, BasKind::kStripes, 5}).n_qubits(), 8u);
}

TEST(Encode, EmptyGrid) {
  try {
    encode_amplitude(BasGrid{4, BasKind::kBars, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEncoding);
  }
}

TEST(Encode, NonnegativeUnitNorm) {
  for (const auto& s : enumerate_bas(8)) {
    EXPECT_NEAR(s.state.norm(), 1.0, 1e-12);
    for (std::size_t i = 0; i < s.state.dim(); ++i) {
      EXPECT_GE(s.state[i].real(), 0.0);
      EXPECT_EQ(s.state[i].imag(), 0.0);
    }
  }
}

TEST(Sample, SixteenByThousand) {
  const auto a = sample_dataset(16, 1000, 42);
  EXPECT_EQ(a.size(), 1000u);
  EXPECT_EQ(keys(a).size(), 1000u);
  const auto b = sample_dataset(16, 1000, 42);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].grid, b[i].grid);
  EXPECT_NE(keys(sample_dataset(16, 1000, 43)), keys(a));
}

TEST(Sample, ExhaustiveDrawIsTheEnumeration) {
  EXPECT_EQ(keys(sample_dataset(8, 508, 9)), keys(enumerate_bas(8)));
}

TEST(Sample, TooMany) {
  try {
    sample_dataset(8, 509, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSampling);
  }
}

TEST(Split, PaperProportions) {
  const auto all = enumerate_bas(8);
  const auto [train, test] = split_train_test(all, 400, 3);
  EXPECT_EQ(train.size(), 400u);
  EXPECT_EQ(test.size(), 108u);
  auto k = keys(train);
  for (const auto& s : test) EXPECT_TRUE(k.insert({static_cast<int>(s.grid.kind), s.grid.mask}).second);
  EXPECT_EQ(k.size(), 508u);
  for (const auto* part : {&train, &test}) {
    double bars = 0;
    for (const auto& s : *part) bars += s.label == 1;
    EXPECT_NEAR(bars / static_cast<double>(part->size()), 0.5, 0.05);
  }
}

TEST(Split, EdgeAndDeterminism) {
  const auto all = enumerate_bas(4);
  const auto [train, test] = split_train_test(all, all.size() - 1, 1);
  EXPECT_EQ(test.size(), 1u);
  const auto a = split_indices(all, 20, 5);
  const auto b = split_indices(all, 20, 5);
  EXPECT_EQ(a, b);
}

TEST(DatasetFile, RoundTrip) {
  const auto a = sample_dataset(16, 50, 1);
  std::stringstream ss;
  write_dataset(ss, a);
  const std::string text = ss.str();
  const auto b = read_dataset(ss);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].grid, b[i].grid);
    EXPECT_EQ(a[i].label, b[i].label);
  }
  std::stringstream again;
  write_dataset(again, b);
  EXPECT_EQ(again.str(), text);
}

TEST(DatasetFile, RejectsBadRecords) {
  std::stringstream bad(R"({"side":8,"kind":"bars","mask":255,"label":1})");
  EXPECT_THROW(read_dataset(bad), Error);
  std::stringstream mislabeled(R"({"side":8,"kind":"bars","mask":3,"label":-1})");
  EXPECT_THROW(read_dataset(mislabeled), Error);
}

}  // namespace
}  // namespace subpure
