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

#ifndef SUBPURE_BAS_H_
#define SUBPURE_BAS_H_

// Bars-and-Stripes grids and their amplitude encodings.
//
// Pixels are flattened row-major (index = row * side + col), so with the
// library's MSB-first qubit ordering the first log2(side) qubits address the
// row and the last log2(side) qubits address the column.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subpure/state.h"

namespace subpure {

enum class BasKind { kBars, kStripes };

std::string_view bas_kind_name(BasKind kind);
BasKind parse_bas_kind(std::string_view name);

/// A bars grid lights every column whose bit is set in `mask`; a stripes grid
/// lights every such row. Bit j of the mask (LSB = 0) is column/row j.
struct BasGrid {
  unsigned side = 0;
  BasKind kind = BasKind::kBars;
  std::uint64_t mask = 0;

  bool pixel(unsigned row, unsigned col) const;
  std::size_t lit_count() const;
  /// Row-major pixel bitmap.
  std::vector<std::uint8_t> pixels() const;

  friend bool operator==(const BasGrid&, const BasGrid&) = default;
};

struct BasSample {
  BasGrid grid;
  int label = 0;  // +1 bars, -1 stripes
  StateVector state;
};

inline int bas_label(BasKind kind) { return kind == BasKind::kBars ? 1 : -1; }

/// Throws kConfiguration unless side is a power of two in [2, 32].
unsigned log2_side(unsigned side);

/// Amplitude at row * side + col equals pixel / sqrt(lit count).
StateVector encode_amplitude(const BasGrid& grid);

/// All bars then all stripes, each in increasing mask order, excluding the
/// blank and full masks. 2 * (2^side - 2) samples.
std::vector<BasSample> enumerate_bas(unsigned side);

/// Number of patterns enumerate_bas(side) would produce.
std::size_t bas_count(unsigned side);

/// `count` distinct samples drawn uniformly without replacement. Works for
/// side 16 without materializing all 131068 encodings.
std::vector<BasSample> sample_dataset(unsigned side, std::size_t count, std::uint64_t seed);

/// Label-stratified split: each class is shuffled and contributes in
/// proportion to its share, so balance is kept within one sample per class.
std::pair<std::vector<BasSample>, std::vector<BasSample>> split_train_test(
    const std::vector<BasSample>& samples, std::size_t train_count, std::uint64_t seed);

/// The same split expressed as positions into `samples`.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<BasSample>& samples, std::size_t train_count, std::uint64_t seed);

// Line-delimited JSON dataset file: one {"side","kind","mask","label"} record per line.
void write_dataset(std::ostream& out, const std::vector<BasSample>& samples);
std::vector<BasSample> read_dataset(std::istream& in);

}  // namespace subpure

#endif  // SUBPURE_BAS_H_
