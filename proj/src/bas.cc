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

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "json.hpp"
#include "subpure/error.h"

namespace subpure {

std::string_view bas_kind_name(BasKind kind) { return kind == BasKind::kBars ? "bars" : "stripes"; }

BasKind parse_bas_kind(std::string_view name) {
  if (name == "bars") return BasKind::kBars;
  if (name == "stripes") return BasKind::kStripes;
  throw Error(ErrorCode::kParse, "unknown BAS kind '" + std::string(name) + "'");
}

bool BasGrid::pixel(unsigned row, unsigned col) const {
  const unsigned line = kind == BasKind::kBars ? col : row;
  return (mask >> line) & 1;
}

std::size_t BasGrid::lit_count() const { return static_cast<std::size_t>(std::popcount(mask)) * side; }

std::vector<std::uint8_t> BasGrid::pixels() const {
  std::vector<std::uint8_t> out(std::size_t{side} * side);
  for (unsigned r = 0; r < side; ++r) {
    for (unsigned c = 0; c < side; ++c) out[std::size_t{r} * side + c] = pixel(r, c) ? 1 : 0;
  }
  return out;
}

unsigned log2_side(unsigned side) {
  if (side < 2 || side > 32 || !std::has_single_bit(side)) {
    throw Error(ErrorCode::kConfiguration, "grid side must be a power of two in [2, 32], got " +
                                               std::to_string(side));
  }
  return static_cast<unsigned>(std::countr_zero(side));
}

StateVector encode_amplitude(const BasGrid& grid) {
  const unsigned k = log2_side(grid.side);
  const std::size_t lit = grid.lit_count();
  if (lit == 0) throw Error(ErrorCode::kEncoding, "cannot amplitude-encode an empty grid");
  const double a = 1.0 / std::sqrt(static_cast<double>(lit));
  std::vector<Amplitude> amps(std::size_t{1} << (2 * k));
  const auto px = grid.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) amps[i] = px[i] ? a : 0.0;
  return StateVector(std::move(amps));
}

std::size_t bas_count(unsigned side) {
  log2_side(side);
  return 2 * ((std::size_t{1} << side) - 2);
}

namespace {

// Position p in [0, bas_count) -> grid, matching enumerate_bas order.
BasGrid grid_at(unsigned side, std::size_t p) {
  const std::size_t per_kind = (std::size_t{1} << side) - 2;
  const BasKind kind = p < per_kind ? BasKind::kBars : BasKind::kStripes;
  return BasGrid{side, kind, (p % per_kind) + 1};
}

BasSample make_sample(const BasGrid& g) { return BasSample{g, bas_label(g.kind), encode_amplitude(g)}; }

}  // namespace

std::vector<BasSample> enumerate_bas(unsigned side) {
  const std::size_t total = bas_count(side);
  std::vector<BasSample> out;
  out.reserve(total);
  for (std::size_t p = 0; p < total; ++p) out.push_back(make_sample(grid_at(side, p)));
  return out;
}

std::vector<BasSample> sample_dataset(unsigned side, std::size_t count, std::uint64_t seed) {
  const std::size_t total = bas_count(side);
  if (count > total) {
    throw Error(ErrorCode::kSampling, "requested " + std::to_string(count) + " samples but only " +
                                          std::to_string(total) + " patterns exist");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picks;
  picks.reserve(count);
  // Selection sampling (Knuth's algorithm S) keeps the draw uniform and the
  // output in enumeration order; then shuffle for a random presentation order.
  std::size_t needed = count;
  for (std::size_t p = 0; p < total && needed > 0; ++p) {
    std::uniform_int_distribution<std::size_t> u(0, total - p - 1);
    if (u(rng) < needed) {
      picks.push_back(p);
      --needed;
    }
  }
  std::shuffle(picks.begin(), picks.end(), rng);
  std::vector<BasSample> out;
  out.reserve(count);
  for (std::size_t p : picks) out.push_back(make_sample(grid_at(side, p)));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<BasSample>& samples, std::size_t train_count, std::uint64_t seed) {
  if (train_count >= samples.size()) {
    throw Error(ErrorCode::kConfiguration, "train count must be smaller than the dataset");
  }
  std::vector<std::size_t> bars, stripes;
  for (std::size_t i = 0; i < samples.size(); ++i) (samples[i].label > 0 ? bars : stripes).push_back(i);
  std::mt19937_64 rng(seed);
  std::shuffle(bars.begin(), bars.end(), rng);
  std::shuffle(stripes.begin(), stripes.end(), rng);

  const double share = static_cast<double>(bars.size()) / static_cast<double>(samples.size());
  auto bars_train = static_cast<std::size_t>(std::llround(share * static_cast<double>(train_count)));
  bars_train = std::min(bars_train, bars.size());
  if (train_count - bars_train > stripes.size()) bars_train = train_count - stripes.size();
  const std::size_t stripes_train = train_count - bars_train;

  std::vector<std::size_t> train(bars.begin(), bars.begin() + static_cast<std::ptrdiff_t>(bars_train));
  train.insert(train.end(), stripes.begin(), stripes.begin() + static_cast<std::ptrdiff_t>(stripes_train));
  std::vector<std::size_t> test(bars.begin() + static_cast<std::ptrdiff_t>(bars_train), bars.end());
  test.insert(test.end(), stripes.begin() + static_cast<std::ptrdiff_t>(stripes_train), stripes.end());
  std::shuffle(train.begin(), train.end(), rng);
  std::shuffle(test.begin(), test.end(), rng);
  return {std::move(train), std::move(test)};
}

std::pair<std::vector<BasSample>, std::vector<BasSample>> split_train_test(
    const std::vector<BasSample>& samples, std::size_t train_count, std::uint64_t seed) {
  auto [ti, si] = split_indices(samples, train_count, seed);
  std::pair<std::vector<BasSample>, std::vector<BasSample>> out;
  for (std::size_t i : ti) out.first.push_back(samples[i]);
  for (std::size_t i : si) out.second.push_back(samples[i]);
  return out;
}

void write_dataset(std::ostream& out, const std::vector<BasSample>& samples) {
  for (const auto& s : samples) {
    nlohmann::ordered_json rec;
    rec["side"] = s.grid.side;
    rec["kind"] = bas_kind_name(s.grid.kind);
    rec["mask"] = s.grid.mask;
    rec["label"] = s.label;
    out << rec.dump() << '\n';
  }
}

std::vector<BasSample> read_dataset(std::istream& in) {
  std::vector<BasSample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      BasGrid g{rec.at("side").get<unsigned>(), parse_bas_kind(rec.at("kind").get<std::string>()),
                rec.at("mask").get<std::uint64_t>()};
      log2_side(g.side);
      const std::uint64_t full = (std::uint64_t{1} << g.side) - 1;
      if (g.mask == 0 || g.mask >= full) throw Error(ErrorCode::kParse, "mask outside the BAS range");
      const int label = rec.at("label").get<int>();
      if (label != bas_label(g.kind)) throw Error(ErrorCode::kParse, "label does not match kind");
      out.push_back(make_sample(g));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace subpure
