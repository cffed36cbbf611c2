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

#include "subpure/trace.h"

#include <sstream>

#include <gtest/gtest.h>

namespace subpure {
namespace {

TEST(DeltaThetaL1, SingleStep) {
  // One update with delta theta = (0.1, -0.2).
  TrainTrace t{TraceRecord{0, 1.0, 1.0, 0.5, 0.0, 0.1 + 0.2, 0.3}};
  EXPECT_NEAR(delta_theta_l1(t).back(), 0.3, 1e-15);
}

TEST(DeltaThetaL1, FlatForZeroSteps) {
  TrainTrace t(5);
  for (double v : delta_theta_l1(t)) EXPECT_EQ(v, 0.0);
}

TEST(TraceCsv, RoundTripIsExact) {
  TrainTrace t;
  double cum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double step = 1.0 / (3.0 + static_cast<double>(i));
    cum += step;
    t.push_back(TraceRecord{i, 1.2345678901234567 / (1 + i), 0.1 / 7 * i, 0.05 / 7 * i, 3.3e-17, step, cum});
  }
  std::stringstream ss;
  write_trace_csv(ss, t);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "# subpure-trace v1");
  const auto back = read_trace_csv(ss);
  EXPECT_EQ(back, t);
  std::stringstream again;
  write_trace_csv(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(TraceCsv, RejectsUnknownSchema) {
  std::stringstream ss("# other\n");
  EXPECT_THROW(read_trace_csv(ss), Error);
}

}  // namespace
}  // namespace subpure
