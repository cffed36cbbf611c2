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

#ifndef SUBPURE_TRACE_H_
#define SUBPURE_TRACE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "subpure/error.h"

namespace subpure {

/// One optimizer iteration. `cost` is the objective at the iterate before the
/// update; `step_l1` is |delta theta|_1 of the update taken afterwards.
struct TraceRecord {
  std::size_t iteration = 0;
  double cost = 0.0;
  double residual = 0.0;             // distance to the ideal cost (stage 1: 2 - C)
  double normalized_residual = 0.0;  // stage 1: (2 - C) / 2
  double grad_l1 = 0.0;
  double step_l1 = 0.0;
  double cum_delta_theta_l1 = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using TrainTrace = std::vector<TraceRecord>;

/// Cumulative sum of per-step |delta theta|_1, recomputed from the records.
std::vector<double> delta_theta_l1(const TrainTrace& trace);

/// Raised when an optimizer meets a non-finite cost; carries the trace so far.
class TrainingDivergence : public Error {
 public:
  TrainingDivergence(const std::string& what, TrainTrace trace)
      : Error(ErrorCode::kTrainingDivergence, what), trace_(std::move(trace)) {}
  const TrainTrace& trace() const { return trace_; }

 private:
  TrainTrace trace_;
};

inline constexpr const char* kTraceCsvHeader =
    "iteration,cost,residual,normalized_residual,grad_l1,step_l1,cum_delta_theta_l1";

/// Versioned CSV (schema line "# subpure-trace v1" then header); doubles
/// printed with 17 significant digits so the file round-trips exactly.
void write_trace_csv(std::ostream& out, const TrainTrace& trace);
TrainTrace read_trace_csv(std::istream& in);

}  // namespace subpure

#endif  // SUBPURE_TRACE_H_
