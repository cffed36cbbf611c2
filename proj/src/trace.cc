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

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace subpure {

std::vector<double> delta_theta_l1(const TrainTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.size());
  double acc = 0.0;
  for (const auto& r : trace) {
    acc += r.step_l1;
    out.push_back(acc);
  }
  return out;
}

namespace {

constexpr const char* kSchemaLine = "# subpure-trace v1";

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParse, "bad number '" + field + "' in trace CSV");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const TrainTrace& trace) {
  out << kSchemaLine << '\n' << kTraceCsvHeader << '\n';
  for (const auto& r : trace) {
    out << r.iteration << ',' << fmt(r.cost) << ',' << fmt(r.residual) << ',' << fmt(r.normalized_residual)
        << ',' << fmt(r.grad_l1) << ',' << fmt(r.step_l1) << ',' << fmt(r.cum_delta_theta_l1) << '\n';
  }
}

TrainTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSchemaLine) throw Error(ErrorCode::kParse, "missing trace schema line");
  if (!std::getline(in, line) || line != kTraceCsvHeader) throw Error(ErrorCode::kParse, "unexpected trace header");
  TrainTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) throw Error(ErrorCode::kParse, "trace row has wrong field count");
    TraceRecord r;
    r.iteration = static_cast<std::size_t>(parse_double(fields[0]));
    r.cost = parse_double(fields[1]);
    r.residual = parse_double(fields[2]);
    r.normalized_residual = parse_double(fields[3]);
    r.grad_l1 = parse_double(fields[4]);
    r.step_l1 = parse_double(fields[5]);
    r.cum_delta_theta_l1 = parse_double(fields[6]);
    trace.push_back(r);
  }
  return trace;
}

}  // namespace subpure
