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

#include "subpure/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "subpure/compressor.h"
#include "subpure/parallel.h"

#ifndef SUBPURE_VERSION
#define SUBPURE_VERSION "0.0.0"
#endif

namespace subpure {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string_view library_version() { return SUBPURE_VERSION; }

std::string_view ansatz_mode_name(AnsatzMode m) {
  return m == AnsatzMode::kGeneric ? "generic" : "block-diagonal";
}

AnsatzMode parse_ansatz_mode(std::string_view name) {
  if (name == "generic") return AnsatzMode::kGeneric;
  if (name == "block-diagonal") return AnsatzMode::kBlockDiagonal;
  throw Error(ErrorCode::kConfiguration, "unknown ansatz mode '" + std::string(name) + "'");
}

ClassifierConfig ClassifierSettings::build(unsigned n_qubits) const {
  ClassifierConfig c = mode == AnsatzMode::kGeneric ? ClassifierConfig::generic(n_qubits, depth)
                                                    : ClassifierConfig::block_diagonal(n_qubits, depth);
  c.learning_rate = learning_rate;
  c.max_iters = max_iters;
  c.seed = seed;
  c.reweight = reweight;
  if (readout_qubit) c.readout_qubit = *readout_qubit;
  return c;
}

PipelineConfig PipelineConfig::defaults(unsigned side, std::uint64_t seed) {
  PipelineConfig c;
  c.side = side;
  c.data_seed = seed;
  c.stage1.depth = side <= 8 ? 3 : 5;
  c.stage1.learning_rate = 0.5;
  c.stage1.seed = seed;
  c.stage1.minibatch_seed = seed;
  c.classifier.seed = seed;
  return c;
}

std::size_t PipelineConfig::resolved_samples() const {
  if (samples != 0) return samples;
  return side <= 8 ? bas_count(side) : 1000;
}

std::size_t PipelineConfig::resolved_train_count() const {
  if (train_count != 0) return train_count;
  const std::size_t n = resolved_samples();
  return std::clamp<std::size_t>(n * 400 / 508, 1, n > 1 ? n - 1 : 1);
}

unsigned PipelineConfig::n_qubits() const { return 2 * log2_side(side); }

void PipelineConfig::validate() const {
  const unsigned n = n_qubits();
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfiguration, msg); };
  const std::size_t count = resolved_samples();
  if (count < 2 || count > bas_count(side)) {
    fail("sample count must be between 2 and " + std::to_string(bas_count(side)));
  }
  const std::size_t train = resolved_train_count();
  if (train == 0 || train >= count) fail("train count must leave at least one test sample");
  stage1.validate();
  if (!(product_tolerance >= 0.0)) fail("product tolerance must be non-negative");
  if (swap_test && swap_test->shots == 0) fail("shot budget must be positive");
  if (run_id.empty() || run_id.find('/') != std::string::npos || run_id == "." || run_id == "..") {
    fail("run id must be a plain directory name");
  }
  classifier.build(n / 2 + 1).validate();
}

ojson PipelineConfig::to_json() const {
  ojson j;
  j["side"] = side;
  j["n_qubits"] = n_qubits();
  j["samples"] = resolved_samples();
  j["train_count"] = resolved_train_count();
  j["data_seed"] = data_seed;
  ojson s1;
  s1["depth"] = stage1.depth;
  s1["learning_rate"] = stage1.learning_rate;
  s1["max_iters"] = stage1.max_iters;
  s1["convergence_tol"] = stage1.convergence_tol;
  s1["minibatch_size"] = stage1.minibatch_size ? ojson(*stage1.minibatch_size) : ojson(nullptr);
  s1["minibatch_seed"] = stage1.minibatch_seed;
  s1["seed"] = stage1.seed;
  j["stage1"] = s1;
  j["product_tolerance"] = product_tolerance;
  ojson cl;
  const ClassifierConfig built = classifier.build(n_qubits() / 2 + 1);
  cl["ansatz_mode"] = ansatz_mode_name(classifier.mode);
  cl["depth"] = classifier.depth;
  cl["learning_rate"] = classifier.learning_rate;
  cl["max_iters"] = classifier.max_iters;
  cl["readout_qubit"] = built.readout_qubit;
  cl["seed"] = classifier.seed;
  cl["reweight"] = classifier.reweight;
  j["classifier"] = cl;
  if (swap_test) {
    j["swap_test"] = {{"shots", swap_test->shots}, {"seed", swap_test->seed}};
  } else {
    j["swap_test"] = nullptr;
  }
  j["run_id"] = run_id;
  return j;
}

namespace {

constexpr const char* kDatasetFile = "dataset.jsonl";
constexpr const char* kSplitFile = "split.json";
constexpr const char* kStage1File = "stage1.json";
constexpr const char* kStage1TraceFile = "stage1_trace.csv";
constexpr const char* kSwapTestFile = "swap_test.csv";
constexpr const char* kCompactFile = "compact.jsonl";
constexpr const char* kCompactMetricsFile = "compact_metrics.csv";
constexpr const char* kClassifierFile = "classifier.json";
constexpr const char* kClassifierTraceFile = "classifier_trace.csv";
constexpr const char* kEvalFile = "eval.json";
constexpr const char* kReportFile = "report.json";
constexpr const char* kManifestFile = "manifest.json";

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + p.string());
  return in;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + p.string());
  return out;
}

nlohmann::json read_json(const fs::path& p) {
  auto in = open_in(p);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, p.filename().string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const ojson& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

// Fraction of steps after which the recorded cost moved in the desired direction.
double monotone_fraction(const TrainTrace& trace, bool ascending) {
  if (trace.size() < 2) return 1.0;
  std::size_t good = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double d = trace[i].cost - trace[i - 1].cost;
    good += ascending ? d >= 0.0 : d <= 0.0;
  }
  return static_cast<double>(good) / static_cast<double>(trace.size() - 1);
}

void write_trace(const fs::path& p, const TrainTrace& trace) {
  auto out = open_out(p);
  write_trace_csv(out, trace);
}

std::vector<BasSample> load_dataset(const fs::path& dir) {
  auto in = open_in(dir / kDatasetFile);
  return read_dataset(in);
}

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

Split load_split(const fs::path& dir) {
  const auto j = read_json(dir / kSplitFile);
  try {
    return Split{j.at("train").get<std::vector<std::size_t>>(), j.at("test").get<std::vector<std::size_t>>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(kSplitFile) + ": " + e.what());
  }
}

struct Encoder {
  LayeredAnsatz ansatz;
  ParamVector params;
  QubitPartition partition;
  std::size_t samples = 0;
};

Encoder load_encoder(const fs::path& dir) {
  const auto j = read_json(dir / kStage1File);
  const auto [a, params] = checkpoint_from_json(j);
  const auto* layered = std::get_if<LayeredAnsatz>(&a);
  if (!layered) throw Error(ErrorCode::kParse, "encoder checkpoint is not a layered ansatz");
  try {
    QubitPartition p{j.at("partition").at("a").get<std::vector<unsigned>>(),
                     j.at("partition").at("b").get<std::vector<unsigned>>()};
    p.validate(layered->n_qubits);
    return Encoder{*layered, params, std::move(p), j.at("samples").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(kStage1File) + ": " + e.what());
  }
}

std::vector<CompactRecord> load_compact(const fs::path& dir) {
  auto in = open_in(dir / kCompactFile);
  return read_compact_archive(in);
}

std::vector<LabeledState> select(const std::vector<CompactRecord>& records, const std::vector<std::size_t>& which) {
  std::vector<LabeledState> out;
  out.reserve(which.size());
  for (std::size_t i : which) {
    if (i >= records.size() || records[i].sample_index != i) {
      throw Error(ErrorCode::kParse, "compact archive does not cover sample " + std::to_string(i));
    }
    out.push_back(LabeledState{records[i].compact.state, records[i].label});
  }
  return out;
}

struct Classifier {
  ClassifierConfig config;
  ParamVector params;
};

Classifier load_classifier(const fs::path& dir) {
  const auto j = read_json(dir / kClassifierFile);
  auto [a, params] = checkpoint_from_json(j);
  try {
    Classifier c;
    c.config.ansatz = std::move(a);
    c.config.readout_qubit = j.at("readout_qubit").get<unsigned>();
    c.config.reweight = j.at("reweight").get<bool>();
    c.config.validate();
    c.params = std::move(params);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(kClassifierFile) + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

template <typename T>
T parse_number(const std::string& s, const char* file) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, std::string(file) + ": bad number '" + s + "'");
  }
  return v;
}

// Rows of a headed CSV as name -> cell maps.
std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p, const std::string& header) {
  auto in = open_in(p);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorCode::kParse, p.filename().string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  return rows;
}

constexpr const char* kSwapHeader = "sample,subsystem,exact_purity,estimate,standard_error,shots";
constexpr const char* kMetricsHeader =
    "sample,label,residual,schmidt_fidelity,garbage_index,postselect_probability,roundtrip_fidelity";

}  // namespace

ojson run_gen_data(const PipelineConfig& config) {
  const fs::path dir = config.run_dir();
  const std::size_t count = config.resolved_samples();
  const auto samples = count == bas_count(config.side) ? enumerate_bas(config.side)
                                                       : sample_dataset(config.side, count, config.data_seed);
  {
    auto out = open_out(dir / kDatasetFile);
    write_dataset(out, samples);
  }
  const auto [train, test] = split_indices(samples, config.resolved_train_count(), config.data_seed);
  ojson split;
  split["seed"] = config.data_seed;
  split["train"] = train;
  split["test"] = test;
  write_json(dir / kSplitFile, split);

  const auto bars = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const BasSample& s) { return s.label == 1; }));
  ojson info;
  info["samples"] = samples.size();
  info["bars"] = bars;
  info["stripes"] = samples.size() - bars;
  info["train"] = train.size();
  info["test"] = test.size();
  return info;
}

ojson run_train_encoder(const PipelineConfig& config) {
  const fs::path dir = config.run_dir();
  const auto states = dataset_states(load_dataset(dir));
  Stage1Config s1 = config.stage1;
  if (!s1.partition) s1.partition = QubitPartition::halves(config.n_qubits());
  if (!states.empty() && states.front().n_qubits() != config.n_qubits()) {
    throw Error(ErrorCode::kDimension, "dataset does not match the configured grid side");
  }

  Stage1Result r;
  try {
    r = train_stage1(states, s1);
  } catch (const TrainingDivergence& e) {
    write_trace(dir / kStage1TraceFile, e.trace());
    throw;
  }
  write_trace(dir / kStage1TraceFile, r.trace);

  const double final_cost = purity_cost(r.ansatz, r.params, states, r.partition);
  ojson ckpt = checkpoint_to_json(r.ansatz, r.params);
  ckpt["partition"] = {{"a", r.partition.subsystem_a}, {"b", r.partition.subsystem_b}};
  ckpt["samples"] = states.size();
  ckpt["converged"] = r.converged;
  ckpt["final_residual"] = 2.0 - final_cost;
  write_json(dir / kStage1File, ckpt);

  ojson info;
  info["iterations"] = r.trace.size();
  info["converged"] = r.converged;
  info["final_residual"] = 2.0 - final_cost;
  info["monotone_fraction"] = monotone_fraction(r.trace, true);

  if (config.swap_test) {
    const ShotBudget& b = *config.swap_test;
    auto out = open_out(dir / kSwapTestFile);
    out << kSwapHeader << '\n';
    std::size_t within = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const StateVector o = apply_ansatz(r.ansatz, r.params, states[i]);
      for (Subsystem s : {Subsystem::kA, Subsystem::kB}) {
        const std::uint64_t seed = b.seed + 2 * i + (s == Subsystem::kB);
        const auto est = estimate_purity(o, r.partition, s, ShotBudget{b.shots, seed});
        const double exact = purity(partial_trace(o, r.partition, s));
        // A +-1 parity with mean p has variance 1 - p^2; the sample estimate
        // collapses to zero for near-pure outputs, so the exact value is used here.
        const double se = std::sqrt(std::max(0.0, 1.0 - exact * exact) / static_cast<double>(b.shots));
        within += std::abs(est.raw_mean - exact) <= 3.0 * se + 1e-12;
        out << i << ',' << (s == Subsystem::kA ? "A" : "B") << ',' << fmt(exact) << ',' << fmt(est.estimate) << ','
            << fmt(est.standard_error) << ',' << est.shots_used << '\n';
      }
    }
    info["swap_test_estimates"] = 2 * states.size();
    info["swap_test_within_3se"] = within;  // binomial standard error at the exact purity
  }
  return info;
}

ojson run_compress(const PipelineConfig& config) {
  const fs::path dir = config.run_dir();
  const auto samples = load_dataset(dir);
  const Encoder enc = load_encoder(dir);
  if (enc.samples != samples.size()) throw Error(ErrorCode::kParse, "encoder checkpoint and dataset disagree");

  struct Row {
    CompactRecord record;
    double schmidt_fidelity = 0.0;
    double roundtrip = 0.0;
  };
  std::vector<Row> rows(samples.size());
  std::vector<std::optional<Error>> errors(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    try {
      const StateVector out = apply_ansatz(enc.ansatz, enc.params, samples[i].state);
      const auto cert = split_subsystems(out, enc.partition, config.product_tolerance);
      Row& row = rows[i];
      row.record = CompactRecord{i, samples[i].label, compress(cert), cert.residual, kStage1File};
      row.schmidt_fidelity = cert.schmidt_fidelity;
      row.roundtrip = fidelity_pure(decompress(row.record.compact, enc.ansatz, enc.params), samples[i].state);
    } catch (const Error& e) {
      errors[i] = e;
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) throw Error(errors[i]->code(), "sample " + std::to_string(i) + ": " + errors[i]->message());
  }

  std::vector<CompactRecord> records;
  records.reserve(rows.size());
  double fid_sum = 0.0, fid_min = 1.0, p_sum = 0.0;
  {
    auto out = open_out(dir / kCompactMetricsFile);
    out << kMetricsHeader << '\n';
    for (const Row& row : rows) {
      const auto& r = row.record;
      out << r.sample_index << ',' << r.label << ',' << fmt(r.stage1_residual) << ',' << fmt(row.schmidt_fidelity)
          << ',' << r.compact.garbage.index << ',' << fmt(r.compact.postselect_probability) << ','
          << fmt(row.roundtrip) << '\n';
      fid_sum += row.roundtrip;
      fid_min = std::min(fid_min, row.roundtrip);
      p_sum += r.compact.postselect_probability;
      records.push_back(r);
    }
  }
  {
    auto out = open_out(dir / kCompactFile);
    write_compact_archive(out, records);
  }
  const auto n = static_cast<double>(rows.size());
  ojson info;
  info["compact_qubits"] = records.empty() ? 0u : records.front().compact.state.n_qubits();
  info["mean_roundtrip_fidelity"] = fid_sum / n;
  info["min_roundtrip_fidelity"] = fid_min;
  info["mean_postselect_probability"] = p_sum / n;
  return info;
}

ojson run_train_classifier(const PipelineConfig& config) {
  const fs::path dir = config.run_dir();
  const auto records = load_compact(dir);
  const Split split = load_split(dir);
  const auto train = select(records, split.train);
  const ClassifierConfig cc = config.classifier.build(train.front().state.n_qubits());

  ClassifierResult r;
  try {
    r = train_classifier(train, cc);
  } catch (const TrainingDivergence& e) {
    write_trace(dir / kClassifierTraceFile, e.trace());
    throw;
  }
  write_trace(dir / kClassifierTraceFile, r.trace);
  ojson ckpt = checkpoint_to_json(cc.ansatz, r.params);
  ckpt["readout_qubit"] = cc.readout_qubit;
  ckpt["reweight"] = cc.reweight;
  write_json(dir / kClassifierFile, ckpt);

  ojson info;
  info["iterations"] = r.trace.size();
  info["initial_cost"] = r.trace.front().cost;
  info["final_cost"] = r.trace.back().cost;
  info["monotone_fraction"] = monotone_fraction(r.trace, false);
  return info;
}

ojson run_evaluate(const PipelineConfig& config) {
  const fs::path dir = config.run_dir();
  const auto records = load_compact(dir);
  const Split split = load_split(dir);
  const Classifier c = load_classifier(dir);
  const auto train = evaluate(c.params, select(records, split.train), c.config);
  const auto test = evaluate(c.params, select(records, split.test), c.config);
  ojson j;
  j["readout_qubit"] = c.config.readout_qubit;
  j["train"] = report_to_json(train);
  j["test"] = report_to_json(test);
  write_json(dir / kEvalFile, j);

  ojson info;
  info["train_accuracy"] = train.accuracy;
  info["test_accuracy"] = test.accuracy;
  return info;
}

ojson run_report(const PipelineConfig& config) {
  const auto r = report_shot_budget(config.run_dir());
  const ojson j = r.to_json();
  write_json(config.run_dir() / kReportFile, j);
  ojson info;
  info["evaluations_per_iteration"] = r.evaluations_per_iteration;
  info["gaps"] = r.gaps;
  return info;
}

ojson ShotBudgetReport::to_json() const {
  const auto opt = [](const std::optional<std::size_t>& v) { return v ? ojson(*v) : ojson(nullptr); };
  ojson j;
  j["stage1_samples"] = stage1_samples;
  j["stage1_parameters"] = stage1_parameters;
  j["evaluations_per_iteration"] = evaluations_per_iteration;
  j["stage1_iterations"] = stage1_iterations;
  j["stage1_evaluations"] = evaluations_per_iteration * stage1_iterations;
  j["swap_test_estimates"] = opt(swap_test_estimates);
  j["shots_per_estimate"] = opt(shots_per_estimate);
  j["total_shots"] = opt(total_shots);
  j["postselect_probabilities"] = postselect_probabilities;
  j["gaps"] = gaps;
  return j;
}

ShotBudgetReport report_shot_budget(const fs::path& run_dir) {
  ShotBudgetReport r;
  if (fs::exists(run_dir / kStage1File)) {
    const Encoder enc = load_encoder(run_dir);
    r.stage1_samples = enc.samples;
    r.stage1_parameters = enc.ansatz.parameter_count();
    r.evaluations_per_iteration = shift_evaluations_per_iteration(enc.samples, enc.ansatz);
  } else {
    r.gaps.emplace_back(std::string(kStage1File) + " missing: no circuit-evaluation count");
  }
  if (fs::exists(run_dir / kStage1TraceFile)) {
    auto in = open_in(run_dir / kStage1TraceFile);
    r.stage1_iterations = read_trace_csv(in).size();
  } else {
    r.gaps.emplace_back(std::string(kStage1TraceFile) + " missing: no iteration count");
  }
  if (fs::exists(run_dir / kSwapTestFile)) {
    const auto rows = read_csv_rows(run_dir / kSwapTestFile, kSwapHeader);
    std::size_t total = 0;
    std::optional<std::size_t> per;
    for (const auto& row : rows) {
      if (row.size() != 6) throw Error(ErrorCode::kParse, std::string(kSwapTestFile) + ": bad row");
      const auto shots = parse_number<std::size_t>(row[5], kSwapTestFile);
      total += shots;
      if (!per) per = shots;
      if (*per != shots) per.reset();
    }
    r.swap_test_estimates = rows.size();
    r.shots_per_estimate = per;
    r.total_shots = total;
  } else {
    r.gaps.emplace_back(std::string(kSwapTestFile) + " missing: swap-test mode was off, no shot counts");
  }
  if (fs::exists(run_dir / kCompactMetricsFile)) {
    for (const auto& row : read_csv_rows(run_dir / kCompactMetricsFile, kMetricsHeader)) {
      if (row.size() != 7) throw Error(ErrorCode::kParse, std::string(kCompactMetricsFile) + ": bad row");
      r.postselect_probabilities.push_back(parse_number<double>(row[5], kCompactMetricsFile));
    }
  } else {
    r.gaps.emplace_back(std::string(kCompactMetricsFile) + " missing: no post-selection probabilities");
  }
  return r;
}

ojson read_manifest(const fs::path& run_dir) {
  if (!fs::exists(run_dir / kManifestFile)) return ojson::object();
  auto in = open_in(run_dir / kManifestFile);
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string(kManifestFile) + ": " + e.what());
  }
}

namespace {

void record_stage(const PipelineConfig& config, std::string_view stage, ojson entry) {
  ojson old = read_manifest(config.run_dir());
  ojson m;
  m["version"] = library_version();
  m["run_id"] = config.run_id;
  m["config"] = config.to_json();
  ojson stages = ojson::object();
  for (const char* name : kStageNames) {
    if (name == stage) {
      stages[name] = entry;
    } else if (old.contains("stages") && old["stages"].contains(name)) {
      stages[name] = old["stages"][name];
    }
  }
  m["stages"] = stages;
  write_json(config.run_dir() / kManifestFile, m);
}

ojson dispatch(std::string_view stage, const PipelineConfig& config) {
  if (stage == "gen-data") return run_gen_data(config);
  if (stage == "train-encoder") return run_train_encoder(config);
  if (stage == "compress") return run_compress(config);
  if (stage == "train-classifier") return run_train_classifier(config);
  if (stage == "evaluate") return run_evaluate(config);
  if (stage == "report") return run_report(config);
  throw Error(ErrorCode::kConfiguration, "unknown stage '" + std::string(stage) + "'");
}

}  // namespace

void run_stage(std::string_view stage, const PipelineConfig& config) {
  config.validate();
  if (std::find(std::begin(kStageNames), std::end(kStageNames), stage) == std::end(kStageNames)) {
    throw Error(ErrorCode::kConfiguration, "unknown stage '" + std::string(stage) + "'");
  }
  ojson entry;
  try {
    ojson info = dispatch(stage, config);
    entry["status"] = "ok";
    entry["summary"] = std::move(info);
  } catch (const Error& e) {
    entry["status"] = "failed";
    entry["error_code"] = error_code_name(e.code());
    entry["error"] = e.what();
    record_stage(config, stage, entry);
    throw StageFailure(std::string(stage), e);
  } catch (const std::exception& e) {
    const Error wrapped(ErrorCode::kIo, e.what());
    entry["status"] = "failed";
    entry["error_code"] = error_code_name(wrapped.code());
    entry["error"] = e.what();
    record_stage(config, stage, entry);
    throw StageFailure(std::string(stage), wrapped);
  }
  record_stage(config, stage, entry);
}

void run_pipeline(const PipelineConfig& config) {
  config.validate();
  for (std::size_t i = 0; i < std::size(kStageNames); ++i) {
    try {
      run_stage(kStageNames[i], config);
    } catch (const StageFailure&) {
      for (std::size_t k = i + 1; k < std::size(kStageNames); ++k) {
        record_stage(config, kStageNames[k], ojson{{"status", "skipped"}});
      }
      throw;
    }
  }
}

}  // namespace subpure
