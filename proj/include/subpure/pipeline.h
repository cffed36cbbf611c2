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

#ifndef SUBPURE_PIPELINE_H_
#define SUBPURE_PIPELINE_H_

// End-to-end experiment driver. Every stage reads its inputs from and writes
// its outputs to one run directory, so stages can also be run one at a time.
//
//   dataset.jsonl         gen-data          samples, plus split.json
//   stage1.json           train-encoder     encoder checkpoint
//   stage1_trace.csv
//   swap_test.csv                           only with a shot budget
//   compact.jsonl         compress          compact-state archive
//   compact_metrics.csv                     per-sample fidelities and post-selection
//   classifier.json       train-classifier
//   classifier_trace.csv
//   eval.json             evaluate          train and test reports
//   report.json           report            circuit and shot accounting
//   manifest.json                           config, seeds, stage status

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "subpure/classifier.h"
#include "subpure/encoder.h"

namespace subpure {

std::string_view library_version();

enum class AnsatzMode { kGeneric, kBlockDiagonal };

std::string_view ansatz_mode_name(AnsatzMode m);
AnsatzMode parse_ansatz_mode(std::string_view name);

struct ClassifierSettings {
  AnsatzMode mode = AnsatzMode::kGeneric;
  unsigned depth = 3;
  double learning_rate = 0.5;
  std::size_t max_iters = 100;
  std::optional<unsigned> readout_qubit;  // mode default when unset
  std::uint64_t seed = 1;
  bool reweight = false;

  /// Concrete configuration for compact states of `n_qubits` (ancilla included).
  ClassifierConfig build(unsigned n_qubits) const;
};

struct PipelineConfig {
  unsigned side = 8;
  std::size_t samples = 0;      // 0: every pattern up to side 8, 1000 above
  std::size_t train_count = 0;  // 0: 400 of 508, same fraction otherwise
  std::uint64_t data_seed = 1;  // sampling and train/test split
  Stage1Config stage1;
  double product_tolerance = 0.05;
  ClassifierSettings classifier;
  std::optional<ShotBudget> swap_test;
  std::filesystem::path out_dir = "out";
  std::string run_id = "default";

  /// Paper-scale defaults for a grid side: depth 3 up to 8x8, 5 above.
  static PipelineConfig defaults(unsigned side, std::uint64_t seed = 1);

  std::size_t resolved_samples() const;
  std::size_t resolved_train_count() const;
  unsigned n_qubits() const;
  std::filesystem::path run_dir() const { return out_dir / run_id; }

  /// Throws kConfiguration on inconsistent settings.
  void validate() const;

  nlohmann::ordered_json to_json() const;
};

inline constexpr const char* kStageNames[] = {"gen-data", "train-encoder", "compress", "train-classifier",
                                              "evaluate", "report"};

/// Raised by a stage; `stage` names it for the caller and the manifest.
class StageFailure : public Error {
 public:
  StageFailure(std::string stage, const Error& cause)
      : Error(cause.code(), cause.message()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Each stage returns a summary that run_stage() stores in the manifest.
nlohmann::ordered_json run_gen_data(const PipelineConfig& config);
nlohmann::ordered_json run_train_encoder(const PipelineConfig& config);
nlohmann::ordered_json run_compress(const PipelineConfig& config);
nlohmann::ordered_json run_train_classifier(const PipelineConfig& config);
nlohmann::ordered_json run_evaluate(const PipelineConfig& config);
nlohmann::ordered_json run_report(const PipelineConfig& config);

/// Runs one stage by name and records its outcome in the manifest. Throws
/// StageFailure after recording a failure.
void run_stage(std::string_view stage, const PipelineConfig& config);

/// All stages in order; stops at the first failure, marking the rest skipped.
void run_pipeline(const PipelineConfig& config);

struct ShotBudgetReport {
  std::size_t stage1_samples = 0;
  std::size_t stage1_parameters = 0;
  std::size_t evaluations_per_iteration = 0;  // N * (2P + 1)
  std::size_t stage1_iterations = 0;
  std::optional<std::size_t> swap_test_estimates;
  std::optional<std::size_t> shots_per_estimate;
  std::optional<std::size_t> total_shots;
  std::vector<double> postselect_probabilities;  // one per compressed sample
  std::vector<std::string> gaps;                  // missing inputs

  nlohmann::ordered_json to_json() const;
};

/// Circuit and shot accounting from a run directory's artifacts.
ShotBudgetReport report_shot_budget(const std::filesystem::path& run_dir);

nlohmann::ordered_json read_manifest(const std::filesystem::path& run_dir);

}  // namespace subpure

#endif  // SUBPURE_PIPELINE_H_
