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

// Command-line driver for the compression pipeline.
//
//   subpure run --side 8 --out out --run-id paper8
//   subpure train-encoder --side 8 --run-id paper8 --lr 0.5 --iters 500
//
// Exit status: 0 on success, 2 for a configuration error, 3 when a stage fails.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "subpure/pipeline.h"

namespace {

struct Options {
  unsigned side = 8;
  std::size_t samples = 0;
  std::size_t train = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> encoder_seed;
  unsigned depth = 0;
  double lr = 0.5;
  std::size_t iters = 500;
  double tol = 1e-3;
  std::optional<std::size_t> minibatch;
  double product_tol = 0.05;
  std::size_t shots = 0;
  std::optional<unsigned> readout;
  std::string ansatz_mode = "generic";
  unsigned classifier_depth = 3;
  double classifier_lr = 0.5;
  std::size_t classifier_iters = 100;
  std::optional<std::uint64_t> classifier_seed;
  bool reweight = false;
  std::string out = "out";
  std::string run_id = "default";
};

void add_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--side", o.side, "Grid side (power of two, 2-32)")->capture_default_str();
  cmd.add_option("--samples", o.samples, "Dataset size; 0 uses every pattern up to 8x8 and 1000 above");
  cmd.add_option("--train", o.train, "Training-set size; 0 keeps the 400/508 fraction");
  cmd.add_option("--seed", o.seed, "Seed for sampling, the split and every stage without its own seed")
      ->capture_default_str();
  cmd.add_option("--encoder-seed", o.encoder_seed, "Encoder initialization seed");
  cmd.add_option("--depth", o.depth, "Encoder depth; 0 picks 3 up to 8x8 and 5 above");
  cmd.add_option("--lr", o.lr, "Encoder learning rate")->capture_default_str();
  cmd.add_option("--iters", o.iters, "Encoder iteration cap")->capture_default_str();
  cmd.add_option("--tol", o.tol, "Stop once 2 - C falls below this")->capture_default_str();
  cmd.add_option("--minibatch", o.minibatch, "Encoder minibatch size (full batch when omitted)");
  cmd.add_option("--product-tol", o.product_tol, "Largest per-sample residual the compressor accepts")
      ->capture_default_str();
  cmd.add_option("--shots", o.shots, "Validate purities with swap tests of this many shots (0: off)");
  cmd.add_option("--readout", o.readout, "Classifier readout qubit");
  cmd.add_option("--ansatz-mode", o.ansatz_mode, "Classifier ansatz")
      ->check(CLI::IsMember({"generic", "block-diagonal"}))
      ->capture_default_str();
  cmd.add_option("--classifier-depth", o.classifier_depth, "Classifier depth")->capture_default_str();
  cmd.add_option("--classifier-lr", o.classifier_lr, "Classifier learning rate")->capture_default_str();
  cmd.add_option("--classifier-iters", o.classifier_iters, "Classifier iterations")->capture_default_str();
  cmd.add_option("--classifier-seed", o.classifier_seed, "Classifier initialization seed");
  cmd.add_flag("--reweight", o.reweight, "Equalize index-register branches (block-diagonal only)");
  cmd.add_option("--out", o.out, "Output root")->capture_default_str();
  cmd.add_option("--run-id", o.run_id, "Run directory name under --out")->capture_default_str();
}

subpure::PipelineConfig to_config(const Options& o) {
  auto c = subpure::PipelineConfig::defaults(o.side, o.seed);
  c.samples = o.samples;
  c.train_count = o.train;
  if (o.depth != 0) c.stage1.depth = o.depth;
  c.stage1.learning_rate = o.lr;
  c.stage1.max_iters = o.iters;
  c.stage1.convergence_tol = o.tol;
  c.stage1.minibatch_size = o.minibatch;
  if (o.encoder_seed) c.stage1.seed = *o.encoder_seed;
  c.product_tolerance = o.product_tol;
  if (o.shots > 0) c.swap_test = subpure::ShotBudget{o.shots, o.seed};
  c.classifier.mode = subpure::parse_ansatz_mode(o.ansatz_mode);
  c.classifier.depth = o.classifier_depth;
  c.classifier.learning_rate = o.classifier_lr;
  c.classifier.max_iters = o.classifier_iters;
  c.classifier.readout_qubit = o.readout;
  c.classifier.reweight = o.reweight;
  if (o.classifier_seed) c.classifier.seed = *o.classifier_seed;
  c.out_dir = o.out;
  c.run_id = o.run_id;
  return c;
}

void print_summary(const subpure::PipelineConfig& c, const std::string& stage) {
  const auto m = subpure::read_manifest(c.run_dir());
  for (const char* name : subpure::kStageNames) {
    if (stage != "run" && stage != name) continue;
    if (!m.contains("stages") || !m["stages"].contains(name)) continue;
    const auto& s = m["stages"][name];
    std::cout << name << ": " << s.value("status", "?");
    if (s.contains("summary")) std::cout << ' ' << s["summary"].dump();
    std::cout << '\n';
  }
  std::cout << "artifacts in " << c.run_dir().string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage variational compression of Bars-and-Stripes states"};
  app.set_version_flag("--version", std::string(subpure::library_version()));
  app.require_subcommand(1);

  Options opts;
  std::string chosen;
  const std::pair<const char*, const char*> commands[] = {
      {"gen-data", "Generate the dataset and train/test split"},
      {"train-encoder", "Train the purity-maximizing encoder"},
      {"compress", "Compress every encoded sample and check the round trip"},
      {"train-classifier", "Train the classifier on compact training states"},
      {"evaluate", "Score the classifier on both splits"},
      {"report", "Summarize circuit evaluations, shots and post-selection"},
      {"run", "Run every stage in order"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_options(*cmd, opts);
    cmd->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  subpure::PipelineConfig config;
  try {
    config = to_config(opts);
    config.validate();
  } catch (const subpure::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (chosen == "run") {
      subpure::run_pipeline(config);
    } else {
      subpure::run_stage(chosen, config);
    }
  } catch (const subpure::StageFailure& e) {
    std::cerr << "stage " << e.stage() << " failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  print_summary(config, chosen);
  return 0;
}
