// Copyright 2026 The ganpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GANPRIV_EXPERIMENT_HPP_
#define GANPRIV_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ganpriv/evaluation.hpp"
#include "ganpriv/trainers.hpp"

namespace ganpriv {

inline constexpr int kConfigSchemaVersion = 1;

struct DatasetConfig {
  std::string source = "mnist";
  std::int64_t subsample = 0;  // 0 keeps everything
  std::optional<std::pair<int, int>> resize;
  bool grayscale = false;
};

struct AttackConfig {
  int bins = kDefaultBins;
  bool blackbox = true;
  std::int64_t blackbox_epochs = 10;
  std::int64_t fake_score_samples = 1000;
};

struct EvaluationConfig {
  bool utility = true;
  std::int64_t memorization_samples = 2000;
  std::int64_t utility_samples = 10000;
  std::string classifier = "appendix4-classifier";
  std::int64_t oracle_epochs = 3;
  std::int64_t classifier_epochs = 10;
  std::int64_t gan_train_epochs = 3;
};

struct ExperimentConfig {
  std::string run_id;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "runs";
  DatasetConfig dataset;
  double train_fraction = 0.1;
  TrainConfig train;
  AttackConfig attack;
  EvaluationConfig evaluation;
  nlohmann::json source;  // the parsed document, for the config copy
};

// Throws ConfigError naming the offending field.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
// Stable hash of the canonical (sorted-key, compact) config document.
std::string config_fingerprint(const ExperimentConfig& config);

struct RunOptions {
  // Overrides config.output_dir when non-empty.
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> cache_dir;
  // Replace an existing run directory that already holds a report.
  bool force = false;
  std::function<void(const std::string&)> log;
};

struct RunResult {
  std::filesystem::path run_dir;
  MetricsReport report;
};

// Runs training, attacks and evaluation; writes every artifact into
// <output_dir>/<run_id>.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});
RunResult run_experiment(const std::filesystem::path& config_path, const RunOptions& options = {});

// Loss curves and per-snapshot score densities; returns the written files.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

// One CSV row per run (model, lambda, g, rho_tr_te, MIA, m, TVD, gan_test,
// gan_train); with more than one run also a privacy-utility scatter, and
// rho/MIA versus lambda when several lambda values are present.
std::vector<std::filesystem::path> compare_runs(const std::vector<std::filesystem::path>& run_dirs,
                                                const std::filesystem::path& out_dir);

}  // namespace ganpriv

#endif  // GANPRIV_EXPERIMENT_HPP_
