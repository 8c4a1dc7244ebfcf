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


#ifndef GANPRIV_EVALUATION_HPP_
#define GANPRIV_EVALUATION_HPP_

#include <torch/torch.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ganpriv/data_pipeline.hpp"
#include "ganpriv/mia_attacks.hpp"
#include "ganpriv/model_zoo.hpp"
#include "ganpriv/trainers.hpp"

namespace ganpriv {

struct ClassifierOptions {
  std::int64_t epochs = 5;
  std::int64_t batch_size = 32;
  OptimizerConfig optimizer{.name = "sgd", .learning_rate = 0.01, .momentum = 0.9};
};

struct Classifier {
  Network network;
  std::string training_source;  // "real" or "generated"
  // Accuracy on samples the classifier did not see; NaN if none were given.
  double accuracy_on_real_test = 0.0;
  std::int64_t num_classes = 0;

  // [N, num_classes] probabilities.
  torch::Tensor probabilities(const torch::Tensor& images) const;
  std::vector<std::int64_t> predict(const torch::Tensor& images) const;
  double accuracy(const torch::Tensor& images, const std::vector<std::int64_t>& labels) const;
};

// Trains on data[indices]. The recorded held-out accuracy uses
// `eval_indices` if given, otherwise every sample outside `indices`.
Classifier train_classifier(const LabeledDataset& data, std::span<const std::int64_t> indices,
                            const ArchSpec& spec, std::uint64_t seed,
                            const ClassifierOptions& options = {},
                            std::optional<std::span<const std::int64_t>> eval_indices = std::nullopt);

// Trains on an explicit (images, labels) set; no held-out accuracy.
Classifier fit_classifier(const torch::Tensor& images, const std::vector<std::int64_t>& labels,
                          const ArchSpec& spec, std::uint64_t seed,
                          const ClassifierOptions& options, std::string training_source);

// Generated samples labelled by the oracle's argmax.
struct PseudoLabeled {
  torch::Tensor images;
  std::vector<std::int64_t> labels;
};
PseudoLabeled pseudo_label(const Network& generator, const Classifier& oracle,
                           std::int64_t n_samples, std::uint64_t seed);

double gan_test(const Classifier& eval_classifier, const Classifier& oracle,
                const Network& generator, std::int64_t n_samples, std::uint64_t seed);

double gan_train(const Network& generator, const Classifier& oracle,
                 const LabeledDataset& real_test, std::int64_t n_samples, const ArchSpec& spec,
                 std::uint64_t seed, const ClassifierOptions& options = {});

std::vector<std::int64_t> class_distribution(const Network& generator, const Classifier& oracle,
                                             std::int64_t n_samples, std::uint64_t seed);

// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

struct MetricsReport {
  std::string run_id;
  std::string trainer;
  std::optional<double> lambda;
  std::int64_t n_train = 0;
  std::int64_t pool_size = 0;
  double mia_prior = 0.0;
  std::optional<double> gap;
  std::optional<double> gap_log;
  std::optional<double> rho_tr_te;
  std::optional<double> rho_tr_fake;
  std::optional<double> memorization;
  std::optional<double> mia_whitebox;
  std::optional<double> mia_blackbox;
  std::optional<double> tvd;
  std::optional<double> fano_bound;       // bits
  std::optional<double> fano_bound_nats;
  std::optional<double> bayes_error_lower;
  std::optional<double> bayes_error_upper;
  std::optional<double> gan_test;
  std::optional<double> gan_train;
  std::optional<std::vector<std::int64_t>> class_histogram;
  std::int64_t generator_parameters = 0;
  std::int64_t discriminator_parameters = 0;
  std::string config_fingerprint;
  nlohmann::json metadata = nlohmann::json::object();

  // Skipped fields are written as null and listed under "skipped".
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
  static std::string csv_header();
  std::string csv_row() const;
};

struct EvalAssets {
  std::optional<Classifier> oracle;           // trained on the full corpus
  std::optional<Classifier> eval_classifier;  // trained on the train split
  std::optional<LabeledDataset> real_test;    // labelled holdout samples
};

struct ReportOptions {
  std::string run_id;
  std::string config_fingerprint;
  int bins = kDefaultBins;
  std::int64_t memorization_samples = 2000;
  std::int64_t utility_samples = 10000;
  std::int64_t fake_score_samples = 1000;
  bool run_blackbox = true;
  // Epochs and seeds for the auxiliary GAN; the architecture is taken from
  // the bundle.
  std::int64_t blackbox_epochs = 10;
  bool run_utility = true;
  ClassifierOptions gan_train_classifier;
  std::uint64_t seed = 99;
};

MetricsReport privacy_utility_report(const TrainedBundle& bundle, const AttackPool& pool,
                                     const EvalAssets& assets, const ReportOptions& options);

}  // namespace ganpriv

#endif  // GANPRIV_EVALUATION_HPP_
