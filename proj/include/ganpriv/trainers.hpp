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


#ifndef GANPRIV_TRAINERS_HPP_
#define GANPRIV_TRAINERS_HPP_

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ganpriv/data_pipeline.hpp"
#include "ganpriv/model_zoo.hpp"
#include "ganpriv/overfit_metrics.hpp"

namespace ganpriv {

enum class TrainerKind { kGan, kMegan, kMimgan };

std::string trainer_name(TrainerKind kind);
TrainerKind trainer_from_name(const std::string& name);

struct OptimizerConfig {
  std::string name = "adam";  // "adam" or "sgd"
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double momentum = 0.0;  // sgd only
};

std::unique_ptr<torch::optim::Optimizer> make_optimizer(const OptimizerConfig& config,
                                                        std::vector<torch::Tensor> params);

struct TrainSeeds {
  std::uint64_t generator_init = 1;
  std::uint64_t discriminator_init = 2;
  std::uint64_t adversary_init = 3;
  // Batch order, latent draws, pairing permutations and dropout.
  std::uint64_t training = 4;
};

struct TrainConfig {
  TrainerKind trainer = TrainerKind::kGan;
  std::int64_t batch_size = 64;
  // 0 selects the trainer default: 2 for MEGAN, 1 otherwise.
  std::int64_t generator_steps = 0;
  double lambda = 0.0;
  std::int64_t epochs = 1;
  OptimizerConfig optimizer;
  // Scores, snapshots and checkpoints every eval_every epochs (and at the
  // final epoch). 0 disables all three.
  std::int64_t eval_every = 0;
  TrainSeeds seeds;

  std::int64_t latent_dim = 100;
  ArchSpec generator;
  ArchSpec discriminator;
  std::optional<ArchSpec> adversary;  // defaults to appendix3-adversary

  std::int64_t snapshot_fake_samples = 1000;
  std::filesystem::path checkpoint_dir;  // empty: no checkpoints

  std::int64_t effective_generator_steps() const;
  void validate() const;
};

// Per-epoch record. Scores use the training-mode discriminator on the
// batches actually seen; rho_estimate is filled on eval epochs only.
struct EpochRecord {
  std::int64_t epoch = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  std::optional<double> a_loss;
  double mean_train_score = 0.0;
  double mean_fake_score = 0.0;
  double fake_entropy = 0.0;  // mean H(D(G(z))) in nats
  std::optional<double> rho_estimate;
};

struct ScoreSnapshot {
  std::int64_t epoch = 0;
  ScoreSet scores;  // eval-mode scores on train, holdout and fresh fakes
};

struct TrainedBundle {
  Network generator;
  Network discriminator;
  std::optional<Network> adversary;
  std::vector<EpochRecord> history;
  std::vector<ScoreSnapshot> snapshots;
  TrainConfig config;
  SplitIndices split;
};

struct TrainHooks {
  std::function<void(const EpochRecord&)> on_epoch;
};

// Loss primitives. All take discriminator logits so that they stay finite
// when the sigmoid saturates.
double binary_entropy(double p);
torch::Tensor binary_entropy(const torch::Tensor& p);
double gaussian_nll(const std::vector<double>& x, const std::vector<double>& mu,
                    const std::vector<double>& log_var);
// Per-row NLL, shape [B]. x is flattened to [B, d].
torch::Tensor gaussian_nll(const torch::Tensor& x, const AdversaryOutput& out);

torch::Tensor discriminator_loss(const torch::Tensor& real_logits,
                                 const torch::Tensor& fake_logits);
torch::Tensor gan_generator_loss(const torch::Tensor& fake_logits);
// mean[D log D + (1 - D) log(1 - D)] at D = sigmoid(fake_logits).
torch::Tensor megan_generator_loss(const torch::Tensor& fake_logits);
// mean[-log D + lambda * log N(x; mu, Sigma)]; adversary_raw is the [B, 2d]
// head output on the same fakes, paired_real the matched training images.
torch::Tensor mimgan_generator_loss(const torch::Tensor& fake_logits,
                                    const torch::Tensor& adversary_raw,
                                    const torch::Tensor& paired_real, double lambda);
torch::Tensor adversary_loss(const torch::Tensor& adversary_raw, const torch::Tensor& paired_real);

TrainedBundle train_gan(const TrainConfig& config, const LabeledDataset& data,
                        const SplitIndices& split, const TrainHooks& hooks = {});
TrainedBundle train_megan(const TrainConfig& config, const LabeledDataset& data,
                          const SplitIndices& split, const TrainHooks& hooks = {});
TrainedBundle train_mimgan(const TrainConfig& config, const LabeledDataset& data,
                           const SplitIndices& split, const TrainHooks& hooks = {});
// Dispatches on config.trainer.
TrainedBundle train(const TrainConfig& config, const LabeledDataset& data,
                    const SplitIndices& split, const TrainHooks& hooks = {});

// Columns: epoch,d_loss,g_loss,a_loss,mean_train_score,mean_fake_score,
// fake_entropy,rho_estimate. Absent values are empty cells.
void write_history_csv(const std::vector<EpochRecord>& history, const std::filesystem::path& path);
std::vector<EpochRecord> read_history_csv(const std::filesystem::path& path);

}  // namespace ganpriv

#endif  // GANPRIV_TRAINERS_HPP_
