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


#ifndef GANPRIV_MIA_ATTACKS_HPP_
#define GANPRIV_MIA_ATTACKS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ganpriv/data_pipeline.hpp"
#include "ganpriv/model_zoo.hpp"
#include "ganpriv/overfit_metrics.hpp"
#include "ganpriv/random.hpp"
#include "ganpriv/trainers.hpp"

namespace ganpriv {

struct AttackResult {
  std::string attack;  // "dmia_whitebox" or "dmia_blackbox"
  std::vector<std::int64_t> predicted_members;  // pool indices, ascending
  double accuracy = 0.0;
  double prior = 0.0;
  ScoreSet score_snapshot;
  std::string config_fingerprint;

  nlohmann::json to_json() const;
};

enum class TieBreak {
  kDeterministic,  // score descending, then pool index ascending
  kRandom,         // uniformly random order among equal scores
};

// Top-n selection over precomputed scores; n is the number of members.
// `rng` is required for TieBreak::kRandom.
AttackResult top_n_attack(const ScoreSet& scores, const std::vector<std::uint8_t>& membership,
                          std::int64_t n_train, TieBreak ties = TieBreak::kDeterministic,
                          Rng* rng = nullptr);

AttackResult dmia_whitebox(const Network& discriminator, const AttackPool& pool,
                           TieBreak ties = TieBreak::kDeterministic, Rng* rng = nullptr);

struct BlackboxOptions {
  // Synthetic training-set size; 0 means pool.n_train.
  std::int64_t synthetic_samples = 0;
  std::uint64_t sample_seed = 17;
};

// Trains an auxiliary vanilla GAN on samples drawn from `generator`, then
// attacks with its discriminator exactly as dmia_whitebox does.
AttackResult dmia_blackbox(const Network& generator, const AttackPool& pool,
                           const TrainConfig& aux_config, const BlackboxOptions& options = {});
// Same attack from an explicit synthetic training set.
AttackResult dmia_blackbox_from_samples(const torch::Tensor& synthetic, const AttackPool& pool,
                                        const TrainConfig& aux_config);

// Histogram total variation distance between train and holdout scores.
double tvd_attack(const ScoreSet& scores, int bins = kDefaultBins);

}  // namespace ganpriv

#endif  // GANPRIV_MIA_ATTACKS_HPP_
