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

#include "ganpriv/mia_attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ganpriv/error.hpp"

namespace ganpriv {

nlohmann::json AttackResult::to_json() const {
  return {{"attack", attack},
          {"predicted_members", predicted_members},
          {"accuracy", accuracy},
          {"prior", prior},
          {"config_fingerprint", config_fingerprint}};
}

AttackResult top_n_attack(const ScoreSet& scores, const std::vector<std::uint8_t>& membership,
                          std::int64_t n_train, TieBreak ties, Rng* rng) {
  const auto total = static_cast<std::int64_t>(membership.size());
  if (static_cast<std::int64_t>(scores.size()) < total) {
    throw InvalidArgument("fewer scores than pool samples");
  }
  if (n_train < 1 || n_train > total) throw InvalidArgument("n_train outside [1, |pool|]");
  if (ties == TieBreak::kRandom && rng == nullptr) {
    throw InvalidArgument("randomized tie-breaking needs an rng");
  }

  std::vector<std::int64_t> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  // A random pre-shuffle followed by a stable sort on score alone leaves
  // equal scores in uniformly random relative order.
  if (ties == TieBreak::kRandom) shuffle_in_place(std::span<std::int64_t>(order), *rng);
  std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return scores.scores[static_cast<std::size_t>(a)] > scores.scores[static_cast<std::size_t>(b)];
  });

  AttackResult result;
  result.predicted_members.assign(order.begin(), order.begin() + n_train);
  std::sort(result.predicted_members.begin(), result.predicted_members.end());
  std::int64_t hits = 0;
  for (auto i : result.predicted_members) hits += membership[static_cast<std::size_t>(i)] ? 1 : 0;
  result.accuracy = static_cast<double>(hits) / static_cast<double>(n_train);
  result.prior = static_cast<double>(n_train) / static_cast<double>(total);
  result.score_snapshot = scores;
  return result;
}

AttackResult dmia_whitebox(const Network& discriminator, const AttackPool& pool, TieBreak ties,
                           Rng* rng) {
  if (pool.n_train > pool.size()) throw InvalidArgument("n_train exceeds pool size");
  const ScoreSet scores = score_set(discriminator, pool);
  AttackResult r = top_n_attack(scores, pool.membership, pool.n_train, ties, rng);
  r.attack = "dmia_whitebox";
  r.config_fingerprint = ties == TieBreak::kRandom ? "top_n/random_ties" : "top_n/score_desc_index_asc";
  return r;
}

AttackResult dmia_blackbox(const Network& generator, const AttackPool& pool,
                           const TrainConfig& aux_config, const BlackboxOptions& options) {
  const std::int64_t count =
      options.synthetic_samples > 0 ? options.synthetic_samples : pool.n_train;
  if (count < 1) throw InvalidArgument("black-box attack needs at least one synthetic sample");
  const std::int64_t latent_dim = generator.spec().input_shape.at(0);
  const auto synthetic = generator.predict(sample_latent(count, latent_dim, options.sample_seed));

  AttackResult r = dmia_blackbox_from_samples(synthetic, pool, aux_config);
  r.config_fingerprint += "/seed=" + std::to_string(options.sample_seed);
  return r;
}

AttackResult dmia_blackbox_from_samples(const torch::Tensor& synthetic, const AttackPool& pool,
                                        const TrainConfig& aux_config) {
  const std::int64_t count = synthetic.size(0);
  if (count < 1) throw InvalidArgument("black-box attack needs at least one synthetic sample");
  LabeledDataset aux;
  aux.images = synthetic.to(torch::kFloat32).contiguous();
  aux.name = "synthetic";
  SplitIndices all;
  all.train_idx.resize(static_cast<std::size_t>(count));
  std::iota(all.train_idx.begin(), all.train_idx.end(), 0);

  TrainConfig cfg = aux_config;
  cfg.trainer = TrainerKind::kGan;
  cfg.lambda = 0.0;
  cfg.adversary.reset();
  cfg.eval_every = 0;
  cfg.checkpoint_dir.clear();
  const TrainedBundle aux_bundle = train_gan(cfg, aux, all);

  AttackResult r = dmia_whitebox(aux_bundle.discriminator, pool);
  r.attack = "dmia_blackbox";
  r.config_fingerprint = "aux_gan/n=" + std::to_string(count) + "/epochs=" + std::to_string(cfg.epochs);
  return r;
}

double tvd_attack(const ScoreSet& scores, int bins) {
  const DensityPair pair = estimate_densities(scores, ScoreTag::kHoldout, ScoreTag::kTrain, bins);
  double tvd = 0.0;
  for (std::size_t i = 0; i < pair.bins(); ++i) tvd += std::abs(pair.p1[i] - pair.p0[i]);
  return std::clamp(0.5 * tvd, 0.0, 1.0);
}

}  // namespace ganpriv
