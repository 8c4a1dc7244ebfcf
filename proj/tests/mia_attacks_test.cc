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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ganpriv/data_pipeline.hpp"
#include "ganpriv/error.hpp"
#include "test_util.hpp"

namespace ganpriv {
namespace {

ScoreSet pool_scores(const std::vector<double>& s, const std::vector<std::uint8_t>& membership) {
  std::vector<ScoreTag> tags;
  for (auto m : membership) tags.push_back(m ? ScoreTag::kTrain : ScoreTag::kHoldout);
  return make_score_set(s, tags);
}

TEST(TopNAttackTest, CleanSeparationIsPerfect) {
  std::vector<std::uint8_t> member(100, 0);
  std::vector<double> s(100, 0.1);
  for (int i = 0; i < 100; i += 10) {
    member[i] = 1;
    s[i] = 0.9;
  }
  const auto r = top_n_attack(pool_scores(s, member), member, 10);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.prior, 0.1);
  EXPECT_EQ(r.predicted_members.size(), 10u);
}

TEST(TopNAttackTest, DeterministicTiesPreferLowIndex) {
  const std::vector<std::uint8_t> member = {0, 0, 1, 1};
  const auto r = top_n_attack(pool_scores({0.5, 0.5, 0.5, 0.5}, member), member, 2);
  EXPECT_EQ(r.predicted_members, (std::vector<std::int64_t>{0, 1}));
  EXPECT_DOUBLE_EQ(r.accuracy, 0.0);
}

TEST(TopNAttackTest, RandomTiesAverageToPrior) {
  std::vector<std::uint8_t> member(1000, 0);
  for (int i = 0; i < 100; ++i) member[i] = 1;
  const ScoreSet s = pool_scores(std::vector<double>(1000, 0.5), member);
  Rng rng(7);
  double total = 0;
  for (int t = 0; t < 200; ++t) total += top_n_attack(s, member, 100, TieBreak::kRandom, &rng).accuracy;
  EXPECT_NEAR(total / 200, 0.1, 0.01);
}

TEST(TopNAttackTest, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(200);
  std::vector<std::uint8_t> member(200, 0);
  for (int i = 0; i < 200; ++i) {
    member[i] = i % 5 == 0;
    s[i] = std::clamp(u(rng) + (member[i] ? 0.2 : 0.0), 0.0, 1.0);
  }
  std::vector<double> t(s.size());
  std::transform(s.begin(), s.end(), t.begin(), [](double x) { return x * x * x; });
  const auto a = top_n_attack(pool_scores(s, member), member, 40);
  const auto b = top_n_attack(pool_scores(t, member), member, 40);
  EXPECT_EQ(a.predicted_members, b.predicted_members);
  EXPECT_EQ(a.accuracy, b.accuracy);
}

TEST(TopNAttackTest, Validation) {
  const std::vector<std::uint8_t> member = {1, 0};
  const ScoreSet s = pool_scores({0.4, 0.6}, member);
  EXPECT_THROW(top_n_attack(s, member, 3), InvalidArgument);
  EXPECT_THROW(top_n_attack(s, member, 1, TieBreak::kRandom, nullptr), InvalidArgument);
}

TEST(TvdAttackTest, IdenticalAndDisjoint) {
  const std::vector<std::uint8_t> member = {1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(tvd_attack(pool_scores({0.2, 0.8, 0.8, 0.2}, member)), 0.0);
  EXPECT_DOUBLE_EQ(tvd_attack(pool_scores({0.9, 0.95, 0.1, 0.05}, member)), 1.0);
}

TEST(TvdAttackTest, NeedsBothClasses) {
  const ScoreSet s = make_score_set({0.5, 0.3}, {ScoreTag::kTrain, ScoreTag::kFake});
  EXPECT_THROW(tvd_attack(s), InvalidArgument);
}

TEST(TvdAttackTest, DominatesOneMinusRho) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> p0(20), p1(20);
    double s0 = 0, s1 = 0;
    for (int i = 0; i < 20; ++i) {
      p0[i] = u(rng) * u(rng);
      p1[i] = u(rng);
      s0 += p0[i];
      s1 += p1[i];
    }
    DensityPair pair;
    for (int i = 0; i <= 20; ++i) pair.bin_edges.push_back(i / 20.0);
    double tvd = 0;
    for (int i = 0; i < 20; ++i) {
      pair.p0.push_back(p0[i] / s0);
      pair.p1.push_back(p1[i] / s1);
      tvd += 0.5 * std::abs(pair.p0[i] - pair.p1[i]);
    }
    EXPECT_LE(1.0 - bhattacharyya_hist(pair), tvd + 1e-12);
  }
}

TEST(WhiteboxTest, ResultShapeAndPrior) {
  Network d(preset("appendix1-discriminator-c"), 5);
  AttackPool pool;
  pool.samples = torch::rand({40, 1, 28, 28});
  pool.membership.assign(40, 0);
  for (int i = 0; i < 4; ++i) pool.membership[i * 10] = 1;
  pool.n_train = 4;
  const auto r = dmia_whitebox(d, pool);
  EXPECT_EQ(r.predicted_members.size(), 4u);
  EXPECT_DOUBLE_EQ(r.prior, 0.1);
  EXPECT_GE(r.accuracy, 0.0);
  EXPECT_LE(r.accuracy, 1.0);
  const auto j = r.to_json();
  EXPECT_EQ(j.at("predicted_members").size(), 4u);
  EXPECT_EQ(j.at("attack"), "dmia_whitebox");
}

TrainConfig tiny_aux_config() {
  TrainConfig c;
  c.generator = preset("desk-generator", {1, 28, 28}, 16);
  c.latent_dim = 16;
  c.discriminator = preset("appendix1-discriminator-c");
  c.batch_size = 16;
  c.epochs = 2;
  return c;
}

TEST(BlackboxTest, RunsTheWhiteboxPathOnAnAuxiliaryDiscriminator) {
  Network g(preset("desk-generator", {1, 28, 28}, 16), 1);
  AttackPool pool;
  pool.samples = torch::rand({60, 1, 28, 28});
  pool.membership.assign(60, 0);
  for (int i = 0; i < 6; ++i) pool.membership[i] = 1;
  pool.n_train = 6;
  const auto a = dmia_blackbox(g, pool, tiny_aux_config());
  const auto b = dmia_blackbox(g, pool, tiny_aux_config());
  EXPECT_EQ(a.attack, "dmia_blackbox");
  EXPECT_EQ(a.predicted_members.size(), 6u);
  EXPECT_EQ(a.predicted_members, b.predicted_members);
  EXPECT_DOUBLE_EQ(a.prior, 0.1);
}

class BlackboxReplayTest : public ::testing::Test {
 protected:
  void SetUp() override {
    try {
      const auto mnist = subsample(load_dataset("mnist"), 1000, 1);
      pool_ = build_attack_pool(mnist, make_split(mnist, 0.1, 2));
    } catch (const IoError&) {
      GTEST_SKIP() << "mnist cache not available";
    }
  }

  TrainConfig aux_config() const {
    TrainConfig c;
    c.generator = preset("desk-generator");
    c.discriminator = preset("appendix1-discriminator-a");
    c.epochs = 150;
    return c;
  }

  torch::Tensor members() const {
    std::vector<std::int64_t> idx;
    for (std::int64_t i = 0; i < pool_.size(); ++i) {
      if (pool_.membership[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    return pool_.samples.index_select(0, torch::tensor(idx));
  }

  AttackPool pool_;
};

TEST_F(BlackboxReplayTest, ReplayedTrainingSetIsDetected) {
  const auto r = dmia_blackbox_from_samples(members(), pool_, aux_config());
  // Observed 0.16 against a 0.10 prior.
  EXPECT_GE(r.accuracy, r.prior + 0.04);
}

TEST_F(BlackboxReplayTest, NoiseGeneratorStaysAtPrior) {
  auto gen = at::detail::createCPUGenerator(3);
  const auto noise = torch::rand({pool_.n_train, 1, 28, 28}, gen);
  const auto r = dmia_blackbox_from_samples(noise, pool_, aux_config());
  EXPECT_NEAR(r.accuracy, r.prior, 0.05);
}

}  // namespace
}  // namespace ganpriv
