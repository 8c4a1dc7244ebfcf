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

#include "ganpriv/evaluation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ganpriv/error.hpp"
#include "ganpriv/mia_attacks.hpp"
#include "test_util.hpp"

namespace ganpriv {
namespace {

using ::ganpriv::testing::toy_dataset;

// Generator that ignores its latent input and emits one fixed image.
Network constant_generator(const torch::Tensor& image, std::int64_t latent_dim = 8) {
  ArchSpec spec;
  spec.kind = ModelKind::kGenerator;
  spec.input_shape = {latent_dim};
  LayerSpec d;
  d.type = LayerType::kDense;
  d.units = image.numel();
  LayerSpec s;
  s.type = LayerType::kSigmoid;
  LayerSpec r;
  r.type = LayerType::kReshape;
  r.target = {image.size(1), image.size(2), image.size(0)};
  spec.layers = {d, r, s};
  Network g(spec, 0);
  torch::NoGradGuard guard;
  for (auto& [name, t] : g.named_state()) {
    if (name.find("weight") != std::string::npos) t.zero_();
    if (name.find("bias") != std::string::npos) {
      t.copy_(torch::logit(image.flatten().clamp(1e-4, 1 - 1e-4)));
    }
  }
  return g;
}

ClassifierOptions quick_options(std::int64_t epochs = 10) {
  ClassifierOptions o;
  o.epochs = epochs;
  return o;
}

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::int64_t i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

TEST(Fnv1aTest, ReferenceValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(MetricsReportTest, JsonRoundTripKeepsSkippedAndInfinity) {
  MetricsReport r;
  r.run_id = "x";
  r.trainer = "mimgan";
  r.lambda = 20.0;
  r.n_train = 300;
  r.pool_size = 3000;
  r.mia_prior = 0.1;
  r.gap = 0.25;
  r.rho_tr_te = 0.9;
  r.memorization = std::numeric_limits<double>::infinity();
  r.mia_whitebox = 0.31;
  r.class_histogram = std::vector<std::int64_t>{1, 2, 3};
  r.config_fingerprint = "abc";
  r.metadata = {{"note", "n"}};
  const auto j = r.to_json();
  EXPECT_TRUE(j.at("gan_test").is_null());
  EXPECT_EQ(j.at("memorization"), "inf");
  const auto skipped = j.at("skipped").get<std::vector<std::string>>();
  EXPECT_NE(std::find(skipped.begin(), skipped.end(), "mia_blackbox"), skipped.end());
  EXPECT_EQ(std::find(skipped.begin(), skipped.end(), "gap"), skipped.end());
  const auto back = MetricsReport::from_json(j);
  EXPECT_EQ(back.to_json().dump(), j.dump());
  EXPECT_TRUE(std::isinf(*back.memorization));
  EXPECT_FALSE(back.gan_test.has_value());
  EXPECT_EQ(MetricsReport::csv_header().find("run_id"), 0u);
  const std::string row = r.csv_row(), header = MetricsReport::csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}

class ClassifierTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { data_ = new LabeledDataset(toy_dataset(400, 28, 10, 3)); }
  static void TearDownTestSuite() { delete data_; }
  static LabeledDataset* data_;
};
LabeledDataset* ClassifierTest::data_ = nullptr;

TEST_F(ClassifierTest, LearnsSeparableToyClassesDeterministically) {
  const auto spec = preset("appendix4-classifier");
  const auto train = range(0, 200);
  const auto a = train_classifier(*data_, train, spec, 5, quick_options());
  const auto b = train_classifier(*data_, train, spec, 5, quick_options());
  EXPECT_GE(a.accuracy_on_real_test, 0.95);
  EXPECT_EQ(a.training_source, "real");
  const auto sa = a.network.named_state(), sb = b.network.named_state();
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_TRUE(torch::equal(sa[i].second, sb[i].second));
  const auto probs = a.probabilities(data_->images.narrow(0, 0, 5));
  EXPECT_EQ(probs.sizes(), (c10::IntArrayRef{5, 10}));
  EXPECT_NEAR(probs.sum(1).sub(1).abs().max().item<double>(), 0.0, 1e-5);
}

TEST_F(ClassifierTest, SingleClassTrainingGivesThatClassPrior) {
  std::vector<std::int64_t> only_zero;
  for (std::int64_t i = 0; i < 200; i += 10) only_zero.push_back(i);
  const auto held = range(200, 400);
  const auto c = train_classifier(*data_, only_zero, preset("appendix4-classifier"), 1,
                                  quick_options(), std::span<const std::int64_t>(held));
  EXPECT_NEAR(c.accuracy_on_real_test, 0.1, 0.02);
}

TEST_F(ClassifierTest, ReplayAndConstantGenerators) {
  const auto spec = preset("appendix4-classifier");
  const auto oracle = train_classifier(*data_, range(0, 400), spec, 2, quick_options());
  const auto eval = train_classifier(*data_, range(0, 200), spec, 3, quick_options());

  // Replay of real images with oracle labels: gan_test reduces to the eval
  // classifier's agreement with the oracle on those images.
  const auto real = data_->images.narrow(0, 200, 200);
  const auto oracle_labels = oracle.predict(real);
  const double replay_gan_test = eval.accuracy(real, oracle_labels);
  EXPECT_GE(replay_gan_test, 0.95);

  // Replay for gan_train: a classifier fit to real images with oracle labels
  // matches the one trained on the same data.
  const auto first = data_->images.narrow(0, 0, 200);
  const auto replay = fit_classifier(first, oracle.predict(first), spec, 3, quick_options(),
                                     "generated");
  EXPECT_EQ(replay.training_source, "generated");
  const auto test_labels = std::vector<std::int64_t>(data_->labels->begin() + 200,
                                                     data_->labels->end());
  EXPECT_NEAR(replay.accuracy(real, test_labels), eval.accuracy_on_real_test, 0.03);

  // Constant generator: one class only.
  const auto g = constant_generator(data_->images[7]);
  const auto hist = class_distribution(g, oracle, 50, 4);
  ASSERT_EQ(hist.size(), 10u);
  EXPECT_EQ(*std::max_element(hist.begin(), hist.end()), 50);
  const auto cls = std::max_element(hist.begin(), hist.end()) - hist.begin();
  EXPECT_EQ(cls, oracle.predict(data_->images.narrow(0, 7, 1))[0]);
  const double gt = gan_test(eval, oracle, g, 50, 4);
  EXPECT_TRUE(gt == 0.0 || gt == 1.0);

  LabeledDataset real_test = select(*data_, range(200, 400));
  const double gtr = gan_train(g, oracle, real_test, 50, spec, 6, quick_options(2));
  EXPECT_NEAR(gtr, 0.1, 0.02);
}

TEST_F(ClassifierTest, PseudoLabelsAreDeterministic) {
  const auto oracle =
      train_classifier(*data_, range(0, 100), preset("appendix4-classifier"), 2, quick_options(1));
  Network g(preset("desk-generator", {1, 28, 28}, 8), 0);
  const auto a = pseudo_label(g, oracle, 20, 9), b = pseudo_label(g, oracle, 20, 9);
  EXPECT_TRUE(torch::equal(a.images, b.images));
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_THROW(pseudo_label(g, oracle, 0, 9), InvalidArgument);
}

}  // namespace
}  // namespace ganpriv
