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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ganpriv/error.hpp"
#include "ganpriv/overfit_metrics.hpp"
#include "ganpriv/random.hpp"

namespace ganpriv {

torch::Tensor Classifier::probabilities(const torch::Tensor& images) const {
  return network.predict(images).to(torch::kFloat64);
}

std::vector<std::int64_t> Classifier::predict(const torch::Tensor& images) const {
  const auto idx = probabilities(images).argmax(1).contiguous();
  return {idx.data_ptr<std::int64_t>(), idx.data_ptr<std::int64_t>() + idx.numel()};
}

double Classifier::accuracy(const torch::Tensor& images,
                            const std::vector<std::int64_t>& labels) const {
  if (labels.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto pred = predict(images);
  if (pred.size() != labels.size()) throw InvalidArgument("label count mismatch");
  std::int64_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

Classifier fit_classifier(const torch::Tensor& images, const std::vector<std::int64_t>& labels,
                          const ArchSpec& spec, std::uint64_t seed,
                          const ClassifierOptions& options, std::string training_source) {
  if (spec.kind != ModelKind::kClassifier) throw InvalidArgument("not a classifier architecture");
  if (images.size(0) != static_cast<std::int64_t>(labels.size()) || labels.empty()) {
    throw InvalidArgument("classifier needs one label per training image");
  }
  if (options.epochs < 1 || options.batch_size < 1) {
    throw InvalidArgument("classifier epochs and batch size must be positive");
  }
  const auto out = infer_output_shape(spec);
  Classifier c;
  c.num_classes = out.at(0);
  c.training_source = std::move(training_source);
  for (auto l : labels) {
    if (l < 0 || l >= c.num_classes) throw InvalidArgument("label outside the classifier range");
  }
  c.network = Network(spec, seed);
  torch::manual_seed(derive_seed(seed, 11));
  auto opt = make_optimizer(options.optimizer, c.network.parameters());
  Rng rng(derive_seed(seed, 12));
  const auto y_all = torch::tensor(labels, torch::kInt64);
  const std::int64_t n = images.size(0);
  c.network.set_training(true);
  for (std::int64_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto order = torch::tensor(random_permutation(n, rng), torch::kInt64);
    for (std::int64_t start = 0; start < n; start += options.batch_size) {
      const auto idx = order.narrow(0, start, std::min(options.batch_size, n - start));
      const auto probs = c.network.forward(images.index_select(0, idx));
      // Categorical cross-entropy on clamped probabilities.
      const auto loss = torch::nll_loss(torch::log(probs.clamp(kScoreEpsilon, 1.0)),
                                        y_all.index_select(0, idx));
      opt->zero_grad();
      loss.backward();
      opt->step();
    }
  }
  c.network.set_training(false);
  c.accuracy_on_real_test = std::numeric_limits<double>::quiet_NaN();
  return c;
}

Classifier train_classifier(const LabeledDataset& data, std::span<const std::int64_t> indices,
                            const ArchSpec& spec, std::uint64_t seed,
                            const ClassifierOptions& options,
                            std::optional<std::span<const std::int64_t>> eval_indices) {
  if (!data.has_labels()) throw InvalidArgument("train_classifier: dataset has no labels");
  const auto train = select(data, indices);
  Classifier c = fit_classifier(train.images, *train.labels, spec, seed, options, "real");
  std::vector<std::int64_t> held;
  if (eval_indices) {
    held.assign(eval_indices->begin(), eval_indices->end());
  } else {
    std::vector<std::uint8_t> used(static_cast<std::size_t>(data.size()), 0);
    for (auto i : indices) used[static_cast<std::size_t>(i)] = 1;
    for (std::int64_t i = 0; i < data.size(); ++i) {
      if (!used[static_cast<std::size_t>(i)]) held.push_back(i);
    }
  }
  if (!held.empty()) {
    const auto test = select(data, held);
    c.accuracy_on_real_test = c.accuracy(test.images, *test.labels);
  }
  return c;
}

PseudoLabeled pseudo_label(const Network& generator, const Classifier& oracle,
                           std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("n_samples must be positive");
  PseudoLabeled out;
  out.images = generator.predict(
      sample_latent(n_samples, generator.spec().input_shape.at(0), seed)).to(torch::kFloat32);
  out.labels = oracle.predict(out.images);
  return out;
}

double gan_test(const Classifier& eval_classifier, const Classifier& oracle,
                const Network& generator, std::int64_t n_samples, std::uint64_t seed) {
  if (eval_classifier.num_classes != oracle.num_classes) {
    throw InvalidArgument("gan_test: class-count mismatch between classifiers");
  }
  const auto labeled = pseudo_label(generator, oracle, n_samples, seed);
  return eval_classifier.accuracy(labeled.images, labeled.labels);
}

double gan_train(const Network& generator, const Classifier& oracle,
                 const LabeledDataset& real_test, std::int64_t n_samples, const ArchSpec& spec,
                 std::uint64_t seed, const ClassifierOptions& options) {
  if (!real_test.has_labels()) throw InvalidArgument("gan_train: real test set has no labels");
  const auto labeled = pseudo_label(generator, oracle, n_samples, seed);
  const Classifier c =
      fit_classifier(labeled.images, labeled.labels, spec, derive_seed(seed, 1), options, "generated");
  return c.accuracy(real_test.images, *real_test.labels);
}

std::vector<std::int64_t> class_distribution(const Network& generator, const Classifier& oracle,
                                             std::int64_t n_samples, std::uint64_t seed) {
  const auto labeled = pseudo_label(generator, oracle, n_samples, seed);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(oracle.num_classes), 0);
  for (auto l : labeled.labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

namespace {

struct Field {
  const char* name;
  std::optional<double> MetricsReport::*member;
};

constexpr Field kFields[] = {
    {"gap", &MetricsReport::gap},
    {"gap_log", &MetricsReport::gap_log},
    {"rho_tr_te", &MetricsReport::rho_tr_te},
    {"rho_tr_fake", &MetricsReport::rho_tr_fake},
    {"memorization", &MetricsReport::memorization},
    {"mia_whitebox", &MetricsReport::mia_whitebox},
    {"mia_blackbox", &MetricsReport::mia_blackbox},
    {"tvd", &MetricsReport::tvd},
    {"fano_bound", &MetricsReport::fano_bound},
    {"fano_bound_nats", &MetricsReport::fano_bound_nats},
    {"bayes_error_lower", &MetricsReport::bayes_error_lower},
    {"bayes_error_upper", &MetricsReport::bayes_error_upper},
    {"gan_test", &MetricsReport::gan_test},
    {"gan_train", &MetricsReport::gan_train},
};

// JSON has no infinity; the memorization sentinel is written as a string.
nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double from_number(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(10);
  os << *v;
  return os.str();
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["run_id"] = run_id;
  j["trainer"] = trainer;
  j["lambda"] = lambda ? number(*lambda) : nlohmann::json(nullptr);
  j["n_train"] = n_train;
  j["pool_size"] = pool_size;
  j["mia_prior"] = mia_prior;
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& f : kFields) {
    const auto& v = this->*f.member;
    j[f.name] = v ? number(*v) : nlohmann::json(nullptr);
    if (!v) skipped.push_back(f.name);
  }
  if (class_histogram) {
    j["class_histogram"] = *class_histogram;
  } else {
    j["class_histogram"] = nullptr;
    skipped.push_back("class_histogram");
  }
  j["skipped"] = skipped;
  j["generator_parameters"] = generator_parameters;
  j["discriminator_parameters"] = discriminator_parameters;
  j["config_fingerprint"] = config_fingerprint;
  j["metadata"] = metadata;
  return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  try {
    MetricsReport r;
    r.run_id = j.at("run_id").get<std::string>();
    r.trainer = j.at("trainer").get<std::string>();
    if (!j.at("lambda").is_null()) r.lambda = from_number(j.at("lambda"));
    r.n_train = j.at("n_train").get<std::int64_t>();
    r.pool_size = j.at("pool_size").get<std::int64_t>();
    r.mia_prior = j.at("mia_prior").get<double>();
    for (const auto& f : kFields) {
      if (j.contains(f.name) && !j.at(f.name).is_null()) r.*f.member = from_number(j.at(f.name));
    }
    if (j.contains("class_histogram") && !j.at("class_histogram").is_null()) {
      r.class_histogram = j.at("class_histogram").get<std::vector<std::int64_t>>();
    }
    r.generator_parameters = j.value("generator_parameters", std::int64_t{0});
    r.discriminator_parameters = j.value("discriminator_parameters", std::int64_t{0});
    r.config_fingerprint = j.value("config_fingerprint", "");
    r.metadata = j.value("metadata", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed metrics report: ") + e.what());
  }
}

std::string MetricsReport::csv_header() {
  std::string h = "run_id,trainer,lambda,n_train,pool_size,mia_prior";
  for (const auto& f : kFields) h += std::string(",") + f.name;
  return h + ",class_histogram,generator_parameters,discriminator_parameters,config_fingerprint";
}

std::string MetricsReport::csv_row() const {
  std::ostringstream os;
  os << run_id << ',' << trainer << ',' << csv_number(lambda) << ',' << n_train << ','
     << pool_size << ',' << csv_number(mia_prior);
  for (const auto& f : kFields) os << ',' << csv_number(this->*f.member);
  os << ',';
  if (class_histogram) {
    for (std::size_t i = 0; i < class_histogram->size(); ++i) {
      os << (i ? ";" : "") << (*class_histogram)[i];
    }
  }
  os << ',' << generator_parameters << ',' << discriminator_parameters << ','
     << config_fingerprint;
  return os.str();
}

MetricsReport privacy_utility_report(const TrainedBundle& bundle, const AttackPool& pool,
                                     const EvalAssets& assets, const ReportOptions& options) {
  MetricsReport r;
  r.run_id = options.run_id;
  r.config_fingerprint = options.config_fingerprint;
  r.trainer = trainer_name(bundle.config.trainer);
  if (bundle.config.trainer == TrainerKind::kMimgan) r.lambda = bundle.config.lambda;
  r.n_train = pool.n_train;
  r.pool_size = pool.size();
  r.mia_prior = pool.prior();
  r.generator_parameters = bundle.generator.parameter_count();
  r.discriminator_parameters = bundle.discriminator.parameter_count();

  auto stage = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const TrainingError& e) {
      throw TrainingError(std::string(name) + ": " + e.what());
    } catch (const IoError& e) {
      throw IoError(std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
      throw InvalidArgument(std::string(name) + ": " + e.what());
    }
  };

  const std::int64_t latent_dim = bundle.config.latent_dim;
  stage("scores", [&] {
    const auto fakes = bundle.generator.predict(
        sample_latent(options.fake_score_samples, latent_dim, derive_seed(options.seed, 1)));
    const ScoreSet scores = score_set(bundle.discriminator, pool, fakes);
    r.gap = generalization_gap(scores, GapPhi::kIdentity);
    r.gap_log = generalization_gap(scores, GapPhi::kLog);
    r.rho_tr_te = bhattacharyya_hist(
        estimate_densities(scores, ScoreTag::kHoldout, ScoreTag::kTrain, options.bins));
    r.rho_tr_fake = bhattacharyya_hist(
        estimate_densities(scores, ScoreTag::kFake, ScoreTag::kTrain, options.bins));
    r.tvd = tvd_attack(scores, options.bins);
    r.fano_bound = fano_lower_bound(scores, LogBase::kBits);
    r.fano_bound_nats = fano_lower_bound(scores, LogBase::kNats);
    const auto bounds = mia_error_bounds(*r.rho_tr_te, scores.pi0, scores.pi1);
    r.bayes_error_lower = bounds.lower;
    r.bayes_error_upper = bounds.upper;
    r.mia_whitebox = top_n_attack(scores, pool.membership, pool.n_train).accuracy;
  });

  stage("memorization", [&] {
    std::vector<std::int64_t> tr, te;
    for (std::int64_t i = 0; i < pool.size(); ++i) {
      (pool.membership[static_cast<std::size_t>(i)] ? tr : te).push_back(i);
    }
    const auto idx = [](const std::vector<std::int64_t>& v) { return torch::tensor(v, torch::kInt64); };
    const auto generated = bundle.generator.predict(
        sample_latent(options.memorization_samples, latent_dim, derive_seed(options.seed, 2)));
    r.memorization = memorization_ratio(pool.samples.index_select(0, idx(tr)),
                                        pool.samples.index_select(0, idx(te)), generated);
  });

  if (options.run_blackbox) {
    stage("dmia_blackbox", [&] {
      TrainConfig aux = bundle.config;
      aux.trainer = TrainerKind::kGan;
      aux.lambda = 0.0;
      aux.generator_steps = 0;
      aux.adversary.reset();
      aux.epochs = options.blackbox_epochs;
      aux.seeds.generator_init = derive_seed(options.seed, 3);
      aux.seeds.discriminator_init = derive_seed(options.seed, 4);
      aux.seeds.training = derive_seed(options.seed, 5);
      BlackboxOptions bb;
      bb.sample_seed = derive_seed(options.seed, 6);
      r.mia_blackbox = dmia_blackbox(bundle.generator, pool, aux, bb).accuracy;
    });
  }

  if (options.run_utility && assets.oracle) {
    stage("utility", [&] {
      const Classifier& oracle = *assets.oracle;
      if (assets.eval_classifier) {
        r.gan_test = gan_test(*assets.eval_classifier, oracle, bundle.generator,
                              options.utility_samples, derive_seed(options.seed, 7));
      }
      if (assets.real_test) {
        r.gan_train = gan_train(bundle.generator, oracle, *assets.real_test, options.utility_samples,
                                oracle.network.spec(), derive_seed(options.seed, 8),
                                options.gan_train_classifier);
      }
      r.class_histogram = class_distribution(bundle.generator, oracle, options.utility_samples,
                                             derive_seed(options.seed, 9));
    });
  }

  r.metadata = {{"pseudo_labels", "oracle classifier trained on the full labelled corpus"},
                {"gan_test_classifier", "trained on the real training split"},
                {"tvd_estimator", "equal-width histogram, " + std::to_string(options.bins) + " bins"},
                {"rho_estimator", "equal-width histogram, " + std::to_string(options.bins) + " bins"},
                {"mia_tie_break", "score descending, then pool index ascending"},
                {"memorization_generated_samples", options.memorization_samples}};
  return r;
}

}  // namespace ganpriv
