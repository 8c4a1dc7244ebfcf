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

#include "ganpriv/trainers.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ganpriv/error.hpp"
#include "ganpriv/random.hpp"

namespace ganpriv {

namespace F = torch::nn::functional;

std::string trainer_name(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::kGan: return "gan";
    case TrainerKind::kMegan: return "megan";
    case TrainerKind::kMimgan: return "mimgan";
  }
  return "?";
}

TrainerKind trainer_from_name(const std::string& name) {
  if (name == "gan") return TrainerKind::kGan;
  if (name == "megan") return TrainerKind::kMegan;
  if (name == "mimgan") return TrainerKind::kMimgan;
  throw InvalidArgument("unknown trainer '" + name + "' (expected gan, megan or mimgan)");
}

std::unique_ptr<torch::optim::Optimizer> make_optimizer(const OptimizerConfig& config,
                                                        std::vector<torch::Tensor> params) {
  if (config.name == "adam") {
    return std::make_unique<torch::optim::Adam>(
        std::move(params), torch::optim::AdamOptions(config.learning_rate)
                               .betas({config.beta1, config.beta2})
                               .eps(config.epsilon));
  }
  if (config.name == "sgd") {
    return std::make_unique<torch::optim::SGD>(
        std::move(params), torch::optim::SGDOptions(config.learning_rate).momentum(config.momentum));
  }
  throw InvalidArgument("unknown optimizer '" + config.name + "'");
}

std::int64_t TrainConfig::effective_generator_steps() const {
  if (generator_steps > 0) return generator_steps;
  return trainer == TrainerKind::kMegan ? 2 : 1;
}

void TrainConfig::validate() const {
  if (batch_size < 2) throw ConfigError("batch_size", "must be at least 2");
  if (generator_steps < 0) throw ConfigError("generator_steps", "must be at least 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda", "must be >= 0");
  if (epochs < 1) throw ConfigError("epochs", "must be at least 1");
  if (eval_every < 0) throw ConfigError("eval_every", "must be >= 0");
  if (latent_dim < 1) throw ConfigError("latent_dim", "must be positive");
  if (!(optimizer.learning_rate > 0.0)) throw ConfigError("optimizer.learning_rate", "must be > 0");
  if (optimizer.name != "adam" && optimizer.name != "sgd") {
    throw ConfigError("optimizer.name", "must be adam or sgd");
  }
  if (generator.kind != ModelKind::kGenerator) throw ConfigError("generator", "not a generator");
  if (discriminator.kind != ModelKind::kDiscriminator) {
    throw ConfigError("discriminator", "not a discriminator");
  }
  if (adversary && adversary->kind != ModelKind::kAdversary) {
    throw ConfigError("adversary", "not an adversary");
  }
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binary_entropy: p outside [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

torch::Tensor binary_entropy(const torch::Tensor& p) {
  return -(torch::xlogy(p, p) + torch::xlogy(1.0 - p, 1.0 - p));
}

double gaussian_nll(const std::vector<double>& x, const std::vector<double>& mu,
                    const std::vector<double>& log_var) {
  if (x.size() != mu.size() || x.size() != log_var.size()) {
    throw InvalidArgument("gaussian_nll: dimension mismatch");
  }
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - mu[i];
    total += log_var[i] + r * r * std::exp(-log_var[i]) + log_2pi;
  }
  return 0.5 * total;
}

torch::Tensor gaussian_nll(const torch::Tensor& x, const AdversaryOutput& out) {
  const auto flat = x.reshape({x.size(0), -1});
  if (!flat.sizes().equals(out.mu.sizes()) || !flat.sizes().equals(out.log_var.sizes())) {
    throw InvalidArgument("gaussian_nll: dimension mismatch");
  }
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  return 0.5 * (out.log_var + (flat - out.mu).square() * torch::exp(-out.log_var) + log_2pi).sum(1);
}

torch::Tensor discriminator_loss(const torch::Tensor& real_logits,
                                 const torch::Tensor& fake_logits) {
  return -(F::logsigmoid(real_logits).mean() + F::logsigmoid(-fake_logits).mean());
}

torch::Tensor gan_generator_loss(const torch::Tensor& fake_logits) {
  return -F::logsigmoid(fake_logits).mean();
}

torch::Tensor megan_generator_loss(const torch::Tensor& fake_logits) {
  const auto d = torch::sigmoid(fake_logits);
  return (d * F::logsigmoid(fake_logits) + (1.0 - d) * F::logsigmoid(-fake_logits)).mean();
}

torch::Tensor adversary_loss(const torch::Tensor& adversary_raw, const torch::Tensor& paired_real) {
  return gaussian_nll(paired_real, split_adversary_output(adversary_raw)).mean();
}

torch::Tensor mimgan_generator_loss(const torch::Tensor& fake_logits,
                                    const torch::Tensor& adversary_raw,
                                    const torch::Tensor& paired_real, double lambda) {
  const auto nll = gaussian_nll(paired_real, split_adversary_output(adversary_raw));
  return (-F::logsigmoid(fake_logits).reshape({-1}) - lambda * nll).mean();
}

namespace {

void check_shapes(const TrainConfig& config, const LabeledDataset& data) {
  const std::vector<std::int64_t> sample = {data.channels(), data.height(), data.width()};
  if (infer_output_shape(config.generator) != sample) {
    throw InvalidArgument("generator output shape does not match dataset samples");
  }
  if (config.generator.input_shape != std::vector<std::int64_t>{config.latent_dim}) {
    throw InvalidArgument("generator input does not match latent_dim");
  }
  if (config.discriminator.input_shape != sample) {
    throw InvalidArgument("discriminator input shape does not match dataset samples");
  }
  if (infer_output_shape(config.discriminator) != std::vector<std::int64_t>{1}) {
    throw InvalidArgument("discriminator must produce a single score");
  }
}

torch::Tensor gather(const torch::Tensor& images, std::span<const std::int64_t> idx) {
  return images.index_select(
      0, torch::from_blob(const_cast<std::int64_t*>(idx.data()),
                          {static_cast<std::int64_t>(idx.size())}, torch::kInt64));
}

class Trainer {
 public:
  Trainer(const TrainConfig& config, const LabeledDataset& data, const SplitIndices& split,
          const TrainHooks& hooks)
      : config_(config), data_(data), split_(split), hooks_(hooks),
        rng_(derive_seed(config.seeds.training, 1)),
        latent_gen_(at::detail::createCPUGenerator(derive_seed(config.seeds.training, 2))) {
    config_.validate();
    check_shapes(config_, data_);
    if (split_.train_idx.empty()) throw InvalidArgument("empty training split");
    if (config_.trainer == TrainerKind::kMimgan && !config_.adversary) {
      config_.adversary = preset("appendix3-adversary",
                                 {data.channels(), data.height(), data.width()});
    }
    if (config_.trainer != TrainerKind::kMimgan) {
      config_.adversary.reset();
      config_.lambda = 0.0;
    }
    torch::manual_seed(derive_seed(config.seeds.training, 3));
    bundle_.generator = Network(config_.generator, config_.seeds.generator_init);
    bundle_.discriminator = Network(config_.discriminator, config_.seeds.discriminator_init);
    if (config_.adversary) {
      bundle_.adversary = Network(*config_.adversary, config_.seeds.adversary_init);
    }
    g_opt_ = make_optimizer(config_.optimizer, bundle_.generator.parameters());
    d_opt_ = make_optimizer(config_.optimizer, bundle_.discriminator.parameters());
    if (bundle_.adversary) {
      a_opt_ = make_optimizer(config_.optimizer, bundle_.adversary->parameters());
      if (infer_output_shape(*config_.adversary) !=
          std::vector<std::int64_t>{2 * data.sample_dim()}) {
        throw InvalidArgument("adversary head must emit 2 * sample_dim values");
      }
    }
    train_images_ = gather(data_.images, split_.train_idx);
    if (!split_.holdout_idx.empty()) holdout_images_ = gather(data_.images, split_.holdout_idx);
  }

  TrainedBundle run() {
    bundle_.config = config_;
    bundle_.split = split_;
    for (std::int64_t epoch = 1; epoch <= config_.epochs; ++epoch) {
      EpochRecord rec = run_epoch(epoch);
      const bool eval_now = config_.eval_every > 0 &&
                            (epoch % config_.eval_every == 0 || epoch == config_.epochs);
      if (eval_now) {
        ScoreSnapshot snap = snapshot(epoch);
        if (snap.scores.count(ScoreTag::kHoldout) > 0) {
          rec.rho_estimate = bhattacharyya_hist(
              estimate_densities(snap.scores, ScoreTag::kHoldout, ScoreTag::kTrain));
        }
        bundle_.snapshots.push_back(std::move(snap));
        write_checkpoints("epoch_" + std::to_string(epoch));
      }
      bundle_.history.push_back(rec);
      if (hooks_.on_epoch) hooks_.on_epoch(rec);
    }
    bundle_.generator.set_training(false);
    bundle_.discriminator.set_training(false);
    if (bundle_.adversary) bundle_.adversary->set_training(false);
    return std::move(bundle_);
  }

 private:
  torch::Tensor latent(std::int64_t b) {
    return torch::randn({b, config_.latent_dim}, latent_gen_, torch::kFloat32);
  }

  torch::Tensor permuted(const torch::Tensor& batch) {
    return gather(batch, random_permutation(batch.size(0), rng_));
  }

  void step(torch::optim::Optimizer& opt, const torch::Tensor& loss) {
    opt.zero_grad();
    loss.backward();
    opt.step();
  }

  void guard(const char* what, const torch::Tensor& loss, std::int64_t epoch, std::int64_t iter) {
    const double v = loss.item<double>();
    if (std::isfinite(v)) return;
    std::ostringstream msg;
    msg << "non-finite " << what << " loss (" << v << ") at epoch " << epoch << ", iteration "
        << iter;
    if (!config_.checkpoint_dir.empty()) {
      try {
        write_checkpoints("diverged");
        msg << "; state saved to " << (config_.checkpoint_dir / "diverged_*.gpck").string();
      } catch (const std::exception& e) {
        msg << "; checkpoint dump failed: " << e.what();
      }
    }
    throw TrainingError(msg.str());
  }

  EpochRecord run_epoch(std::int64_t epoch) {
    auto& G = bundle_.generator;
    auto& D = bundle_.discriminator;
    G.set_training(true);
    D.set_training(true);
    if (bundle_.adversary) bundle_.adversary->set_training(true);

    const std::int64_t n = train_images_.size(0);
    const std::int64_t B = config_.batch_size;
    const std::int64_t k = config_.effective_generator_steps();
    const auto order = random_permutation(n, rng_);

    double d_sum = 0, g_sum = 0, a_sum = 0, real_sum = 0, fake_sum = 0, ent_sum = 0;
    std::int64_t d_count = 0, g_count = 0, real_count = 0, fake_count = 0;
    std::int64_t iter = 0;
    for (std::int64_t start = 0; start < n; start += B, ++iter) {
      const std::int64_t b = std::min(B, n - start);
      std::vector<std::int64_t> idx(order.begin() + start, order.begin() + start + b);
      const auto real = gather(train_images_, idx);

      auto d_update = [&] {
        const auto fake = G.forward(latent(b)).detach();
        const auto real_logits = D.forward_logits(real);
        const auto fake_logits = D.forward_logits(fake);
        const auto loss = discriminator_loss(real_logits, fake_logits);
        guard("discriminator", loss, epoch, iter);
        step(*d_opt_, loss);
        d_sum += loss.item<double>();
        ++d_count;
        real_sum += torch::sigmoid(real_logits).sum().item<double>();
        fake_sum += torch::sigmoid(fake_logits).sum().item<double>();
        real_count += b;
        fake_count += b;
        return fake;
      };

      if (config_.trainer == TrainerKind::kMimgan) {
        auto& A = *bundle_.adversary;
        for (std::int64_t i = 0; i < k; ++i) {
          const auto fake = d_update();
          const auto loss = adversary_loss(A.forward(fake), permuted(real));
          guard("adversary", loss, epoch, iter);
          step(*a_opt_, loss);
          a_sum += loss.item<double>();
        }
        const auto fake = G.forward(latent(b));
        const auto logits = D.forward_logits(fake);
        const auto loss = mimgan_generator_loss(logits, A.forward(fake), permuted(real),
                                                config_.lambda);
        guard("generator", loss, epoch, iter);
        step(*g_opt_, loss);
        g_sum += loss.item<double>();
        ent_sum += binary_entropy(torch::sigmoid(logits.detach())).mean().item<double>();
        ++g_count;
      } else {
        d_update();
        for (std::int64_t i = 0; i < k; ++i) {
          const auto logits = D.forward_logits(G.forward(latent(b)));
          const auto loss = config_.trainer == TrainerKind::kMegan ? megan_generator_loss(logits)
                                                                   : gan_generator_loss(logits);
          guard("generator", loss, epoch, iter);
          step(*g_opt_, loss);
          g_sum += loss.item<double>();
          ent_sum += binary_entropy(torch::sigmoid(logits.detach())).mean().item<double>();
          ++g_count;
        }
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.d_loss = d_sum / static_cast<double>(d_count);
    rec.g_loss = g_sum / static_cast<double>(g_count);
    if (bundle_.adversary) rec.a_loss = a_sum / static_cast<double>(d_count);
    rec.mean_train_score = real_sum / static_cast<double>(real_count);
    rec.mean_fake_score = fake_sum / static_cast<double>(fake_count);
    rec.fake_entropy = ent_sum / static_cast<double>(g_count);
    return rec;
  }

  ScoreSnapshot snapshot(std::int64_t epoch) {
    ScoreSnapshot snap;
    snap.epoch = epoch;
    auto& D = bundle_.discriminator;
    std::vector<double> scores;
    std::vector<ScoreTag> tags;
    auto add = [&](const torch::Tensor& x, ScoreTag tag) {
      const auto s = D.predict(x).to(torch::kFloat64).contiguous();
      const double* p = s.data_ptr<double>();
      scores.insert(scores.end(), p, p + s.numel());
      tags.insert(tags.end(), static_cast<std::size_t>(s.numel()), tag);
    };
    add(train_images_, ScoreTag::kTrain);
    if (holdout_images_.defined()) add(holdout_images_, ScoreTag::kHoldout);
    if (config_.snapshot_fake_samples > 0) {
      // A dedicated generator keeps snapshot draws out of the training stream.
      const auto z = sample_latent(config_.snapshot_fake_samples, config_.latent_dim,
                                   derive_seed(config_.seeds.training, 1000 + epoch));
      add(bundle_.generator.predict(z), ScoreTag::kFake);
    }
    snap.scores = make_score_set(std::move(scores), std::move(tags));
    return snap;
  }

  void write_checkpoints(const std::string& stem) {
    if (config_.checkpoint_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(config_.checkpoint_dir, ec);
    if (ec) throw IoError("cannot create " + config_.checkpoint_dir.string() + ": " + ec.message());
    save_checkpoint(bundle_.generator, config_.checkpoint_dir / (stem + "_generator.gpck"));
    save_checkpoint(bundle_.discriminator, config_.checkpoint_dir / (stem + "_discriminator.gpck"));
    if (bundle_.adversary) {
      save_checkpoint(*bundle_.adversary, config_.checkpoint_dir / (stem + "_adversary.gpck"));
    }
  }

  TrainConfig config_;
  const LabeledDataset& data_;
  SplitIndices split_;
  const TrainHooks& hooks_;
  Rng rng_;
  at::Generator latent_gen_;
  TrainedBundle bundle_;
  std::unique_ptr<torch::optim::Optimizer> g_opt_, d_opt_, a_opt_;
  torch::Tensor train_images_, holdout_images_;
};

TrainedBundle run_trainer(TrainerKind expected, const TrainConfig& config,
                          const LabeledDataset& data, const SplitIndices& split,
                          const TrainHooks& hooks) {
  if (config.trainer != expected) {
    throw InvalidArgument("config.trainer is " + trainer_name(config.trainer) + ", expected " +
                          trainer_name(expected));
  }
  return Trainer(config, data, split, hooks).run();
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

}  // namespace

TrainedBundle train_gan(const TrainConfig& config, const LabeledDataset& data,
                        const SplitIndices& split, const TrainHooks& hooks) {
  return run_trainer(TrainerKind::kGan, config, data, split, hooks);
}

TrainedBundle train_megan(const TrainConfig& config, const LabeledDataset& data,
                          const SplitIndices& split, const TrainHooks& hooks) {
  return run_trainer(TrainerKind::kMegan, config, data, split, hooks);
}

TrainedBundle train_mimgan(const TrainConfig& config, const LabeledDataset& data,
                           const SplitIndices& split, const TrainHooks& hooks) {
  if (config.lambda < 0.0) throw ConfigError("lambda", "must be >= 0");
  return run_trainer(TrainerKind::kMimgan, config, data, split, hooks);
}

TrainedBundle train(const TrainConfig& config, const LabeledDataset& data,
                    const SplitIndices& split, const TrainHooks& hooks) {
  return Trainer(config, data, split, hooks).run();
}

void write_history_csv(const std::vector<EpochRecord>& history,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "epoch,d_loss,g_loss,a_loss,mean_train_score,mean_fake_score,fake_entropy,rho_estimate\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << cell(r.d_loss) << ',' << cell(r.g_loss) << ',' << cell(r.a_loss)
        << ',' << cell(r.mean_train_score) << ',' << cell(r.mean_fake_score) << ','
        << cell(r.fake_entropy) << ',' << cell(r.rho_estimate) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<EpochRecord> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty history file " + path.string());
  std::vector<EpochRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    while (f.size() < 8) f.emplace_back();
    auto num = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    try {
      EpochRecord r;
      r.epoch = std::stoll(f[0]);
      r.d_loss = num(f[1]).value_or(NAN);
      r.g_loss = num(f[2]).value_or(NAN);
      r.a_loss = num(f[3]);
      r.mean_train_score = num(f[4]).value_or(NAN);
      r.mean_fake_score = num(f[5]).value_or(NAN);
      r.fake_entropy = num(f[6]).value_or(NAN);
      r.rho_estimate = num(f[7]);
      out.push_back(r);
    } catch (const std::exception&) {
      throw IoError("malformed history row in " + path.string() + ": " + line);
    }
  }
  return out;
}

}  // namespace ganpriv
