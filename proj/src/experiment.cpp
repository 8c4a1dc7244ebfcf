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

#include "ganpriv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ganpriv/error.hpp"
#include "ganpriv/plot.hpp"
#include "ganpriv/random.hpp"

namespace ganpriv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams derived from the single global seed.
enum SeedSalt : std::uint64_t {
  kSubsampleSalt = 1,
  kSplitSalt,
  kGeneratorSalt,
  kDiscriminatorSalt,
  kAdversarySalt,
  kTrainingSalt,
  kOracleSalt,
  kEvalClassifierSalt,
  kReportSalt,
};

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + key, "missing required field");
  return j.at(key);
}

template <typename T>
T read(const json& j, const std::string& key, const std::string& path) {
  try {
    return member(j, key, path).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + key, "has the wrong type");
  }
}

template <typename T>
T read_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return read<T>(j, key, path);
}

const json& section(const json& j, const std::string& key, const std::string& path) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw ConfigError(path + key, "must be an object");
  return j.at(key);
}

void check_arch(const json& ref, const std::string& field) {
  if (ref.is_string()) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), ref.get<std::string>()) == names.end()) {
      throw ConfigError(field, "unknown preset '" + ref.get<std::string>() + "'");
    }
  } else if (ref.is_object()) {
    try {
      arch_from_json(ref);
    } catch (const std::exception& e) {
      throw ConfigError(field, e.what());
    }
  } else {
    throw ConfigError(field, "must be a preset name or an architecture object");
  }
}

ArchSpec resolve_arch(const json& ref, const ImageShape& image, std::int64_t latent_dim,
                      std::int64_t classes) {
  if (ref.is_string()) return preset(ref.get<std::string>(), image, latent_dim, classes);
  return arch_from_json(ref);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* tag_name(ScoreTag t) {
  switch (t) {
    case ScoreTag::kTrain: return "train";
    case ScoreTag::kHoldout: return "holdout";
    case ScoreTag::kFake: return "fake";
  }
  return "?";
}

void write_scores_csv(const ScoreSet& s, const fs::path& path) {
  std::ostringstream os;
  os.precision(17);
  os << "tag,score\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << tag_name(s.tags[i]) << ',' << s.scores[i] << '\n';
  write_text(path, os.str());
}

ScoreSet read_scores_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  std::vector<double> scores;
  std::vector<ScoreTag> tags;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed score row in " + path.string());
    const auto tag = line.substr(0, comma);
    if (tag == "train") tags.push_back(ScoreTag::kTrain);
    else if (tag == "holdout") tags.push_back(ScoreTag::kHoldout);
    else if (tag == "fake") tags.push_back(ScoreTag::kFake);
    else throw IoError("unknown score tag in " + path.string());
    scores.push_back(std::stod(line.substr(comma + 1)));
  }
  return make_score_set(std::move(scores), std::move(tags));
}

std::string padded(std::int64_t epoch) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04lld", static_cast<long long>(epoch));
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  ExperimentConfig c;
  c.source = j;
  const int version = read_or<int>(j, "schema_version", "", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version));
  }
  c.run_id = read<std::string>(j, "run_id", "");
  if (c.run_id.empty() || c.run_id.find_first_of("/\\") != std::string::npos || c.run_id == "." ||
      c.run_id == "..") {
    throw ConfigError("run_id", "must be a non-empty plain file name");
  }
  c.seed = read_or<std::uint64_t>(j, "seed", "", 0);
  c.output_dir = read_or<std::string>(j, "output_dir", "", "runs");

  const json& ds = member(j, "dataset", "");
  c.dataset.source = read<std::string>(ds, "source", "dataset.");
  c.dataset.subsample = read_or<std::int64_t>(ds, "subsample", "dataset.", 0);
  if (c.dataset.subsample < 0) throw ConfigError("dataset.subsample", "must be >= 0");
  c.dataset.grayscale = read_or<bool>(ds, "grayscale", "dataset.", false);
  if (ds.contains("resize") && !ds.at("resize").is_null()) {
    const auto r = read<std::vector<int>>(ds, "resize", "dataset.");
    if (r.size() != 2 || r[0] < 1 || r[1] < 1) {
      throw ConfigError("dataset.resize", "must be [height, width]");
    }
    c.dataset.resize = std::make_pair(r[0], r[1]);
  }

  const json& split = section(j, "split", "");
  c.train_fraction = read_or<double>(split, "train_fraction", "split.", 0.1);
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
    throw ConfigError("split.train_fraction", "must lie in (0, 1)");
  }

  const json& tr = member(j, "trainer", "");
  const std::string p = "trainer.";
  try {
    c.train.trainer = trainer_from_name(read<std::string>(tr, "kind", p));
  } catch (const InvalidArgument& e) {
    throw ConfigError("trainer.kind", e.what());
  }
  c.train.batch_size = read_or<std::int64_t>(tr, "batch_size", p, 64);
  c.train.generator_steps = read_or<std::int64_t>(tr, "generator_steps", p, 0);
  c.train.lambda = read_or<double>(tr, "lambda", p, 0.0);
  c.train.epochs = read<std::int64_t>(tr, "epochs", p);
  c.train.eval_every = read_or<std::int64_t>(tr, "eval_every", p, 0);
  c.train.latent_dim = read_or<std::int64_t>(tr, "latent_dim", p, 100);
  c.train.snapshot_fake_samples = read_or<std::int64_t>(tr, "snapshot_fake_samples", p, 1000);
  const json& opt = section(tr, "optimizer", p);
  c.train.optimizer.name = read_or<std::string>(opt, "name", p + "optimizer.", "adam");
  c.train.optimizer.learning_rate = read_or<double>(opt, "learning_rate", p + "optimizer.", 2e-4);
  c.train.optimizer.beta1 = read_or<double>(opt, "beta1", p + "optimizer.", 0.5);
  c.train.optimizer.beta2 = read_or<double>(opt, "beta2", p + "optimizer.", 0.999);
  c.train.optimizer.epsilon = read_or<double>(opt, "epsilon", p + "optimizer.", 1e-7);
  c.train.optimizer.momentum = read_or<double>(opt, "momentum", p + "optimizer.", 0.0);
  check_arch(member(tr, "generator", p), "trainer.generator");
  check_arch(member(tr, "discriminator", p), "trainer.discriminator");
  if (tr.contains("adversary")) check_arch(tr.at("adversary"), "trainer.adversary");

  const json& at = section(j, "attack", "");
  c.attack.bins = read_or<int>(at, "bins", "attack.", kDefaultBins);
  if (c.attack.bins < 2) throw ConfigError("attack.bins", "must be at least 2");
  c.attack.blackbox = read_or<bool>(at, "blackbox", "attack.", true);
  c.attack.blackbox_epochs = read_or<std::int64_t>(at, "blackbox_epochs", "attack.", 10);
  c.attack.fake_score_samples = read_or<std::int64_t>(at, "fake_score_samples", "attack.", 1000);
  if (c.attack.blackbox_epochs < 1) throw ConfigError("attack.blackbox_epochs", "must be >= 1");
  if (c.attack.fake_score_samples < 1) throw ConfigError("attack.fake_score_samples", "must be >= 1");

  const json& ev = section(j, "evaluation", "");
  const std::string e = "evaluation.";
  c.evaluation.utility = read_or<bool>(ev, "utility", e, true);
  c.evaluation.memorization_samples = read_or<std::int64_t>(ev, "memorization_samples", e, 2000);
  c.evaluation.utility_samples = read_or<std::int64_t>(ev, "utility_samples", e, 10000);
  c.evaluation.classifier = read_or<std::string>(ev, "classifier", e, "appendix4-classifier");
  c.evaluation.oracle_epochs = read_or<std::int64_t>(ev, "oracle_epochs", e, 3);
  c.evaluation.classifier_epochs = read_or<std::int64_t>(ev, "classifier_epochs", e, 10);
  c.evaluation.gan_train_epochs = read_or<std::int64_t>(ev, "gan_train_epochs", e, 3);
  check_arch(c.evaluation.classifier, "evaluation.classifier");
  for (auto [v, name] : {std::pair{c.evaluation.memorization_samples, "memorization_samples"},
                         std::pair{c.evaluation.utility_samples, "utility_samples"},
                         std::pair{c.evaluation.oracle_epochs, "oracle_epochs"},
                         std::pair{c.evaluation.classifier_epochs, "classifier_epochs"},
                         std::pair{c.evaluation.gan_train_epochs, "gan_train_epochs"}}) {
    if (v < 1) throw ConfigError(e + name, "must be >= 1");
  }

  // Architectures are resolved against the dataset at run time; validate
  // the scalar training fields now with placeholder networks.
  TrainConfig probe = c.train;
  probe.generator.kind = ModelKind::kGenerator;
  probe.discriminator.kind = ModelKind::kDiscriminator;
  probe.adversary.reset();
  probe.validate();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError&) {
    throw ConfigError("<file>", "cannot read config " + path.string());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

std::string config_fingerprint(const ExperimentConfig& config) {
  return fnv1a_hex(config.source.dump());
}

RunResult run_experiment(const fs::path& config_path, const RunOptions& options) {
  return run_experiment(load_experiment_config(config_path), options);
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  auto log = [&](const std::string& msg) {
    if (options.log) options.log(msg);
  };
  const fs::path out = options.output_dir.empty() ? config.output_dir : options.output_dir;
  const fs::path run_dir = out / config.run_id;
  std::error_code ec;
  if (fs::exists(run_dir / "report.json")) {
    if (!options.force) {
      throw IoError("run directory " + run_dir.string() + " already holds a report (use --force)");
    }
    fs::remove_all(run_dir, ec);
    if (ec) throw IoError("cannot clear " + run_dir.string() + ": " + ec.message());
  }
  fs::create_directories(run_dir / "scores", ec);
  if (ec) throw IoError("cannot create " + run_dir.string() + ": " + ec.message());
  write_text(run_dir / "config.json", config.source.dump(2) + "\n");

  LoadOptions load;
  load.resize = config.dataset.resize;
  load.grayscale = config.dataset.grayscale;
  if (options.cache_dir) load.cache_dir = *options.cache_dir;
  LabeledDataset data = load_dataset(config.dataset.source, load);
  if (config.dataset.subsample > 0 && config.dataset.subsample < data.size()) {
    data = subsample(data, config.dataset.subsample, derive_seed(config.seed, kSubsampleSalt));
  }
  const SplitIndices split =
      make_split(data, config.train_fraction, derive_seed(config.seed, kSplitSalt));
  const AttackPool pool = build_attack_pool(data, split);
  log("dataset " + data.name + ": " + std::to_string(data.size()) + " samples, " +
      std::to_string(split.train_idx.size()) + " train");

  const ImageShape image = {data.channels(), data.height(), data.width()};
  const std::int64_t classes = data.num_classes > 0 ? data.num_classes : 10;
  const json& tr = config.source.at("trainer");
  TrainConfig tc = config.train;
  try {
    tc.generator = resolve_arch(tr.at("generator"), image, tc.latent_dim, classes);
    tc.discriminator = resolve_arch(tr.at("discriminator"), image, tc.latent_dim, classes);
    if (tr.contains("adversary")) {
      tc.adversary = resolve_arch(tr.at("adversary"), image, tc.latent_dim, classes);
    }
    tc.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("trainer", e.what());
  }
  tc.seeds.generator_init = derive_seed(config.seed, kGeneratorSalt);
  tc.seeds.discriminator_init = derive_seed(config.seed, kDiscriminatorSalt);
  tc.seeds.adversary_init = derive_seed(config.seed, kAdversarySalt);
  tc.seeds.training = derive_seed(config.seed, kTrainingSalt);
  tc.checkpoint_dir = run_dir / "checkpoints";

  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    std::ostringstream os;
    os.precision(4);
    os << "epoch " << r.epoch << "/" << tc.epochs << " d_loss " << r.d_loss << " g_loss "
       << r.g_loss;
    if (r.a_loss) os << " a_loss " << *r.a_loss;
    os << " D(train) " << r.mean_train_score << " D(fake) " << r.mean_fake_score;
    if (r.rho_estimate) os << " rho " << *r.rho_estimate;
    log(os.str());
  };
  TrainedBundle bundle;
  try {
    bundle = train(tc, data, split, hooks);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("trainer", e.what());
  }
  write_history_csv(bundle.history, run_dir / "history.csv");
  for (const auto& snap : bundle.snapshots) {
    write_scores_csv(snap.scores, run_dir / "scores" / ("epoch_" + padded(snap.epoch) + ".csv"));
  }
  fs::create_directories(tc.checkpoint_dir, ec);
  save_checkpoint(bundle.generator, tc.checkpoint_dir / "final_generator.gpck");
  save_checkpoint(bundle.discriminator, tc.checkpoint_dir / "final_discriminator.gpck");
  if (bundle.adversary) save_checkpoint(*bundle.adversary, tc.checkpoint_dir / "final_adversary.gpck");

  EvalAssets assets;
  const bool utility = config.evaluation.utility && data.has_labels();
  json extra = json::object();
  if (utility) {
    const ArchSpec clf = resolve_arch(config.evaluation.classifier, image, tc.latent_dim, classes);
    std::vector<std::int64_t> all(static_cast<std::size_t>(data.size()));
    std::iota(all.begin(), all.end(), 0);
    ClassifierOptions co;
    co.epochs = config.evaluation.oracle_epochs;
    log("training oracle classifier");
    assets.oracle = train_classifier(data, all, clf, derive_seed(config.seed, kOracleSalt), co,
                                     std::span<const std::int64_t>(split.holdout_idx));
    co.epochs = config.evaluation.classifier_epochs;
    log("training evaluation classifier");
    assets.eval_classifier =
        train_classifier(data, split.train_idx, clf, derive_seed(config.seed, kEvalClassifierSalt),
                         co, std::span<const std::int64_t>(split.holdout_idx));
    assets.real_test = select(data, split.holdout_idx);
    save_checkpoint(assets.oracle->network, tc.checkpoint_dir / "oracle_classifier.gpck");
    save_checkpoint(assets.eval_classifier->network, tc.checkpoint_dir / "eval_classifier.gpck");
    extra["oracle_fit_accuracy"] = assets.oracle->accuracy_on_real_test;
    extra["eval_classifier_holdout_accuracy"] = assets.eval_classifier->accuracy_on_real_test;
  }

  ReportOptions ro;
  ro.run_id = config.run_id;
  ro.config_fingerprint = config_fingerprint(config);
  ro.bins = config.attack.bins;
  ro.memorization_samples = config.evaluation.memorization_samples;
  ro.utility_samples = config.evaluation.utility_samples;
  ro.fake_score_samples = config.attack.fake_score_samples;
  ro.run_blackbox = config.attack.blackbox;
  ro.blackbox_epochs = config.attack.blackbox_epochs;
  ro.run_utility = utility;
  ro.gan_train_classifier.epochs = config.evaluation.gan_train_epochs;
  ro.seed = derive_seed(config.seed, kReportSalt);
  log("evaluating");
  MetricsReport report = privacy_utility_report(bundle, pool, assets, ro);
  for (auto& [k, v] : extra.items()) report.metadata[k] = v;
  report.metadata["dataset"] = data.name;
  report.metadata["desk_scale_note"] = "desk-scale corpus size and epochs";

  write_text(run_dir / "report.json", report.to_json().dump(2) + "\n");
  write_text(run_dir / "report.csv", MetricsReport::csv_header() + "\n" + report.csv_row() + "\n");
  emit_plots(run_dir);
  log("wrote " + run_dir.string());
  return {run_dir, std::move(report)};
}

std::vector<fs::path> emit_plots(const fs::path& run_dir) {
  const fs::path history_path = run_dir / "history.csv";
  if (!fs::exists(history_path)) throw IoError("missing " + history_path.string());
  const auto history = read_history_csv(history_path);
  if (history.empty()) throw InvalidArgument("empty history in " + history_path.string());

  std::vector<std::pair<fs::path, ScoreSet>> snapshots;
  if (fs::is_directory(run_dir / "scores")) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(run_dir / "scores")) {
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) snapshots.emplace_back(f, read_scores_csv(f));
  }

  // Build every chart before writing anything.
  std::vector<std::pair<fs::path, Chart>> charts;
  std::vector<double> epochs, d_loss, g_loss, a_loss, train_score, fake_score, rho_x, rho;
  bool has_a = false;
  for (const auto& r : history) {
    epochs.push_back(static_cast<double>(r.epoch));
    d_loss.push_back(r.d_loss);
    g_loss.push_back(r.g_loss);
    a_loss.push_back(r.a_loss.value_or(NAN));
    has_a = has_a || r.a_loss.has_value();
    train_score.push_back(r.mean_train_score);
    fake_score.push_back(r.mean_fake_score);
    if (r.rho_estimate) {
      rho_x.push_back(static_cast<double>(r.epoch));
      rho.push_back(*r.rho_estimate);
    }
  }
  Chart losses("Training losses", "epoch", "loss");
  losses.add_series("d_loss", epochs, d_loss, Chart::Style::kLine);
  losses.add_series("g_loss", epochs, g_loss, Chart::Style::kLine);
  charts.emplace_back("loss_curves.png", losses);
  if (has_a) {
    Chart adv("Adversary loss", "epoch", "NLL");
    adv.add_series("a_loss", epochs, a_loss, Chart::Style::kLine);
    charts.emplace_back("adversary_loss.png", adv);
  }
  Chart scores("Discriminator scores", "epoch", "score");
  scores.set_y_range(0.0, 1.0);
  scores.add_series("mean D(train)", epochs, train_score, Chart::Style::kLine);
  scores.add_series("mean D(fake)", epochs, fake_score, Chart::Style::kLine);
  if (!rho.empty()) scores.add_series("rho train/test", rho_x, rho, Chart::Style::kLinePoints);
  charts.emplace_back("score_trends.png", scores);

  constexpr int kPlotBins = 50;
  for (const auto& [file, s] : snapshots) {
    Chart c("Score density, " + file.stem().string(), "discriminator score", "density");
    std::vector<double> centers(kPlotBins);
    for (int i = 0; i < kPlotBins; ++i) centers[i] = (i + 0.5) / kPlotBins;
    for (ScoreTag tag : {ScoreTag::kTrain, ScoreTag::kHoldout, ScoreTag::kFake}) {
      const auto v = s.of(tag);
      if (v.empty()) continue;
      auto p = estimate_densities(v, v, kPlotBins).p0;
      for (auto& x : p) x *= kPlotBins;
      c.add_series(tag_name(tag), centers, p, Chart::Style::kLine);
    }
    if (!c.empty()) charts.emplace_back("score_density_" + file.stem().string() + ".png", c);
  }

  std::error_code ec;
  fs::create_directories(run_dir / "plots", ec);
  if (ec) throw IoError("cannot create plots directory: " + ec.message());
  std::vector<fs::path> written;
  for (const auto& [name, chart] : charts) {
    chart.save_png(run_dir / "plots" / name);
    written.push_back(run_dir / "plots" / name);
  }
  return written;
}

std::vector<fs::path> compare_runs(const std::vector<fs::path>& run_dirs, const fs::path& out_dir) {
  if (run_dirs.empty()) throw InvalidArgument("compare needs at least one run directory");
  std::vector<MetricsReport> reports;
  std::set<std::string> ids;
  for (const auto& dir : run_dirs) {
    json j;
    try {
      j = json::parse(read_text(dir / "report.json"));
    } catch (const json::parse_error& e) {
      throw IoError("unreadable report in " + dir.string() + ": " + e.what());
    }
    auto r = MetricsReport::from_json(j);
    if (!ids.insert(r.run_id).second) {
      throw InvalidArgument("duplicate run_id '" + r.run_id + "' in " + dir.string());
    }
    reports.push_back(std::move(r));
  }

  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    if (std::isinf(*v)) return std::string(*v > 0 ? "inf" : "-inf");
    std::ostringstream os;
    os.precision(6);
    os << *v;
    return os.str();
  };
  std::ostringstream csv;
  csv << "run_id,model,lambda,g,rho_tr_te,mia,m,tvd,gan_test,gan_train\n";
  for (const auto& r : reports) {
    csv << r.run_id << ',' << r.trainer << ',' << num(r.lambda) << ',' << num(r.gap) << ','
        << num(r.rho_tr_te) << ',' << num(r.mia_whitebox) << ',' << num(r.memorization) << ','
        << num(r.tvd) << ',' << num(r.gan_test) << ',' << num(r.gan_train) << '\n';
  }

  std::vector<std::pair<fs::path, Chart>> charts;
  if (reports.size() > 1) {
    Chart scatter("Privacy vs utility", "MIA accuracy", "GAN-test accuracy");
    for (const auto& r : reports) {
      if (r.mia_whitebox && r.gan_test) {
        scatter.add_series(r.run_id, {*r.mia_whitebox}, {*r.gan_test}, Chart::Style::kPoints);
      }
    }
    if (!scatter.empty()) charts.emplace_back("privacy_utility.png", scatter);
  }
  std::map<double, const MetricsReport*> by_lambda;
  for (const auto& r : reports) {
    if (r.trainer == "mimgan" && r.lambda) by_lambda[*r.lambda] = &r;
  }
  if (by_lambda.size() > 1) {
    std::vector<double> lam, rho, mia;
    for (const auto& [l, r] : by_lambda) {
      lam.push_back(l);
      rho.push_back(r->rho_tr_te.value_or(NAN));
      mia.push_back(r->mia_whitebox.value_or(NAN));
    }
    Chart rho_chart("rho versus lambda", "lambda", "rho train/test");
    rho_chart.add_series("mimgan", lam, rho, Chart::Style::kLinePoints);
    Chart mia_chart("MIA accuracy versus lambda", "lambda", "MIA accuracy");
    mia_chart.add_series("mimgan", lam, mia, Chart::Style::kLinePoints);
    charts.emplace_back("lambda_rho.png", rho_chart);
    charts.emplace_back("lambda_mia.png", mia_chart);
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written = {out_dir / "comparison.csv"};
  write_text(written.front(), csv.str());
  for (const auto& [name, chart] : charts) {
    chart.save_png(out_dir / name);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace ganpriv
