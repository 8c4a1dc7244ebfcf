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

// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance [criterion ...]
//
// Desk runs go to $GANPRIV_ACCEPTANCE_OUT (default ./acceptance_runs). With
// GANPRIV_ACCEPTANCE_REUSE=1 finished runs are read back instead of retrained.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ganpriv/error.hpp"
#include "ganpriv/evaluation.hpp"
#include "ganpriv/experiment.hpp"
#include "ganpriv/mia_attacks.hpp"
#include "ganpriv/overfit_metrics.hpp"
#include "ganpriv/random.hpp"
#include "ganpriv/trainers.hpp"
#include "test_util.hpp"

namespace ganpriv {
namespace {

namespace fs = std::filesystem;
using testing::adaptive_simpson;
using testing::normal_pdf;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

// 1. Closed-form rho against quadrature of sqrt(p0 p1).
Verdict criterion1() {
  const double t0 = cpu_seconds();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> mu(-3.0, 3.0), var(0.05, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double m0 = mu(rng), v0 = var(rng), m1 = mu(rng), v1 = var(rng);
    const double sd = std::sqrt(std::max(v0, v1));
    const double lo = std::min(m0, m1) - 15 * sd, hi = std::max(m0, m1) + 15 * sd;
    const double numeric = adaptive_simpson(
        [&](double x) { return std::sqrt(normal_pdf(x, m0, v0) * normal_pdf(x, m1, v1)); }, lo, hi,
        1e-11);
    worst = std::max(worst, std::abs(bhattacharyya_gaussian(m0, v0, m1, v1) - numeric));
  }
  const double t = cpu_seconds() - t0;
  return {worst <= 1e-4 && t < 10.0,
          "50 pairs, max |closed form - quadrature| = " + fmt("%.2e", worst) + ", " +
              fmt("%.2f", t) + " s"};
}

// 2. Bayes error of random discrete pairs lies inside the rho bounds.
Verdict criterion2() {
  const double t0 = cpu_seconds();
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> bins(2, 60);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double tightest = 1.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = bins(rng);
    std::vector<double> p0(k), p1(k);
    const double sparsity = u(rng) * 0.5;
    double s0 = 0, s1 = 0;
    for (int i = 0; i < k; ++i) {
      p0[i] = u(rng) < sparsity ? 0.0 : -std::log(u(rng) + 1e-300);
      p1[i] = u(rng) < sparsity ? 0.0 : -std::log(u(rng) + 1e-300);
      s0 += p0[i];
      s1 += p1[i];
    }
    if (s0 == 0) p0[0] = s0 = 1;
    if (s1 == 0) p1[k - 1] = s1 = 1;
    const double pi1 = 0.01 + 0.98 * u(rng), pi0 = 1 - pi1;
    double bayes = 0, rho = 0;
    for (int i = 0; i < k; ++i) {
      p0[i] /= s0;
      p1[i] /= s1;
      bayes += std::min(pi0 * p0[i], pi1 * p1[i]);
      rho += std::sqrt(p0[i] * p1[i]);
    }
    const auto b = mia_error_bounds(std::min(rho, 1.0), pi0, pi1);
    if (bayes < b.lower - 1e-12 || bayes > b.upper + 1e-12) ++violations;
    tightest = std::min(tightest, std::min(bayes - b.lower, b.upper - bayes));
  }
  const double t = cpu_seconds() - t0;
  return {violations == 0 && t < 30.0,
          "1000 trials, " + std::to_string(violations) + " outside [lower, upper], min slack " +
              fmt("%.2e", tightest) + ", " + fmt("%.2f", t) + " s"};
}

// Discriminator whose score is sigmoid(first pixel).
Network first_pixel_discriminator() {
  ArchSpec spec;
  spec.kind = ModelKind::kDiscriminator;
  spec.input_shape = {1, 2, 2};
  LayerSpec flat{.type = LayerType::kFlatten};
  LayerSpec dense{.type = LayerType::kDense, .units = 1};
  LayerSpec sig{.type = LayerType::kSigmoid};
  spec.layers = {flat, dense, sig};
  Network d(spec, 0);
  torch::NoGradGuard guard;
  for (auto& [name, t] : d.named_state()) {
    t.zero_();
    if (name.find("weight") != std::string::npos) t.view({-1})[0] = 1.0;
  }
  return d;
}

// 3. Whitebox attack on separated and on identical score distributions.
Verdict criterion3() {
  const Network d = first_pixel_discriminator();
  const std::int64_t n = 1000, members = 100;
  AttackPool pool;
  pool.samples = torch::zeros({n, 1, 2, 2});
  pool.membership.assign(n, 0);
  std::mt19937_64 place(303);
  for (std::int64_t i : random_permutation(n, place)) {
    if (pool.n_train == members) break;
    pool.membership[static_cast<std::size_t>(i)] = 1;
    ++pool.n_train;
  }
  for (std::int64_t i = 0; i < n; ++i) {
    pool.samples[i][0][0][0] = pool.membership[static_cast<std::size_t>(i)] ? 2.2 : -2.2;
  }
  const double separated = dmia_whitebox(d, pool).accuracy;

  pool.samples.zero_();
  Rng rng(304);
  double total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    total += dmia_whitebox(d, pool, TieBreak::kRandom, &rng).accuracy;
  }
  const double mean = total / 1000;
  return {separated == 1.0 && std::abs(mean - 0.1) <= 0.03,
          "separated accuracy " + fmt("%.4f", separated) + ", identical-score mean over 1000 " +
              "trials " + fmt("%.4f", mean) + " (prior 0.1000)"};
}

ScoreSet two_class(const std::vector<double>& holdout, const std::vector<double>& train) {
  std::vector<double> s = holdout;
  std::vector<ScoreTag> tags(holdout.size(), ScoreTag::kHoldout);
  s.insert(s.end(), train.begin(), train.end());
  tags.insert(tags.end(), train.size(), ScoreTag::kTrain);
  return make_score_set(s, tags);
}

// 4. Histogram rho against the closed form; TVD extremes.
Verdict criterion4() {
  std::mt19937_64 rng(404);
  const double m0 = 0.42, s0 = 0.07, m1 = 0.55, s1 = 0.09;
  std::normal_distribution<double> g0(m0, s0), g1(m1, s1);
  std::vector<double> a(100000), b(100000);
  for (auto& x : a) x = std::clamp(g0(rng), 0.0, 1.0);
  for (auto& x : b) x = std::clamp(g1(rng), 0.0, 1.0);
  const double hist = bhattacharyya_hist(estimate_densities(a, b, 100));
  const double closed = bhattacharyya_gaussian(m0, s0 * s0, m1, s1 * s1);

  std::vector<double> same(5000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& x : same) x = u(rng);
  const double tvd_same = tvd_attack(two_class(same, same));
  std::vector<double> low(5000), high(5000);
  for (std::size_t i = 0; i < low.size(); ++i) {
    low[i] = 0.4 * u(rng);
    high[i] = 0.6 + 0.4 * u(rng);
  }
  const double tvd_disjoint = tvd_attack(two_class(low, high));
  return {std::abs(hist - closed) <= 0.02 && tvd_same == 0.0 && tvd_disjoint == 1.0,
          "hist rho " + fmt("%.4f", hist) + " vs closed form " + fmt("%.4f", closed) +
              ", TVD identical " + fmt("%.1f", tvd_same) + ", disjoint " +
              fmt("%.1f", tvd_disjoint)};
}

// Plain-double model of the toy networks used by criterion 5.
struct DenseD {
  std::vector<double> w;  // [out][in]
  std::vector<double> b;
  int in = 0, out = 0;
  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(out);
    for (int o = 0; o < out; ++o) {
      double s = b[o];
      for (int i = 0; i < in; ++i) s += w[o * in + i] * x[i];
      y[o] = s;
    }
    return y;
  }
};

DenseD read_dense(const Network& net, const std::string& prefix) {
  DenseD d;
  for (const auto& [name, t] : net.named_state()) {
    const auto c = t.contiguous();
    std::vector<double> v(c.data_ptr<double>(), c.data_ptr<double>() + c.numel());
    if (name == prefix + ".weight") {
      d.w = v;
      d.out = static_cast<int>(t.size(0));
      d.in = static_cast<int>(t.size(1));
    } else if (name == prefix + ".bias") {
      d.b = v;
    }
  }
  return d;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct ToyOracle {
  DenseD g1, g2, d1, d2, a1, a2;

  std::vector<double> generate(const std::vector<double>& z) const {
    auto h = g1.apply(z);
    for (auto& v : h) v = std::tanh(v);
    auto x = g2.apply(h);
    for (auto& v : x) v = 1.0 / (1.0 + std::exp(-v));
    return x;
  }
  double logit(const std::vector<double>& x) const {
    auto h = d1.apply(x);
    for (auto& v : h) v = std::tanh(v);
    return d2.apply(h)[0];
  }
  double nll(const std::vector<double>& fake, const std::vector<double>& real) const {
    auto h = a1.apply(fake);
    for (auto& v : h) v = std::tanh(v);
    const auto raw = a2.apply(h);
    const std::size_t d = real.size();
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const double lv = std::clamp(raw[d + j], -kLogVarClamp, kLogVarClamp);
      const double r = real[j] - raw[j];
      s += lv + r * r * std::exp(-lv) + std::log(2 * M_PI);
    }
    return 0.5 * s;
  }
  // kind: 0 GAN, 1 MEGAN, 2 MIMGAN.
  double loss(int kind, const std::vector<std::vector<double>>& z,
              const std::vector<std::vector<double>>& real, double lambda) const {
    double total = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto x = generate(z[i]);
      const double l = logit(x);
      if (kind == 0) {
        total += softplus(-l);
      } else if (kind == 1) {
        const double d = 1.0 / (1.0 + std::exp(-l));
        total += -d * softplus(-l) - (1 - d) * softplus(l);
      } else {
        total += softplus(-l) - lambda * nll(x, real[i]);
      }
    }
    return total / static_cast<double>(z.size());
  }
};

// 5. Autograd gradients of the generator losses against central differences
// of the plain-double model.
Verdict criterion5() {
  const double t0 = cpu_seconds();
  LayerSpec dense3{.type = LayerType::kDense, .units = 3};
  LayerSpec dense4{.type = LayerType::kDense, .units = 4};
  LayerSpec dense1{.type = LayerType::kDense, .units = 1};
  LayerSpec dense8{.type = LayerType::kDense, .units = 8};
  LayerSpec tanh{.type = LayerType::kTanh};
  LayerSpec sig{.type = LayerType::kSigmoid};
  LayerSpec reshape{.type = LayerType::kReshape, .target = {2, 2, 1}};
  LayerSpec flatten{.type = LayerType::kFlatten};
  Network g(ArchSpec{ModelKind::kGenerator, "toy-g", {2}, {dense3, tanh, dense4, sig, reshape}}, 11);
  Network d(ArchSpec{ModelKind::kDiscriminator, "toy-d", {1, 2, 2}, {flatten, dense3, tanh, dense1, sig}}, 12);
  Network a(ArchSpec{ModelKind::kAdversary, "toy-a", {1, 2, 2}, {flatten, dense3, tanh, dense8}}, 13);
  for (Network* n : {&g, &d, &a}) {
    n->to(torch::kFloat64);
    torch::NoGradGuard guard;
    auto gen = at::detail::createCPUGenerator(n->init_seed());
    for (auto& p : n->parameters()) p.copy_(torch::randn(p.sizes(), gen, torch::kFloat64) * 0.8);
  }
  auto gen = at::detail::createCPUGenerator(505);
  const auto z = torch::randn({5, 2}, gen, torch::kFloat64);
  const auto real = torch::rand({5, 1, 2, 2}, gen, torch::kFloat64);
  std::vector<std::vector<double>> zv(5), rv(5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 2; ++j) zv[i].push_back(z[i][j].item<double>());
    const auto flat = real[i].reshape({-1});
    for (int j = 0; j < 4; ++j) rv[i].push_back(flat[j].item<double>());
  }
  const double lambda = 0.7;

  double worst = 0;
  std::ostringstream notes;
  const char* names[] = {"gan", "megan", "mimgan"};
  for (int kind = 0; kind < 3; ++kind) {
    for (auto& p : g.parameters()) p.mutable_grad() = torch::Tensor();
    const auto logits = d.forward_logits(g.forward(z));
    torch::Tensor loss;
    if (kind == 0) loss = gan_generator_loss(logits);
    if (kind == 1) loss = megan_generator_loss(logits);
    if (kind == 2) loss = mimgan_generator_loss(logits, a.forward(g.forward(z)), real, lambda);
    loss.backward();

    ToyOracle oracle{read_dense(g, "seq.0"), read_dense(g, "seq.2"), read_dense(d, "seq.1"),
                     read_dense(d, "seq.3"), read_dense(a, "seq.1"), read_dense(a, "seq.3")};
    const double value_gap = std::abs(oracle.loss(kind, zv, rv, lambda) - loss.item<double>());
    double kind_worst = value_gap > 1e-10 ? 1.0 : 0.0;
    const double h = 1e-5;
    for (int layer = 0; layer < 2; ++layer) {
      DenseD& dense = layer == 0 ? oracle.g1 : oracle.g2;
      const std::string prefix = layer == 0 ? "seq.0" : "seq.2";
      for (const auto& [name, t] : g.named_state()) {
        if (name.rfind(prefix + ".", 0) != 0) continue;
        std::vector<double>& vals = name == prefix + ".weight" ? dense.w : dense.b;
        const auto grad = t.grad().contiguous().view({-1});
        for (std::size_t i = 0; i < vals.size(); ++i) {
          const double orig = vals[i];
          vals[i] = orig + h;
          const double up = oracle.loss(kind, zv, rv, lambda);
          vals[i] = orig - h;
          const double down = oracle.loss(kind, zv, rv, lambda);
          vals[i] = orig;
          const double numeric = (up - down) / (2 * h);
          const double analytic = grad[static_cast<std::int64_t>(i)].item<double>();
          const double rel = std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-3);
          kind_worst = std::max(kind_worst, rel);
        }
      }
    }
    notes << names[kind] << " " << fmt("%.1e", kind_worst) << (kind < 2 ? ", " : "");
    worst = std::max(worst, kind_worst);
  }
  const double t = cpu_seconds() - t0;
  return {worst <= 1e-4 && t < 60.0,
          "max relative error " + notes.str() + ", " + fmt("%.2f", t) + " s"};
}

// 6. Memorization extremes.
Verdict criterion6() {
  auto gen = at::detail::createCPUGenerator(606);
  const auto train = torch::rand({50, 16}, gen, torch::kFloat64);
  const auto test = torch::rand({40, 16}, gen, torch::kFloat64);
  const double equal = memorization_ratio(train, test, test);
  const double inside = memorization_ratio(train, test, train.narrow(0, 5, 20));
  return {equal == 1.0 && inside == kPerfectMemorization,
          "generated==test m=" + fmt("%.6f", equal) + ", generated in train m=" + fmt("%g", inside)};
}

// Desk runs.

fs::path config_dir() { return fs::path(GANPRIV_CONFIG_DIR); }

fs::path output_root() {
  const char* env = std::getenv("GANPRIV_ACCEPTANCE_OUT");
  return env && *env ? fs::path(env) : fs::current_path() / "acceptance_runs";
}

bool reuse_runs() {
  const char* env = std::getenv("GANPRIV_ACCEPTANCE_REUSE");
  return env && std::string(env) == "1";
}

struct DeskRun {
  MetricsReport report;
  fs::path dir;
  double cpu = 0;
};

DeskRun desk_run(const std::string& name, const fs::path& subdir = {}) {
  const fs::path out = output_root() / subdir;
  const fs::path dir = out / name;
  const fs::path cpu_file = dir / "acceptance_cpu_seconds.txt";
  DeskRun r;
  r.dir = dir;
  if (reuse_runs() && fs::exists(dir / "report.json") && fs::exists(cpu_file)) {
    std::ifstream(cpu_file) >> r.cpu;
    std::ifstream in(dir / "report.json");
    r.report = MetricsReport::from_json(nlohmann::json::parse(in));
    return r;
  }
  const auto config = load_experiment_config(config_dir() / (name + ".json"));
  RunOptions opt;
  opt.output_dir = out;
  opt.force = true;
  std::fprintf(stderr, "  running %s\n", name.c_str());
  const double t0 = cpu_seconds();
  auto result = run_experiment(config, opt);
  r.cpu = cpu_seconds() - t0;
  std::ofstream(cpu_file) << r.cpu << "\n";
  r.report = std::move(result.report);
  return r;
}

double value(const std::optional<double>& v) { return v ? *v : std::nan(""); }

// 7. Discriminator capacity ordering.
Verdict criterion7() {
  const auto a = desk_run("table1-a"), b = desk_run("table1-b"), c = desk_run("table1-c");
  const double ma = value(a.report.mia_whitebox), mb = value(b.report.mia_whitebox),
               mc = value(c.report.mia_whitebox);
  const double ta = value(a.report.tvd), tb = value(b.report.tvd), tc = value(c.report.tvd);
  const double ra = value(a.report.rho_tr_te), rb = value(b.report.rho_tr_te),
               rc = value(c.report.rho_tr_te);
  const double cpu = a.cpu + b.cpu + c.cpu;
  const double prior = a.report.mia_prior;
  const bool pass = ma > mb && mb > mc && ta > tb && tb > tc && ra < rb && rb < rc &&
                    ma >= 2 * prior && cpu <= 45 * 60;
  return {pass, "MIA a/b/c " + fmt("%.4f", ma) + "/" + fmt("%.4f", mb) + "/" + fmt("%.4f", mc) +
                    ", TVD " + fmt("%.3f", ta) + "/" + fmt("%.3f", tb) + "/" + fmt("%.3f", tc) +
                    ", rho " + fmt("%.3f", ra) + "/" + fmt("%.3f", rb) + "/" + fmt("%.3f", rc) +
                    ", prior " + fmt("%.2f", prior) + ", " + fmt("%.0f", cpu / 60) + " min CPU"};
}

// 8. MEGAN near the prior; MIMGAN monotone in lambda.
Verdict criterion8() {
  const auto megan = desk_run("table2-mnist-megan");
  const auto l10 = desk_run("table2-mnist-mimgan-l10");
  const auto l100 = desk_run("table2-mnist-mimgan-l100");
  const double prior = megan.report.mia_prior;
  const double mm = value(megan.report.mia_whitebox), rm = value(megan.report.rho_tr_te);
  const double m10 = value(l10.report.mia_whitebox), m100 = value(l100.report.mia_whitebox);
  const double r10 = value(l10.report.rho_tr_te), r100 = value(l100.report.rho_tr_te);
  const bool megan_ok = std::abs(mm - prior) <= 0.05 && rm >= 0.95;
  int inversions = 0;
  bool within = true;
  if (r100 < r10) {
    ++inversions;
    within = within && r10 - r100 <= 0.01;
  }
  if (m100 > m10) {
    ++inversions;
    within = within && m100 - m10 <= 0.01;
  }
  const bool mim_ok = inversions <= 1 && within;
  const double cpu = megan.cpu + l10.cpu + l100.cpu;
  return {megan_ok && mim_ok && cpu <= 90 * 60,
          "MEGAN MIA " + fmt("%.4f", mm) + " rho " + fmt("%.3f", rm) + "; MIMGAN lambda 10/100 MIA " +
              fmt("%.4f", m10) + "/" + fmt("%.4f", m100) + " rho " + fmt("%.3f", r10) + "/" +
              fmt("%.3f", r100) + "; " + fmt("%.0f", cpu / 60) + " min CPU"};
}

Classifier load_classifier(const fs::path& path, const std::string& source) {
  Classifier c;
  c.network = load_checkpoint(path);
  c.num_classes = infer_output_shape(c.network.spec()).at(0);
  c.training_source = source;
  return c;
}

// Generator of per-pixel noise: sigmoid of a random linear map of the latent.
Network noise_generator(std::int64_t latent_dim) {
  ArchSpec spec;
  spec.kind = ModelKind::kGenerator;
  spec.input_shape = {latent_dim};
  spec.layers = {LayerSpec{.type = LayerType::kDense, .units = 784},
                 LayerSpec{.type = LayerType::kSigmoid},
                 LayerSpec{.type = LayerType::kReshape, .target = {28, 28, 1}}};
  Network g(spec, 0);
  torch::NoGradGuard guard;
  auto gen = at::detail::createCPUGenerator(909);
  for (auto& [name, t] : g.named_state()) {
    if (name.find("weight") != std::string::npos) {
      t.copy_(torch::randn(t.sizes(), gen) * (2.0 / std::sqrt(static_cast<double>(latent_dim))));
    } else {
      t.zero_();
    }
  }
  return g;
}

// 9. GAN-test of GAN, MEGAN and a noise generator.
Verdict criterion9() {
  const auto gan = desk_run("table2-mnist-gan");
  const auto megan = desk_run("table2-mnist-megan");
  const double tg = value(gan.report.gan_test), tm = value(megan.report.gan_test);
  const auto ckpt = gan.dir / "checkpoints";
  const auto oracle = load_classifier(ckpt / "oracle_classifier.gpck", "real");
  const auto eval = load_classifier(ckpt / "eval_classifier.gpck", "real");
  const double tn = gan_test(eval, oracle, noise_generator(100), 10000, 99);
  const bool pass = tg >= tm - 0.05 && tg >= tn + 0.20 && tm >= tn + 0.20;
  return {pass, "GAN-test GAN " + fmt("%.4f", tg) + ", MEGAN " + fmt("%.4f", tm) + ", noise " +
                    fmt("%.4f", tn)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 10. Same config, two runs, identical report bytes.
Verdict criterion10() {
  const auto config = load_experiment_config(config_dir() / "smoke.json");
  std::vector<std::string> reports;
  for (const char* sub : {"determinism_1", "determinism_2"}) {
    RunOptions opt;
    opt.output_dir = output_root() / sub;
    opt.force = true;
    reports.push_back(slurp(run_experiment(config, opt).run_dir / "report.json"));
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  return {same, "smoke config twice: report.json " + std::string(same ? "identical" : "differs") +
                    " (" + std::to_string(reports[0].size()) + " bytes)"};
}

}  // namespace
}  // namespace ganpriv

int main(int argc, char** argv) {
  torch::set_num_threads(1);
  const std::map<int, std::function<ganpriv::Verdict()>> criteria = {
      {1, ganpriv::criterion1}, {2, ganpriv::criterion2}, {3, ganpriv::criterion3},
      {4, ganpriv::criterion4}, {5, ganpriv::criterion5}, {6, ganpriv::criterion6},
      {7, ganpriv::criterion7}, {8, ganpriv::criterion8}, {9, ganpriv::criterion9},
      {10, ganpriv::criterion10}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, v] : criteria) selected.insert(k);
  }
  int failed = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    ganpriv::Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s\n", k, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
