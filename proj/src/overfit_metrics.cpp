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

#include "ganpriv/overfit_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ganpriv/error.hpp"
#include "ganpriv/trainers.hpp"

namespace ganpriv {

std::size_t ScoreSet::count(ScoreTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

std::vector<double> ScoreSet::of(ScoreTag tag) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (tags[i] == tag) out.push_back(scores[i]);
  }
  return out;
}

double ScoreSet::mean(ScoreTag tag) const {
  const auto v = of(tag);
  if (v.empty()) throw InvalidArgument("score set has no samples of the requested class");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void ScoreSet::set_empirical_priors() {
  const double n1 = static_cast<double>(count(ScoreTag::kTrain));
  const double n0 = static_cast<double>(count(ScoreTag::kHoldout));
  if (n0 + n1 == 0.0) {
    pi0 = pi1 = 0.0;
    return;
  }
  pi1 = n1 / (n0 + n1);
  pi0 = 1.0 - pi1;
}

void ScoreSet::validate() const {
  if (scores.size() != tags.size()) throw InvalidArgument("score/tag length mismatch");
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("score outside [0,1]");
  }
}

ScoreSet make_score_set(std::vector<double> scores, std::vector<ScoreTag> tags) {
  ScoreSet s;
  s.scores = std::move(scores);
  s.tags = std::move(tags);
  s.validate();
  s.set_empirical_priors();
  return s;
}

ScoreSet score_set(const Network& discriminator, const AttackPool& pool,
                   const std::optional<torch::Tensor>& fake_samples) {
  const auto& in = discriminator.spec().input_shape;
  auto check = [&](const torch::Tensor& x) {
    if (x.dim() != 4 || std::vector<std::int64_t>(x.sizes().begin() + 1, x.sizes().end()) != in) {
      throw InvalidArgument("sample shape does not match the discriminator input");
    }
  };
  check(pool.samples);
  if (fake_samples) check(*fake_samples);
  std::vector<double> scores;
  std::vector<ScoreTag> tags;
  auto add = [&](const torch::Tensor& x) {
    const auto s = discriminator.predict(x).to(torch::kFloat64).reshape({-1}).contiguous();
    scores.insert(scores.end(), s.data_ptr<double>(), s.data_ptr<double>() + s.numel());
  };
  add(pool.samples);
  for (auto m : pool.membership) tags.push_back(m ? ScoreTag::kTrain : ScoreTag::kHoldout);
  if (fake_samples) {
    add(*fake_samples);
    tags.resize(scores.size(), ScoreTag::kFake);
  }
  return make_score_set(std::move(scores), std::move(tags));
}

double generalization_gap(const ScoreSet& scores, GapPhi phi) {
  auto phi_mean = [&](ScoreTag tag) {
    const auto v = scores.of(tag);
    if (v.empty()) throw InvalidArgument("generalization_gap needs both train and holdout scores");
    double sum = 0.0;
    for (double s : v) {
      sum += phi == GapPhi::kLog ? std::log(std::clamp(s, kScoreEpsilon, 1.0 - kScoreEpsilon)) : s;
    }
    return sum / static_cast<double>(v.size());
  };
  return phi_mean(ScoreTag::kTrain) - phi_mean(ScoreTag::kHoldout);
}

namespace {

std::vector<double> histogram(const std::vector<double>& v, int bins) {
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  for (double s : v) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("score outside [0,1]");
    const auto b = std::min(static_cast<int>(s * bins), bins - 1);
    h[static_cast<std::size_t>(b)] += 1.0;
  }
  for (auto& x : h) x /= static_cast<double>(v.size());
  return h;
}

}  // namespace

DensityPair estimate_densities(const std::vector<double>& a, const std::vector<double>& b,
                               int bins) {
  if (bins < 2) throw InvalidArgument("need at least 2 bins");
  if (a.empty() || b.empty()) throw InvalidArgument("estimate_densities: empty class");
  DensityPair pair;
  pair.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    pair.bin_edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / bins;
  }
  pair.p0 = histogram(a, bins);
  pair.p1 = histogram(b, bins);
  return pair;
}

DensityPair estimate_densities(const ScoreSet& scores, ScoreTag class_a, ScoreTag class_b,
                               int bins) {
  return estimate_densities(scores.of(class_a), scores.of(class_b), bins);
}

double bhattacharyya_hist(const DensityPair& pair) {
  if (pair.p0.size() != pair.p1.size() || pair.p0.size() < 2) {
    throw InvalidArgument("malformed density pair");
  }
  double rho = 0.0;
  for (std::size_t i = 0; i < pair.p0.size(); ++i) rho += std::sqrt(pair.p0[i] * pair.p1[i]);
  return std::clamp(rho, 0.0, 1.0);
}

double bhattacharyya_gaussian(double mu0, double var0, double mu1, double var1) {
  if (!(var0 > 0.0) || !(var1 > 0.0)) throw InvalidArgument("variances must be positive");
  const double d = mu0 - mu1;
  return std::exp(-0.25 * std::log(0.25 * (var1 / var0 + var0 / var1 + 2.0)) -
                  0.25 * d * d / (var0 + var1));
}

ErrorBounds mia_error_bounds(double rho, double pi0, double pi1) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho outside [0,1]");
  if (!(pi0 >= 0.0 && pi1 >= 0.0) || std::abs(pi0 + pi1 - 1.0) > 1e-9) {
    throw InvalidArgument("priors must be nonnegative and sum to 1");
  }
  const double q = 4.0 * pi0 * pi1 * rho * rho;
  return {0.5 - 0.5 * std::sqrt(std::max(0.0, 1.0 - q)), std::sqrt(pi0 * pi1) * rho};
}

double fano_lower_bound(const ScoreSet& scores, LogBase base) {
  if (scores.scores.empty()) throw InvalidArgument("fano_lower_bound: empty score set");
  double h = 0.0;
  for (double s : scores.scores) h += binary_entropy(s);
  h /= static_cast<double>(scores.scores.size());
  if (base == LogBase::kBits) return h / std::log(2.0) - 1.0;
  return (h - 1.0) / std::log(2.0);
}

namespace {

// Mean over rows of `queries` of the Euclidean distance to the closest row
// of `reference`, accumulated in double.
double mean_min_distance(const torch::Tensor& reference, const torch::Tensor& queries) {
  const auto ref = reference.to(torch::kFloat64).contiguous();
  const auto qry = queries.to(torch::kFloat64).contiguous();
  const std::int64_t n = ref.size(0), m = qry.size(0), d = ref.size(1);
  const double* r = ref.data_ptr<double>();
  const double* q = qry.data_ptr<double>();
  double total = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double* qi = q + i * d;
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t j = 0; j < n; ++j) {
      const double* rj = r + j * d;
      double acc = 0.0;
      for (std::int64_t t = 0; t < d && acc < best; ++t) {
        const double diff = qi[t] - rj[t];
        acc += diff * diff;
      }
      best = std::min(best, acc);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(m);
}

torch::Tensor flat(const torch::Tensor& x, const char* name) {
  if (!x.defined() || x.dim() < 1 || x.size(0) == 0) {
    throw InvalidArgument(std::string("memorization_ratio: empty ") + name + " set");
  }
  return x.reshape({x.size(0), -1});
}

}  // namespace

double memorization_ratio(const torch::Tensor& train, const torch::Tensor& test,
                          const torch::Tensor& generated) {
  const auto tr = flat(train, "train");
  const auto te = flat(test, "test");
  const auto ge = flat(generated, "generated");
  if (tr.size(1) != te.size(1) || tr.size(1) != ge.size(1)) {
    throw InvalidArgument("memorization_ratio: sample dimension mismatch");
  }
  const double denom = mean_min_distance(tr, ge);
  if (denom == 0.0) return kPerfectMemorization;
  return mean_min_distance(tr, te) / denom;
}

void write_density_csv(const DensityPair& pair, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "bin_lo,bin_hi,p0,p1\n";
  for (std::size_t i = 0; i < pair.bins(); ++i) {
    out << pair.bin_edges[i] << ',' << pair.bin_edges[i + 1] << ',' << pair.p0[i] << ','
        << pair.p1[i] << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ganpriv
