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


#ifndef GANPRIV_OVERFIT_METRICS_HPP_
#define GANPRIV_OVERFIT_METRICS_HPP_

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ganpriv/data_pipeline.hpp"
#include "ganpriv/model_zoo.hpp"

namespace ganpriv {

// Scores are clamped to [kScoreEpsilon, 1 - kScoreEpsilon] wherever a
// logarithm of a score is taken.
inline constexpr double kScoreEpsilon = 1e-7;
inline constexpr int kDefaultBins = 100;

enum class ScoreTag : std::uint8_t { kTrain = 0, kHoldout = 1, kFake = 2 };

// Discriminator outputs over a set of samples. Membership classes: train is
// omega_1, everything else omega_0. Priors are taken from the train and
// holdout counts only; fake samples carry no membership mass.
struct ScoreSet {
  std::vector<double> scores;
  std::vector<ScoreTag> tags;
  double pi0 = 0.0;
  double pi1 = 0.0;

  std::size_t size() const { return scores.size(); }
  std::size_t count(ScoreTag tag) const;
  std::vector<double> of(ScoreTag tag) const;
  double mean(ScoreTag tag) const;
  // Recomputes pi0/pi1 from tag counts.
  void set_empirical_priors();
  void validate() const;
};

ScoreSet make_score_set(std::vector<double> scores, std::vector<ScoreTag> tags);

struct DensityPair {
  std::vector<double> bin_edges;  // bins + 1 edges over [0, 1]
  std::vector<double> p0;
  std::vector<double> p1;

  std::size_t bins() const { return p0.size(); }
};

// Evaluates the discriminator (eval mode) on every pool sample and, if
// given, on `fake_samples`.
ScoreSet score_set(const Network& discriminator, const AttackPool& pool,
                   const std::optional<torch::Tensor>& fake_samples = std::nullopt);

enum class GapPhi { kIdentity, kLog };
double generalization_gap(const ScoreSet& scores, GapPhi phi = GapPhi::kIdentity);

// Equal-width histograms over [0, 1]; p0 from class_a, p1 from class_b.
// A score of exactly 1 falls into the last bin.
DensityPair estimate_densities(const ScoreSet& scores, ScoreTag class_a, ScoreTag class_b,
                               int bins = kDefaultBins);
DensityPair estimate_densities(const std::vector<double>& a, const std::vector<double>& b,
                               int bins = kDefaultBins);

double bhattacharyya_hist(const DensityPair& pair);
double bhattacharyya_gaussian(double mu0, double var0, double mu1, double var1);

struct ErrorBounds {
  double lower = 0.0;
  double upper = 0.0;
};
ErrorBounds mia_error_bounds(double rho, double pi0, double pi1);

enum class LogBase { kNats, kBits };
double fano_lower_bound(const ScoreSet& scores, LogBase base = LogBase::kBits);

inline constexpr double kPerfectMemorization = std::numeric_limits<double>::infinity();

// Rows are flattened samples. Returns kPerfectMemorization when every
// generated sample coincides with a training sample.
double memorization_ratio(const torch::Tensor& train, const torch::Tensor& test,
                          const torch::Tensor& generated);

// Columns: bin_lo, bin_hi, p0, p1.
void write_density_csv(const DensityPair& pair, const std::filesystem::path& path);

}  // namespace ganpriv

#endif  // GANPRIV_OVERFIT_METRICS_HPP_
