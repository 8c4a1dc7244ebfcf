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

#ifndef GANPRIV_DATA_PIPELINE_HPP_
#define GANPRIV_DATA_PIPELINE_HPP_

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ganpriv {

// Images are stored as a float32 tensor of shape [N, C, H, W] with every
// pixel in [0, 1]. Labels, when present, lie in [0, num_classes).
struct LabeledDataset {
  torch::Tensor images;
  std::optional<std::vector<std::int64_t>> labels;
  std::int64_t num_classes = 0;
  std::string name;

  std::int64_t size() const { return images.defined() ? images.size(0) : 0; }
  std::int64_t channels() const { return images.size(1); }
  std::int64_t height() const { return images.size(2); }
  std::int64_t width() const { return images.size(3); }
  std::int64_t sample_dim() const { return channels() * height() * width(); }
  bool has_labels() const { return labels.has_value(); }
};

struct SplitIndices {
  std::vector<std::int64_t> train_idx;    // sorted ascending
  std::vector<std::int64_t> holdout_idx;  // sorted ascending
  std::uint64_t seed = 0;
};

// The attacker's view: every sample plus the ground-truth membership bits.
// Attacks must only consult `membership` to score their own predictions.
struct AttackPool {
  torch::Tensor samples;
  std::vector<std::uint8_t> membership;
  std::int64_t n_train = 0;

  std::int64_t size() const { return samples.size(0); }
  double prior() const {
    return static_cast<double>(n_train) / static_cast<double>(size());
  }
};

struct LoadOptions {
  // Resize every image to (height, width) with area interpolation.
  std::optional<std::pair<int, int>> resize;
  bool grayscale = false;
  // Location of builtin dataset caches. Empty means default_cache_dir().
  std::filesystem::path cache_dir;
};

// $GANPRIV_CACHE if set, otherwise $HOME/.cache/ganpriv.
std::filesystem::path default_cache_dir();

// Loads a builtin ("mnist", "fashion-mnist") or a directory of PNG/JPEG
// files. Directory samples are ordered by file name; if the directory holds
// only subdirectories, each subdirectory (sorted by name) is one class.
LabeledDataset load_dataset(const std::string& source,
                            const LoadOptions& options = {});

// Uniform subsample without replacement; the kept samples stay in their
// original relative order.
LabeledDataset subsample(const LabeledDataset& dataset, std::int64_t count,
                         std::uint64_t seed);

LabeledDataset select(const LabeledDataset& dataset,
                      std::span<const std::int64_t> indices);

SplitIndices make_split(const LabeledDataset& dataset, double train_fraction,
                        std::uint64_t seed);

AttackPool build_attack_pool(const LabeledDataset& dataset,
                             const SplitIndices& split);

// Binary cache layout, all integers little-endian:
//   char[4] magic "GPDS" | u32 version (1) | u32 count | u32 height |
//   u32 width | u32 channels | u32 has_labels (0/1) | u32 num_classes |
//   count*height*width*channels bytes of pixels (row-major, N,H,W,C) |
//   count bytes of labels (only if has_labels)
void write_dataset_cache(const LabeledDataset& dataset,
                         const std::filesystem::path& path);
LabeledDataset read_dataset_cache(const std::filesystem::path& path,
                                  const std::string& name);

}  // namespace ganpriv

#endif  // GANPRIV_DATA_PIPELINE_HPP_
