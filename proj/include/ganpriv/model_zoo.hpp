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

#ifndef GANPRIV_MODEL_ZOO_HPP_
#define GANPRIV_MODEL_ZOO_HPP_

#include <torch/torch.h>

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace ganpriv {

enum class ModelKind { kGenerator, kDiscriminator, kAdversary, kClassifier };

enum class LayerType {
  kDense,
  kConv,
  kConvTranspose,
  kMaxPool,
  kBatchNorm,
  kLeakyRelu,
  kRelu,
  kSigmoid,
  kTanh,
  kSoftmax,
  kDropout,
  kFlatten,
  kReshape,
};

enum class Padding { kValid, kSame };

// One layer with Keras-style hyperparameters. Only the fields relevant to
// `type` are read. Convolutions use square kernels and strides.
struct LayerSpec {
  LayerType type = LayerType::kDense;
  std::int64_t units = 0;     // dense
  std::int64_t filters = 0;   // conv, conv-transpose
  std::int64_t kernel = 0;    // conv, conv-transpose
  std::int64_t stride = 1;    // conv, conv-transpose; pooling (0 = pool size)
  Padding padding = Padding::kValid;
  std::int64_t pool = 2;      // max-pool window
  double alpha = 0.2;         // leaky relu slope
  double rate = 0.5;          // dropout
  double momentum = 0.99;     // batch norm, Keras convention (decay of the moving average)
  double epsilon = 1e-3;      // batch norm
  std::vector<std::int64_t> target;  // reshape target as (H, W, C)
};

enum class InitScheme {
  kGlorotUniform,  // Keras default: U(+-sqrt(6/(fan_in+fan_out))), zero bias
  kNormal002,      // N(0, 0.02^2) kernels, zero bias
};

// Pixel convention at the model boundary. Datasets are always [0,1]; a
// kSymmetric model works in [-1,1] and Network converts on the way in (for
// image-consuming models) or out (for generators).
enum class PixelRange { kUnit, kSymmetric };

struct ArchSpec {
  ModelKind kind = ModelKind::kDiscriminator;
  std::string preset_name;
  // (C, H, W) for image inputs, (D) for latent/flat inputs.
  std::vector<std::int64_t> input_shape;
  std::vector<LayerSpec> layers;
  InitScheme init = InitScheme::kGlorotUniform;
  PixelRange pixel_range = PixelRange::kUnit;
};

// Image shape as (C, H, W).
using ImageShape = std::vector<std::int64_t>;

// Known presets:
//   appendix1-generator (aliases appendix2-generator, appendix3-generator),
//   appendix1-discriminator-{a,b,c}, appendix2-discriminator,
//   appendix3-adversary, appendix3-discriminator-{mnist,fashion},
//   appendix4-classifier, desk-generator,
//   xray-{generator,adversary,discriminator,discriminator-megan},
//   anime-{generator,adversary,discriminator,discriminator-megan}.
// `image_shape` fixes the input of image-consuming presets and the head size
// of adversaries; `latent_dim` fixes generator inputs; `num_classes` fixes
// classifier heads.
ArchSpec preset(const std::string& name, const ImageShape& image_shape = {1, 28, 28},
                std::int64_t latent_dim = 100, std::int64_t num_classes = 10);
std::vector<std::string> preset_names();

// Walks the layer list and returns the output shape (without batch), or
// throws InvalidArgument naming the first layer whose input does not fit.
std::vector<std::int64_t> infer_output_shape(const ArchSpec& spec);

// Trainable parameter count computed from the architecture alone.
std::int64_t parameter_count(const ArchSpec& spec);

nlohmann::json arch_to_json(const ArchSpec& spec);
ArchSpec arch_from_json(const nlohmann::json& j);

namespace detail {
class SequentialNetImpl;
}

// A built network. Copying a Network shares its parameters (torch module
// semantics); use clone() for an independent copy.
class Network {
 public:
  Network() = default;
  Network(ArchSpec spec, std::uint64_t init_seed);

  const ArchSpec& spec() const { return spec_; }
  std::uint64_t init_seed() const { return init_seed_; }

  // Full forward pass; output in the dataset pixel range for generators and
  // in (0,1) for discriminators.
  torch::Tensor forward(const torch::Tensor& input) const;
  // For models whose last layer is a sigmoid: the pre-sigmoid activation.
  // For others identical to forward().
  torch::Tensor forward_logits(const torch::Tensor& input) const;
  bool has_sigmoid_head() const;

  // Evaluation over a large batch in chunks, no autograd.
  torch::Tensor predict(const torch::Tensor& input, std::int64_t chunk = 500) const;

  void set_training(bool training);
  bool is_training() const;

  std::vector<torch::Tensor> parameters() const;
  // Parameters plus buffers (batch-norm running statistics), named.
  std::vector<std::pair<std::string, torch::Tensor>> named_state() const;
  std::int64_t parameter_count() const;

  void to(torch::Dtype dtype);
  torch::Dtype dtype() const;
  Network clone() const;
  bool defined() const { return static_cast<bool>(impl_); }

  torch::nn::Module& module();

 private:
  ArchSpec spec_;
  std::uint64_t init_seed_ = 0;
  std::shared_ptr<detail::SequentialNetImpl> impl_;
};

Network build_network(const ArchSpec& spec, std::uint64_t init_seed);

// Standard normal latent batch [batch, dim], reproducible from seed.
torch::Tensor sample_latent(std::int64_t batch, std::int64_t dim, std::uint64_t seed);

// Diagonal Gaussian emitted by the MIMGAN adversary: the raw head of width
// 2d is split into means and log-variances; log-variances are clamped.
struct AdversaryOutput {
  torch::Tensor mu;       // [B, d]
  torch::Tensor log_var;  // [B, d]
};
inline constexpr double kLogVarClamp = 10.0;
AdversaryOutput split_adversary_output(const torch::Tensor& raw,
                                       double log_var_clamp = kLogVarClamp);

// Checkpoint file: "GPCK" | u32 version | u32 spec-json length | spec json |
// u64 init seed | u32 tensor count | per tensor: u32 name length, name,
// u8 dtype (0 float32, 1 float64), u32 ndim, i64 dims..., raw little-endian
// data.
void save_checkpoint(const Network& net, const std::filesystem::path& path);
Network load_checkpoint(const std::filesystem::path& path);

}  // namespace ganpriv

#endif  // GANPRIV_MODEL_ZOO_HPP_
