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

#include "ganpriv/model_zoo.hpp"

#include <ATen/CPUGeneratorImpl.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>

#include "ganpriv/error.hpp"

namespace ganpriv {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

using Shape = std::vector<std::int64_t>;

std::int64_t numel(const Shape& s) {
  return std::accumulate(s.begin(), s.end(), std::int64_t{1}, std::multiplies<>());
}

std::string shape_str(const Shape& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

// TensorFlow 'same' padding split for one spatial axis.
struct PadSplit {
  std::int64_t before = 0, after = 0;
};

PadSplit same_pad(std::int64_t n, std::int64_t k, std::int64_t s) {
  const std::int64_t out = (n + s - 1) / s;
  const std::int64_t total = std::max<std::int64_t>((out - 1) * s + k - n, 0);
  return {total / 2, total - total / 2};
}

// Conv2d with TF-style (possibly asymmetric) 'same' padding.
class SameConv2dImpl : public torch::nn::Module {
 public:
  SameConv2dImpl(std::int64_t in, std::int64_t out, std::int64_t k, std::int64_t s,
                 PadSplit rows, PadSplit cols)
      : rows_(rows), cols_(cols) {
    conv = register_module("conv", torch::nn::Conv2d(
                                       torch::nn::Conv2dOptions(in, out, k).stride(s)));
  }
  torch::Tensor forward(torch::Tensor x) {
    if (rows_.before || rows_.after || cols_.before || cols_.after) {
      x = torch::constant_pad_nd(x, {cols_.before, cols_.after, rows_.before, rows_.after});
    }
    return conv->forward(x);
  }
  torch::nn::Conv2d conv{nullptr};

 private:
  PadSplit rows_, cols_;
};
TORCH_MODULE(SameConv2d);

// Transposed convolution cropped to TF 'same' output size n*s.
class CroppedConvTranspose2dImpl : public torch::nn::Module {
 public:
  CroppedConvTranspose2dImpl(std::int64_t in, std::int64_t out, std::int64_t k,
                             std::int64_t s, std::int64_t crop_before, std::int64_t out_h,
                             std::int64_t out_w)
      : crop_(crop_before), out_h_(out_h), out_w_(out_w) {
    conv = register_module(
        "conv", torch::nn::ConvTranspose2d(torch::nn::ConvTranspose2dOptions(in, out, k).stride(s)));
  }
  torch::Tensor forward(torch::Tensor x) {
    auto y = conv->forward(x);
    if (y.size(2) != out_h_ || y.size(3) != out_w_) {
      y = y.narrow(2, crop_, out_h_).narrow(3, crop_, out_w_);
    }
    return y;
  }
  torch::nn::ConvTranspose2d conv{nullptr};

 private:
  std::int64_t crop_, out_h_, out_w_;
};
TORCH_MODULE(CroppedConvTranspose2d);

// Keras Reshape with an (H, W, C) target; tensors stay channel-first.
class ReshapeImpl : public torch::nn::Module {
 public:
  explicit ReshapeImpl(Shape chw) : chw_(std::move(chw)) {}
  torch::Tensor forward(torch::Tensor x) {
    return x.reshape({x.size(0), chw_[0], chw_[1], chw_[2]});
  }

 private:
  Shape chw_;
};
TORCH_MODULE(Reshape);

class FlattenImpl : public torch::nn::Module {
 public:
  torch::Tensor forward(torch::Tensor x) { return x.flatten(1); }
};
TORCH_MODULE(Flatten);

const std::map<std::string, LayerType>& layer_names() {
  static const std::map<std::string, LayerType> names = {
      {"dense", LayerType::kDense},         {"conv", LayerType::kConv},
      {"conv_transpose", LayerType::kConvTranspose},
      {"max_pool", LayerType::kMaxPool},    {"batch_norm", LayerType::kBatchNorm},
      {"leaky_relu", LayerType::kLeakyRelu}, {"relu", LayerType::kRelu},
      {"sigmoid", LayerType::kSigmoid},     {"tanh", LayerType::kTanh},
      {"softmax", LayerType::kSoftmax},     {"dropout", LayerType::kDropout},
      {"flatten", LayerType::kFlatten},     {"reshape", LayerType::kReshape},
  };
  return names;
}

std::string layer_name(LayerType t) {
  for (const auto& [name, type] : layer_names()) {
    if (type == t) return name;
  }
  return "?";
}

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kGenerator: return "generator";
    case ModelKind::kDiscriminator: return "discriminator";
    case ModelKind::kAdversary: return "adversary";
    case ModelKind::kClassifier: return "classifier";
  }
  return "?";
}

ModelKind kind_from_name(const std::string& s) {
  if (s == "generator") return ModelKind::kGenerator;
  if (s == "discriminator") return ModelKind::kDiscriminator;
  if (s == "adversary") return ModelKind::kAdversary;
  if (s == "classifier") return ModelKind::kClassifier;
  throw InvalidArgument("unknown model kind '" + s + "'");
}

// Output shape of one layer, or throws.
Shape step_shape(const LayerSpec& l, const Shape& in, std::size_t index) {
  auto fail = [&](const std::string& why) -> Shape {
    throw InvalidArgument("shape mismatch at layer " + std::to_string(index) + " (" +
                          layer_name(l.type) + ") with input " + shape_str(in) + ": " + why);
  };
  switch (l.type) {
    case LayerType::kDense:
      if (in.size() != 1) return fail("dense expects a flat input; add flatten");
      if (l.units < 1) return fail("units must be positive");
      return {l.units};
    case LayerType::kConv: {
      if (in.size() != 3) return fail("conv expects (C,H,W)");
      if (l.filters < 1 || l.kernel < 1 || l.stride < 1) return fail("bad conv hyperparameters");
      if (l.padding == Padding::kSame) {
        return {l.filters, (in[1] + l.stride - 1) / l.stride, (in[2] + l.stride - 1) / l.stride};
      }
      if (in[1] < l.kernel || in[2] < l.kernel) return fail("kernel larger than input");
      return {l.filters, (in[1] - l.kernel) / l.stride + 1, (in[2] - l.kernel) / l.stride + 1};
    }
    case LayerType::kConvTranspose: {
      if (in.size() != 3) return fail("conv_transpose expects (C,H,W)");
      if (l.filters < 1 || l.kernel < 1 || l.stride < 1) return fail("bad conv hyperparameters");
      if (l.padding == Padding::kSame) {
        if (l.kernel < l.stride) return fail("'same' transpose needs kernel >= stride");
        return {l.filters, in[1] * l.stride, in[2] * l.stride};
      }
      return {l.filters, (in[1] - 1) * l.stride + l.kernel, (in[2] - 1) * l.stride + l.kernel};
    }
    case LayerType::kMaxPool: {
      if (in.size() != 3) return fail("max_pool expects (C,H,W)");
      const std::int64_t s = l.stride > 0 ? l.stride : l.pool;
      if (in[1] < l.pool || in[2] < l.pool) return fail("pool window larger than input");
      return {in[0], (in[1] - l.pool) / s + 1, (in[2] - l.pool) / s + 1};
    }
    case LayerType::kFlatten:
      return {numel(in)};
    case LayerType::kReshape:
      if (l.target.size() != 3) return fail("reshape target must be (H,W,C)");
      if (numel(l.target) != numel(in)) return fail("reshape changes the element count");
      return {l.target[2], l.target[0], l.target[1]};
    case LayerType::kSoftmax:
      if (in.size() != 1) return fail("softmax expects a flat input");
      return in;
    default:
      return in;
  }
}

std::int64_t layer_params(const LayerSpec& l, const Shape& in) {
  switch (l.type) {
    case LayerType::kDense: return in[0] * l.units + l.units;
    case LayerType::kConv:
    case LayerType::kConvTranspose:
      return in[0] * l.filters * l.kernel * l.kernel + l.filters;
    case LayerType::kBatchNorm: return 2 * in[0];
    default: return 0;
  }
}

LayerSpec conv(std::int64_t filters, std::int64_t kernel, std::int64_t stride, Padding p) {
  LayerSpec l;
  l.type = LayerType::kConv;
  l.filters = filters;
  l.kernel = kernel;
  l.stride = stride;
  l.padding = p;
  return l;
}
LayerSpec conv_t(std::int64_t filters, std::int64_t kernel, std::int64_t stride) {
  LayerSpec l = conv(filters, kernel, stride, Padding::kSame);
  l.type = LayerType::kConvTranspose;
  return l;
}
LayerSpec dense(std::int64_t units) {
  LayerSpec l;
  l.type = LayerType::kDense;
  l.units = units;
  return l;
}
LayerSpec simple(LayerType t) {
  LayerSpec l;
  l.type = t;
  return l;
}
LayerSpec lrelu() { return simple(LayerType::kLeakyRelu); }
LayerSpec reshape(std::int64_t h, std::int64_t w, std::int64_t c) {
  LayerSpec l = simple(LayerType::kReshape);
  l.target = {h, w, c};
  return l;
}
LayerSpec batch_norm(double momentum = 0.99, double epsilon = 1e-3) {
  LayerSpec l = simple(LayerType::kBatchNorm);
  l.momentum = momentum;
  l.epsilon = epsilon;
  return l;
}
LayerSpec max_pool(std::int64_t pool) {
  LayerSpec l = simple(LayerType::kMaxPool);
  l.pool = pool;
  l.stride = 0;
  return l;
}
LayerSpec dropout(double rate) {
  LayerSpec l = simple(LayerType::kDropout);
  l.rate = rate;
  return l;
}

ArchSpec make(ModelKind kind, std::string name, Shape input, std::vector<LayerSpec> layers,
              InitScheme init = InitScheme::kGlorotUniform) {
  ArchSpec s;
  s.kind = kind;
  s.preset_name = std::move(name);
  s.input_shape = std::move(input);
  s.layers = std::move(layers);
  s.init = init;
  return s;
}

// Appendix-style 28x28 generator with configurable widths.
std::vector<LayerSpec> mnist_generator_layers(std::int64_t base, std::int64_t width,
                                              std::int64_t channels) {
  return {dense(7 * 7 * base), lrelu(),          reshape(7, 7, base),
          conv_t(width, 5, 2), lrelu(),          conv_t(width, 5, 2),
          lrelu(),             conv(channels, 5, 1, Padding::kSame),
          simple(LayerType::kSigmoid)};
}

// Strided 5x5 conv stack + sigmoid head.
std::vector<LayerSpec> strided_discriminator(const std::vector<std::int64_t>& widths,
                                             bool batch_norm_after_conv) {
  std::vector<LayerSpec> layers;
  for (auto w : widths) {
    layers.push_back(conv(w, 5, 2, Padding::kSame));
    if (batch_norm_after_conv) layers.push_back(batch_norm());
    layers.push_back(lrelu());
  }
  layers.push_back(simple(LayerType::kFlatten));
  layers.push_back(dense(1));
  layers.push_back(simple(LayerType::kSigmoid));
  return layers;
}

std::vector<LayerSpec> large_image_stack(std::int64_t first, const std::vector<std::int64_t>& strided,
                                         std::int64_t kernel) {
  std::vector<LayerSpec> layers = {conv(first, kernel, 1, Padding::kSame), lrelu()};
  for (auto w : strided) {
    layers.push_back(conv(w, kernel, 2, Padding::kSame));
    layers.push_back(lrelu());
  }
  layers.push_back(simple(LayerType::kFlatten));
  return layers;
}

std::vector<LayerSpec> anime_discriminator(std::int64_t dense_width) {
  std::vector<LayerSpec> layers;
  for (int block = 0; block < 2; ++block) {
    for (int i = 0; i < 2; ++i) {
      layers.push_back(conv(64, 3, 1, Padding::kSame));
      layers.push_back(lrelu());
      layers.push_back(batch_norm());
    }
    layers.push_back(max_pool(3));
    layers.push_back(dropout(block == 0 ? 0.2 : 0.3));
  }
  layers.push_back(simple(LayerType::kFlatten));
  for (int i = 0; i < 2; ++i) {
    layers.push_back(dense(dense_width));
    layers.push_back(lrelu());
  }
  layers.push_back(dense(1));
  layers.push_back(simple(LayerType::kSigmoid));
  return layers;
}

}  // namespace

namespace detail {

class SequentialNetImpl : public torch::nn::Module {
 public:
  SequentialNetImpl() { seq = register_module("seq", torch::nn::Sequential()); }
  torch::nn::Sequential seq{nullptr};
};

}  // namespace detail

ArchSpec preset(const std::string& name, const ImageShape& image_shape, std::int64_t latent_dim,
                std::int64_t num_classes) {
  if (image_shape.size() != 3) throw InvalidArgument("image shape must be (C,H,W)");
  const std::int64_t channels = image_shape[0];
  const std::int64_t d = numel(image_shape);
  const Shape latent = {latent_dim};
  using K = ModelKind;

  if (name == "appendix1-generator" || name == "appendix2-generator" ||
      name == "appendix3-generator") {
    return make(K::kGenerator, name, latent, mnist_generator_layers(512, 128, channels));
  }
  // Narrow variant of the appendix generator for single-core desk runs.
  if (name == "desk-generator") {
    return make(K::kGenerator, name, latent, mnist_generator_layers(64, 32, channels));
  }
  if (name == "appendix1-discriminator-a") {
    return make(K::kDiscriminator, name, image_shape, strided_discriminator({32, 64, 128}, false));
  }
  if (name == "appendix1-discriminator-b" || name == "appendix3-discriminator-fashion") {
    return make(K::kDiscriminator, name, image_shape, strided_discriminator({64, 128}, false));
  }
  if (name == "appendix1-discriminator-c" || name == "appendix3-discriminator-mnist") {
    return make(K::kDiscriminator, name, image_shape, strided_discriminator({64, 64}, false));
  }
  if (name == "appendix2-discriminator") {
    return make(K::kDiscriminator, name, image_shape, strided_discriminator({32, 32}, true));
  }
  if (name == "appendix3-adversary") {
    return make(K::kAdversary, name, image_shape,
                {conv(64, 3, 2, Padding::kSame), lrelu(), conv(64, 3, 2, Padding::kSame), lrelu(),
                 simple(LayerType::kFlatten), dense(2 * d)});
  }
  if (name == "appendix4-classifier") {
    return make(K::kClassifier, name, image_shape,
                {conv(32, 3, 1, Padding::kValid), simple(LayerType::kRelu), max_pool(2),
                 conv(64, 3, 1, Padding::kValid), simple(LayerType::kRelu),
                 conv(64, 3, 1, Padding::kValid), simple(LayerType::kRelu), max_pool(2),
                 simple(LayerType::kFlatten), dense(100), simple(LayerType::kRelu),
                 dense(num_classes), simple(LayerType::kSoftmax)});
  }
  if (name == "xray-generator") {
    std::vector<LayerSpec> layers = {dense(8 * 8 * 128), lrelu(), reshape(8, 8, 128)};
    for (int i = 0; i < 4; ++i) {
      layers.push_back(conv_t(128, 4, 2));
      layers.push_back(lrelu());
    }
    layers.push_back(conv_t(128, 4, 1));
    layers.push_back(lrelu());
    layers.push_back(conv(channels, 5, 1, Padding::kSame));
    layers.push_back(simple(LayerType::kSigmoid));
    return make(K::kGenerator, name, latent, layers, InitScheme::kNormal002);
  }
  if (name == "xray-adversary" || name == "anime-adversary") {
    auto layers = large_image_stack(32, {32, 32, 32, 32}, 5);
    layers.push_back(dense(2 * d));
    return make(K::kAdversary, name, image_shape, layers,
                name == "xray-adversary" ? InitScheme::kNormal002 : InitScheme::kGlorotUniform);
  }
  if (name == "xray-discriminator" || name == "xray-discriminator-megan") {
    auto layers = name == "xray-discriminator" ? large_image_stack(64, {64, 64, 32, 32, 32}, 5)
                                               : large_image_stack(32, {32, 32, 32, 32, 32}, 5);
    layers.push_back(dropout(0.5));
    layers.push_back(dense(1));
    layers.push_back(simple(LayerType::kSigmoid));
    return make(K::kDiscriminator, name, image_shape, layers, InitScheme::kNormal002);
  }
  if (name == "anime-generator") {
    std::vector<LayerSpec> layers = {dense(4 * 4 * 512), lrelu(), reshape(4, 4, 512)};
    for (std::int64_t w : {512, 256, 128, 64}) {
      layers.push_back(conv_t(w, 4, 2));
      layers.push_back(batch_norm(0.9, 1e-4));
      layers.push_back(lrelu());
    }
    layers.push_back(conv(channels, 5, 1, Padding::kSame));
    layers.push_back(simple(LayerType::kTanh));
    auto spec = make(K::kGenerator, name, latent, layers);
    spec.pixel_range = PixelRange::kSymmetric;
    return spec;
  }
  if (name == "anime-discriminator" || name == "anime-discriminator-megan") {
    auto spec = make(K::kDiscriminator, name, image_shape,
                     anime_discriminator(name == "anime-discriminator" ? 64 : 32));
    spec.pixel_range = PixelRange::kSymmetric;
    return spec;
  }
  throw InvalidArgument("unknown architecture preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"appendix1-generator",        "appendix2-generator",
          "appendix3-generator",        "desk-generator",
          "appendix1-discriminator-a",  "appendix1-discriminator-b",
          "appendix1-discriminator-c",  "appendix2-discriminator",
          "appendix3-adversary",        "appendix3-discriminator-mnist",
          "appendix3-discriminator-fashion", "appendix4-classifier",
          "xray-generator",             "xray-adversary",
          "xray-discriminator",         "xray-discriminator-megan",
          "anime-generator",            "anime-adversary",
          "anime-discriminator",        "anime-discriminator-megan"};
}

std::vector<std::int64_t> infer_output_shape(const ArchSpec& spec) {
  if (spec.input_shape.empty()) throw InvalidArgument("architecture has no input shape");
  Shape shape = spec.input_shape;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    shape = step_shape(spec.layers[i], shape, i);
  }
  return shape;
}

std::int64_t parameter_count(const ArchSpec& spec) {
  Shape shape = spec.input_shape;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    total += layer_params(spec.layers[i], shape);
    shape = step_shape(spec.layers[i], shape, i);
  }
  return total;
}

nlohmann::json arch_to_json(const ArchSpec& spec) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : spec.layers) {
    nlohmann::json j = {{"type", layer_name(l.type)}};
    switch (l.type) {
      case LayerType::kDense: j["units"] = l.units; break;
      case LayerType::kConv:
      case LayerType::kConvTranspose:
        j["filters"] = l.filters;
        j["kernel"] = l.kernel;
        j["stride"] = l.stride;
        j["padding"] = l.padding == Padding::kSame ? "same" : "valid";
        break;
      case LayerType::kMaxPool:
        j["pool"] = l.pool;
        j["stride"] = l.stride;
        break;
      case LayerType::kBatchNorm:
        j["momentum"] = l.momentum;
        j["epsilon"] = l.epsilon;
        break;
      case LayerType::kLeakyRelu: j["alpha"] = l.alpha; break;
      case LayerType::kDropout: j["rate"] = l.rate; break;
      case LayerType::kReshape: j["target"] = l.target; break;
      default: break;
    }
    layers.push_back(std::move(j));
  }
  return {{"kind", kind_name(spec.kind)},
          {"preset", spec.preset_name},
          {"input_shape", spec.input_shape},
          {"init", spec.init == InitScheme::kNormal002 ? "normal_0.02" : "glorot_uniform"},
          {"pixel_range", spec.pixel_range == PixelRange::kSymmetric ? "symmetric" : "unit"},
          {"layers", layers}};
}

ArchSpec arch_from_json(const nlohmann::json& j) {
  try {
    ArchSpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.preset_name = j.value("preset", "");
    spec.input_shape = j.at("input_shape").get<Shape>();
    const auto init = j.value("init", "glorot_uniform");
    if (init == "glorot_uniform") spec.init = InitScheme::kGlorotUniform;
    else if (init == "normal_0.02") spec.init = InitScheme::kNormal002;
    else throw InvalidArgument("unknown init scheme '" + init + "'");
    spec.pixel_range = j.value("pixel_range", "unit") == "symmetric" ? PixelRange::kSymmetric
                                                                     : PixelRange::kUnit;
    for (const auto& lj : j.at("layers")) {
      const auto type_name = lj.at("type").get<std::string>();
      const auto it = layer_names().find(type_name);
      if (it == layer_names().end()) throw InvalidArgument("unknown layer type '" + type_name + "'");
      LayerSpec l;
      l.type = it->second;
      l.units = lj.value("units", l.units);
      l.filters = lj.value("filters", l.filters);
      l.kernel = lj.value("kernel", l.kernel);
      l.stride = lj.value("stride", l.type == LayerType::kMaxPool ? std::int64_t{0} : l.stride);
      l.padding = lj.value("padding", "valid") == "same" ? Padding::kSame : Padding::kValid;
      l.pool = lj.value("pool", l.pool);
      l.alpha = lj.value("alpha", l.alpha);
      l.rate = lj.value("rate", l.rate);
      l.momentum = lj.value("momentum", l.momentum);
      l.epsilon = lj.value("epsilon", l.epsilon);
      l.target = lj.value("target", l.target);
      spec.layers.push_back(std::move(l));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed architecture block: ") + e.what());
  }
}

Network::Network(ArchSpec spec, std::uint64_t init_seed)
    : spec_(std::move(spec)), init_seed_(init_seed),
      impl_(std::make_shared<detail::SequentialNetImpl>()) {
  infer_output_shape(spec_);  // validates before any allocation
  auto gen = at::detail::createCPUGenerator(init_seed);
  auto& seq = impl_->seq;
  Shape shape = spec_.input_shape;

  auto init_kernel = [&](torch::Tensor& w, std::int64_t fan_in, std::int64_t fan_out) {
    torch::NoGradGuard guard;
    if (spec_.init == InitScheme::kNormal002) {
      w.copy_(torch::randn(w.sizes(), gen, torch::kFloat32) * 0.02);
    } else {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      w.copy_((torch::rand(w.sizes(), gen, torch::kFloat32) * 2.0 - 1.0) * limit);
    }
  };

  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const LayerSpec& l = spec_.layers[i];
    const Shape out = step_shape(l, shape, i);
    switch (l.type) {
      case LayerType::kDense: {
        torch::nn::Linear lin(shape[0], l.units);
        init_kernel(lin->weight, shape[0], l.units);
        torch::NoGradGuard guard;
        lin->bias.zero_();
        seq->push_back(lin);
        break;
      }
      case LayerType::kConv: {
        const std::int64_t k2 = l.kernel * l.kernel;
        PadSplit rows, cols;
        if (l.padding == Padding::kSame) {
          rows = same_pad(shape[1], l.kernel, l.stride);
          cols = same_pad(shape[2], l.kernel, l.stride);
        }
        SameConv2d c(shape[0], l.filters, l.kernel, l.stride, rows, cols);
        init_kernel(c->conv->weight, shape[0] * k2, l.filters * k2);
        torch::NoGradGuard guard;
        c->conv->bias.zero_();
        seq->push_back(c);
        break;
      }
      case LayerType::kConvTranspose: {
        const std::int64_t k2 = l.kernel * l.kernel;
        const std::int64_t crop =
            l.padding == Padding::kSame ? std::max<std::int64_t>(l.kernel - l.stride, 0) / 2 : 0;
        CroppedConvTranspose2d c(shape[0], l.filters, l.kernel, l.stride, crop, out[1], out[2]);
        init_kernel(c->conv->weight, l.filters * k2, shape[0] * k2);
        torch::NoGradGuard guard;
        c->conv->bias.zero_();
        seq->push_back(c);
        break;
      }
      case LayerType::kMaxPool: {
        const std::int64_t s = l.stride > 0 ? l.stride : l.pool;
        seq->push_back(torch::nn::MaxPool2d(torch::nn::MaxPool2dOptions(l.pool).stride(s)));
        break;
      }
      case LayerType::kBatchNorm:
        if (shape.size() == 3) {
          seq->push_back(torch::nn::BatchNorm2d(
              torch::nn::BatchNorm2dOptions(shape[0]).momentum(1.0 - l.momentum).eps(l.epsilon)));
        } else {
          seq->push_back(torch::nn::BatchNorm1d(
              torch::nn::BatchNorm1dOptions(shape[0]).momentum(1.0 - l.momentum).eps(l.epsilon)));
        }
        break;
      case LayerType::kLeakyRelu:
        seq->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(l.alpha)));
        break;
      case LayerType::kRelu: seq->push_back(torch::nn::ReLU()); break;
      case LayerType::kSigmoid: seq->push_back(torch::nn::Sigmoid()); break;
      case LayerType::kTanh: seq->push_back(torch::nn::Tanh()); break;
      case LayerType::kSoftmax: seq->push_back(torch::nn::Softmax(1)); break;
      case LayerType::kDropout: seq->push_back(torch::nn::Dropout(l.rate)); break;
      case LayerType::kFlatten: seq->push_back(Flatten()); break;
      case LayerType::kReshape: seq->push_back(Reshape(out)); break;
    }
    shape = out;
  }
}

Network build_network(const ArchSpec& spec, std::uint64_t init_seed) {
  return Network(spec, init_seed);
}

bool Network::has_sigmoid_head() const {
  return !spec_.layers.empty() && spec_.layers.back().type == LayerType::kSigmoid;
}

namespace {

torch::Tensor run_layers(torch::nn::Sequential& seq, torch::Tensor x, std::size_t count) {
  std::size_t i = 0;
  for (auto it = seq->begin(); it != seq->end() && i < count; ++it, ++i) {
    x = it->forward(x);
  }
  return x;
}

}  // namespace

torch::Tensor Network::forward_logits(const torch::Tensor& input) const {
  if (!impl_) throw InvalidArgument("forward on an empty Network");
  torch::Tensor x = input;
  const bool image_in = spec_.kind != ModelKind::kGenerator;
  if (image_in && spec_.pixel_range == PixelRange::kSymmetric) x = x * 2.0 - 1.0;
  const std::size_t n = spec_.layers.size() - (has_sigmoid_head() ? 1 : 0);
  return run_layers(impl_->seq, x, n);
}

torch::Tensor Network::forward(const torch::Tensor& input) const {
  torch::Tensor y = forward_logits(input);
  if (has_sigmoid_head()) y = torch::sigmoid(y);
  if (spec_.kind == ModelKind::kGenerator && spec_.pixel_range == PixelRange::kSymmetric) {
    y = (y + 1.0) * 0.5;
  }
  return y;
}

torch::Tensor Network::predict(const torch::Tensor& input, std::int64_t chunk) const {
  torch::NoGradGuard guard;
  const bool was_training = impl_->is_training();
  impl_->eval();
  std::vector<torch::Tensor> parts;
  for (std::int64_t start = 0; start < input.size(0); start += chunk) {
    const std::int64_t len = std::min(chunk, input.size(0) - start);
    parts.push_back(forward(input.narrow(0, start, len).to(dtype())));
  }
  impl_->train(was_training);
  return torch::cat(parts, 0);
}

void Network::set_training(bool training) { impl_->train(training); }
bool Network::is_training() const { return impl_->is_training(); }

std::vector<torch::Tensor> Network::parameters() const { return impl_->parameters(); }

std::vector<std::pair<std::string, torch::Tensor>> Network::named_state() const {
  std::vector<std::pair<std::string, torch::Tensor>> out;
  for (const auto& p : impl_->named_parameters()) out.emplace_back(p.key(), p.value());
  for (const auto& b : impl_->named_buffers()) out.emplace_back(b.key(), b.value());
  return out;
}

std::int64_t Network::parameter_count() const {
  std::int64_t total = 0;
  for (const auto& p : impl_->parameters()) total += p.numel();
  return total;
}

void Network::to(torch::Dtype dtype) { impl_->to(dtype); }

torch::Dtype Network::dtype() const {
  for (const auto& p : impl_->parameters()) return p.scalar_type();
  return torch::kFloat32;
}

torch::nn::Module& Network::module() { return *impl_; }

Network Network::clone() const {
  Network copy(spec_, init_seed_);
  copy.to(dtype());
  torch::NoGradGuard guard;
  auto src = named_state();
  auto dst = copy.named_state();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i].second.copy_(src[i].second);
  copy.set_training(is_training());
  return copy;
}

torch::Tensor sample_latent(std::int64_t batch, std::int64_t dim, std::uint64_t seed) {
  if (batch < 1 || dim < 1) throw InvalidArgument("latent batch and dim must be positive");
  auto gen = at::detail::createCPUGenerator(seed);
  return torch::randn({batch, dim}, gen, torch::kFloat32);
}

AdversaryOutput split_adversary_output(const torch::Tensor& raw, double log_var_clamp) {
  if (raw.dim() != 2 || raw.size(1) % 2 != 0) {
    throw InvalidArgument("adversary head must be [B, 2d]");
  }
  const std::int64_t d = raw.size(1) / 2;
  return {raw.narrow(1, 0, d), raw.narrow(1, d, d).clamp(-log_var_clamp, log_var_clamp)};
}

namespace {

constexpr std::array<char, 4> kCheckpointMagic = {'G', 'P', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated checkpoint");
  return v;
}

}  // namespace

void save_checkpoint(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(kCheckpointMagic.data(), 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  const std::string spec = arch_to_json(net.spec()).dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.size()));
  out.write(spec.data(), static_cast<std::streamsize>(spec.size()));
  put<std::uint64_t>(out, net.init_seed());
  const auto state = net.named_state();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(state.size()));
  for (const auto& [name, tensor] : state) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const auto t = tensor.detach().contiguous();
    std::uint8_t code;
    if (t.scalar_type() == torch::kFloat32) code = 0;
    else if (t.scalar_type() == torch::kFloat64) code = 1;
    else if (t.scalar_type() == torch::kInt64) code = 2;
    else throw IoError("unsupported tensor dtype in checkpoint: " + name);
    put<std::uint8_t>(out, code);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dim()));
    for (auto s : t.sizes()) put<std::int64_t>(out, s);
    out.write(static_cast<const char*>(t.data_ptr()),
              static_cast<std::streamsize>(t.numel() * t.element_size()));
  }
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Network load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kCheckpointMagic) throw IoError("bad checkpoint magic: " + path.string());
  if (take<std::uint32_t>(in) != kCheckpointVersion) throw IoError("unsupported checkpoint version");
  std::string spec_json(take<std::uint32_t>(in), '\0');
  in.read(spec_json.data(), static_cast<std::streamsize>(spec_json.size()));
  const auto seed = take<std::uint64_t>(in);
  Network net(arch_from_json(nlohmann::json::parse(spec_json)), seed);
  auto state = net.named_state();
  const auto count = take<std::uint32_t>(in);
  if (count != state.size()) throw IoError("checkpoint tensor count does not match architecture");
  torch::NoGradGuard guard;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(take<std::uint32_t>(in), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    const auto code = take<std::uint8_t>(in);
    const auto ndim = take<std::uint32_t>(in);
    std::vector<std::int64_t> dims(ndim);
    for (auto& d : dims) d = take<std::int64_t>(in);
    const torch::Dtype dtype = code == 0 ? torch::kFloat32 : code == 1 ? torch::kFloat64 : torch::kInt64;
    auto t = torch::empty(dims, dtype);
    in.read(static_cast<char*>(t.data_ptr()), static_cast<std::streamsize>(t.numel() * t.element_size()));
    if (!in) throw IoError("truncated checkpoint tensor " + name);
    if (state[i].first != name || !state[i].second.sizes().equals(t.sizes())) {
      throw IoError("checkpoint tensor '" + name + "' does not match architecture");
    }
    if (code == 1 && i == 0) net.to(torch::kFloat64), state = net.named_state();
    state[i].second.copy_(t);
  }
  return net;
}

}  // namespace ganpriv
