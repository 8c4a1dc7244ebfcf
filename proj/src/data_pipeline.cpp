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

#include "ganpriv/data_pipeline.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>

#include "ganpriv/error.hpp"
#include "ganpriv/random.hpp"

namespace ganpriv {
namespace {

namespace fs = std::filesystem;

constexpr std::array<char, 4> kCacheMagic = {'G', 'P', 'D', 'S'};
constexpr std::uint32_t kCacheVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> bytes = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes.data()), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw IoError("truncated dataset cache header");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) |
         (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

std::uint32_t get_be32(std::istream& in, const fs::path& path) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw IoError("truncated IDX header in " + path.string());
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

struct IdxImages {
  std::uint32_t count = 0, rows = 0, cols = 0;
  std::vector<std::uint8_t> pixels;
};

IdxImages read_idx_images(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (get_be32(in, path) != 0x00000803) {
    throw IoError("bad IDX image magic in " + path.string());
  }
  IdxImages out;
  out.count = get_be32(in, path);
  out.rows = get_be32(in, path);
  out.cols = get_be32(in, path);
  out.pixels.resize(std::size_t{out.count} * out.rows * out.cols);
  in.read(reinterpret_cast<char*>(out.pixels.data()),
          static_cast<std::streamsize>(out.pixels.size()));
  if (!in) throw IoError("truncated IDX image payload in " + path.string());
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (get_be32(in, path) != 0x00000801) {
    throw IoError("bad IDX label magic in " + path.string());
  }
  std::vector<std::uint8_t> labels(get_be32(in, path));
  in.read(reinterpret_cast<char*>(labels.data()),
          static_cast<std::streamsize>(labels.size()));
  if (!in) throw IoError("truncated IDX label payload in " + path.string());
  return labels;
}

// Pixels arrive as N,H,W,C bytes; the dataset keeps N,C,H,W floats.
torch::Tensor bytes_to_images(const std::vector<std::uint8_t>& bytes,
                              std::int64_t n, std::int64_t h, std::int64_t w,
                              std::int64_t c) {
  auto raw = torch::from_blob(const_cast<std::uint8_t*>(bytes.data()),
                              {n, h, w, c}, torch::kUInt8);
  return raw.permute({0, 3, 1, 2}).to(torch::kFloat32).div(255.0).contiguous();
}

// Builds the builtin cache from IDX files under <cache>/raw/<name>/: the
// 60k train files first, then the 10k test files.
LabeledDataset import_idx_builtin(const std::string& name,
                                  const fs::path& raw_dir) {
  std::vector<std::uint8_t> pixels;
  std::vector<std::int64_t> labels;
  std::uint32_t rows = 0, cols = 0;
  for (const char* part : {"train", "t10k"}) {
    const auto images = read_idx_images(raw_dir / (std::string(part) +
                                                   "-images-idx3-ubyte"));
    const auto part_labels =
        read_idx_labels(raw_dir / (std::string(part) + "-labels-idx1-ubyte"));
    if (part_labels.size() != images.count) {
      throw IoError("IDX image/label count mismatch in " + raw_dir.string());
    }
    if (rows == 0) {
      rows = images.rows;
      cols = images.cols;
    } else if (rows != images.rows || cols != images.cols) {
      throw IoError("IDX parts disagree on image size in " + raw_dir.string());
    }
    pixels.insert(pixels.end(), images.pixels.begin(), images.pixels.end());
    labels.insert(labels.end(), part_labels.begin(), part_labels.end());
  }
  LabeledDataset ds;
  ds.name = name;
  const auto n = static_cast<std::int64_t>(labels.size());
  ds.images = bytes_to_images(pixels, n, rows, cols, 1);
  ds.num_classes = 1 + *std::max_element(labels.begin(), labels.end());
  ds.labels = std::move(labels);
  return ds;
}

LabeledDataset load_builtin(const std::string& name, const fs::path& cache) {
  const fs::path cache_file = cache / (name + ".gpds");
  if (fs::exists(cache_file)) return read_dataset_cache(cache_file, name);
  const fs::path raw_dir = cache / "raw" / name;
  if (!fs::exists(raw_dir / "train-images-idx3-ubyte")) {
    throw IoError("builtin dataset '" + name + "' not found: expected " +
                  cache_file.string() + " or IDX files under " +
                  raw_dir.string() + " (run scripts/fetch_datasets.sh)");
  }
  auto ds = import_idx_builtin(name, raw_dir);
  // Best effort; a read-only cache directory is not an error.
  try {
    write_dataset_cache(ds, cache_file);
  } catch (const IoError&) {
  }
  return ds;
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> sorted_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

cv::Mat decode_image(const fs::path& path, const LoadOptions& options) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) throw IoError("unreadable or corrupt image: " + path.string());
  if (img.depth() == CV_16U) img.convertTo(img, CV_8U, 1.0 / 257.0);
  if (img.depth() != CV_8U) throw IoError("unsupported pixel depth: " + path.string());
  cv::Mat out;
  if (options.grayscale) {
    if (img.channels() == 1) out = img;
    else if (img.channels() == 3) cv::cvtColor(img, out, cv::COLOR_BGR2GRAY);
    else cv::cvtColor(img, out, cv::COLOR_BGRA2GRAY);
  } else {
    if (img.channels() == 1) out = img;
    else if (img.channels() == 3) cv::cvtColor(img, out, cv::COLOR_BGR2RGB);
    else cv::cvtColor(img, out, cv::COLOR_BGRA2RGB);
  }
  if (options.resize) {
    cv::Mat resized;
    cv::resize(out, resized, cv::Size(options.resize->second, options.resize->first),
               0, 0, cv::INTER_AREA);
    out = resized;
  }
  return out;
}

LabeledDataset load_directory(const fs::path& root, const LoadOptions& options) {
  std::vector<fs::path> files;
  std::vector<std::int64_t> labels;
  std::int64_t num_classes = 0;
  auto top = sorted_images(root);
  if (!top.empty()) {
    files = std::move(top);
  } else {
    std::vector<fs::path> classes;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory()) classes.push_back(entry.path());
    }
    std::sort(classes.begin(), classes.end());
    for (const auto& cls : classes) {
      auto members = sorted_images(cls);
      if (members.empty()) continue;
      for (auto& f : members) {
        files.push_back(std::move(f));
        labels.push_back(num_classes);
      }
      ++num_classes;
    }
  }
  if (files.empty()) throw IoError("empty dataset: no images in " + root.string());

  std::vector<cv::Mat> decoded;
  decoded.reserve(files.size());
  for (const auto& f : files) decoded.push_back(decode_image(f, options));
  // Mixed gray/colour folders are promoted to RGB.
  const bool any_color = std::any_of(decoded.begin(), decoded.end(),
                                     [](const cv::Mat& m) { return m.channels() == 3; });
  const int rows = decoded.front().rows, cols = decoded.front().cols;
  const int channels = any_color ? 3 : 1;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(decoded.size() * static_cast<std::size_t>(rows * cols * channels));
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    cv::Mat m = decoded[i];
    if (m.rows != rows || m.cols != cols) {
      throw IoError("image size mismatch (use resize): " + files[i].string());
    }
    if (channels == 3 && m.channels() == 1) cv::cvtColor(m, m, cv::COLOR_GRAY2RGB);
    if (!m.isContinuous()) m = m.clone();
    bytes.insert(bytes.end(), m.datastart, m.dataend);
  }
  LabeledDataset ds;
  ds.name = root.filename().string();
  ds.images = bytes_to_images(bytes, static_cast<std::int64_t>(files.size()), rows,
                              cols, channels);
  if (!labels.empty()) {
    ds.labels = std::move(labels);
    ds.num_classes = num_classes;
  }
  return ds;
}

}  // namespace

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("GANPRIV_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "ganpriv";
  }
  return fs::path(".ganpriv-cache");
}

LabeledDataset load_dataset(const std::string& source, const LoadOptions& options) {
  const fs::path cache = options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;
  if (source == "mnist" || source == "fashion-mnist") {
    LabeledDataset ds = load_builtin(source, cache);
    if (options.resize || (options.grayscale && ds.channels() != 1)) {
      throw InvalidArgument("resize/grayscale options apply to image folders only");
    }
    return ds;
  }
  const fs::path dir(source);
  if (!fs::is_directory(dir)) {
    throw InvalidArgument("unknown dataset source '" + source +
                          "': not a builtin (mnist, fashion-mnist) or a directory");
  }
  return load_directory(dir, options);
}

LabeledDataset select(const LabeledDataset& dataset, std::span<const std::int64_t> indices) {
  for (auto i : indices) {
    if (i < 0 || i >= dataset.size()) throw InvalidArgument("index out of range");
  }
  LabeledDataset out;
  out.name = dataset.name;
  out.num_classes = dataset.num_classes;
  auto idx = torch::tensor(std::vector<std::int64_t>(indices.begin(), indices.end()),
                           torch::kInt64);
  out.images = dataset.images.index_select(0, idx).contiguous();
  if (dataset.labels) {
    std::vector<std::int64_t> labels;
    labels.reserve(indices.size());
    for (auto i : indices) labels.push_back((*dataset.labels)[static_cast<std::size_t>(i)]);
    out.labels = std::move(labels);
  }
  return out;
}

LabeledDataset subsample(const LabeledDataset& dataset, std::int64_t count,
                         std::uint64_t seed) {
  if (count <= 0 || count > dataset.size()) {
    throw InvalidArgument("subsample size must be in [1, dataset size]");
  }
  if (count == dataset.size()) return dataset;
  Rng rng(seed);
  auto perm = random_permutation(dataset.size(), rng);
  perm.resize(static_cast<std::size_t>(count));
  std::sort(perm.begin(), perm.end());
  auto out = select(dataset, perm);
  return out;
}

SplitIndices make_split(const LabeledDataset& dataset, double train_fraction,
                        std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train_fraction must lie in (0, 1)");
  }
  const std::int64_t n = dataset.size();
  if (n == 0) throw InvalidArgument("cannot split an empty dataset");
  Rng rng(seed);
  auto perm = random_permutation(n, rng);
  const auto n_train = static_cast<std::int64_t>(std::llround(train_fraction * static_cast<double>(n)));
  SplitIndices split;
  split.seed = seed;
  split.train_idx.assign(perm.begin(), perm.begin() + n_train);
  split.holdout_idx.assign(perm.begin() + n_train, perm.end());
  std::sort(split.train_idx.begin(), split.train_idx.end());
  std::sort(split.holdout_idx.begin(), split.holdout_idx.end());
  return split;
}

AttackPool build_attack_pool(const LabeledDataset& dataset, const SplitIndices& split) {
  if (split.train_idx.empty()) throw InvalidArgument("degenerate split: no training samples");
  AttackPool pool;
  pool.samples = dataset.images;
  pool.membership.assign(static_cast<std::size_t>(dataset.size()), 0);
  for (auto i : split.train_idx) {
    if (i < 0 || i >= dataset.size()) throw InvalidArgument("split index out of range");
    if (pool.membership[static_cast<std::size_t>(i)]) {
      throw InvalidArgument("duplicate training index in split");
    }
    pool.membership[static_cast<std::size_t>(i)] = 1;
  }
  for (auto i : split.holdout_idx) {
    if (i < 0 || i >= dataset.size()) throw InvalidArgument("split index out of range");
  }
  pool.n_train = static_cast<std::int64_t>(split.train_idx.size());
  return pool;
}

void write_dataset_cache(const LabeledDataset& dataset, const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write dataset cache " + tmp.string());
    out.write(kCacheMagic.data(), 4);
    put_u32(out, kCacheVersion);
    put_u32(out, static_cast<std::uint32_t>(dataset.size()));
    put_u32(out, static_cast<std::uint32_t>(dataset.height()));
    put_u32(out, static_cast<std::uint32_t>(dataset.width()));
    put_u32(out, static_cast<std::uint32_t>(dataset.channels()));
    put_u32(out, dataset.labels ? 1u : 0u);
    put_u32(out, static_cast<std::uint32_t>(dataset.num_classes));
    auto bytes = dataset.images.mul(255.0).round().clamp(0, 255)
                     .to(torch::kUInt8).permute({0, 2, 3, 1}).contiguous();
    out.write(reinterpret_cast<const char*>(bytes.data_ptr<std::uint8_t>()),
              static_cast<std::streamsize>(bytes.numel()));
    if (dataset.labels) {
      std::vector<std::uint8_t> labels(dataset.labels->begin(), dataset.labels->end());
      out.write(reinterpret_cast<const char*>(labels.data()),
                static_cast<std::streamsize>(labels.size()));
    }
    if (!out) throw IoError("failed writing dataset cache " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot finalize dataset cache " + path.string());
}

LabeledDataset read_dataset_cache(const fs::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset cache " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kCacheMagic) throw IoError("bad dataset cache magic: " + path.string());
  if (get_u32(in) != kCacheVersion) throw IoError("unsupported dataset cache version");
  const std::int64_t n = get_u32(in), h = get_u32(in), w = get_u32(in), c = get_u32(in);
  const bool has_labels = get_u32(in) != 0;
  const std::int64_t num_classes = get_u32(in);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(n * h * w * c));
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!in) throw IoError("truncated dataset cache payload: " + path.string());
  LabeledDataset ds;
  ds.name = name;
  ds.images = bytes_to_images(pixels, n, h, w, c);
  if (has_labels) {
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("truncated dataset cache labels: " + path.string());
    ds.labels = std::vector<std::int64_t>(raw.begin(), raw.end());
    ds.num_classes = num_classes;
  }
  return ds;
}

}  // namespace ganpriv
