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

#include "ganpriv/plot.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ganpriv/error.hpp"

namespace ganpriv {

namespace {

const Chart::Color kPalette[] = {{31, 119, 180}, {214, 39, 40},  {44, 160, 44},  {255, 127, 14},
                                 {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127}};

cv::Scalar bgr(const Chart::Color& c) { return cv::Scalar(c[2], c[1], c[0]); }

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e4 || std::abs(v) < 1e-2)) {
    std::snprintf(buf, sizeof(buf), "%.1e", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g", v);
  }
  return buf;
}

void text(cv::Mat& img, const std::string& s, cv::Point at, double scale = 0.45) {
  cv::putText(img, s, at, cv::FONT_HERSHEY_SIMPLEX, scale, cv::Scalar(20, 20, 20), 1, cv::LINE_AA);
}

}  // namespace

Chart::Chart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void Chart::add_series(std::string name, std::vector<double> x, std::vector<double> y, Style style) {
  if (x.size() != y.size()) throw InvalidArgument("chart series x/y length mismatch");
  series_.push_back({std::move(name), std::move(x), std::move(y), style});
}

void Chart::set_y_range(double lo, double hi) {
  fixed_y_ = true;
  y_lo_ = lo;
  y_hi_ = hi;
}

void Chart::save_png(const std::filesystem::path& path, int width, int height) const {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) throw InvalidArgument("chart has no finite points");
  if (fixed_y_) {
    y_lo = y_lo_;
    y_hi = y_hi_;
  }
  if (x_hi - x_lo < 1e-12) { x_lo -= 0.5; x_hi += 0.5; }
  if (y_hi - y_lo < 1e-12) { y_lo -= 0.5; y_hi += 0.5; }
  const double pad = fixed_y_ ? 0.0 : 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  cv::Mat img(height, width, CV_8UC3, cv::Scalar(255, 255, 255));
  const int left = 80, right = width - 170, top = 40, bottom = height - 60;
  auto px = [&](double x) {
    return static_cast<int>(std::lround(left + (x - x_lo) / (x_hi - x_lo) * (right - left)));
  };
  auto py = [&](double y) {
    return static_cast<int>(std::lround(bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)));
  };

  for (int i = 0; i <= 5; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
    cv::line(img, {px(xv), top}, {px(xv), bottom}, cv::Scalar(225, 225, 225), 1);
    cv::line(img, {left, py(yv)}, {right, py(yv)}, cv::Scalar(225, 225, 225), 1);
    text(img, tick_label(xv), {px(xv) - 18, bottom + 18}, 0.4);
    text(img, tick_label(yv), {8, py(yv) + 4}, 0.4);
  }
  cv::rectangle(img, {left, top}, {right, bottom}, cv::Scalar(60, 60, 60), 1);
  text(img, title_, {left, 25}, 0.6);
  text(img, x_label_, {(left + right) / 2 - 30, height - 20});
  text(img, y_label_, {8, top - 10});

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const auto& s = series_[k];
    const cv::Scalar color = bgr(kPalette[k % std::size(kPalette)]);
    std::vector<cv::Point> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) pts.emplace_back(px(s.x[i]), py(s.y[i]));
    }
    if (s.style != Style::kPoints && pts.size() > 1) {
      cv::polylines(img, pts, false, color, 2, cv::LINE_AA);
    }
    if (s.style != Style::kLine) {
      for (const auto& p : pts) cv::circle(img, p, 4, color, cv::FILLED, cv::LINE_AA);
    }
    const int ly = top + 15 + static_cast<int>(k) * 20;
    cv::line(img, {right + 10, ly - 4}, {right + 30, ly - 4}, color, 3);
    text(img, s.name, {right + 36, ly});
  }

  std::vector<unsigned char> png;
  if (!cv::imencode(".png", img, png)) throw IoError("PNG encoding failed for " + path.string());
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot write " + path.string());
  const bool ok = std::fwrite(png.data(), 1, png.size(), f) == png.size();
  std::fclose(f);
  if (!ok) throw IoError("failed writing " + path.string());
}

}  // namespace ganpriv
