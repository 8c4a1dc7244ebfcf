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


#ifndef GANPRIV_PLOT_HPP_
#define GANPRIV_PLOT_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace ganpriv {

// Minimal line/scatter chart rendered to PNG.
class Chart {
 public:
  using Color = std::array<int, 3>;  // RGB
  enum class Style { kLine, kPoints, kLinePoints };

  Chart(std::string title, std::string x_label, std::string y_label);

  void add_series(std::string name, std::vector<double> x, std::vector<double> y, Style style);
  void set_y_range(double lo, double hi);
  bool empty() const { return series_.empty(); }
  void save_png(const std::filesystem::path& path, int width = 800, int height = 500) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    Style style;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  bool fixed_y_ = false;
  double y_lo_ = 0.0, y_hi_ = 1.0;
};

}  // namespace ganpriv

#endif  // GANPRIV_PLOT_HPP_
