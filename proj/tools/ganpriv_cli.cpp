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

// Command-line front end: run <config>, plot <run_dir>, compare <run_dir...>.

#include <torch/torch.h>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganpriv/error.hpp"
#include "ganpriv/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitTraining = 2;
constexpr int kExitIo = 3;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ganpriv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ganpriv::TrainingError& e) {
    std::cerr << "training failure: " << e.what() << "\n";
    return kExitTraining;
  } catch (const ganpriv::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const ganpriv::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "training failure: " << e.what() << "\n";
    return kExitTraining;
  }
}

}  // namespace

int main(int argc, char** argv) {
  torch::set_num_threads(1);
  CLI::App app{"Membership-inference auditing and privacy-preserving GAN training"};
  app.require_subcommand(1);

  std::string config_path, output_dir, cache_dir;
  bool force = false, quiet = false;
  auto* run = app.add_subcommand("run", "Train, attack and evaluate one configuration");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--output-dir", output_dir, "Override the config's output_dir");
  run->add_option("--cache-dir", cache_dir, "Dataset cache (default $GANPRIV_CACHE)");
  run->add_flag("-f,--force", force, "Replace an existing run directory");
  run->add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "Regenerate the plots of a run directory");
  plot->add_option("run_dir", plot_dir, "Run directory")->required();

  std::vector<std::string> compare_dirs;
  std::string compare_out = ".";
  auto* compare = app.add_subcommand("compare", "Tabulate several runs");
  compare->add_option("run_dirs", compare_dirs, "Run directories")->required();
  compare->add_option("-o,--out", compare_out, "Directory for comparison.csv and plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) {
    return guarded([&] {
      ganpriv::RunOptions options;
      options.output_dir = output_dir;
      if (!cache_dir.empty()) options.cache_dir = cache_dir;
      options.force = force;
      if (!quiet) options.log = [](const std::string& m) { std::cerr << m << "\n"; };
      const auto result = ganpriv::run_experiment(std::filesystem::path(config_path), options);
      std::cout << result.run_dir.string() << "\n";
    });
  }
  if (*plot) {
    return guarded([&] {
      for (const auto& p : ganpriv::emit_plots(plot_dir)) std::cout << p.string() << "\n";
    });
  }
  return guarded([&] {
    std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
    for (const auto& p : ganpriv::compare_runs(dirs, compare_out)) std::cout << p.string() << "\n";
  });
}
