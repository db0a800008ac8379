// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

// bresse <command> --config <file> [--out <dir>] [--seed <u64>]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bresse/config.hpp"
#include "bresse/error.hpp"
#include "bresse/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bresse beam with localized Kelvin-Voigt damping: numerical experiments"};
  app.set_version_flag("--version", std::string(bresse::kToolVersion));

  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "validate | simulate | spectrum | resolvent | decay-fit | dichotomy")
      ->required();
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "RNG seed (overrides seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(bresse::ErrorCode::UsageError);
  }

  try {
    bresse::ExperimentConfig cfg = bresse::load_config(config_path);
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    const bresse::RunReport report = bresse::run(command, cfg);
    if (command == "validate") {
      std::cout << report.to_json(cfg).dump(2) << "\n";
    } else {
      std::cout << report.summary.dump(2) << "\n";
      std::cerr << "wrote " << report.files.size() << " files to " << cfg.output_dir << "\n";
    }
    return 0;
  } catch (const bresse::Error& e) {
    std::cerr << "bresse: " << e.what() << "\n";
    return e.exit_status();
  } catch (const std::exception& e) {
    std::cerr << "bresse: internal error: " << e.what() << "\n";
    return 1;
  }
}
