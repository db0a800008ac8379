// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bresse/config.hpp"
#include "bresse/model.hpp"
#include "bresse/resolvent.hpp"
#include "bresse/timedomain.hpp"

namespace bresse {

inline const std::vector<std::string> kCommands = {"validate", "simulate",  "spectrum",
                                                   "resolvent", "decay-fit", "dichotomy"};

struct RunReport {
  std::string command;
  nlohmann::ordered_json summary;  ///< command-specific
  std::vector<std::string> files;  ///< written, relative to the output directory
  double wall_seconds = 0.0;

  /// Config echo, digest, version, summary and timings.
  nlohmann::ordered_json to_json(const ExperimentConfig& cfg) const;
};

/// Runs one command and writes its CSV/JSON files plus report.json into
/// cfg.output_dir. Throws Error; UnknownCommand for anything not in kCommands.
RunReport run(std::string_view command, const ExperimentConfig& cfg);

/// Same parameters with k2 set so that k2/rho2 = factor * k1/rho1.
ModelParams with_speed_ratio(const ModelParams& p, double factor);

/// %.17g
std::string format_double(double x);

// Pieces of the pipeline, shared with the acceptance suite.

ResolventProfile run_profile(const ModelParams& p, const ExperimentConfig& cfg);
std::pair<double, double> growth_window(const ResolventProfile& prof, const ExperimentConfig& cfg);

SimConfig sim_config(const Mesh& m, const ExperimentConfig& cfg);
EnergySeries run_simulation(const ModelParams& p, const SineData& data, const ExperimentConfig& cfg);
DecayOptions decay_options(const ExperimentConfig& cfg);

}  // namespace bresse
