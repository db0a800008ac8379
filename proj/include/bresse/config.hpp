// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bresse/model.hpp"
#include "bresse/resolvent.hpp"
#include "bresse/timedomain.hpp"

namespace bresse {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::vector<double> integer_grid(int lo, int hi) {
  std::vector<double> g;
  for (int i = lo; i <= hi; ++i) g.push_back(i);
  return g;
}

struct SpectrumSettings {
  std::vector<double> mu = integer_grid(1, 50);  ///< shifts i mu
  int per_shift = 4;
  int max_iters = 500;
  double tol = 1e-10;
};

struct ResolventSettings {
  std::vector<double> lambdas = log_grid(0.0, 1.5, 25);
  double tol = 1e-6;
  int max_iters = 200;
  double c_resolve = 1.0;
  std::optional<double> window_lo;  ///< default per default_growth_window
  std::optional<double> window_hi;
};

struct SimulateSettings {
  std::optional<double> dt;             ///< default h / 2
  double t_final = 200.0;
  std::optional<int> sample_stride;     ///< default: about one sample per 0.1 time units
  double fit_lo = 10.0;
  double fit_hi = 100.0;
  double min_time = 10.0;
  double energy_floor = 1e-8;
  SineData initial = default_initial_data();
};

struct DichotomySettings {
  /// The unequal-speed variant uses k2 = factor * rho2 k1 / rho1.
  double unequal_k2_factor = 2.0;
};

struct ExperimentConfig {
  ModelParams params;
  int mesh_n = 64;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  double speed_rel_tol = kDefaultSpeedRelTol;
  SpectrumSettings spectrum;
  ResolventSettings resolvent;
  SimulateSettings simulate;
  DichotomySettings dichotomy;
};

/// Parses and schema-checks a JSON document, applying defaults. Unknown keys
/// are rejected. Throws ParseError (with line/column), SchemaError (with the
/// offending path) or the parameter validation errors.
ExperimentConfig parse_config(std::string_view text);

/// Reads `path` and parses it; FileRead if it cannot be opened.
ExperimentConfig load_config(const std::string& path);

/// Fully expanded configuration, defaults included.
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Hex FNV-1a digest of the compact expanded configuration.
std::string config_digest(const ExperimentConfig& cfg);

}  // namespace bresse
