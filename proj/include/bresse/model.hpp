// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bresse {

/// Physical constants of a curved beam with one Kelvin-Voigt patch on the
/// axial force. The damping coefficient equals d0 on (alpha, beta) and
/// vanishes elsewhere on (0, L).
struct ModelParams {
  double rho1 = 1.0;  ///< mass density times area (kg/m)
  double rho2 = 1.0;  ///< rotational inertia (kg m)
  double k1 = 1.0;    ///< shear stiffness (N)
  double k2 = 1.0;    ///< bending stiffness (N m^2)
  double k3 = 1.0;    ///< axial stiffness (N)
  double l = 1.0;     ///< curvature (1/m)
  double L = 1.0;     ///< beam length (m)
  double alpha = 0.25;
  double beta = 0.75;
  double d0 = 1.0;    ///< viscoelastic coefficient (N s)

  bool operator==(const ModelParams&) const = default;
};

/// Which interval endpoints are admissible for the damping patch. `Open` is
/// the physical requirement 0 < alpha < beta < L; `Closed` additionally admits
/// a patch touching the boundary (used for globally damped reference cases).
enum class IntervalRule { Open, Closed };

/// Returns `p` unchanged when every constant is strictly positive and the
/// damping interval is admissible; throws NonPositiveParameter / BadInterval.
const ModelParams& validate_params(const ModelParams& p, IntervalRule rule = IntervalRule::Open);

/// d(x): d0 strictly inside (alpha, beta), zero elsewhere including at the
/// two jump points.
double damping_at(const ModelParams& p, double x);

enum class SpeedVariant { EqualSpeeds, UnequalSpeeds };

struct SpeedClass {
  SpeedVariant variant = SpeedVariant::EqualSpeeds;
  int predicted_resolvent_exponent = 2;   ///< l in ||(i lambda - A)^-1|| = O(lambda^l)
  double predicted_decay_exponent = 1.0;  ///< gamma in E(t) <= C t^-gamma
};

inline constexpr double kDefaultSpeedRelTol = 1e-12;

/// Compares the shear and bending wave speeds k1/rho1 and k2/rho2.
SpeedClass classify_speeds(const ModelParams& p, double rel_tol = kDefaultSpeedRelTol);

std::string to_string(SpeedVariant v);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a(std::string_view bytes);

/// Stable digest of all ten constants (17 significant digits each).
std::uint64_t params_digest(const ModelParams& p);

}  // namespace bresse
