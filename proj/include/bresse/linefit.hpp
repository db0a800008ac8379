// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace bresse {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  ///< clamped to [0, 1]
};

/// Ordinary least squares y = slope * x + intercept. Requires x.size() ==
/// y.size() >= 2 and at least two distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace bresse
