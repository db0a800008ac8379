// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bresse/discretization.hpp"

namespace bresse {

struct EigenOptions {
  int per_shift = 4;         ///< eigenvalues kept per shift, nearest first
  int guard_vectors = 6;     ///< extra subspace columns beyond per_shift
  int max_iters = 500;
  double tol = 1e-10;        ///< pencil backward error for convergence
  double merge_tol = 1e-8;   ///< duplicates: |s - s'| <= merge_tol (1 + |s|)
  bool add_conjugates = true;
  std::uint64_t seed = 1;
};

/// Eigenvalues s of the quadratic pencil P(s) = s^2 M + s C + K, i.e. of the
/// discrete generator A_h, with their eigenvectors (displacement part) and
/// backward errors. Sorted by (Re s, Im s).
struct SpectrumReport {
  std::vector<cdouble> eigenvalues;
  std::vector<Eigen::VectorXcd> eigenvectors;
  std::vector<double> residuals;
  double spectral_abscissa = 0.0;
  double min_abs_real = 0.0;
  cdouble closest_to_axis{};
  int mesh_size = 0;

  std::size_t size() const { return eigenvalues.size(); }
};

/// ||P(s) x|| / ((||K|| + |s| ||C|| + |s|^2 ||M||) ||x||) with 1-norms.
double pencil_residual(const AssembledSystem& sys, cdouble s, const Eigen::VectorXcd& x);

/// For every shift sigma, the `per_shift` eigenvalues of A_h nearest sigma,
/// by shift-invert subspace iteration on the companion form. Each shift
/// costs one LU factorization of P(sigma). Throws ShiftSingular when P is
/// singular at sigma and at three perturbed retries, NoConvergence otherwise.
SpectrumReport quadratic_eigs(const AssembledSystem& sys, std::span<const cdouble> shifts,
                              const EigenOptions& opts = {});

/// quadratic_eigs with shifts i mu for mu in `mu_grid` (nonempty, sorted).
SpectrumReport axis_scan(const AssembledSystem& sys, std::span<const double> mu_grid,
                         const EigenOptions& opts = {});

}  // namespace bresse
