// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "bresse/discretization.hpp"

namespace bresse {

/// (i lambda - A_h)^{-1} and its G-adjoint for one fixed lambda, backed by a
/// single LU factorization of P = K + i lambda C - lambda^2 M.
class ResolventOperator {
 public:
  /// Throws SingularAtLambda when i lambda is (numerically) an eigenvalue.
  ResolventOperator(const AssembledSystem& sys, double lambda);

  double lambda() const { return lambda_; }

  /// U with (i lambda - A_h) U = F. For F = (f, g):
  ///   P q = M g + (i lambda M + C) f,  v = i lambda q - f.
  ComplexState solve(const ComplexState& f) const;

  /// U with (-i lambda - A_h^#) U = F, where A_h^# = G^{-1} A_h^T G is the
  /// adjoint of A_h in the energy inner product.
  ComplexState solve_adjoint(const ComplexState& f) const;

 private:
  const AssembledSystem& sys_;
  double lambda_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

/// Solves (i lambda - A_h) U = F; lambda = 0 gives -A_h U = F.
ComplexState resolvent_solve(const AssembledSystem& sys, double lambda, const ComplexState& f);

/// ||(i lambda - A_h) U - F||_G / ||F||_G (absolute when F = 0).
double resolvent_residual(const AssembledSystem& sys, double lambda, const ComplexState& u,
                          const ComplexState& f);

struct NormOptions {
  double tol = 1e-6;  ///< relative change between successive estimates
  int max_iters = 200;
  std::uint64_t seed = 1;
};

struct NormEstimate {
  double norm = 0.0;
  int iters = 0;
  double residual = 0.0;  ///< relative G residual of the last resolvent solve
};

/// ||(i lambda - A_h)^{-1}||_G as the largest singular value of
/// L^T R L^{-T} (G = L L^T), by power iteration on B^H B.
NormEstimate resolvent_norm(const AssembledSystem& sys, double lambda, const NormOptions& opts = {});

/// Highest frequency the mesh is trusted to resolve: c_resolve / h.
double lambda_max(const Mesh& m, double c_resolve = 1.0);

struct ResolventProfile {
  std::vector<double> lambdas;
  std::vector<double> norms;
  std::vector<int> iters;
  std::vector<double> residuals;
  int mesh_size = 0;
  double lambda_max = 0.0;
  std::uint64_t params_digest = 0;
};

struct ProfileOptions {
  NormOptions norm;
  double c_resolve = 1.0;
};

/// Resolvent norms over a positive, sorted grid no finer than lambda_max.
/// Per-lambda failures are collected and reported together.
ResolventProfile profile(const AssembledSystem& sys, std::span<const double> lambda_grid,
                         const ProfileOptions& opts = {});

/// n points 10^a .. 10^b, logarithmically spaced.
std::vector<double> log_grid(double log10_lo, double log10_hi, int points);

struct GrowthFit {
  double slope = 0.0;  ///< empirical exponent of ||R(i lambda)|| ~ lambda^slope
  double intercept = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Default fitting window: [max(3, lambda_max / 10), lambda_max].
std::pair<double, double> default_growth_window(double lambda_max);

/// Least-squares line through (log lambda, log norm) for lambda in [lo, hi].
/// Throws WindowTooSmall with fewer than five points.
GrowthFit fit_growth_exponent(const ResolventProfile& prof, double lo, double hi);

}  // namespace bresse
