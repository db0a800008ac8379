// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "bresse/error.hpp"
#include "bresse/linefit.hpp"
#include "bresse/parallel.hpp"

namespace bresse {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr cdouble kI{0.0, 1.0};

VectorXcd times(const Eigen::MatrixXd& a, const VectorXcd& x) { return a * x; }

// Upper Cholesky factor applications for G = L L^T with L = blockdiag(L_K, L_M).
ComplexState apply_lt(const AssembledSystem& sys, const ComplexState& u) {
  return {sys.stiffness_factor().matrixU() * u.q, sys.mass_factor().matrixU() * u.v};
}

ComplexState solve_lt(const AssembledSystem& sys, const ComplexState& w) {
  ComplexState out = ComplexState::zero(sys.block_size());
  out.q.real() = sys.stiffness_factor().matrixU().solve(Eigen::VectorXd(w.q.real()));
  out.q.imag() = sys.stiffness_factor().matrixU().solve(Eigen::VectorXd(w.q.imag()));
  out.v.real() = sys.mass_factor().matrixU().solve(Eigen::VectorXd(w.v.real()));
  out.v.imag() = sys.mass_factor().matrixU().solve(Eigen::VectorXd(w.v.imag()));
  return out;
}

double euclid_norm(const ComplexState& u) { return std::hypot(u.q.norm(), u.v.norm()); }

void scale(ComplexState& u, double s) {
  u.q *= s;
  u.v *= s;
}

std::string format_lambda(double lambda) {
  std::ostringstream os;
  os.precision(17);
  os << lambda;
  return os.str();
}

}  // namespace

ResolventOperator::ResolventOperator(const AssembledSystem& sys, double lambda)
    : sys_(sys), lambda_(lambda) {
  const MatrixXcd p = sys.stiffness().cast<cdouble>() + (kI * lambda) * sys.damping().cast<cdouble>() -
                      (lambda * lambda) * sys.mass().cast<cdouble>();
  lu_.compute(p);
  const double rc = lu_.rcond();
  if (!std::isfinite(rc) || rc < 1e-14) {
    throw Error(ErrorCode::SingularAtLambda,
                "i*lambda is an eigenvalue of the discrete generator at lambda=" +
                    format_lambda(lambda));
  }
}

ComplexState ResolventOperator::solve(const ComplexState& f) const {
  check_dimensions(sys_, f);
  const cdouble il = kI * lambda_;
  const VectorXcd rhs = times(sys_.mass(), f.v) + il * times(sys_.mass(), f.q) +
                        times(sys_.damping(), f.q);
  ComplexState u;
  u.q = lu_.solve(rhs);
  u.v = il * u.q - f.q;
  return u;
}

ComplexState ResolventOperator::solve_adjoint(const ComplexState& f) const {
  check_dimensions(sys_, f);
  // conj(P) x = (C - i lambda M) f - M g; P is complex symmetric, so
  // x = conj(P^{-1} conj(rhs)).
  const cdouble il = kI * lambda_;
  const VectorXcd rhs = times(sys_.damping(), f.q) - il * times(sys_.mass(), f.q) -
                        times(sys_.mass(), f.v);
  ComplexState u;
  u.q = lu_.solve(rhs.conjugate()).conjugate();
  u.v = f.q + il * u.q;
  return u;
}

ComplexState resolvent_solve(const AssembledSystem& sys, double lambda, const ComplexState& f) {
  return ResolventOperator(sys, lambda).solve(f);
}

double resolvent_residual(const AssembledSystem& sys, double lambda, const ComplexState& u,
                          const ComplexState& f) {
  const ComplexState au = apply_generator(sys, u);
  const cdouble il = kI * lambda;
  const ComplexState r{il * u.q - au.q - f.q, il * u.v - au.v - f.v};
  const double fn = norm_H(sys, f);
  const double rn = norm_H(sys, r);
  return fn > 0.0 ? rn / fn : rn;
}

NormEstimate resolvent_norm(const AssembledSystem& sys, double lambda, const NormOptions& opts) {
  const ResolventOperator op(sys, lambda);
  const int b = sys.block_size();

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ComplexState w = ComplexState::zero(b);
  for (int i = 0; i < b; ++i) w.q(i) = cdouble(unif(rng), unif(rng));
  for (int i = 0; i < b; ++i) w.v(i) = cdouble(unif(rng), unif(rng));
  scale(w, 1.0 / euclid_norm(w));

  NormEstimate est;
  double previous = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    // B w = L^T R L^{-T} w; since w is a unit vector, ||B w|| <= sigma_max.
    const ComplexState z = solve_lt(sys, w);
    const ComplexState rz = op.solve(z);
    const ComplexState bw = apply_lt(sys, rz);
    const double sigma = euclid_norm(bw);
    est.norm = sigma;
    est.iters = it;
    est.residual = resolvent_residual(sys, lambda, rz, z);
    if (!std::isfinite(sigma) || sigma <= 0.0) break;
    if (it > 1 && std::abs(sigma - previous) <= opts.tol * sigma) return est;
    previous = sigma;

    // w <- B^H B w / ||.||, with B^H = L^T R^# L^{-T}.
    ComplexState next = apply_lt(sys, op.solve_adjoint(solve_lt(sys, bw)));
    const double nn = euclid_norm(next);
    if (!(nn > 0.0) || !std::isfinite(nn)) break;
    scale(next, 1.0 / nn);
    w = std::move(next);
  }
  throw Error(ErrorCode::NoConvergence, "resolvent norm power iteration at lambda=" +
                                            format_lambda(lambda) + " did not settle within " +
                                            std::to_string(opts.max_iters) + " iterations");
}

double lambda_max(const Mesh& m, double c_resolve) { return c_resolve / m.nominal_width(); }

ResolventProfile profile(const AssembledSystem& sys, std::span<const double> lambda_grid,
                         const ProfileOptions& opts) {
  if (lambda_grid.empty()) throw Error(ErrorCode::EmptyGrid, "resolvent grid is empty");
  const double lmax = lambda_max(sys.mesh(), opts.c_resolve);
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double l = lambda_grid[i];
    if (!(l > 0.0) || (i > 0 && !(l > lambda_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidGrid,
                  "resolvent grid must be positive and increasing at lambda=" + format_lambda(l));
    }
    if (l > lmax) {
      throw Error(ErrorCode::GridBeyondResolution,
                  "lambda=" + format_lambda(l) + " exceeds lambda_max=" + format_lambda(lmax) +
                      " for n=" + std::to_string(sys.mesh().n_elements()));
    }
  }

  const std::size_t n = lambda_grid.size();
  ResolventProfile prof;
  prof.lambdas.assign(lambda_grid.begin(), lambda_grid.end());
  prof.norms.resize(n);
  prof.iters.resize(n);
  prof.residuals.resize(n);
  prof.mesh_size = sys.mesh().n_elements();
  prof.lambda_max = lmax;
  prof.params_digest = params_digest(sys.params());

  std::vector<std::string> failures(n);
  std::vector<ErrorCode> codes(n, ErrorCode::NoConvergence);
  parallel_for(n, [&](std::size_t i) {
    NormOptions o = opts.norm;
    o.seed = opts.norm.seed + 104729 * i;
    try {
      const NormEstimate e = resolvent_norm(sys, lambda_grid[i], o);
      prof.norms[i] = e.norm;
      prof.iters[i] = e.iters;
      prof.residuals[i] = e.residual;
    } catch (const Error& err) {
      failures[i] = "lambda=" + format_lambda(lambda_grid[i]) + ": " + err.what();
      codes[i] = err.code();
    }
  });
  std::string joined;
  std::optional<ErrorCode> first;
  for (std::size_t i = 0; i < n; ++i) {
    if (failures[i].empty()) continue;
    if (!first) first = codes[i];
    joined += (joined.empty() ? "" : "; ") + failures[i];
  }
  if (first) throw Error(*first, joined);
  return prof;
}

std::vector<double> log_grid(double log10_lo, double log10_hi, int points) {
  std::vector<double> g;
  if (points <= 0) return g;
  if (points == 1) return {std::pow(10.0, log10_lo)};
  g.reserve(points);
  for (int i = 0; i < points; ++i) {
    g.push_back(std::pow(10.0, log10_lo + (log10_hi - log10_lo) * i / (points - 1)));
  }
  return g;
}

std::pair<double, double> default_growth_window(double lmax) {
  return {std::max(3.0, lmax / 10.0), lmax};
}

GrowthFit fit_growth_exponent(const ResolventProfile& prof, double lo, double hi) {
  std::vector<double> x, y, used;
  for (std::size_t i = 0; i < prof.lambdas.size(); ++i) {
    const double l = prof.lambdas[i];
    if (l >= lo && l <= hi && prof.norms[i] > 0.0) {
      used.push_back(l);
      x.push_back(std::log(l));
      y.push_back(std::log(prof.norms[i]));
    }
  }
  if (x.size() < 5) {
    std::ostringstream os;
    os << "window [" << lo << ", " << hi << "] holds " << x.size() << " points, need 5";
    throw Error(ErrorCode::WindowTooSmall, os.str());
  }
  const LineFit f = fit_line(x, y);
  GrowthFit g;
  g.slope = f.slope;
  g.intercept = f.intercept;
  g.r_squared = f.r_squared;
  g.lo = used.front();
  g.hi = used.back();
  g.points = static_cast<int>(x.size());
  return g;
}

}  // namespace bresse
