// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "bresse/error.hpp"
#include "bresse/parallel.hpp"

namespace bresse {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct Eigenpair {
  cdouble value;
  VectorXcd vector;
  double residual;
};

double matrix_one_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

struct PencilNorms {
  double k, c, m;
};

// (A_h - sigma)^{-1} on companion vectors [a; b]:
//   P(sigma) x = -M b - (C + sigma M) a,  y = a + sigma x.
class ShiftInvert {
 public:
  ShiftInvert(const AssembledSystem& sys, cdouble sigma) : sys_(sys), sigma_(sigma) {
    const MatrixXcd p = (sigma * sigma) * sys.mass().cast<cdouble>() +
                        sigma * sys.damping().cast<cdouble>() + sys.stiffness().cast<cdouble>();
    lu_.compute(p);
    const double rc = lu_.rcond();
    singular_ = !std::isfinite(rc) || rc < 1e-14;
  }

  bool singular() const { return singular_; }
  cdouble sigma() const { return sigma_; }

  MatrixXcd apply(const MatrixXcd& z) const {
    const Eigen::Index n = sys_.block_size();
    const auto a = z.topRows(n);
    const auto b = z.bottomRows(n);
    const MatrixXcd rhs = -(sys_.mass() * b) - (sys_.damping() * a) - sigma_ * (sys_.mass() * a);
    MatrixXcd out(2 * n, z.cols());
    out.topRows(n) = lu_.solve(rhs);
    out.bottomRows(n) = a + sigma_ * out.topRows(n);
    return out;
  }

 private:
  const AssembledSystem& sys_;
  cdouble sigma_;
  Eigen::PartialPivLU<MatrixXcd> lu_;
  bool singular_ = false;
};

// Modified Gram-Schmidt, applied twice for stability.
void orthonormalize(MatrixXcd& q) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const cdouble r = q.col(i).dot(q.col(j));
        q.col(j) -= r * q.col(i);
      }
      const double nrm = q.col(j).norm();
      if (nrm > 0.0) q.col(j) /= nrm;
    }
  }
}

double residual_with(const AssembledSystem& sys, const PencilNorms& norms, cdouble s,
                     const VectorXcd& x) {
  const VectorXcd r = (s * s) * (sys.mass() * x) + s * (sys.damping() * x) + sys.stiffness() * x;
  const double a = std::abs(s);
  const double scale = (norms.k + a * norms.c + a * a * norms.m) * x.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

// Two-sided Rayleigh quotient iteration on P(s) = s^2 M + s C + K. P is
// complex symmetric, so x^T P(s) x is stationary at eigenvectors. Used when
// subspace iteration stalls on tightly clustered eigenvalues.
std::optional<Eigenpair> polish(const AssembledSystem& sys, const PencilNorms& norms,
                                const Eigenpair& start, double tol) {
  const MatrixXcd m = sys.mass().cast<cdouble>();
  const MatrixXcd c = sys.damping().cast<cdouble>();
  const MatrixXcd k = sys.stiffness().cast<cdouble>();
  cdouble s = start.value;
  VectorXcd x = start.vector;
  for (int it = 0; it < 30; ++it) {
    const Eigen::PartialPivLU<MatrixXcd> lu((s * s) * m + s * c + k);
    const VectorXcd y = lu.solve((2.0 * s) * (m * x) + c * x);
    const double nrm = y.norm();
    if (!y.allFinite() || !(nrm > 0.0)) break;
    x = y / nrm;
    const VectorXcd px = (s * s) * (m * x) + s * (c * x) + k * x;
    const VectorXcd dpx = (2.0 * s) * (m * x) + c * x;
    const cdouble den = (x.transpose() * dpx)(0);
    if (den == 0.0) break;
    s -= (x.transpose() * px)(0) / den;
    const double res = residual_with(sys, norms, s, x);
    if (res <= tol) return Eigenpair{s, x, res};
  }
  return std::nullopt;
}

std::vector<Eigenpair> eigs_near_shift(const AssembledSystem& sys, cdouble shift,
                                       const EigenOptions& opts, const PencilNorms& norms,
                                       std::uint64_t seed) {
  std::optional<ShiftInvert> op;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double bump = attempt * 1e-7 * (1.0 + std::abs(shift));
    op.emplace(sys, shift + cdouble(bump, bump));
    if (!op->singular()) break;
  }
  if (op->singular()) {
    std::ostringstream os;
    os << "pencil singular at shift " << shift << " and perturbations";
    throw Error(ErrorCode::ShiftSingular, os.str());
  }
  const cdouble sigma = op->sigma();

  const Eigen::Index dim = sys.state_size();
  const Eigen::Index n = sys.block_size();
  const Eigen::Index want = std::min<Eigen::Index>(opts.per_shift, dim);
  const Eigen::Index p = std::min<Eigen::Index>(want + opts.guard_vectors, dim);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  MatrixXcd q(dim, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) q(i, j) = cdouble(unif(rng), unif(rng));
  }
  orthonormalize(q);

  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  int done = 0;
  for (int it = 0; it < opts.max_iters; ++it, ++done) {
    const MatrixXcd y = op->apply(q);
    const MatrixXcd h = q.adjoint() * y;
    Eigen::ComplexEigenSolver<MatrixXcd> ces(h);
    if (ces.info() != Eigen::Success) break;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(ces.eigenvalues()(a)) > std::abs(ces.eigenvalues()(b));
    });
    MatrixXcd w(p, p);
    for (Eigen::Index j = 0; j < p; ++j) w.col(j) = ces.eigenvectors().col(order[j]);

    std::vector<Eigenpair> found;
    worst = 0.0;
    const MatrixXcd ritz = q * w.leftCols(want);
    for (Eigen::Index j = 0; j < want; ++j) {
      const cdouble theta = ces.eigenvalues()(order[j]);
      const cdouble s = sigma + 1.0 / theta;
      VectorXcd x = ritz.col(j).head(n);
      const double nrm = x.norm();
      if (nrm > 0.0) x /= nrm;
      const double res = residual_with(sys, norms, s, x);
      worst = std::max(worst, res);
      found.push_back({s, std::move(x), res});
    }
    if (worst <= opts.tol) return found;

    history.push_back(worst);
    const bool stalled = it >= 30 && worst > 0.9 * history[history.size() - 11];
    if (stalled || it + 1 == opts.max_iters) {
      bool all = true;
      for (Eigenpair& e : found) {
        if (e.residual <= opts.tol) continue;
        const auto p = polish(sys, norms, e, opts.tol);
        if (!p) {
          all = false;
          break;
        }
        e = *p;
      }
      if (all) return found;
      ++done;
      break;
    }

    q = y * w;
    orthonormalize(q);
  }
  std::ostringstream os;
  os << "shift " << shift << ": worst residual " << worst << " after " << done
     << " iterations and refinement";
  throw Error(ErrorCode::NoConvergence, os.str());
}

bool less_re_im(cdouble a, cdouble b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

double pencil_residual(const AssembledSystem& sys, cdouble s, const Eigen::VectorXcd& x) {
  const PencilNorms norms{matrix_one_norm(sys.stiffness()), matrix_one_norm(sys.damping()),
                          matrix_one_norm(sys.mass())};
  return residual_with(sys, norms, s, x);
}

SpectrumReport quadratic_eigs(const AssembledSystem& sys, std::span<const cdouble> shifts,
                              const EigenOptions& opts) {
  const PencilNorms norms{matrix_one_norm(sys.stiffness()), matrix_one_norm(sys.damping()),
                          matrix_one_norm(sys.mass())};
  std::vector<std::vector<Eigenpair>> per_shift(shifts.size());
  parallel_for(shifts.size(), [&](std::size_t i) {
    per_shift[i] = eigs_near_shift(sys, shifts[i], opts, norms, opts.seed + 7919 * i);
  });

  std::vector<Eigenpair> all;
  for (auto& batch : per_shift) {
    for (auto& e : batch) {
      const cdouble s = e.value;
      if (opts.add_conjugates && std::abs(s.imag()) > opts.merge_tol * (1.0 + std::abs(s))) {
        VectorXcd xc = e.vector.conjugate();
        const double rc = residual_with(sys, norms, std::conj(s), xc);
        all.push_back({std::conj(s), std::move(xc), rc});
      }
      all.push_back(std::move(e));
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return less_re_im(a.value, b.value); });

  // Merge near-duplicates found from neighbouring shifts, keeping the most
  // accurate representative. Sorting by real part alone does not make
  // duplicates adjacent, so compare against everything kept so far.
  std::vector<Eigenpair> kept;
  for (auto& e : all) {
    auto dup = std::find_if(kept.begin(), kept.end(), [&](const Eigenpair& k) {
      return std::abs(k.value - e.value) <= opts.merge_tol * (1.0 + std::abs(e.value));
    });
    if (dup == kept.end()) {
      kept.push_back(std::move(e));
    } else if (e.residual < dup->residual) {
      *dup = std::move(e);
    }
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return less_re_im(a.value, b.value); });

  SpectrumReport report;
  report.mesh_size = sys.mesh().n_elements();
  report.spectral_abscissa = -std::numeric_limits<double>::infinity();
  report.min_abs_real = std::numeric_limits<double>::infinity();
  for (auto& e : kept) {
    report.spectral_abscissa = std::max(report.spectral_abscissa, e.value.real());
    if (std::abs(e.value.real()) < report.min_abs_real) {
      report.min_abs_real = std::abs(e.value.real());
      report.closest_to_axis = e.value;
    }
    report.eigenvalues.push_back(e.value);
    report.residuals.push_back(e.residual);
    report.eigenvectors.push_back(std::move(e.vector));
  }
  return report;
}

SpectrumReport axis_scan(const AssembledSystem& sys, std::span<const double> mu_grid,
                         const EigenOptions& opts) {
  if (mu_grid.empty()) throw Error(ErrorCode::EmptyGrid, "axis scan needs at least one frequency");
  if (!std::is_sorted(mu_grid.begin(), mu_grid.end())) {
    throw Error(ErrorCode::InvalidGrid, "axis scan frequencies must be sorted");
  }
  std::vector<cdouble> shifts;
  shifts.reserve(mu_grid.size());
  for (double mu : mu_grid) shifts.emplace_back(0.0, mu);
  return quadratic_eigs(sys, shifts, opts);
}

}  // namespace bresse
