// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "bresse/discretization.hpp"

namespace bresse::testing {

inline ModelParams defaults() { return ModelParams{}; }

inline AssembledSystem system_for(const ModelParams& p, int n) {
  return assemble(p, build_mesh(p, n));
}

inline ComplexState random_state(int block, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexState u = ComplexState::zero(block);
  for (int i = 0; i < block; ++i) u.q(i) = cdouble(g(rng), g(rng));
  for (int i = 0; i < block; ++i) u.v(i) = cdouble(g(rng), g(rng));
  return u;
}

inline RealState random_real_state(int block, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealState u = RealState::zero(block);
  for (int i = 0; i < block; ++i) u.q(i) = g(rng);
  for (int i = 0; i < block; ++i) u.v(i) = g(rng);
  return u;
}

// Exact n = 4 stiffness for all constants 1, alpha = 0.25, beta = 0.75,
// rows and columns ordered phi_1..3, psi_1..3, w_1..3 (rationals from a
// symbolic assembly).
inline const double kFrozenStiffness[9][9] = {
    {49.0 / 6, -95.0 / 24, 0, 0, -0.5, 0, 0, -1, 0},
    {-95.0 / 24, 49.0 / 6, -95.0 / 24, 0.5, 0, -0.5, 1, 0, -1},
    {0, -95.0 / 24, 49.0 / 6, 0, 0.5, 0, 0, 1, 0},
    {0, 0.5, 0, 49.0 / 6, -95.0 / 24, 0, 1.0 / 6, 1.0 / 24, 0},
    {-0.5, 0, 0.5, -95.0 / 24, 49.0 / 6, -95.0 / 24, 1.0 / 24, 1.0 / 6, 1.0 / 24},
    {0, -0.5, 0, 0, -95.0 / 24, 49.0 / 6, 0, 1.0 / 24, 1.0 / 6},
    {0, 1, 0, 1.0 / 6, 1.0 / 24, 0, 49.0 / 6, -95.0 / 24, 0},
    {-1, 0, 1, 1.0 / 24, 1.0 / 6, 1.0 / 24, -95.0 / 24, 49.0 / 6, -95.0 / 24},
    {0, -1, 0, 0, 1.0 / 24, 1.0 / 6, 0, -95.0 / 24, 49.0 / 6},
};

// Pointwise evaluation of the P1 fields of one unit coordinate vector.
struct Fields {
  double phi, psi, w, dphi, dpsi, dw;
};

inline Fields eval_basis(const Mesh& m, const DofMap& dofs, int dof, double x, int element) {
  const int fields_per = dofs.interior_nodes();
  const int field = dof / fields_per;
  const int node = dof % fields_per + 1;
  const double a = m.nodes[element], b = m.nodes[element + 1];
  double val = 0.0, der = 0.0;
  if (node == element) {
    val = (b - x) / (b - a);
    der = -1.0 / (b - a);
  } else if (node == element + 1) {
    val = (x - a) / (b - a);
    der = 1.0 / (b - a);
  }
  Fields f{};
  if (field == 0) {
    f.phi = val;
    f.dphi = der;
  } else if (field == 1) {
    f.psi = val;
    f.dpsi = der;
  } else {
    f.w = val;
    f.dw = der;
  }
  return f;
}

// Independent assembly by two-point Gauss quadrature of the energy
// densities, exact for the quadratic integrands of P1.
struct Reference {
  Eigen::MatrixXd k, m, c;
};

inline Reference quadrature_assembly(const ModelParams& p, const Mesh& mesh) {
  const DofMap dofs(mesh.n_elements());
  const int n = dofs.size();
  Reference r{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  const double g = 1.0 / std::sqrt(3.0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double a = mesh.nodes[e], b = mesh.nodes[e + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double d = (p.alpha <= a && b <= p.beta) ? p.d0 : 0.0;
    for (double xi : {-g, g}) {
      const double x = mid + half * xi;
      for (int i = 0; i < n; ++i) {
        const Fields u = eval_basis(mesh, dofs, i, x, e);
        for (int j = 0; j < n; ++j) {
          const Fields v = eval_basis(mesh, dofs, j, x, e);
          const double shear = (u.dphi + u.psi + p.l * u.w) * (v.dphi + v.psi + p.l * v.w);
          const double bend = u.dpsi * v.dpsi;
          const double axial = (u.dw - p.l * u.phi) * (v.dw - p.l * v.phi);
          r.k(i, j) += half * (p.k1 * shear + p.k2 * bend + p.k3 * axial);
          r.m(i, j) += half * (p.rho1 * u.phi * v.phi + p.rho2 * u.psi * v.psi + p.rho1 * u.w * v.w);
          r.c(i, j) += half * d * axial;
        }
      }
    }
  }
  return r;
}

/// Every eigenvalue of the companion matrix [0 I; -M^-1 K  -M^-1 C] by a
/// dense general eigensolver.
inline Eigen::VectorXcd dense_spectrum(const AssembledSystem& sys) {
  const int b = sys.block_size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * b, 2 * b);
  a.topRightCorner(b, b).setIdentity();
  a.bottomLeftCorner(b, b) = -sys.mass_factor().solve(sys.stiffness());
  a.bottomRightCorner(b, b) = -sys.mass_factor().solve(sys.damping());
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues();
}

inline double distance_to(const Eigen::VectorXcd& set, cdouble s) {
  return (set.array() - s).abs().minCoeff();
}

/// Nearly decoupled beam: tiny curvature and shear stiffness, damping over
/// the whole length. The axial field then obeys a damped wave equation.
inline ModelParams damped_wave_params(double d0) {
  ModelParams p;
  p.l = 1e-9;
  p.k1 = 1e-3;
  p.alpha = 0.0;
  p.beta = p.L;
  p.d0 = d0;
  return p;
}

/// Roots of s^2 + d0 mu s + k3 mu = 0 for the lowest
/// `modes` generalized eigenvalues mu of (int w' w', rho1 int w w) on the P1
/// space, upper half plane root first.
inline std::vector<cdouble> damped_wave_roots(const ModelParams& p, const Mesh& m, int modes) {
  const int inner = m.n_elements() - 1;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(inner, inner);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(inner, inner);
  for (int e = 0; e < m.n_elements(); ++e) {
    const double h = m.width(e);
    const int ids[2] = {e - 1, e};  // interior index of nodes e and e+1
    const double ks[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
    const double ms[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (ids[a] < 0 || ids[a] >= inner || ids[b] < 0 || ids[b] >= inner) continue;
        s(ids[a], ids[b]) += ks[a][b];
        mass(ids[a], ids[b]) += p.rho1 * ms[a][b];
      }
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s, mass);
  std::vector<cdouble> roots;
  for (int j = 0; j < modes; ++j) {
    const double mu = ges.eigenvalues()(j);
    const cdouble disc = std::sqrt(cdouble(p.d0 * p.d0 * mu * mu - 4.0 * p.k3 * mu, 0.0));
    roots.push_back(0.5 * (-p.d0 * mu + disc));
    roots.push_back(0.5 * (-p.d0 * mu - disc));
  }
  return roots;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bresse_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace bresse::testing
