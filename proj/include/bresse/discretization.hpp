// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bresse/model.hpp"

namespace bresse {

using cdouble = std::complex<double>;

enum class Field : int { Phi = 0, Psi = 1, W = 2 };
inline constexpr int kFieldCount = 3;

/// Partition 0 = x_0 < ... < x_n = L in which alpha and beta are nodes, so
/// the jump of d(x) falls on element boundaries.
struct Mesh {
  std::vector<double> nodes;
  int alpha_index = 0;
  int beta_index = 0;

  int n_elements() const { return static_cast<int>(nodes.size()) - 1; }
  double length() const { return nodes.back(); }
  double width(int e) const { return nodes[e + 1] - nodes[e]; }
  /// L / n, the width before snapping.
  double nominal_width() const { return length() / n_elements(); }
};

/// Uniform mesh with the nodes nearest to alpha and beta moved onto them.
/// Throws TooCoarse for n < 4 or when the patch cannot hold an element.
Mesh build_mesh(const ModelParams& p, int n_elements, IntervalRule rule = IntervalRule::Open);

/// Interior nodes x_1..x_{n-1} times the three fields, field-major:
/// index = field * (n-1) + (node - 1). Boundary nodes carry no unknown.
class DofMap {
 public:
  explicit DofMap(int n_elements) : interior_(n_elements - 1) {}

  int interior_nodes() const { return interior_; }
  int size() const { return kFieldCount * interior_; }
  /// -1 for the Dirichlet nodes 0 and n.
  int index(Field f, int node) const {
    if (node <= 0 || node > interior_) return -1;
    return static_cast<int>(f) * interior_ + node - 1;
  }

 private:
  int interior_;
};

/// Discrete U = (v1,...,v6): q holds the nodal displacements (phi, psi, w),
/// v the nodal velocities, both in DofMap order.
template <class Scalar>
struct StateVector {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector q;
  Vector v;

  static StateVector zero(int block) { return {Vector::Zero(block), Vector::Zero(block)}; }
  Eigen::Index block_size() const { return q.size(); }
};

using RealState = StateVector<double>;
using ComplexState = StateVector<cdouble>;

ComplexState to_complex(const RealState& u);

struct EnergyComponents {
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double dissipation_rate = 0.0;  ///< v* C v
};

/// Mass, stiffness and damping matrices of the P1 discretization together
/// with cached Cholesky factors of M and K. Immutable once built.
class AssembledSystem {
 public:
  AssembledSystem(ModelParams params, Mesh mesh, Eigen::MatrixXd mass, Eigen::MatrixXd stiffness,
                  Eigen::MatrixXd damping);

  const ModelParams& params() const { return params_; }
  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }

  const Eigen::MatrixXd& mass() const { return mass_; }
  const Eigen::MatrixXd& stiffness() const { return stiffness_; }
  const Eigen::MatrixXd& damping() const { return damping_; }
  /// Energy metric G = blockdiag(K, M).
  Eigen::MatrixXd metric() const;

  const Eigen::LLT<Eigen::MatrixXd>& mass_factor() const { return mass_llt_; }
  const Eigen::LLT<Eigen::MatrixXd>& stiffness_factor() const { return stiffness_llt_; }

  /// Number of displacement unknowns (3 (n-1)); the state has twice as many.
  int block_size() const { return dofs_.size(); }
  int state_size() const { return 2 * dofs_.size(); }

 private:
  ModelParams params_;
  Mesh mesh_;
  DofMap dofs_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd stiffness_;
  Eigen::MatrixXd damping_;
  Eigen::LLT<Eigen::MatrixXd> mass_llt_;
  Eigen::LLT<Eigen::MatrixXd> stiffness_llt_;
};

/// Exact element-wise integration of
///   K: k1 (phi'+psi+l w)^2 + k2 psi'^2 + k3 (w'-l phi)^2
///   C: d(x) (w'-l phi)^2, d constant per element
///   M: rho1 phi^2 + rho2 psi^2 + rho1 w^2
/// on the P1 space with homogeneous Dirichlet conditions.
AssembledSystem assemble(const ModelParams& p, const Mesh& m);

/// The d0 -> 0 limit of `sys`: same mass and stiffness, C = 0. Validation
/// refuses d0 = 0, so the conservative reference system is built this way.
AssembledSystem without_damping(const AssembledSystem& sys);

/// Block-diagonal H^1 seminorm matrix (int q' q~') for the three fields.
Eigen::MatrixXd seminorm_matrix(const Mesh& m);

/// Smallest generalized eigenvalue of (K, seminorm_matrix): the discrete
/// coercivity constant of the elastic energy.
double coercivity_constant(const AssembledSystem& sys);

/// A_h U = (v, -M^{-1}(K q + C v)).
template <class Scalar>
StateVector<Scalar> apply_generator(const AssembledSystem& sys, const StateVector<Scalar>& u);

template <class Scalar>
EnergyComponents energy(const AssembledSystem& sys, const StateVector<Scalar>& u);

/// (U, V)_G = V* G U: linear in U, conjugate-linear in V.
template <class Scalar>
cdouble inner_product_H(const AssembledSystem& sys, const StateVector<Scalar>& u,
                        const StateVector<Scalar>& v);

template <class Scalar>
double norm_H(const AssembledSystem& sys, const StateVector<Scalar>& u);

/// Squared graph norm ||U||_G^2 + ||A_h U||_G^2.
template <class Scalar>
double domain_norm(const AssembledSystem& sys, const StateVector<Scalar>& u);

/// Closed-form initial data; missing entries are treated as zero.
struct InitialFields {
  using Fn = std::function<double(double)>;
  Fn phi0, phi1, psi0, psi1, w0, w1;
};

/// Nodal interpolation of the displacement fields into q and the velocity
/// fields into v. Throws IncompatibleBoundary if a field is nonzero at 0 or L.
RealState project_initial_data(const AssembledSystem& sys, const InitialFields& fields);

/// Throws DimensionMismatch unless both blocks of `u` match the system.
template <class Scalar>
void check_dimensions(const AssembledSystem& sys, const StateVector<Scalar>& u);

}  // namespace bresse
