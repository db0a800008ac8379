// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/discretization.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "bresse/error.hpp"

namespace bresse {
namespace {

// One summand a * (u or u') of a strain, e.g. l*w inside phi' + psi + l w.
struct StrainTerm {
  Field field;
  bool derivative;
  double coef;
};

// Integrals over one element of width h of products of the two local P1
// shape functions N_0 = (x_1 - x)/h, N_1 = (x - x_0)/h.
struct ElementIntegrals {
  double h;

  // int N_i N_j
  double value_value(int i, int j) const { return h * (i == j ? 2.0 : 1.0) / 6.0; }
  // int N_i' N_j'
  double deriv_deriv(int i, int j) const { return (i == j ? 1.0 : -1.0) / h; }
  // int N_i' N_j
  double deriv_value(int i, int /*j*/) const { return i == 0 ? -0.5 : 0.5; }

  double pair(bool di, int i, bool dj, int j) const {
    if (di && dj) return deriv_deriv(i, j);
    if (!di && !dj) return value_value(i, j);
    if (di) return deriv_value(i, j);
    return deriv_value(j, i);
  }
};

// A += weight * int_e (sum_a strain_a)(sum_b strain_b) over element e.
void add_form(Eigen::MatrixXd& a, const Mesh& mesh, const DofMap& dofs, int e, double weight,
              std::initializer_list<StrainTerm> strain) {
  if (weight == 0.0) return;
  const ElementIntegrals ints{mesh.width(e)};
  for (const StrainTerm& s : strain) {
    for (const StrainTerm& t : strain) {
      const double c = weight * s.coef * t.coef;
      if (c == 0.0) continue;
      for (int i = 0; i < 2; ++i) {
        const int row = dofs.index(s.field, e + i);
        if (row < 0) continue;
        for (int j = 0; j < 2; ++j) {
          const int col = dofs.index(t.field, e + j);
          if (col < 0) continue;
          a(row, col) += c * ints.pair(s.derivative, i, t.derivative, j);
        }
      }
    }
  }
}

void symmetrize(Eigen::MatrixXd& a) { a = 0.5 * (a + a.transpose()).eval(); }

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// M^{-1} r through the cached real Cholesky factor, for real or complex r.
template <class Scalar>
Vec<Scalar> mass_solve(const AssembledSystem& sys, const Vec<Scalar>& r) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return sys.mass_factor().solve(r);
  } else {
    Vec<Scalar> out(r.size());
    out.real() = sys.mass_factor().solve(Eigen::VectorXd(r.real()));
    out.imag() = sys.mass_factor().solve(Eigen::VectorXd(r.imag()));
    return out;
  }
}

// x* A x for symmetric real A, returned as its real part.
template <class Scalar>
double quadratic_form(const Eigen::MatrixXd& a, const Vec<Scalar>& x) {
  return std::real(x.dot(a * x));
}

}  // namespace

Mesh build_mesh(const ModelParams& p, int n_elements, IntervalRule rule) {
  validate_params(p, rule);
  if (n_elements < 4) {
    throw Error(ErrorCode::TooCoarse,
                "need at least 4 elements, got " + std::to_string(n_elements));
  }
  const double h = p.L / n_elements;
  Mesh m;
  m.nodes.resize(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i) m.nodes[i] = p.L * i / n_elements;
  m.nodes.back() = p.L;

  const int ia = static_cast<int>(std::lround(p.alpha / h));
  const int ib = static_cast<int>(std::lround(p.beta / h));
  const bool touches_left = ia == 0 && p.alpha != 0.0;
  const bool touches_right = ib == n_elements && p.beta != p.L;
  if (ib <= ia || touches_left || touches_right) {
    std::ostringstream os;
    os << "damping interval (" << p.alpha << ", " << p.beta << ") holds no complete element at n="
       << n_elements;
    throw Error(ErrorCode::TooCoarse, os.str());
  }
  m.nodes[ia] = p.alpha;
  m.nodes[ib] = p.beta;
  m.alpha_index = ia;
  m.beta_index = ib;
  return m;
}

ComplexState to_complex(const RealState& u) {
  return {u.q.cast<cdouble>(), u.v.cast<cdouble>()};
}

AssembledSystem::AssembledSystem(ModelParams params, Mesh mesh, Eigen::MatrixXd mass,
                                 Eigen::MatrixXd stiffness, Eigen::MatrixXd damping)
    : params_(params),
      mesh_(std::move(mesh)),
      dofs_(mesh_.n_elements()),
      mass_(std::move(mass)),
      stiffness_(std::move(stiffness)),
      damping_(std::move(damping)),
      mass_llt_(mass_),
      stiffness_llt_(stiffness_) {
  if (mass_llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailed, "mass matrix is not positive definite");
  }
  if (stiffness_llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailed, "stiffness matrix is not positive definite");
  }
}

Eigen::MatrixXd AssembledSystem::metric() const {
  const int b = block_size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * b, 2 * b);
  g.topLeftCorner(b, b) = stiffness_;
  g.bottomRightCorner(b, b) = mass_;
  return g;
}

AssembledSystem assemble(const ModelParams& p, const Mesh& m) {
  const DofMap dofs(m.n_elements());
  const int dim = dofs.size();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd damp = Eigen::MatrixXd::Zero(dim, dim);

  using F = Field;
  for (int e = 0; e < m.n_elements(); ++e) {
    // shear strain phi' + psi + l w
    add_form(stiff, m, dofs, e, p.k1,
             {{F::Phi, true, 1.0}, {F::Psi, false, 1.0}, {F::W, false, p.l}});
    // bending psi'
    add_form(stiff, m, dofs, e, p.k2, {{F::Psi, true, 1.0}});
    // axial strain w' - l phi
    add_form(stiff, m, dofs, e, p.k3, {{F::W, true, 1.0}, {F::Phi, false, -p.l}});

    add_form(mass, m, dofs, e, p.rho1, {{F::Phi, false, 1.0}});
    add_form(mass, m, dofs, e, p.rho2, {{F::Psi, false, 1.0}});
    add_form(mass, m, dofs, e, p.rho1, {{F::W, false, 1.0}});

    const double d = damping_at(p, 0.5 * (m.nodes[e] + m.nodes[e + 1]));
    add_form(damp, m, dofs, e, d, {{F::W, true, 1.0}, {F::Phi, false, -p.l}});
  }
  symmetrize(mass);
  symmetrize(stiff);
  symmetrize(damp);
  return AssembledSystem(p, m, std::move(mass), std::move(stiff), std::move(damp));
}

AssembledSystem without_damping(const AssembledSystem& sys) {
  return AssembledSystem(sys.params(), sys.mesh(), sys.mass(), sys.stiffness(),
                         Eigen::MatrixXd::Zero(sys.block_size(), sys.block_size()));
}

Eigen::MatrixXd seminorm_matrix(const Mesh& m) {
  const DofMap dofs(m.n_elements());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dofs.size(), dofs.size());
  for (int e = 0; e < m.n_elements(); ++e) {
    for (Field f : {Field::Phi, Field::Psi, Field::W}) add_form(s, m, dofs, e, 1.0, {{f, true, 1.0}});
  }
  symmetrize(s);
  return s;
}

double coercivity_constant(const AssembledSystem& sys) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
      sys.stiffness(), seminorm_matrix(sys.mesh()), Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailed, "generalized eigensolve for coercivity failed");
  }
  return ges.eigenvalues().minCoeff();
}

template <class Scalar>
void check_dimensions(const AssembledSystem& sys, const StateVector<Scalar>& u) {
  const Eigen::Index b = sys.block_size();
  if (u.q.size() != b || u.v.size() != b) {
    std::ostringstream os;
    os << "state blocks (" << u.q.size() << ", " << u.v.size() << ") vs system block " << b;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

template <class Scalar>
StateVector<Scalar> apply_generator(const AssembledSystem& sys, const StateVector<Scalar>& u) {
  check_dimensions(sys, u);
  Vec<Scalar> force = sys.stiffness() * u.q + sys.damping() * u.v;
  return {u.v, -mass_solve<Scalar>(sys, force)};
}

template <class Scalar>
EnergyComponents energy(const AssembledSystem& sys, const StateVector<Scalar>& u) {
  check_dimensions(sys, u);
  EnergyComponents e;
  e.kinetic = 0.5 * quadratic_form(sys.mass(), u.v);
  e.potential = 0.5 * quadratic_form(sys.stiffness(), u.q);
  e.total = e.kinetic + e.potential;
  e.dissipation_rate = quadratic_form(sys.damping(), u.v);
  return e;
}

template <class Scalar>
cdouble inner_product_H(const AssembledSystem& sys, const StateVector<Scalar>& u,
                        const StateVector<Scalar>& v) {
  check_dimensions(sys, u);
  check_dimensions(sys, v);
  // Eigen's dot conjugates its left operand: a.dot(b) = a^H b.
  return cdouble(v.q.dot(sys.stiffness() * u.q)) + cdouble(v.v.dot(sys.mass() * u.v));
}

template <class Scalar>
double norm_H(const AssembledSystem& sys, const StateVector<Scalar>& u) {
  check_dimensions(sys, u);
  return std::sqrt(std::max(0.0, quadratic_form(sys.stiffness(), u.q) +
                                     quadratic_form(sys.mass(), u.v)));
}

template <class Scalar>
double domain_norm(const AssembledSystem& sys, const StateVector<Scalar>& u) {
  const double base = norm_H(sys, u);
  const double image = norm_H(sys, apply_generator(sys, u));
  return base * base + image * image;
}

RealState project_initial_data(const AssembledSystem& sys, const InitialFields& fields) {
  const Mesh& m = sys.mesh();
  const DofMap& dofs = sys.dofs();
  const double x0 = m.nodes.front();
  const double xl = m.nodes.back();
  RealState u = RealState::zero(sys.block_size());

  struct Slot {
    const InitialFields::Fn* fn;
    const char* name;
    Field field;
    bool velocity;
  };
  const std::array<Slot, 6> slots = {{{&fields.phi0, "phi0", Field::Phi, false},
                                      {&fields.phi1, "phi1", Field::Phi, true},
                                      {&fields.psi0, "psi0", Field::Psi, false},
                                      {&fields.psi1, "psi1", Field::Psi, true},
                                      {&fields.w0, "w0", Field::W, false},
                                      {&fields.w1, "w1", Field::W, true}}};
  for (const Slot& s : slots) {
    if (!*s.fn) continue;
    const auto& f = *s.fn;
    const double left = f(x0);
    const double right = f(xl);
    if (std::abs(left) > 1e-12 || std::abs(right) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << s.name << " must vanish at both ends, got " << left << " at x=0 and " << right
         << " at x=L";
      throw Error(ErrorCode::IncompatibleBoundary, os.str());
    }
    auto& target = s.velocity ? u.v : u.q;
    for (int node = 1; node < m.n_elements(); ++node) {
      target(dofs.index(s.field, node)) = f(m.nodes[node]);
    }
  }
  return u;
}

#define BRESSE_INSTANTIATE(S)                                                                     \
  template void check_dimensions<S>(const AssembledSystem&, const StateVector<S>&);              \
  template StateVector<S> apply_generator<S>(const AssembledSystem&, const StateVector<S>&);     \
  template EnergyComponents energy<S>(const AssembledSystem&, const StateVector<S>&);            \
  template cdouble inner_product_H<S>(const AssembledSystem&, const StateVector<S>&,             \
                                      const StateVector<S>&);                                    \
  template double norm_H<S>(const AssembledSystem&, const StateVector<S>&);                      \
  template double domain_norm<S>(const AssembledSystem&, const StateVector<S>&);

BRESSE_INSTANTIATE(double)
BRESSE_INSTANTIATE(cdouble)
#undef BRESSE_INSTANTIATE

}  // namespace bresse
