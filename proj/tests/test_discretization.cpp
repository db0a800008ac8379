// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "bresse/discretization.hpp"
#include "bresse/error.hpp"
#include "support.hpp"

using namespace bresse;
using namespace bresse::testing;

namespace {

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST_SUITE("discretization") {
  TEST_CASE("mesh is uniform with the patch ends snapped onto nodes") {
    ModelParams p;
    p.alpha = 0.3;
    p.beta = 0.71;
    const Mesh m = build_mesh(p, 10);
    CHECK(m.n_elements() == 10);
    CHECK(m.nodes.front() == 0.0);
    CHECK(m.nodes.back() == 1.0);
    CHECK(m.nodes[m.alpha_index] == 0.3);
    CHECK(m.nodes[m.beta_index] == 0.71);
    CHECK(m.alpha_index == 3);
    CHECK(m.beta_index == 7);
    for (int e = 0; e < m.n_elements(); ++e) CHECK(m.width(e) > 0.0);
    CHECK(m.nominal_width() == doctest::Approx(0.1));
  }

  TEST_CASE("coarse meshes are rejected") {
    const ModelParams p;
    CHECK_THROWS_AS(build_mesh(p, 3), Error);
    ModelParams narrow;
    narrow.alpha = 0.5;
    narrow.beta = 0.52;
    try {
      build_mesh(narrow, 8);
      FAIL("accepted a patch narrower than one element");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooCoarse);
    }
    ModelParams edge;
    edge.alpha = 0.05;
    CHECK_THROWS_AS(build_mesh(edge, 4), Error);
  }

  TEST_CASE("closed rule allows a patch covering the whole beam") {
    ModelParams p;
    p.alpha = 0.0;
    p.beta = 1.0;
    const Mesh m = build_mesh(p, 8, IntervalRule::Closed);
    CHECK(m.alpha_index == 0);
    CHECK(m.beta_index == 8);
  }

  TEST_CASE("dof numbering is field-major over interior nodes") {
    const DofMap d(5);
    CHECK(d.size() == 12);
    CHECK(d.index(Field::Phi, 1) == 0);
    CHECK(d.index(Field::Psi, 1) == 4);
    CHECK(d.index(Field::W, 4) == 11);
    CHECK(d.index(Field::W, 0) == -1);
    CHECK(d.index(Field::W, 5) == -1);
  }

  TEST_CASE("n = 4 stiffness matches the frozen symbolic assembly") {
    const AssembledSystem sys = system_for(defaults(), 4);
    REQUIRE(sys.block_size() == 9);
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        CHECK(std::abs(sys.stiffness()(i, j) - kFrozenStiffness[i][j]) <= 1e-12);
      }
    }
  }

  TEST_CASE("matrices agree with an independent quadrature assembly") {
    ModelParams p;
    p.rho1 = 1.3;
    p.rho2 = 0.4;
    p.k1 = 2.5;
    p.k2 = 0.8;
    p.k3 = 3.1;
    p.l = 1.7;
    p.L = 2.0;
    p.alpha = 0.55;
    p.beta = 1.32;
    p.d0 = 0.9;
    const Mesh mesh = build_mesh(p, 11);
    const AssembledSystem sys = assemble(p, mesh);
    const Reference ref = quadrature_assembly(p, mesh);
    CHECK(rel_diff(sys.stiffness(), ref.k) < 1e-13);
    CHECK(rel_diff(sys.mass(), ref.m) < 1e-13);
    CHECK(rel_diff(sys.damping(), ref.c) < 1e-13);
  }

  TEST_CASE("mass matrix of one field is h/6 tridiag(4, 1) on a uniform mesh") {
    const AssembledSystem sys = system_for(defaults(), 8);
    const double h = 1.0 / 8;
    CHECK(sys.mass()(0, 0) == doctest::Approx(4.0 * h / 6).epsilon(1e-14));
    CHECK(sys.mass()(0, 1) == doctest::Approx(h / 6).epsilon(1e-14));
    CHECK(sys.mass()(0, 2) == 0.0);
    CHECK(sys.mass()(0, 7) == 0.0);
  }

  TEST_CASE("matrices are symmetric; M and K positive definite; C semidefinite") {
    const AssembledSystem sys = system_for(defaults(), 32);
    CHECK((sys.mass() - sys.mass().transpose()).norm() == 0.0);
    CHECK((sys.stiffness() - sys.stiffness().transpose()).norm() == 0.0);
    CHECK((sys.damping() - sys.damping().transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ec(sys.damping());
    CHECK(ec.eigenvalues().minCoeff() > -1e-12 * ec.eigenvalues().maxCoeff());
    Eigen::LLT<Eigen::MatrixXd> g(sys.metric());
    CHECK(g.info() == Eigen::Success);
  }

  TEST_CASE("undamped limit keeps M and K and zeroes C") {
    const AssembledSystem sys = system_for(defaults(), 8);
    const AssembledSystem u = without_damping(sys);
    CHECK(u.damping().norm() == 0.0);
    CHECK((u.mass() - sys.mass()).norm() == 0.0);
    CHECK((u.stiffness() - sys.stiffness()).norm() == 0.0);
  }

  TEST_CASE("damping at zero velocity is invisible to the generator") {
    const AssembledSystem sys = system_for(defaults(), 8);
    std::mt19937_64 rng(5);
    RealState u = random_real_state(sys.block_size(), rng);
    u.v.setZero();
    const RealState a = apply_generator(sys, u);
    const RealState b = apply_generator(without_damping(sys), u);
    CHECK(a.q.norm() == 0.0);
    CHECK((a.v - b.v).norm() <= 1e-14 * b.v.norm());
  }

  TEST_CASE("damping matrix vanishes outside the patch") {
    const AssembledSystem sys = system_for(defaults(), 16);
    const DofMap& d = sys.dofs();
    // w at node 2 (x = 0.125) touches only undamped elements.
    const int i = d.index(Field::W, 2);
    CHECK(sys.damping().row(i).norm() == 0.0);
    const int j = d.index(Field::W, 8);
    CHECK(sys.damping()(j, j) > 0.0);
  }

  TEST_CASE("stiffness is coercive for small, unit and large curvature") {
    for (double l : {0.1, 1.0, 10.0}) {
      ModelParams p;
      p.l = l;
      for (int n : {16, 64}) {
        const AssembledSystem sys = system_for(p, n);
        CHECK(sys.stiffness_factor().info() == Eigen::Success);
        CHECK(coercivity_constant(sys) > 0.0);
      }
    }
  }

  TEST_CASE("coercivity constant is stable under refinement") {
    const double c16 = coercivity_constant(system_for(defaults(), 16));
    const double c32 = coercivity_constant(system_for(defaults(), 32));
    const double c64 = coercivity_constant(system_for(defaults(), 64));
    const double lo = std::min({c16, c32, c64});
    const double hi = std::max({c16, c32, c64});
    CHECK(lo > 0.0);
    CHECK(hi / lo < 1.2);
  }

  TEST_CASE("dissipation identity on random complex states") {
    std::mt19937_64 rng(7);
    for (int n : {8, 32}) {
      const AssembledSystem sys = system_for(defaults(), n);
      for (int trial = 0; trial < 20; ++trial) {
        const ComplexState u = random_state(sys.block_size(), rng);
        const ComplexState au = apply_generator(sys, u);
        const double lhs = inner_product_H(sys, au, u).real();
        const double rhs = -energy(sys, u).dissipation_rate;
        const double scale = norm_H(sys, au) * norm_H(sys, u);
        CHECK(rhs <= 0.0);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("undamped generator is skew in the energy metric") {
    const AssembledSystem sys = without_damping(system_for(defaults(), 16));
    std::mt19937_64 rng(11);
    const ComplexState u = random_state(sys.block_size(), rng);
    const ComplexState v = random_state(sys.block_size(), rng);
    const cdouble a = inner_product_H(sys, apply_generator(sys, u), v);
    const cdouble b = inner_product_H(sys, u, apply_generator(sys, v));
    CHECK(std::abs(a + b) <= 1e-11 * std::abs(a));
  }

  TEST_CASE("inner product is Hermitian and matches the energy") {
    const AssembledSystem sys = system_for(defaults(), 16);
    std::mt19937_64 rng(3);
    const ComplexState u = random_state(sys.block_size(), rng);
    const ComplexState v = random_state(sys.block_size(), rng);
    const cdouble uv = inner_product_H(sys, u, v);
    const cdouble vu = inner_product_H(sys, v, u);
    CHECK(std::abs(uv - std::conj(vu)) <= 1e-12 * std::abs(uv));
    const RealState r = random_real_state(sys.block_size(), rng);
    CHECK(energy(sys, r).total == doctest::Approx(0.5 * std::pow(norm_H(sys, r), 2)).epsilon(1e-13));
    CHECK(domain_norm(sys, r) >= std::pow(norm_H(sys, r), 2));
  }

  TEST_CASE("interpolated energy converges at second order to the exact value") {
    // phi0 = x (1 - x), other fields zero, all constants 1:
    // E = (1/2) int (phi0'^2 + phi0^2) = 11/60.
    InitialFields f;
    f.phi0 = [](double x) { return x * (1.0 - x); };
    const double exact = 11.0 / 60.0;
    std::array<double, 4> err{};
    const std::array<int, 4> ns = {16, 32, 64, 128};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const AssembledSystem sys = system_for(defaults(), ns[i]);
      err[i] = std::abs(energy(sys, project_initial_data(sys, f)).total - exact);
    }
    for (std::size_t i = 1; i < ns.size(); ++i) {
      CHECK(std::log2(err[i - 1] / err[i]) >= 1.9);
    }
    CHECK(err.back() < 1e-4);
  }

  TEST_CASE("initial data must satisfy the boundary conditions") {
    const AssembledSystem sys = system_for(defaults(), 8);
    InitialFields f;
    f.w1 = [](double x) { return 1.0 + 0.0 * x; };
    try {
      project_initial_data(sys, f);
      FAIL("accepted w1 = 1");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IncompatibleBoundary);
      CHECK(std::string(e.what()).find("w1") != std::string::npos);
    }
  }

  TEST_CASE("projection places nodal values in the right slots") {
    const AssembledSystem sys = system_for(defaults(), 4);
    InitialFields f;
    f.psi1 = [](double x) { return x * (1.0 - x); };
    const RealState u = project_initial_data(sys, f);
    CHECK(u.q.norm() == 0.0);
    CHECK(u.v(sys.dofs().index(Field::Psi, 2)) == doctest::Approx(0.25));
    CHECK(u.v(sys.dofs().index(Field::Phi, 2)) == 0.0);
  }

  TEST_CASE("state size mismatches are reported") {
    const AssembledSystem sys = system_for(defaults(), 8);
    const RealState u = RealState::zero(5);
    try {
      energy(sys, u);
      FAIL("accepted a short state");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
  }
}
