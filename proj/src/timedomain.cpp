// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bresse/error.hpp"
#include "bresse/linefit.hpp"

namespace bresse {

void validate(const SimConfig& cfg) {
  std::ostringstream os;
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    os << "dt must be positive, got " << cfg.dt;
  } else if (!(cfg.t_final >= 10.0 * cfg.dt) || !std::isfinite(cfg.t_final)) {
    os << "t_final=" << cfg.t_final << " must be at least 10 dt=" << 10.0 * cfg.dt;
  } else if (cfg.sample_stride < 1) {
    os << "sample_stride must be >= 1, got " << cfg.sample_stride;
  } else if (!(cfg.fit_lo > 0.0 && cfg.fit_lo < cfg.fit_hi && cfg.fit_hi <= cfg.t_final)) {
    os << "fit window [" << cfg.fit_lo << ", " << cfg.fit_hi << "] must lie in (0, t_final="
       << cfg.t_final << "]";
  } else {
    return;
  }
  throw Error(ErrorCode::InvalidSimConfig, os.str());
}

double default_dt(const Mesh& m) { return 0.5 * m.nominal_width(); }

MidpointStepper::MidpointStepper(const AssembledSystem& sys, double dt) : sys_(sys), dt_(dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidSimConfig, "dt must be positive");
  const double half = 0.5 * dt;
  llt_.compute(sys.mass() + half * sys.damping() + (half * half) * sys.stiffness());
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::FactorizationFailed, "midpoint matrix is not positive definite");
  }
}

MidpointStepper::Step MidpointStepper::advance(const RealState& u) const {
  check_dimensions(sys_, u);
  const double half = 0.5 * dt_;
  Step s;
  s.v_mid = llt_.solve(sys_.mass() * u.v - half * (sys_.stiffness() * u.q));
  s.next.q = u.q + dt_ * s.v_mid;
  s.next.v = 2.0 * s.v_mid - u.v;
  return s;
}

RealState step_midpoint(const AssembledSystem& sys, const RealState& u, double dt) {
  return MidpointStepper(sys, dt).advance(u).next;
}

EnergySeries simulate(const AssembledSystem& sys, const RealState& u0, const SimConfig& cfg) {
  validate(cfg);
  check_dimensions(sys, u0);
  const MidpointStepper stepper(sys, cfg.dt);
  const long steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));

  EnergySeries series;
  series.steps = steps;
  series.initial_domain_norm = domain_norm(sys, u0);

  EnergyComponents e = energy(sys, u0);
  const double e0 = e.total;
  const double denom = e0 + 1e-300;
  auto record = [&](double t, const EnergyComponents& ec, double residual) {
    series.times.push_back(t);
    series.energies.push_back(ec.total);
    series.kinetic.push_back(ec.kinetic);
    series.potential.push_back(ec.potential);
    series.balance_residuals.push_back(residual);
  };
  record(0.0, e, 0.0);

  RealState u = u0;
  double window_residual = 0.0;
  for (long n = 1; n <= steps; ++n) {
    MidpointStepper::Step s = stepper.advance(u);
    const EnergyComponents next = energy(sys, s.next);
    const double dissipated = cfg.dt * s.v_mid.dot(sys.damping() * s.v_mid);
    const double r = std::abs(next.total - e.total + dissipated) / denom;
    window_residual = std::max(window_residual, r);
    series.max_balance_residual = std::max(series.max_balance_residual, r);
    series.max_energy_increase =
        std::max(series.max_energy_increase, (next.total - e.total) / denom);
    u = std::move(s.next);
    e = next;
    if (n % cfg.sample_stride == 0 || n == steps) {
      record(static_cast<double>(n) * cfg.dt, e, window_residual);
      window_residual = 0.0;
    }
  }
  return series;
}

DecayFit fit_decay(const EnergySeries& series, double lo, double hi, const DecayOptions& opts) {
  const double e0 = series.energies.empty() ? 0.0 : series.energies.front();
  std::vector<double> x, y, used;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < lo || t > hi) continue;
    const double en = series.energies[i];
    if (!(en > 0.0)) {
      std::ostringstream os;
      os << "E(" << t << ")=" << en << " inside the fit window; shrink the window";
      throw Error(ErrorCode::NonpositiveEnergy, os.str());
    }
    if (t < opts.min_time || en < opts.energy_floor * e0) continue;
    used.push_back(t);
    x.push_back(std::log(t));
    y.push_back(std::log(en));
  }
  if (x.size() < 10) {
    std::ostringstream os;
    os << "decay window [" << lo << ", " << hi << "] holds " << x.size()
       << " usable samples, need 10";
    throw Error(ErrorCode::WindowTooSmall, os.str());
  }
  const LineFit f = fit_line(x, y);
  DecayFit d;
  d.gamma_hat = -f.slope;
  d.c_hat = std::exp(f.intercept);
  d.r_squared = f.r_squared;
  d.lo = used.front();
  d.hi = used.back();
  d.points = static_cast<int>(x.size());
  d.power_law = f.r_squared >= opts.power_law_r2;
  return d;
}

double observed_decay_constant(std::span<const EnergySeries> family, double gamma, double lo,
                               double hi) {
  double c = 0.0;
  for (const EnergySeries& s : family) {
    if (!(s.initial_domain_norm > 0.0)) continue;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      const double t = s.times[i];
      if (t < lo || t > hi) continue;
      c = std::max(c, s.energies[i] * std::pow(t, gamma) / s.initial_domain_norm);
    }
  }
  return c;
}

namespace {

InitialFields::Fn sine_series(std::vector<double> coeffs, double length) {
  if (coeffs.empty()) return {};
  return [coeffs = std::move(coeffs), length](double x) {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      sum += coeffs[k] * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x / length);
    }
    return sum;
  };
}

}  // namespace

InitialFields to_fields(const SineData& data, double length) {
  InitialFields f;
  f.phi0 = sine_series(data.phi0, length);
  f.phi1 = sine_series(data.phi1, length);
  f.psi0 = sine_series(data.psi0, length);
  f.psi1 = sine_series(data.psi1, length);
  f.w0 = sine_series(data.w0, length);
  f.w1 = sine_series(data.w1, length);
  return f;
}

SineData default_initial_data() {
  SineData d;
  d.phi0 = {1.0};
  d.psi0 = {0.0, 1.0};
  d.w0 = {1.0};
  return d;
}

std::vector<SineData> initial_data_family() {
  std::vector<SineData> family{default_initial_data()};

  SineData swapped;
  swapped.phi0 = {0.0, 1.0};
  swapped.psi0 = {1.0};
  swapped.w0 = {0.0, 0.0, 1.0};
  family.push_back(swapped);

  SineData velocities;
  velocities.phi1 = {1.0};
  velocities.psi1 = {0.0, 1.0};
  velocities.w1 = {1.0};
  family.push_back(velocities);

  SineData mixed;
  mixed.phi0 = {1.0, 0.0, 0.3};
  mixed.psi0 = {0.5};
  mixed.w0 = {0.0, 1.0};
  mixed.w1 = {0.5};
  family.push_back(mixed);
  return family;
}

}  // namespace bresse
