// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "bresse/discretization.hpp"

namespace bresse {

struct SimConfig {
  double dt = 0.0;
  double t_final = 0.0;
  int sample_stride = 1;  ///< steps between recorded samples
  double fit_lo = 10.0;
  double fit_hi = 100.0;
};

/// Throws InvalidSimConfig unless dt > 0, t_final >= 10 dt, stride >= 1 and
/// 0 < fit_lo < fit_hi <= t_final.
void validate(const SimConfig& cfg);

/// Default step h/2 for a mesh of nominal width h.
double default_dt(const Mesh& m);

/// Implicit midpoint rule for U' = A_h U. The velocity midpoint solves
///   (M + dt/2 C + dt^2/4 K) v_mid = M v_n - dt/2 K q_n,
/// then q_{n+1} = q_n + dt v_mid and v_{n+1} = 2 v_mid - v_n, which gives
/// E_{n+1} - E_n = -dt v_mid^T C v_mid up to roundoff.
class MidpointStepper {
 public:
  MidpointStepper(const AssembledSystem& sys, double dt);

  struct Step {
    RealState next;
    Eigen::VectorXd v_mid;
  };

  Step advance(const RealState& u) const;
  double dt() const { return dt_; }

 private:
  const AssembledSystem& sys_;
  double dt_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

RealState step_midpoint(const AssembledSystem& sys, const RealState& u, double dt);

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> kinetic;
  std::vector<double> potential;
  /// Largest per-step balance residual |E_{n+1} - E_n + dt v_mid^T C v_mid| / E_0
  /// over the steps leading to each sample (0 for the first sample).
  std::vector<double> balance_residuals;
  double max_balance_residual = 0.0;
  /// Largest single-step increase max(E_{n+1} - E_n, 0) / E_0.
  double max_energy_increase = 0.0;
  double initial_domain_norm = 0.0;
  long steps = 0;
};

EnergySeries simulate(const AssembledSystem& sys, const RealState& u0, const SimConfig& cfg);

struct DecayOptions {
  double min_time = 10.0;      ///< transient cut
  double energy_floor = 1e-8;  ///< drop samples with E < floor * E_0
  double power_law_r2 = 0.95;  ///< r_squared below this flags a non power law
};

struct DecayFit {
  double gamma_hat = 0.0;  ///< E(t) ~ c_hat t^-gamma_hat
  double c_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double r_squared = 0.0;
  int points = 0;
  bool power_law = false;  ///< r_squared >= DecayOptions::power_law_r2
};

/// Least squares on (log t, log E) over samples in [lo, hi] surviving the
/// transient and floor cuts. Throws NonpositiveEnergy if a window sample is
/// not positive, WindowTooSmall with fewer than ten usable samples.
DecayFit fit_decay(const EnergySeries& series, double lo, double hi, const DecayOptions& opts = {});

/// max over series and samples with lo <= t <= hi of E(t) t^gamma / ||U_0||^2_D.
double observed_decay_constant(std::span<const EnergySeries> family, double gamma, double lo,
                               double hi);

/// Sine-series initial data: each field is sum_k a_k sin(k pi x / L).
struct SineData {
  std::vector<double> phi0, phi1, psi0, psi1, w0, w1;
};

InitialFields to_fields(const SineData& data, double length);

/// phi0 = sin(pi x/L), psi0 = sin(2 pi x/L), w0 = sin(pi x/L), zero velocities.
SineData default_initial_data();

/// Default data followed by three other smooth data sets used to estimate
/// the uniform decay constant.
std::vector<SineData> initial_data_family();

}  // namespace bresse
