// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "bresse/error.hpp"

namespace bresse {

const ModelParams& validate_params(const ModelParams& p, IntervalRule rule) {
  const std::pair<const char*, double> positive[] = {
      {"rho1", p.rho1}, {"rho2", p.rho2}, {"k1", p.k1}, {"k2", p.k2}, {"k3", p.k3},
      {"l", p.l},       {"L", p.L},       {"d0", p.d0}};
  for (const auto& [name, value] : positive) {
    // !(value > 0) also rejects NaN.
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::NonPositiveParameter, name);
    }
  }
  const bool finite = std::isfinite(p.alpha) && std::isfinite(p.beta);
  const bool ordered = rule == IntervalRule::Open
                           ? (0.0 < p.alpha && p.alpha < p.beta && p.beta < p.L)
                           : (0.0 <= p.alpha && p.alpha < p.beta && p.beta <= p.L);
  if (!finite || !ordered) {
    std::ostringstream os;
    os.precision(17);
    os << "need 0 < alpha < beta < L, got alpha=" << p.alpha << ", beta=" << p.beta
       << ", L=" << p.L;
    throw Error(ErrorCode::BadInterval, os.str());
  }
  return p;
}

double damping_at(const ModelParams& p, double x) {
  if (!(x >= 0.0 && x <= p.L)) {
    std::ostringstream os;
    os << "x=" << x << " outside [0, " << p.L << "]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return (p.alpha < x && x < p.beta) ? p.d0 : 0.0;
}

SpeedClass classify_speeds(const ModelParams& p, double rel_tol) {
  validate_params(p, IntervalRule::Closed);
  const double shear = p.k1 / p.rho1;
  const double bending = p.k2 / p.rho2;
  SpeedClass c;
  if (std::abs(shear - bending) <= rel_tol * std::max(shear, bending)) {
    c.variant = SpeedVariant::EqualSpeeds;
    c.predicted_resolvent_exponent = 2;
    c.predicted_decay_exponent = 1.0;
  } else {
    c.variant = SpeedVariant::UnequalSpeeds;
    c.predicted_resolvent_exponent = 4;
    c.predicted_decay_exponent = 0.5;
  }
  return c;
}

std::string to_string(SpeedVariant v) {
  return v == SpeedVariant::EqualSpeeds ? "equal" : "unequal";
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t params_digest(const ModelParams& p) {
  std::ostringstream os;
  os.precision(17);
  for (double v : {p.rho1, p.rho2, p.k1, p.k2, p.k3, p.l, p.L, p.alpha, p.beta, p.d0}) os << v << ';';
  return fnv1a(os.str());
}

}  // namespace bresse
