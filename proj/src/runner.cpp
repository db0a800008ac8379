// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bresse/discretization.hpp"
#include "bresse/error.hpp"
#include "bresse/parallel.hpp"
#include "bresse/spectral.hpp"

namespace bresse {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::FileWrite, "cannot create " + path + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = root_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::FileWrite, "cannot write " + p.string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const std::string& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

std::string spectrum_csv(const SpectrumReport& r) {
  std::string s = "re,im,residual,mesh_n\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    s += csv_row({format_double(r.eigenvalues[i].real()), format_double(r.eigenvalues[i].imag()),
                  format_double(r.residuals[i]), std::to_string(r.mesh_size)});
  }
  return s;
}

std::string resolvent_csv(const ResolventProfile& prof) {
  std::string s = "lambda,norm,iters,residual\n";
  for (std::size_t i = 0; i < prof.lambdas.size(); ++i) {
    s += csv_row({format_double(prof.lambdas[i]), format_double(prof.norms[i]),
                  std::to_string(prof.iters[i]), format_double(prof.residuals[i])});
  }
  return s;
}

std::string energy_csv(const EnergySeries& e) {
  std::string s = "t,E,kinetic,potential,balance_residual\n";
  for (std::size_t i = 0; i < e.times.size(); ++i) {
    s += csv_row({format_double(e.times[i]), format_double(e.energies[i]),
                  format_double(e.kinetic[i]), format_double(e.potential[i]),
                  format_double(e.balance_residuals[i])});
  }
  return s;
}

ordered_json growth_summary(const ResolventProfile& prof, const GrowthFit& fit,
                            const SpeedClass& sc) {
  return {{"slope", fit.slope},
          {"window", {fit.lo, fit.hi}},
          {"r_squared", fit.r_squared},
          {"points", fit.points},
          {"predicted_exponent", sc.predicted_resolvent_exponent},
          {"consistent", fit.slope <= sc.predicted_resolvent_exponent + 0.5},
          {"speed_class", to_string(sc.variant)},
          {"lambda_max", prof.lambda_max},
          {"max_iters_used", *std::max_element(prof.iters.begin(), prof.iters.end())},
          {"max_residual", *std::max_element(prof.residuals.begin(), prof.residuals.end())}};
}

ordered_json decay_summary(const EnergySeries& e, const DecayFit& fit, double c_obs,
                           const SpeedClass& sc) {
  return {{"gamma_hat", fit.gamma_hat},
          {"window", {fit.lo, fit.hi}},
          {"r_squared", fit.r_squared},
          {"points", fit.points},
          {"power_law", fit.power_law},
          {"predicted_gamma", sc.predicted_decay_exponent},
          {"domain_norm0", e.initial_domain_norm},
          {"C_obs", c_obs},
          {"speed_class", to_string(sc.variant)}};
}

ordered_json energy_stats(const EnergySeries& e, const SimConfig& sc) {
  return {{"dt", sc.dt},
          {"t_final", e.times.back()},
          {"steps", e.steps},
          {"sample_stride", sc.sample_stride},
          {"E0", e.energies.front()},
          {"E_final", e.energies.back()},
          {"max_balance_residual", e.max_balance_residual},
          {"max_energy_increase", e.max_energy_increase},
          {"domain_norm0", e.initial_domain_norm}};
}

double single_c_obs(const EnergySeries& e, double gamma, const SimConfig& sc) {
  return observed_decay_constant(std::span<const EnergySeries>(&e, 1), gamma, sc.fit_lo,
                                 sc.fit_hi);
}

ordered_json run_validate(const ExperimentConfig& cfg, OutputDir&) {
  const Mesh m = build_mesh(cfg.params, cfg.mesh_n);
  const AssembledSystem sys = assemble(cfg.params, m);
  const SpeedClass sc = classify_speeds(cfg.params, cfg.speed_rel_tol);
  return {{"valid", true},
          {"speed_class", to_string(sc.variant)},
          {"predicted_resolvent_exponent", sc.predicted_resolvent_exponent},
          {"predicted_decay_exponent", sc.predicted_decay_exponent},
          {"mesh_n", m.n_elements()},
          {"state_size", sys.state_size()},
          {"lambda_max", lambda_max(m, cfg.resolvent.c_resolve)},
          {"coercivity_constant", coercivity_constant(sys)}};
}

ordered_json run_spectrum(const ExperimentConfig& cfg, OutputDir& out) {
  const Mesh m = build_mesh(cfg.params, cfg.mesh_n);
  const AssembledSystem sys = assemble(cfg.params, m);
  EigenOptions opts;
  opts.per_shift = cfg.spectrum.per_shift;
  opts.max_iters = cfg.spectrum.max_iters;
  opts.tol = cfg.spectrum.tol;
  opts.seed = cfg.seed;
  const SpectrumReport r = axis_scan(sys, cfg.spectrum.mu, opts);
  out.write("spectrum.csv", spectrum_csv(r));
  const double worst = r.residuals.empty() ? 0.0
                                           : *std::max_element(r.residuals.begin(), r.residuals.end());
  ordered_json s = {{"spectral_abscissa", r.spectral_abscissa},
                    {"min_abs_real", r.min_abs_real},
                    {"closest_to_axis", {r.closest_to_axis.real(), r.closest_to_axis.imag()}},
                    {"count", r.size()},
                    {"max_residual", worst},
                    {"mesh_n", r.mesh_size}};
  out.write("spectrum.json", s.dump(2) + "\n");
  return s;
}

ordered_json run_resolvent(const ExperimentConfig& cfg, OutputDir& out) {
  const ResolventProfile prof = run_profile(cfg.params, cfg);
  out.write("resolvent.csv", resolvent_csv(prof));
  const auto [lo, hi] = growth_window(prof, cfg);
  const GrowthFit fit = fit_growth_exponent(prof, lo, hi);
  ordered_json s = growth_summary(prof, fit, classify_speeds(cfg.params, cfg.speed_rel_tol));
  out.write("resolvent.json", s.dump(2) + "\n");
  return s;
}

ordered_json run_simulate(const ExperimentConfig& cfg, OutputDir& out, bool fit) {
  const Mesh m = build_mesh(cfg.params, cfg.mesh_n);
  const SimConfig sc = sim_config(m, cfg);
  const EnergySeries e = run_simulation(cfg.params, cfg.simulate.initial, cfg);
  out.write("energy.csv", energy_csv(e));
  ordered_json s = energy_stats(e, sc);
  if (fit) {
    const SpeedClass cls = classify_speeds(cfg.params, cfg.speed_rel_tol);
    const DecayFit d = fit_decay(e, sc.fit_lo, sc.fit_hi, decay_options(cfg));
    ordered_json f = decay_summary(e, d, single_c_obs(e, cls.predicted_decay_exponent, sc), cls);
    f["energy"] = s;
    out.write("decay.json", f.dump(2) + "\n");
    return f;
  }
  out.write("simulate.json", s.dump(2) + "\n");
  return s;
}

ordered_json run_dichotomy(const ExperimentConfig& cfg, OutputDir& out) {
  struct Variant {
    std::string name;
    ModelParams params;
  };
  const std::vector<Variant> variants = {
      {"equal", with_speed_ratio(cfg.params, 1.0)},
      {"unequal", with_speed_ratio(cfg.params, cfg.dichotomy.unequal_k2_factor)}};
  const std::vector<SineData> family = [&] {
    std::vector<SineData> f = initial_data_family();
    f.front() = cfg.simulate.initial;
    return f;
  }();

  std::string table =
      "variant,k2,speed_class,slope,predicted_exponent,slope_r_squared,gamma_hat,"
      "predicted_gamma,gamma_r_squared,C_obs\n";
  ordered_json summary;
  std::vector<double> slopes, gammas;
  for (const Variant& v : variants) {
    const SpeedClass cls = classify_speeds(v.params, cfg.speed_rel_tol);
    const ResolventProfile prof = run_profile(v.params, cfg);
    out.write("resolvent_" + v.name + ".csv", resolvent_csv(prof));
    const auto [lo, hi] = growth_window(prof, cfg);
    const GrowthFit g = fit_growth_exponent(prof, lo, hi);

    std::vector<EnergySeries> runs(family.size());
    parallel_for(family.size(),
                 [&](std::size_t i) { runs[i] = run_simulation(v.params, family[i], cfg); });
    out.write("energy_" + v.name + ".csv", energy_csv(runs.front()));
    const SimConfig sc = sim_config(build_mesh(v.params, cfg.mesh_n), cfg);
    const DecayFit d = fit_decay(runs.front(), sc.fit_lo, sc.fit_hi, decay_options(cfg));
    const double c_obs =
        observed_decay_constant(runs, cls.predicted_decay_exponent, sc.fit_lo, sc.fit_hi);

    table += csv_row({v.name, format_double(v.params.k2), to_string(cls.variant),
                      format_double(g.slope), std::to_string(cls.predicted_resolvent_exponent),
                      format_double(g.r_squared), format_double(d.gamma_hat),
                      format_double(cls.predicted_decay_exponent), format_double(d.r_squared),
                      format_double(c_obs)});
    ordered_json entry = {{"k2", v.params.k2},
                          {"resolvent", growth_summary(prof, g, cls)},
                          {"decay", decay_summary(runs.front(), d, c_obs, cls)},
                          {"initial_conditions", runs.size()}};
    summary["variants"][v.name] = entry;
    slopes.push_back(g.slope);
    gammas.push_back(d.gamma_hat);
  }
  out.write("dichotomy.csv", table);

  ordered_json s;
  s["slope_equal"] = slopes[0];
  s["slope_unequal"] = slopes[1];
  s["gamma_equal"] = gammas[0];
  s["gamma_unequal"] = gammas[1];
  s["slope_ordering_ok"] = slopes[1] > slopes[0];
  s["gamma_ordering_ok"] = gammas[0] > gammas[1];
  s["ordering_ok"] = slopes[1] > slopes[0] && gammas[0] > gammas[1];
  s["variants"] = summary["variants"];
  out.write("dichotomy.json", s.dump(2) + "\n");
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ModelParams with_speed_ratio(const ModelParams& p, double factor) {
  ModelParams q = p;
  q.k2 = factor * p.rho2 * p.k1 / p.rho1;
  return q;
}

ResolventProfile run_profile(const ModelParams& p, const ExperimentConfig& cfg) {
  const Mesh m = build_mesh(p, cfg.mesh_n);
  const AssembledSystem sys = assemble(p, m);
  ProfileOptions opts;
  opts.norm.tol = cfg.resolvent.tol;
  opts.norm.max_iters = cfg.resolvent.max_iters;
  opts.norm.seed = cfg.seed;
  opts.c_resolve = cfg.resolvent.c_resolve;
  return profile(sys, cfg.resolvent.lambdas, opts);
}

std::pair<double, double> growth_window(const ResolventProfile& prof, const ExperimentConfig& cfg) {
  auto w = default_growth_window(prof.lambda_max);
  if (cfg.resolvent.window_lo) w.first = *cfg.resolvent.window_lo;
  if (cfg.resolvent.window_hi) w.second = *cfg.resolvent.window_hi;
  return w;
}

SimConfig sim_config(const Mesh& m, const ExperimentConfig& cfg) {
  SimConfig sc;
  sc.dt = cfg.simulate.dt.value_or(default_dt(m));
  sc.t_final = cfg.simulate.t_final;
  sc.sample_stride = cfg.simulate.sample_stride.value_or(
      std::max(1, static_cast<int>(std::lround(0.1 / sc.dt))));
  sc.fit_lo = cfg.simulate.fit_lo;
  sc.fit_hi = cfg.simulate.fit_hi;
  validate(sc);
  return sc;
}

EnergySeries run_simulation(const ModelParams& p, const SineData& data,
                            const ExperimentConfig& cfg) {
  const Mesh m = build_mesh(p, cfg.mesh_n);
  const AssembledSystem sys = assemble(p, m);
  const RealState u0 = project_initial_data(sys, to_fields(data, p.L));
  return simulate(sys, u0, sim_config(m, cfg));
}

DecayOptions decay_options(const ExperimentConfig& cfg) {
  DecayOptions o;
  o.min_time = cfg.simulate.min_time;
  o.energy_floor = cfg.simulate.energy_floor;
  return o;
}

nlohmann::ordered_json RunReport::to_json(const ExperimentConfig& cfg) const {
  ordered_json j;
  j["tool"] = "bresse";
  j["version"] = std::string(kToolVersion);
  j["command"] = command;
  j["config_digest"] = config_digest(cfg);
  j["config"] = bresse::to_json(cfg);
  j["summary"] = summary;
  j["files"] = files;
  j["timings"] = {{"wall_seconds", wall_seconds}, {"threads", worker_count()}};
  return j;
}

RunReport run(std::string_view command, const ExperimentConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw Error(ErrorCode::UnknownCommand, "unknown command '" + std::string(command) + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  OutputDir out(cfg.output_dir);
  RunReport report;
  report.command = std::string(command);
  if (command == "validate") {
    report.summary = run_validate(cfg, out);
  } else if (command == "spectrum") {
    report.summary = run_spectrum(cfg, out);
  } else if (command == "resolvent") {
    report.summary = run_resolvent(cfg, out);
  } else if (command == "simulate") {
    report.summary = run_simulate(cfg, out, false);
  } else if (command == "decay-fit") {
    report.summary = run_simulate(cfg, out, true);
  } else {
    report.summary = run_dichotomy(cfg, out);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.files = out.files();
  report.files.push_back("report.json");
  out.write("report.json", report.to_json(cfg).dump(2) + "\n");
  return report;
}

}  // namespace bresse
