// Copyright 2026 The bresse-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "bresse/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bresse/error.hpp"
#include "bresse/resolvent.hpp"

namespace bresse {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& expected) {
  throw Error(ErrorCode::SchemaError, path + ": expected " + expected);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads the members of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) schema_error(path_.empty() ? "<root>" : path_, "an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  const json& at(const std::string& key) {
    known_.insert(key);
    return obj_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) {
    if (!has(key)) schema_error(path(key), "a number (required)");
    return as_number(at(key), path(key));
  }

  void number(const std::string& key, double& out) {
    if (has(key)) out = as_number(at(key), path(key));
  }

  void positive(const std::string& key, double& out) {
    number(key, out);
    if (has(key) && !(out > 0.0)) schema_error(path(key), "a positive number");
  }

  void integer(const std::string& key, int& out, int min_value) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer()) schema_error(path(key), "an integer");
    const auto i = v.get<long long>();
    if (i < min_value || i > std::numeric_limits<int>::max()) {
      schema_error(path(key), "an integer >= " + std::to_string(min_value));
    }
    out = static_cast<int>(i);
  }

  std::vector<double> number_list(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) schema_error(path(key), "an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], path(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) schema_error(path(it.key()), "no such key (unknown)");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(path, "a finite number");
    return d;
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

std::pair<int, int> line_col(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ModelParams read_params(ObjectReader& root) {
  if (!root.has("params")) schema_error("params", "an object (required)");
  ObjectReader r(root.at("params"), "params");
  ModelParams p;
  p.rho1 = r.number("rho1");
  p.rho2 = r.number("rho2");
  p.k1 = r.number("k1");
  p.k2 = r.number("k2");
  p.k3 = r.number("k3");
  p.l = r.number("l");
  p.L = r.number("L");
  p.alpha = r.number("alpha");
  p.beta = r.number("beta");
  p.d0 = r.number("d0");
  r.finish();
  return p;
}

void read_spectrum(ObjectReader& root, SpectrumSettings& s) {
  if (!root.has("spectrum")) return;
  ObjectReader r(root.at("spectrum"), "spectrum");
  const bool range = r.has("mu_min") || r.has("mu_max") || r.has("mu_step");
  if (r.has("mu")) {
    if (range) schema_error(r.path("mu"), "either mu or mu_min/mu_max/mu_step, not both");
    s.mu = r.number_list("mu");
  } else if (range) {
    double lo = 1.0, hi = 50.0, step = 1.0;
    r.number("mu_min", lo);
    r.number("mu_max", hi);
    r.number("mu_step", step);
    if (!(step > 0.0) || hi < lo) schema_error(r.path("mu_step"), "a positive step with mu_min <= mu_max");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    s.mu.clear();
    for (int i = 0; i < count; ++i) s.mu.push_back(lo + i * step);
  }
  r.integer("per_shift", s.per_shift, 1);
  r.integer("max_iters", s.max_iters, 1);
  r.positive("tol", s.tol);
  r.finish();
}

void read_resolvent(ObjectReader& root, ResolventSettings& s) {
  if (!root.has("resolvent")) return;
  ObjectReader r(root.at("resolvent"), "resolvent");
  const bool range = r.has("log10_min") || r.has("log10_max") || r.has("points");
  if (r.has("lambdas")) {
    if (range) schema_error(r.path("lambdas"), "either lambdas or log10_min/log10_max/points, not both");
    s.lambdas = r.number_list("lambdas");
  } else if (range) {
    double lo = 0.0, hi = 1.5;
    int points = 25;
    r.number("log10_min", lo);
    r.number("log10_max", hi);
    r.integer("points", points, 1);
    s.lambdas = log_grid(lo, hi, points);
  }
  r.positive("tol", s.tol);
  r.integer("max_iters", s.max_iters, 1);
  r.positive("c_resolve", s.c_resolve);
  if (r.has("window")) {
    const auto w = r.number_list("window");
    if (w.size() != 2) schema_error(r.path("window"), "[lo, hi]");
    s.window_lo = w[0];
    s.window_hi = w[1];
  }
  r.finish();
}

void read_sine(ObjectReader& r, const char* key, std::vector<double>& out) {
  if (r.has(key)) out = r.number_list(key);
}

void read_simulate(ObjectReader& root, SimulateSettings& s) {
  if (!root.has("simulate")) return;
  ObjectReader r(root.at("simulate"), "simulate");
  if (r.has("dt")) {
    double dt = 0.0;
    r.positive("dt", dt);
    s.dt = dt;
  }
  r.positive("t_final", s.t_final);
  if (r.has("sample_stride")) {
    int stride = 1;
    r.integer("sample_stride", stride, 1);
    s.sample_stride = stride;
  }
  if (r.has("fit_window")) {
    const auto w = r.number_list("fit_window");
    if (w.size() != 2) schema_error(r.path("fit_window"), "[lo, hi]");
    s.fit_lo = w[0];
    s.fit_hi = w[1];
  }
  r.number("min_time", s.min_time);
  r.positive("energy_floor", s.energy_floor);
  if (r.has("initial")) {
    ObjectReader init(r.at("initial"), r.path("initial"));
    s.initial = SineData{};
    read_sine(init, "phi0", s.initial.phi0);
    read_sine(init, "phi1", s.initial.phi1);
    read_sine(init, "psi0", s.initial.psi0);
    read_sine(init, "psi1", s.initial.psi1);
    read_sine(init, "w0", s.initial.w0);
    read_sine(init, "w1", s.initial.w1);
    init.finish();
  }
  r.finish();
}

json sine_json(const SineData& d) {
  return json{{"phi0", d.phi0}, {"phi1", d.phi1}, {"psi0", d.psi0},
              {"psi1", d.psi1}, {"w0", d.w0},     {"w1", d.w1}};
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(col) + ": " + e.what());
  }

  ObjectReader root(doc, "");
  ExperimentConfig cfg;
  cfg.params = read_params(root);
  root.integer("mesh_n", cfg.mesh_n, 1);
  if (root.has("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      schema_error("seed", "a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (root.has("output_dir")) {
    const json& v = root.at("output_dir");
    if (!v.is_string()) schema_error("output_dir", "a string");
    cfg.output_dir = v.get<std::string>();
  }
  root.number("speed_rel_tol", cfg.speed_rel_tol);
  if (cfg.speed_rel_tol < 0.0) schema_error("speed_rel_tol", "a non-negative number");
  read_spectrum(root, cfg.spectrum);
  read_resolvent(root, cfg.resolvent);
  read_simulate(root, cfg.simulate);
  if (root.has("dichotomy")) {
    ObjectReader r(root.at("dichotomy"), "dichotomy");
    r.number("unequal_k2_factor", cfg.dichotomy.unequal_k2_factor);
    r.finish();
    if (!(cfg.dichotomy.unequal_k2_factor > 0.0)) {
      schema_error("dichotomy.unequal_k2_factor", "a positive number");
    }
  }
  root.finish();

  validate_params(cfg.params);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileRead, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  const ModelParams& p = cfg.params;
  nlohmann::ordered_json j;
  j["params"] = {{"rho1", p.rho1}, {"rho2", p.rho2}, {"k1", p.k1},       {"k2", p.k2},
                 {"k3", p.k3},     {"l", p.l},       {"L", p.L},         {"alpha", p.alpha},
                 {"beta", p.beta}, {"d0", p.d0}};
  j["mesh_n"] = cfg.mesh_n;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["speed_rel_tol"] = cfg.speed_rel_tol;
  j["spectrum"] = {{"mu", cfg.spectrum.mu},
                   {"per_shift", cfg.spectrum.per_shift},
                   {"max_iters", cfg.spectrum.max_iters},
                   {"tol", cfg.spectrum.tol}};
  nlohmann::ordered_json res = {{"lambdas", cfg.resolvent.lambdas},
                                {"tol", cfg.resolvent.tol},
                                {"max_iters", cfg.resolvent.max_iters},
                                {"c_resolve", cfg.resolvent.c_resolve}};
  if (cfg.resolvent.window_lo) res["window"] = {*cfg.resolvent.window_lo, *cfg.resolvent.window_hi};
  j["resolvent"] = res;
  nlohmann::ordered_json sim = {{"t_final", cfg.simulate.t_final},
                                {"fit_window", {cfg.simulate.fit_lo, cfg.simulate.fit_hi}},
                                {"min_time", cfg.simulate.min_time},
                                {"energy_floor", cfg.simulate.energy_floor},
                                {"initial", sine_json(cfg.simulate.initial)}};
  if (cfg.simulate.dt) sim["dt"] = *cfg.simulate.dt;
  if (cfg.simulate.sample_stride) sim["sample_stride"] = *cfg.simulate.sample_stride;
  j["simulate"] = sim;
  j["dichotomy"] = {{"unequal_k2_factor", cfg.dichotomy.unequal_k2_factor}};
  return j;
}

std::string config_digest(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json(cfg).dump())));
  return buf;
}

}  // namespace bresse
