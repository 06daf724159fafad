#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exact.hpp"
#include "problem.hpp"
#include "profile.hpp"

namespace dshock {

enum class Mode { Exact, Profile, Simulate, ConvergenceEps, ConvergenceDx, LimitAlpha };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Profile: return "profile";
    case Mode::Simulate: return "simulate";
    case Mode::ConvergenceEps: return "convergence-eps";
    case Mode::ConvergenceDx: return "convergence-dx";
    case Mode::LimitAlpha: return "limit-alpha";
  }
  throw ValidationError("unreachable mode");
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "profile") return Mode::Profile;
  if (s == "simulate") return Mode::Simulate;
  if (s == "convergence-eps") return Mode::ConvergenceEps;
  if (s == "convergence-dx") return Mode::ConvergenceDx;
  if (s == "limit-alpha") return Mode::LimitAlpha;
  throw ParseError("unknown mode: " + s);
}

struct FvConfig {
  double x_min = -2.0;
  double x_max = 2.0;
  int n_cells = 400;
  double cfl = 0.45;
  double t_end = 1.0;
  std::vector<double> sample_times;  // empty means the default geometric set

  friend bool operator==(const FvConfig&, const FvConfig&) = default;
};

struct ExperimentConfig {
  Mode mode = Mode::Exact;
  RiemannProblem problem;
  std::optional<ProfileConfig> profile_cfg;
  std::optional<FvConfig> fv;
  std::optional<std::vector<double>> sweep;
  std::string output_path = "report.csv";
  std::string output_format = "csv";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// sample times straddling the e-folding scale of the damped time map,
// clipped to t_end
inline std::vector<double> default_sample_times(const RiemannProblem& p, double t_end) {
  const double tau = p.alpha > 0.0 ? 1.0 / (p.alpha * p.k) : 1.0;
  std::vector<double> out;
  for (double f : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) {
    const double t = f * tau;
    if (t <= t_end) out.push_back(t);
  }
  if (std::isfinite(t_end) && (out.empty() || out.back() < t_end)) out.push_back(t_end);
  if (out.empty()) out.push_back(tau);
  return out;
}

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) ok = true;
    if (!ok) throw ParseError("unknown field '" + item.key() + "' in " + where);
  }
}

inline double get_num(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline int get_int(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline std::vector<double> get_num_array(const nlohmann::json& v, const char* key) {
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("field '") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

inline RiemannProblem parse_problem(const nlohmann::json& j) {
  detail::check_keys(j, {"v_minus", "v_plus", "u_minus", "u_plus", "k", "alpha"}, "problem");
  RiemannProblem p;
  p.v_minus = detail::get_num(j, "v_minus", p.v_minus);
  p.v_plus = detail::get_num(j, "v_plus", p.v_plus);
  p.u_minus = detail::get_num(j, "u_minus", p.u_minus);
  p.u_plus = detail::get_num(j, "u_plus", p.u_plus);
  p.k = detail::get_int(j, "k", p.k);
  p.alpha = detail::get_num(j, "alpha", p.alpha);
  return p;
}

inline ProfileConfig parse_profile_cfg(const nlohmann::json& j) {
  detail::check_keys(j,
                     {"epsilon", "domain_radius", "n_cells", "continuation_steps", "newton_tol",
                      "newton_max_iter", "flatness_eta"},
                     "profile_cfg");
  ProfileConfig c;
  c.epsilon = detail::get_num(j, "epsilon", c.epsilon);
  c.domain_radius = detail::get_num(j, "domain_radius", c.domain_radius);
  c.n_cells = detail::get_int(j, "n_cells", c.n_cells);
  c.continuation_steps = detail::get_int(j, "continuation_steps", c.continuation_steps);
  c.newton_tol = detail::get_num(j, "newton_tol", c.newton_tol);
  c.newton_max_iter = detail::get_int(j, "newton_max_iter", c.newton_max_iter);
  c.flatness_eta = detail::get_num(j, "flatness_eta", c.flatness_eta);
  return c;
}

inline FvConfig parse_fv_cfg(const nlohmann::json& j) {
  detail::check_keys(j, {"x_min", "x_max", "n_cells", "cfl", "t_end", "sample_times"}, "fv");
  FvConfig c;
  c.x_min = detail::get_num(j, "x_min", c.x_min);
  c.x_max = detail::get_num(j, "x_max", c.x_max);
  c.n_cells = detail::get_int(j, "n_cells", c.n_cells);
  c.cfl = detail::get_num(j, "cfl", c.cfl);
  c.t_end = detail::get_num(j, "t_end", c.t_end);
  if (j.contains("sample_times")) c.sample_times = detail::get_num_array(j.at("sample_times"), "sample_times");
  return c;
}

// every solver-facing invariant is enforced here so a config that parses is a
// config that runs
inline void validate_config(const ExperimentConfig& cfg) {
  validate(cfg.problem);
  if (cfg.output_format != "csv" && cfg.output_format != "json")
    throw ValidationError("output_format must be csv or json");
  if (cfg.output_path.empty()) throw ValidationError("output_path must not be empty");

  const bool needs_profile = cfg.mode == Mode::Profile || cfg.mode == Mode::ConvergenceEps;
  const bool needs_fv = cfg.mode == Mode::Simulate || cfg.mode == Mode::ConvergenceDx;
  const bool needs_sweep =
      cfg.mode == Mode::ConvergenceEps || cfg.mode == Mode::ConvergenceDx || cfg.mode == Mode::LimitAlpha;

  if (needs_sweep) {
    if (!cfg.sweep || cfg.sweep->empty())
      throw ValidationError("sweep must be nonempty for " + to_string(cfg.mode) + " mode");
    for (double s : *cfg.sweep)
      if (!std::isfinite(s) || s <= 0.0) throw ValidationError("sweep entries must be positive and finite");
  }

  if (needs_profile) {
    ProfileConfig pc = cfg.profile_cfg.value_or(ProfileConfig{});
    if (cfg.mode == Mode::Profile) {
      resolve_profile_config(cfg.problem, pc);
    } else {
      for (double e : *cfg.sweep) {
        ProfileConfig per = pc;
        per.epsilon = e;
        resolve_profile_config(cfg.problem, per);
      }
    }
    if (!(pc.flatness_eta > 0.0)) throw ValidationError("flatness_eta must be positive");
  }

  if (cfg.fv) {
    const FvConfig& fc = *cfg.fv;
    if (!(fc.x_max > fc.x_min)) throw ValidationError("fv needs x_max > x_min");
    if (fc.n_cells < 100) throw ValidationError("n_cells must be >= 100");
    if (!(fc.cfl > 0.0 && fc.cfl <= 0.9)) throw ValidationError("cfl must be in (0, 0.9]");
    if (!(fc.t_end > 0.0)) throw ValidationError("t_end must be positive");
    for (double t : fc.sample_times)
      if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("sample_times must be positive");
  }

  if (needs_fv) {
    const FvConfig fc = cfg.fv.value_or(FvConfig{});
    // wave locations at t_end must sit at least 10% of the width from either
    // boundary
    const ExactSolution ex = solve_exact(cfg.problem);
    const double S = damped_time_scale(fc.t_end, cfg.problem.alpha, cfg.problem.k);
    std::vector<double> waves;
    if (ex.classification == WaveClassification::DeltaShock) {
      waves.push_back(ex.sigma * S);
    } else {
      waves.push_back(pow_int(cfg.problem.u_minus, cfg.problem.k) * S);
      waves.push_back(pow_int(cfg.problem.u_plus, cfg.problem.k) * S);
    }
    const double w = fc.x_max - fc.x_min;
    for (double x : waves)
      if (x < fc.x_min + 0.1 * w || x > fc.x_max - 0.1 * w)
        throw ValidationError("domain must contain the wave position at t_end with a 10% margin");

    if (cfg.mode == Mode::ConvergenceDx) {
      const auto& sw = *cfg.sweep;
      for (std::size_t i = 0; i < sw.size(); ++i) {
        const double n = sw[i];
        if (n != std::floor(n) || n < 100.0)
          throw ValidationError("convergence-dx sweep entries must be integers >= 100");
        if (i > 0) {
          const double r = n / sw[i - 1];
          if (!(r > 1.0) || r != std::floor(r))
            throw ValidationError("convergence-dx sweep must increase by integer factors");
        }
      }
      if (sw.size() < 2) throw ValidationError("convergence-dx sweep needs at least two resolutions");
    }
  }

  if (cfg.mode == Mode::LimitAlpha && classify(cfg.problem) != WaveClassification::DeltaShock)
    throw ValidationError("limit-alpha mode needs delta-shock data (u_minus > u_plus)");
}

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be an object");
  detail::check_keys(j, {"mode", "problem", "profile_cfg", "fv", "sweep", "output_path", "output_format"},
                     "config");
  ExperimentConfig cfg;
  if (!j.contains("mode")) throw ParseError("missing field 'mode'");
  if (!j.at("mode").is_string()) throw ParseError("field 'mode' must be a string");
  cfg.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("problem")) {
    if (!j.at("problem").is_object()) throw ParseError("field 'problem' must be an object");
    cfg.problem = parse_problem(j.at("problem"));
  }
  if (j.contains("profile_cfg")) {
    if (!j.at("profile_cfg").is_object()) throw ParseError("field 'profile_cfg' must be an object");
    cfg.profile_cfg = parse_profile_cfg(j.at("profile_cfg"));
  }
  if (j.contains("fv")) {
    if (!j.at("fv").is_object()) throw ParseError("field 'fv' must be an object");
    cfg.fv = parse_fv_cfg(j.at("fv"));
  }
  if (j.contains("sweep")) cfg.sweep = detail::get_num_array(j.at("sweep"), "sweep");
  if (j.contains("output_path")) {
    if (!j.at("output_path").is_string()) throw ParseError("field 'output_path' must be a string");
    cfg.output_path = j.at("output_path").get<std::string>();
  }
  if (j.contains("output_format")) {
    if (!j.at("output_format").is_string()) throw ParseError("field 'output_format' must be a string");
    cfg.output_format = j.at("output_format").get<std::string>();
  }
  validate_config(cfg);
  return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["problem"] = {{"v_minus", cfg.problem.v_minus}, {"v_plus", cfg.problem.v_plus},
                  {"u_minus", cfg.problem.u_minus}, {"u_plus", cfg.problem.u_plus},
                  {"k", cfg.problem.k},             {"alpha", cfg.problem.alpha}};
  if (cfg.profile_cfg) {
    const ProfileConfig& c = *cfg.profile_cfg;
    j["profile_cfg"] = {{"epsilon", c.epsilon},
                        {"domain_radius", c.domain_radius},
                        {"n_cells", c.n_cells},
                        {"continuation_steps", c.continuation_steps},
                        {"newton_tol", c.newton_tol},
                        {"newton_max_iter", c.newton_max_iter},
                        {"flatness_eta", c.flatness_eta}};
  }
  if (cfg.fv) {
    const FvConfig& c = *cfg.fv;
    j["fv"] = {{"x_min", c.x_min}, {"x_max", c.x_max},   {"n_cells", c.n_cells},
               {"cfl", c.cfl},     {"t_end", c.t_end},   {"sample_times", c.sample_times}};
  }
  if (cfg.sweep) j["sweep"] = *cfg.sweep;
  j["output_path"] = cfg.output_path;
  j["output_format"] = cfg.output_format;
  return j.dump(2) + "\n";
}

}  // namespace dshock
