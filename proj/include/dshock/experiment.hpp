#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "fv.hpp"
#include "problem.hpp"
#include "profile.hpp"
#include "report.hpp"

namespace dshock {

namespace detail {

inline int sweep_thread_cap() {
  const char* env = std::getenv("DSHOCK_THREADS");
  if (!env || !*env) return 1;
  const int n = std::atoi(env);
  if (n < 1) throw ValidationError("DSHOCK_THREADS must be a positive integer");
  return n;
}

// runs body(i) for i < n, optionally on a small worker pool; failures are
// rethrown in sweep order so output and error behavior stay deterministic
template <typename F>
void for_each_sweep_entry(std::size_t n, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(sweep_thread_cap()), n);
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string format_meta(double x) { return format_double(x); }

inline void push_problem_meta(Report& r, const RiemannProblem& p) {
  r.meta.emplace_back("v_minus", format_meta(p.v_minus));
  r.meta.emplace_back("v_plus", format_meta(p.v_plus));
  r.meta.emplace_back("u_minus", format_meta(p.u_minus));
  r.meta.emplace_back("u_plus", format_meta(p.u_plus));
  r.meta.emplace_back("k", std::to_string(p.k));
  r.meta.emplace_back("alpha", format_meta(p.alpha));
  r.meta.emplace_back("classification", to_string(classify(p)));
}

}  // namespace detail

inline Report run_exact_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  const ExactSolution ex = solve_exact(p);
  const double t_end = cfg.fv ? cfg.fv->t_end : std::numeric_limits<double>::infinity();
  std::vector<double> times =
      cfg.fv && !cfg.fv->sample_times.empty() ? cfg.fv->sample_times : default_sample_times(p, t_end);
  std::sort(times.begin(), times.end());

  Report r;
  r.mode = "exact";
  detail::push_problem_meta(r, p);
  // contact data is served by a linear-degeneracy extension of the closed
  // forms; the trailing column flags those rows
  r.columns = {"t",          "x_shock_measured", "x_shock_exact", "mass_measured",
               "mass_exact", "err_x",            "err_mass",      "entropy_ok",
               "extrapolated"};
  const bool delta = ex.classification == WaveClassification::DeltaShock;
  const bool contact = ex.classification == WaveClassification::Contact;
  if (delta) {
    r.meta.emplace_back("sigma", detail::format_meta(ex.sigma));
    r.meta.emplace_back("w0", detail::format_meta(ex.w0));
  }
  for (double t : times) {
    std::vector<Cell> row(r.columns.size());
    row[0] = t;
    if (delta) {
      const double x = shock_position(p, ex.sigma, t);
      const double w = delta_weight_at(p, ex.w0, t);
      row[1] = x;
      row[2] = x;
      row[3] = w;
      row[4] = w;
      row[5] = 0.0;
      row[6] = 0.0;
      row[7] = entropy_check(p, ex.sigma, {t}).all_ok ? 1.0 : 0.0;
    }
    row[8] = contact ? 1.0 : 0.0;
    r.rows.push_back(std::move(row));
  }
  return r;
}

inline Report run_profile_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  SimilarityProfile pr = solve_u_profile(p, cfg.profile_cfg.value_or(ProfileConfig{}));
  find_singular_points(pr);
  compute_v_profile(pr);
  const ProfileDiagnostics diag = validate_profile(pr);

  Report r;
  r.mode = "profile";
  detail::push_problem_meta(r, p);
  r.meta.emplace_back("epsilon", detail::format_meta(pr.epsilon));
  r.meta.emplace_back("domain_radius", detail::format_meta(pr.config.domain_radius));
  r.meta.emplace_back("n_cells", std::to_string(pr.config.n_cells));
  r.columns = {"epsilon",        "xi_sigma_1", "xi_sigma_2", "weight_measured", "weight_exact",
               "err_weight",     "monotone_ok", "derivative_bound_ok", "uniqueness_ok"};
  std::vector<Cell> row(r.columns.size());
  row[0] = pr.epsilon;
  row[1] = pr.singular_points.front();
  row[2] = pr.singular_points.back();
  if (classify(p) == WaveClassification::DeltaShock) {
    const ExactSolution ex = solve_exact(p);
    const double root = pr.singular_points.front();
    const double R = pr.config.domain_radius;
    const double hw = std::min(1.0, 0.9 * (R - std::abs(root)));
    const double w = measure_delta_weight(pr, root - hw, root + hw);
    row[3] = w;
    row[4] = ex.w0;
    row[5] = std::abs(w - ex.w0);
  }
  row[6] = diag.monotone_ok ? 1.0 : 0.0;
  row[7] = diag.derivative_bound_ok ? 1.0 : 0.0;
  row[8] = diag.uniqueness_ok ? 1.0 : 0.0;
  r.rows.push_back(std::move(row));
  return r;
}

inline Report run_simulate_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  const FvConfig fc = cfg.fv.value_or(FvConfig{});
  const FvGrid grid = FvGrid::make(fc.x_min, fc.x_max, fc.n_cells);
  FvState st = init_riemann(grid, p);
  std::vector<double> times =
      !fc.sample_times.empty() ? fc.sample_times : default_sample_times(p, fc.t_end);
  const auto rows = run_until(st, p, fc.t_end, fc.cfl, times);

  const ExactSolution ex = solve_exact(p);
  const bool delta = ex.classification == WaveClassification::DeltaShock;

  Report r;
  r.mode = "simulate";
  detail::push_problem_meta(r, p);
  r.meta.emplace_back("n_cells", std::to_string(fc.n_cells));
  r.meta.emplace_back("dx", detail::format_meta(grid.dx));
  r.meta.emplace_back("cfl", detail::format_meta(fc.cfl));
  r.meta.emplace_back("t_end", detail::format_meta(fc.t_end));
  r.columns = {"t",     "x_shock_measured", "x_shock_exact", "mass_measured", "mass_exact",
               "err_x", "err_mass",         "entropy_ok",    "l1_v",          "l1_u",
               "extrapolated"};
  const bool contact = ex.classification == WaveClassification::Contact;
  for (const TrajectoryRow& tr : rows) {
    std::vector<Cell> row(r.columns.size());
    row[0] = tr.t;
    row[10] = contact ? 1.0 : 0.0;
    if (delta) {
      const double x = shock_position(p, ex.sigma, tr.t);
      const double w = delta_weight_at(p, ex.w0, tr.t);
      row[2] = x;
      row[4] = w;
      if (tr.shock_measured) {
        row[1] = tr.shock_position;
        row[3] = tr.shock_mass;
        row[5] = std::abs(tr.shock_position - x);
        row[6] = std::abs(tr.shock_mass - w);
      }
      row[7] = entropy_check(p, ex.sigma, {tr.t}).all_ok ? 1.0 : 0.0;
    } else if (tr.norms) {
      row[8] = tr.norms->l1_v;
      row[9] = tr.norms->l1_u;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

inline Report run_convergence_eps_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  const ProfileConfig base = cfg.profile_cfg.value_or(ProfileConfig{});
  std::vector<double> sweep = *cfg.sweep;
  std::sort(sweep.begin(), sweep.end(), std::greater<>());
  const bool delta = classify(p) == WaveClassification::DeltaShock;
  const bool fan = classify(p) == WaveClassification::RarefactionFan;
  std::optional<double> w0;
  if (delta) w0 = solve_exact(p).w0;

  struct Entry {
    FlatnessRow row;
    std::optional<double> weight_err;
  };
  std::vector<Entry> entries(sweep.size());
  detail::for_each_sweep_entry(sweep.size(), [&](std::size_t i) {
    ProfileConfig c = base;
    c.epsilon = sweep[i];
    c.n_cells = 0;  // rescale resolution with epsilon
    SimilarityProfile pr = solve_u_profile(p, c);
    find_singular_points(pr);
    compute_v_profile(pr);
    entries[i].row = flatness_row(pr, base.flatness_eta);
    if (delta) {
      const double root = pr.singular_points.front();
      const double R = pr.config.domain_radius;
      const double hw = std::min(1.0, 0.9 * (R - std::abs(root)));
      entries[i].weight_err = std::abs(measure_delta_weight(pr, root - hw, root + hw) - *w0);
    }
  });

  Report r;
  r.mode = "convergence-eps";
  detail::push_problem_meta(r, p);
  r.meta.emplace_back("flatness_eta", detail::format_meta(base.flatness_eta));
  r.columns = {"epsilon",  "sup_u_left", "sup_u_right", "sup_du_left", "sup_du_right",
               "sup_v_left", "sup_v_right", "mid_residual", "err_weight"};
  for (const Entry& e : entries) {
    std::vector<Cell> row(r.columns.size());
    row[0] = e.row.epsilon;
    row[1] = e.row.sup_u_left;
    row[2] = e.row.sup_u_right;
    row[3] = e.row.sup_du_left;
    row[4] = e.row.sup_du_right;
    row[5] = e.row.sup_v_left;
    row[6] = e.row.sup_v_right;
    if (fan) row[7] = e.row.mid_residual;
    if (e.weight_err) row[8] = *e.weight_err;
    r.rows.push_back(std::move(row));
  }

  // trend verdict over the sorted sweep, noise floor as in the flatness check
  const double umax_k = std::max(std::abs(pow_int(p.u_minus, p.k)), std::abs(pow_int(p.u_plus, p.k)));
  const double floor_sup = 1e-9 * (1.0 + umax_k);
  bool monotone = true;
  const auto col_ok = [&](std::size_t c, double floor_abs) {
    std::vector<double> v;
    for (const auto& row : r.rows)
      if (row[c]) v.push_back(*row[c]);
    return v.size() < 2 || monotone_decreasing_with_floor(v, floor_abs);
  };
  for (std::size_t c = 1; c <= 6; ++c) monotone = monotone && col_ok(c, floor_sup);
  if (fan) monotone = monotone && col_ok(7, floor_sup);
  if (delta) monotone = monotone && col_ok(8, 1e-8);
  r.meta.emplace_back("monotone_ok", monotone ? "1" : "0");
  return r;
}

inline Report run_convergence_dx_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  const FvConfig fc = cfg.fv.value_or(FvConfig{});
  const std::vector<double>& sweep = *cfg.sweep;

  std::vector<FvState> finals(sweep.size());
  detail::for_each_sweep_entry(sweep.size(), [&](std::size_t i) {
    const FvGrid grid = FvGrid::make(fc.x_min, fc.x_max, static_cast<int>(sweep[i]));
    FvState st = init_riemann(grid, p);
    run_until(st, p, fc.t_end, fc.cfl);
    finals[i] = std::move(st);
  });

  Report r;
  r.mode = "convergence-dx";
  detail::push_problem_meta(r, p);
  r.meta.emplace_back("cfl", detail::format_meta(fc.cfl));
  r.meta.emplace_back("t_end", detail::format_meta(fc.t_end));
  r.columns = {"n_cells", "dx", "l1_self_diff_v", "l1_self_diff_u"};
  std::vector<double> dxs, dv, du;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    std::vector<Cell> row(r.columns.size());
    row[0] = sweep[i];
    row[1] = finals[i].grid.dx;
    if (i + 1 < finals.size()) {
      const int ratio = static_cast<int>(sweep[i + 1] / sweep[i]);
      const double ev = l1_diff(finals[i].v_bar, restrict_average(finals[i + 1].v_bar, ratio),
                                finals[i].grid.dx);
      const double eu = l1_diff(finals[i].u_bar, restrict_average(finals[i + 1].u_bar, ratio),
                                finals[i].grid.dx);
      row[2] = ev;
      row[3] = eu;
      dxs.push_back(finals[i].grid.dx);
      dv.push_back(ev);
      du.push_back(eu);
    }
    r.rows.push_back(std::move(row));
  }
  if (dxs.size() >= 2) {
    r.meta.emplace_back("order_v", detail::format_meta(least_squares_order(dxs, dv)));
    r.meta.emplace_back("order_u", detail::format_meta(least_squares_order(dxs, du)));
  }
  return r;
}

inline Report run_limit_alpha_mode(const ExperimentConfig& cfg) {
  const RiemannProblem& p = cfg.problem;
  std::vector<double> sweep = *cfg.sweep;
  std::sort(sweep.begin(), sweep.end(), std::greater<>());
  const double sigma = shock_speed_sigma(p.u_minus, p.u_plus, p.k);
  const double t_end = cfg.fv ? cfg.fv->t_end : 1.0;

  Report r;
  r.mode = "limit-alpha";
  detail::push_problem_meta(r, p);
  r.meta.emplace_back("t_end", detail::format_meta(t_end));
  r.columns = {"alpha", "max_deviation", "ratio_to_prev"};
  std::optional<double> prev;
  for (double a : sweep) {
    RiemannProblem pa = p;
    pa.alpha = a;
    double dev = 0.0;
    const int n = 500;  // dense in t; the deviation is monotone but we do not rely on it
    for (int i = 1; i <= n; ++i) {
      const double t = t_end * i / n;
      dev = std::max(dev, std::abs(shock_position(pa, sigma, t) - sigma * t));
    }
    std::vector<Cell> row(r.columns.size());
    row[0] = a;
    row[1] = dev;
    if (prev && *prev > 0.0 && dev > 0.0) row[2] = *prev / dev;
    prev = dev;
    r.rows.push_back(std::move(row));
  }
  return r;
}

inline Report run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  switch (cfg.mode) {
    case Mode::Exact: return run_exact_mode(cfg);
    case Mode::Profile: return run_profile_mode(cfg);
    case Mode::Simulate: return run_simulate_mode(cfg);
    case Mode::ConvergenceEps: return run_convergence_eps_mode(cfg);
    case Mode::ConvergenceDx: return run_convergence_dx_mode(cfg);
    case Mode::LimitAlpha: return run_limit_alpha_mode(cfg);
  }
  throw ValidationError("unreachable mode");
}

}  // namespace dshock
