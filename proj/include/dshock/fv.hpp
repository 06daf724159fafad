#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace dshock {

struct FvGrid {
  double x_min = -2.0;
  double x_max = 2.0;
  int n_cells = 0;
  double dx = 0.0;

  static FvGrid make(double x_min, double x_max, int n_cells) {
    if (!(x_max > x_min)) throw ValidationError("grid needs x_max > x_min");
    if (n_cells < 100) throw ValidationError("n_cells must be >= 100");
    FvGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_cells = n_cells;
    g.dx = (x_max - x_min) / n_cells;
    return g;
  }

  double center(int i) const { return x_min + (i + 0.5) * dx; }
};

struct FvState {
  double t = 0.0;
  std::vector<double> v_bar;
  std::vector<double> u_bar;
  FvGrid grid;
};

// cell averages of the two-state data split at x=0; the straddling cell gets
// the length-weighted average
inline FvState init_riemann(const FvGrid& grid, const RiemannProblem& p) {
  validate(p);
  if (!(grid.x_min < 0.0 && grid.x_max > 0.0))
    throw ValidationError("grid must contain the initial discontinuity x=0");
  FvState s;
  s.grid = grid;
  s.t = 0.0;
  const std::size_t n = static_cast<std::size_t>(grid.n_cells);
  s.v_bar.resize(n);
  s.u_bar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xl = grid.x_min + static_cast<double>(i) * grid.dx;
    const double xr = xl + grid.dx;
    if (xr <= 0.0) {
      s.v_bar[i] = p.v_minus;
      s.u_bar[i] = p.u_minus;
    } else if (xl >= 0.0) {
      s.v_bar[i] = p.v_plus;
      s.u_bar[i] = p.u_plus;
    } else {
      const double fl = (0.0 - xl) / grid.dx;
      s.v_bar[i] = fl * p.v_minus + (1.0 - fl) * p.v_plus;
      s.u_bar[i] = fl * p.u_minus + (1.0 - fl) * p.u_plus;
    }
  }
  return s;
}

enum class EvolutionForm {
  Direct,       // damped system, exact exponential source substep
  Transformed,  // undamped fields with e^{-alpha k t}-scaled fluxes
};

struct StepDiagnostics {
  double dt = 0.0;
  double mass_before = 0.0;       // total v mass, compensated sum
  double mass_after = 0.0;        // after flux update, before clamping
  double flux_left = 0.0;         // v-flux through the left boundary interface
  double flux_right = 0.0;
  double clamped_mass = 0.0;      // negative-v mass removed by the clamp
  // |mass_after - mass_before + dt (flux_right - flux_left)|, the telescoping
  // defect of the conservative update; roundoff-sized by construction
  double conservation_defect = 0.0;
};

// one forward step of local Lax-Friedrichs with Godunov source splitting;
// u first (decoupled), then v with the updated u^k flux
inline StepDiagnostics step(FvState& s, const RiemannProblem& p, double cfl,
                            double dt_cap = std::numeric_limits<double>::infinity(),
                            EvolutionForm form = EvolutionForm::Direct) {
  if (!(cfl > 0.0 && cfl <= 0.9)) throw ValidationError("cfl must be in (0, 0.9]");
  const std::size_t n = s.v_bar.size();
  const double dx = s.grid.dx;
  const int k = p.k;
  const double scale = form == EvolutionForm::Transformed ? std::exp(-p.alpha * k * s.t) : 1.0;

  double max_speed = 0.0;
  for (double u : s.u_bar) max_speed = std::max(max_speed, pow_int(std::abs(u), k));
  max_speed *= scale;
  double dt = max_speed > 0.0 ? cfl * dx / max_speed : std::numeric_limits<double>::infinity();
  dt = std::min(dt, dt_cap);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw CflViolation("non-positive or non-finite time step");

  const double lam = dt / dx;
  const auto ug = [&](std::ptrdiff_t i) {  // zero-gradient ghosts
    if (i < 0) return s.u_bar.front();
    if (i >= static_cast<std::ptrdiff_t>(n)) return s.u_bar.back();
    return s.u_bar[static_cast<std::size_t>(i)];
  };

  // u update: flux u^{k+1}/(k+1), interface speed max(|u_l|,|u_r|)^k
  std::vector<double> Fu(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const double ul = ug(static_cast<std::ptrdiff_t>(f) - 1);
    const double ur = ug(static_cast<std::ptrdiff_t>(f));
    const double a = std::max(pow_int(std::abs(ul), k), pow_int(std::abs(ur), k)) * scale;
    const double fl = pow_int(ul, k + 1) / (k + 1) * scale;
    const double fr = pow_int(ur, k + 1) / (k + 1) * scale;
    Fu[f] = 0.5 * (fl + fr) - 0.5 * a * (ur - ul);
  }
  std::vector<double> u_new(n);
  for (std::size_t i = 0; i < n; ++i) u_new[i] = s.u_bar[i] - lam * (Fu[i + 1] - Fu[i]);

  // v update with the updated u
  const auto ung = [&](std::ptrdiff_t i) {
    if (i < 0) return u_new.front();
    if (i >= static_cast<std::ptrdiff_t>(n)) return u_new.back();
    return u_new[static_cast<std::size_t>(i)];
  };
  const auto vg = [&](std::ptrdiff_t i) {
    if (i < 0) return s.v_bar.front();
    if (i >= static_cast<std::ptrdiff_t>(n)) return s.v_bar.back();
    return s.v_bar[static_cast<std::size_t>(i)];
  };
  StepDiagnostics diag;
  diag.dt = dt;
  KahanSum mass_before;
  for (double v : s.v_bar) mass_before.add(v * dx);
  diag.mass_before = mass_before.value();

  std::vector<double> Gv(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const double ul = ung(static_cast<std::ptrdiff_t>(f) - 1);
    const double ur = ung(static_cast<std::ptrdiff_t>(f));
    const double vl = vg(static_cast<std::ptrdiff_t>(f) - 1);
    const double vr = vg(static_cast<std::ptrdiff_t>(f));
    const double a = std::max(pow_int(std::abs(ul), k), pow_int(std::abs(ur), k)) * scale;
    Gv[f] = 0.5 * (vl * pow_int(ul, k) + vr * pow_int(ur, k)) * scale - 0.5 * a * (vr - vl);
  }
  diag.flux_left = Gv.front();
  diag.flux_right = Gv.back();
  KahanSum mass_after;
  double clamped = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = s.v_bar[i] - lam * (Gv[i + 1] - Gv[i]);
    mass_after.add(v * dx);
    if (v < 0.0) {
      clamped += -v * dx;
      v = 0.0;
    }
    s.v_bar[i] = v;
  }
  diag.mass_after = mass_after.value();
  diag.clamped_mass = clamped;
  diag.conservation_defect =
      std::abs(diag.mass_after - diag.mass_before + dt * (diag.flux_right - diag.flux_left));

  // source: u_t = -alpha u integrated exactly over dt (Direct form only)
  const double decay = form == EvolutionForm::Direct ? std::exp(-p.alpha * dt) : 1.0;
  for (std::size_t i = 0; i < n; ++i) s.u_bar[i] = u_new[i] * decay;
  s.t += dt;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(s.u_bar[i]) || !std::isfinite(s.v_bar[i]))
      throw CflViolation("non-finite state after step");
  return diag;
}

struct ShockMeasurement {
  double position = 0.0;
  double mass = 0.0;
};

// background-subtracted center of mass: background is v_- left / v_+ right of
// the current estimate, window half-width max(10 dx, 0.1 |position|), two
// fixed-point refinements of the estimate
inline ShockMeasurement measure_shock(const FvState& s, const RiemannProblem& p) {
  // contact/constant data passes through and fails the concentration floor
  if (classify(p) == WaveClassification::RarefactionFan)
    throw ValidationError("shock measurement needs concentrating data");
  if (!(s.t > 0.0)) throw ValidationError("state not evolved");
  const std::size_t n = s.v_bar.size();
  const double dx = s.grid.dx;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (s.v_bar[i] > s.v_bar[imax]) imax = i;
  double pos = s.grid.center(static_cast<int>(imax));

  double mass = 0.0;
  for (int pass = 0; pass < 3; ++pass) {  // seed + 2 fixed-point refinements
    const double hw = std::max(10.0 * dx, 0.1 * std::abs(pos));
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s.grid.center(static_cast<int>(i));
      if (std::abs(x - pos) > hw) continue;
      const double bg = x < pos ? p.v_minus : p.v_plus;
      const double ex = (s.v_bar[i] - bg) * dx;
      m0 += ex;
      m1 += ex * x;
    }
    mass = m0;
    if (m0 > 0.0) pos = m1 / m0;
  }
  const double floor_mass = 10.0 * dx * std::max(p.v_minus, p.v_plus);
  if (!(mass >= floor_mass))
    throw NoConcentration("windowed excess mass below the concentration floor");
  return {pos, mass};
}

struct ErrorNorms {
  double l1_v = 0.0;
  double l1_u = 0.0;
};

// L1 against the closed-form solution at cell centers; 3 cells are excluded
// around each wave edge, where the scheme smears the corner
inline ErrorNorms compare_with_exact(const FvState& s, const RiemannProblem& p) {
  const auto cls = classify(p);
  if (cls == WaveClassification::DeltaShock)
    throw ValidationError("pointwise comparison is not meaningful for delta shocks");
  const double S = damped_time_scale(s.t, p.alpha, p.k);
  std::vector<double> edges;
  if (cls == WaveClassification::RarefactionFan) {
    edges = {pow_int(p.u_minus, p.k) * S, pow_int(p.u_plus, p.k) * S};
  } else {
    edges = {pow_int(p.u_minus, p.k) * S};
  }
  ErrorNorms norms;
  const double dx = s.grid.dx;
  for (std::size_t i = 0; i < s.v_bar.size(); ++i) {
    const double x = s.grid.center(static_cast<int>(i));
    bool excluded = false;
    for (double e : edges)
      if (std::abs(x - e) <= 3.0 * dx) excluded = true;
    if (excluded) continue;
    const StateSample ref = evaluate_exact(p, x, s.t);
    norms.l1_v += std::abs(s.v_bar[i] - ref.v_regular) * dx;
    norms.l1_u += std::abs(s.u_bar[i] - ref.u) * dx;
  }
  return norms;
}

struct TrajectoryRow {
  double t = 0.0;
  bool shock_measured = false;
  double shock_position = 0.0;
  double shock_mass = 0.0;
  std::optional<ErrorNorms> norms;  // fan/contact rows
  double clamped_total = 0.0;
  double max_conservation_defect = 0.0;  // over steps since the previous row
  double max_clamped_per_step = 0.0;
};

// advance to t_end, landing exactly on each requested sample time and on
// t_end; a diagnostics row is recorded at each landing
inline std::vector<TrajectoryRow> run_until(FvState& s, const RiemannProblem& p, double t_end,
                                            double cfl, std::vector<double> sample_times = {},
                                            EvolutionForm form = EvolutionForm::Direct) {
  if (t_end < s.t) throw ValidationError("t_end must not precede the current time");
  std::vector<TrajectoryRow> rows;
  if (t_end == s.t) return rows;

  sample_times.push_back(t_end);
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());

  const auto cls = classify(p);
  double clamped_total = 0.0;
  for (double target : sample_times) {
    if (target <= s.t || target > t_end) continue;
    double defect_max = 0.0, clamp_max = 0.0;
    while (target - s.t > 1e-14 * std::max(1.0, target)) {
      const StepDiagnostics d = step(s, p, cfl, target - s.t, form);
      clamped_total += d.clamped_mass;
      const double denom = std::max(std::abs(d.mass_before), 1e-300);
      defect_max = std::max(defect_max, d.conservation_defect / denom);
      clamp_max = std::max(clamp_max, d.clamped_mass / denom);
    }
    s.t = target;  // absorb terminal roundoff dust
    TrajectoryRow row;
    row.t = s.t;
    row.clamped_total = clamped_total;
    row.max_conservation_defect = defect_max;
    row.max_clamped_per_step = clamp_max;
    if (cls == WaveClassification::DeltaShock) {
      try {
        const ShockMeasurement ms = measure_shock(s, p);
        row.shock_measured = true;
        row.shock_position = ms.position;
        row.shock_mass = ms.mass;
      } catch (const NoConcentration&) {
        row.shock_measured = false;  // legitimately too early
      }
    } else {
      row.norms = compare_with_exact(s, p);
    }
    rows.push_back(row);
  }
  return rows;
}

// conservative restriction of fine-grid averages onto a grid coarser by an
// integer factor
inline std::vector<double> restrict_average(const std::vector<double>& fine, int ratio) {
  if (ratio < 1 || fine.size() % static_cast<std::size_t>(ratio) != 0)
    throw ValidationError("restriction ratio must divide the fine cell count");
  std::vector<double> coarse(fine.size() / static_cast<std::size_t>(ratio));
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < ratio; ++j) acc += fine[i * static_cast<std::size_t>(ratio) + j];
    coarse[i] = acc / ratio;
  }
  return coarse;
}

inline double l1_diff(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  if (a.size() != b.size()) throw ValidationError("L1 difference needs equal-length fields");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]) * dx;
  return acc;
}

// least-squares slope of log(err) against log(dx)
inline double least_squares_order(const std::vector<double>& dxs, const std::vector<double>& errs) {
  if (dxs.size() != errs.size() || dxs.size() < 2)
    throw ValidationError("order fit needs at least two resolutions");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(dxs.size());
  for (std::size_t i = 0; i < dxs.size(); ++i) {
    const double lx = std::log(dxs[i]);
    const double ly = std::log(std::max(errs[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dshock
