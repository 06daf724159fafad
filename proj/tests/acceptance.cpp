// Acceptance gate: ten end-to-end checks with fixed tolerances and wall-time
// budgets.  Each check prints one [PASS]/[FAIL] line; the exit status is the
// number of failures.

#include <dshock/dshock.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

using namespace dshock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// shared delta-shock run for checks 6 and 9
struct DeltaRun {
  double position = 0.0;
  double mass = 0.0;
  double dx = 0.0;
  double max_defect_rel = 0.0;
  double max_clamp_rel = 0.0;
};

const DeltaRun& delta_run() {
  static const DeltaRun r = [] {
    const RiemannProblem p{1.0, 1.0, 2.0, 0.0, 1, 1.0};
    FvState st = init_riemann(FvGrid::make(-2.0, 2.0, 4000), p);
    DeltaRun out;
    out.dx = st.grid.dx;
    while (1.0 - st.t > 1e-14) {
      const StepDiagnostics d = step(st, p, 0.9, 1.0 - st.t);
      const double m = std::max(d.mass_after, 1e-300);
      out.max_defect_rel = std::max(out.max_defect_rel, d.conservation_defect / m);
      out.max_clamp_rel = std::max(out.max_clamp_rel, d.clamped_mass / m);
    }
    st.t = 1.0;
    const ShockMeasurement m = measure_shock(st, p);
    out.position = m.position;
    out.mass = m.mass;
    return out;
  }();
  return r;
}

Outcome check_speed_identity() {
  std::mt19937 rng(20240811u);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_int_distribution<int> kd(1, 7);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int k = kd(rng);
    double um = mag(rng), up = um - mag(rng);
    if (k % 2 == 0 && up < 0.0) up = 0.25 * um;  // even k needs nonnegative states
    if (!(um > up)) continue;
    const double sigma = shock_speed_sigma(um, up, k);
    const double jump = (pow_int(um, k + 1) - pow_int(up, k + 1)) / (k + 1);
    const double scale = pow_int(std::max({1.0, std::abs(um), std::abs(up)}), k + 1);
    worst = std::max(worst, std::abs(sigma * (um - up) - jump) / scale);
  }
  return {worst <= 1e-12, fmt("max scaled residual %.3g (tol 1e-12)", worst)};
}

Outcome check_entropy() {
  std::mt19937 rng(77u);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> ad(0.0, 2.0);
  std::uniform_int_distribution<int> kd(1, 5);
  const std::vector<double> times{0.0, 1.0, 10.0};
  int n_ok = 0, n_total = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const int k = kd(rng);
    double um = mag(rng), up = um - mag(rng);
    if (k % 2 == 0 && up < 0.0) up = 0.25 * um;
    if (!(um > up)) { um = up + 0.5; }
    const RiemannProblem p{mag(rng), mag(rng), um, up, k, ad(rng)};
    if (classify(p) != WaveClassification::DeltaShock) continue;
    const double sigma = shock_speed_sigma(um, up, k);
    const EntropyReport rep = entropy_check(p, sigma, times);
    ++n_total;
    bool strict = rep.all_ok;
    for (const EntropySample& s : rep.samples) {
      strict = strict && s.lower < s.speed && s.speed < s.upper;
      min_margin = std::min({min_margin, s.speed - s.lower, s.upper - s.speed});
    }
    n_ok += strict ? 1 : 0;
  }
  return {n_total > 0 && n_ok == n_total,
          fmt("%d/%d problems strict, min margin %.3g", n_ok, n_total, min_margin)};
}

Outcome check_singular_point_limit() {
  const RiemannProblem p{1.0, 1.0, 2.0, 0.0, 1, 0.0};
  std::vector<double> errs;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    ProfileConfig c;
    c.epsilon = eps;
    SimilarityProfile pr = solve_u_profile(p, c);
    const std::vector<double> roots = find_singular_points(pr);
    errs.push_back(std::abs(roots.front() - 1.0));
  }
  const bool mono = monotone_decreasing_with_floor(errs, 1e-8);
  return {mono && errs.back() <= 0.05,
          fmt("|xi_sigma - 1| = %.3g -> %.3g, monotone %d (final tol 0.05)", errs.front(),
              errs.back(), mono ? 1 : 0)};
}

Outcome check_delta_weight() {
  ProfileConfig c;
  c.epsilon = 1e-3;

  const RiemannProblem sym{1.0, 1.0, 1.0, -1.0, 1, 0.0};
  SimilarityProfile ps = solve_u_profile(sym, c);
  find_singular_points(ps);
  compute_v_profile(ps);
  const double w_sym = measure_delta_weight(ps, -1.0, 1.0);

  const RiemannProblem asym{2.0, 1.0, 1.0, -1.0, 1, 0.0};
  const double w0 = delta_weight_w0(asym, shock_speed_sigma(asym.u_minus, asym.u_plus, asym.k));
  SimilarityProfile pa = solve_u_profile(asym, c);
  const double root = find_singular_points(pa).front();
  compute_v_profile(pa);
  const double w_asym = measure_delta_weight(pa, root - 1.0, root + 1.0);

  const double e_sym = std::abs(w_sym - 2.0) / 2.0;
  const double e_asym = std::abs(w_asym - w0) / w0;
  return {e_sym <= 0.05 && e_asym <= 0.05,
          fmt("symmetric %.6g vs 2 (rel %.3g), asymmetric %.6g vs %.6g (rel %.3g), tol 5%%",
              w_sym, e_sym, w_asym, w0, e_asym)};
}

Outcome check_vacuum() {
  const RiemannProblem p{1.0, 1.0, 0.0, 1.0, 1, 0.0};
  std::vector<SimilarityProfile> profiles;
  std::vector<FlatnessRow> rows;
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    ProfileConfig c;
    c.epsilon = eps;
    SimilarityProfile pr = solve_u_profile(p, c);
    find_singular_points(pr);
    compute_v_profile(pr);
    rows.push_back(flatness_row(pr, 0.1));
    profiles.push_back(std::move(pr));
  }
  const SimilarityProfile& fine = profiles.back();
  const double s1 = fine.singular_points.front();
  const double s2 = fine.singular_points.back();
  const bool edges_ok = std::abs(s1 - 0.0) <= 0.05 && std::abs(s2 - 1.0) <= 0.05;

  double band_max = 0.0;
  for (std::size_t i = 0; i < fine.xi_grid.size(); ++i)
    if (fine.xi_grid[i] > s1 && fine.xi_grid[i] < s2)
      band_max = std::max(band_max, std::abs(fine.v_hat[i]));

  auto column_ok = [&](auto get) {
    std::vector<double> col;
    for (const FlatnessRow& r : rows) col.push_back(get(r));
    return monotone_decreasing_with_floor(col, 1e-9 * 2.0);
  };
  const bool flat_ok = column_ok([](const FlatnessRow& r) { return r.sup_u_left; }) &&
                       column_ok([](const FlatnessRow& r) { return r.sup_u_right; }) &&
                       column_ok([](const FlatnessRow& r) { return r.sup_du_left; }) &&
                       column_ok([](const FlatnessRow& r) { return r.sup_du_right; }) &&
                       column_ok([](const FlatnessRow& r) { return r.sup_v_left; }) &&
                       column_ok([](const FlatnessRow& r) { return r.sup_v_right; }) &&
                       column_ok([](const FlatnessRow& r) { return r.mid_residual; });
  return {edges_ok && band_max == 0.0 && flat_ok,
          fmt("edges (%.4f, %.4f) vs (0,1), band max |v| %.3g, flatness monotone %d", s1, s2,
              band_max, flat_ok ? 1 : 0)};
}

Outcome check_fv_delta() {
  const DeltaRun& r = delta_run();
  const double mass_exact = 2.0 * (1.0 - std::exp(-1.0));
  const double pos_exact = 1.0 - std::exp(-1.0);
  const double e_mass = std::abs(r.mass - mass_exact) / mass_exact;
  const double e_pos = std::abs(r.position - pos_exact);
  const double pos_tol = std::max(2.0 * r.dx, 0.02);
  return {e_mass <= 0.05 && e_pos <= pos_tol,
          fmt("mass %.6g vs %.6g (rel %.3g, tol 5%%), position %.6g vs %.6g (err %.3g, tol %.3g)",
              r.mass, mass_exact, e_mass, r.position, pos_exact, e_pos, pos_tol)};
}

Outcome check_fv_fan() {
  const RiemannProblem p{1.0, 1.0, 0.0, 1.0, 1, 1.0};
  const std::vector<int> grids{500, 1000, 2000, 4000};
  std::vector<FvState> states;
  for (int n : grids) {
    FvState st = init_riemann(FvGrid::make(-2.0, 2.0, n), p);
    run_until(st, p, 1.0, 0.9);
    states.push_back(std::move(st));
  }
  std::vector<double> dxs, errs;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    const std::vector<double> coarse = restrict_average(states[i + 1].u_bar, 2);
    dxs.push_back(states[i].grid.dx);
    errs.push_back(l1_diff(states[i].u_bar, coarse, states[i].grid.dx));
  }
  const double order = least_squares_order(dxs, errs);
  const double finest_err = compare_with_exact(states.back(), p).l1_u;
  const double err_tol = 5e-3 * (states.back().grid.x_max - states.back().grid.x_min);
  return {order >= 0.8 && finest_err < err_tol,
          fmt("self-convergence order %.3f (min 0.8), finest L1(u) %.3g (tol %.3g)", order,
              finest_err, err_tol)};
}

Outcome check_vanishing_damping() {
  const RiemannProblem base{1.0, 1.0, 2.0, 0.0, 1, 0.0};
  const double sigma = shock_speed_sigma(base.u_minus, base.u_plus, base.k);
  std::vector<double> devs;
  for (double alpha : {1e-1, 1e-2, 1e-3}) {
    RiemannProblem p = base;
    p.alpha = alpha;
    double dev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = i / 2000.0;
      dev = std::max(dev, std::abs(shock_position(p, sigma, t) - sigma * t));
    }
    devs.push_back(dev);
  }
  const double r1 = devs[0] / devs[1];
  const double r2 = devs[1] / devs[2];
  return {r1 >= 8.0 && r2 >= 8.0,
          fmt("max deviation %.3g / %.3g / %.3g, decade ratios %.2f, %.2f (min 8)", devs[0],
              devs[1], devs[2], r1, r2)};
}

Outcome check_conservation() {
  const DeltaRun& r = delta_run();
  return {r.max_defect_rel <= 1e-12 && r.max_clamp_rel <= 1e-10,
          fmt("max relative defect %.3g (tol 1e-12), max clamped fraction %.3g (tol 1e-10)",
              r.max_defect_rel, r.max_clamp_rel)};
}

Outcome check_validator() {
  ProfileConfig cs;
  cs.epsilon = 0.1;
  const RiemannProblem sym{1.0, 1.0, 1.0, -1.0, 1, 0.0};
  SimilarityProfile ps = solve_u_profile(sym, cs);
  const ProfileDiagnostics ds = validate_profile(ps);

  ProfileConfig ca;
  ca.epsilon = 0.05;
  const RiemannProblem shock{1.0, 1.0, 2.0, 0.0, 1, 0.0};
  SimilarityProfile pa = solve_u_profile(shock, ca);
  const ProfileDiagnostics da = validate_profile(pa);

  SimilarityProfile bad_mono = pa;
  bad_mono.u_hat[bad_mono.u_hat.size() / 3] += 0.05;
  const ProfileDiagnostics dm = validate_profile(bad_mono);

  SimilarityProfile bad_deriv = pa;
  for (std::size_t i = 0; i < bad_deriv.xi_grid.size(); ++i)
    if (bad_deriv.xi_grid[i] >= 5.0) bad_deriv.u_hat[i] -= 1e-3;
  const ProfileDiagnostics dd = validate_profile(bad_deriv);

  const bool pass = ds.all_ok() && da.all_ok() && !dm.monotone_ok && dd.monotone_ok &&
                    !dd.derivative_bound_ok;
  return {pass,
          fmt("canonical all-ok %d/%d, injected kink monotone %d, injected tail step bound %d",
              ds.all_ok() ? 1 : 0, da.all_ok() ? 1 : 0, dm.monotone_ok ? 1 : 0,
              dd.derivative_bound_ok ? 1 : 0)};
}

}  // namespace

int main() {
  struct Check {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Check> checks{
      {"shock speed flux-jump identity", 1.0, check_speed_identity},
      {"entropy condition on random delta data", 1.0, check_entropy},
      {"viscous singular point converges to the shock speed", 30.0, check_singular_point_limit},
      {"concentrated mass matches the delta weight", 30.0, check_delta_weight},
      {"vacuum band edges, interior zero, flatness decay", 30.0, check_vacuum},
      {"finite-volume delta shock mass and position", 60.0, check_fv_delta},
      {"finite-volume fan self-convergence and exact error", 60.0, check_fv_fan},
      {"vanishing damping recovers the straight trajectory", 1.0, check_vanishing_damping},
      {"conservation defect and positivity clamp budgets", 60.0, check_conservation},
      {"profile validator positives and injected faults", 30.0, check_validator},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = checks[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs < checks[i].budget_s;
    const bool pass = out.pass && in_budget;
    failures += pass ? 0 : 1;
    std::printf("[%s] %2zu. %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", i + 1, checks[i].name,
                out.detail.c_str(), secs, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu checks passed\n", checks.size());
  else
    std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures;
}
