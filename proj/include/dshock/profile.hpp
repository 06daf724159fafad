#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "exact.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace dshock {

// Dafermos regularization of the Riemann problem: on [-R,R] solve
//   eps u'' = (u^k - xi) u',   u(+-R) = u_-, u_+
// by mu-continuation (boundary data scaled by mu) with damped Newton on a
// central-difference stencil, then recover the density profile from the
// explicit quadrature of  v' / v = -(u^k)'/(u^k - xi).
struct ProfileConfig {
  double epsilon = 0.05;
  double domain_radius = 0.0;  // 0 = auto: 2 (max|u±|^k + 1)
  int n_cells = 0;             // 0 = auto: ceil(40 R / eps)
  int continuation_steps = 12;
  double newton_tol = 1e-10;
  int newton_max_iter = 40;
  double flatness_eta = 0.25;

  friend bool operator==(const ProfileConfig&, const ProfileConfig&) = default;
};

inline ProfileConfig resolve_profile_config(const RiemannProblem& p, ProfileConfig cfg) {
  validate(p);
  const double umax_k = std::max(std::abs(pow_int(p.u_minus, p.k)), std::abs(pow_int(p.u_plus, p.k)));
  if (cfg.domain_radius == 0.0) cfg.domain_radius = 2.0 * (umax_k + 1.0);
  if (!(cfg.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(cfg.newton_tol > 0.0)) throw ValidationError("newton_tol must be positive");
  if (cfg.continuation_steps < 1) throw ValidationError("continuation_steps must be >= 1");
  if (cfg.newton_max_iter < 1) throw ValidationError("newton_max_iter must be >= 1");
  if (!(cfg.domain_radius > umax_k + 1.0))
    throw ValidationError("domain_radius must exceed max|u|^k + 1 so singular points are interior");
  if (cfg.n_cells == 0) cfg.n_cells = static_cast<int>(std::ceil(40.0 * cfg.domain_radius / cfg.epsilon));
  if (cfg.n_cells % 2 != 0) ++cfg.n_cells;  // keep a node at xi = 0
  if (cfg.n_cells < 64) throw ValidationError("n_cells must be >= 64");
  if (static_cast<double>(cfg.n_cells) < 40.0 * cfg.domain_radius / cfg.epsilon)
    throw ValidationError("n_cells >= 40 R / epsilon required (boundary-layer resolution)");
  if (!(cfg.flatness_eta > 0.0)) throw ValidationError("flatness_eta must be positive");
  return cfg;
}

struct SimilarityProfile {
  std::vector<double> xi_grid;
  std::vector<double> u_hat;
  std::vector<double> v_hat;               // absolutely continuous part; empty until computed
  std::vector<double> singular_points;     // 1 entry (u_->u_+) or pair (u_-<u_+)
  std::vector<double> interior_roots;      // bisection-refined sign changes of u^k - xi
  std::vector<char> v_capped;              // nodes where v is capped/assigned, per node
  double epsilon = 0.0;
  double h = 0.0;
  ProfileConfig config;
  RiemannProblem problem;
};

namespace detail {

// tridiagonal solve (Thomas); lo[0] and hi[n-1] unused
inline void thomas_solve(std::vector<double>& lo, std::vector<double>& mid, std::vector<double>& hi,
                         std::vector<double>& rhs) {
  const std::size_t n = mid.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lo[i] / mid[i - 1];
    mid[i] -= w * hi[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= mid[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - hi[i] * rhs[i + 1]) / mid[i];
}

// residual of the scaled stencil
//   F_i = (u_{i+1} - 2u_i + u_{i-1}) - c (mu u_i^k - xi_i)(u_{i+1} - u_{i-1}),
// c = h/(2 eps).  Returns the max norm.
inline double bvp_residual(const std::vector<double>& xi, const std::vector<double>& u, double mu,
                           int k, double c, std::vector<double>& F) {
  const std::size_t n = xi.size() - 1;
  double r = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = mu * pow_int(u[i], k) - xi[i];
    F[i - 1] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) - c * a * (u[i + 1] - u[i - 1]);
    r = std::max(r, std::abs(F[i - 1]));
  }
  return r;
}

// one Newton solve at fixed mu; returns true on convergence, updating u
inline bool bvp_newton(const std::vector<double>& xi, std::vector<double>& u, double mu,
                       const RiemannProblem& p, const ProfileConfig& cfg, double c) {
  const std::size_t n = xi.size() - 1;
  u[0] = mu * p.u_minus;
  u[n] = mu * p.u_plus;
  std::vector<double> F(n - 1), lo(n - 1), mid(n - 1), hi(n - 1), d(n - 1), ut(u.size());
  for (int it = 0; it < cfg.newton_max_iter; ++it) {
    const double r = bvp_residual(xi, u, mu, p.k, c, F);
    if (r <= cfg.newton_tol) return true;
    for (std::size_t i = 1; i < n; ++i) {
      const double a = mu * pow_int(u[i], p.k) - xi[i];
      lo[i - 1] = 1.0 + c * a;
      mid[i - 1] = -2.0 - c * mu * p.k * pow_int(u[i], p.k - 1) * (u[i + 1] - u[i - 1]);
      hi[i - 1] = 1.0 - c * a;
      d[i - 1] = -F[i - 1];
    }
    thomas_solve(lo, mid, hi, d);
    double lam = 1.0;
    bool accepted = false;
    while (lam > 1e-6) {
      ut = u;
      for (std::size_t i = 1; i < n; ++i) ut[i] += lam * d[i - 1];
      const double rt = bvp_residual(xi, ut, mu, p.k, c, F);
      if (rt <= (1.0 - 1e-4 * lam) * r) {
        u.swap(ut);
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) return false;
  }
  return bvp_residual(xi, u, mu, p.k, c, F) <= cfg.newton_tol;
}

}  // namespace detail

inline SimilarityProfile solve_u_profile(const RiemannProblem& p, ProfileConfig cfg_in) {
  const ProfileConfig cfg = resolve_profile_config(p, cfg_in);
  SimilarityProfile pr;
  pr.config = cfg;
  pr.problem = p;
  pr.epsilon = cfg.epsilon;
  const int n = cfg.n_cells;
  const double R = cfg.domain_radius;
  pr.h = 2.0 * R / n;
  pr.xi_grid = linspace(-R, R, n + 1);
  pr.u_hat.assign(static_cast<std::size_t>(n) + 1, 0.0);

  if (p.u_minus == p.u_plus) {
    std::fill(pr.u_hat.begin(), pr.u_hat.end(), p.u_minus);
    return pr;
  }

  // continuation from the mu=0 solution u == 0; a failed increment is
  // bisected so the uniform grid points are still visited in order
  const double c = pr.h / (2.0 * cfg.epsilon);
  double mu_done = 0.0;
  for (int j = 1; j <= cfg.continuation_steps; ++j) {
    const double mu_target = static_cast<double>(j) / cfg.continuation_steps;
    while (mu_done < mu_target - 1e-15) {
      double step = mu_target - mu_done;
      bool ok = false;
      for (int split = 0; split < 10 && !ok; ++split) {
        std::vector<double> trial = pr.u_hat;
        if (detail::bvp_newton(pr.xi_grid, trial, mu_done + step, p, cfg, c)) {
          pr.u_hat.swap(trial);
          mu_done += step;
          ok = true;
        } else {
          step *= 0.5;
        }
      }
      if (!ok)
        throw NonConvergence("Newton continuation stalled near mu=" + std::to_string(mu_done) +
                             "; raise continuation_steps or n_cells");
    }
    mu_done = mu_target;
  }
  for (double u : pr.u_hat)
    if (!std::isfinite(u)) throw NonConvergence("non-finite profile value");
  return pr;
}

namespace detail {

inline double g_of(const SimilarityProfile& pr, double xi) {
  return pow_int(interp_at(pr.xi_grid, pr.u_hat, xi), pr.problem.k) - xi;
}

// bisection on the piecewise-linear profile until |g| meets tol
inline double refine_root(const SimilarityProfile& pr, double a, double b, double tol) {
  double ga = g_of(pr, a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g_of(pr, m);
    if (std::abs(gm) <= tol || b - a < 1e-300) return m;
    if ((ga > 0.0) == (gm > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline std::vector<double> locate_roots(const SimilarityProfile& pr) {
  const double tol = 1e-12 * (1.0 + pr.config.domain_radius);
  std::vector<double> roots;
  const auto& xi = pr.xi_grid;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    const double gi = g_of(pr, xi[i]);
    const double gj = g_of(pr, xi[i + 1]);
    if (gi == 0.0) {
      roots.push_back(xi[i]);
    } else if ((gi > 0.0) != (gj > 0.0)) {
      roots.push_back(refine_root(pr, xi[i], xi[i + 1], tol));
    }
  }
  if (g_of(pr, xi.back()) == 0.0) roots.push_back(xi.back());
  return roots;
}

// theta-detector for the fan case: the edge of the degenerate band, where
// |u^k - xi| has decayed to theta times its value at the exact corner
// abscissa u_{-+}^k.  The corner value scales like sqrt(eps), so the edges
// converge to the fan corners as eps -> 0.
constexpr double kFanBandTheta = 0.75;

}  // namespace detail

inline std::vector<double> find_singular_points(SimilarityProfile& pr) {
  const RiemannProblem& p = pr.problem;
  pr.interior_roots = detail::locate_roots(pr);
  if (pr.interior_roots.empty()) throw NoRoot("no sign change of u^k - xi on the grid");

  if (p.u_minus > p.u_plus) {
    if (pr.interior_roots.size() != 1)
      throw NoRoot("expected a unique singular point for decreasing data");
    pr.singular_points = {pr.interior_roots.front()};
    return pr.singular_points;
  }
  if (p.u_minus == p.u_plus) {
    pr.singular_points = {pr.interior_roots.front()};
    return pr.singular_points;
  }

  const double lo_corner = pow_int(p.u_minus, p.k);
  const double hi_corner = pow_int(p.u_plus, p.k);
  const double gl = detail::g_of(pr, lo_corner);   // > 0
  const double gr = detail::g_of(pr, hi_corner);   // < 0
  if (!(gl > 0.0) || !(gr < 0.0)) throw NoRoot("degenerate band detector lost its brackets");
  const double r0 = pr.interior_roots.front();
  const double r1 = pr.interior_roots.back();
  // g is monotone decreasing here; bisect g = theta * corner value
  double a = lo_corner, b = r0;
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (a + b);
    (detail::g_of(pr, m) > detail::kFanBandTheta * gl ? a : b) = m;
  }
  const double edge_lo = 0.5 * (a + b);
  a = r1, b = hi_corner;
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (a + b);
    (detail::g_of(pr, m) > detail::kFanBandTheta * gr ? a : b) = m;
  }
  const double edge_hi = 0.5 * (a + b);
  pr.singular_points = {edge_lo, edge_hi};
  return pr.singular_points;
}

namespace detail {

// integrand q = (u^k)'/(u^k - xi) evaluated from nodal data, with the
// derivative by central differences; sub-cell queries interpolate both parts
struct VIntegrand {
  std::vector<double> uk;   // u^k at nodes
  std::vector<double> duk;  // d(u^k)/dxi at nodes
  const SimilarityProfile* pr;

  explicit VIntegrand(const SimilarityProfile& prof) : pr(&prof) {
    const auto& xi = prof.xi_grid;
    const std::size_t m = xi.size();
    uk.resize(m);
    duk.resize(m);
    for (std::size_t i = 0; i < m; ++i) uk[i] = pow_int(prof.u_hat[i], prof.problem.k);
    const double h = prof.h;
    duk[0] = (uk[1] - uk[0]) / h;
    duk[m - 1] = (uk[m - 1] - uk[m - 2]) / h;
    for (std::size_t i = 1; i + 1 < m; ++i) duk[i] = (uk[i + 1] - uk[i - 1]) / (2.0 * h);
  }

  double q_node(std::size_t i) const {
    const double g = uk[i] - pr->xi_grid[i];
    if (duk[i] == 0.0) return 0.0;
    return duk[i] / g;
  }

  double q_at(double s) const {
    const double u = interp_at(pr->xi_grid, uk, s);
    const double d = interp_at(pr->xi_grid, duk, s);
    const double g = u - s;
    if (d == 0.0) return 0.0;
    return d / g;
  }

  // trapezoid over one grid cell, optionally split in 4 near a singular point
  double cell_integral(std::size_t i, bool refine) const {
    const double a = pr->xi_grid[i], b = pr->xi_grid[i + 1];
    if (!refine) return 0.5 * (b - a) * (q_node(i) + q_node(i + 1));
    double total = 0.0;
    double prev = q_node(i);
    for (int s = 1; s <= 4; ++s) {
      const double x = a + (b - a) * s / 4.0;
      const double cur = s == 4 ? q_node(i + 1) : q_at(x);
      total += 0.5 * (b - a) / 4.0 * (prev + cur);
      prev = cur;
    }
    return total;
  }
};

}  // namespace detail

inline SimilarityProfile& compute_v_profile(SimilarityProfile& pr) {
  const RiemannProblem& p = pr.problem;
  if (pr.singular_points.empty()) find_singular_points(pr);
  const auto& xi = pr.xi_grid;
  const std::size_t m = xi.size();
  const double h = pr.h;
  pr.v_hat.assign(m, 0.0);
  pr.v_capped.assign(m, 0);

  const detail::VIntegrand integ(pr);
  const auto near_root = [&](double s) {
    for (double r : pr.interior_roots)
      if (std::abs(s - r) <= h) return true;
    return false;
  };
  const auto adjacent_cell = [&](std::size_t i) {
    // cell [i, i+1] flanking the exclusion zone of some root
    const double a = xi[i], b = xi[i + 1];
    for (double r : pr.interior_roots) {
      const double d = std::min(std::abs(a - r), std::abs(b - r));
      if (d > h && d <= 2.0 * h) return true;
    }
    return false;
  };

  // left quadrature: v1(xi) = v_- exp(-int_{-R}^{xi} q)
  std::vector<double> I_left(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i)
    I_left[i + 1] = I_left[i] + integ.cell_integral(i, adjacent_cell(i));
  // right quadrature: v2(xi) = v_+ exp(+int_{xi}^{R} q)
  std::vector<double> I_right(m, 0.0);
  for (std::size_t i = m - 1; i-- > 0;)
    I_right[i] = I_right[i + 1] + integ.cell_integral(i, adjacent_cell(i));

  const double r_first = pr.interior_roots.front();
  const double r_last = pr.interior_roots.back();
  const bool fan = p.u_minus < p.u_plus;
  // the one-sided quadratures stop at the vacuum boundary: for a fan that is
  // the located singular pair, otherwise one cell around the root
  const double cut_lo = fan ? pr.singular_points.front() : r_first - h;
  const double cut_hi = fan ? pr.singular_points.back() : r_last + h;

  double cap_left = p.v_minus, cap_right = p.v_plus;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = xi[i];
    if (s >= cut_lo) break;
    pr.v_hat[i] = p.v_minus * std::exp(-I_left[i]);
    cap_left = pr.v_hat[i];
  }
  for (std::size_t i = m; i-- > 0;) {
    const double s = xi[i];
    if (s <= cut_hi) break;
    pr.v_hat[i] = p.v_plus * std::exp(I_right[i]);
    cap_right = pr.v_hat[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double s = xi[i];
    if (s < cut_lo || s > cut_hi) continue;
    pr.v_capped[i] = 1;
    // vacuum between the singular points of a fan; held boundary value in the
    // excluded cell around a shock root, where the true profile diverges
    pr.v_hat[i] = fan ? 0.0 : (s < r_first ? cap_left : cap_right);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!pr.v_capped[i] && !std::isfinite(pr.v_hat[i]))
      throw QuadratureFailure("non-finite density profile away from singular points");
  }
  return pr;
}

inline double v_hat_at(const SimilarityProfile& pr, double s) {
  if (pr.v_hat.empty()) throw ValidationError("density profile not computed");
  return interp_at(pr.xi_grid, pr.v_hat, s);
}

inline double u_hat_at(const SimilarityProfile& pr, double s) {
  return interp_at(pr.xi_grid, pr.u_hat, s);
}

// window mass of the excess density, int_{xi1}^{xi2} (v - step) dxi, by the
// exact boundary-term identity: (a v)' = -v with a = u^k - xi, and a v -> 0
// at the singular point from both sides, so
//   int = a(xi1) v(xi1) - a(xi2) v(xi2) - [v_-(xi_s - xi1) + v_+(xi2 - xi_s)].
// No quadrature crosses the singularity.
inline double measure_delta_weight(const SimilarityProfile& pr, double xi1, double xi2) {
  const RiemannProblem& p = pr.problem;
  if (p.u_minus == p.u_plus) throw ValidationError("no singular concentration for equal states");
  if (p.u_minus < p.u_plus) throw ValidationError("delta weight requires u_minus > u_plus");
  if (pr.v_hat.empty()) throw ValidationError("density profile not computed");
  if (!(xi1 < xi2)) throw ValidationError("window must be nonempty");
  const double R = pr.config.domain_radius;
  if (xi1 < -R || xi2 > R) throw ValidationError("window exceeds the domain");
  const double r = pr.singular_points.front();
  if (!(xi1 < r && r < xi2)) throw WindowExcludesSingularity("window must contain the singular point");
  if (std::abs(xi1 - r) <= 2.0 * pr.h || std::abs(xi2 - r) <= 2.0 * pr.h)
    throw ValidationError("window endpoints fall in the capped zone at the singular point");
  const auto a_of = [&](double s) { return pow_int(u_hat_at(pr, s), p.k) - s; };
  const double A1 = a_of(xi1) * v_hat_at(pr, xi1);
  const double A2 = -a_of(xi2) * v_hat_at(pr, xi2);
  return A1 + A2 - (p.v_minus * (r - xi1) + p.v_plus * (xi2 - r));
}

struct ProfileDiagnostics {
  bool monotone_ok = false;
  bool derivative_bound_ok = false;
  bool derivative_bound_applicable = true;
  bool uniqueness_ok = false;
  double max_path_disagreement = 0.0;
  double worst_bound_excess = 0.0;  // max(|u'| - bound), <= floor when ok
  bool all_ok() const { return monotone_ok && derivative_bound_ok && uniqueness_ok; }
};

// (a) node-to-node monotonicity, (b) the Gaussian-envelope derivative bound
// anchored at the steepest node xi*: u'(xi) = u'(xi*) exp(int (u^k - s)/eps),
// with u^k between u_+^k and u_-^k, so for xi >= xi*
//   |u'(xi)| <= |u'(xi*)| exp((2 u_-^k (xi - xi*) - (xi^2 - xi*^2))/(2 eps))
// and the mirrored form with u_+^k below xi* (shock layers only),
// (c) empirical uniqueness: three continuation paths must agree
inline ProfileDiagnostics validate_profile(const SimilarityProfile& pr) {
  const RiemannProblem& p = pr.problem;
  ProfileDiagnostics d;
  const auto& u = pr.u_hat;
  const auto& xi = pr.xi_grid;
  const std::size_t m = u.size();
  double umax = 0.0;
  for (double x : u) umax = std::max(umax, std::abs(x));
  const double tie_tol = 1e-12 * std::max(1.0, umax);

  d.monotone_ok = true;
  if (p.u_minus > p.u_plus) {
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (u[i + 1] - u[i] > tie_tol) d.monotone_ok = false;
  } else if (p.u_minus < p.u_plus) {
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (u[i] - u[i + 1] > tie_tol) d.monotone_ok = false;
  } else {
    for (double x : u)
      if (std::abs(x - p.u_minus) > tie_tol) d.monotone_ok = false;
  }

  d.derivative_bound_applicable = p.u_minus > p.u_plus;
  d.derivative_bound_ok = true;
  if (d.derivative_bound_applicable) {
    const double h = pr.h;
    std::vector<double> slope(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) slope[i] = std::abs(u[i + 1] - u[i - 1]) / (2.0 * h);
    std::size_t anchor = 1;
    for (std::size_t i = 1; i + 1 < m; ++i)
      if (slope[i] > slope[anchor]) anchor = i;
    const double du_star = slope[anchor];
    const double xs = xi[anchor];
    const double hi_k = pow_int(p.u_minus, p.k);
    const double lo_k = pow_int(p.u_plus, p.k);
    const double floor_fp = 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, umax) / h;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double xq = xi[i];
      const double expo = xq >= xs
                              ? (2.0 * hi_k * (xq - xs) - (xq * xq - xs * xs)) / (2.0 * pr.epsilon)
                              : (-2.0 * lo_k * (xs - xq) + (xs * xs - xq * xq)) / (2.0 * pr.epsilon);
      const double envelope = du_star * std::exp(expo);
      const double excess = slope[i] - (envelope * (1.0 + 1e-8) + floor_fp);
      worst = std::max(worst, excess);
      if (excess > 0.0) d.derivative_bound_ok = false;
    }
    d.worst_bound_excess = worst;
  }

  // three distinct continuation paths
  ProfileConfig c1 = pr.config, c2 = pr.config, c3 = pr.config;
  c2.continuation_steps = 2 * c1.continuation_steps + 1;
  c3.continuation_steps = std::max(3, static_cast<int>(std::ceil(1.7 * c1.continuation_steps)));
  double worst_dis = 0.0;
  const SimilarityProfile alt2 = solve_u_profile(p, c2);
  const SimilarityProfile alt3 = solve_u_profile(p, c3);
  for (std::size_t i = 0; i < m; ++i) {
    worst_dis = std::max(worst_dis, std::abs(pr.u_hat[i] - alt2.u_hat[i]));
    worst_dis = std::max(worst_dis, std::abs(pr.u_hat[i] - alt3.u_hat[i]));
    worst_dis = std::max(worst_dis, std::abs(alt2.u_hat[i] - alt3.u_hat[i]));
  }
  d.max_path_disagreement = worst_dis;
  d.uniqueness_ok = worst_dis <= 100.0 * pr.config.newton_tol;
  return d;
}

struct FlatnessRow {
  double epsilon = 0.0;
  double sup_u_left = 0.0;    // sup |u - u_-| left of the singular zone
  double sup_u_right = 0.0;   // sup |u - u_+| right of it
  double sup_du_left = 0.0;   // sup |u'|
  double sup_du_right = 0.0;
  double sup_v_left = 0.0;    // sup |v - v_-|
  double sup_v_right = 0.0;
  double mid_residual = std::numeric_limits<double>::quiet_NaN();  // fan only: sup |u^k - xi|
  double xi_lo = 0.0;
  double xi_hi = 0.0;
};

struct FlatnessReport {
  std::vector<FlatnessRow> rows;
  bool monotone = false;
  double eta = 0.0;
};

inline FlatnessRow flatness_row(const SimilarityProfile& pr, double eta) {
  const RiemannProblem& p = pr.problem;
  if (pr.v_hat.empty() || pr.singular_points.empty())
    throw ValidationError("flatness needs singular points and the density profile");
  const auto& xi = pr.xi_grid;
  const auto& u = pr.u_hat;
  const std::size_t m = xi.size();
  FlatnessRow row;
  row.epsilon = pr.epsilon;
  row.xi_lo = pr.singular_points.front();
  row.xi_hi = pr.singular_points.back();
  const bool fan = p.u_minus < p.u_plus;
  const double left_end = row.xi_lo - eta;
  const double right_start = row.xi_hi + eta;
  bool any_left = false, any_right = false, any_mid = !fan;
  if (fan) row.mid_residual = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double s = xi[i];
    const double du = std::abs(u[i + 1] - u[i - 1]) / (2.0 * pr.h);
    if (s <= left_end) {
      any_left = true;
      row.sup_u_left = std::max(row.sup_u_left, std::abs(u[i] - p.u_minus));
      row.sup_du_left = std::max(row.sup_du_left, du);
      if (!pr.v_capped[i]) row.sup_v_left = std::max(row.sup_v_left, std::abs(pr.v_hat[i] - p.v_minus));
    } else if (s >= right_start) {
      any_right = true;
      row.sup_u_right = std::max(row.sup_u_right, std::abs(u[i] - p.u_plus));
      row.sup_du_right = std::max(row.sup_du_right, du);
      if (!pr.v_capped[i]) row.sup_v_right = std::max(row.sup_v_right, std::abs(pr.v_hat[i] - p.v_plus));
    } else if (fan && s >= row.xi_lo + eta && s <= row.xi_hi - eta) {
      any_mid = true;
      row.mid_residual = std::max(row.mid_residual, std::abs(pow_int(u[i], p.k) - s));
    }
  }
  if (!any_left || !any_right || (fan && !any_mid))
    throw ValidationError("flatness window eta leaves an empty region");
  return row;
}

inline FlatnessReport limit_flatness_check(const RiemannProblem& p,
                                           const std::vector<double>& eps_sweep, double eta,
                                           ProfileConfig base) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  if (eps_sweep.empty()) throw ValidationError("empty epsilon sweep");
  FlatnessReport rep;
  rep.eta = eta;
  for (double eps : eps_sweep) {
    ProfileConfig cfg = base;
    cfg.epsilon = eps;
    cfg.n_cells = 0;  // re-derive resolution for each eps
    SimilarityProfile pr = solve_u_profile(p, cfg);
    find_singular_points(pr);
    compute_v_profile(pr);
    rep.rows.push_back(flatness_row(pr, eta));
  }
  const double umax_k = std::max(std::abs(pow_int(p.u_minus, p.k)), std::abs(pow_int(p.u_plus, p.k)));
  const double floor_abs = 1e-9 * (1.0 + umax_k);
  const auto column_monotone = [&](auto getter) {
    std::vector<double> col;
    for (const auto& r : rep.rows) col.push_back(getter(r));
    return monotone_decreasing_with_floor(col, floor_abs);
  };
  rep.monotone = column_monotone([](const FlatnessRow& r) { return r.sup_u_left; }) &&
                 column_monotone([](const FlatnessRow& r) { return r.sup_u_right; }) &&
                 column_monotone([](const FlatnessRow& r) { return r.sup_du_left; }) &&
                 column_monotone([](const FlatnessRow& r) { return r.sup_du_right; }) &&
                 column_monotone([](const FlatnessRow& r) { return r.sup_v_left; }) &&
                 column_monotone([](const FlatnessRow& r) { return r.sup_v_right; });
  if (p.u_minus < p.u_plus)
    rep.monotone =
        rep.monotone && column_monotone([](const FlatnessRow& r) { return r.mid_residual; });
  return rep;
}

}  // namespace dshock
