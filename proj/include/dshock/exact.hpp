#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "problem.hpp"

namespace dshock {

// S(t) = (1 - e^{-alpha k t})/(alpha k), the damped clock that replaces t in
// every wave path; S(t) -> t as alpha k -> 0.  expm1 keeps the small-argument
// regime exact where the naive form cancels.
inline double damped_time_scale(double t, double alpha, int k) {
  const double z = alpha * k * t;
  if (z == 0.0) return t;
  return t * (-std::expm1(-z) / z);
}

// discontinuity speed in the similarity variable:
// sigma = (1/(k+1)) sum_{j=0}^{k} u_-^{k-j} u_+^j, the unique value with
// sigma (u_- - u_+) = (u_-^{k+1} - u_+^{k+1})/(k+1)
inline double shock_speed_sigma(double u_minus, double u_plus, int k) {
  double s = 0.0;
  for (int j = 0; j <= k; ++j) s += pow_int(u_minus, k - j) * pow_int(u_plus, j);
  return s / (k + 1);
}

// asymptotic Dirac weight w0 = -sigma [v] + [v u^k]; positive for delta-shock
// data (both entropy margins positive and v > 0).  A contact carries no mass,
// and the formula collapses to exactly 0 there; fans are rejected.
inline double delta_weight_w0(const RiemannProblem& p, double sigma) {
  if (classify(p) == WaveClassification::RarefactionFan)
    throw ValidationError("delta weight requires u_minus >= u_plus");
  return -sigma * (p.v_minus - p.v_plus) +
         (p.v_minus * pow_int(p.u_minus, p.k) - p.v_plus * pow_int(p.u_plus, p.k));
}

struct ExactSolution {
  WaveClassification classification{};
  double sigma = 0.0;
  double w0 = 0.0;  // 0 unless DeltaShock
  RiemannProblem problem;
};

inline ExactSolution solve_exact(const RiemannProblem& p) {
  validate(p);
  ExactSolution ex;
  ex.classification = classify(p);
  ex.sigma = shock_speed_sigma(p.u_minus, p.u_plus, p.k);
  ex.w0 = ex.classification == WaveClassification::DeltaShock ? delta_weight_w0(p, ex.sigma) : 0.0;
  ex.problem = p;
  return ex;
}

// x(t) = sigma S(t)
inline double shock_position(const RiemannProblem& p, double sigma, double t) {
  if (t < 0.0) throw ValidationError("shock_position requires t >= 0");
  return sigma * damped_time_scale(t, p.alpha, p.k);
}

// w(t) = w0 S(t); nondecreasing, saturating at w0/(alpha k)
inline double delta_weight_at(const RiemannProblem& p, double w0, double t) {
  if (t < 0.0) throw ValidationError("delta_weight_at requires t >= 0");
  return w0 * damped_time_scale(t, p.alpha, p.k);
}

// xi = x / S(t); the alpha k -> 0 limit is x/t
inline double similarity_xi(double x, double t, double alpha, int k) {
  if (!(t > 0.0)) throw ValidationError("similarity variable requires t > 0");
  return x / damped_time_scale(t, alpha, k);
}

// inverse of (v,u) = (v_hat, u_hat e^{-alpha t})
inline std::pair<double, double> undo_damping_transform(double v_hat, double u_hat, double t,
                                                        double alpha) {
  return {v_hat, u_hat * std::exp(-alpha * t)};
}

struct StateSample {
  double v_regular = 0.0;
  double u = 0.0;
  bool on_singular_support = false;
  double delta_weight = 0.0;  // meaningful only on the singular support
  bool extrapolated = false;       // set for the contact case
};

inline StateSample evaluate_exact(const RiemannProblem& p, double x, double t) {
  if (!(t > 0.0)) throw ValidationError("evaluate_exact requires t > 0");
  const double decay = std::exp(-p.alpha * t);
  const auto cls = classify(p);
  const double sigma = shock_speed_sigma(p.u_minus, p.u_plus, p.k);
  const double S = damped_time_scale(t, p.alpha, p.k);

  StateSample s;
  if (cls == WaveClassification::DeltaShock) {
    const double xs = sigma * S;
    if (x < xs) {
      s.v_regular = p.v_minus;
      s.u = p.u_minus * decay;
    } else if (x > xs) {
      s.v_regular = p.v_plus;
      s.u = p.u_plus * decay;
    } else {
      s.on_singular_support = true;
      s.v_regular = 0.0;
      s.u = signed_root(sigma, p.k) * decay;
      s.delta_weight = delta_weight_at(p, delta_weight_w0(p, sigma), t);
    }
    return s;
  }
  if (cls == WaveClassification::RarefactionFan) {
    const double xi = x / S;
    const double lo = pow_int(p.u_minus, p.k);
    const double hi = pow_int(p.u_plus, p.k);
    if (xi < lo) {
      s.v_regular = p.v_minus;
      s.u = p.u_minus * decay;
    } else if (xi > hi) {
      s.v_regular = p.v_plus;
      s.u = p.u_plus * decay;
    } else {
      s.v_regular = 0.0;  // vacuum inside the fan
      s.u = signed_root(xi, p.k) * decay;
    }
    return s;
  }
  // contact: the v-jump rides the degenerate characteristic at speed u^k;
  // outside the two analyzed wave families, flagged as extrapolated
  const double xc = pow_int(p.u_minus, p.k) * S;
  s.v_regular = x < xc ? p.v_minus : p.v_plus;
  s.u = p.u_minus * decay;
  s.extrapolated = true;
  return s;
}

struct EntropySample {
  double t = 0.0;
  double lower = 0.0;   // u_+^k e^{-alpha k t}
  double speed = 0.0;   // sigma  e^{-alpha k t}
  double upper = 0.0;   // u_-^k e^{-alpha k t}
  bool ok = false;
};

struct EntropyReport {
  std::vector<EntropySample> samples;
  bool all_ok = true;
};

// Lax admissibility for the delta shock: characteristics on both sides run
// into the discontinuity, u_+^k e^{-alpha k t} < dx/dt < u_-^k e^{-alpha k t}
// with dx/dt = sigma e^{-alpha k t}.  All three share the same decay factor,
// so the margins are the t=0 margins scaled by e^{-alpha k t}.
inline EntropyReport entropy_check(const RiemannProblem& p, double sigma,
                                   const std::vector<double>& t_samples) {
  if (classify(p) != WaveClassification::DeltaShock)
    throw ValidationError("entropy check applies to delta-shock data only");
  EntropyReport r;
  for (double t : t_samples) {
    EntropySample s;
    s.t = t;
    const double decay = std::exp(-p.alpha * p.k * t);
    s.lower = pow_int(p.u_plus, p.k) * decay;
    s.speed = sigma * decay;
    s.upper = pow_int(p.u_minus, p.k) * decay;
    s.ok = s.lower < s.speed && s.speed < s.upper;
    r.all_ok = r.all_ok && s.ok;
    r.samples.push_back(s);
  }
  return r;
}

}  // namespace dshock
