#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"
#include "numerics.hpp"

namespace dshock {

// Riemann data for the damped system
//   u_t + (u^{k+1}/(k+1))_x = -alpha u
//   v_t + (v u^k)_x        = 0
// with (v,u) = (v_-,u_-) for x<0 and (v_+,u_+) for x>0.
struct RiemannProblem {
  double v_minus = 1.0;
  double v_plus = 1.0;
  double u_minus = 0.0;
  double u_plus = 0.0;
  int k = 1;
  double alpha = 0.0;

  friend bool operator==(const RiemannProblem&, const RiemannProblem&) = default;
};

enum class WaveClassification { DeltaShock, RarefactionFan, Contact };

inline const char* to_string(WaveClassification c) {
  switch (c) {
    case WaveClassification::DeltaShock: return "delta-shock";
    case WaveClassification::RarefactionFan: return "rarefaction-fan";
    case WaveClassification::Contact: return "contact";
  }
  return "?";
}

inline void validate(const RiemannProblem& p) {
  if (!(std::isfinite(p.v_minus) && std::isfinite(p.v_plus) && std::isfinite(p.u_minus) &&
        std::isfinite(p.u_plus) && std::isfinite(p.alpha)))
    throw ValidationError("problem fields must be finite");
  if (!(p.v_minus > 0.0) || !(p.v_plus > 0.0))
    throw ValidationError("densities v_minus, v_plus must be positive");
  if (p.k < 1) throw ValidationError("k must be a positive integer");
  if (p.alpha < 0.0) throw ValidationError("alpha must be nonnegative");
  // even k: the eigenvalue u^k is non-monotone in u and the fan inverse
  // xi^{1/k} needs xi >= 0, so negative states are rejected outright
  if (p.k % 2 == 0 && (p.u_minus < 0.0 || p.u_plus < 0.0))
    throw ValidationError("even k requires nonnegative states");
}

inline WaveClassification classify(const RiemannProblem& p) {
  if (p.u_minus > p.u_plus) return WaveClassification::DeltaShock;
  if (p.u_minus < p.u_plus) return WaveClassification::RarefactionFan;
  return WaveClassification::Contact;
}

}  // namespace dshock
