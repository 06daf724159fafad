#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace dshock {

// exact repeated product; k is small (wave-power exponent)
inline double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// x^{1/k}, signed for odd k; even k clamps tiny negative roundoff to 0
inline double signed_root(double x, int k) {
  if (k == 1) return x;
  if (k % 2 == 0) return std::pow(std::max(x, 0.0), 1.0 / k);
  return std::copysign(std::pow(std::abs(x), 1.0 / k), x);
}

// compensated accumulator for long mass sums
struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

inline std::vector<double> linspace(double a, double b, int n_nodes) {
  std::vector<double> x(static_cast<std::size_t>(n_nodes));
  const double h = (b - a) / (n_nodes - 1);
  for (int i = 0; i < n_nodes; ++i) x[static_cast<std::size_t>(i)] = a + h * i;
  x.back() = b;
  return x;
}

// linear interpolation on a sorted abscissa grid; clamps outside the range
inline double interp_at(const std::vector<double>& x, const std::vector<double>& y, double xq) {
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double w = (xq - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + w * (y[j] - y[j - 1]);
}

// trend check used by the sweep diagnostics: nonincreasing up to an absolute
// noise floor (symmetric configurations sit on the target exactly, so the
// tail of an error sequence is roundoff rather than signal)
inline bool monotone_decreasing_with_floor(const std::vector<double>& v, double floor_abs) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > std::max(v[i - 1], floor_abs)) return false;
  }
  return true;
}

inline bool is_finite(double x) { return std::isfinite(x); }

}  // namespace dshock
