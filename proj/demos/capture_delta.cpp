// Finite-volume capture of a concentrating discontinuity: evolves the damped
// system to t = 1 and compares the measured mass and position with the closed
// forms.

#include <dshock/dshock.hpp>

#include <cstdio>

int main() {
  const dshock::RiemannProblem p{1.0, 1.0, 2.0, 0.0, 1, 1.0};
  const dshock::ExactSolution ex = dshock::solve_exact(p);

  dshock::FvState st = dshock::init_riemann(dshock::FvGrid::make(-2.0, 2.0, 2000), p);
  const auto rows = dshock::run_until(st, p, 1.0, 0.45, {0.25, 0.5});

  std::printf("%8s %14s %14s %14s %14s\n", "t", "x measured", "x exact", "mass measured",
              "mass exact");
  for (const auto& r : rows) {
    if (!r.shock_measured) continue;
    std::printf("%8.2f %14.6f %14.6f %14.6f %14.6f\n", r.t, r.shock_position,
                dshock::shock_position(p, ex.sigma, r.t), r.shock_mass,
                dshock::delta_weight_at(p, ex.w0, r.t));
  }
  return 0;
}
