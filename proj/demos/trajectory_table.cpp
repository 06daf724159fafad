// Closed-form delta-shock trajectory for a damped Riemann problem: prints
// position, concentrated mass, and the entropy margins over a few times.

#include <dshock/dshock.hpp>

#include <cstdio>

int main() {
  const dshock::RiemannProblem p{1.0, 1.0, 2.0, 0.0, 1, 1.0};
  const dshock::ExactSolution ex = dshock::solve_exact(p);
  std::printf("sigma = %.6f, w0 = %.6f, class = %s\n", ex.sigma, ex.w0,
              dshock::to_string(ex.classification));
  std::printf("%8s %12s %12s %12s %12s\n", "t", "x(t)", "w(t)", "lower", "upper");
  for (double t : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) {
    const double x = dshock::shock_position(p, ex.sigma, t);
    const double w = dshock::delta_weight_at(p, ex.w0, t);
    const auto rep = dshock::entropy_check(p, ex.sigma, {t});
    std::printf("%8.2f %12.6f %12.6f %12.6f %12.6f\n", t, x, w, rep.samples[0].lower,
                rep.samples[0].upper);
  }
  return 0;
}
