// Regularized self-similar profile at one viscosity: solves the two-point
// boundary value problem, locates the singular point, and reports the window
// mass around it next to the closed-form weight.

#include <dshock/dshock.hpp>

#include <cstdio>

int main() {
  const dshock::RiemannProblem p{2.0, 1.0, 1.0, -1.0, 1, 0.0};
  dshock::ProfileConfig cfg;
  cfg.epsilon = 0.01;

  dshock::SimilarityProfile pr = dshock::solve_u_profile(p, cfg);
  const double root = dshock::find_singular_points(pr).front();
  dshock::compute_v_profile(pr);

  const double sigma = dshock::shock_speed_sigma(p.u_minus, p.u_plus, p.k);
  const double w0 = dshock::delta_weight_w0(p, sigma);
  const double w = dshock::measure_delta_weight(pr, root - 1.0, root + 1.0);

  std::printf("epsilon        %g\n", pr.epsilon);
  std::printf("sigma          %.6f\n", sigma);
  std::printf("singular point %.6f\n", root);
  std::printf("window mass    %.6f\n", w);
  std::printf("weight w0      %.6f\n", w0);

  const dshock::ProfileDiagnostics d = dshock::validate_profile(pr);
  std::printf("validator      monotone %d, derivative bound %d, uniqueness %d\n",
              d.monotone_ok ? 1 : 0, d.derivative_bound_ok ? 1 : 0, d.uniqueness_ok ? 1 : 0);
  return 0;
}
