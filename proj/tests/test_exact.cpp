#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <dshock/exact.hpp>

#include "oracles.hpp"

using namespace dshock;

namespace {

RiemannProblem delta_problem(double vm, double vp, double um, double up, int k, double alpha) {
  RiemannProblem p;
  p.v_minus = vm;
  p.v_plus = vp;
  p.u_minus = um;
  p.u_plus = up;
  p.k = k;
  p.alpha = alpha;
  return p;
}

}  // namespace

TEST_CASE("shock speed equals the flux-jump ratio") {
  CHECK(shock_speed_sigma(2.0, 0.0, 1) == Catch::Approx(1.0).margin(1e-15));
  CHECK(shock_speed_sigma(1.0, -1.0, 1) == Catch::Approx(0.0).margin(1e-15));
  CHECK(shock_speed_sigma(2.0, 1.0, 2) == Catch::Approx(7.0 / 3.0).epsilon(1e-15));

  std::mt19937 rng(20250811u);
  std::uniform_real_distribution<double> state(-5.0, 5.0);
  std::uniform_int_distribution<int> kk(1, 7);
  for (int i = 0; i < 2000; ++i) {
    const int k = kk(rng);
    double um = state(rng), up = state(rng);
    if (k % 2 == 0) {
      um = std::abs(um);
      up = std::abs(up);
    }
    if (um == up) continue;
    const double sigma = shock_speed_sigma(um, up, k);
    const double ref = oracle::sigma_jump_ratio(um, up, k);
    const double scale = std::max(1.0, std::max(std::abs(um), std::abs(up)));
    CHECK(std::abs(sigma - ref) <= 1e-12 * oracle::powi(scale, k));
  }
}

TEST_CASE("damped time scale") {
  CHECK(damped_time_scale(0.7, 0.0, 3) == 0.7);
  CHECK(damped_time_scale(0.0, 1.0, 1) == 0.0);
  // continuous through alpha k t -> 0
  CHECK(damped_time_scale(0.5, 1e-12, 2) == Catch::Approx(0.5).epsilon(1e-11));
  // closed form at moderate argument
  CHECK(damped_time_scale(1.0, 1.0, 1) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  // monotone in t, bounded by both t and the saturation value
  double prev = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    const double s = damped_time_scale(t, 0.5, 2);
    CHECK(s > prev);
    CHECK(s <= t);
    CHECK(s <= 1.0);  // 1/(alpha k) = 1; rounds to the bound once e^{-z} underflows
    prev = s;
  }
  CHECK(damped_time_scale(1e4, 0.5, 2) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification and validation") {
  CHECK(classify(delta_problem(1, 1, 2, 0, 1, 0)) == WaveClassification::DeltaShock);
  CHECK(classify(delta_problem(1, 1, 0, 1, 1, 0)) == WaveClassification::RarefactionFan);
  CHECK(classify(delta_problem(1, 2, 1, 1, 1, 0)) == WaveClassification::Contact);

  CHECK_THROWS_AS(validate(delta_problem(0, 1, 1, 0, 1, 0)), ValidationError);
  CHECK_THROWS_AS(validate(delta_problem(1, -1, 1, 0, 1, 0)), ValidationError);
  CHECK_THROWS_AS(validate(delta_problem(1, 1, -1, -2, 2, 0)), ValidationError);
  CHECK_THROWS_WITH(validate(delta_problem(1, 1, -1, -2, 2, 0)),
                    Catch::Matchers::ContainsSubstring("even k"));
  CHECK_THROWS_AS(validate(delta_problem(1, 1, 1, 0, 0, 0)), ValidationError);
  CHECK_THROWS_AS(validate(delta_problem(1, 1, 1, 0, 1, -0.5)), ValidationError);
  RiemannProblem nan = delta_problem(1, 1, 1, 0, 1, 0);
  nan.u_minus = std::nan("");
  CHECK_THROWS_AS(validate(nan), ValidationError);
}

TEST_CASE("shock position against RK4 integration of the speed") {
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> U(0.1, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double um = U(rng) + 1.0, up = um - U(rng);
    const int k = 1 + static_cast<int>(U(rng));
    const auto p = delta_problem(1, 1, um, up, k, U(rng));
    const double sigma = shock_speed_sigma(um, up, k);
    const double t = U(rng);
    const double ref = oracle::position_rk4(sigma, p.alpha, k, t);
    CHECK(shock_position(p, sigma, t) == Catch::Approx(ref).margin(1e-10 * (1.0 + std::abs(sigma) * t)));
  }
}

TEST_CASE("vanishing damping recovers the linear trajectory") {
  const auto base = delta_problem(1, 1, 2, 0, 1, 0);
  const double sigma = 1.0;
  for (double alpha : {1e-2, 1e-4, 1e-6}) {
    auto p = base;
    p.alpha = alpha;
    for (double t : {0.25, 0.5, 1.0}) {
      const double dev = std::abs(shock_position(p, sigma, t) - sigma * t);
      CHECK(dev <= 0.51 * sigma * alpha * p.k * t * t);  // |S(t)-t| <= alpha k t^2/2
    }
  }
}

TEST_CASE("delta weight closed forms") {
  const auto sym = delta_problem(1, 1, 2, 0, 1, 1);
  const ExactSolution es = solve_exact(sym);
  CHECK(es.sigma == Catch::Approx(1.0));
  CHECK(es.w0 == Catch::Approx(2.0));
  CHECK(delta_weight_at(sym, es.w0, 1.0) == Catch::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));

  const auto asym = delta_problem(2, 1, 1, -1, 1, 0.5);
  const ExactSolution ea = solve_exact(asym);
  CHECK(ea.sigma == Catch::Approx(0.0).margin(1e-15));
  CHECK(ea.w0 == Catch::Approx(3.0));

  // monotone growth, saturation at w0/(alpha k)
  double prev = delta_weight_at(sym, es.w0, 0.0);
  CHECK(prev == 0.0);
  for (double t : {0.1, 0.3, 1.0, 3.0, 30.0}) {
    const double w = delta_weight_at(sym, es.w0, t);
    CHECK(w > prev);
    prev = w;
  }
  CHECK(delta_weight_at(sym, es.w0, 1e3) == Catch::Approx(es.w0 / (sym.alpha * sym.k)).epsilon(1e-12));

  CHECK_THROWS_AS(delta_weight_w0(delta_problem(1, 1, 0, 1, 1, 0), 0.5), ValidationError);
  // equal states carry no concentration: the formula collapses to zero
  CHECK(delta_weight_w0(delta_problem(1, 2, 1, 1, 1, 0), 1.0) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("pointwise exact solution, delta case") {
  const auto p = delta_problem(1, 2, 2, 0, 1, 1);
  const ExactSolution ex = solve_exact(p);
  const double t = 0.8;
  const double xs = shock_position(p, ex.sigma, t);
  const double decay = std::exp(-p.alpha * t);

  const StateSample left = evaluate_exact(p, xs - 0.1, t);
  CHECK(left.v_regular == 1.0);
  CHECK(left.u == Catch::Approx(2.0 * decay));
  CHECK_FALSE(left.on_singular_support);

  const StateSample right = evaluate_exact(p, xs + 0.1, t);
  CHECK(right.v_regular == 2.0);
  CHECK(right.u == Catch::Approx(0.0).margin(1e-300));

  const StateSample on = evaluate_exact(p, xs, t);
  CHECK(on.on_singular_support);
  CHECK(on.delta_weight == Catch::Approx(delta_weight_at(p, ex.w0, t)));
  CHECK(on.u <= left.u);
  CHECK(on.u >= right.u);
  // on the support, u is the damped value whose k-th power is the speed
  CHECK(on.u == Catch::Approx(signed_root(ex.sigma, p.k) * decay));

  CHECK_THROWS_AS(evaluate_exact(p, 0.0, 0.0), ValidationError);
}

TEST_CASE("pointwise exact solution, fan case") {
  const auto p = delta_problem(1, 1, 0, 1, 1, 1);
  const double t = 1.0;
  const double S = damped_time_scale(t, p.alpha, p.k);
  const double decay = std::exp(-p.alpha * t);

  // plateaus outside the fan
  CHECK(evaluate_exact(p, -0.5, t).u == Catch::Approx(0.0).margin(1e-300));
  CHECK(evaluate_exact(p, -0.5, t).v_regular == 1.0);
  CHECK(evaluate_exact(p, S + 0.2, t).u == Catch::Approx(decay));
  // vacuum and self-similar u inside
  const double xin = 0.25 * S;
  const StateSample mid = evaluate_exact(p, xin, t);
  CHECK(mid.v_regular == 0.0);
  CHECK(mid.u == Catch::Approx(0.25 * decay));
  // continuity across both edges
  for (double edge : {0.0, S}) {
    const double ul = evaluate_exact(p, edge - 1e-9, t).u;
    const double ur = evaluate_exact(p, edge + 1e-9, t).u;
    CHECK(std::abs(ul - ur) <= 1e-7);
  }
  // undamped similarity form maps back through the transform
  const double xi = similarity_xi(xin, t, p.alpha, p.k);
  const auto [v_back, u_back] = undo_damping_transform(0.0, signed_root(xi, p.k), t, p.alpha);
  CHECK(v_back == 0.0);
  CHECK(u_back == Catch::Approx(mid.u));

  // homogeneous fan: alpha = 0 gives (x/t)^{1/k}
  const auto p0 = delta_problem(1, 1, 0, 1, 2, 0);
  const StateSample h = evaluate_exact(p0, 0.49, 1.0);
  CHECK(h.u == Catch::Approx(std::sqrt(0.49)).epsilon(1e-14));
}

TEST_CASE("pointwise exact solution, contact case") {
  const auto p = delta_problem(1, 3, 1.5, 1.5, 2, 0.7);
  const double t = 0.6;
  const double S = damped_time_scale(t, p.alpha, p.k);
  const double xc = oracle::powi(1.5, 2) * S;
  CHECK(evaluate_exact(p, xc - 0.01, t).v_regular == 1.0);
  CHECK(evaluate_exact(p, xc + 0.01, t).v_regular == 3.0);
  CHECK(evaluate_exact(p, xc - 0.01, t).u == Catch::Approx(1.5 * std::exp(-p.alpha * t)));
  CHECK(evaluate_exact(p, xc + 0.01, t).extrapolated);
}

TEST_CASE("entropy margins scale with the degenerate eigenvalue") {
  const auto p = delta_problem(1, 1, 2, 0, 1, 1);
  const EntropyReport rep = entropy_check(p, 1.0, {0.0, 1.0, 10.0});
  REQUIRE(rep.samples.size() == 3);
  CHECK(rep.all_ok);
  for (const auto& s : rep.samples) {
    CHECK(s.lower < s.speed);
    CHECK(s.speed < s.upper);
  }
  // the three quantities share one decay factor
  const double f = rep.samples[1].upper / rep.samples[0].upper;
  CHECK(f == Catch::Approx(std::exp(-p.alpha * p.k * 1.0)).epsilon(1e-13));
  CHECK(rep.samples[1].speed / rep.samples[0].speed == Catch::Approx(f).epsilon(1e-13));

  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> U(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const int k = 1 + (i % 5);
    double um = U(rng) + 0.1, up = um - U(rng) - 1e-3;
    if (k % 2 == 0 && up < 0.0) up = 0.0;
    if (!(um > up)) continue;
    auto q = delta_problem(1, 2, um, up, k, U(rng));
    const EntropyReport r = entropy_check(q, shock_speed_sigma(um, up, k), {0.0, 1.0, 10.0});
    CHECK(r.all_ok);
  }
}

TEST_CASE("similarity variable inverts the trajectory map") {
  const auto p = delta_problem(1, 1, 2, 0, 1, 0.3);
  const double sigma = 1.0;
  for (double t : {0.2, 1.0, 5.0}) {
    CHECK(similarity_xi(shock_position(p, sigma, t), t, p.alpha, p.k) ==
          Catch::Approx(sigma).epsilon(1e-13));
  }
  CHECK_THROWS_AS(similarity_xi(0.0, 0.0, 1.0, 1), ValidationError);
}
