#include <doctest.h>

#include <cmath>
#include <random>

#include "kinetic/analytic.hpp"
#include "kinetic/errors.hpp"

using namespace kinetic;

TEST_CASE("stationary_shear: gamma = 0 shuts the ferment off") {
  const StationaryShear s = stationary_shear(1.4, 0.8, 0.0, 0.3, 0.9);
  CHECK(norm_f(s.H) == 0.0);
  CHECK(s.B12 == 0.9);
}

TEST_CASE("stationary_shear: printed component formulas") {
  const double rho = 2.0, alpha = 0.5, gamma = 0.3, L12 = 0.7;
  const StationaryShear s = stationary_shear(rho, alpha, gamma, 0.0, L12);
  CHECK(s.H.yy == doctest::Approx(gamma * L12 * L12 / (4.0 * alpha * rho)).epsilon(1e-15));
  CHECK(s.H.xy ==
        doctest::Approx(-gamma * L12 * L12 * L12 / (4.0 * alpha * alpha * rho))
            .epsilon(1e-15));
  CHECK(s.H.xx == doctest::Approx(s.H.yy * (1.0 + 2.0 * L12 * L12 / (alpha * alpha)))
                      .epsilon(1e-15));
  CHECK(s.H.zz == 0.0);
  CHECK(s.H.xz == 0.0);
  CHECK(s.H.yz == 0.0);
}

TEST_CASE("stationary_shear: zero residual over random parameter draws") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(0.05, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const double rho = d(rng), alpha = d(rng), gamma = d(rng), eta3 = d(rng),
                 L12 = d(rng) - 1.5, Y33 = d(rng);
    const StationaryShear s = stationary_shear(rho, alpha, gamma, eta3, L12, Y33);
    const Ten2 L = L12 * outer(axis(0), axis(1));
    const Ten2 B = s.B12 * outer(axis(0), axis(1));
    const SymTen2 Y{0.0, 0.0, Y33, 0.0, 0.0, 0.0};
    const double scale = 1.0 + norm_f(s.H) * (1.0 + alpha) * rho + gamma;
    CHECK(algebraic_residual(rho, alpha, gamma, eta3, L, B, Y, s.H) < 1e-12 * scale);
  }
}

TEST_CASE("stationary_shear: alpha = 0 raises") {
  CHECK_THROWS_AS(stationary_shear(1.0, 0.0, 1.0, 0.0, 1.0), AlphaZero);
}

TEST_CASE("algebraic_residual: zero state, and the single-factor variant fails") {
  CHECK(algebraic_residual(1.0, 0.5, 0.3, 0.0, Ten2{}, Ten2{}, SymTen2{}, SymTen2{}) == 0.0);

  const double rho = 2.0, alpha = 0.5, gamma = 0.3, L12 = 0.7;
  StationaryShear s = stationary_shear(rho, alpha, gamma, 0.0, L12);
  SymTen2 Hv = s.H;
  Hv.xx = stationary_shear_h11_variant(rho, alpha, gamma, L12);
  const Ten2 L = L12 * outer(axis(0), axis(1));
  const SymTen2 Y{0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  const double res = algebraic_residual(rho, alpha, gamma, 0.0, L, L, Y, Hv);
  // the defect sits in the (1,1) slot with the value gamma L12^4 / (4 alpha^2)
  const double expect = gamma * std::pow(L12, 4) / (4.0 * alpha * alpha);
  CHECK(res == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("dispersion: endpoint cases and the generic quadratic") {
  SUBCASE("alpha = gamma_hat gives roots 0 and |u|/beta") {
    const DispersionResult d = dispersion(0.7, 1.4, 0.3, 0.3);
    CHECK(d.n_real == 2);
    CHECK(d.root_lo == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.root_hi == doctest::Approx(1.4 / 0.7).epsilon(1e-14));
  }
  SUBCASE("upper endpoint gives the double root |u|/(2 beta)") {
    const double beta = 0.8, u = 1.2, gh = 0.4;
    const DispersionResult d = dispersion(beta, u, gh + u * u / (4.0 * beta), gh);
    CHECK(d.n_real == 1);
    CHECK(d.root_lo == doctest::Approx(u / (2.0 * beta)).epsilon(1e-13));
    CHECK(d.regime == DispersionResult::Regime::at_upper_endpoint);
  }
  SUBCASE("beta=1, |u|=3, alpha-gamma_hat=2 gives roots 1 and 2") {
    const DispersionResult d = dispersion(1.0, 3.0, 2.0, 0.0);
    CHECK(d.n_real == 2);
    CHECK(d.root_lo == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.root_hi == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(d.regime == DispersionResult::Regime::inside_interval);
  }
  SUBCASE("above the interval there is no real decay mode") {
    const DispersionResult d = dispersion(1.0, 1.0, 10.0, 0.0);
    CHECK(d.n_real == 0);
    CHECK(d.regime == DispersionResult::Regime::above_interval);
  }
  SUBCASE("random draws: every reported root satisfies the quadratic") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> d01(0.05, 2.0);
    for (int n = 0; n < 1000; ++n) {
      const double beta = d01(rng), u = d01(rng), alpha = d01(rng), gh = d01(rng);
      const DispersionResult d = dispersion(beta, u, alpha, gh);
      const double scale = 1.0 + beta + u + std::abs(alpha - gh);
      if (d.n_real >= 1) {
        for (double z : {d.root_lo, d.root_hi}) {
          const double res = beta * z * z - u * z + alpha - gh;
          CHECK(std::abs(res) < 1e-12 * scale);
        }
      }
    }
  }
}

TEST_CASE("example4_alpha_zero: determined component and the stuck equation") {
  SUBCASE("gamma = 0 is consistent") {
    const AlphaZeroShear a = example4_alpha_zero(1.0, 0.0, 1.0, 1.0);
    CHECK(a.H12 == 0.0);
    CHECK(a.residual_22 == 0.0);
    CHECK(a.consistent);
  }
  SUBCASE("gamma > 0 determines H12 but leaves the (2,2) defect") {
    const double rho = 1.3, gamma = 0.8, u = 1.1, delta = 0.9;
    const AlphaZeroShear a = example4_alpha_zero(rho, gamma, u, delta);
    const double L12 = u / delta;
    CHECK(a.H12 == doctest::Approx(gamma * L12 / (8.0 * rho)).epsilon(1e-15));
    // the (1,1) equation closes: 2 rho L12 H12 = gamma L12^2 / 4
    CHECK(2.0 * rho * L12 * a.H12 == doctest::Approx(gamma * L12 * L12 / 4.0));
    CHECK(a.residual_22 == doctest::Approx(gamma * L12 * L12 / 4.0));
    CHECK(!a.consistent);
  }
}

TEST_CASE("example fields: wall observables") {
  ExampleParams p;
  p.rho = 1.7;
  p.v = {0.0, 1.2, 0.0};
  CHECK(example1_wall_pressure(p) == doctest::Approx(1.7 * 1.44).epsilon(1e-15));

  p.u_mag = 1.0;
  p.delta = 0.5;
  p.alpha = 0.6;
  p.gamma = 0.9;
  const SymTen2 extra = example4_extra_stress(p);
  const double u2d2 = p.u_mag * p.u_mag / (p.delta * p.delta);
  const double expect_11 = -(p.gamma / (4.0 * p.alpha)) * u2d2 *
                           (1.0 + 2.0 * u2d2 / (p.alpha * p.alpha));
  CHECK(extra.xx == doctest::Approx(expect_11).epsilon(1e-13));
  CHECK(extra.yy == doctest::Approx(-(p.gamma / (4.0 * p.alpha)) * u2d2).epsilon(1e-13));
  const double expect_12 = (p.gamma / (4.0 * p.alpha * p.alpha)) * u2d2 * p.u_mag / p.delta;
  CHECK(extra.xy == doctest::Approx(expect_12).epsilon(1e-13));
}

TEST_CASE("example fields: exponential evaluations") {
  ExampleParams p;
  p.rho = 1.0;
  p.v = {0.0, 0.8, 0.0};
  p.alpha = 1.3;
  SUBCASE("temporal decay at alpha tau = 1") {
    const PointState s = example_point(ExampleFlow::decay_temporal, p, 0.0, 0.0, 1.0 / 1.3);
    CHECK(s.H.yy == doctest::Approx(0.64 * std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("spatial decay uses alpha/|u|") {
    p.u = {2.0, 0.0, 0.0};
    const PointState s = example_point(ExampleFlow::decay_spatial, p, 1.0, 0.0, 0.0);
    CHECK(s.H.yy == doctest::Approx(0.64 * std::exp(-p.alpha / 2.0)).epsilon(1e-14));
  }
}

TEST_CASE("continuous residuals vanish for consistent parameters") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> pt(0.1, 0.9);
  ExampleParams p;
  p.rho = 1.2;
  p.v = {0.0, 0.9, 0.0};

  SUBCASE("steady bounce") {
    p.u = {0.5, 0.0, 0.0};
    for (int n = 0; n < 20; ++n)
      CHECK(example_continuous_residual(ExampleFlow::steady_bounce, p, pt(rng), pt(rng),
                                        pt(rng)) == 0.0);
  }
  SUBCASE("spatial decay") {
    p.u = {0.7, 0.0, 0.0};
    p.alpha = 0.9;
    for (int n = 0; n < 20; ++n)
      CHECK(example_continuous_residual(ExampleFlow::decay_spatial, p, pt(rng), pt(rng),
                                        pt(rng)) < 1e-14);
  }
  SUBCASE("temporal decay") {
    p.alpha = 0.9;
    for (int n = 0; n < 20; ++n)
      CHECK(example_continuous_residual(ExampleFlow::decay_temporal, p, pt(rng), pt(rng),
                                        pt(rng)) < 1e-14);
  }
  SUBCASE("wall-loss mode balances when alpha = gamma_hat and u flows upstream") {
    p.alpha = 0.3;
    p.gamma_hat = 0.3;
    p.beta = 0.5;
    p.u = {-0.5, 0.0, 0.0};
    p.zeta = 0.5 / p.beta;  // |u| / beta
    p.chi0 = 1.0;
    for (int n = 0; n < 20; ++n)
      CHECK(example_continuous_residual(ExampleFlow::wall_loss, p, pt(rng), pt(rng),
                                        pt(rng)) < 1e-13);
  }
  SUBCASE("couette carries the stationary shear") {
    p.u_mag = 0.8;
    p.delta = 1.0;
    p.alpha = 0.5;
    p.gamma = 0.4;
    p.Y33 = 0.7;
    for (int n = 0; n < 20; ++n)
      CHECK(example_continuous_residual(ExampleFlow::couette, p, pt(rng), pt(rng),
                                        pt(rng)) < 1e-13);
  }
}

TEST_CASE("verify_against_solver: identical fields give zero norms") {
  ExampleParams p;
  p.rho = 1.1;
  p.u = {0.4, 0.0, 0.0};
  p.v = {0.0, 0.6, 0.0};
  const Grid g{8, 4, 0.25, 0.25};
  FieldState f = example_fields(ExampleFlow::steady_bounce, p, g, 0.0);
  const ErrorNorms e = verify_against_solver(ExampleFlow::steady_bounce, p, f);
  CHECK(e.linf_rho == 0.0);
  CHECK(e.linf_u == 0.0);
  CHECK(e.linf_H == 0.0);
  CHECK(e.l2_H == 0.0);
}

TEST_CASE("verify_against_solver: grid mismatch raises") {
  ExampleParams p;
  const Grid g1{8, 4, 0.25, 0.25};
  const Grid g2{4, 4, 0.5, 0.25};
  FieldState a = example_fields(ExampleFlow::steady_bounce, p, g1, 0.0);
  FieldState b = example_fields(ExampleFlow::steady_bounce, p, g2, 0.0);
  CHECK_THROWS_AS(compare_states(a, b), ShapeMismatch);
}
