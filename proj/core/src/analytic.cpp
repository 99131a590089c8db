#include "kinetic/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "kinetic/errors.hpp"

namespace kinetic {

StationaryShear stationary_shear(double rho, double alpha, double gamma, double eta3,
                                 double L12, double Y33) {
  if (!(rho > 0.0)) throw PreconditionViolated("stationary_shear: rho must be positive");
  if (alpha == 0.0)
    throw AlphaZero("stationary_shear: alpha = 0 degenerates the algebra; "
                    "use example4_alpha_zero");
  StationaryShear s;
  s.rho = rho;
  s.alpha = alpha;
  s.gamma = gamma;
  s.eta3 = eta3;
  s.L12 = L12;
  s.B12 = L12;
  s.Y33 = Y33;
  const double l2 = L12 * L12;
  s.H.yy = gamma * l2 / (4.0 * alpha * rho);
  s.H.xy = -gamma * l2 * L12 / (4.0 * alpha * alpha * rho);
  s.H.xx = s.H.yy * (1.0 + 2.0 * l2 / (alpha * alpha));
  return s;
}

double stationary_shear_h11_variant(double rho, double alpha, double gamma, double L12) {
  const double l2 = L12 * L12;
  return gamma * l2 / (4.0 * alpha * rho) * (1.0 + l2 / (alpha * alpha));
}

double algebraic_residual(double rho, double alpha, double gamma, double eta3,
                          const Ten2& L, const Ten2& B, const SymTen2& Y, const SymTen2& H) {
  const Ten2 Hf = H.full();
  const Ten2 Yf = Y.full();
  const Ten2 D = sym(L);

  double r = 0.0;
  // rho(L H + H L^T) = -alpha rho H + gamma D^2
  r = std::max(r, norm_f(rho * (L * Hf + Hf * transpose(L)) + alpha * rho * Hf -
                         gamma * (D * D)));
  r = std::max(r, std::abs(trace(L)));
  r = std::max(r, norm_f(L * L));
  // B Y + Y B^T = 0
  r = std::max(r, norm_f(B * Yf + Yf * transpose(B)));
  // rho B^2 Y = 2 eta3 (L - B)^T
  r = std::max(r, norm_f(rho * (B * B * Yf) - 2.0 * eta3 * transpose(L - B)));
  // consequences of the third condition
  r = std::max(r, norm_f(rho * (B * B * Yf) - 2.0 * eta3 * sym(L - B)));
  r = std::max(r, norm_f(skw(L) - skw(B)));
  return r;
}

DispersionResult dispersion(double beta, double u_mag, double alpha, double gamma_hat) {
  if (!(beta > 0.0)) throw PreconditionViolated("dispersion: beta must be positive");
  DispersionResult d;
  d.beta = beta;
  d.u_mag = u_mag;
  d.alpha = alpha;
  d.gamma_hat = gamma_hat;

  const double c = alpha - gamma_hat;
  const double disc = u_mag * u_mag - 4.0 * beta * c;
  const double endpoint = d.interval_hi();
  const double scale = 1e-12 * (1.0 + std::abs(alpha) + std::abs(gamma_hat) +
                                u_mag * u_mag / (4.0 * beta));
  if (std::abs(alpha - endpoint) <= scale) {
    d.n_real = 1;
    d.root_lo = d.root_hi = u_mag / (2.0 * beta);
    d.regime = DispersionResult::Regime::at_upper_endpoint;
  } else if (disc < 0.0) {
    d.n_real = 0;
    d.regime = DispersionResult::Regime::above_interval;
  } else {
    const double sq = std::sqrt(disc);
    d.n_real = 2;
    d.root_lo = (u_mag - sq) / (2.0 * beta);
    d.root_hi = (u_mag + sq) / (2.0 * beta);
    d.regime = alpha > gamma_hat ? DispersionResult::Regime::inside_interval
                                 : DispersionResult::Regime::below_interval;
  }
  return d;
}

AlphaZeroShear example4_alpha_zero(double rho, double gamma, double u_mag, double delta) {
  AlphaZeroShear a;
  a.L12 = u_mag / delta;
  a.H12 = gamma * a.L12 / (8.0 * rho);
  a.residual_22 = gamma * a.L12 * a.L12 / 4.0;
  a.h12_variant = gamma * u_mag * u_mag / (8.0 * rho * delta);
  a.consistent = (gamma == 0.0);
  return a;
}

// ---------------------------------------------------------------------------

PointState example_point(ExampleFlow which, const ExampleParams& p, double zeta1,
                         double zeta2, double tau) {
  PointState s;
  s.rho = p.rho;
  switch (which) {
    case ExampleFlow::steady_bounce:
      s.u = p.u;
      s.H = sym_outer(p.v);
      break;
    case ExampleFlow::decay_spatial: {
      s.u = p.u;
      const double umag = norm(p.u);
      s.H = std::exp(-p.alpha / umag * zeta1) * sym_outer(p.v);
      break;
    }
    case ExampleFlow::decay_temporal:
      s.H = std::exp(-p.alpha * tau) * sym_outer(p.v);
      break;
    case ExampleFlow::wall_loss:
      s.u = p.u;
      s.H = (p.chi0 * std::exp(-p.zeta * zeta1 - p.gamma_hat * tau)) * sym_outer(p.v);
      break;
    case ExampleFlow::couette: {
      const double L12 = p.u_mag / p.delta;
      s.u = Vec3{p.u_mag * zeta2 / p.delta, 0.0, 0.0};
      s.B = L12 * outer(axis(0), axis(1));
      s.Y = SymTen2{0.0, 0.0, p.Y33, 0.0, 0.0, 0.0};
      s.H = stationary_shear(p.rho, p.alpha, p.gamma, p.eta3, L12, p.Y33).H;
      break;
    }
  }
  return s;
}

FieldState example_fields(ExampleFlow which, const ExampleParams& p, const Grid& grid,
                          double tau) {
  FieldState f(grid);
  f.time = tau;
  for (int j = 0; j < grid.n2; ++j)
    for (int i = 0; i < grid.n1; ++i) {
      const PointState s = example_point(which, p, grid.center1(i), grid.center2(j), tau);
      f.rho(i, j) = s.rho;
      f.u(i, j) = s.u;
      f.B(i, j) = s.B;
      f.Y(i, j) = s.Y;
      f.H(i, j) = s.H;
    }
  return f;
}

double example1_wall_pressure(const ExampleParams& p) {
  const Vec3 v = p.v;
  return p.rho * dot(v, v);
}

SymTen2 example4_extra_stress(const ExampleParams& p) {
  const double L12 = p.u_mag / p.delta;
  return -p.rho * stationary_shear(p.rho, p.alpha, p.gamma, p.eta3, L12, p.Y33).H;
}

double example_continuous_residual(ExampleFlow which, const ExampleParams& p, double zeta1,
                                   double zeta2, double tau) {
  const PointState s = example_point(which, p, zeta1, zeta2, tau);
  double r = 0.0;

  switch (which) {
    case ExampleFlow::steady_bounce:
      // every term of every row vanishes identically
      return 0.0;
    case ExampleFlow::decay_spatial: {
      // row V: (grad H) u = -alpha H; all H derivatives lie along zeta1
      const double umag = norm(p.u);
      const SymTen2 gradH_u = (-p.alpha / umag * umag) * s.H;
      r = std::max(r, norm_f(gradH_u + p.alpha * s.H));
      // momentum: div(rho H) has no component along the H gradient axis
      r = std::max(r, std::abs(s.H(0, 0) * 0.0));
      return r;
    }
    case ExampleFlow::decay_temporal: {
      const SymTen2 dHdt = -p.alpha * s.H;
      r = std::max(r, norm_f(dHdt + p.alpha * s.H));
      return r;
    }
    case ExampleFlow::wall_loss: {
      // row V with the separable mode: time decay gamma_hat, spatial decay
      // zeta along the flow, diffusion beta zeta^2, collision loss alpha
      const double coeff = -p.gamma_hat - p.zeta * p.u.x - p.beta * p.zeta * p.zeta + p.alpha;
      r = std::max(r, std::abs(coeff) * norm_f(s.H));
      return r;
    }
    case ExampleFlow::couette: {
      const double L12 = p.u_mag / p.delta;
      const Ten2 L = L12 * outer(axis(0), axis(1));
      const Ten2 B = L;
      r = std::max(r, algebraic_residual(p.rho, p.alpha, p.gamma, p.eta3, L, B, s.Y, s.H));
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void accumulate(double diff, double& linf, double& l2) {
  linf = std::max(linf, diff);
  l2 += diff * diff;
}

}  // namespace

ErrorNorms compare_states(const FieldState& a, const FieldState& b) {
  if (a.grid.n1 != b.grid.n1 || a.grid.n2 != b.grid.n2)
    throw ShapeMismatch("compare_states: grids differ");
  ErrorNorms e;
  const double dV = a.grid.cell_volume();
  for (int j = 0; j < a.grid.n2; ++j)
    for (int i = 0; i < a.grid.n1; ++i) {
      accumulate(std::abs(a.rho(i, j) - b.rho(i, j)), e.linf_rho, e.l2_rho);
      accumulate(norm(a.u(i, j) - b.u(i, j)), e.linf_u, e.l2_u);
      accumulate(norm_f(a.H(i, j) - b.H(i, j)), e.linf_H, e.l2_H);
      accumulate(norm_f(a.B(i, j) - b.B(i, j)), e.linf_B, e.l2_B);
      accumulate(norm_f(a.Y(i, j) - b.Y(i, j)), e.linf_Y, e.l2_Y);
    }
  e.l2_rho = std::sqrt(e.l2_rho * dV);
  e.l2_u = std::sqrt(e.l2_u * dV);
  e.l2_H = std::sqrt(e.l2_H * dV);
  e.l2_B = std::sqrt(e.l2_B * dV);
  e.l2_Y = std::sqrt(e.l2_Y * dV);
  return e;
}

ErrorNorms verify_against_solver(ExampleFlow which, const ExampleParams& p,
                                 const FieldState& numeric) {
  const FieldState ref = example_fields(which, p, numeric.grid, numeric.time);
  return compare_states(numeric, ref);
}

}  // namespace kinetic
