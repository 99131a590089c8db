#include "kinetic/temperance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

struct AngularGrid {
  std::vector<Vec3> n;
  std::vector<double> w;  // includes the phi weight
};

AngularGrid make_angular(const QuadratureSpec& q) {
  std::vector<double> ct, cw;
  gauss_legendre(q.n_cos, ct, cw);
  AngularGrid grid;
  grid.n.reserve(q.n_cos * q.n_phi);
  grid.w.reserve(q.n_cos * q.n_phi);
  const double wphi = two_pi / q.n_phi;
  for (int a = 0; a < q.n_cos; ++a) {
    const double c = ct[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int p = 0; p < q.n_phi; ++p) {
      const double phi = two_pi * p / q.n_phi;
      grid.n.push_back({s * std::cos(phi), s * std::sin(phi), c});
      grid.w.push_back(cw[a] * wphi);
    }
  }
  return grid;
}

// Radial truncation: the slowest quartic decay rate over directions sets
// where r^2 exp(q r^4) drops below 1e-16 of its peak.
double radial_cutoff_for(double slowest_decay) {
  return std::pow(45.0 / slowest_decay, 0.25);
}

double quartic_form(const SymTen2& Theta, const Vec3& n) {
  return dot(n, Theta * n);
}

}  // namespace

SpeedDistribution SpeedDistribution::uniform_sphere(double v) {
  SpeedDistribution d;
  d.mode = Mode::sphere;
  d.speed = v;
  d.density = [](const Vec3&) { return 1.0 / (4.0 * std::numbers::pi); };
  return d;
}

SpeedDistribution SpeedDistribution::on_sphere(double v,
                                               std::function<double(const Vec3&)> theta) {
  SpeedDistribution d;
  d.mode = Mode::sphere;
  d.speed = v;
  d.density = std::move(theta);
  return d;
}

SpeedDistribution SpeedDistribution::on_velocities(std::function<double(const Vec3&)> theta,
                                                   double cutoff) {
  SpeedDistribution d;
  d.mode = Mode::full;
  d.density = std::move(theta);
  d.radial_cutoff = cutoff;
  return d;
}

SpeedDistribution SpeedDistribution::from_atoms(std::vector<std::pair<double, Vec3>> atoms) {
  SpeedDistribution d;
  d.mode = Mode::discrete;
  d.atoms = std::move(atoms);
  return d;
}

SpeedDistribution SpeedDistribution::canonical(const SymTen2& Theta,
                                               const QuadratureSpec& quad) {
  const Temperance t = make_temperance(Theta, quad);
  SpeedDistribution d;
  d.mode = Mode::full;
  d.canonical_theta = Theta;
  d.radial_cutoff = radial_cutoff_for(-max_eig(Theta));
  d.density = [t](const Vec3& v) { return canonical_density(t, v); };
  return d;
}

MomentResult moments(const SpeedDistribution& dist, const QuadratureSpec& quad) {
  MomentResult r;
  switch (dist.mode) {
    case SpeedDistribution::Mode::discrete: {
      for (const auto& [w, v] : dist.atoms) {
        r.norm += w;
        r.mean += w * v;
        r.H += w * sym_outer(v);
      }
      break;
    }
    case SpeedDistribution::Mode::sphere: {
      const AngularGrid grid = make_angular(quad);
      const double v2 = dist.speed * dist.speed;
      for (std::size_t k = 0; k < grid.n.size(); ++k) {
        const double th = dist.density(grid.n[k]);
        r.norm += grid.w[k] * th;
        r.mean += (grid.w[k] * dist.speed * th) * grid.n[k];
        r.H += (grid.w[k] * v2 * th) * sym_outer(grid.n[k]);
      }
      break;
    }
    case SpeedDistribution::Mode::full: {
      const AngularGrid grid = make_angular(quad);
      if (!(dist.radial_cutoff > 0.0))
        throw PreconditionViolated("moments: full-mode distribution needs a radial cutoff");
      std::vector<double> rx, rw;
      gauss_legendre(quad.n_r, rx, rw);
      const double R = dist.radial_cutoff;
      for (std::size_t k = 0; k < grid.n.size(); ++k) {
        const Vec3& n = grid.n[k];
        for (int a = 0; a < quad.n_r; ++a) {
          const double rr = 0.5 * R * (rx[a] + 1.0);
          const double wr = 0.5 * R * rw[a];
          const double th = dist.density(rr * n);
          const double base = grid.w[k] * wr * rr * rr * th;
          r.norm += base;
          r.mean += (base * rr) * n;
          r.H += (base * rr * rr) * sym_outer(n);
        }
      }
      break;
    }
  }
  if (std::abs(r.norm - 1.0) > 0.05)
    throw QuadratureFailure("moments: normalization off by more than 5%");
  return r;
}

MomentResult moments_mc(const SpeedDistribution& dist, const MCSpec& mc) {
  if (dist.mode == SpeedDistribution::Mode::discrete) return moments(dist);
  if (!dist.canonical_theta)
    throw PreconditionViolated(
        "moments_mc: rejection sampling is defined for canonical distributions");
  const SymTen2 Theta = *dist.canonical_theta;
  const double lam_max = max_eig(Theta);
  if (!(lam_max < 0.0))
    throw NotNormalizable("moments_mc: temperance must be negative definite");
  const double a_env = -lam_max;

  const int workers = std::max(1, mc.workers);
  const long per = (mc.samples + workers - 1) / workers;

  // accumulate per worker, then reduce in a fixed order
  std::array<double, 6> H_sum{}, H_sq{};
  Vec3 mean_sum;
  long accepted = 0, proposed = 0;
  for (int w = 0; w < workers; ++w) {
    const long want = std::min(per, mc.samples - static_cast<long>(w) * per);
    if (want <= 0) break;
    std::mt19937_64 rng(mc.seed + 0x9e3779b97f4a7c15ull * (w + 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> radial(0.75, 1.0 / a_env);
    long got = 0;
    while (got < want) {
      ++proposed;
      const double z = 2.0 * unit(rng) - 1.0;
      const double phi = two_pi * unit(rng);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      const Vec3 n{s * std::cos(phi), s * std::sin(phi), z};
      const double r4 = radial(rng);
      const double q = quartic_form(Theta, n);
      if (unit(rng) >= std::exp((q + a_env) * r4)) continue;
      ++got;
      const double r2 = std::sqrt(r4);
      const SymTen2 vv = r2 * sym_outer(n);
      mean_sum += std::sqrt(r2) * n;
      for (int c = 0; c < 6; ++c) {
        H_sum[c] += vv.component(c);
        H_sq[c] += vv.component(c) * vv.component(c);
      }
    }
    accepted += got;
  }

  MomentResult r;
  r.norm = 1.0;
  r.accepted = accepted;
  r.proposed = proposed;
  r.mean = (1.0 / accepted) * mean_sum;
  for (int c = 0; c < 6; ++c) {
    const double m = H_sum[c] / accepted;
    r.H.component(c) = m;
    const double var = std::max(0.0, H_sq[c] / accepted - m * m);
    r.H_stderr.component(c) = std::sqrt(var / accepted);
  }
  return r;
}

SymTen2 order_tensor(const SymTen2& H) {
  const double tr = trace(H);
  if (!(tr > 0.0)) throw ZeroFerment("order_tensor: tr H must be positive");
  SymTen2 q = (1.0 / tr) * H;
  q.xx -= 1.0 / 3.0;
  q.yy -= 1.0 / 3.0;
  q.zz -= 1.0 / 3.0;
  return q;
}

namespace {

struct CanonicalQuad {
  double theta0 = 0.0;  // includes the constant -tr(Theta)/3 shift
  SymTen2 H;
};

CanonicalQuad canonical_quadrature(const SymTen2& Theta, const QuadratureSpec& quad) {
  if (!(max_eig(Theta) < 0.0))
    throw NotNormalizable("canonical distribution: temperance must be negative definite");
  const AngularGrid grid = make_angular(quad);
  std::vector<double> rx, rw;
  gauss_legendre(quad.n_r, rx, rw);
  const double R = radial_cutoff_for(-max_eig(Theta));

  // precompute radial powers once; the angular loop only pays for the exp
  std::vector<double> r2(quad.n_r), r4(quad.n_r), wr(quad.n_r);
  for (int a = 0; a < quad.n_r; ++a) {
    const double rr = 0.5 * R * (rx[a] + 1.0);
    r2[a] = rr * rr;
    r4[a] = r2[a] * r2[a];
    wr[a] = 0.5 * R * rw[a];
  }

  double norm = 0.0;
  SymTen2 second;
  for (std::size_t k = 0; k < grid.n.size(); ++k) {
    const double q = quartic_form(Theta, grid.n[k]);
    double i2 = 0.0, i4 = 0.0;
    for (int a = 0; a < quad.n_r; ++a) {
      const double e = std::exp(q * r4[a]);
      i2 += wr[a] * r2[a] * e;
      i4 += wr[a] * r4[a] * e;
    }
    norm += grid.w[k] * i2;
    second += (grid.w[k] * i4) * sym_outer(grid.n[k]);
  }

  CanonicalQuad out;
  const double shift = std::exp(-trace(Theta) / 3.0);
  out.theta0 = norm * shift;
  out.H = (1.0 / norm) * second;
  return out;
}

}  // namespace

double compute_theta0(const SymTen2& Theta, const QuadratureSpec& quad) {
  return canonical_quadrature(Theta, quad).theta0;
}

Temperance make_temperance(const SymTen2& Theta, const QuadratureSpec& quad) {
  return {Theta, compute_theta0(Theta, quad)};
}

double canonical_density(const Temperance& t, const Vec3& v) {
  const double v2 = dot(v, v);
  const double expo = v2 * dot(v, t.Theta * v) - trace(t.Theta) / 3.0;
  return std::exp(expo) / t.theta0;
}

SymTen2 canonical_moment(const SymTen2& Theta, const QuadratureSpec& quad) {
  return canonical_quadrature(Theta, quad).H;
}

namespace {

// 6x6 Gaussian elimination with partial pivoting.
std::array<double, 6> solve6(std::array<std::array<double, 6>, 6> A,
                             std::array<double, 6> b) {
  for (int col = 0; col < 6; ++col) {
    int piv = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    if (A[col][col] == 0.0) throw NoConvergence("fit_temperance: singular Jacobian");
    for (int r = col + 1; r < 6; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < 6; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 6> x{};
  for (int r = 5; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 6; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace

Temperance fit_temperance(const SymTen2& H_target, double tolerance,
                          const QuadratureSpec& quad) {
  const auto eig = eig_sym(H_target);
  const double scale = norm_f(H_target);
  if (!(eig[2].lambda > 1e-12 * (1.0 + scale)))
    throw InfeasibleTarget("fit_temperance: target must be symmetric positive definite");

  // Isotropic calibration: H = c a^{-1/2} I for Theta = -a I with
  // c = Gamma(5/4) / (3 Gamma(3/4)); start from the matching inverse-square
  // shape of the target.
  const double c_iso = std::tgamma(1.25) / (3.0 * std::tgamma(0.75));
  SymTen2 Hinv;
  for (const auto& p : eig) Hinv += (1.0 / p.lambda) * sym_outer(p.axis);
  SymTen2 Theta = (-c_iso * c_iso) * sym_part(Hinv * Hinv);

  auto residual = [&](const SymTen2& th) {
    SymTen2 r = canonical_moment(th, quad) - H_target;
    return r;
  };

  SymTen2 R = residual(Theta);
  double rnorm = norm_f(R);
  const double target_norm = tolerance * (scale > 0.0 ? scale : 1.0);

  for (int iter = 0; iter < 60; ++iter) {
    if (rnorm <= target_norm) return make_temperance(Theta, quad);

    // finite-difference Jacobian in the 6 symmetric components
    const double step = 1e-6 * (norm_f(Theta) + 1.0);
    std::array<std::array<double, 6>, 6> J{};
    for (int c = 0; c < 6; ++c) {
      SymTen2 th = Theta;
      th.component(c) += step;
      if (!(max_eig(th) < 0.0)) {
        th = Theta;
        th.component(c) -= step;
        const SymTen2 Rm = residual(th);
        for (int r = 0; r < 6; ++r) J[r][c] = (R.component(r) - Rm.component(r)) / step;
      } else {
        const SymTen2 Rp = residual(th);
        for (int r = 0; r < 6; ++r) J[r][c] = (Rp.component(r) - R.component(r)) / step;
      }
    }
    std::array<double, 6> rhs{};
    for (int r = 0; r < 6; ++r) rhs[r] = -R.component(r);
    const auto d = solve6(J, rhs);

    // damped update: stay negative definite and do not increase the residual
    double lam = 1.0;
    bool moved = false;
    for (int half = 0; half < 12; ++half, lam *= 0.5) {
      SymTen2 trial = Theta;
      for (int c = 0; c < 6; ++c) trial.component(c) += lam * d[c];
      if (!(max_eig(trial) < 0.0)) continue;
      SymTen2 Rt;
      try {
        Rt = residual(trial);
      } catch (const QuadratureFailure&) {
        continue;
      }
      const double rt = norm_f(Rt);
      if (rt < rnorm || half == 11) {
        Theta = trial;
        R = Rt;
        rnorm = rt;
        moved = true;
        break;
      }
    }
    if (!moved) throw NoConvergence("fit_temperance: line search failed");
  }
  throw NoConvergence("fit_temperance: iteration limit reached");
}

}  // namespace kinetic
