#include "kinetic/particles.hpp"

#include <cmath>
#include <random>

#include "kinetic/errors.hpp"

namespace kinetic {

double ParticleSystem::total_mass() const {
  double m = 0.0;
  for (const auto& p : particles) m += p.mass;
  return m;
}

Vec3 ParticleSystem::center_of_mass() const {
  Vec3 c;
  for (const auto& p : particles) c += p.mass * p.pos;
  return c / total_mass();
}

Vec3 ParticleSystem::mean_velocity() const {
  Vec3 c;
  for (const auto& p : particles) c += p.mass * p.vel;
  return c / total_mass();
}

Ten2 fit_affine_rate(const ParticleSystem& sys) {
  if (sys.particles.size() < 2)
    throw DegenerateConfiguration("fit_affine_rate: need at least two particles");
  const double mu = sys.total_mass();
  const Vec3 xc = sys.center_of_mass();
  const Vec3 vc = sys.mean_velocity();

  SymTen2 Y;
  Ten2 Kt;  // (1/mu) sum m dx (x) dv
  for (const auto& p : sys.particles) {
    const Vec3 dx = p.pos - xc;
    const Vec3 dv = p.vel - vc;
    Y += (p.mass / mu) * sym_outer(dx);
    Kt += (p.mass / mu) * outer(dx, dv);
  }
  // B = Ktilde^T Y^+; vanishes on the null space of Y, including the
  // fully coincident configuration where Y = 0.
  return transpose(Kt) * pinv_psd(Y).full();
}

AggregateState aggregates(const ParticleSystem& sys) {
  AggregateState a;
  a.mu = sys.total_mass();
  a.x = sys.center_of_mass();
  a.x_dot = sys.mean_velocity();
  a.B = fit_affine_rate(sys);

  const std::vector<Vec3> forces =
      sys.force ? sys.force(sys.particles, sys.time) : std::vector<Vec3>(sys.particles.size());

  Ten2 S_acc;
  for (std::size_t i = 0; i < sys.particles.size(); ++i) {
    const auto& p = sys.particles[i];
    const Vec3 dx = p.pos - a.x;
    const Vec3 dv = p.vel - a.x_dot;
    const Vec3 pec = dv - a.B * dx;  // G s_dot, the peculiar velocity
    a.Y += (p.mass / a.mu) * sym_outer(dx);
    a.H += (p.mass / a.mu) * sym_outer(pec);
    a.H_total += (p.mass / a.mu) * sym_outer(dv);
    a.M_hat += outer(dx, forces[i]);
    S_acc += outer(pec, forces[i]);
    a.f_hat += forces[i];
  }
  a.S_hat = 2.0 * sym_part(S_acc);
  a.K = a.Y.full() * transpose(a.B);
  a.W = 0.5 * sym_outer(a.x_dot) + 0.5 * sym_part(a.B * a.Y.full() * transpose(a.B)) +
        0.5 * a.H;
  return a;
}

void step(ParticleSystem& sys, AffineFrame& frame, double dt) {
  const std::size_t n = sys.particles.size();
  const auto zero = std::vector<Vec3>(n);

  const Ten2 B0 = fit_affine_rate(sys);

  // velocity Verlet
  std::vector<Vec3> acc0(n);
  const std::vector<Vec3> f0 = sys.force ? sys.force(sys.particles, sys.time) : zero;
  for (std::size_t i = 0; i < n; ++i) acc0[i] = f0[i] / sys.particles[i].mass;
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = sys.particles[i];
    p.pos += dt * p.vel + (0.5 * dt * dt) * acc0[i];
  }
  const std::vector<Vec3> f1 = sys.force ? sys.force(sys.particles, sys.time + dt) : zero;
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = sys.particles[i];
    p.vel += (0.5 * dt) * (acc0[i] + f1[i] / p.mass);
  }
  sys.time += dt;

  // Heun update of G' = B G with B refit at the endpoint.
  const Ten2 B1 = fit_affine_rate(sys);
  const Ten2 G_pred = frame.G + dt * (B0 * frame.G);
  frame.G += (0.5 * dt) * (B0 * frame.G + B1 * G_pred);
  frame.B = B1;
  frame.x = sys.center_of_mass();
  frame.x_dot = sys.mean_velocity();
}

Trajectory run_particles(ParticleSystem& sys, AffineFrame& frame, double dt, int n_steps,
                         int sample_every) {
  Trajectory traj;
  traj.dt = dt * sample_every;
  frame.B = fit_affine_rate(sys);
  frame.x = sys.center_of_mass();
  frame.x_dot = sys.mean_velocity();
  traj.samples.push_back({sys.time, aggregates(sys), frame.G});
  for (int s = 1; s <= n_steps; ++s) {
    step(sys, frame, dt);
    if (s % sample_every == 0)
      traj.samples.push_back({sys.time, aggregates(sys), frame.G});
  }
  return traj;
}

namespace {

template <typename T>
double max_norm_of(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& t : v) m = std::max(m, norm_f(t));
  return m;
}

double max_norm_of(const std::vector<Vec3>& v) {
  double m = 0.0;
  for (const auto& t : v) m = std::max(m, norm(t));
  return m;
}

}  // namespace

double BalanceResiduals::max_norm_momentum() const { return max_norm_of(row_momentum); }
double BalanceResiduals::max_norm_moment() const { return max_norm_of(row_moment); }
double BalanceResiduals::max_norm_inertia() const { return max_norm_of(row_inertia); }
double BalanceResiduals::max_norm_ferment() const { return max_norm_of(row_ferment); }

BalanceResiduals balance_residuals(const Trajectory& traj) {
  BalanceResiduals r;
  if (traj.samples.size() < 3)
    throw PreconditionViolated("balance_residuals: need at least 3 samples");
  const double dt = traj.dt;
  for (std::size_t n = 1; n + 1 < traj.samples.size(); ++n) {
    const auto& prev = traj.samples[n - 1].agg;
    const auto& cur = traj.samples[n].agg;
    const auto& next = traj.samples[n + 1].agg;
    const double mu = cur.mu;

    r.tau.push_back(traj.samples[n].tau);

    const Vec3 xdd = (next.x_dot - prev.x_dot) / (2.0 * dt);
    r.row_momentum.push_back(mu * xdd - cur.f_hat);

    const Ten2 Kdot = (next.K - prev.K) * (1.0 / (2.0 * dt));
    r.row_moment.push_back(mu * (Kdot - cur.B * cur.K - cur.H.full()) - cur.M_hat);

    const Ten2 Ydot = (next.Y.full() - prev.Y.full()) * (1.0 / (2.0 * dt));
    r.row_inertia.push_back(Ydot - cur.Y.full() * transpose(cur.B) - cur.B * cur.Y.full());

    const Ten2 Hdot = (next.H.full() - prev.H.full()) * (1.0 / (2.0 * dt));
    r.row_ferment.push_back(
        mu * (Hdot + cur.B * cur.H.full() + cur.H.full() * transpose(cur.B)) -
        cur.S_hat.full());
  }
  return r;
}

double EnergyResiduals::max_norm() const { return max_norm_of(residual); }

EnergyResiduals energy_theorem_residual(const Trajectory& traj) {
  EnergyResiduals r;
  if (traj.samples.size() < 3)
    throw PreconditionViolated("energy_theorem_residual: need at least 3 samples");
  const double dt = traj.dt;
  for (std::size_t n = 1; n + 1 < traj.samples.size(); ++n) {
    const auto& prev = traj.samples[n - 1].agg;
    const auto& cur = traj.samples[n].agg;
    const auto& next = traj.samples[n + 1].agg;
    r.tau.push_back(traj.samples[n].tau);
    const Ten2 Wdot = (next.W.full() - prev.W.full()) * (1.0 / (2.0 * dt));
    r.residual.push_back(cur.mu * Wdot - 0.5 * cur.S_hat.full() -
                         sym(outer(cur.x_dot, cur.f_hat) + cur.B * cur.M_hat));
  }
  return r;
}

ConservationDrift conservation_check(const Trajectory& traj, const std::vector<SymTen2>& P) {
  if (traj.samples.empty())
    throw PreconditionViolated("conservation_check: empty trajectory");
  if (!P.empty() && P.size() != traj.samples.size())
    throw PreconditionViolated("conservation_check: P series length mismatch");

  // Preconditions: f_hat and G^-1 M_hat constant along the trajectory.
  const auto& first = traj.samples.front();
  double force_scale = norm(first.agg.f_hat);
  const Ten2 GiM0 = inverse(traj.samples.front().G) * first.agg.M_hat;
  double moment_scale = norm_f(GiM0);
  for (const auto& s : traj.samples) {
    if (norm(s.agg.f_hat - first.agg.f_hat) > 1e-9 * (1.0 + force_scale))
      throw PreconditionViolated("conservation_check: f_hat varies along the trajectory");
    if (norm_f(inverse(s.G) * s.agg.M_hat - GiM0) > 1e-9 * (1.0 + moment_scale))
      throw PreconditionViolated("conservation_check: G^-1 M_hat varies along the trajectory");
  }

  // The conserved combination. Differentiating mu W - P/2 with the energy
  // theorem leaves sym(x_dot (x) f_hat + B M_hat), which is the derivative
  // of sym(x (x) f_hat + M_hat) under the stated preconditions; the
  // invariant is their difference.
  auto invariant = [&](std::size_t n) {
    const auto& a = traj.samples[n].agg;
    Ten2 inv = a.mu * a.W.full() - sym(outer(a.x, a.f_hat) + a.M_hat);
    if (!P.empty()) inv -= 0.5 * P[n].full();
    return inv;
  };

  ConservationDrift d;
  const Ten2 I0 = invariant(0);
  const double scale = 1.0 + norm_f(I0);
  for (std::size_t n = 0; n < traj.samples.size(); ++n) {
    d.tau.push_back(traj.samples[n].tau);
    const double drift = norm_f(invariant(n) - I0) / scale;
    d.drift.push_back(drift);
    d.max_drift = std::max(d.max_drift, drift);
  }
  return d;
}

// ---------------------------------------------------------------------------

ForceLaw force_free() {
  return [](const std::vector<Particle>& ps, double) { return std::vector<Vec3>(ps.size()); };
}

ForceLaw force_uniform_gravity(const Vec3& g) {
  return [g](const std::vector<Particle>& ps, double) {
    std::vector<Vec3> f(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) f[i] = ps[i].mass * g;
    return f;
  };
}

ForceLaw force_harmonic(double k, const Vec3& center) {
  return [k, center](const std::vector<Particle>& ps, double) {
    std::vector<Vec3> f(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
      f[i] = (-k * ps[i].mass) * (ps[i].pos - center);
    return f;
  };
}

ForceLaw force_anharmonic(double k, double k3, const Vec3& center) {
  return [k, k3, center](const std::vector<Particle>& ps, double) {
    std::vector<Vec3> f(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const Vec3 r = ps[i].pos - center;
      f[i] = (-ps[i].mass) * ((k + k3 * dot(r, r)) * r);
    }
    return f;
  };
}

ForceLaw force_spring_pairs(double k) {
  return [k](const std::vector<Particle>& ps, double) {
    std::vector<Vec3> f(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const Vec3 d = ps[i].pos - ps[j].pos;
        f[i] -= k * d;
        f[j] += k * d;
      }
    return f;
  };
}

ParticleSystem make_random_cloud(int count, double radius, double speed_scale,
                                 unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mass_dist(0.5, 1.5);
  ParticleSystem sys;
  sys.particles.reserve(count);
  while (static_cast<int>(sys.particles.size()) < count) {
    const Vec3 p{unit(rng), unit(rng), unit(rng)};
    if (dot(p, p) > 1.0) continue;
    Particle part;
    part.mass = mass_dist(rng);
    part.pos = radius * p;
    part.vel = speed_scale * Vec3{unit(rng), unit(rng), unit(rng)};
    sys.particles.push_back(part);
  }
  sys.force = force_free();
  return sys;
}

ParticleSystem make_ring(int count, double radius, double omega) {
  ParticleSystem sys;
  for (int i = 0; i < count; ++i) {
    const double th = 2.0 * M_PI * i / count;
    Particle p;
    p.pos = {radius * std::cos(th), radius * std::sin(th), 0.0};
    p.vel = omega * cross(axis(2), p.pos);
    sys.particles.push_back(p);
  }
  // centripetal pull toward the axis keeps the rotation rigid
  sys.force = force_harmonic(omega * omega);
  return sys;
}

ParticleSystem make_counter_streaming(const Vec3& v) {
  ParticleSystem sys;
  Particle a, b;
  a.vel = v;
  b.vel = -v;
  sys.particles = {a, b};
  sys.force = force_free();
  return sys;
}

ParticleSystem make_breathing_pair(double a, double v) {
  ParticleSystem sys;
  Particle p1, p2;
  p1.pos = {a, 0.0, 0.0};
  p1.vel = {v, 0.0, 0.0};
  p2.pos = {-a, 0.0, 0.0};
  p2.vel = {-v, 0.0, 0.0};
  sys.particles = {p1, p2};
  sys.force = force_free();
  return sys;
}

}  // namespace kinetic
