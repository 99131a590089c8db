#pragma once

#include <functional>
#include <vector>

#include "kinetic/tensor.hpp"

namespace kinetic {

struct Particle {
  double mass = 1.0;
  Vec3 pos;
  Vec3 vel;
};

/// Forces on all particles given the current configuration and time.
using ForceLaw =
    std::function<std::vector<Vec3>(const std::vector<Particle>&, double)>;

/// Discrete mass-point system with an attached force law.
struct ParticleSystem {
  std::vector<Particle> particles;
  ForceLaw force;
  double time = 0.0;

  double total_mass() const;
  Vec3 center_of_mass() const;
  Vec3 mean_velocity() const;
};

/// Affine frame carried along the motion: G evolves by G' = B G from the
/// identity, with B refit at every step.
struct AffineFrame {
  Vec3 x;      ///< center of mass
  Vec3 x_dot;  ///< its velocity
  Ten2 G = Ten2::identity();
  Ten2 B;
};

/// Aggregate tensors of one instant.
struct AggregateState {
  double mu = 0.0;   ///< total mass
  Vec3 x;            ///< center of mass
  Vec3 x_dot;        ///< center-of-mass velocity
  SymTen2 Y;         ///< per-unit-mass second moment of positions
  Ten2 K;            ///< tensor moment of momentum, K = Y B^T
  Ten2 B;            ///< fitted affine rate
  SymTen2 H;         ///< ferment tensor on peculiar velocities
  SymTen2 H_total;   ///< second moment of full relative velocities (= B Y B^T + H)
  SymTen2 S_hat;     ///< stirring tensor
  Ten2 M_hat;        ///< tensor moment of external forces
  Vec3 f_hat;        ///< resultant external force
  SymTen2 W;         ///< kinetic energy tensor per unit mass
};

/// Mass-weighted least-squares affine rate: B = Ktilde^T Y^+, zero on the
/// null space of Y. Requires at least two particles.
Ten2 fit_affine_rate(const ParticleSystem& sys);

/// All aggregate tensors at the current instant (B refit internally).
AggregateState aggregates(const ParticleSystem& sys);

/// One velocity-Verlet step of the particles plus a Heun update of G
/// driven by the refit affine rate. Returns nothing; sys and frame advance.
void step(ParticleSystem& sys, AffineFrame& frame, double dt);

struct TrajectorySample {
  double tau = 0.0;
  AggregateState agg;
  Ten2 G;
};

/// Record of a run at uniform sampling interval dt.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
};

/// Integrate n_steps of size dt, sampling every sample_every steps.
Trajectory run_particles(ParticleSystem& sys, AffineFrame& frame, double dt, int n_steps,
                         int sample_every = 1);

/// Central-difference residuals of the four balance rows at every interior
/// sample:
///   I   mu x_ddot - f_hat
///   II  mu (K_dot - B K - H) - M_hat
///   III Y_dot - Y B^T - B Y
///   IV  mu (H_dot + B H + H B^T) - S_hat
struct BalanceResiduals {
  std::vector<double> tau;
  std::vector<Vec3> row_momentum;
  std::vector<Ten2> row_moment;
  std::vector<Ten2> row_inertia;
  std::vector<Ten2> row_ferment;

  double max_norm_momentum() const;
  double max_norm_moment() const;
  double max_norm_inertia() const;
  double max_norm_ferment() const;
};

BalanceResiduals balance_residuals(const Trajectory& traj);

/// Central-difference residual of the kinetic energy theorem,
/// mu W_dot - S_hat/2 - sym(x_dot (x) f_hat + B M_hat), per interior sample.
struct EnergyResiduals {
  std::vector<double> tau;
  std::vector<Ten2> residual;
  double max_norm() const;
};

EnergyResiduals energy_theorem_residual(const Trajectory& traj);

/// Drift of the conserved tensor mu W - P/2 - sym(x (x) f_hat + M_hat).
/// Requires f_hat and G^-1 M_hat constant along the trajectory; P must
/// satisfy P_dot = S_hat (pass empty when S_hat vanishes).
struct ConservationDrift {
  std::vector<double> tau;
  std::vector<double> drift;     ///< |I(tau) - I(0)| / (1 + |I(0)|)
  double max_drift = 0.0;
};

ConservationDrift conservation_check(const Trajectory& traj,
                                     const std::vector<SymTen2>& P = {});

// Force-law factories -------------------------------------------------------

ForceLaw force_free();
ForceLaw force_uniform_gravity(const Vec3& g);
/// f_i = -k m_i (x_i - center)
ForceLaw force_harmonic(double k, const Vec3& center = {});
/// f_i = -k m_i (x_i - c) - k3 m_i |x_i - c|^2 (x_i - c)
ForceLaw force_anharmonic(double k, double k3, const Vec3& center = {});
/// all-pairs linear springs, f_i = -k sum_j (x_i - x_j)
ForceLaw force_spring_pairs(double k);

// Initial-condition helpers --------------------------------------------------

/// Uniform random cloud in a ball with random velocities; reproducible.
ParticleSystem make_random_cloud(int count, double radius, double speed_scale,
                                 unsigned long seed);
/// Equal masses on a circle in the 1-2 plane, rotating rigidly at rate omega.
ParticleSystem make_ring(int count, double radius, double omega);
/// Two particles at the same point with opposite velocities +-v.
ParticleSystem make_counter_streaming(const Vec3& v);
/// Two equal masses at +-a c1 with velocities +-v c1.
ParticleSystem make_breathing_pair(double a, double v);

}  // namespace kinetic
