#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kinetic/tensor.hpp"

namespace kinetic {

/// Product Gauss rule on spherical coordinates with radial truncation where
/// the integrand falls below 1e-16 of its peak.
struct QuadratureSpec {
  int n_cos = 48;   ///< Gauss-Legendre points in cos(theta)
  int n_phi = 96;   ///< uniform points in phi
  int n_r = 128;    ///< Gauss-Legendre points in radius
};

struct MCSpec {
  long samples = 100000;  ///< accepted samples to draw
  unsigned long seed = 1;
  int workers = 1;        ///< independent seeded streams, fixed reduction order
};

/// Velocity distribution in one of three shapes: a density on the unit
/// sphere at fixed speed, a density on velocity space, or discrete atoms.
struct SpeedDistribution {
  enum class Mode { sphere, full, discrete };
  Mode mode = Mode::sphere;

  double speed = 1.0;                                 ///< sphere mode
  std::function<double(const Vec3&)> density;         ///< theta(n) or theta(v)
  double radial_cutoff = 0.0;                         ///< full-mode support radius
  std::vector<std::pair<double, Vec3>> atoms;         ///< discrete mode
  std::optional<SymTen2> canonical_theta;             ///< set for canonical densities

  static SpeedDistribution uniform_sphere(double v);
  static SpeedDistribution on_sphere(double v, std::function<double(const Vec3&)> theta);
  static SpeedDistribution on_velocities(std::function<double(const Vec3&)> theta,
                                         double cutoff);
  static SpeedDistribution from_atoms(std::vector<std::pair<double, Vec3>> atoms);
  static SpeedDistribution canonical(const SymTen2& Theta,
                                     const QuadratureSpec& quad = {});
};

/// Canonical-distribution parameter: a negative-definite temperance tensor
/// and its normalization integral.
struct Temperance {
  SymTen2 Theta;
  double theta0 = 1.0;
};

struct MomentResult {
  double norm = 0.0;
  Vec3 mean;
  SymTen2 H;
  SymTen2 H_stderr;    ///< only meaningful for Monte Carlo estimates
  long accepted = 0;
  long proposed = 0;
};

/// Second moments by quadrature. Raises QuadratureFailure when the
/// normalization drifts more than 5% from one.
MomentResult moments(const SpeedDistribution& dist, const QuadratureSpec& quad = {});

/// Second moments by rejection sampling from an isotropic quartic
/// exponential envelope; canonical and discrete distributions only.
MomentResult moments_mc(const SpeedDistribution& dist, const MCSpec& mc);

/// Order tensor Q = H / tr H - I/3. Raises ZeroFerment when tr H <= 0.
SymTen2 order_tensor(const SymTen2& H);

/// Normalization integral of the canonical density for a given temperance.
/// Raises NotNormalizable unless Theta is negative definite.
double compute_theta0(const SymTen2& Theta, const QuadratureSpec& quad = {});

/// Validated canonical parameter with cached normalization.
Temperance make_temperance(const SymTen2& Theta, const QuadratureSpec& quad = {});

/// Canonical density value at a velocity.
double canonical_density(const Temperance& t, const Vec3& v);

/// Second moment H(Theta) of the canonical distribution (quadrature).
SymTen2 canonical_moment(const SymTen2& Theta, const QuadratureSpec& quad = {});

/// Damped Newton moment matching: find Theta with H(Theta) = H_target to the
/// requested relative tolerance. Raises InfeasibleTarget for a singular
/// target and NoConvergence when iteration stalls.
Temperance fit_temperance(const SymTen2& H_target, double tolerance = 1e-9,
                          const QuadratureSpec& quad = {});

}  // namespace kinetic
