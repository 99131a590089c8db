#pragma once

#include <string>
#include <vector>

#include "kinetic/fields.hpp"
#include "kinetic/solver.hpp"
#include "kinetic/tensor.hpp"

namespace kinetic {

/// Closed-form stationary state under a single-component shear
/// L = L12 c1 (x) c2 with B, L, Y carrying one component each.
struct StationaryShear {
  double rho = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double eta3 = 0.0;
  double L12 = 0.0;
  double B12 = 0.0;  ///< equals L12
  double Y33 = 1.0;  ///< free parameter of the family
  SymTen2 H;         ///< the determined ferment tensor
};

/// Solve the stationary algebraic system for the one-component ansatz.
/// Throws AlphaZero when alpha vanishes (see stationary_shear_alpha_zero).
StationaryShear stationary_shear(double rho, double alpha, double gamma, double eta3,
                                 double L12, double Y33 = 1.0);

/// Alternative H11 coefficient with a single macro-coupling factor,
/// (gamma L12^2 / (4 alpha rho)) (1 + L12^2/alpha^2). Does not satisfy the
/// stationary system; kept for comparison against the solving form.
double stationary_shear_h11_variant(double rho, double alpha, double gamma, double L12);

/// Max norm over all stationary conditions evaluated on a candidate state.
double algebraic_residual(double rho, double alpha, double gamma, double eta3,
                          const Ten2& L, const Ten2& B, const SymTen2& Y, const SymTen2& H);

/// Roots of beta z^2 - |u| z + alpha - gamma_hat = 0 and the regime of
/// alpha relative to (gamma_hat, gamma_hat + |u|^2 / 4 beta).
struct DispersionResult {
  double beta = 0.0, u_mag = 0.0, alpha = 0.0, gamma_hat = 0.0;
  int n_real = 0;
  double root_lo = 0.0;  ///< smaller root when two exist
  double root_hi = 0.0;
  enum class Regime { below_interval, inside_interval, at_upper_endpoint, above_interval };
  Regime regime = Regime::below_interval;

  double interval_lo() const { return gamma_hat; }
  double interval_hi() const { return gamma_hat + u_mag * u_mag / (4.0 * beta); }
};

DispersionResult dispersion(double beta, double u_mag, double alpha, double gamma_hat);

/// The alpha = 0 shear regime: only H12 is determined; the (2,2) equation
/// cannot balance, and its residual is reported instead of hidden.
struct AlphaZeroShear {
  double L12 = 0.0;
  double H12 = 0.0;            ///< gamma L12 / (8 rho)
  double residual_22 = 0.0;    ///< gamma L12^2 / 4, unremovable for gamma > 0
  double h12_variant = 0.0;    ///< quadratic-in-|u| alternative, for comparison
  bool consistent = false;     ///< true only when gamma = 0
};

AlphaZeroShear example4_alpha_zero(double rho, double gamma, double u_mag, double delta);

// ---------------------------------------------------------------------------
// Closed-form elementary channel flows

enum class ExampleFlow { steady_bounce, decay_spatial, decay_temporal, wall_loss, couette };

struct ExampleParams {
  double rho = 1.0;
  Vec3 u;              ///< bulk velocity (steady_bounce, decay_*, wall_loss)
  Vec3 v;              ///< bounce velocity (parallel to c2)
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double gamma_hat = 0.0;
  double chi0 = 1.0;   ///< amplitude of the wall-loss mode
  double zeta = 0.0;   ///< spatial decay rate of the wall-loss mode
  double u_mag = 0.0;  ///< sliding speed (couette)
  double delta = 1.0;  ///< channel width (couette)
  double eta3 = 0.0;
  double Y33 = 0.0;
};

/// Evaluate the closed-form fields of one elementary flow at a point and
/// time.
struct PointState {
  double rho = 1.0;
  Vec3 u;
  Ten2 B;
  SymTen2 Y;
  SymTen2 H;
};

PointState example_point(ExampleFlow which, const ExampleParams& p, double zeta1,
                         double zeta2, double tau);

/// Project the closed form onto a grid at time tau.
FieldState example_fields(ExampleFlow which, const ExampleParams& p, const Grid& grid,
                          double tau);

/// Wall observables of the closed forms.
double example1_wall_pressure(const ExampleParams& p);   ///< rho |v|^2
SymTen2 example4_extra_stress(const ExampleParams& p);   ///< -rho H at the stationary shear

/// Residual of the continuous balance rows on the closed-form fields,
/// evaluated analytically at one point (no grid). Zero for consistent
/// parameter choices.
double example_continuous_residual(ExampleFlow which, const ExampleParams& p, double zeta1,
                                   double zeta2, double tau);

// ---------------------------------------------------------------------------
// Numeric-vs-analytic comparison

struct ErrorNorms {
  double linf_rho = 0.0, l2_rho = 0.0;
  double linf_u = 0.0, l2_u = 0.0;
  double linf_H = 0.0, l2_H = 0.0;
  double linf_B = 0.0, l2_B = 0.0;
  double linf_Y = 0.0, l2_Y = 0.0;
};

/// Error norms between a numeric state and the closed form at the state's
/// time. Throws ShapeMismatch when the grids differ.
ErrorNorms verify_against_solver(ExampleFlow which, const ExampleParams& p,
                                 const FieldState& numeric);

/// Error norms between two states on the same grid.
ErrorNorms compare_states(const FieldState& a, const FieldState& b);

}  // namespace kinetic
