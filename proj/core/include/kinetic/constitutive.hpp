#pragma once

#include "kinetic/tensor.hpp"

namespace kinetic {

/// Density-independent material coefficients of the closure.
struct MaterialParams {
  double eta1 = 0.0;        ///< shear viscosity on D
  double eta2 = 0.0;        ///< coefficient of sym B (off by default)
  double eta3 = 0.0;        ///< macro-micro coupling viscosity on L - B
  double alpha = 0.0;       ///< collision-loss rate on the ferment
  double beta = 0.0;        ///< ferment transfer (diffusion) coefficient
  double gamma = 0.0;       ///< gross-motion stimulus coefficient on D^2
  double gamma_hat = 0.0;   ///< wall ferment-loss rate
  double kappa = 0.0;       ///< heat conduction coefficient
  double nu_over_lambda = 0.0;  ///< number density / mean free path, diagnostics only
  bool include_eta2 = false;    ///< enable the optional 2*eta2*sym(B) stress term

  void validate() const;
};

/// Local kinematic state of one material element.
struct LocalKineticState {
  double rho = 1.0;   ///< mass density
  Ten2 L;             ///< velocity gradient
  Ten2 B;             ///< affine micro-rate
  SymTen2 H;          ///< ferment tensor (PSD)
  Ten3 grad_rhoH;     ///< (i,j,k) = d_k (rho H)_ij
  Ten3 bb;            ///< (i,j,k) = d_k B_ij
  SymTen2 D;          ///< sym L, kept consistent by make()

  static LocalKineticState make(double rho, const Ten2& L, const Ten2& B, const SymTen2& H);
};

/// Cauchy stress T = -rho H + 2 eta1 D + 2 eta3 (L - B)
/// (+ 2 eta2 sym B when enabled).
Ten2 stress_T(const LocalKineticState& s, const MaterialParams& p);

/// Internal tensor torque A = rho H - 2 eta3 (L - B)^T; satisfies
/// skw A = skw T for every state.
Ten2 internal_torque_A(const LocalKineticState& s, const MaterialParams& p);

/// Stirring resistance Z = 2 sym[(L - B) rho H] + alpha rho H - gamma D^2.
SymTen2 stirring_Z(const LocalKineticState& s, const MaterialParams& p);

/// Ferment hyperstress s = -beta grad(rho H); minor-left symmetric.
Ten3 hyperstress_s(const LocalKineticState& s, const MaterialParams& p);

/// Tensor power of internal actions, -sym(Z/2 + L T^T + B A + bb m^t).
SymTen2 tensor_power_density(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                             const SymTen2& Z, const Ten3& m);

/// Scalar power of internal actions,
/// -[L.T + B.A^T + bb.(m^t)^T + tr(Z)/2]; equals the trace of the tensor form.
double scalar_power_density(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                            const SymTen2& Z, const Ten3& m);

/// The stirring tensor that zeroes the total internal tensor power when the
/// conservative parts T = -rho H, A = rho H act alone: 2 sym[(L - B) rho H].
SymTen2 conservative_Z(const LocalKineticState& s);

/// Kinematics seen by an observer rotating at rate w: both L and B pick up
/// the same skew increment, so L - B is unchanged.
struct ShiftedRates {
  Ten2 L;
  Ten2 B;
};
ShiftedRates observer_shift(const Ten2& L, const Ten2& B, const Vec3& w);

/// Scalar heat balance: returns rho * eps_dot =
/// L.T + B.A^T + bb.(m^t)^T + tr(Z)/2 - div q + lambda.
/// lambda is the volumetric heating rate.
double energy_rhs_scalar(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                         const SymTen2& Z, const Ten3& m, double div_q, double lambda_heat);

/// The full right-hand side of the tensor heat balance,
/// sym(L T^T + B A + bb m^t + Z/2 - grad q) + lambda I / 3.
/// Spherical iff the tensor form is consistent with an isotropic internal
/// energy; its trace equals energy_rhs_scalar.
SymTen2 energy_rhs_tensor(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                          const SymTen2& Z, const Ten3& m, const Ten2& grad_q,
                          double lambda_heat);

/// Frobenius norm of the deviatoric part of energy_rhs_tensor; zero iff the
/// tensor heat balance admits a spherical internal energy.
double energy_rhs_tensor_residual(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                                  const SymTen2& Z, const Ten3& m, const Ten2& grad_q,
                                  double lambda_heat);

}  // namespace kinetic
