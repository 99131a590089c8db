#include "kinetic/constitutive.hpp"

#include "kinetic/errors.hpp"

namespace kinetic {

void MaterialParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ConfigError(std::string("material parameter must be >= 0: ") + name);
  };
  nonneg(eta1, "eta1");
  nonneg(eta3, "eta3");
  nonneg(alpha, "alpha");
  nonneg(beta, "beta");
  nonneg(gamma_hat, "gamma_hat");
  nonneg(kappa, "kappa");
  nonneg(nu_over_lambda, "nu_over_lambda");
}

LocalKineticState LocalKineticState::make(double rho, const Ten2& L, const Ten2& B,
                                          const SymTen2& H) {
  LocalKineticState s;
  s.rho = rho;
  s.L = L;
  s.B = B;
  s.H = H;
  s.D = sym_part(L);
  return s;
}

Ten2 stress_T(const LocalKineticState& s, const MaterialParams& p) {
  Ten2 t = -s.rho * s.H.full() + 2.0 * p.eta1 * s.D.full() + 2.0 * p.eta3 * (s.L - s.B);
  if (p.include_eta2) t += 2.0 * p.eta2 * sym(s.B);
  return t;
}

Ten2 internal_torque_A(const LocalKineticState& s, const MaterialParams& p) {
  return s.rho * s.H.full() - 2.0 * p.eta3 * transpose(s.L - s.B);
}

SymTen2 stirring_Z(const LocalKineticState& s, const MaterialParams& p) {
  SymTen2 z = 2.0 * sym_part((s.L - s.B) * (s.rho * s.H.full()));
  z += (p.alpha * s.rho) * s.H;
  z -= p.gamma * sym_part(s.D.full() * s.D.full());
  return z;
}

Ten3 hyperstress_s(const LocalKineticState& s, const MaterialParams& p) {
  Ten3 out = (-p.beta) * s.grad_rhoH;
  out.minor_left_symmetric = true;
  return out;
}

SymTen2 tensor_power_density(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                             const SymTen2& Z, const Ten3& m) {
  Ten2 acc = s.L * transpose(T) + s.B * A + ten3_grad_contract(s.bb, m);
  SymTen2 out = sym_part(acc);
  out += 0.5 * Z;
  return -out;
}

double scalar_power_density(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                            const SymTen2& Z, const Ten3& m) {
  double p = ddot(s.L, T) + ddot(s.B, transpose(A)) + 0.5 * trace(Z);
  // bb . (m^t)^T in components: bb_irk m_rik
  for (int i = 0; i < 3; ++i)
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) p += s.bb(i, r, k) * m(r, i, k);
  return -p;
}

SymTen2 conservative_Z(const LocalKineticState& s) {
  // -2 sym{L Tc^T + B Ac} with Tc = -rho H, Ac = rho H
  const Ten2 rhoH = s.rho * s.H.full();
  return -2.0 * sym_part(s.L * transpose(-rhoH) + s.B * rhoH);
}

ShiftedRates observer_shift(const Ten2& L, const Ten2& B, const Vec3& w) {
  const Ten2 spin = skew_from_axial(w);
  return {L + spin, B + spin};
}

double energy_rhs_scalar(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                         const SymTen2& Z, const Ten3& m, double div_q, double lambda_heat) {
  return -scalar_power_density(s, T, A, Z, m) - div_q + lambda_heat;
}

SymTen2 energy_rhs_tensor(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                          const SymTen2& Z, const Ten3& m, const Ten2& grad_q,
                          double lambda_heat) {
  SymTen2 rhs = -1.0 * tensor_power_density(s, T, A, Z, m);
  rhs -= sym_part(grad_q);
  const double third = lambda_heat / 3.0;
  rhs.xx += third;
  rhs.yy += third;
  rhs.zz += third;
  return rhs;
}

double energy_rhs_tensor_residual(const LocalKineticState& s, const Ten2& T, const Ten2& A,
                                  const SymTen2& Z, const Ten3& m, const Ten2& grad_q,
                                  double lambda_heat) {
  SymTen2 rhs = energy_rhs_tensor(s, T, A, Z, m, grad_q, lambda_heat);
  const double third = trace(rhs) / 3.0;
  rhs.xx -= third;
  rhs.yy -= third;
  rhs.zz -= third;
  return norm_f(rhs);
}

}  // namespace kinetic
