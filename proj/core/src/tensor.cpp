#include "kinetic/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "kinetic/errors.hpp"

namespace kinetic {

Ten2 inverse(const Ten2& t) {
  const double d = det(t);
  if (d == 0.0) throw PreconditionViolated("inverse: singular tensor");
  Ten2 r;
  r(0, 0) = (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) / d;
  r(0, 1) = (t(0, 2) * t(2, 1) - t(0, 1) * t(2, 2)) / d;
  r(0, 2) = (t(0, 1) * t(1, 2) - t(0, 2) * t(1, 1)) / d;
  r(1, 0) = (t(1, 2) * t(2, 0) - t(1, 0) * t(2, 2)) / d;
  r(1, 1) = (t(0, 0) * t(2, 2) - t(0, 2) * t(2, 0)) / d;
  r(1, 2) = (t(0, 2) * t(1, 0) - t(0, 0) * t(1, 2)) / d;
  r(2, 0) = (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0)) / d;
  r(2, 1) = (t(0, 1) * t(2, 0) - t(0, 0) * t(2, 1)) / d;
  r(2, 2) = (t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0)) / d;
  return r;
}

Ten2 ten3_apply_normal(const Ten3& m, const Vec3& n) {
  Ten2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = m(i, j, 0) * n.x + m(i, j, 1) * n.y + m(i, j, 2) * n.z;
  return r;
}

Ten2 ten3_grad_contract(const Ten3& b, const Ten3& m) {
  Ten2 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) s += b(i, r, k) * m(r, j, k);
      out(i, j) = s;
    }
  return out;
}

Decomposition decompose(const Ten2& t) {
  Decomposition d;
  d.symmetric = sym_part(t);
  d.skew = skw(t);
  d.tr = trace(t);
  const double third = d.tr / 3.0;
  d.deviator = d.symmetric.full();
  d.deviator(0, 0) -= third;
  d.deviator(1, 1) -= third;
  d.deviator(2, 2) -= third;
  return d;
}

namespace {

// One cyclic Jacobi sweep over the three off-diagonal entries.
// a is overwritten with the rotated matrix, v accumulates rotations.
void jacobi_sweep(std::array<std::array<double, 3>, 3>& a,
                  std::array<std::array<double, 3>, 3>& v) {
  constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pq : pairs) {
    const int p = pq[0], q = pq[1];
    const double apq = a[p][q];
    if (apq == 0.0) continue;
    const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    for (int k = 0; k < 3; ++k) {
      const double akp = a[k][p], akq = a[k][q];
      a[k][p] = c * akp - s * akq;
      a[k][q] = s * akp + c * akq;
    }
    for (int k = 0; k < 3; ++k) {
      const double apk = a[p][k], aqk = a[q][k];
      a[p][k] = c * apk - s * aqk;
      a[q][k] = s * apk + c * aqk;
    }
    for (int k = 0; k < 3; ++k) {
      const double vkp = v[k][p], vkq = v[k][q];
      v[k][p] = c * vkp - s * vkq;
      v[k][q] = s * vkp + c * vkq;
    }
  }
}

double offdiag_norm(const std::array<std::array<double, 3>, 3>& a) {
  return std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
}

// Deterministic sign: flip so the largest-magnitude component is positive.
void fix_sign(Vec3& u) {
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
  if (u[imax] < 0.0) u = -u;
}

}  // namespace

std::array<EigPair, 3> eig_sym(const SymTen2& s) {
  std::array<std::array<double, 3>, 3> a = s.full().a;
  std::array<std::array<double, 3>, 3> v = Ten2::identity().a;

  const double scale = norm_f(s);
  const double tol = 1e-15 * (scale > 0.0 ? scale : 1.0);
  for (int sweep = 0; sweep < 32 && offdiag_norm(a) > tol; ++sweep) jacobi_sweep(a, v);

  std::array<EigPair, 3> out;
  for (int k = 0; k < 3; ++k) {
    out[k].lambda = a[k][k];
    out[k].axis = {v[0][k], v[1][k], v[2][k]};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigPair& l, const EigPair& r) { return l.lambda > r.lambda; });

  // Rebuild bases of (near-)degenerate eigenspaces from coordinate axes so
  // the output does not depend on the rotation history.
  const double gap_tol = 1e-12 * (1.0 + std::abs(out[0].lambda));
  int start = 0;
  while (start < 3) {
    int end = start + 1;
    while (end < 3 && out[end - 1].lambda - out[end].lambda <= gap_tol) ++end;
    const int dim = end - start;
    if (dim > 1) {
      // Projector onto the cluster eigenspace.
      Ten2 proj;
      for (int k = start; k < end; ++k) proj += outer(out[k].axis, out[k].axis);
      int filled = 0;
      std::array<Vec3, 3> basis;
      for (int ax = 0; ax < 3 && filled < dim; ++ax) {
        Vec3 cand = proj * axis(ax);
        for (int b = 0; b < filled; ++b) cand -= dot(cand, basis[b]) * basis[b];
        const double n = norm(cand);
        if (n > 1e-8) basis[filled++] = cand / n;
      }
      for (int k = start; k < end && k - start < filled; ++k) out[k].axis = basis[k - start];
    }
    start = end;
  }
  for (auto& p : out) fix_sign(p.axis);
  return out;
}

SymTen2 sqrt_psd(const SymTen2& s) {
  const double tol = 1e-10 * (1.0 + norm_f(s));
  auto eig = eig_sym(s);
  SymTen2 r;
  for (const auto& p : eig) {
    if (p.lambda < -tol) throw NotPSD("sqrt_psd: eigenvalue below -tol_psd");
    const double l = p.lambda > 0.0 ? std::sqrt(p.lambda) : 0.0;
    r += l * sym_outer(p.axis);
  }
  return r;
}

SymTen2 pinv_psd(const SymTen2& s, double rel_cutoff) {
  const double cut = rel_cutoff * trace(s);
  auto eig = eig_sym(s);
  SymTen2 r;
  for (const auto& p : eig)
    if (p.lambda > cut && p.lambda > 0.0) r += (1.0 / p.lambda) * sym_outer(p.axis);
  return r;
}

SymTen2 range_projector(const SymTen2& s, double rel_cutoff) {
  const double cut = rel_cutoff * trace(s);
  auto eig = eig_sym(s);
  SymTen2 r;
  for (const auto& p : eig)
    if (p.lambda > cut && p.lambda > 0.0) r += sym_outer(p.axis);
  return r;
}

double min_eig(const SymTen2& s) {
  return eig_sym(s)[2].lambda;
}

double max_eig(const SymTen2& s) {
  return eig_sym(s)[0].lambda;
}

double project_psd(SymTen2& s) {
  auto eig = eig_sym(s);
  if (eig[2].lambda >= 0.0) return 0.0;
  SymTen2 r;
  for (const auto& p : eig)
    if (p.lambda > 0.0) r += p.lambda * sym_outer(p.axis);
  s = r;
  return -eig[2].lambda;
}

Ten2 skew_from_axial(const Vec3& w) {
  Ten2 t;
  t(0, 1) = -w.z; t(0, 2) = w.y;
  t(1, 0) = w.z;  t(1, 2) = -w.x;
  t(2, 0) = -w.y; t(2, 1) = w.x;
  return t;
}

Vec3 axial_from_skew(const Ten2& t) {
  if (norm_f(sym(t)) > 1e-12)
    throw PreconditionViolated("axial_from_skew: input has a symmetric part");
  return {t(2, 1), t(0, 2), t(1, 0)};
}

Ten2 rotation(const Vec3& unit_axis, double angle) {
  const Ten2 k = skew_from_axial(unit_axis);
  return Ten2::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace kinetic
