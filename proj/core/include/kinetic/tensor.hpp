#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace kinetic {

// ---------------------------------------------------------------------------
// Vec3

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 v) { return v *= s; }
inline Vec3 operator*(Vec3 v, double s) { return v *= s; }
inline Vec3 operator/(Vec3 v, double s) { return v *= (1.0 / s); }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Unit vector along coordinate axis i (0-based).
inline Vec3 axis(int i) {
  Vec3 v;
  v[i] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// Ten2: general second-order tensor, components (i,j)

struct SymTen2;

struct Ten2 {
  // row-major: a[i][j]
  std::array<std::array<double, 3>, 3> a{};

  constexpr Ten2() = default;

  double& operator()(int i, int j) { return a[i][j]; }
  double operator()(int i, int j) const { return a[i][j]; }

  Ten2& operator+=(const Ten2& o);
  Ten2& operator-=(const Ten2& o);
  Ten2& operator*=(double s);

  static Ten2 identity();
  static Ten2 zero() { return {}; }
};

inline Ten2 Ten2::identity() {
  Ten2 t;
  t(0, 0) = t(1, 1) = t(2, 2) = 1.0;
  return t;
}

inline Ten2& Ten2::operator+=(const Ten2& o) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] += o.a[i][j];
  return *this;
}
inline Ten2& Ten2::operator-=(const Ten2& o) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] -= o.a[i][j];
  return *this;
}
inline Ten2& Ten2::operator*=(double s) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] *= s;
  return *this;
}

inline Ten2 operator+(Ten2 a, const Ten2& b) { return a += b; }
inline Ten2 operator-(Ten2 a, const Ten2& b) { return a -= b; }
inline Ten2 operator*(double s, Ten2 t) { return t *= s; }
inline Ten2 operator*(Ten2 t, double s) { return t *= s; }
inline Ten2 operator-(const Ten2& t) { return -1.0 * t; }

inline Ten2 operator*(const Ten2& a, const Ten2& b) {
  Ten2 c;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < 3; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vec3 operator*(const Ten2& t, const Vec3& v) {
  return {t(0, 0) * v.x + t(0, 1) * v.y + t(0, 2) * v.z,
          t(1, 0) * v.x + t(1, 1) * v.y + t(1, 2) * v.z,
          t(2, 0) * v.x + t(2, 1) * v.y + t(2, 2) * v.z};
}

inline Ten2 transpose(const Ten2& t) {
  Ten2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = t(j, i);
  return r;
}

inline double trace(const Ten2& t) { return t(0, 0) + t(1, 1) + t(2, 2); }

/// Full double contraction a_ij b_ij.
inline double ddot(const Ten2& a, const Ten2& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a(i, j) * b(i, j);
  return s;
}

inline double norm_f(const Ten2& t) { return std::sqrt(ddot(t, t)); }

inline Ten2 outer(const Vec3& a, const Vec3& b) {
  Ten2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = a[i] * b[j];
  return t;
}

inline Ten2 sym(const Ten2& t) {
  Ten2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (t(i, j) + t(j, i));
  return r;
}

inline Ten2 skw(const Ten2& t) {
  Ten2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (t(i, j) - t(j, i));
  return r;
}

inline double det(const Ten2& t) {
  return t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) -
         t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0)) +
         t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
}

Ten2 inverse(const Ten2& t);

// ---------------------------------------------------------------------------
// SymTen2: symmetric second-order tensor, 6 independent components.
// Storage order (11, 22, 33, 12, 13, 23) matches the snapshot file schema.

struct SymTen2 {
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;

  constexpr SymTen2() = default;
  constexpr SymTen2(double xx_, double yy_, double zz_, double xy_, double xz_, double yz_)
      : xx(xx_), yy(yy_), zz(zz_), xy(xy_), xz(xz_), yz(yz_) {}

  double operator()(int i, int j) const {
    if (i == j) return (&xx)[i];
    const int k = i + j;  // 1 -> xy, 2 -> xz, 3 -> yz
    return (&xy)[k - 1];
  }

  double& component(int k) { return (&xx)[k]; }
  double component(int k) const { return (&xx)[k]; }

  SymTen2& operator+=(const SymTen2& o) {
    xx += o.xx; yy += o.yy; zz += o.zz; xy += o.xy; xz += o.xz; yz += o.yz;
    return *this;
  }
  SymTen2& operator-=(const SymTen2& o) {
    xx -= o.xx; yy -= o.yy; zz -= o.zz; xy -= o.xy; xz -= o.xz; yz -= o.yz;
    return *this;
  }
  SymTen2& operator*=(double s) {
    xx *= s; yy *= s; zz *= s; xy *= s; xz *= s; yz *= s;
    return *this;
  }

  Ten2 full() const {
    Ten2 t;
    t(0, 0) = xx; t(1, 1) = yy; t(2, 2) = zz;
    t(0, 1) = t(1, 0) = xy;
    t(0, 2) = t(2, 0) = xz;
    t(1, 2) = t(2, 1) = yz;
    return t;
  }

  static SymTen2 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymTen2 zero() { return {}; }
};

inline SymTen2 operator+(SymTen2 a, const SymTen2& b) { return a += b; }
inline SymTen2 operator-(SymTen2 a, const SymTen2& b) { return a -= b; }
inline SymTen2 operator*(double s, SymTen2 t) { return t *= s; }
inline SymTen2 operator*(SymTen2 t, double s) { return t *= s; }
inline SymTen2 operator-(const SymTen2& t) { return -1.0 * t; }

inline double trace(const SymTen2& t) { return t.xx + t.yy + t.zz; }

inline double ddot(const SymTen2& a, const SymTen2& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz +
         2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

inline double norm_f(const SymTen2& t) { return std::sqrt(ddot(t, t)); }

/// Symmetric part of a general tensor, stored exactly symmetric.
inline SymTen2 sym_part(const Ten2& t) {
  return {t(0, 0), t(1, 1), t(2, 2),
          0.5 * (t(0, 1) + t(1, 0)),
          0.5 * (t(0, 2) + t(2, 0)),
          0.5 * (t(1, 2) + t(2, 1))};
}

inline SymTen2 sym_outer(const Vec3& v) {
  return {v.x * v.x, v.y * v.y, v.z * v.z, v.x * v.y, v.x * v.z, v.y * v.z};
}

inline Vec3 operator*(const SymTen2& t, const Vec3& v) {
  return {t.xx * v.x + t.xy * v.y + t.xz * v.z,
          t.xy * v.x + t.yy * v.y + t.yz * v.z,
          t.xz * v.x + t.yz * v.y + t.zz * v.z};
}

inline Ten2 operator*(const Ten2& a, const SymTen2& b) { return a * b.full(); }
inline Ten2 operator*(const SymTen2& a, const Ten2& b) { return a.full() * b; }
inline Ten2 operator*(const SymTen2& a, const SymTen2& b) { return a.full() * b.full(); }

// ---------------------------------------------------------------------------
// Ten3: third-order tensor with an optional minor-left-symmetry tag,
// component (i,j,k) = value[(i*3 + j)*3 + k].

struct Ten3 {
  std::array<double, 27> v{};
  bool minor_left_symmetric = false;

  double& operator()(int i, int j, int k) { return v[(i * 3 + j) * 3 + k]; }
  double operator()(int i, int j, int k) const { return v[(i * 3 + j) * 3 + k]; }

  Ten3& operator+=(const Ten3& o) {
    for (int n = 0; n < 27; ++n) v[n] += o.v[n];
    minor_left_symmetric = minor_left_symmetric && o.minor_left_symmetric;
    return *this;
  }
  Ten3& operator*=(double s) {
    for (int n = 0; n < 27; ++n) v[n] *= s;
    return *this;
  }
};

inline Ten3 operator+(Ten3 a, const Ten3& b) { return a += b; }
inline Ten3 operator*(double s, Ten3 t) { return t *= s; }

inline double norm_f(const Ten3& t) {
  double s = 0.0;
  for (double c : t.v) s += c * c;
  return std::sqrt(s);
}

/// Full triple contraction a_ijk b_ijk.
inline double tdot(const Ten3& a, const Ten3& b) {
  double s = 0.0;
  for (int n = 0; n < 27; ++n) s += a.v[n] * b.v[n];
  return s;
}

/// Contraction with a normal on the last slot: (m n)_ij = m_ijl n_l.
Ten2 ten3_apply_normal(const Ten3& m, const Vec3& n);

/// Gradient-style contraction (b m^t)_ij = b_irk m_rjk.
Ten2 ten3_grad_contract(const Ten3& b, const Ten3& m);

// ---------------------------------------------------------------------------
// Decompositions

struct Decomposition {
  SymTen2 symmetric;   ///< sym t
  Ten2 skew;           ///< skw t
  double tr = 0.0;     ///< trace of t
  Ten2 deviator;       ///< traceless part of sym t
};

/// Split a tensor into symmetric part, skew part, trace, and the deviator of
/// the symmetric part. sym + skw reconstructs the input exactly.
Decomposition decompose(const Ten2& t);

struct EigPair {
  double lambda = 0.0;  ///< eigenvalue (chi^2 in the ferment reading)
  Vec3 axis;            ///< unit eigenvector
};

/// Eigen-decomposition of a symmetric tensor, eigenvalues in descending
/// order. Cyclic Jacobi, so eigenvectors are orthonormal to round-off.
/// Within (near-)degenerate clusters the basis is rebuilt by Gram-Schmidt
/// against the coordinate axes so outputs are reproducible.
std::array<EigPair, 3> eig_sym(const SymTen2& s);

/// PSD square root. Eigenvalues in (-tol_psd, 0) with
/// tol_psd = 1e-10*(1+|s|) clamp to zero; smaller ones raise NotPSD.
SymTen2 sqrt_psd(const SymTen2& s);

/// Moore-Penrose pseudo-inverse of a PSD tensor. Eigenvalues below
/// rel_cutoff * trace are treated as zero.
SymTen2 pinv_psd(const SymTen2& s, double rel_cutoff = 1e-12);

/// Orthogonal projector onto the range of a PSD tensor (same cutoff rule
/// as pinv_psd).
SymTen2 range_projector(const SymTen2& s, double rel_cutoff = 1e-12);

/// Smallest eigenvalue of a symmetric tensor.
double min_eig(const SymTen2& s);
/// Largest eigenvalue of a symmetric tensor.
double max_eig(const SymTen2& s);

/// Clamp negative eigenvalues to zero. Returns the magnitude of the most
/// negative eigenvalue removed (0 if already PSD).
double project_psd(SymTen2& s);

// ---------------------------------------------------------------------------
// Axial vector <-> skew tensor

/// W with W u = w x u for all u.
Ten2 skew_from_axial(const Vec3& w);

/// Inverse of skew_from_axial; rejects tensors whose symmetric part has
/// Frobenius norm above 1e-12.
Vec3 axial_from_skew(const Ten2& t);

/// Rotation about a unit axis by angle (Rodrigues).
Ten2 rotation(const Vec3& unit_axis, double angle);

}  // namespace kinetic
