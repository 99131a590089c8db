// Manufactured smooth periodic fields with hand-coded analytic derivatives,
// used to verify the discrete operators and the assembled right-hand sides.
#pragma once

#include <cmath>
#include <numbers>

#include "kinetic/fields.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/tensor.hpp"

namespace mms {

using namespace kinetic;

struct Wave {
  double k1 = 2.0 * std::numbers::pi;
  double k2 = 2.0 * std::numbers::pi;

  double s1(double x) const { return std::sin(k1 * x); }
  double c1(double x) const { return std::cos(k1 * x); }
  double s2(double y) const { return std::sin(k2 * y); }
  double c2(double y) const { return std::cos(k2 * y); }
};

// scalar field rho = 1.5 + 0.3 sin(k1 x) cos(k2 y)
inline double rho(const Wave& w, double x, double y) {
  return 1.5 + 0.3 * w.s1(x) * w.c2(y);
}
inline Vec3 grad_rho(const Wave& w, double x, double y) {
  return {0.3 * w.k1 * w.c1(x) * w.c2(y), -0.3 * w.k2 * w.s1(x) * w.s2(y), 0.0};
}

// velocity with both components active
inline Vec3 velocity(const Wave& w, double x, double y) {
  return {0.4 * w.s1(x) * w.s2(y), 0.2 * w.c1(x) * w.c2(y), 0.0};
}
inline Ten2 velocity_grad(const Wave& w, double x, double y) {
  Ten2 L;
  L(0, 0) = 0.4 * w.k1 * w.c1(x) * w.s2(y);
  L(0, 1) = 0.4 * w.k2 * w.s1(x) * w.c2(y);
  L(1, 0) = -0.2 * w.k1 * w.s1(x) * w.c2(y);
  L(1, 1) = -0.2 * w.k2 * w.c1(x) * w.s2(y);
  return L;
}
inline Vec3 velocity_laplacian(const Wave& w, double x, double y) {
  const double kk = w.k1 * w.k1 + w.k2 * w.k2;
  const Vec3 u = velocity(w, x, y);
  return {-kk * u.x, -kk * u.y, 0.0};
}
inline Vec3 velocity_grad_div(const Wave& w, double x, double y) {
  // div u = 0.4 k1 c1 s2 - 0.2 k2 c1 s2 = (0.4 k1 - 0.2 k2) c1 s2
  const double a = 0.4 * w.k1 - 0.2 * w.k2;
  return {-a * w.k1 * w.s1(x) * w.s2(y), a * w.k2 * w.c1(x) * w.c2(y), 0.0};
}

// symmetric PD tensor field
inline SymTen2 ferment(const Wave& w, double x, double y) {
  return {1.0 + 0.2 * w.c1(x) * w.s2(y), 1.0 - 0.2 * w.s1(x) * w.s2(y), 0.8,
          0.1 * w.s1(x) * w.c2(y), 0.0, 0.0};
}
inline SymTen2 ferment_dx(const Wave& w, double x, double y) {
  return {-0.2 * w.k1 * w.s1(x) * w.s2(y), -0.2 * w.k1 * w.c1(x) * w.s2(y), 0.0,
          0.1 * w.k1 * w.c1(x) * w.c2(y), 0.0, 0.0};
}
inline SymTen2 ferment_dy(const Wave& w, double x, double y) {
  return {0.2 * w.k2 * w.c1(x) * w.c2(y), -0.2 * w.k2 * w.s1(x) * w.c2(y), 0.0,
          -0.1 * w.k2 * w.s1(x) * w.s2(y), 0.0, 0.0};
}
inline SymTen2 ferment_laplacian(const Wave& w, double x, double y) {
  const double kk = w.k1 * w.k1 + w.k2 * w.k2;
  SymTen2 f = ferment(w, x, y);
  f.xx -= 1.0;
  f.yy -= 1.0;
  f.zz -= 0.8;
  return -kk * f;
}

// general second-order tensor field for the micro-rate
inline Ten2 micro_rate(const Wave& w, double x, double y) {
  Ten2 B;
  B(0, 0) = 0.3 * w.s1(x) * w.c2(y);
  B(0, 1) = 0.2 * w.c1(x) * w.s2(y);
  B(1, 0) = -0.1 * w.s1(x) * w.s2(y);
  B(1, 1) = -0.3 * w.s1(x) * w.c2(y);
  B(2, 2) = 0.05 * w.c1(x) * w.c2(y);
  return B;
}
inline Ten2 micro_rate_dx(const Wave& w, double x, double y) {
  Ten2 B;
  B(0, 0) = 0.3 * w.k1 * w.c1(x) * w.c2(y);
  B(0, 1) = -0.2 * w.k1 * w.s1(x) * w.s2(y);
  B(1, 0) = -0.1 * w.k1 * w.c1(x) * w.s2(y);
  B(1, 1) = -0.3 * w.k1 * w.c1(x) * w.c2(y);
  B(2, 2) = -0.05 * w.k1 * w.s1(x) * w.c2(y);
  return B;
}
inline Ten2 micro_rate_dy(const Wave& w, double x, double y) {
  Ten2 B;
  B(0, 0) = -0.3 * w.k2 * w.s1(x) * w.s2(y);
  B(0, 1) = 0.2 * w.k2 * w.c1(x) * w.c2(y);
  B(1, 0) = -0.1 * w.k2 * w.s1(x) * w.c2(y);
  B(1, 1) = 0.3 * w.k2 * w.s1(x) * w.s2(y);
  B(2, 2) = -0.05 * w.k2 * w.c1(x) * w.s2(y);
  return B;
}

inline SymTen2 inertia(const Wave& w, double x, double y) {
  return {0.9 + 0.1 * w.s1(x) * w.s2(y), 0.9, 0.7 - 0.1 * w.c1(x) * w.c2(y),
          0.05 * w.c1(x) * w.s2(y), 0.0, 0.0};
}
inline SymTen2 inertia_dx(const Wave& w, double x, double y) {
  return {0.1 * w.k1 * w.c1(x) * w.s2(y), 0.0, 0.1 * w.k1 * w.s1(x) * w.c2(y),
          -0.05 * w.k1 * w.s1(x) * w.s2(y), 0.0, 0.0};
}
inline SymTen2 inertia_dy(const Wave& w, double x, double y) {
  return {0.1 * w.k2 * w.s1(x) * w.c2(y), 0.0, 0.1 * w.k2 * w.c1(x) * w.s2(y),
          0.05 * w.k2 * w.c1(x) * w.c2(y), 0.0, 0.0};
}

/// Fill a FieldState (interior cells) with the manufactured fields on a
/// unit-square periodic grid.
inline FieldState project(const Grid& g) {
  Wave w;
  FieldState s(g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const double x = g.center1(i), y = g.center2(j);
      s.rho(i, j) = rho(w, x, y);
      s.u(i, j) = velocity(w, x, y);
      s.H(i, j) = ferment(w, x, y);
      s.B(i, j) = micro_rate(w, x, y);
      s.Y(i, j) = inertia(w, x, y);
    }
  return s;
}

}  // namespace mms
