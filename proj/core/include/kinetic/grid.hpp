#pragma once

#include <vector>

#include "kinetic/errors.hpp"
#include "kinetic/tensor.hpp"

namespace kinetic {

/// Structured channel grid. A cell count of 1 deactivates that axis (all
/// derivatives along it vanish); active axes need at least 4 cells.
struct Grid {
  int n1 = 1;
  int n2 = 1;
  double h1 = 1.0;
  double h2 = 1.0;

  bool active1() const { return n1 > 1; }
  bool active2() const { return n2 > 1; }
  int dimension() const { return (active1() ? 1 : 0) + (active2() ? 1 : 0); }
  double delta() const { return n2 * h2; }  ///< channel width
  double length1() const { return n1 * h1; }
  double cell_volume() const { return h1 * h2; }
  double center1(int i) const { return (i + 0.5) * h1; }
  double center2(int j) const { return (j + 0.5) * h2; }
  int cells() const { return n1 * n2; }

  void validate() const {
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw ConfigError("grid spacings must be positive");
    if (n1 < 1 || n2 < 1) throw ConfigError("grid counts must be >= 1");
    if ((n1 > 1 && n1 < 4) || (n2 > 1 && n2 < 4))
      throw ConfigError("active grid axes need at least 4 cells");
  }
};

/// Cell-centered field with two ghost layers on each side.
template <typename T>
class Field2 {
 public:
  static constexpr int ghost = 2;

  Field2() = default;
  Field2(int n1, int n2) : n1_(n1), n2_(n2), data_((n1 + 2 * ghost) * (n2 + 2 * ghost)) {}
  explicit Field2(const Grid& g) : Field2(g.n1, g.n2) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  /// Apply f(i, j) over interior cells.
  template <typename F>
  void for_interior(F&& f) const {
    for (int j = 0; j < n2_; ++j)
      for (int i = 0; i < n1_; ++i) f(i, j);
  }

 private:
  int index(int i, int j) const { return (j + ghost) * (n1_ + 2 * ghost) + (i + ghost); }

  int n1_ = 0, n2_ = 0;
  std::vector<T> data_;
};

// --------------------------------------------------------------------------
// Boundary specification

enum class VelocityBC { periodic, dirichlet, free_slip, outflow };
enum class FermentBC { periodic, flux_free, loss, dirichlet };

/// Conditions on one side of the channel.
struct SideSpec {
  VelocityBC velocity = VelocityBC::periodic;
  Vec3 velocity_value;               ///< wall/inflow velocity for dirichlet
  FermentBC ferment = FermentBC::periodic;
  SymTen2 ferment_value;             ///< dirichlet value for H
  double rho_inflow = 1.0;           ///< inflow density
  Ten2 B_inflow;
  SymTen2 Y_inflow;
};

/// Side order: x1_lo, x1_hi, x2_lo, x2_hi.
struct BoundarySpec {
  std::array<SideSpec, 4> side{};

  void validate(const Grid& g) const {
    auto paired = [&](int a, int b) {
      const bool pa = side[a].velocity == VelocityBC::periodic;
      const bool pb = side[b].velocity == VelocityBC::periodic;
      if (pa != pb) throw ConfigError("periodic sides must come in matched pairs");
      const bool fa = side[a].ferment == FermentBC::periodic;
      const bool fb = side[b].ferment == FermentBC::periodic;
      if (fa != fb) throw ConfigError("periodic ferment sides must come in matched pairs");
      if (pa != fa) throw ConfigError("velocity and ferment must agree on periodicity");
    };
    paired(0, 1);
    paired(2, 3);
    (void)g;
  }

  bool periodic1() const { return side[0].velocity == VelocityBC::periodic; }
  bool periodic2() const { return side[2].velocity == VelocityBC::periodic; }
};

/// Time-dependent boundary state: face values for ferment-loss sides decay
/// as exp(-gamma_hat * tau) from their initial trace.
struct BoundaryRuntime {
  // For sides 0..3: face values of H captured at start (per cell along the side).
  std::array<std::vector<SymTen2>, 4> H_face0;
  double gamma_hat = 0.0;

  SymTen2 H_face(int s, int k, double tau) const {
    return std::exp(-gamma_hat * tau) * H_face0[s][k];
  }
};

// --------------------------------------------------------------------------
// Ghost fill primitives (lo side shown; hi mirrored). g = 1, 2.

namespace ghosts {

// quadratic extrapolation through a face value, exact for parabolas
template <typename T>
T dirichlet1(const T& face, const T& c0, const T& c1) {
  return (8.0 / 3.0) * face - 2.0 * c0 + (1.0 / 3.0) * c1;
}
template <typename T>
T dirichlet2(const T& face, const T& c0, const T& c1) {
  return 8.0 * face - 9.0 * c0 + 2.0 * c1;
}
// linear extrapolation used at outflow sides
template <typename T>
T extrap1(const T& c0, const T& c1) {
  return 2.0 * c0 - 1.0 * c1;
}
template <typename T>
T extrap2(const T& c0, const T& c1) {
  return 3.0 * c0 - 2.0 * c1;
}

}  // namespace ghosts

/// Third-order face value from the three nearest cell centers.
template <typename T>
T face_value(const T& c0, const T& c1, const T& c2) {
  return (1.0 / 8.0) * (15.0 * c0 - 10.0 * c1 + 3.0 * c2);
}

// --------------------------------------------------------------------------
// Difference stencils. All assume ghosts are filled; h is the spacing of
// the axis. axis: 0 -> i, 1 -> j.

template <typename T>
T central_d1(const Field2<T>& f, int i, int j, int axis, double h) {
  if (axis == 0) return (1.0 / (2.0 * h)) * (f(i + 1, j) - f(i - 1, j));
  return (1.0 / (2.0 * h)) * (f(i, j + 1) - f(i, j - 1));
}

template <typename T>
T central_d2(const Field2<T>& f, int i, int j, int axis, double h) {
  if (axis == 0) return (1.0 / (h * h)) * (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j));
  return (1.0 / (h * h)) * (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1));
}

/// Mixed derivative d^2/(dx1 dx2) via the four diagonal neighbours.
template <typename T>
T cross_d2(const Field2<T>& f, int i, int j, double h1, double h2) {
  return (1.0 / (4.0 * h1 * h2)) *
         (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1));
}

/// Second-order upwind first derivative, biased against the flow direction.
template <typename T>
T upwind_d1(const Field2<T>& f, int i, int j, int axis, double h, double wind) {
  const double s = 1.0 / (2.0 * h);
  if (axis == 0) {
    if (wind >= 0.0) return s * (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j));
    return s * (-3.0 * f(i, j) + 4.0 * f(i + 1, j) - f(i + 2, j));
  }
  if (wind >= 0.0) return s * (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2));
  return s * (-3.0 * f(i, j) + 4.0 * f(i, j + 1) - f(i, j + 2));
}

template <typename T>
T laplacian(const Field2<T>& f, const Grid& g, int i, int j) {
  T out{};
  if (g.active1()) out += central_d2(f, i, j, 0, g.h1);
  if (g.active2()) out += central_d2(f, i, j, 1, g.h2);
  return out;
}

/// Velocity gradient L_ij = d_j u_i at a cell.
Ten2 velocity_gradient(const Field2<Vec3>& u, const Grid& g, int i, int j);

/// grad of a scalar field.
Vec3 scalar_gradient(const Field2<double>& f, const Grid& g, int i, int j);

/// (div M)_i = d_j M_ij for a tensor field.
Vec3 tensor_divergence(const Field2<Ten2>& m, const Grid& g, int i, int j);
Vec3 tensor_divergence(const Field2<SymTen2>& m, const Grid& g, int i, int j);

/// Third-order gradient (grad M)_ijk = d_k M_ij.
Ten3 tensor_gradient(const Field2<Ten2>& m, const Grid& g, int i, int j);
Ten3 tensor_gradient(const Field2<SymTen2>& m, const Grid& g, int i, int j);

}  // namespace kinetic
