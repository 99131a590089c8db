#include "kinetic/grid.hpp"

#include <cmath>
#include <functional>

#include "kinetic/fields.hpp"

namespace kinetic {

Ten2 velocity_gradient(const Field2<Vec3>& u, const Grid& g, int i, int j) {
  Ten2 L;
  if (g.active1()) {
    const Vec3 d1 = central_d1(u, i, j, 0, g.h1);
    L(0, 0) = d1.x; L(1, 0) = d1.y; L(2, 0) = d1.z;
  }
  if (g.active2()) {
    const Vec3 d2 = central_d1(u, i, j, 1, g.h2);
    L(0, 1) = d2.x; L(1, 1) = d2.y; L(2, 1) = d2.z;
  }
  return L;
}

Vec3 scalar_gradient(const Field2<double>& f, const Grid& g, int i, int j) {
  Vec3 r;
  if (g.active1()) r.x = central_d1(f, i, j, 0, g.h1);
  if (g.active2()) r.y = central_d1(f, i, j, 1, g.h2);
  return r;
}

Vec3 tensor_divergence(const Field2<Ten2>& m, const Grid& g, int i, int j) {
  Vec3 r;
  if (g.active1()) {
    const Ten2 d = central_d1(m, i, j, 0, g.h1);
    r.x += d(0, 0); r.y += d(1, 0); r.z += d(2, 0);
  }
  if (g.active2()) {
    const Ten2 d = central_d1(m, i, j, 1, g.h2);
    r.x += d(0, 1); r.y += d(1, 1); r.z += d(2, 1);
  }
  return r;
}

Vec3 tensor_divergence(const Field2<SymTen2>& m, const Grid& g, int i, int j) {
  Vec3 r;
  if (g.active1()) {
    const SymTen2 d = central_d1(m, i, j, 0, g.h1);
    r.x += d(0, 0); r.y += d(1, 0); r.z += d(2, 0);
  }
  if (g.active2()) {
    const SymTen2 d = central_d1(m, i, j, 1, g.h2);
    r.x += d(0, 1); r.y += d(1, 1); r.z += d(2, 1);
  }
  return r;
}

Ten3 tensor_gradient(const Field2<Ten2>& m, const Grid& g, int i, int j) {
  Ten3 t;
  for (int k = 0; k < 2; ++k) {
    if (k == 0 && !g.active1()) continue;
    if (k == 1 && !g.active2()) continue;
    const Ten2 d = central_d1(m, i, j, k, k == 0 ? g.h1 : g.h2);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) t(a, b, k) = d(a, b);
  }
  return t;
}

Ten3 tensor_gradient(const Field2<SymTen2>& m, const Grid& g, int i, int j) {
  Ten3 t;
  t.minor_left_symmetric = true;
  for (int k = 0; k < 2; ++k) {
    if (k == 0 && !g.active1()) continue;
    if (k == 1 && !g.active2()) continue;
    const SymTen2 d = central_d1(m, i, j, k, k == 0 ? g.h1 : g.h2);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) t(a, b, k) = d(a, b);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Ghost filling

namespace {

enum class GhostMode { wrap, mirror, odd_mirror, dirichlet, extrap, copy };

template <typename T>
void fill_side(Field2<T>& F, const Grid& g, int side, GhostMode mode,
               const std::function<T(int)>& face = {}) {
  const bool on_x1 = side < 2;
  const int n = on_x1 ? g.n1 : g.n2;
  const bool lo = (side % 2) == 0;
  auto at = [&](int a, int k) -> T& { return on_x1 ? F(a, k) : F(k, a); };

  // x1 sides run over interior rows only; the later x2 pass extends over the
  // already-filled ghost columns, which defines the corners.
  const int k_begin = on_x1 ? 0 : -Field2<T>::ghost;
  const int k_end = on_x1 ? g.n2 : g.n1 + Field2<T>::ghost;

  for (int k = k_begin; k < k_end; ++k) {
    T g1{}, g2{};
    const T c0 = lo ? at(0, k) : at(n - 1, k);
    switch (mode) {
      case GhostMode::copy:
        g1 = c0;
        g2 = c0;
        break;
      case GhostMode::wrap:
        g1 = lo ? at(n - 1, k) : at(0, k);
        g2 = lo ? at(n - 2, k) : at(1, k);
        break;
      case GhostMode::mirror: {
        const T c1 = lo ? at(1, k) : at(n - 2, k);
        g1 = c0;
        g2 = c1;
        break;
      }
      case GhostMode::odd_mirror: {
        const T c1 = lo ? at(1, k) : at(n - 2, k);
        g1 = -1.0 * c0;
        g2 = -1.0 * c1;
        break;
      }
      case GhostMode::dirichlet: {
        const T c1 = lo ? at(1, k) : at(n - 2, k);
        const T fv = face(k);
        g1 = ghosts::dirichlet1(fv, c0, c1);
        g2 = ghosts::dirichlet2(fv, c0, c1);
        break;
      }
      case GhostMode::extrap: {
        const T c1 = lo ? at(1, k) : at(n - 2, k);
        g1 = ghosts::extrap1(c0, c1);
        g2 = ghosts::extrap2(c0, c1);
        break;
      }
    }
    if (lo) {
      at(-1, k) = g1;
      at(-2, k) = g2;
    } else {
      at(n, k) = g1;
      at(n + 1, k) = g2;
    }
  }
}

// Inward normal velocity of a dirichlet side; positive means inflow.
double inward_velocity(const SideSpec& s, int side) {
  switch (side) {
    case 0: return s.velocity_value.x;
    case 1: return -s.velocity_value.x;
    case 2: return s.velocity_value.y;
    default: return -s.velocity_value.y;
  }
}

// Negate one velocity component across the ghost layers of a side.
void flip_normal_component(Field2<Vec3>& u, const Grid& g, int side) {
  const bool on_x1 = side < 2;
  const int comp = on_x1 ? 0 : 1;
  const bool lo = (side % 2) == 0;
  const int n = on_x1 ? g.n1 : g.n2;
  auto at = [&](int a, int k) -> Vec3& { return u(on_x1 ? a : k, on_x1 ? k : a); };
  const int k_begin = on_x1 ? 0 : -2;
  const int k_end = on_x1 ? g.n2 : g.n1 + 2;
  for (int k = k_begin; k < k_end; ++k)
    for (int gl = 1; gl <= 2; ++gl) {
      Vec3& v = at(lo ? -gl : n - 1 + gl, k);
      v[comp] = -v[comp];
    }
}

}  // namespace

void fill_ghosts(FieldState& s, const BoundarySpec& bc, const BoundaryRuntime& rt,
                 double tau) {
  const Grid& g = s.grid;
  for (int side = 0; side < 4; ++side) {
    const bool on_x1 = side < 2;
    const bool active = on_x1 ? g.active1() : g.active2();
    const SideSpec& spec = bc.side[side];

    if (!active) {
      fill_side<double>(s.rho, g, side, GhostMode::copy);
      fill_side<Vec3>(s.u, g, side, GhostMode::copy);
      fill_side<SymTen2>(s.Y, g, side, GhostMode::copy);
      fill_side<Ten2>(s.B, g, side, GhostMode::copy);
      fill_side<SymTen2>(s.H, g, side, GhostMode::copy);
      if (s.thermal) fill_side<double>(s.eps, g, side, GhostMode::copy);
      continue;
    }

    // velocity
    switch (spec.velocity) {
      case VelocityBC::periodic:
        fill_side<Vec3>(s.u, g, side, GhostMode::wrap);
        break;
      case VelocityBC::dirichlet:
        fill_side<Vec3>(s.u, g, side, GhostMode::dirichlet,
                        [&](int) { return spec.velocity_value; });
        break;
      case VelocityBC::free_slip:
        fill_side<Vec3>(s.u, g, side, GhostMode::mirror);
        flip_normal_component(s.u, g, side);
        break;
      case VelocityBC::outflow:
        fill_side<Vec3>(s.u, g, side, GhostMode::extrap);
        break;
    }

    // density, inertia, micro-rate: inflow sides pin the inflow values,
    // walls mirror, outflow extrapolates.
    const bool outflow = spec.velocity == VelocityBC::outflow;
    const bool inflow =
        spec.velocity == VelocityBC::dirichlet && inward_velocity(spec, side) > 0.0;
    const GhostMode transported =
        outflow ? GhostMode::extrap : (inflow ? GhostMode::dirichlet : GhostMode::mirror);
    if (spec.velocity == VelocityBC::periodic) {
      fill_side<double>(s.rho, g, side, GhostMode::wrap);
      fill_side<SymTen2>(s.Y, g, side, GhostMode::wrap);
      fill_side<Ten2>(s.B, g, side, GhostMode::wrap);
      if (s.thermal) fill_side<double>(s.eps, g, side, GhostMode::wrap);
    } else {
      fill_side<double>(s.rho, g, side, transported,
                        [&](int) { return spec.rho_inflow; });
      fill_side<SymTen2>(s.Y, g, side, transported, [&](int) { return spec.Y_inflow; });
      fill_side<Ten2>(s.B, g, side, transported, [&](int) { return spec.B_inflow; });
      if (s.thermal)
        fill_side<double>(s.eps, g, side,
                          outflow ? GhostMode::extrap : GhostMode::mirror);
    }

    // ferment
    switch (spec.ferment) {
      case FermentBC::periodic:
        fill_side<SymTen2>(s.H, g, side, GhostMode::wrap);
        break;
      case FermentBC::flux_free:
        fill_side<SymTen2>(s.H, g, side,
                           outflow ? GhostMode::extrap : GhostMode::mirror);
        break;
      case FermentBC::dirichlet:
        fill_side<SymTen2>(s.H, g, side, GhostMode::dirichlet,
                           [&](int) { return spec.ferment_value; });
        break;
      case FermentBC::loss: {
        const int offset = side < 2 ? 0 : Field2<SymTen2>::ghost;
        fill_side<SymTen2>(s.H, g, side, GhostMode::dirichlet,
                           [&](int k) { return rt.H_face(side, k + offset, tau); });
        break;
      }
    }
  }
}

BoundaryRuntime make_boundary_runtime(const FieldState& state, const BoundarySpec& bc,
                                      double gamma_hat) {
  BoundaryRuntime rt;
  rt.gamma_hat = gamma_hat;

  // Capture initial face values with loss sides treated as flux-free so the
  // ghost state is well defined during the capture.
  FieldState tmp = state;
  BoundarySpec relaxed = bc;
  for (auto& side : relaxed.side)
    if (side.ferment == FermentBC::loss) side.ferment = FermentBC::flux_free;
  fill_ghosts(tmp, relaxed, rt, state.time);

  const Grid& g = state.grid;
  for (int side = 0; side < 4; ++side) {
    if (bc.side[side].ferment != FermentBC::loss) continue;
    const bool on_x1 = side < 2;
    const bool lo = (side % 2) == 0;
    const int n = on_x1 ? g.n1 : g.n2;
    auto at = [&](int a, int k) -> const SymTen2& {
      return tmp.H(on_x1 ? a : k, on_x1 ? k : a);
    };
    const int k_begin = on_x1 ? 0 : -2;
    const int k_end = on_x1 ? g.n2 : g.n1 + 2;
    auto& store = rt.H_face0[side];
    store.clear();
    for (int k = k_begin; k < k_end; ++k) {
      const SymTen2 c0 = lo ? at(0, k) : at(n - 1, k);
      const SymTen2 c1 = lo ? at(1, k) : at(n - 2, k);
      const SymTen2 c2 = lo ? at(2, k) : at(n - 3, k);
      store.push_back(face_value(c0, c1, c2));
    }
  }
  return rt;
}

}  // namespace kinetic
