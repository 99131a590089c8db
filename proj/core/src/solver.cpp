#include "kinetic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kinetic/errors.hpp"

namespace kinetic {

namespace {

// Split [0, total) into chunks and run fn(begin, end) on each.
void parallel_ranges(int total, int threads, const std::function<void(int, int)>& fn) {
  threads = std::max(1, std::min(threads, total));
  if (threads == 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int b = t * chunk;
    const int e = std::min(total, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SymTen2 ferment_source(const SymTen2& H, const SymTen2& D, double rho,
                       const MaterialParams& mp, const SymTen2& S,
                       const SymTen2& lap_rhoH) {
  SymTen2 out = S;
  out += (mp.beta / rho) * lap_rhoH;
  out -= mp.alpha * H;
  out += (mp.gamma / rho) * sym_part(D.full() * D.full());
  return out;
}

void assign_constrained_B(FieldState& s, ConstraintMode mode) {
  if (mode == ConstraintMode::independent_B) return;
  const Grid& g = s.grid;
  const int i_lo = g.active1() ? -1 : 0;
  const int i_hi = g.active1() ? g.n1 + 1 : g.n1;
  const int j_lo = g.active2() ? -1 : 0;
  const int j_hi = g.active2() ? g.n2 + 1 : g.n2;
  for (int j = j_lo; j < j_hi; ++j)
    for (int i = i_lo; i < i_hi; ++i) {
      const Ten2 L = velocity_gradient(s.u, g, i, j);
      s.B(i, j) = (mode == ConstraintMode::B_equals_L) ? L : skw(L);
    }
  // second ghost ring: copy the first so stray reads stay finite
  if (g.active1())
    for (int j = j_lo; j < j_hi; ++j) {
      s.B(-2, j) = s.B(-1, j);
      s.B(g.n1 + 1, j) = s.B(g.n1, j);
    }
  if (g.active2())
    for (int i = -2; i < g.n1 + 2; ++i) {
      s.B(i, -2) = s.B(i, -1);
      s.B(i, g.n2 + 1) = s.B(i, g.n2);
    }
}

FieldState rhs(const FieldState& s, const MaterialParams& mp, const SourceSpec& src,
               ConstraintMode mode, int threads) {
  const Grid& g = s.grid;
  FieldState out(g);
  out.thermal = s.thermal;
  out.time = 1.0;  // d(tau)/d(tau); keeps state_axpy uniform

  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](int c_begin, int c_end) {
    try {
      for (int c = c_begin; c < c_end; ++c) {
        const int i = c % g.n1;
        const int j = c / g.n1;

        const double rho = s.rho(i, j);
        const Vec3 u = s.u(i, j);
        const SymTen2 Y = s.Y(i, j);
        const Ten2 B = s.B(i, j);
        const SymTen2 H = s.H(i, j);
        const Ten2 L = velocity_gradient(s.u, g, i, j);
        const SymTen2 D = sym_part(L);

        // products with density at the neighbours used by div/Laplacian
        auto rhoH_at = [&](int ii, int jj) { return s.rho(ii, jj) * s.H(ii, jj); };
        auto rhoU_at = [&](int ii, int jj) { return s.rho(ii, jj) * s.u(ii, jj); };

        // --- mass: conservative central divergence of rho u
        double drho = 0.0;
        if (g.active1())
          drho -= (rhoU_at(i + 1, j).x - rhoU_at(i - 1, j).x) / (2.0 * g.h1);
        if (g.active2())
          drho -= (rhoU_at(i, j + 1).y - rhoU_at(i, j - 1).y) / (2.0 * g.h2);
        out.rho(i, j) = drho;

        // --- upwind advection operator for any field
        auto advect = [&](const auto& field) {
          using T = std::decay_t<decltype(field(0, 0))>;
          T r{};
          if (g.active1() && u.x != 0.0) r += u.x * upwind_d1(field, i, j, 0, g.h1, u.x);
          if (g.active2() && u.y != 0.0) r += u.y * upwind_d1(field, i, j, 1, g.h2, u.y);
          return r;
        };

        // --- inertia tensor: Y_dot = -(grad Y) u + B Y + Y B^T
        out.Y(i, j) = -1.0 * advect(s.Y) + 2.0 * sym_part(B * Y.full());

        // --- momentum: rho(du + L u) = rho f + div T
        {
          Vec3 divT;
          // -div(rho H)
          if (g.active1()) {
            const SymTen2 d = (1.0 / (2.0 * g.h1)) * (rhoH_at(i + 1, j) - rhoH_at(i - 1, j));
            divT -= Vec3{d(0, 0), d(1, 0), d(2, 0)};
          }
          if (g.active2()) {
            const SymTen2 d = (1.0 / (2.0 * g.h2)) * (rhoH_at(i, j + 1) - rhoH_at(i, j - 1));
            divT -= Vec3{d(0, 1), d(1, 1), d(2, 1)};
          }
          // viscous parts
          Vec3 lap_u, graddiv;
          if (mp.eta1 != 0.0 || mp.eta3 != 0.0 || (mp.include_eta2 && mp.eta2 != 0.0)) {
            Vec3 d11, d22, d12;
            if (g.active1()) d11 = central_d2(s.u, i, j, 0, g.h1);
            if (g.active2()) d22 = central_d2(s.u, i, j, 1, g.h2);
            if (g.active1() && g.active2()) d12 = cross_d2(s.u, i, j, g.h1, g.h2);
            lap_u = d11 + d22;
            graddiv = {d11.x + d12.y, d12.x + d22.y, 0.0};
            divT += mp.eta1 * (lap_u + graddiv);
            divT += (2.0 * mp.eta3) * lap_u;
          }
          if (mp.eta3 != 0.0) divT -= (2.0 * mp.eta3) * tensor_divergence(s.B, g, i, j);
          if (mp.include_eta2 && mp.eta2 != 0.0) {
            // div(2 eta2 sym B) = eta2 (div B + div B^T)
            Vec3 divBT;
            if (g.active1()) {
              const Ten2 d = central_d1(s.B, i, j, 0, g.h1);
              divBT += Vec3{d(0, 0), d(0, 1), d(0, 2)};
            }
            if (g.active2()) {
              const Ten2 d = central_d1(s.B, i, j, 1, g.h2);
              divBT += Vec3{d(1, 0), d(1, 1), d(1, 2)};
            }
            divT += mp.eta2 * (tensor_divergence(s.B, g, i, j) + divBT);
          }
          out.u(i, j) = -1.0 * advect(s.u) + src.f(i, j) + (1.0 / rho) * divT;
        }

        // --- micro-rate B (only when independent)
        if (mode == ConstraintMode::independent_B) {
          const Ten2 C = rho * transpose(src.M(i, j)) + (2.0 * mp.eta3) * transpose(L - B);
          const SymTen2 P = range_projector(Y);
          const Ten2 defect = C * (Ten2::identity() - P.full());
          if (norm_f(defect) > 1e-10 * (1.0 + norm_f(C)))
            throw DegenerateY("micro-rate balance unsolvable: right-hand side leaves the "
                              "range of Y",
                              i, j);
          const Ten2 advB = advect(s.B);
          const Ten2 rhs2 = (1.0 / rho) * C - (advB + B * B) * Y.full();
          out.B(i, j) = rhs2 * pinv_psd(Y).full();
        }

        // --- ferment: H_dot = -(grad H) u - (L H + H L^T) + sources
        {
          SymTen2 lap_rhoH;
          if (mp.beta != 0.0) {
            if (g.active1())
              lap_rhoH += (1.0 / (g.h1 * g.h1)) *
                          (rhoH_at(i + 1, j) - 2.0 * rhoH_at(i, j) + rhoH_at(i - 1, j));
            if (g.active2())
              lap_rhoH += (1.0 / (g.h2 * g.h2)) *
                          (rhoH_at(i, j + 1) - 2.0 * rhoH_at(i, j) + rhoH_at(i, j - 1));
          }
          out.H(i, j) = -1.0 * advect(s.H) - 2.0 * sym_part(L * H.full()) +
                        ferment_source(H, D, rho, mp, src.S(i, j), lap_rhoH);
        }

        // --- thermal energy (optional)
        if (s.thermal) {
          LocalKineticState loc = LocalKineticState::make(rho, L, B, H);
          const Ten2 T = stress_T(loc, mp);
          const Ten2 A = internal_torque_A(loc, mp);
          const SymTen2 Z = stirring_Z(loc, mp);
          const double lap_eps = mp.kappa != 0.0 ? laplacian(s.eps, g, i, j) : 0.0;
          const double heat = ddot(L, T) + ddot(B, transpose(A)) + 0.5 * trace(Z) +
                              mp.kappa * lap_eps + src.lambda_heat(i, j);
          out.eps(i, j) = -advect(s.eps) + heat / rho;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  parallel_ranges(g.cells(), threads, work);
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

// y = a + c*b over the interior cells
void state_axpy(FieldState& y, const FieldState& a, double c, const FieldState& b) {
  const Grid& g = a.grid;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      y.rho(i, j) = a.rho(i, j) + c * b.rho(i, j);
      y.u(i, j) = a.u(i, j) + c * b.u(i, j);
      y.Y(i, j) = a.Y(i, j) + c * b.Y(i, j);
      y.B(i, j) = a.B(i, j) + c * b.B(i, j);
      y.H(i, j) = a.H(i, j) + c * b.H(i, j);
      if (a.thermal) y.eps(i, j) = a.eps(i, j) + c * b.eps(i, j);
    }
  y.time = a.time + c * b.time;
}

void prepare(FieldState& s, const BoundarySpec& bc, const BoundaryRuntime& rt,
             ConstraintMode mode) {
  fill_ghosts(s, bc, rt, s.time);
  assign_constrained_B(s, mode);
}

}  // namespace

void step_rk4(FieldState& s, double dt, const MaterialParams& mp, const SourceSpec& src,
              const BoundarySpec& bc, const BoundaryRuntime& rt, ConstraintMode mode,
              int threads) {
  prepare(s, bc, rt, mode);
  FieldState k1 = rhs(s, mp, src, mode, threads);

  FieldState stage(s.grid);
  stage.thermal = s.thermal;
  state_axpy(stage, s, 0.5 * dt, k1);
  prepare(stage, bc, rt, mode);
  FieldState k2 = rhs(stage, mp, src, mode, threads);

  state_axpy(stage, s, 0.5 * dt, k2);
  prepare(stage, bc, rt, mode);
  FieldState k3 = rhs(stage, mp, src, mode, threads);

  state_axpy(stage, s, dt, k3);
  prepare(stage, bc, rt, mode);
  FieldState k4 = rhs(stage, mp, src, mode, threads);

  const Grid& g = s.grid;
  const double w = dt / 6.0;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      s.rho(i, j) += w * (k1.rho(i, j) + 2.0 * k2.rho(i, j) + 2.0 * k3.rho(i, j) + k4.rho(i, j));
      s.u(i, j) += w * (k1.u(i, j) + 2.0 * k2.u(i, j) + 2.0 * k3.u(i, j) + k4.u(i, j));
      s.Y(i, j) += w * (k1.Y(i, j) + 2.0 * k2.Y(i, j) + 2.0 * k3.Y(i, j) + k4.Y(i, j));
      s.B(i, j) += w * (k1.B(i, j) + 2.0 * k2.B(i, j) + 2.0 * k3.B(i, j) + k4.B(i, j));
      s.H(i, j) += w * (k1.H(i, j) + 2.0 * k2.H(i, j) + 2.0 * k3.H(i, j) + k4.H(i, j));
      if (s.thermal)
        s.eps(i, j) +=
            w * (k1.eps(i, j) + 2.0 * k2.eps(i, j) + 2.0 * k3.eps(i, j) + k4.eps(i, j));
    }
  s.time += dt;
}

double stable_dt(const FieldState& s, const MaterialParams& mp, double cfl) {
  const Grid& g = s.grid;
  double h_min = 1e300;
  if (g.active1()) h_min = std::min(h_min, g.h1);
  if (g.active2()) h_min = std::min(h_min, g.h2);
  if (h_min == 1e300) h_min = 1.0;  // no active axis: purely local dynamics

  double wave = 0.0;
  double rho_min = 1e300;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      // trace bounds the largest eigenvalue of the PSD ferment tensor
      const double c = norm(s.u(i, j)) + std::sqrt(std::max(0.0, trace(s.H(i, j))));
      wave = std::max(wave, c);
      rho_min = std::min(rho_min, s.rho(i, j));
    }

  double dt = 1e300;
  if (wave > 0.0) dt = std::min(dt, cfl * h_min / wave);
  double diff = mp.beta;
  if (rho_min > 0.0) {
    diff = std::max(diff, 2.0 * (mp.eta1 + mp.eta3) / rho_min);
    diff = std::max(diff, mp.kappa / rho_min);
  }
  if (diff > 0.0) dt = std::min(dt, cfl * h_min * h_min / (4.0 * diff));
  if (mp.alpha > 0.0) dt = std::min(dt, 0.5 / mp.alpha);
  return dt;
}

DiagnosticsRecord diagnostics(const FieldState& s, const MaterialParams& mp,
                              const SourceSpec& src, const BoundarySpec& bc) {
  const Grid& g = s.grid;
  DiagnosticsRecord rec;
  rec.tau = s.time;
  const double dV = g.cell_volume();

  Ten2 energy, p_vol, p_int;
  SymTen2 coll;
  double min_h = 1e300, min_y = 1e300;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const double rho = s.rho(i, j);
      const Vec3 u = s.u(i, j);
      const Ten2 B = s.B(i, j);
      const SymTen2 Y = s.Y(i, j);
      const SymTen2 H = s.H(i, j);
      const Ten2 L = velocity_gradient(s.u, g, i, j);

      rec.mass += rho * dV;
      const Ten2 W = 0.5 * outer(u, u) + 0.5 * (B * Y.full() * transpose(B)) +
                     0.5 * H.full();
      energy += (rho * dV) * W;
      p_vol += (rho * dV) *
               (sym(outer(u, src.f(i, j)) + B * src.M(i, j)) + 0.5 * src.S(i, j).full());

      LocalKineticState loc = LocalKineticState::make(rho, L, B, H);
      const Ten2 T = stress_T(loc, mp);
      const Ten2 A = internal_torque_A(loc, mp);
      const SymTen2 Z = stirring_Z(loc, mp);
      p_int += dV * tensor_power_density(loc, T, A, Z, Ten3{}).full();

      coll += dV * sqrt_psd(H);
      min_h = std::min(min_h, min_eig(H));
      min_y = std::min(min_y, min_eig(Y));
    }
  rec.energy = sym_part(energy);
  rec.power_volume = sym_part(p_vol);
  rec.power_internal = sym_part(p_int);
  rec.collision_density = (mp.nu_over_lambda / (g.n1 * g.n2 * dV)) * coll;
  rec.min_eig_H = min_h;
  rec.min_eig_Y = min_y;

  // Boundary terms: traction power, ferment influx, advective energy flux.
  auto stress_at = [&](int i, int j) {
    const Ten2 L = velocity_gradient(s.u, g, i, j);
    LocalKineticState loc = LocalKineticState::make(s.rho(i, j), L, s.B(i, j), s.H(i, j));
    return stress_T(loc, mp);
  };
  Ten2 p_bnd, f_adv;
  double pw_lo = 0.0, pw_hi = 0.0;
  for (int side = 0; side < 4; ++side) {
    const bool on_x1 = side < 2;
    if (on_x1 && !g.active1()) continue;
    if (!on_x1 && !g.active2()) continue;
    const bool lo = (side % 2) == 0;
    const int n = on_x1 ? g.n1 : g.n2;
    const int m = on_x1 ? g.n2 : g.n1;
    const double dA = on_x1 ? g.h2 : g.h1;
    const double h = on_x1 ? g.h1 : g.h2;
    Vec3 normal;
    normal[on_x1 ? 0 : 1] = lo ? -1.0 : 1.0;

    for (int k = 0; k < m; ++k) {
      auto cell = [&](int a) {
        const int idx = lo ? a : n - 1 - a;
        return on_x1 ? std::pair<int, int>{idx, k} : std::pair<int, int>{k, idx};
      };
      const auto [i0, j0] = cell(0);
      const auto [i1, j1] = cell(1);
      const auto [i2, j2] = cell(2);
      const Vec3 u_face = face_value(s.u(i0, j0), s.u(i1, j1), s.u(i2, j2));
      const Ten2 T_face =
          face_value(stress_at(i0, j0), stress_at(i1, j1), stress_at(i2, j2));
      const Vec3 tn = T_face * normal;
      p_bnd += dA * sym(outer(u_face, tn));

      if (mp.beta != 0.0) {
        // outward normal derivative of rho H at the face from the ghost pair
        const auto [ig, jg] = on_x1 ? std::pair<int, int>{lo ? -1 : n, k}
                                    : std::pair<int, int>{k, lo ? -1 : n};
        const SymTen2 d =
            (1.0 / h) * (s.rho(i0, j0) * s.H(i0, j0) - s.rho(ig, jg) * s.H(ig, jg));
        p_bnd += (0.5 * mp.beta * dA) * (lo ? -1.0 : 1.0) * d.full();
      }

      const double un = dot(u_face, normal);
      const double rho_face =
          face_value(s.rho(i0, j0), s.rho(i1, j1), s.rho(i2, j2));
      const Ten2 W_face = face_value(
          0.5 * outer(s.u(i0, j0), s.u(i0, j0)) +
              0.5 * (s.B(i0, j0) * s.Y(i0, j0).full() * transpose(s.B(i0, j0))) +
              0.5 * s.H(i0, j0).full(),
          0.5 * outer(s.u(i1, j1), s.u(i1, j1)) +
              0.5 * (s.B(i1, j1) * s.Y(i1, j1).full() * transpose(s.B(i1, j1))) +
              0.5 * s.H(i1, j1).full(),
          0.5 * outer(s.u(i2, j2), s.u(i2, j2)) +
              0.5 * (s.B(i2, j2) * s.Y(i2, j2).full() * transpose(s.B(i2, j2))) +
              0.5 * s.H(i2, j2).full());
      f_adv += (dA * rho_face * un) * W_face;

      if (side == 2) pw_lo += -dot(normal, tn) / m;
      if (side == 3) pw_hi += -dot(normal, tn) / m;
    }
  }
  rec.power_boundary = sym_part(p_bnd);
  rec.flux_advective = sym_part(f_adv);
  rec.wall_pressure_lo = pw_lo;
  rec.wall_pressure_hi = pw_hi;
  return rec;
}

void fill_energy_residuals(std::vector<DiagnosticsRecord>& records) {
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    const double dt = records[k + 1].tau - records[k - 1].tau;
    if (dt <= 0.0) continue;
    const SymTen2 dE = (1.0 / dt) * (records[k + 1].energy - records[k - 1].energy);
    const SymTen2 bal = records[k].power_volume + records[k].power_internal +
                        records[k].power_boundary - records[k].flux_advective;
    records[k].energy_residual = norm_f(dE - bal);
  }
}

namespace {

void post_step(FieldState& s, const SolverConfig& cfg, double& max_proj,
               double rho_floor) {
  const Grid& g = s.grid;
  double worst = 0.0;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      if (cfg.psd_projection) {
        SymTen2& H = s.H(i, j);
        const double scale = norm_f(H);
        const double clamped = project_psd(H);
        if (scale > 0.0) worst = std::max(worst, clamped / scale);
        if (cfg.project_Y) project_psd(s.Y(i, j));
      }
      if (cfg.plane_flow) {
        s.u(i, j).z = 0.0;
        Ten2& B = s.B(i, j);
        B(0, 2) = B(1, 2) = B(2, 0) = B(2, 1) = B(2, 2) = 0.0;
        s.H(i, j).xz = s.H(i, j).yz = 0.0;
        s.Y(i, j).xz = s.Y(i, j).yz = 0.0;
      }
      const double rho = s.rho(i, j);
      if (!std::isfinite(rho) || rho < rho_floor)
        throw BlowUp("density reached the floor at tau = " + std::to_string(s.time));
      if (!std::isfinite(trace(s.H(i, j))) || norm(s.u(i, j)) > cfg.overflow_guard ||
          norm_f(s.H(i, j)) > cfg.overflow_guard)
        throw BlowUp("field overflow at tau = " + std::to_string(s.time));
    }
  max_proj = std::max(max_proj, worst);
}

}  // namespace

RunResult run(const ContinuumScenario& sc) {
  sc.grid.validate();
  sc.material.validate();
  sc.boundary.validate(sc.grid);
  sc.solver.validate();

  RunResult result;
  FieldState s = sc.initial;
  s.thermal = sc.thermal;

  double rho_mean = 0.0;
  for (int j = 0; j < sc.grid.n2; ++j)
    for (int i = 0; i < sc.grid.n1; ++i) rho_mean += s.rho(i, j);
  rho_mean /= sc.grid.cells();
  const double rho_floor = 1e-12 * rho_mean;

  BoundaryRuntime rt = make_boundary_runtime(s, sc.boundary, sc.material.gamma_hat);

  const double cadence = sc.solver.snapshot_every > 0.0 ? sc.solver.snapshot_every
                                                        : sc.solver.t_end;
  double next_snap = 0.0;
  double proj_acc = 0.0;

  auto snapshot = [&]() {
    fill_ghosts(s, sc.boundary, rt, s.time);
    assign_constrained_B(s, sc.solver.mode);
    DiagnosticsRecord rec = diagnostics(s, sc.material, sc.sources, sc.boundary);
    rec.psd_projection_rel = proj_acc;
    proj_acc = 0.0;
    result.snapshots.push_back(s);
    result.diagnostics.push_back(rec);
  };

  snapshot();
  next_snap = cadence;

  while (s.time < sc.solver.t_end - 1e-14 * sc.solver.t_end) {
    double dt = sc.solver.dt_fixed > 0.0 ? sc.solver.dt_fixed
                                         : stable_dt(s, sc.material, sc.solver.cfl);
    if (!(dt > 0.0) || dt == 1e300) dt = sc.solver.t_end / 100.0;
    const double target = std::min(next_snap, sc.solver.t_end);
    if (s.time + dt > target) dt = target - s.time;
    step_rk4(s, dt, sc.material, sc.sources, sc.boundary, rt, sc.solver.mode,
             sc.solver.threads);
    ++result.steps;
    post_step(s, sc.solver, proj_acc, rho_floor);
    result.max_psd_projection_rel = std::max(result.max_psd_projection_rel, proj_acc);

    if (s.time >= target - 1e-12 * std::max(1.0, target)) {
      snapshot();
      if (target >= sc.solver.t_end) break;
      next_snap += cadence;
    }
  }

  fill_energy_residuals(result.diagnostics);
  return result;
}

}  // namespace kinetic
