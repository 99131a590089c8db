#include <doctest.h>

#include <cmath>
#include <random>

#include "kinetic/constitutive.hpp"
#include "kinetic/tensor.hpp"

using namespace kinetic;

namespace {

Ten2 random_ten2(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Ten2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = d(rng);
  return t;
}

SymTen2 random_psd(std::mt19937_64& rng, double scale = 1.0) {
  const Ten2 a = random_ten2(rng, scale);
  return sym_part(a * transpose(a));
}

Ten3 random_ten3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Ten3 t;
  for (auto& c : t.v) c = d(rng);
  return t;
}

LocalKineticState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho_d(0.3, 3.0);
  LocalKineticState s = LocalKineticState::make(rho_d(rng), random_ten2(rng),
                                                random_ten2(rng), random_psd(rng));
  s.grad_rhoH = random_ten3(rng);
  // symmetrize the first two slots like a gradient of a symmetric field
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j)
      for (int k = 0; k < 3; ++k) s.grad_rhoH(j, i, k) = s.grad_rhoH(i, j, k);
  s.grad_rhoH.minor_left_symmetric = true;
  s.bb = random_ten3(rng);
  return s;
}

MaterialParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 2.0);
  MaterialParams p;
  p.eta1 = d(rng);
  p.eta3 = d(rng);
  p.alpha = d(rng);
  p.beta = d(rng);
  p.gamma = d(rng);
  return p;
}

}  // namespace

TEST_CASE("stress_T: vanishes without ferment and viscosity") {
  std::mt19937_64 rng(1);
  LocalKineticState s = LocalKineticState::make(1.7, random_ten2(rng), Ten2{}, SymTen2{});
  MaterialParams p;
  CHECK(norm_f(stress_T(s, p)) == 0.0);
}

TEST_CASE("stress_T: steady bounce gives wall pressure rho |v|^2") {
  const double rho = 1.3;
  const Vec3 v{0.0, 0.8, 0.0};
  LocalKineticState s = LocalKineticState::make(rho, Ten2{}, Ten2{}, sym_outer(v));
  MaterialParams p;
  const Ten2 T = stress_T(s, p);
  const Vec3 traction = T * axis(1);
  CHECK(-dot(axis(1), traction) == doctest::Approx(rho * dot(v, v)).epsilon(1e-15));
}

TEST_CASE("stress_T: equals the term-by-term sum on random states") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const LocalKineticState s = random_state(rng);
    const MaterialParams p = random_params(rng);
    const Ten2 expect = -s.rho * s.H.full() + 2.0 * p.eta1 * sym(s.L) +
                        2.0 * p.eta3 * (s.L - s.B);
    CHECK(norm_f(stress_T(s, p) - expect) == 0.0);
  }
}

TEST_CASE("internal_torque_A: reductions") {
  std::mt19937_64 rng(6);
  const LocalKineticState s = random_state(rng);
  MaterialParams p;
  SUBCASE("eta3 = 0 gives rho H") {
    CHECK(norm_f(internal_torque_A(s, p) - s.rho * s.H.full()) == 0.0);
  }
  SUBCASE("B = L kills the coupling term") {
    p.eta3 = 1.4;
    LocalKineticState t = LocalKineticState::make(s.rho, s.L, s.L, s.H);
    CHECK(norm_f(internal_torque_A(t, p) - t.rho * t.H.full()) == 0.0);
  }
}

TEST_CASE("skw A = skw T on 1000 random states") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const LocalKineticState s = random_state(rng);
    const MaterialParams p = random_params(rng);
    const Ten2 T = stress_T(s, p);
    const Ten2 A = internal_torque_A(s, p);
    const double scale = norm_f(T) + norm_f(A) + 1e-300;
    CHECK(norm_f(skw(T) - skw(A)) <= 1e-13 * scale);
  }
}

TEST_CASE("stirring_Z: closed-form cases") {
  std::mt19937_64 rng(8);
  SUBCASE("L = B with alpha = gamma = 0") {
    LocalKineticState s = random_state(rng);
    LocalKineticState t = LocalKineticState::make(s.rho, s.L, s.L, s.H);
    MaterialParams p;
    CHECK(norm_f(stirring_Z(t, p)) == 0.0);
  }
  SUBCASE("static state leaves the pure collision loss") {
    const SymTen2 H = random_psd(rng);
    LocalKineticState t = LocalKineticState::make(2.0, Ten2{}, Ten2{}, H);
    MaterialParams p;
    p.alpha = 0.7;
    CHECK(norm_f(stirring_Z(t, p) - (p.alpha * 2.0) * H) < 1e-15);
  }
  SUBCASE("pure shear with B = L leaves collision loss minus stimulus") {
    const double l12 = 0.9;
    const Ten2 L = l12 * outer(axis(0), axis(1));
    const SymTen2 H = random_psd(rng);
    LocalKineticState t = LocalKineticState::make(1.5, L, L, H);
    MaterialParams p;
    p.alpha = 0.4;
    p.gamma = 1.1;
    const double d2 = l12 * l12 / 4.0;
    const SymTen2 expect =
        (p.alpha * 1.5) * H - p.gamma * SymTen2{d2, d2, 0.0, 0.0, 0.0, 0.0};
    CHECK(norm_f(stirring_Z(t, p) - expect) < 1e-14);
  }
}

TEST_CASE("hyperstress_s: uniform field and zero coefficient give zero") {
  std::mt19937_64 rng(9);
  LocalKineticState s = random_state(rng);
  MaterialParams p;
  p.beta = 0.8;
  SUBCASE("uniform rho H") {
    s.grad_rhoH = Ten3{};
    CHECK(norm_f(hyperstress_s(s, p)) == 0.0);
  }
  SUBCASE("beta = 0") {
    p.beta = 0.0;
    CHECK(norm_f(hyperstress_s(s, p)) == 0.0);
  }
  SUBCASE("linear field puts the coefficient in the first slice") {
    const SymTen2 M0 = random_psd(rng);
    s.grad_rhoH = Ten3{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s.grad_rhoH(i, j, 0) = M0(i, j);
    const Ten3 out = hyperstress_s(s, p);
    CHECK(out.minor_left_symmetric);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(out(i, j, 0) == doctest::Approx(-p.beta * M0(i, j)).epsilon(1e-15));
        CHECK(out(i, j, 1) == 0.0);
        CHECK(out(i, j, 2) == 0.0);
      }
  }
}

TEST_CASE("hyperstress_s keeps minor left symmetry exactly") {
  std::mt19937_64 rng(10);
  for (int n = 0; n < 100; ++n) {
    LocalKineticState s = random_state(rng);
    MaterialParams p;
    p.beta = 1.2;
    const Ten3 out = hyperstress_s(s, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(out(i, j, k) == out(j, i, k));
  }
}

TEST_CASE("power densities: zero actions, trace identity, conservative closure") {
  std::mt19937_64 rng(12);
  SUBCASE("all actions zero") {
    const LocalKineticState s = random_state(rng);
    CHECK(norm_f(tensor_power_density(s, Ten2{}, Ten2{}, SymTen2{}, Ten3{})) == 0.0);
    CHECK(scalar_power_density(s, Ten2{}, Ten2{}, SymTen2{}, Ten3{}) == 0.0);
  }
  SUBCASE("T = -A^T with the conservative stirring zeroes the tensor power") {
    for (int n = 0; n < 100; ++n) {
      const LocalKineticState s = random_state(rng);
      const Ten2 Tc = -s.rho * s.H.full();
      const Ten2 Ac = s.rho * s.H.full();
      const SymTen2 Z = conservative_Z(s);
      const double scale = 1.0 + norm_f(Tc) * (norm_f(s.L) + norm_f(s.B));
      CHECK(norm_f(tensor_power_density(s, Tc, Ac, Z, Ten3{})) < 1e-13 * scale);
    }
  }
  SUBCASE("scalar power equals the trace of the tensor power") {
    for (int n = 0; n < 1000; ++n) {
      const LocalKineticState s = random_state(rng);
      const Ten2 T = random_ten2(rng);
      const Ten2 A = random_ten2(rng);
      const SymTen2 Z = sym_part(random_ten2(rng));
      const Ten3 m = random_ten3(rng);
      const double sp = scalar_power_density(s, T, A, Z, m);
      const double tp = trace(tensor_power_density(s, T, A, Z, m));
      CHECK(sp == doctest::Approx(tp).epsilon(1e-13));
    }
  }
  SUBCASE("scalar power matches an independent index loop") {
    for (int n = 0; n < 200; ++n) {
      const LocalKineticState s = random_state(rng);
      const Ten2 T = random_ten2(rng);
      const Ten2 A = random_ten2(rng);
      const SymTen2 Z = sym_part(random_ten2(rng));
      const Ten3 m = random_ten3(rng);
      double acc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += s.L(i, j) * T(i, j) + s.B(i, j) * A(j, i);
      for (int i = 0; i < 3; ++i)
        for (int r = 0; r < 3; ++r)
          for (int k = 0; k < 3; ++k) acc += s.bb(i, r, k) * m(r, i, k);
      acc += 0.5 * trace(Z);
      CHECK(scalar_power_density(s, T, A, Z, m) == doctest::Approx(-acc).epsilon(1e-13));
    }
  }
}

TEST_CASE("conservative_Z equals stirring_Z with alpha = gamma = 0") {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 500; ++n) {
    const LocalKineticState s = random_state(rng);
    MaterialParams p = random_params(rng);
    p.alpha = 0.0;
    p.gamma = 0.0;
    CHECK(norm_f(conservative_Z(s) - stirring_Z(s, p)) <
          1e-13 * (1.0 + norm_f(conservative_Z(s))));
    if (norm_f(s.L - s.B) == 0.0) CHECK(norm_f(conservative_Z(s)) == 0.0);
  }
}

TEST_CASE("observer_shift: exact cancellation in L - B") {
  std::mt19937_64 rng(14);
  SUBCASE("zero spin leaves inputs unchanged") {
    const Ten2 L = random_ten2(rng);
    const Ten2 B = random_ten2(rng);
    const auto shifted = observer_shift(L, B, Vec3{});
    CHECK(norm_f(shifted.L - L) == 0.0);
    CHECK(norm_f(shifted.B - B) == 0.0);
  }
  SUBCASE("difference is exactly invariant") {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int n = 0; n < 200; ++n) {
      const Ten2 L = random_ten2(rng);
      const Ten2 B = random_ten2(rng);
      const Vec3 w{d(rng), d(rng), d(rng)};
      const auto shifted = observer_shift(L, B, w);
      CHECK(norm_f((shifted.L - shifted.B) - (L - B)) == 0.0);
    }
  }
  SUBCASE("scalar power of the closure is invariant under the shift") {
    for (int n = 0; n < 300; ++n) {
      LocalKineticState s = random_state(rng);
      s.bb = Ten3{};
      const MaterialParams p = random_params(rng);
      std::uniform_real_distribution<double> d(-1.0, 1.0);
      const Vec3 w{d(rng), d(rng), d(rng)};

      const double before = scalar_power_density(s, stress_T(s, p), internal_torque_A(s, p),
                                                 stirring_Z(s, p), Ten3{});
      const auto shifted = observer_shift(s.L, s.B, w);
      LocalKineticState s2 = LocalKineticState::make(s.rho, shifted.L, shifted.B, s.H);
      const double after = scalar_power_density(s2, stress_T(s2, p),
                                                internal_torque_A(s2, p), stirring_Z(s2, p),
                                                Ten3{});
      CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy rhs: static limits and the trace identity") {
  std::mt19937_64 rng(15);
  SUBCASE("static state without heating") {
    LocalKineticState s = LocalKineticState::make(1.0, Ten2{}, Ten2{}, SymTen2{});
    CHECK(energy_rhs_scalar(s, Ten2{}, Ten2{}, SymTen2{}, Ten3{}, 0.0, 0.0) == 0.0);
  }
  SUBCASE("pure heating passes straight through") {
    LocalKineticState s = LocalKineticState::make(2.0, Ten2{}, Ten2{}, SymTen2{});
    CHECK(energy_rhs_scalar(s, Ten2{}, Ten2{}, SymTen2{}, Ten3{}, 0.0, 7.0) == 7.0);
  }
  SUBCASE("scalar form is the trace of the tensor form") {
    for (int n = 0; n < 300; ++n) {
      const LocalKineticState s = random_state(rng);
      const Ten2 T = random_ten2(rng);
      const Ten2 A = random_ten2(rng);
      const SymTen2 Z = sym_part(random_ten2(rng));
      const Ten3 m = random_ten3(rng);
      const Ten2 grad_q = random_ten2(rng);
      std::uniform_real_distribution<double> d(-2.0, 2.0);
      const double lam = d(rng);
      const SymTen2 tens = energy_rhs_tensor(s, T, A, Z, m, grad_q, lam);
      const double scal = energy_rhs_scalar(s, T, A, Z, m, trace(grad_q), lam);
      CHECK(trace(tens) == doctest::Approx(scal).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy tensor residual: spherical inputs vanish, shear does not") {
  SUBCASE("all-zero inputs") {
    LocalKineticState s = LocalKineticState::make(1.0, Ten2{}, Ten2{}, SymTen2{});
    CHECK(energy_rhs_tensor_residual(s, Ten2{}, Ten2{}, SymTen2{}, Ten3{}, Ten2{}, 0.0) ==
          0.0);
  }
  SUBCASE("spherical by construction") {
    LocalKineticState s = LocalKineticState::make(1.0, Ten2{}, Ten2{}, SymTen2{});
    const SymTen2 Z{2.0, 2.0, 2.0, 0.0, 0.0, 0.0};
    CHECK(energy_rhs_tensor_residual(s, Ten2{}, Ten2{}, Z, Ten3{}, Ten2{}, 3.0) <
          1e-15);
  }
  SUBCASE("generic shear is strictly positive") {
    const Ten2 L = 0.8 * outer(axis(0), axis(1));
    LocalKineticState s =
        LocalKineticState::make(1.0, L, Ten2{}, SymTen2{1.0, 0.5, 0.2, 0.1, 0.0, 0.0});
    MaterialParams p;
    p.eta1 = 0.3;
    const Ten2 T = stress_T(s, p);
    const Ten2 A = internal_torque_A(s, p);
    const SymTen2 Z = stirring_Z(s, p);
    CHECK(energy_rhs_tensor_residual(s, T, A, Z, Ten3{}, Ten2{}, 0.0) > 1e-3);
  }
}
