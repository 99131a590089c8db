#include <doctest.h>

#include "kinetic/errors.hpp"
#include "kinetic/scenario.hpp"

using namespace kinetic;

namespace {

const char* minimal_scenario = R"(
[scenario]
name = demo
init = uniform
[grid]
n1 = 8
n2 = 1
h1 = 0.125
[material]
alpha = 0.5
[initial]
rho = 1.2
H = 0.3 0.3 0.3 0 0 0
[solver]
t_end = 0.1
)";

}  // namespace

TEST_CASE("config: minimal scenario parses with defaults") {
  ConfigFile cfg = ConfigFile::parse_string(minimal_scenario);
  ScenarioConfig sc = build_scenario(cfg);
  CHECK(sc.scenario.name == "demo");
  CHECK(sc.scenario.grid.n1 == 8);
  CHECK(sc.scenario.material.alpha == 0.5);
  CHECK(sc.scenario.solver.t_end == 0.1);
  CHECK(sc.scenario.initial.rho(3, 0) == 1.2);
  CHECK(sc.scenario.initial.H(5, 0).xx == 0.3);
}

TEST_CASE("config: unknown key is rejected with its name") {
  const std::string text = std::string(minimal_scenario) + "[solver2]\nx = 1\n";
  ConfigFile cfg = ConfigFile::parse_string(text);
  CHECK_THROWS_WITH_AS(build_scenario(cfg),
                       doctest::Contains("unknown section [solver2]"), ConfigError);
}

TEST_CASE("config: unknown key inside a known section is rejected") {
  const std::string text = std::string(minimal_scenario) + "\n";
  ConfigFile cfg = ConfigFile::parse_string(text + "[output]\nbogus_key = 3\n");
  CHECK_THROWS_WITH_AS(build_scenario(cfg), doctest::Contains("bogus_key"), ConfigError);
}

TEST_CASE("config: malformed numbers are rejected") {
  std::string text = minimal_scenario;
  text.replace(text.find("0.125"), 5, "zzz12");
  ConfigFile cfg = ConfigFile::parse_string(text);
  CHECK_THROWS_AS(build_scenario(cfg), ConfigError);
}

TEST_CASE("config: duplicate keys are rejected at parse time") {
  CHECK_THROWS_AS(ConfigFile::parse_string("[grid]\nn1 = 2\nn1 = 3\n"), ConfigError);
}

TEST_CASE("config: periodic pairing is validated") {
  const char* text = R"(
[scenario]
init = uniform
[grid]
n1 = 8
n2 = 8
h1 = 0.125
h2 = 0.125
[boundary]
x1_lo_velocity = free_slip
x1_hi_velocity = outflow
[solver]
t_end = 0.1
)";
  // x2 unspecified: defaults to periodic on both sides, which pairs fine;
  // x1 has explicit non-periodic sides, also fine
  ConfigFile cfg = ConfigFile::parse_string(text);
  CHECK_NOTHROW(build_scenario(cfg));
}

TEST_CASE("config: missing required key carries the key name") {
  const char* text = "[grid]\nn1 = 8\nh1 = 0.125\n";
  ConfigFile cfg = ConfigFile::parse_string(text);
  CHECK_THROWS_WITH_AS(build_scenario(cfg), doctest::Contains("t_end"), ConfigError);
}

TEST_CASE("config: active axes need at least four cells") {
  const char* text = "[grid]\nn1 = 3\nh1 = 0.5\n[solver]\nt_end = 1\n";
  ConfigFile cfg = ConfigFile::parse_string(text);
  CHECK_THROWS_AS(build_scenario(cfg), ConfigError);
}

TEST_CASE("config: particle run parses") {
  const char* text = R"(
[particles]
count = 16
seed = 5
init = random_cloud
force = anharmonic
k = 1.0
k3 = 0.2
dt = 0.001
steps = 100
sample_every = 2
)";
  ConfigFile cfg = ConfigFile::parse_string(text);
  ParticleRunConfig pc = build_particle_run(cfg);
  CHECK(pc.system.particles.size() == 16);
  CHECK(pc.dt == 0.001);
  CHECK(pc.sample_every == 2);
}

TEST_CASE("config: example3 initial condition uses the decaying dispersion root") {
  MaterialParams mp;
  mp.beta = 0.5;
  mp.alpha = 0.3;
  mp.gamma_hat = 0.3;
  const double root = wall_loss_decay_root(mp, 0.5);
  CHECK(root == doctest::Approx(0.5 / 0.5).epsilon(1e-12));
}
