#include "kinetic/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kinetic/errors.hpp"
#include "kinetic/io.hpp"

namespace kinetic {

// ---------------------------------------------------------------------------
// ConfigFile

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  cfg.hash_ = fnv1a(text);

  std::stringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed section header");
      section = line.substr(1, line.size() - 2);
      if (cfg.sections_.count(section))
        throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate section [" +
                          section + "]");
      cfg.sections_[section];
      cfg.section_lines_[section] = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any section");

    std::string key = line.substr(0, eq);
    const auto ke = key.find_last_not_of(" \t");
    key = key.substr(0, ke + 1);
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");

    Entry entry;
    entry.line = lineno;
    std::stringstream toks(line.substr(eq + 1));
    std::string t;
    while (toks >> t) entry.tokens.push_back(t);
    if (entry.tokens.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": key '" + key +
                        "' has no value");
    auto [it, inserted] = cfg.sections_[section].emplace(key, std::move(entry));
    (void)it;
    if (!inserted)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                        "' in [" + section + "]");
  }
  return cfg;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  k->second.used = true;
  return &k->second;
}

void ConfigFile::fail(const std::string& what) const { throw ConfigError(name_ + ": " + what); }

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) {
  const Entry* e = find(section, key);
  return e ? e->tokens[0] : fallback;
}

std::string ConfigFile::require_string(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail("missing required key '" + key + "' in [" + section + "]");
  return e->tokens[0];
}

namespace {

double parse_double(const std::string& tok, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": not a number: '" + tok + "'");
  }
}

}  // namespace

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  return parse_double(e->tokens[0], name_ + ":" + std::to_string(e->line) + " key '" + key + "'");
}

double ConfigFile::require_double(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail("missing required key '" + key + "' in [" + section + "]");
  return parse_double(e->tokens[0], name_ + ":" + std::to_string(e->line) + " key '" + key + "'");
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) {
  const double v = get_double(section, key, static_cast<double>(fallback));
  return static_cast<int>(v);
}

long ConfigFile::get_long(const std::string& section, const std::string& key, long fallback) {
  const double v = get_double(section, key, static_cast<double>(fallback));
  return static_cast<long>(v);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const std::string& t = e->tokens[0];
  if (t == "on" || t == "true" || t == "1") return true;
  if (t == "off" || t == "false" || t == "0") return false;
  fail("key '" + key + "' in [" + section + "] must be on/off");
}

Vec3 ConfigFile::get_vec3(const std::string& section, const std::string& key,
                          const Vec3& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->tokens.size() != 3)
    fail("key '" + key + "' in [" + section + "] needs 3 components");
  const std::string ctx = name_ + ":" + std::to_string(e->line) + " key '" + key + "'";
  return {parse_double(e->tokens[0], ctx), parse_double(e->tokens[1], ctx),
          parse_double(e->tokens[2], ctx)};
}

SymTen2 ConfigFile::get_sym(const std::string& section, const std::string& key,
                            const SymTen2& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->tokens.size() != 6)
    fail("key '" + key + "' in [" + section + "] needs 6 components (11 22 33 12 13 23)");
  const std::string ctx = name_ + ":" + std::to_string(e->line) + " key '" + key + "'";
  SymTen2 t;
  for (int c = 0; c < 6; ++c) t.component(c) = parse_double(e->tokens[c], ctx);
  return t;
}

Ten2 ConfigFile::get_ten2(const std::string& section, const std::string& key,
                          const Ten2& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->tokens.size() != 9)
    fail("key '" + key + "' in [" + section + "] needs 9 components (row-major)");
  const std::string ctx = name_ + ":" + std::to_string(e->line) + " key '" + key + "'";
  Ten2 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = parse_double(e->tokens[i * 3 + j], ctx);
  return t;
}

std::vector<std::string> ConfigFile::get_tokens(const std::string& section,
                                                const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) return {};
  return e->tokens;
}

void ConfigFile::finish(const std::vector<std::string>& allowed_sections) const {
  for (const auto& [sec, entries] : sections_) {
    if (std::find(allowed_sections.begin(), allowed_sections.end(), sec) ==
        allowed_sections.end())
      throw ConfigError(name_ + ":" + std::to_string(section_lines_.at(sec)) +
                        ": unknown section [" + sec + "]");
    for (const auto& [key, entry] : entries)
      if (!entry.used)
        throw ConfigError(name_ + ":" + std::to_string(entry.line) + ": unknown key '" + key +
                          "' in [" + sec + "]");
  }
}

// ---------------------------------------------------------------------------
// Initial conditions

FieldState make_initial_uniform(const Grid& g, double rho, const Vec3& u, const SymTen2& Y,
                                const Ten2& B, const SymTen2& H, double eps) {
  FieldState s(g);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      s.rho(i, j) = rho;
      s.u(i, j) = u;
      s.Y(i, j) = Y;
      s.B(i, j) = B;
      s.H(i, j) = H;
      s.eps(i, j) = eps;
    }
  return s;
}

FieldState make_initial_smooth2d(const Grid& g, const Smooth2DParams& p) {
  FieldState s(g);
  const double L1 = g.length1();
  const double L2 = g.n2 * g.h2;
  const double k1 = 2.0 * std::numbers::pi / L1;
  const double k2 = 2.0 * std::numbers::pi / L2;
  const double a = p.amplitude;
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i) {
      const double x = g.center1(i), y = g.center2(j);
      const double s1 = std::sin(k1 * x), c1 = std::cos(k1 * x);
      const double s2 = std::sin(k2 * y), c2 = std::cos(k2 * y);
      s.rho(i, j) = p.rho0 * (1.0 + a * s1 * c2);
      s.u(i, j) = {p.u0 * s1 * s2, -p.u0 * c1 * c2, 0.0};
      s.H(i, j) = SymTen2{p.h0 * (1.0 + a * c1 * s2), p.h0 * (1.0 - a * s1 * s2), p.h0,
                          p.h0 * a * 0.5 * s1 * c2, 0.0, 0.0};
      s.Y(i, j) = SymTen2{p.y0 * (1.0 + a * s1 * s2), p.y0, p.y0 * (1.0 - a * c1 * c2),
                          p.y0 * a * 0.25 * c1 * s2, 0.0, 0.0};
      Ten2 B;
      B(0, 0) = p.b0 * s1 * c2;
      B(0, 1) = p.b0 * c1 * s2;
      B(1, 0) = -p.b0 * s1 * s2;
      B(1, 1) = -p.b0 * s1 * c2;
      s.B(i, j) = B;
    }
  return s;
}

double wall_loss_decay_root(const MaterialParams& mp, double u_mag) {
  const DispersionResult d = dispersion(mp.beta, u_mag, mp.alpha, mp.gamma_hat);
  if (d.n_real == 0)
    throw ConfigError("wall-loss mode: dispersion has no real root for these parameters");
  const double eps = 1e-14 * (1.0 + std::abs(d.root_hi));
  if (d.root_lo > eps) return d.root_lo;
  if (d.root_hi > eps) return d.root_hi;
  throw ConfigError("wall-loss mode: no positive (decaying) dispersion root");
}

// ---------------------------------------------------------------------------
// Scenario building

namespace {

SideSpec parse_side(ConfigFile& cfg, const std::string& prefix, bool axis_periodic) {
  SideSpec side;
  if (axis_periodic) {
    side.velocity = VelocityBC::periodic;
    side.ferment = FermentBC::periodic;
    return side;
  }
  const auto vel = cfg.get_tokens("boundary", prefix + "_velocity");
  if (vel.empty()) throw ConfigError("boundary: missing " + prefix + "_velocity");
  const std::string kind = vel[0];
  if (kind == "dirichlet") {
    if (vel.size() != 4)
      throw ConfigError("boundary: " + prefix + "_velocity dirichlet needs 3 components");
    side.velocity = VelocityBC::dirichlet;
    side.velocity_value = {std::stod(vel[1]), std::stod(vel[2]), std::stod(vel[3])};
  } else if (kind == "free_slip") {
    side.velocity = VelocityBC::free_slip;
  } else if (kind == "outflow") {
    side.velocity = VelocityBC::outflow;
  } else if (kind == "periodic") {
    throw ConfigError("boundary: periodic sides are set by '" + prefix.substr(0, 2) +
                      " = periodic'");
  } else {
    throw ConfigError("boundary: unknown velocity condition '" + kind + "'");
  }

  const auto fer = cfg.get_tokens("boundary", prefix + "_ferment");
  if (fer.empty()) {
    side.ferment = FermentBC::flux_free;
  } else if (fer[0] == "flux_free") {
    side.ferment = FermentBC::flux_free;
  } else if (fer[0] == "loss") {
    side.ferment = FermentBC::loss;
  } else if (fer[0] == "dirichlet") {
    if (fer.size() != 7)
      throw ConfigError("boundary: " + prefix + "_ferment dirichlet needs 6 components");
    side.ferment = FermentBC::dirichlet;
    for (int c = 0; c < 6; ++c) side.ferment_value.component(c) = std::stod(fer[c + 1]);
  } else {
    throw ConfigError("boundary: unknown ferment condition '" + fer[0] + "'");
  }

  side.rho_inflow = cfg.get_double("boundary", prefix + "_rho", 1.0);
  side.Y_inflow = cfg.get_sym("boundary", prefix + "_Y", SymTen2{});
  side.B_inflow = cfg.get_ten2("boundary", prefix + "_B", Ten2{});
  return side;
}

}  // namespace

ScenarioConfig build_scenario(ConfigFile& cfg) {
  ScenarioConfig out;
  out.config_hash = cfg.hash();

  ContinuumScenario& sc = out.scenario;
  sc.name = cfg.get_string("scenario", "name", "scenario");

  sc.grid.n1 = cfg.get_int("grid", "n1", 1);
  sc.grid.n2 = cfg.get_int("grid", "n2", 1);
  sc.grid.h1 = cfg.get_double("grid", "h1", 1.0);
  sc.grid.h2 = cfg.get_double("grid", "h2", 1.0);
  sc.grid.validate();

  MaterialParams& mp = sc.material;
  mp.eta1 = cfg.get_double("material", "eta1", 0.0);
  mp.eta2 = cfg.get_double("material", "eta2", 0.0);
  mp.eta3 = cfg.get_double("material", "eta3", 0.0);
  mp.alpha = cfg.get_double("material", "alpha", 0.0);
  mp.beta = cfg.get_double("material", "beta", 0.0);
  mp.gamma = cfg.get_double("material", "gamma", 0.0);
  mp.gamma_hat = cfg.get_double("material", "gamma_hat", 0.0);
  mp.kappa = cfg.get_double("material", "kappa", 0.0);
  mp.nu_over_lambda = cfg.get_double("material", "nu_over_lambda", 0.0);
  mp.include_eta2 = cfg.get_bool("material", "include_eta2", false);
  mp.validate();

  const bool p1 = cfg.get_string("boundary", "x1", "") == "periodic" || !sc.grid.active1();
  const bool p2 = cfg.get_string("boundary", "x2", "") == "periodic" || !sc.grid.active2();
  sc.boundary.side[0] = parse_side(cfg, "x1_lo", p1);
  sc.boundary.side[1] = parse_side(cfg, "x1_hi", p1);
  sc.boundary.side[2] = parse_side(cfg, "x2_lo", p2);
  sc.boundary.side[3] = parse_side(cfg, "x2_hi", p2);
  sc.boundary.validate(sc.grid);

  sc.sources = SourceSpec(sc.grid);
  const Vec3 f = cfg.get_vec3("sources", "f", Vec3{});
  const Ten2 M = cfg.get_ten2("sources", "M", Ten2{});
  const SymTen2 S = cfg.get_sym("sources", "S", SymTen2{});
  const double lam = cfg.get_double("sources", "lambda", 0.0);
  for (int j = 0; j < sc.grid.n2; ++j)
    for (int i = 0; i < sc.grid.n1; ++i) {
      sc.sources.f(i, j) = f;
      sc.sources.M(i, j) = M;
      sc.sources.S(i, j) = S;
      sc.sources.lambda_heat(i, j) = lam;
    }

  SolverConfig& sol = sc.solver;
  sol.cfl = cfg.get_double("solver", "cfl", 0.4);
  sol.t_end = cfg.require_double("solver", "t_end");
  sol.dt_fixed = cfg.get_double("solver", "dt", 0.0);
  const std::string mode = cfg.get_string("solver", "mode", "independent_B");
  if (mode == "independent_B")
    sol.mode = ConstraintMode::independent_B;
  else if (mode == "B_equals_L")
    sol.mode = ConstraintMode::B_equals_L;
  else if (mode == "B_equals_skwL")
    sol.mode = ConstraintMode::B_equals_skwL;
  else
    throw ConfigError("solver: unknown mode '" + mode + "'");
  sol.psd_projection = cfg.get_bool("solver", "psd_projection", true);
  sol.plane_flow = cfg.get_bool("solver", "plane_flow", false);
  sol.snapshot_every = cfg.get_double("solver", "snapshot_every", 0.0);
  sol.threads = cfg.get_int("solver", "threads", 1);
  sc.thermal = cfg.get_bool("solver", "thermal", false);
  sol.validate();

  // initial condition
  const std::string init = cfg.get_string("scenario", "init", "uniform");
  const double rho0 = cfg.get_double("initial", "rho", 1.0);
  const Vec3 u0 = cfg.get_vec3("initial", "u", Vec3{});
  const Vec3 v0 = cfg.get_vec3("initial", "v", Vec3{0.0, 1.0, 0.0});

  ExampleParams ep;
  ep.rho = rho0;
  ep.u = u0;
  ep.v = v0;
  ep.alpha = mp.alpha;
  ep.beta = mp.beta;
  ep.gamma = mp.gamma;
  ep.gamma_hat = mp.gamma_hat;
  ep.eta3 = mp.eta3;

  if (init == "uniform") {
    sc.initial = make_initial_uniform(
        sc.grid, rho0, u0, cfg.get_sym("initial", "Y", SymTen2{}),
        cfg.get_ten2("initial", "B", Ten2{}), cfg.get_sym("initial", "H", SymTen2{}),
        cfg.get_double("initial", "eps", 0.0));
  } else if (init == "example1") {
    sc.initial = example_fields(ExampleFlow::steady_bounce, ep, sc.grid, 0.0);
  } else if (init == "example2_spatial") {
    sc.initial = example_fields(ExampleFlow::decay_spatial, ep, sc.grid, 0.0);
  } else if (init == "example2_temporal") {
    sc.initial = example_fields(ExampleFlow::decay_temporal, ep, sc.grid, 0.0);
  } else if (init == "example3") {
    ep.chi0 = cfg.get_double("initial", "chi0", 1.0);
    ep.zeta = wall_loss_decay_root(mp, norm(u0));
    sc.initial = example_fields(ExampleFlow::wall_loss, ep, sc.grid, 0.0);
  } else if (init == "example4_couette") {
    ep.u_mag = cfg.get_double("initial", "u_mag", 1.0);
    ep.delta = sc.grid.delta();
    ep.Y33 = cfg.get_double("initial", "Y33", 1.0);
    const double L12 = ep.u_mag / ep.delta;
    sc.initial = FieldState(sc.grid);
    for (int j = 0; j < sc.grid.n2; ++j)
      for (int i = 0; i < sc.grid.n1; ++i) {
        sc.initial.rho(i, j) = rho0;
        sc.initial.u(i, j) = {ep.u_mag * sc.grid.center2(j) / ep.delta, 0.0, 0.0};
        sc.initial.B(i, j) = L12 * outer(axis(0), axis(1));
        sc.initial.Y(i, j) = SymTen2{0.0, 0.0, ep.Y33, 0.0, 0.0, 0.0};
        sc.initial.H(i, j) = cfg.get_sym("initial", "H", SymTen2{});
      }
  } else if (init == "smooth2d") {
    Smooth2DParams sp;
    sp.rho0 = rho0;
    sp.amplitude = cfg.get_double("initial", "amplitude", 0.1);
    sp.u0 = cfg.get_double("initial", "u0", 0.3);
    sp.h0 = cfg.get_double("initial", "h0", 0.5);
    sp.y0 = cfg.get_double("initial", "y0", 0.4);
    sp.b0 = cfg.get_double("initial", "b0", 0.2);
    sc.initial = make_initial_smooth2d(sc.grid, sp);
  } else if (init == "file") {
    const std::string path = cfg.require_string("initial", "file");
    sc.initial = read_snapshot_csv(path);
    if (sc.initial.grid.n1 != sc.grid.n1 || sc.initial.grid.n2 != sc.grid.n2)
      throw ConfigError("initial file grid does not match [grid]");
  } else {
    throw ConfigError("scenario: unknown init '" + init + "'");
  }
  sc.initial.thermal = sc.thermal;

  out.out_dir = cfg.get_string("output", "dir", "out");
  out.seed = static_cast<unsigned long>(cfg.get_long("output", "seed", 0));

  cfg.finish({"scenario", "grid", "material", "boundary", "sources", "initial", "solver",
              "output"});
  return out;
}

ScenarioConfig load_scenario(const std::string& path) {
  ConfigFile cfg = ConfigFile::parse_file(path);
  return build_scenario(cfg);
}

// ---------------------------------------------------------------------------
// Particle runs

ParticleRunConfig build_particle_run(ConfigFile& cfg) {
  ParticleRunConfig out;
  out.config_hash = cfg.hash();
  out.name = cfg.get_string("scenario", "name", "particles");
  out.seed = static_cast<unsigned long>(cfg.get_long("particles", "seed", 1));
  out.dt = cfg.get_double("particles", "dt", 1e-3);
  out.steps = cfg.get_int("particles", "steps", 1000);
  out.sample_every = cfg.get_int("particles", "sample_every", 1);
  if (out.dt <= 0.0) throw ConfigError("particles: dt must be positive");
  if (out.steps < 1) throw ConfigError("particles: steps must be >= 1");

  const std::string init = cfg.get_string("particles", "init", "random_cloud");
  const int count = cfg.get_int("particles", "count", 64);
  const double radius = cfg.get_double("particles", "radius", 1.0);
  const double speed = cfg.get_double("particles", "speed_scale", 0.5);
  if (init == "random_cloud") {
    out.system = make_random_cloud(count, radius, speed, out.seed);
  } else if (init == "ring") {
    out.system = make_ring(count, radius, cfg.get_double("particles", "omega", 1.0));
  } else if (init == "counterstream") {
    out.system = make_counter_streaming(cfg.get_vec3("particles", "v", Vec3{0.0, 1.0, 0.0}));
  } else if (init == "pair") {
    out.system = make_breathing_pair(cfg.get_double("particles", "a", 1.0),
                                     cfg.get_double("particles", "v_mag", 0.5));
  } else {
    throw ConfigError("particles: unknown init '" + init + "'");
  }

  const std::string force =
      cfg.get_string("particles", "force", init == "ring" ? "ring" : "free");
  if (force == "free") {
    out.system.force = force_free();
  } else if (force == "gravity") {
    out.system.force =
        force_uniform_gravity(cfg.get_vec3("particles", "g", Vec3{0.0, 0.0, -1.0}));
  } else if (force == "harmonic") {
    out.system.force = force_harmonic(cfg.get_double("particles", "k", 1.0));
  } else if (force == "anharmonic") {
    out.system.force = force_anharmonic(cfg.get_double("particles", "k", 1.0),
                                        cfg.get_double("particles", "k3", 0.1));
  } else if (force == "springs") {
    out.system.force = force_spring_pairs(cfg.get_double("particles", "k", 1.0));
  } else if (force == "ring") {
    // make_ring already attached the centripetal law; keep it
    if (init != "ring") throw ConfigError("particles: force=ring requires init=ring");
  } else {
    throw ConfigError("particles: unknown force '" + force + "'");
  }

  out.out_dir = cfg.get_string("output", "dir", "out");
  cfg.finish({"scenario", "particles", "output"});
  return out;
}

ParticleRunConfig load_particle_run(const std::string& path) {
  ConfigFile cfg = ConfigFile::parse_file(path);
  return build_particle_run(cfg);
}

bool is_particle_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("[particles]") != std::string::npos) return true;
  }
  return false;
}

}  // namespace kinetic
