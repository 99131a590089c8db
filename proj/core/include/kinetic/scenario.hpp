#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kinetic/analytic.hpp"
#include "kinetic/particles.hpp"
#include "kinetic/solver.hpp"

namespace kinetic {

/// Sectioned key-value config text. Every key must be consumed by the
/// loader; leftovers raise ConfigError naming the key and line.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& name = "<config>");

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  std::string require_string(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key, double fallback);
  double require_double(const std::string& section, const std::string& key);
  int get_int(const std::string& section, const std::string& key, int fallback);
  long get_long(const std::string& section, const std::string& key, long fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  Vec3 get_vec3(const std::string& section, const std::string& key, const Vec3& fallback);
  SymTen2 get_sym(const std::string& section, const std::string& key,
                  const SymTen2& fallback);
  Ten2 get_ten2(const std::string& section, const std::string& key, const Ten2& fallback);
  std::vector<std::string> get_tokens(const std::string& section, const std::string& key);

  /// Throws ConfigError if a section outside `allowed` or an unconsumed key
  /// remains.
  void finish(const std::vector<std::string>& allowed_sections) const;

  std::uint64_t hash() const { return hash_; }
  const std::string& name() const { return name_; }

 private:
  struct Entry {
    std::vector<std::string> tokens;
    int line = 0;
    mutable bool used = false;
  };

  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(const std::string& what) const;

  std::string name_;
  std::uint64_t hash_ = 0;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;
};

/// A fully built continuum run plus output options.
struct ScenarioConfig {
  ContinuumScenario scenario;
  std::string out_dir = "out";
  unsigned long seed = 0;
  std::uint64_t config_hash = 0;
};

/// A particle-oracle run description.
struct ParticleRunConfig {
  std::string name = "particles";
  ParticleSystem system;
  double dt = 1e-3;
  int steps = 1000;
  int sample_every = 1;
  unsigned long seed = 0;
  std::uint64_t config_hash = 0;
  std::string out_dir = "out";
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig build_scenario(ConfigFile& cfg);

ParticleRunConfig load_particle_run(const std::string& path);
ParticleRunConfig build_particle_run(ConfigFile& cfg);

/// True when the config describes a particle run ([particles] present).
bool is_particle_config(const std::string& path);

/// Decaying spatial rate of the wall-loss mode: the smallest positive real
/// root of beta z^2 - |u| z + alpha - gamma_hat = 0.
double wall_loss_decay_root(const MaterialParams& mp, double u_mag);

/// Initial-condition builders shared by config loading and tests.
FieldState make_initial_uniform(const Grid& g, double rho, const Vec3& u, const SymTen2& Y,
                                const Ten2& B, const SymTen2& H, double eps = 0.0);

struct Smooth2DParams {
  double rho0 = 1.0;
  double amplitude = 0.1;
  double u0 = 0.3;
  double h0 = 0.5;   ///< isotropic ferment level (keeps H positive definite)
  double y0 = 0.4;   ///< isotropic inertia level
  double b0 = 0.2;   ///< micro-rate amplitude
};

FieldState make_initial_smooth2d(const Grid& g, const Smooth2DParams& p);

}  // namespace kinetic
