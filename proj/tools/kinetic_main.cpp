// Command-line driver: continuum scenarios, the mass-point oracle,
// closed-form references, and the statistical layer.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinetic/analytic.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/io.hpp"
#include "kinetic/scenario.hpp"
#include "kinetic/solver.hpp"
#include "kinetic/temperance.hpp"
#include "kinetic/version.hpp"

namespace {

using namespace kinetic;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

SymTen2 sym_from(const std::vector<double>& v) {
  SymTen2 t;
  for (int c = 0; c < 6; ++c) t.component(c) = v[c];
  return t;
}

std::string sym_csv(const SymTen2& t) {
  std::string s;
  for (int c = 0; c < 6; ++c) {
    if (c) s += ',';
    s += format_double(t.component(c));
  }
  return s;
}

int cmd_run(const std::string& config_path, const std::string& out_dir_flag,
            long seed_flag, int threads_flag, double snapshot_flag) {
  ScenarioConfig cfg = load_scenario(config_path);
  if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
  if (seed_flag >= 0) cfg.seed = static_cast<unsigned long>(seed_flag);
  if (threads_flag > 0) cfg.scenario.solver.threads = threads_flag;
  if (snapshot_flag > 0.0) cfg.scenario.solver.snapshot_every = snapshot_flag;

  std::filesystem::create_directories(cfg.out_dir);
  const OutputHeader header{version_string, cfg.config_hash, cfg.seed};

  RunResult result = run(cfg.scenario);

  for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%04zu.csv", k);
    write_snapshot_csv(cfg.out_dir + "/" + name, result.snapshots[k], header);
  }
  write_diagnostics_csv(cfg.out_dir + "/diagnostics.csv", result.diagnostics, header);

  std::printf("%s: %ld steps, %zu snapshots, max PSD projection %.3e\n",
              cfg.scenario.name.c_str(), result.steps, result.snapshots.size(),
              result.max_psd_projection_rel);
  return exit_ok;
}

int cmd_particles(const std::string& config_path, const std::string& out_dir_flag,
                  long seed_flag) {
  ParticleRunConfig cfg = load_particle_run(config_path);
  if (!out_dir_flag.empty()) cfg.out_dir = out_dir_flag;
  if (seed_flag >= 0) cfg.seed = static_cast<unsigned long>(seed_flag);

  std::filesystem::create_directories(cfg.out_dir);
  const OutputHeader header{version_string, cfg.config_hash, cfg.seed};

  AffineFrame frame;
  Trajectory traj = run_particles(cfg.system, frame, cfg.dt, cfg.steps, cfg.sample_every);
  write_particles_csv(cfg.out_dir + "/trajectory.csv", traj, header);

  if (traj.samples.size() >= 3) {
    const BalanceResiduals bal = balance_residuals(traj);
    const EnergyResiduals en = energy_theorem_residual(traj);
    std::printf("%s: %d steps of dt=%.6g\n", cfg.name.c_str(), cfg.steps, cfg.dt);
    std::printf("max residuals: momentum %.3e, moment %.3e, inertia %.3e, ferment %.3e, "
                "energy %.3e\n",
                bal.max_norm_momentum(), bal.max_norm_moment(), bal.max_norm_inertia(),
                bal.max_norm_ferment(), en.max_norm());
  }
  return exit_ok;
}

int cmd_analytic_stationary(double rho, double alpha, double gamma, double eta3, double L12,
                            double Y33) {
  const StationaryShear s = stationary_shear(rho, alpha, gamma, eta3, L12, Y33);
  const Ten2 L = L12 * outer(axis(0), axis(1));
  const double res =
      algebraic_residual(rho, alpha, gamma, eta3, L, L, SymTen2{0, 0, Y33, 0, 0, 0}, s.H);
  std::printf("stationary shear: rho=%g alpha=%g gamma=%g eta3=%g L12=%g Y33=%g\n", rho,
              alpha, gamma, eta3, L12, Y33);
  std::printf("  B12 = %s\n", format_double(s.B12).c_str());
  std::printf("  H11 = %s   (solving form)\n", format_double(s.H.xx).c_str());
  std::printf("  H22 = %s\n", format_double(s.H.yy).c_str());
  std::printf("  H12 = %s\n", format_double(s.H.xy).c_str());
  std::printf("  algebraic residual = %.3e\n", res);

  const double variant = stationary_shear_h11_variant(rho, alpha, gamma, L12);
  SymTen2 Hv = s.H;
  Hv.xx = variant;
  const double res_v = algebraic_residual(rho, alpha, gamma, eta3, L, L,
                                          SymTen2{0, 0, Y33, 0, 0, 0}, Hv);
  std::printf("  H11 = %s   (single-factor variant; residual %.3e, does not solve the "
              "system)\n",
              format_double(variant).c_str(), res_v);
  return exit_ok;
}

int cmd_analytic_dispersion(double beta, double u, double alpha, double gamma_hat) {
  const DispersionResult d = dispersion(beta, u, alpha, gamma_hat);
  std::printf("dispersion beta=%g |u|=%g alpha=%g gamma_hat=%g\n", beta, u, alpha, gamma_hat);
  std::printf("  interval (%s, %s)\n", format_double(d.interval_lo()).c_str(),
              format_double(d.interval_hi()).c_str());
  const char* regimes[] = {"below interval: one decaying mode",
                           "inside interval: two decaying modes",
                           "upper endpoint: double root",
                           "above interval: no real decay mode"};
  std::printf("  regime: %s\n", regimes[static_cast<int>(d.regime)]);
  if (d.n_real == 0)
    std::printf("  no real roots\n");
  else if (d.n_real == 1)
    std::printf("  zeta = %s (double)\n", format_double(d.root_lo).c_str());
  else
    std::printf("  zeta = %s, %s\n", format_double(d.root_lo).c_str(),
                format_double(d.root_hi).c_str());
  return exit_ok;
}

int cmd_analytic_example(const std::string& which, ExampleParams p, const Grid& grid,
                         double tau, const std::string& csv, unsigned long seed) {
  ExampleFlow flow;
  if (which == "1")
    flow = ExampleFlow::steady_bounce;
  else if (which == "2_spatial")
    flow = ExampleFlow::decay_spatial;
  else if (which == "2_temporal")
    flow = ExampleFlow::decay_temporal;
  else if (which == "3")
    flow = ExampleFlow::wall_loss;
  else if (which == "4")
    flow = ExampleFlow::couette;
  else
    throw ConfigError("unknown example '" + which + "'");

  if (flow == ExampleFlow::wall_loss && p.zeta == 0.0) {
    MaterialParams mp;
    mp.beta = p.beta;
    mp.alpha = p.alpha;
    mp.gamma_hat = p.gamma_hat;
    p.zeta = wall_loss_decay_root(mp, norm(p.u));
    std::printf("wall-loss decay root zeta = %s\n", format_double(p.zeta).c_str());
  }
  if (flow == ExampleFlow::steady_bounce)
    std::printf("wall pressure = %s\n", format_double(example1_wall_pressure(p)).c_str());
  if (flow == ExampleFlow::couette) {
    const SymTen2 extra = example4_extra_stress(p);
    std::printf("extra stress beyond the viscous part:\n");
    std::printf("  11: %s\n  22: %s\n  12: %s\n", format_double(extra.xx).c_str(),
                format_double(extra.yy).c_str(), format_double(extra.xy).c_str());
  }
  if (!csv.empty()) {
    const FieldState f = example_fields(flow, p, grid, tau);
    const OutputHeader header{version_string, 0, seed};
    write_snapshot_csv(csv, f, header);
    std::printf("wrote %s\n", csv.c_str());
  }
  return exit_ok;
}

int cmd_temperance_moments(const std::string& dist, double speed,
                           const std::vector<double>& theta, long mc_samples,
                           unsigned long seed, const std::string& out) {
  SpeedDistribution d;
  if (dist == "uniform_sphere") {
    d = SpeedDistribution::uniform_sphere(speed);
  } else if (dist == "canonical") {
    if (theta.size() != 6)
      throw ConfigError("canonical distribution needs --theta with 6 components");
    d = SpeedDistribution::canonical(sym_from(theta));
  } else {
    throw ConfigError("unknown distribution '" + dist + "'");
  }
  MomentResult r;
  if (mc_samples > 0)
    r = moments_mc(d, MCSpec{mc_samples, seed, 1});
  else
    r = moments(d);

  std::printf("norm = %s\n", format_double(r.norm).c_str());
  std::printf("mean = %s %s %s\n", format_double(r.mean.x).c_str(),
              format_double(r.mean.y).c_str(), format_double(r.mean.z).c_str());
  std::printf("H    = %s\n", sym_csv(r.H).c_str());
  if (mc_samples > 0) std::printf("SE   = %s\n", sym_csv(r.H_stderr).c_str());

  if (!out.empty()) {
    std::ofstream f(out);
    const OutputHeader header{version_string, 0, seed};
    f << header.lines();
    f << "H11,H22,H33,H12,H13,H23,SE11,SE22,SE33,SE12,SE13,SE23,norm\n";
    f << sym_csv(r.H) << ',' << sym_csv(r.H_stderr) << ',' << format_double(r.norm) << "\n";
  }
  return exit_ok;
}

int cmd_temperance_fit(const std::vector<double>& target, double tol) {
  if (target.size() != 6) throw ConfigError("--target needs 6 components");
  const Temperance t = fit_temperance(sym_from(target), tol);
  const SymTen2 H = canonical_moment(t.Theta);
  std::printf("Theta  = %s\n", sym_csv(t.Theta).c_str());
  std::printf("theta0 = %s\n", format_double(t.theta0).c_str());
  std::printf("H(Theta) = %s\n", sym_csv(H).c_str());
  std::printf("Q(H)     = %s\n", sym_csv(order_tensor(H)).c_str());
  return exit_ok;
}

int cmd_temperance_tabulate(const std::vector<std::vector<double>>& thetas,
                            const std::string& theta_file, long mc_samples,
                            unsigned long seed, const std::string& out) {
  std::vector<SymTen2> list;
  for (const auto& t : thetas) {
    if (t.size() != 6) throw ConfigError("--theta needs 6 components");
    list.push_back(sym_from(t));
  }
  if (!theta_file.empty()) {
    std::ifstream in(theta_file);
    if (!in) throw ConfigError("cannot open theta file: " + theta_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> vals;
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
      if (vals.size() != 6)
        throw ConfigError("theta file rows need 6 comma-separated components");
      list.push_back(sym_from(vals));
    }
  }
  if (list.empty()) throw ConfigError("no temperance tensors given");

  std::ofstream f(out);
  if (!f) throw ConfigError("cannot open output file: " + out);
  const OutputHeader header{version_string, 0, seed};
  f << header.lines();
  f << "T11,T22,T33,T12,T13,T23,H11,H22,H33,H12,H13,H23,Q11,Q22,Q33,Q12,Q13,Q23,theta0,"
       "SE11,SE22,SE33,SE12,SE13,SE23\n";
  for (const auto& Theta : list) {
    const Temperance t = make_temperance(Theta);
    SymTen2 H, SE;
    if (mc_samples > 0) {
      const MomentResult r = moments_mc(SpeedDistribution::canonical(Theta),
                                        MCSpec{mc_samples, seed, 1});
      H = r.H;
      SE = r.H_stderr;
    } else {
      H = canonical_moment(Theta);
    }
    f << sym_csv(Theta) << ',' << sym_csv(H) << ',' << sym_csv(order_tensor(H)) << ','
      << format_double(t.theta0) << ',' << sym_csv(SE) << "\n";
  }
  std::printf("wrote %s (%zu rows)\n", out.c_str(), list.size());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic continua toolbox"};
  app.set_version_flag("--version", kinetic::version_string);
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir;
  long seed = -1;
  int threads = 0;
  double snapshot_every = 0.0;
  auto* run_cmd = app.add_subcommand("run", "integrate a continuum scenario");
  run_cmd->add_option("--config", config_path, "scenario config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed, "seed recorded in output headers");
  run_cmd->add_option("--threads", threads, "worker threads");
  run_cmd->add_option("--snapshot-every", snapshot_every, "snapshot cadence override");

  // particles
  auto* part_cmd = app.add_subcommand("particles", "run the mass-point oracle");
  part_cmd->add_option("--config", config_path, "particle config file")->required();
  part_cmd->add_option("--out", out_dir, "output directory");
  part_cmd->add_option("--seed", seed, "seed override");

  // analytic
  auto* ana = app.add_subcommand("analytic", "closed-form references");
  double rho = 1.0, alpha = 1.0, gamma = 1.0, eta3 = 0.0, L12 = 1.0, Y33 = 1.0;
  auto* stat = ana->add_subcommand("stationary", "stationary shear algebra");
  stat->add_option("--rho", rho);
  stat->add_option("--alpha", alpha);
  stat->add_option("--gamma", gamma);
  stat->add_option("--eta3", eta3);
  stat->add_option("--L12", L12);
  stat->add_option("--Y33", Y33);

  double beta = 1.0, u_mag = 1.0, gamma_hat = 0.0;
  auto* disp = ana->add_subcommand("dispersion", "wall-loss decay roots");
  disp->add_option("--beta", beta);
  disp->add_option("--u", u_mag);
  disp->add_option("--alpha", alpha);
  disp->add_option("--gamma-hat", gamma_hat);

  std::string which = "1", csv_path;
  std::vector<double> uvec{0.0, 0.0, 0.0}, vvec{0.0, 1.0, 0.0};
  int n1 = 8, n2 = 1;
  double h1 = 0.125, h2 = 1.0, tau = 0.0, chi0 = 1.0, delta = 1.0;
  auto* exam = ana->add_subcommand("example", "elementary flow fields");
  exam->add_option("--which", which, "1 | 2_spatial | 2_temporal | 3 | 4");
  exam->add_option("--rho", rho);
  exam->add_option("--u", uvec)->expected(3);
  exam->add_option("--v", vvec)->expected(3);
  exam->add_option("--alpha", alpha);
  exam->add_option("--beta", beta);
  exam->add_option("--gamma", gamma);
  exam->add_option("--gamma-hat", gamma_hat);
  exam->add_option("--chi0", chi0);
  exam->add_option("--u-mag", u_mag);
  exam->add_option("--delta", delta);
  exam->add_option("--eta3", eta3);
  exam->add_option("--Y33", Y33);
  exam->add_option("--n1", n1);
  exam->add_option("--n2", n2);
  exam->add_option("--h1", h1);
  exam->add_option("--h2", h2);
  exam->add_option("--tau", tau);
  exam->add_option("--csv", csv_path, "write the fields in snapshot schema");

  // temperance
  auto* temp = app.add_subcommand("temperance", "velocity-distribution layer");
  std::string dist = "uniform_sphere";
  double speed = 1.0, tol = 1e-6;
  long mc_samples = 0;
  std::vector<double> theta, target;
  std::vector<std::vector<double>> theta_list;
  std::string theta_file, out_file = "temperance.csv";
  auto* mom = temp->add_subcommand("moments", "second moments of a distribution");
  mom->add_option("--dist", dist, "uniform_sphere | canonical");
  mom->add_option("--speed", speed);
  mom->add_option("--theta", theta)->expected(6);
  mom->add_option("--mc", mc_samples, "Monte Carlo samples (0: quadrature)");
  mom->add_option("--seed", seed);
  mom->add_option("--out", csv_path);

  auto* fit = temp->add_subcommand("fit", "match a target second moment");
  fit->add_option("--target", target)->expected(6)->required();
  fit->add_option("--tol", tol);

  auto* tab = temp->add_subcommand("tabulate", "H(Theta) and Q over a temperance list");
  tab->add_option("--theta", theta_list, "6 components, repeatable")->expected(6);
  tab->add_option("--theta-file", theta_file, "CSV with 6 columns per row");
  tab->add_option("--mc", mc_samples);
  tab->add_option("--seed", seed);
  tab->add_option("--out", out_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const unsigned long seed_value = seed < 0 ? 0ul : static_cast<unsigned long>(seed);
  try {
    if (run_cmd->parsed())
      return cmd_run(config_path, out_dir, seed, threads, snapshot_every);
    if (part_cmd->parsed()) return cmd_particles(config_path, out_dir, seed);
    if (ana->parsed()) {
      if (stat->parsed()) return cmd_analytic_stationary(rho, alpha, gamma, eta3, L12, Y33);
      if (disp->parsed()) return cmd_analytic_dispersion(beta, u_mag, alpha, gamma_hat);
      if (exam->parsed()) {
        kinetic::ExampleParams p;
        p.rho = rho;
        p.u = {uvec[0], uvec[1], uvec[2]};
        p.v = {vvec[0], vvec[1], vvec[2]};
        p.alpha = alpha;
        p.beta = beta;
        p.gamma = gamma;
        p.gamma_hat = gamma_hat;
        p.chi0 = chi0;
        p.u_mag = u_mag;
        p.delta = delta;
        p.eta3 = eta3;
        p.Y33 = Y33;
        kinetic::Grid grid{n1, n2, h1, h2};
        return cmd_analytic_example(which, p, grid, tau, csv_path, seed_value);
      }
      std::fprintf(stderr, "analytic: choose stationary, dispersion, or example\n");
      return exit_config;
    }
    if (temp->parsed()) {
      if (mom->parsed())
        return cmd_temperance_moments(dist, speed, theta, mc_samples, seed_value, csv_path);
      if (fit->parsed()) return cmd_temperance_fit(target, tol);
      if (tab->parsed())
        return cmd_temperance_tabulate(theta_list, theta_file, mc_samples, seed_value,
                                       out_file);
      std::fprintf(stderr, "temperance: choose moments, fit, or tabulate\n");
      return exit_config;
    }
  } catch (const kinetic::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const kinetic::DegenerateY& e) {
    std::fprintf(stderr, "runtime error: %s (cell %d,%d)\n", e.what(), e.cell_i, e.cell_j);
    return exit_runtime;
  } catch (const kinetic::Error& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return exit_runtime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_runtime;
  }
  return exit_config;
}
