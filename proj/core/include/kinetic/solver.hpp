#pragma once

#include <string>
#include <vector>

#include "kinetic/constitutive.hpp"
#include "kinetic/fields.hpp"
#include "kinetic/grid.hpp"

namespace kinetic {

/// How the micro-rate B is determined.
enum class ConstraintMode { independent_B, B_equals_L, B_equals_skwL };

struct SolverConfig {
  double cfl = 0.4;             ///< advective/diffusive step fraction
  double t_end = 1.0;
  double dt_fixed = 0.0;        ///< > 0 overrides the automatic step size
  ConstraintMode mode = ConstraintMode::independent_B;
  bool psd_projection = true;   ///< clamp negative ferment eigenvalues each step
  bool project_Y = false;
  bool plane_flow = false;      ///< zero the out-of-plane couplings each step
  double snapshot_every = 0.0;  ///< 0: only first and last
  double overflow_guard = 1e12;
  int threads = 1;

  void validate() const {
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }
};

/// Everything a continuum run needs.
struct ContinuumScenario {
  std::string name = "scenario";
  Grid grid;
  MaterialParams material;
  BoundarySpec boundary;
  SourceSpec sources;
  SolverConfig solver;
  FieldState initial;
  bool thermal = false;
};

/// Per-snapshot diagnostics. The energy bookkeeping follows the global
/// kinetic-energy identity: d/dtau of the energy integral equals volume
/// power + internal power + boundary power - advective energy flux.
struct DiagnosticsRecord {
  double tau = 0.0;
  double mass = 0.0;
  SymTen2 energy;             ///< integral of rho W
  SymTen2 power_volume;       ///< integral of rho[sym(u x f + B M) + S/2]
  SymTen2 power_internal;     ///< integral of the internal tensor power
  SymTen2 power_boundary;     ///< boundary traction power + ferment influx
  SymTen2 flux_advective;     ///< boundary flux of rho W (u . n)
  double energy_residual = 0.0;  ///< filled between snapshots after the run
  SymTen2 collision_density;  ///< (nu/lambda) mean of H^{1/2}
  double min_eig_H = 0.0;
  double min_eig_Y = 0.0;
  double psd_projection_rel = 0.0;  ///< max relative clamp since last record
  double wall_pressure_lo = 0.0;    ///< mean -n.(T n) on the zeta2 = 0 wall
  double wall_pressure_hi = 0.0;
};

struct RunResult {
  std::vector<FieldState> snapshots;
  std::vector<DiagnosticsRecord> diagnostics;
  double max_psd_projection_rel = 0.0;
  long steps = 0;
};

/// Time derivatives of all fields by the local balance laws. Ghosts of s
/// must be filled; in constrained modes B must already be assigned.
/// Throws DegenerateY when the micro-rate equation is unsolvable.
FieldState rhs(const FieldState& s, const MaterialParams& mp, const SourceSpec& src,
               ConstraintMode mode, int threads = 1);

/// Assign B = L or B = skw L on the interior plus one ghost ring.
void assign_constrained_B(FieldState& s, ConstraintMode mode);

/// Classical RK4 step; bc/rt provide stage-time ghost values.
void step_rk4(FieldState& s, double dt, const MaterialParams& mp, const SourceSpec& src,
              const BoundarySpec& bc, const BoundaryRuntime& rt, ConstraintMode mode,
              int threads = 1);

/// Stable step estimate from the advective and diffusive limits.
double stable_dt(const FieldState& s, const MaterialParams& mp, double cfl);

/// Full diagnostics of one ghost-filled state.
DiagnosticsRecord diagnostics(const FieldState& s, const MaterialParams& mp,
                              const SourceSpec& src, const BoundarySpec& bc);

/// Integrate the scenario, collecting snapshots and diagnostics on cadence.
RunResult run(const ContinuumScenario& scenario);

/// Fill the energy_residual column from consecutive diagnostics records.
void fill_energy_residuals(std::vector<DiagnosticsRecord>& records);

/// Ferment production terms of the transport row (collision loss, gross
/// stimulus, diffusion); objective under an observer spin.
SymTen2 ferment_source(const SymTen2& H, const SymTen2& D, double rho,
                       const MaterialParams& mp, const SymTen2& S,
                       const SymTen2& lap_rhoH);

}  // namespace kinetic
