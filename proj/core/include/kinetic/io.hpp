#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kinetic/fields.hpp"
#include "kinetic/particles.hpp"
#include "kinetic/solver.hpp"

namespace kinetic {

/// Identification block written as comment lines at the top of every
/// output file: tool version, config hash, seed.
struct OutputHeader {
  std::string version;
  std::uint64_t config_hash = 0;
  unsigned long seed = 0;

  std::string lines() const;
};

/// FNV-1a hash of a byte string (used to fingerprint config files).
std::uint64_t fnv1a(const std::string& bytes);

/// Shortest round-trip formatting of a double (deterministic output files).
std::string format_double(double v);

/// One row per cell: i, j, zeta1, zeta2, rho, v1..v3, Y(6), B(9), H(6), eps.
void write_snapshot_csv(const std::string& path, const FieldState& s,
                        const OutputHeader& header);

/// Read a snapshot written by write_snapshot_csv back onto its grid.
FieldState read_snapshot_csv(const std::string& path);

/// Diagnostics series: tau plus the full diagnostics record per row.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records,
                           const OutputHeader& header);

/// Particle trajectory with residual norms at interior samples.
void write_particles_csv(const std::string& path, const Trajectory& traj,
                         const OutputHeader& header);

}  // namespace kinetic
