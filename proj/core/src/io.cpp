#include "kinetic/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kinetic/errors.hpp"
#include "kinetic/version.hpp"

namespace kinetic {

std::string OutputHeader::lines() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# kinetic %s\n# config_hash=%016" PRIx64 "\n# seed=%lu\n",
                version.empty() ? version_string : version.c_str(), config_hash, seed);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_sym(std::string& row, const SymTen2& t) {
  for (int c = 0; c < 6; ++c) {
    row += ',';
    row += format_double(t.component(c));
  }
}

void append_ten(std::string& row, const Ten2& t) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      row += ',';
      row += format_double(t(i, j));
    }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_snapshot_csv(const std::string& path, const FieldState& s,
                        const OutputHeader& header) {
  std::ofstream out = open_out(path);
  out << header.lines();
  out << "# tau=" << format_double(s.time) << "\n";
  out << "# grid n1=" << s.grid.n1 << " n2=" << s.grid.n2 << " h1=" << format_double(s.grid.h1)
      << " h2=" << format_double(s.grid.h2) << "\n";
  out << "i,j,zeta1,zeta2,rho,v1,v2,v3,"
         "Y11,Y22,Y33,Y12,Y13,Y23,"
         "B11,B12,B13,B21,B22,B23,B31,B32,B33,"
         "H11,H22,H33,H12,H13,H23,eps\n";
  for (int j = 0; j < s.grid.n2; ++j)
    for (int i = 0; i < s.grid.n1; ++i) {
      std::string row = std::to_string(i) + ',' + std::to_string(j);
      row += ',' + format_double(s.grid.center1(i));
      row += ',' + format_double(s.grid.center2(j));
      row += ',' + format_double(s.rho(i, j));
      const Vec3 u = s.u(i, j);
      row += ',' + format_double(u.x) + ',' + format_double(u.y) + ',' + format_double(u.z);
      append_sym(row, s.Y(i, j));
      append_ten(row, s.B(i, j));
      append_sym(row, s.H(i, j));
      row += ',' + format_double(s.thermal ? s.eps(i, j) : 0.0);
      out << row << '\n';
    }
}

FieldState read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file: " + path);

  int n1 = 0, n2 = 0;
  double h1 = 1.0, h2 = 1.0, tau = 0.0;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(line.c_str(), "# grid n1=%d n2=%d h1=%lf h2=%lf", &n1, &n2, &h1, &h2);
      std::sscanf(line.c_str(), "# tau=%lf", &tau);
      continue;
    }
    if (line.rfind("i,j,", 0) == 0) continue;  // column header
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() != 30)
      throw ConfigError("snapshot row has wrong column count in " + path);
    rows.push_back(std::move(vals));
  }
  if (n1 <= 0 || n2 <= 0) throw ConfigError("snapshot file missing grid header: " + path);
  if (static_cast<int>(rows.size()) != n1 * n2)
    throw ConfigError("snapshot file row count does not match grid: " + path);

  Grid g;
  g.n1 = n1;
  g.n2 = n2;
  g.h1 = h1;
  g.h2 = h2;
  FieldState s(g);
  s.time = tau;
  for (const auto& vals : rows) {
    const int i = static_cast<int>(vals[0]);
    const int j = static_cast<int>(vals[1]);
    s.rho(i, j) = vals[4];
    s.u(i, j) = {vals[5], vals[6], vals[7]};
    for (int c = 0; c < 6; ++c) s.Y(i, j).component(c) = vals[8 + c];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s.B(i, j)(a, b) = vals[14 + a * 3 + b];
    for (int c = 0; c < 6; ++c) s.H(i, j).component(c) = vals[23 + c];
    s.eps(i, j) = vals[29];
  }
  return s;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records,
                           const OutputHeader& header) {
  std::ofstream out = open_out(path);
  out << header.lines();
  out << "tau,mass,"
         "E11,E22,E33,E12,E13,E23,Etr,"
         "Pvol11,Pvol22,Pvol33,Pvol12,Pvol13,Pvol23,"
         "Pint11,Pint22,Pint33,Pint12,Pint13,Pint23,"
         "Pbnd11,Pbnd22,Pbnd33,Pbnd12,Pbnd13,Pbnd23,"
         "Fadv11,Fadv22,Fadv33,Fadv12,Fadv13,Fadv23,"
         "energy_residual,"
         "C11,C22,C33,C12,C13,C23,"
         "min_eig_H,min_eig_Y,psd_projection_rel,wall_pressure_lo,wall_pressure_hi\n";
  for (const auto& r : records) {
    std::string row = format_double(r.tau) + ',' + format_double(r.mass);
    append_sym(row, r.energy);
    row += ',' + format_double(trace(r.energy));
    append_sym(row, r.power_volume);
    append_sym(row, r.power_internal);
    append_sym(row, r.power_boundary);
    append_sym(row, r.flux_advective);
    row += ',' + format_double(r.energy_residual);
    append_sym(row, r.collision_density);
    row += ',' + format_double(r.min_eig_H);
    row += ',' + format_double(r.min_eig_Y);
    row += ',' + format_double(r.psd_projection_rel);
    row += ',' + format_double(r.wall_pressure_lo);
    row += ',' + format_double(r.wall_pressure_hi);
    out << row << '\n';
  }
}

void write_particles_csv(const std::string& path, const Trajectory& traj,
                         const OutputHeader& header) {
  std::ofstream out = open_out(path);
  out << header.lines();
  out << "tau,x1,x2,x3,v1,v2,v3,"
         "Y11,Y22,Y33,Y12,Y13,Y23,"
         "B11,B12,B13,B21,B22,B23,B31,B32,B33,"
         "H11,H22,H33,H12,H13,H23,"
         "W11,W22,W33,W12,W13,W23,"
         "res_momentum,res_moment,res_inertia,res_ferment,res_energy\n";

  BalanceResiduals bal;
  EnergyResiduals en;
  const bool have_res = traj.samples.size() >= 3;
  if (have_res) {
    bal = balance_residuals(traj);
    en = energy_theorem_residual(traj);
  }
  for (std::size_t n = 0; n < traj.samples.size(); ++n) {
    const auto& a = traj.samples[n].agg;
    std::string row = format_double(traj.samples[n].tau);
    row += ',' + format_double(a.x.x) + ',' + format_double(a.x.y) + ',' + format_double(a.x.z);
    row += ',' + format_double(a.x_dot.x) + ',' + format_double(a.x_dot.y) + ',' +
           format_double(a.x_dot.z);
    append_sym(row, a.Y);
    append_ten(row, a.B);
    append_sym(row, a.H);
    append_sym(row, a.W);
    const bool interior = have_res && n >= 1 && n + 1 < traj.samples.size();
    if (interior) {
      const std::size_t k = n - 1;
      row += ',' + format_double(norm(bal.row_momentum[k]));
      row += ',' + format_double(norm_f(bal.row_moment[k]));
      row += ',' + format_double(norm_f(bal.row_inertia[k]));
      row += ',' + format_double(norm_f(bal.row_ferment[k]));
      row += ',' + format_double(norm_f(en.residual[k]));
    } else {
      row += ",nan,nan,nan,nan,nan";
    }
    out << row << '\n';
  }
}

}  // namespace kinetic
