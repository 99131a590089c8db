#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/tensor.hpp"

namespace kinetic {

/// All continuum unknowns on one grid. H and Y are stored symmetric by
/// representation; rho must stay positive.
struct FieldState {
  Grid grid;
  double time = 0.0;
  Field2<double> rho;
  Field2<Vec3> u;
  Field2<SymTen2> Y;
  Field2<Ten2> B;
  Field2<SymTen2> H;
  Field2<double> eps;
  bool thermal = false;

  FieldState() = default;
  explicit FieldState(const Grid& g)
      : grid(g), rho(g), u(g), Y(g), B(g), H(g), eps(g) {}
};

/// External volume sources per cell.
struct SourceSpec {
  Field2<Vec3> f;            ///< body force per unit mass
  Field2<Ten2> M;            ///< external tensor moment per unit mass
  Field2<SymTen2> S;         ///< external stirring per unit mass
  Field2<double> lambda_heat;  ///< volumetric heating rate

  SourceSpec() = default;
  explicit SourceSpec(const Grid& g) : f(g), M(g), S(g), lambda_heat(g) {}
};

/// Populate all ghost layers of every field according to the boundary
/// specification at time tau. Corner ghosts are produced by applying the
/// x2 pass over the already-extended x1 columns.
void fill_ghosts(FieldState& s, const BoundarySpec& bc, const BoundaryRuntime& rt, double tau);

/// Record the initial face values of H on ferment-loss sides.
BoundaryRuntime make_boundary_runtime(const FieldState& s, const BoundarySpec& bc,
                                      double gamma_hat);

}  // namespace kinetic
