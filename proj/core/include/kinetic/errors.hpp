#pragma once

#include <stdexcept>
#include <string>

namespace kinetic {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A symmetric tensor expected to be positive semidefinite is not.
class NotPSD : public Error {
 public:
  using Error::Error;
};

/// Particle configuration too degenerate for the requested operation.
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of an operation does not hold for the inputs.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// The micro-rate balance cannot be solved because the inertia tensor is
/// singular in a direction the right-hand side excites.
class DegenerateY : public Error {
 public:
  int cell_i = -1;
  int cell_j = -1;
  DegenerateY(const std::string& what, int i, int j) : Error(what), cell_i(i), cell_j(j) {}
};

/// Field values exceeded the overflow guard during time integration.
class BlowUp : public Error {
 public:
  using Error::Error;
};

/// The stationary shear algebra degenerates when the collision-loss rate is zero.
class AlphaZero : public Error {
 public:
  using Error::Error;
};

/// Two field sequences cannot be compared because grids or sample times differ.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Numerical quadrature failed a sanity check (normalization off).
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// The canonical density is not normalizable for the given temperance.
class NotNormalizable : public Error {
 public:
  using Error::Error;
};

/// Iterative moment matching did not converge.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Moment target outside the range of the canonical family.
class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

/// Order tensor undefined for a ferment tensor with zero trace.
class ZeroFerment : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration file is malformed or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kinetic
