#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace covgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (empty input, wrong dimension, ...).
struct PreconditionError : Error {
  using Error::Error;
};

/// A representation invariant failed (unbounded H-body, non-SPD shape, ...).
struct InvariantViolation : Error {
  using Error::Error;
};

/// The requested operation is not defined for the body's representation.
struct UnsupportedRepresentation : Error {
  using Error::Error;
};

/// An iterative solver failed to reach its residual target.
struct ConvergenceError : Error {
  using Error::Error;
};

/// An exact conversion or volume was requested above the exact-dimension cap.
struct DimensionCapExceeded : Error {
  using Error::Error;
};

/// A Monte Carlo estimate produced no information (zero hits); carries a bound.
struct InconclusiveEstimate : Error {
  double upper_confidence_bound;
  InconclusiveEstimate(const std::string& what, double ucb)
      : Error(what), upper_confidence_bound(ucb) {}
};

/// Numeric knobs shared across the library. All distances are absolute unless
/// stated otherwise; callers with very large or tiny bodies should rescale.
struct Tolerances {
  double dedup = 1e-9;          // vertex/halfspace deduplication distance
  double on_hyperplane = 1e-9;  // incidence test for facet membership
  double feasibility = 1e-9;    // LP feasibility slack
  double equality = 1e-6;       // relative slack for exact-equality assertions
  int exact_dim_cap = 10;       // max dimension for conversions/exact volume
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

/// Volume of the Euclidean unit ball in dimension n.
inline double unit_ball_volume(int n) {
  if (n < 0) throw PreconditionError("unit_ball_volume: negative dimension");
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

/// log of unit_ball_volume, stable for large n.
inline double log_unit_ball_volume(int n) {
  if (n < 0) throw PreconditionError("log_unit_ball_volume: negative dimension");
  return (n / 2.0) * std::log(M_PI) - std::lgamma(n / 2.0 + 1.0);
}

}  // namespace covgeom
