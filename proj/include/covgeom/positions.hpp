#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "covgeom/body.hpp"
#include "covgeom/defs.hpp"

namespace covgeom::pos {

/// Affine normalization receipt: the returned body is A K + v. Residuals are
/// recomputed on the output body, so they certify the position rather than
/// echoing solver state. `L` is filled by the isotropic normalization only.
struct PositionReport {
  Matrix A;
  Vector v;
  std::string tag;
  double barycentre_residual = 0.0;
  double anisotropy_residual = 0.0;
  double L = 0.0;
};

/// Translates the barycentre to the origin.
std::pair<Body, PositionReport> centre(const Body& K);

/// Translates the Santalo point to the origin: the unique s with
/// b((K - s) polar) = 0, found by damped Newton steps on the volume of the
/// polar (strictly convex in the shift). Residual below 1e-7 or
/// ConvergenceError carrying the best residual seen.
std::pair<Body, PositionReport> santalo_position(const Body& K);

/// Maps K to volume one, barycentre zero, covariance L^2 I. The reported L
/// is at least 1/(sqrt(n+2) |B_2^n|^{1/n}), with equality for balls.
std::pair<Body, PositionReport> isotropic_position(const Body& K);

/// Replaces the shape matrix by its principal square root. The input must
/// be a centred ellipsoid; the output's squared shape is the input's shape.
Body balance_ellipsoid(const Body& E);

/// Stand-ins for an M-ellipsoid of K, all sharing the covariance shape:
/// the volume-matched isotropy ellipsoid, its largest inscribed multiple,
/// and its smallest circumscribed multiple. Centred at the barycentre.
Body isotropy_ellipsoid(const Body& K);
Body john_like_ellipsoid(const Body& K);
Body loewner_like_ellipsoid(const Body& K);

enum class MEllipsoidChooser { isotropy, john, loewner };

/// One dilation in the regularity profile: upper bounds on the logs of the
/// four covering quantities N(K, tB), N(K polar, tB), N(B, tK),
/// N(B, tK polar), and their maximum.
struct MPositionRow {
  double t = 0.0;
  std::array<double, 4> logN{};
  double max_logN = 0.0;
};

/// Fitted regularity of a body against the ball: log N(t) ~= D n / t^beta,
/// least squares on the rows with positive max_logN. `saturated` marks a
/// body covered by a single translate at every grid dilation (nothing to
/// fit). A profile that reaches zero by the last grid dilation has
/// collapsed to containment; the fit needs at least two positive rows, so
/// beta and D stay 0 when the collapse leaves fewer. `regular` is true when
/// the profile saturates, collapses within the grid, or fits a positive
/// beta. Rows are monotone non-increasing in t.
struct RegularityProfile {
  int n = 0;
  std::vector<MPositionRow> rows;
  bool saturated = false;
  bool regular = false;
  double beta = 0.0;
  double D = 0.0;
  double fit_residual = 0.0;
};

std::vector<double> default_mposition_grid();

/// Profiles the four covering quantities of K against the unit ball across
/// the dilation grid and fits the regularity exponent.
RegularityProfile mposition_profile(
    const Body& K, const std::vector<double>& tgrid = default_mposition_grid());

/// The constructive regularization pipeline: map the heuristic ellipsoid of
/// K n -K to the ball, read the heuristic ellipsoid Delta_lambda of
/// conv(K, -K) in those coordinates, apply the inverse square root
/// Delta_sqrt(lambda)^{-1}, and profile the result. The caller positions K
/// first (barycentre or Santalo point at the origin).
std::pair<Body, RegularityProfile> regularize(
    const Body& K, MEllipsoidChooser chooser = MEllipsoidChooser::isotropy,
    const std::vector<double>& tgrid = default_mposition_grid());

}  // namespace covgeom::pos
