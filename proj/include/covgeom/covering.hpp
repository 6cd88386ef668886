#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covgeom/body.hpp"
#include "covgeom/defs.hpp"

namespace covgeom::cov {

/// Thrown when a greedy net hits its center budget before covering the
/// sample cloud; `coverage` is the fraction of cloud points already covered.
struct PartialNetError : Error {
  double coverage;
  PartialNetError(const std::string& msg, double cov)
      : Error(msg), coverage(cov) {}
};

/// Semiaxes of a centred ellipsoid, sorted descending, all positive.
struct EllipsoidSpectrum {
  int n = 0;
  Vector lambda;
};

/// Spectrum of an ellipsoid body (eigenvalues of its shape matrix).
EllipsoidSpectrum spectrum_of(const Body& E);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// phi_k = sup over l in {1..n} of 2^{-k/l} (prod_{j<=l} lambda_j)^{1/l},
/// evaluated in log space. `window` brackets the entropy number e_{k+1} of
/// the ellipsoid against the unit ball: phi_k <= e_{k+1} <= 6 phi_k.
struct PhiValue {
  double value = 0.0;
  int argmax_l = 0;
  Interval window;
};
PhiValue phi_k(const EllipsoidSpectrum& spec, int k);

/// Largest l-dimensional shadow and smallest l-dimensional central slice of
/// the ellipsoid; both are exact products of extreme semiaxes times |B_2^l|.
struct ProjectionVolumes {
  double max_projection = 0.0;
  double min_section = 0.0;
};
ProjectionVolumes max_projection_volume(const EllipsoidSpectrum& spec, int l);

/// Minimal C with (prod_{j<=l} lambda_j)^{1/l} <= C (n/l)^gamma for all l,
/// plus the covering bound it certifies: for t >= t_min = 6C/e^gamma,
///   N(E, t B_2^n) <= exp(gamma (6C)^{1/gamma} n / t^{1/gamma}).
struct RegularityBound {
  int n = 0;
  double gamma = 0.0;
  double C = 0.0;
  double t_min = 0.0;
  /// log of the covering bound at dilation t; throws PreconditionError for
  /// t < t_min where the bound is not certified.
  double log_bound(double t) const;
};
RegularityBound ellipsoid_regularity(const EllipsoidSpectrum& spec,
                                     double gamma);

/// Volumetric bracket on the covering number N(K, tL):
///   lower = |K| / |tL|,
///   upper = |2K + (tL n -tL)| / |tL n -tL|.
/// `method` records how the numerator of the upper bound was obtained:
///   "dilate-algebra"    exact, ellipsoids of proportional shape;
///   "minkowski"         exact, V-representation Minkowski sum and hull;
///   "halfspace-offset"  exact volume of a superset: the polytope summand's
///                       halfspaces pushed out by the ball summand's radius
///                       (after mapping the ellipsoid summand to a ball);
///   "ellipsoid-envelope" closed-form superset for non-proportional
///                       ellipsoid pairs.
/// All upper bounds are valid; the last two are not tight.
struct CoverBound {
  double t = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
};
CoverBound volumetric_covering_bounds(const Body& K, const Body& L, double t);

/// Exact containment test K subset of tL (certifying N(K, tL) = 1), decided
/// through support values against L's halfspaces or through the ellipsoid
/// gauge. The ellipsoid-in-ellipsoid case is a conservative sufficient test.
bool contained_in_dilate(const Body& K, const Body& L, double t);

/// Rows of volumetric brackets across a dilation grid, optionally fitted
/// with log N(t) ~= D n / t^beta (least squares on rows with upper > 1).
struct CoveringProfile {
  int n = 0;
  std::vector<CoverBound> rows;
  std::optional<double> beta;
  std::optional<double> D;
  double fit_residual = 0.0;
};
CoveringProfile covering_profile(const Body& K, const Body& L,
                                 const std::vector<double>& tgrid);

/// Fits (beta, D) on the profile's upper bounds; rows with upper <= 1 are
/// skipped. Leaves the fit fields empty when fewer than two rows remain.
void fit_power_law(CoveringProfile& profile);

/// Constructive covering: greedy farthest-point insertion over a seeded
/// sample cloud of K (interior rejection samples, boundary points, and
/// vertices), with distances measured in the gauge of t(L n -L). Insertion
/// stops once every cloud point is within two gauge units of a center, so
/// `count` bounds N(cloud, 2tL) outright and is a probabilistic upper bound
/// on N(K, 2tL); the centers are also pairwise more than two gauge units
/// apart, so `count` never exceeds the packing bound N(K, t(L n -L)).
/// `coverage` is 1 unless a center budget interrupted the run.
struct GreedyNet {
  Matrix centers;
  long count = 0;
  long cloud_size = 0;
  double coverage = 0.0;
};
GreedyNet greedy_net(const Body& K, const Body& L, double t,
                     std::uint64_t seed, long cloud_size = 10000,
                     long max_centers = 0);

/// Entropy-number brackets e_k(K, L) for k = 1..k_max, inverted from
/// volumetric brackets on a geometric dilation grid. Both endpoints are
/// non-increasing in k; `method` names the grid row that set the upper end.
struct EntropySequence {
  std::vector<Interval> e;
  std::vector<std::string> method;
};
EntropySequence entropy_sequence(const Body& K, const Body& L, int k_max);

/// Upper bound on the Gelfand number c_l(K, B_2^n): the smallest Euclidean
/// circumradius (about the origin) of K n F over `samples` random subspaces
/// F of dimension n-l+1. For centred ellipsoids the tail eigenspaces are
/// added to the candidate set, which makes the bound exact.
double gelfand_upper(const Body& K, int l, int samples, std::uint64_t seed);

/// Spherical average with a Monte Carlo error bar.
struct SphereAverage {
  double value = 0.0;
  double stderr_value = 0.0;
  long samples = 0;
};

/// M*(K): average of the support function over the unit sphere.
SphereAverage mean_width(const Body& K, long samples, std::uint64_t seed);

/// M(K): average of the gauge over the unit sphere; needs 0 interior to K.
SphereAverage mean_norm(const Body& K, long samples, std::uint64_t seed);

/// Sum over k of e_k-upper / sqrt(k), the right-hand side of Dudley's
/// entropy estimate against sqrt(n) M*(K).
double dudley_sum(const EntropySequence& seq);

}  // namespace covgeom::cov
