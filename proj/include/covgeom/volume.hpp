#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "covgeom/body.hpp"

namespace covgeom::vol {

/// A volume figure with its provenance. Exact paths report stderr 0.
struct VolumeEstimate {
  double value = 0.0;
  double stderr_value = 0.0;
  long samples = 0;
  std::string method;  // "exact" | "ellipsoid" | "monte-carlo"
};

/// First and second moments of the uniform measure on a body, plus the two
/// shape summaries derived from them. The isotropic constant uses the
/// volume-one, centred normalization: L = |K|^{-1/n} * sqrt(mean eigenvalue
/// of the covariance). Anisotropy is the covariance condition number.
struct MomentReport {
  double volume = 0.0;
  Vector barycentre;
  Matrix covariance;
  double isotropic_constant = 0.0;
  double anisotropy = 1.0;
};

/// Exact volume. Polytopes triangulate their hull (dimension capped);
/// ellipsoids use det(shape) times the unit-ball volume.
VolumeEstimate exact_volume(const Body& K);

/// Rejection sampling of K inside its bounding box. Deterministic for a
/// fixed seed; samples are drawn in fixed-size blocks with per-block derived
/// seeds, so the estimate does not depend on how blocks are scheduled.
/// Throws InconclusiveEstimate (carrying the rule-of-three upper confidence
/// bound) when no sample lands in the body.
VolumeEstimate mc_volume(const Body& K, long samples, std::uint64_t seed);

/// Same estimator against a raw membership oracle and box [lo, hi].
VolumeEstimate mc_volume(const std::function<bool(const Vector&)>& member,
                         const Vector& lo, const Vector& hi, long samples,
                         std::uint64_t seed);

/// Exact moments (same representation rules as exact_volume).
MomentReport moments(const Body& K);

/// vrad(K) = (|K| / |B_2^n|)^{1/n}.
double volume_radius(const Body& K);

/// (|K| |K^o|)^{1/n} / |B_2^n|^{2/n}; affine-invariant, exactly 1 on
/// centred ellipsoids. Requires 0 in int K.
double volume_product(const Body& K);

}  // namespace covgeom::vol
