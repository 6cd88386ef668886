#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covgeom/body.hpp"

namespace covgeom::sub {

/// An l-dimensional linear subspace of R^n, carried as an orthonormal basis.
/// Bodies produced by project/section live in the basis coordinates, so a
/// point y in the small body corresponds to basis * y in R^n.
struct Subspace {
  int n = 0;
  int l = 0;
  Matrix basis;  // n x l, orthonormal columns
};

/// Haar-distributed subspace (Gaussian matrix, orthonormalized, signs
/// canonicalized). Deterministic per seed.
Subspace random_subspace(int n, int l, std::uint64_t seed);

/// Span of the given columns; throws when they are dependent.
Subspace span_of(const Matrix& columns);

Subspace orthogonal_complement(const Subspace& F);

/// Orthogonal projection Proj_F(K), expressed in F's coordinates.
Body project(const Body& K, const Subspace& F);

/// Slice K cap (offset + F), expressed in F's coordinates. The offset must
/// lie in F^perp (it defaults to 0). Throws PreconditionError when the slice
/// misses the interior of K.
Body section(const Body& K, const Subspace& F,
             const std::optional<Vector>& offset = std::nullopt);

/// g(y) = |K cap (basis*y + F^perp)|, the (n-l)-dimensional fibre volume of
/// the marginal on F at the point with F-coordinates y. Returns 0 outside
/// the projection of K.
double marginal_density(const Body& K, const Subspace& F, const Vector& y);

/// One sampled subspace in a scan; the subspace is reproducible as
/// random_subspace(n, l, subspace_seed).
struct ScanSample {
  int index = 0;
  std::uint64_t subspace_seed = 0;
  double vrad_projection = 0.0;
  double vrad_section = 0.0;
};

/// Sampled estimates of the extremal volume radii over the Grassmannian:
/// v (projections) and w (sections), sup and inf each. Extremes are running
/// values over the successful rows, so extending the sample count with the
/// same seed reproduces every earlier row.
struct ScanReport {
  int l = 0;
  long samples = 0;
  long failures = 0;
  std::vector<ScanSample> rows;
  double v_sup = 0.0;
  double v_inf = 0.0;
  double w_sup = 0.0;
  double w_inf = 0.0;
};

ScanReport vrad_scan(const Body& K, int l, int samples, std::uint64_t seed);

/// Ball's star body K_p(g) of the marginal g of K on F, tabulated as a
/// radial function over a fixed quasi-uniform direction grid:
///   r(theta) = ((p/g(0)) * Int_0^inf g(u theta) u^{p-1} du)^{1/p}.
struct StarBody {
  Subspace F;
  double p = 0.0;
  double central_density = 0.0;  // g(0)
  Matrix directions;             // l x m, unit columns
  Vector radial;                 // m
};

StarBody ball_body(const Body& K, const Subspace& F, double p);

/// Grid check of (1/e) T subset Proj_F(K) subset e (n+1)/(l+1) T for
/// T = K_{l+1}(g), K with barycentre at the origin. Both excess values are
/// at most 1 when the inclusions hold along every grid direction.
struct SandwichReport {
  double inner_excess = 0.0;  // max over grid of ((1/e) r_T) / r_Proj
  double outer_excess = 0.0;  // max over grid of r_Proj / (e (n+1)/(l+1) r_T)
};

SandwichReport ball_body_sandwich(const Body& K, const Subspace& F);

}  // namespace covgeom::sub
