#pragma once

#include <vector>

#include "covgeom/defs.hpp"

namespace covgeom::hull {

/// A true (merged) facet of the hull: unit outward normal, support offset,
/// and the extreme points lying on it.
struct MergedFacet {
  Vector normal;
  double offset = 0.0;
  std::vector<int> vertex_ids;
};

/// Convex hull of a full-dimensional point set.
///
/// The build runs beneath-beyond insertion on a deterministically joggled
/// copy of the input, then refits every supporting hyperplane on the original
/// coordinates. `simplices` triangulates the boundary; together with `orient`
/// it forms a consistently oriented cycle, so signed cone determinants give
/// exact volumes and moments even where the joggle folded a sliver.
struct Hull {
  int dim = 0;
  std::vector<std::vector<int>> simplices;  // dim point ids per boundary simplex
  std::vector<int> orient;                  // +1/-1 matching outward orientation
  std::vector<MergedFacet> facets;          // exact supporting hyperplanes
  std::vector<int> vertices;                // sorted ids of extreme points
  Vector interior;                          // average of the extreme points
};

/// Build the hull of the columns of `points` (n x m). Throws
/// InvariantViolation when the set is not full-dimensional.
Hull build(const Matrix& points, const Tolerances& tol = default_tolerances());

struct BodyMoments {
  double volume = 0.0;
  Vector barycentre;
  Matrix second_moment;  // integral of x x^T over the body, about the origin
};

double volume(const Matrix& points, const Hull& h);
BodyMoments moments(const Matrix& points, const Hull& h);

/// Euclidean distance from q to conv(columns of X) by Wolfe's min-norm-point
/// algorithm. Exact up to floating point; returns 0 for interior points.
double distance_to_hull(const Vector& q, const Matrix& X);

/// Affine rank of a point set (number of independent edge directions).
int affine_rank(const Matrix& points, double tol_sv = 1e-9);

}  // namespace covgeom::hull
