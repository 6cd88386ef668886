#pragma once

#include "covgeom/body.hpp"

namespace covgeom {

// Internal accessor for the shared body cache; used by the volume engine and
// the conversion paths. Not installed.
struct BodyAccess {
  static Body::Cache& cache(const Body& K) { return *K.cache_; }
  static Body wrap_vertices(const Matrix& V, const Tolerances& tol);
};

// The vertex representation of K: K itself for vertices kind, the cached
// conversion for halfspaces kind. Throws UnsupportedRepresentation for
// ellipsoids.
const Body& as_vertex_body(const Body& K);

// Redundancy-pruned halfspace data (unit rows assumed).
void prune_halfspaces(Matrix& A, Vector& b, double slack);

}  // namespace covgeom
