#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "covgeom/defs.hpp"
#include "covgeom/hull.hpp"

namespace covgeom {

/// A convex body in one of three representations:
///   vertices   -- convex hull of the columns of a matrix,
///   halfspaces -- {x : A x <= b} with unit row normals,
///   ellipsoid  -- c + S(B_2^n) with S symmetric positive definite.
///
/// Bodies are immutable values. Every operation returns a fresh body, so
/// cached quantities (hull, volume, moments, boxes) can never go stale; the
/// cache is shared between copies and filled on demand. Cache writes are
/// idempotent and mutex-guarded.
class Body {
 public:
  enum class Kind { vertices, halfspaces, ellipsoid };

  /// Hull of the columns of `V`. With prune=true (default) the point set is
  /// reduced to its extreme points, which builds the hull eagerly; pass
  /// prune=false for point sets already known to be extreme. Lower-dimensional
  /// point sets are accepted unpruned; operations needing full dimension
  /// throw when they meet one.
  static Body from_vertices(const Matrix& V, bool prune = true,
                            const Tolerances& tol = default_tolerances());

  /// {x : A x <= b}, rows of A are the outward normals. Rows are normalized
  /// and deduplicated. With certify=true an enclosing box is computed by
  /// support maximization along +-e_j, so unbounded inputs throw
  /// InvariantViolation at construction.
  static Body from_halfspaces(const Matrix& A, const Vector& b, bool certify = true,
                              const Tolerances& tol = default_tolerances());

  /// c + S(B_2^n); S must be symmetric within tolerance and positive definite.
  static Body make_ellipsoid(const Vector& c, const Matrix& S,
                             const Tolerances& tol = default_tolerances());

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Tolerances& tol() const { return tol_; }

  const Matrix& vertex_matrix() const;  // vertices kind: n x m, columns = points
  const Matrix& normal_matrix() const;  // halfspaces kind: m x n, rows = normals
  const Vector& offset_vector() const;  // halfspaces kind
  const Vector& center() const;         // ellipsoid kind
  const Matrix& shape() const;          // ellipsoid kind

  /// Hull of a vertices-kind body (built once, then shared).
  std::shared_ptr<const hull::Hull> hull() const;

  struct CacheView;  // internal accessor used by the volume engine

 private:
  friend struct BodyAccess;
  struct Cache {
    std::mutex mu;
    std::shared_ptr<const hull::Hull> hull;
    std::shared_ptr<const Body> as_vertices;  // conversion cache for halfspaces kind
    std::optional<double> volume;
    std::optional<Vector> barycentre;
    std::optional<Matrix> second_moment;
    std::optional<std::pair<Vector, Vector>> box;
  };

  Body() = default;

  Kind kind_ = Kind::vertices;
  int dim_ = 0;
  Matrix V_;      // vertices kind
  Matrix A_;      // halfspaces kind
  Vector b_;      // halfspaces kind
  Vector c_;      // ellipsoid kind
  Matrix S_;      // ellipsoid kind
  Tolerances tol_;
  std::shared_ptr<Cache> cache_;
};

// ---- evaluations ----------------------------------------------------------

/// h_K(x) = max_{y in K} <x, y>. Exact on all three representations.
double support_value(const Body& K, const Vector& x);

/// ||x||_K = inf{t > 0 : x in tK}. +infinity when x is outside the cone of K.
double gauge_value(const Body& K, const Vector& x);

/// Membership test with absolute slack tol (defaults to the body tolerance).
bool contains(const Body& K, const Vector& x, double slack = -1.0);

/// Componentwise bounding box [lo, hi] (cached).
std::pair<Vector, Vector> bounding_box(const Body& K);

/// A point in the interior of K.
Vector interior_point(const Body& K);

/// Inradius and circumradius about the origin; requires 0 in the interior
/// for the inradius to be positive. Non-centred ellipsoids use a multistart
/// projected iteration and are accurate to ~1e-10.
struct Radii {
  double inradius = 0.0;
  double circumradius = 0.0;
};
Radii radii(const Body& K);

/// Exact Hausdorff distance between two bodies with available or convertible
/// vertex representations (Wolfe distances vertex-to-body, both ways).
double hausdorff_distance(const Body& K, const Body& L);

// ---- transformations (all return new bodies) ------------------------------

Body translate(const Body& K, const Vector& v);
Body negate(const Body& K);
Body dilate(const Body& K, double t);  // t > 0

/// Image A K + v for invertible A.
Body affine_image(const Body& K, const Matrix& A, const Vector& v);

/// Polar K^o = {y : <x,y> <= 1 for all x in K}; requires 0 in int K.
/// Vertices map to halfspaces exactly and vice versa; ellipsoids must be
/// centred (callers translate first).
Body polar(const Body& K);

/// conv(K union -K).
Body symmetric_hull(const Body& K);

/// K' = (K - p) intersect -(K - p). Default p: the origin when it is interior,
/// otherwise the barycentre.
Body symmetric_intersection(const Body& K, const std::optional<Vector>& about = std::nullopt);

/// K - K (difference body; origin-symmetric).
Body difference_body(const Body& K);

/// Minkowski sum of two vertices-kind bodies (exact, pruned).
Body minkowski_sum(const Body& K, const Body& L);

/// Intersection of two halfspaces-kind bodies, redundant rows pruned by LP.
Body intersect(const Body& K, const Body& L);

/// Convert between representations. vertices <-> halfspaces is exact below
/// the dimension cap; ellipsoid conversions are unsupported.
Body convert(const Body& K, Body::Kind target);

/// Barycentre of K (exact for polytopes below the cap, centre for ellipsoids).
Vector barycentre(const Body& K);

}  // namespace covgeom
