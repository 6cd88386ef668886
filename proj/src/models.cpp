#include "covgeom/models.hpp"

#include <cmath>

#include "covgeom/rng.hpp"

namespace covgeom::models {
namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw PreconditionError(msg);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Body cube(int n, double half_width) {
  require(n >= 1 && half_width > 0.0, "cube: bad parameters");
  Matrix A(2 * n, n);
  A.topRows(n) = Matrix::Identity(n, n);
  A.bottomRows(n) = -Matrix::Identity(n, n);
  Vector b = Vector::Constant(2 * n, half_width);
  return Body::from_halfspaces(A, b, false);
}

Body cube_vertex_form(int n, double half_width) {
  require(n >= 1 && n <= 16 && half_width > 0.0, "cube_vertex_form: bad parameters");
  Matrix V(n, 1 << n);
  for (int m = 0; m < (1 << n); ++m) {
    for (int i = 0; i < n; ++i)
      V(i, m) = (m >> i & 1) ? half_width : -half_width;
  }
  return Body::from_vertices(V, false);
}

Body cross_polytope(int n, double radius) {
  require(n >= 1 && radius > 0.0, "cross_polytope: bad parameters");
  Matrix V = Matrix::Zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    V(i, 2 * i) = radius;
    V(i, 2 * i + 1) = -radius;
  }
  return Body::from_vertices(V, false);
}

Body ball(int n, double radius) {
  require(n >= 1 && radius > 0.0, "ball: bad parameters");
  return Body::make_ellipsoid(Vector::Zero(n), radius * Matrix::Identity(n, n));
}

Body axis_ellipsoid(const Vector& semiaxes) {
  require(semiaxes.size() >= 1 && semiaxes.minCoeff() > 0.0,
          "axis_ellipsoid: semiaxes must be positive");
  const int n = static_cast<int>(semiaxes.size());
  return Body::make_ellipsoid(Vector::Zero(n), Matrix(semiaxes.asDiagonal()));
}

Matrix helmert_basis(int n) {
  require(n >= 1, "helmert_basis: need n >= 1");
  Matrix B = Matrix::Zero(n + 1, n);
  for (int k = 0; k < n; ++k) {
    const double s = 1.0 / std::sqrt((k + 1.0) * (k + 2.0));
    for (int i = 0; i <= k; ++i) B(i, k) = s;
    B(k + 1, k) = -(k + 1.0) * s;
  }
  return B;
}

EmbeddedSimplex regular_simplex(int n) {
  require(n >= 1, "regular_simplex: need n >= 1");
  Matrix basis = helmert_basis(n);
  Matrix raw = Matrix::Identity(n + 1, n + 1) -
               Matrix::Constant(n + 1, n + 1, 1.0 / (n + 1.0));
  return {Body::from_vertices(basis.transpose() * raw, false), raw, basis};
}

double simplex_volume(int n) {
  require(n >= 1, "simplex_volume: need n >= 1");
  return std::sqrt(n + 1.0) / factorial(n);
}

sub::Subspace simplex_section_subspace(int n, int l) {
  require(n >= 2 && l >= 1 && l < n, "simplex_section_subspace: need 1 <= l < n");
  EmbeddedSimplex S = regular_simplex(n);
  return sub::span_of(S.body.vertex_matrix().leftCols(l));
}

double simplex_section_volume(int n, int l) {
  require(n >= 2 && l >= 1 && l < n, "simplex_section_volume: need 1 <= l < n");
  return std::sqrt(n + 1.0) / (factorial(l) * std::sqrt(n + 1.0 - l));
}

Body cube_section_body(int n) {
  require(n >= 1, "cube_section_body: need n >= 1");
  Matrix B = helmert_basis(n);
  Matrix A(2 * (n + 1), n);
  A.topRows(n + 1) = B;
  A.bottomRows(n + 1) = -B;
  Vector b = Vector::Constant(2 * (n + 1), 1.0);
  return Body::from_halfspaces(A, b, false);
}

Body b1_projection_body(int n) {
  require(n >= 1, "b1_projection_body: need n >= 1");
  Matrix B = helmert_basis(n);
  Matrix V(n, 2 * (n + 1));
  V.leftCols(n + 1) = B.transpose();
  V.rightCols(n + 1) = -B.transpose();
  return Body::from_vertices(V, false);
}

SimplexIdentityReport b1_projection_identities(int n) {
  require(n >= 2, "b1_projection_identities: need n >= 2");
  EmbeddedSimplex S = regular_simplex(n);
  Body hull_sym = symmetric_hull(S.body);
  Body inter_sym = symmetric_intersection(S.body);

  SimplexIdentityReport rep;
  rep.hull_vs_projection = hausdorff_distance(hull_sym, b1_projection_body(n));
  rep.intersection_vs_section =
      hausdorff_distance(inter_sym, dilate(cube_section_body(n), 1.0 / (n + 1.0)));
  rep.polar_vs_scaled_intersection =
      hausdorff_distance(polar(hull_sym), dilate(inter_sym, n + 1.0));

  for (int l = 1; l < n; ++l) {
    sub::Subspace F = simplex_section_subspace(n, l);
    Body lhs = sub::project(hull_sym, F);
    Body rhs = symmetric_hull(sub::section(S.body, F));
    rep.projected_hull_vs_sectioned_hull.push_back(hausdorff_distance(lhs, rhs));
  }
  return rep;
}

double ball_cube_section_bound(int n, int l) {
  require(n >= 1 && l >= 1 && l <= n + 1, "ball_cube_section_bound: need 1 <= l <= n+1");
  return std::pow((n + 1.0) / l, l / 2.0);
}

double schutt_entropy_reference(int n, double k) {
  require(n >= 1, "schutt_entropy_reference: need n >= 1");
  if (k < 0.0 || !std::isfinite(k))
    throw PreconditionError("schutt_entropy_reference: k out of range");
  if (k <= std::log(n + 1.0)) return std::sqrt(static_cast<double>(n));
  if (k <= n + 1.0) return std::sqrt(n / k) * std::sqrt(std::log(M_E * n / k));
  return std::pow(2.0, -k / n) * n;
}

Body random_polytope(int n, int m, PointMode mode, std::uint64_t seed,
                     bool symmetrize) {
  require(n >= 1 && m >= n + 1, "random_polytope: need m >= n+1");
  for (int attempt = 0; attempt < 8; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Matrix P(n, m);
    for (int j = 0; j < m; ++j)
      P.col(j) = mode == PointMode::gaussian ? rng.gaussian_vector(n)
                                             : rng.sphere_vector(n);
    Matrix V;
    if (symmetrize) {
      V.resize(n, 2 * m);
      V.leftCols(m) = P;
      V.rightCols(m) = -P;
    } else {
      V = P;
    }
    if (hull::affine_rank(V) < n) continue;
    return Body::from_vertices(V, true);
  }
  throw ConvergenceError("random_polytope: degenerate point sets for every retry");
}

}  // namespace covgeom::models
