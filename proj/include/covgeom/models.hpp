#pragma once

#include <cstdint>
#include <vector>

#include "covgeom/body.hpp"
#include "covgeom/subspace.hpp"

namespace covgeom::models {

// ---- stock bodies ----------------------------------------------------------

Body cube(int n, double half_width = 1.0);           // halfspace form
Body cube_vertex_form(int n, double half_width = 1.0);
Body cross_polytope(int n, double radius = 1.0);
Body ball(int n, double radius = 1.0);
Body axis_ellipsoid(const Vector& semiaxes);

// ---- the regular simplex and its companions --------------------------------

/// Orthonormal basis of the hyperplane 1^perp in R^{n+1}, as (n+1) x n.
Matrix helmert_basis(int n);

/// S_n with barycentre 0 and edge sqrt(2): the hull of e_i - (1/(n+1)) 1,
/// expressed in a fixed orthonormal basis of 1^perp. Both the n-dimensional
/// body and the raw R^{n+1} data are returned.
struct EmbeddedSimplex {
  Body body;            // vertex form in R^n
  Matrix raw_vertices;  // (n+1) x (n+1), column i = e_i - (1/(n+1)) 1
  Matrix basis;         // the (n+1) x n basis with body vertices = basis^T raw
};
EmbeddedSimplex regular_simplex(int n);

/// |S_n| = sqrt(n+1)/n!.
double simplex_volume(int n);

/// The distinguished l-dimensional subspace spanned by l vertices of S_n
/// (its affine hull with the opposite-face centroid passes through 0).
sub::Subspace simplex_section_subspace(int n, int l);

/// |S_n cap F_l| = sqrt(n+1)/(l! sqrt(n+1-l)).
double simplex_section_volume(int n, int l);

/// B_infty^{n+1} cap 1^perp in the simplex coordinates (halfspace form).
Body cube_section_body(int n);

/// Proj_{1^perp}(B_1^{n+1}) in the simplex coordinates (vertex form).
Body b1_projection_body(int n);

/// Hausdorff residuals of the exact identities tying S_n to the l_1 ball:
///   (i)   conv(S_n, -S_n) = Proj(B_1^{n+1}),
///   (ii)  S_n cap -S_n = (1/(n+1)) (B_infty^{n+1} cap 1^perp),
///   (iii) Proj_{F_l}(conv(S_n, -S_n)) = conv(S_n cap F_l, -(S_n cap F_l)),
/// plus the polar cross-check (conv(S_n, -S_n))^o = (n+1)(S_n cap -S_n).
struct SimplexIdentityReport {
  double hull_vs_projection = 0.0;
  double intersection_vs_section = 0.0;
  double polar_vs_scaled_intersection = 0.0;
  std::vector<double> projected_hull_vs_sectioned_hull;  // l = 1 .. n-1
};
SimplexIdentityReport b1_projection_identities(int n);

// ---- reference values ------------------------------------------------------

/// Ball's bound ((n+1)/l)^{l/2} on l-dimensional central sections of the
/// unit-volume cube [-1/2, 1/2]^{n+1}.
double ball_cube_section_bound(int n, int l);

/// Three-regime profile of e_{k+1}(B_1^{n+1}, n^{-1/2} B_2^{n+1}) with the
/// absolute constant set to 1. The regime boundaries are log(n+1) and n+1;
/// the profile is accurate up to constants only, and the third regime
/// overshoots the second by a factor of roughly n/2 at its boundary.
double schutt_entropy_reference(int n, double k);

// ---- random test corpus ----------------------------------------------------

enum class PointMode { gaussian, sphere };

/// Hull of m i.i.d. points (optionally with their negatives, giving an
/// origin-symmetric body). Degenerate draws are resampled; deterministic
/// per seed.
Body random_polytope(int n, int m, PointMode mode, std::uint64_t seed,
                     bool symmetrize = false);

}  // namespace covgeom::models
