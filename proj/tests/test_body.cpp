#include "doctest.h"

#include <cmath>

#include "covgeom/body.hpp"
#include "covgeom/rng.hpp"

using namespace covgeom;

namespace {

Body cube_body_v(int n) {
  const int m = 1 << n;
  Matrix V(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      V(i, j) = (j >> i) & 1 ? 1.0 : -1.0;
    }
  }
  return Body::from_vertices(V, false);
}

Body cube_body_h(int n) {
  Matrix A(2 * n, n);
  A.topRows(n) = Matrix::Identity(n, n);
  A.bottomRows(n) = -Matrix::Identity(n, n);
  return Body::from_halfspaces(A, Vector::Ones(2 * n));
}

Body cross_body(int n) {
  Matrix V(n, 2 * n);
  V.leftCols(n) = Matrix::Identity(n, n);
  V.rightCols(n) = -Matrix::Identity(n, n);
  return Body::from_vertices(V, false);
}

Body triangle_body() {
  // Vertices (1,0), (0,1), (-1,-1); barycentre at the origin, area 3/2.
  Matrix V(2, 3);
  V << 1, 0, -1,
       0, 1, -1;
  return Body::from_vertices(V, false);
}

double body_volume(const Body& K) {
  const Body KV = convert(K, Body::Kind::vertices);
  return hull::moments(KV.vertex_matrix(), *KV.hull()).volume;
}

}  // namespace

TEST_SUITE_BEGIN("body");

TEST_CASE("support and gauge of the cube match closed forms") {
  Rng rng(31);
  for (int n : {2, 3, 4}) {
    const Body KV = cube_body_v(n);
    const Body KH = cube_body_h(n);
    for (int t = 0; t < 25; ++t) {
      const Vector x = rng.gaussian_vector(n);
      CHECK(support_value(KV, x) == doctest::Approx(x.cwiseAbs().sum()).epsilon(1e-9));
      CHECK(support_value(KH, x) == doctest::Approx(x.cwiseAbs().sum()).epsilon(1e-9));
      const double g = x.cwiseAbs().maxCoeff();
      CHECK(gauge_value(KV, x) == doctest::Approx(g).epsilon(1e-9));
      CHECK(gauge_value(KH, x) == doctest::Approx(g).epsilon(1e-9));
    }
  }
}

TEST_CASE("ellipsoid support and gauge") {
  Vector c(2);
  c << 0.5, -0.25;
  Matrix S(2, 2);
  S << 2.0, 0.0,
       0.0, 0.5;
  const Body E = Body::make_ellipsoid(c, S);
  Vector d(2);
  d << 1.0, 0.0;
  CHECK(support_value(E, d) == doctest::Approx(2.5).epsilon(1e-12));
  d << 0.0, 1.0;
  CHECK(support_value(E, d) == doctest::Approx(0.25).epsilon(1e-12));

  // Centred ellipsoid gauge: ||x||_E = |S^{-1} x|.
  const Body E0 = Body::make_ellipsoid(Vector::Zero(2), S);
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Vector x = rng.gaussian_vector(2);
    const Vector y = S.inverse() * x;
    CHECK(gauge_value(E0, x) == doctest::Approx(y.norm()).epsilon(1e-10));
  }
}

TEST_CASE("gauge on the boundary equals one") {
  Rng rng(13);
  const Body K = cube_body_h(3);
  for (int t = 0; t < 25; ++t) {
    Vector x = rng.sphere_vector(3);
    x /= gauge_value(K, x);
    CHECK(gauge_value(K, x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(contains(K, x, 1e-9));
  }
}

TEST_CASE("polar of the cube is the cross polytope") {
  for (int n : {2, 3, 4}) {
    const Body P = polar(cube_body_v(n));
    CHECK(hausdorff_distance(P, cross_body(n)) <= 1e-9);
  }
}

TEST_CASE("bipolar recovers the body") {
  Rng rng(41);
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      Matrix V(n, 20);
      for (int j = 0; j < 20; ++j) V.col(j) = rng.sphere_vector(n) * (0.5 + rng.uniform());
      Body K = Body::from_vertices(V);
      K = translate(K, -barycentre(K));
      const Body KK = polar(polar(K));
      CHECK(hausdorff_distance(K, KK) <= 1e-9);
    }
  }
}

TEST_CASE("polar of a centred ellipsoid inverts the shape") {
  Matrix S(3, 3);
  S.setZero();
  S.diagonal() << 1.0, 2.0, 4.0;
  const Body P = polar(Body::make_ellipsoid(Vector::Zero(3), S));
  REQUIRE(P.kind() == Body::Kind::ellipsoid);
  CHECK((P.shape() - S.inverse()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("radii of standard bodies") {
  for (int n : {2, 3, 4}) {
    const auto rc = radii(cube_body_v(n));
    CHECK(rc.inradius == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rc.circumradius == doctest::Approx(std::sqrt(double(n))).epsilon(1e-9));
    const auto rx = radii(cross_body(n));
    CHECK(rx.inradius == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-9));
    CHECK(rx.circumradius == doctest::Approx(1.0).epsilon(1e-9));
  }
  Matrix S(2, 2);
  S << 3.0, 0.0,
       0.0, 0.5;
  const auto re = radii(Body::make_ellipsoid(Vector::Zero(2), S));
  CHECK(re.inradius == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(re.circumradius == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("radii duality r(K) = 1 / R(polar K)") {
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix V(3, 15);
    for (int j = 0; j < 15; ++j) V.col(j) = rng.sphere_vector(3) * (0.5 + rng.uniform());
    Body K = Body::from_vertices(V);
    K = translate(K, -barycentre(K));
    const auto rk = radii(K);
    const auto rp = radii(polar(K));
    CHECK(rk.inradius == doctest::Approx(1.0 / rp.circumradius).epsilon(1e-8));
    CHECK(rk.circumradius == doctest::Approx(1.0 / rp.inradius).epsilon(1e-8));
  }
}

TEST_CASE("hausdorff distance oracles") {
  const Body K = cube_body_v(2);
  Vector v(2);
  v << 0.25, -0.5;
  CHECK(hausdorff_distance(K, translate(K, v)) == doctest::Approx(v.norm()).epsilon(1e-9));
  CHECK(hausdorff_distance(K, dilate(K, 1.1)) == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(hausdorff_distance(K, K) <= 1e-12);
}

TEST_CASE("translations and dilations act on support values") {
  Rng rng(53);
  const Body K = triangle_body();
  Vector v(2);
  v << 0.4, -0.7;
  const Body Kt = translate(K, v);
  const Body Kd = dilate(K, 2.5);
  for (int t = 0; t < 20; ++t) {
    const Vector u = rng.sphere_vector(2);
    CHECK(support_value(Kt, u) == doctest::Approx(support_value(K, u) + v.dot(u)).epsilon(1e-10));
    CHECK(support_value(Kd, u) == doctest::Approx(2.5 * support_value(K, u)).epsilon(1e-10));
  }
}

TEST_CASE("affine images transform support values contravariantly") {
  // h_{TK}(u) = h_K(T^t u).
  Rng rng(59);
  for (auto kind : {0, 1, 2}) {
    Body K = kind == 0   ? cube_body_v(3)
             : kind == 1 ? cube_body_h(3)
                         : Body::make_ellipsoid(Vector::Ones(3) * 0.1, Matrix::Identity(3, 3));
    Matrix T = rng.gaussian_matrix(3, 3);
    T += 4.0 * Matrix::Identity(3, 3);
    Vector shift = rng.gaussian_vector(3);
    const Body KT = affine_image(K, T, shift);
    for (int t = 0; t < 10; ++t) {
      const Vector u = rng.sphere_vector(3);
      const double expected = support_value(K, T.transpose() * u) + shift.dot(u);
      CHECK(support_value(KT, u) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("minkowski sum of square and diamond") {
  // [-1,1]^2 + B_1^2 is an octagon of area 14 (shoelace on the eight
  // vertices (2,1), (1,2), ..., (2,-1)).
  const Body S = minkowski_sum(cube_body_v(2), cross_body(2));
  CHECK(body_volume(S) == doctest::Approx(14.0).epsilon(1e-9));
}

TEST_CASE("intersection of a square with its 45 degree rotation") {
  // Regular octagon of area 8(sqrt(2) - 1).
  Matrix R(2, 2);
  const double c = std::cos(M_PI / 4.0), s = std::sin(M_PI / 4.0);
  R << c, -s,
       s, c;
  const Body A = cube_body_h(2);
  const Body B = affine_image(A, R, Vector::Zero(2));
  const Body I = intersect(A, B);
  CHECK(body_volume(I) == doctest::Approx(8.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-9));
}

TEST_CASE("difference body of a triangle attains the simplex ratio") {
  // |K - K| = binom(2n, n) |K| with equality exactly for simplices; in the
  // plane the ratio is 6.
  const Body T = triangle_body();
  const Body D = difference_body(T);
  CHECK(body_volume(D) == doctest::Approx(6.0 * body_volume(T)).epsilon(1e-9));
  CHECK(hausdorff_distance(D, negate(D)) <= 1e-9);

  // Corner triangle conv{(0,0), (1,0), (0,1)}: area 1/2, so |K - K| = 3.
  Matrix V(2, 3);
  V << 0, 1, 0,
       0, 0, 1;
  const Body C = Body::from_vertices(V, false);
  CHECK(body_volume(difference_body(C)) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("difference body of an ellipsoid doubles the shape") {
  Vector c(2);
  c << 0.3, -0.1;
  Matrix S(2, 2);
  S << 1.5, 0.0,
       0.0, 0.75;
  const Body D = difference_body(Body::make_ellipsoid(c, S));
  REQUIRE(D.kind() == Body::Kind::ellipsoid);
  CHECK(D.center().norm() <= 1e-12);
  CHECK((D.shape() - 2.0 * S).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("symmetric hull of the triangle is a hexagon of area 3") {
  // conv(T, -T) for the barycentre-centred triangle of area 3/2 doubles
  // the volume: the hexagon has area 3 (shoelace on the six vertices).
  const Body T = triangle_body();
  const Body H = symmetric_hull(T);
  CHECK(body_volume(H) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(hausdorff_distance(H, negate(H)) <= 1e-9);
}

TEST_CASE("symmetric intersection of the triangle is a hexagon of area 1") {
  // T cap -T for a barycentre-centred triangle has 2/3 of its area.
  const Body T = triangle_body();
  const Body U = symmetric_intersection(T);
  CHECK(body_volume(U) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hausdorff_distance(U, negate(U)) <= 1e-9);
}

TEST_CASE("symmetric intersection defaults to the barycentre") {
  // Shifted triangle: the intersection must be taken about the barycentre,
  // giving the same volume as the centred one.
  const Body T = triangle_body();
  Vector v(2);
  v << 5.0, 7.0;
  const Body U = symmetric_intersection(translate(T, v));
  CHECK(body_volume(U) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("conversions agree in both directions") {
  for (int n : {2, 3}) {
    const Body KV = cube_body_v(n);
    const Body KH = cube_body_h(n);
    CHECK(hausdorff_distance(convert(KV, Body::Kind::halfspaces), KH) <= 1e-9);
    CHECK(hausdorff_distance(convert(KH, Body::Kind::vertices), KV) <= 1e-9);
  }
}

TEST_CASE("containment queries") {
  const Body K = cube_body_h(3);
  CHECK(contains(K, Vector::Zero(3)));
  CHECK(contains(K, Vector::Ones(3)));
  Vector x(3);
  x << 1.0 + 1e-6, 0.0, 0.0;
  CHECK(!contains(K, x));
  CHECK(contains(K, x, 1e-3));
}

TEST_CASE("degenerate vertex input is rejected for full-dimensional queries") {
  Matrix V(2, 2);
  V << 0, 1,
       0, 1;
  const Body K = Body::from_vertices(V);
  CHECK_THROWS_AS(barycentre(K), Error);
}

TEST_SUITE_END();
