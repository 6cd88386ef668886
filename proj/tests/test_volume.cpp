#include <cmath>

#include "covgeom/body.hpp"
#include "covgeom/rng.hpp"
#include "covgeom/volume.hpp"
#include "doctest.h"

using namespace covgeom;

namespace {

Matrix cube_vertices(int n, double half_width) {
  Matrix V(n, 1 << n);
  for (int m = 0; m < (1 << n); ++m) {
    for (int i = 0; i < n; ++i) V(i, m) = (m >> i & 1) ? half_width : -half_width;
  }
  return V;
}

Body cross_body(int n) {
  Matrix V = Matrix::Zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    V(i, 2 * i) = 1.0;
    V(i, 2 * i + 1) = -1.0;
  }
  return Body::from_vertices(V, false);
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST_SUITE("volume") {

TEST_CASE("exact volume of cube, cross-polytope and corner simplex") {
  for (int n = 2; n <= 5; ++n) {
    Body cube = Body::from_vertices(cube_vertices(n, 1.0), false);
    CHECK(vol::exact_volume(cube).value ==
          doctest::Approx(std::pow(2.0, n)).epsilon(1e-12));
    CHECK(vol::exact_volume(cross_body(n)).value ==
          doctest::Approx(std::pow(2.0, n) / factorial(n)).epsilon(1e-12));

    Matrix S = Matrix::Zero(n, n + 1);
    S.rightCols(n) = Matrix::Identity(n, n);
    Body simplex = Body::from_vertices(S, false);
    CHECK(vol::exact_volume(simplex).value ==
          doctest::Approx(1.0 / factorial(n)).epsilon(1e-12));
  }
}

TEST_CASE("exact volume agrees across representations") {
  Matrix A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Vector b(4);
  b << 2, 1, 3, 0.5;
  Body H = Body::from_halfspaces(A, b);
  CHECK(vol::exact_volume(H).value == doctest::Approx(3.0 * 3.5).epsilon(1e-12));
  Body V = convert(H, Body::Kind::vertices);
  CHECK(vol::exact_volume(V).value == doctest::Approx(3.0 * 3.5).epsilon(1e-12));
}

TEST_CASE("ellipsoid volume is det(shape) times the ball volume") {
  Vector c = Vector::Zero(3);
  Matrix S = Vector::Ones(3).asDiagonal();
  S(0, 0) = 1.0;
  S(1, 1) = 2.0;
  S(2, 2) = 3.0;
  Body E = Body::make_ellipsoid(c, S);
  CHECK(vol::exact_volume(E).value ==
        doctest::Approx(6.0 * unit_ball_volume(3)).epsilon(1e-12));
  CHECK(vol::exact_volume(E).method == "ellipsoid");
}

TEST_CASE("volume is invariant under translation and scales by |det A|") {
  Rng rng(411);
  for (int n = 2; n <= 4; ++n) {
    Matrix P = rng.gaussian_matrix(n, 2 * n + 3);
    Body K = Body::from_vertices(P);
    const double v0 = vol::exact_volume(K).value;

    CHECK(vol::exact_volume(translate(K, rng.gaussian_vector(n))).value ==
          doctest::Approx(v0).epsilon(1e-9));

    Matrix A = Matrix::Identity(n, n) + 0.3 * rng.gaussian_matrix(n, n);
    Body AK = affine_image(K, A, Vector::Zero(n));
    CHECK(vol::exact_volume(AK).value ==
          doctest::Approx(std::abs(A.determinant()) * v0).epsilon(1e-9));
  }
  Body X6 = cross_body(6);
  Matrix A = Matrix::Identity(6, 6);
  A(0, 1) = 0.7;
  A(3, 5) = -0.4;
  A(4, 4) = 2.0;
  CHECK(vol::exact_volume(affine_image(X6, A, Vector::Zero(6))).value ==
        doctest::Approx(2.0 * std::pow(2.0, 6) / factorial(6)).epsilon(1e-9));
}

TEST_CASE("monte carlo estimate of the disk area") {
  Body disk = Body::make_ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2));
  vol::VolumeEstimate est = vol::mc_volume(disk, 1000000, 2024);
  CHECK(est.samples == 1000000);
  CHECK(std::abs(est.value - M_PI) < 3.0 * est.stderr_value);
  CHECK(est.stderr_value < 2e-3);
}

TEST_CASE("monte carlo matches the exact cube volume at n = 8") {
  const int n = 8;
  Vector lo = Vector::Constant(n, -1.25), hi = Vector::Constant(n, 1.25);
  auto member = [](const Vector& x) { return x.cwiseAbs().maxCoeff() <= 1.0; };
  vol::VolumeEstimate est = vol::mc_volume(member, lo, hi, 200000, 7);
  CHECK(std::abs(est.value - 256.0) < 3.0 * est.stderr_value);
}

TEST_CASE("monte carlo is deterministic per seed and seed-sensitive") {
  Body disk = Body::make_ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2));
  vol::VolumeEstimate a = vol::mc_volume(disk, 40000, 5);
  vol::VolumeEstimate b = vol::mc_volume(disk, 40000, 5);
  vol::VolumeEstimate c = vol::mc_volume(disk, 40000, 6);
  CHECK(a.value == b.value);
  CHECK(a.value != c.value);
}

TEST_CASE("zero hits raise an inconclusive estimate with a rule-of-three bound") {
  Vector lo = Vector::Constant(3, 0.0), hi = Vector::Constant(3, 1.0);
  auto member = [](const Vector& x) { return std::abs(x[2] - 0.5) < 1e-13; };
  try {
    vol::mc_volume(member, lo, hi, 3000, 11);
    FAIL("expected InconclusiveEstimate");
  } catch (const InconclusiveEstimate& e) {
    CHECK(e.upper_confidence_bound == doctest::Approx(3.0 / 3000.0));
  }
}

TEST_CASE("moments of the unit-volume cube") {
  for (int n = 2; n <= 5; ++n) {
    Body cube = Body::from_vertices(cube_vertices(n, 0.5), false);
    vol::MomentReport r = vol::moments(cube);
    CHECK(r.volume == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.barycentre.norm() < 1e-12);
    CHECK((r.covariance - Matrix::Identity(n, n) / 12.0).norm() < 1e-12);
    CHECK(r.isotropic_constant ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
    CHECK(r.anisotropy == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("moments of the corner triangle") {
  Matrix V(2, 3);
  V << 0, 1, 0, 0, 0, 1;
  vol::MomentReport r = vol::moments(Body::from_vertices(V, false));
  CHECK(r.volume == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.barycentre[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(r.barycentre[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  Matrix C(2, 2);
  C << 1.0 / 18.0, -1.0 / 36.0, -1.0 / 36.0, 1.0 / 18.0;
  CHECK((r.covariance - C).norm() < 1e-13);
}

TEST_CASE("symmetric bodies have barycentre zero") {
  vol::MomentReport r = vol::moments(cross_body(4));
  CHECK(r.barycentre.norm() < 1e-10);
}

TEST_CASE("ellipsoid moments use the closed form") {
  Vector c(3);
  c << 1, -2, 0.5;
  Matrix S = Vector::Ones(3).asDiagonal();
  S(0, 0) = 2.0;
  Body E = Body::make_ellipsoid(c, S);
  vol::MomentReport r = vol::moments(E);
  CHECK((r.barycentre - c).norm() < 1e-14);
  Matrix C = Matrix::Identity(3, 3) / 5.0;
  C(0, 0) = 4.0 / 5.0;
  CHECK((r.covariance - C).norm() < 1e-13);
  CHECK(r.anisotropy == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("moments barycentre agrees with a monte carlo mean") {
  Matrix V(2, 3);
  V << 0, 2, 0, 0, 0, 1;
  Body T = Body::from_vertices(V, false);
  vol::MomentReport r = vol::moments(T);

  Rng rng(99);
  Vector lo(2), hi(2);
  lo << 0, 0;
  hi << 2, 1;
  Vector sum = Vector::Zero(2);
  long hits = 0;
  const long N = 200000;
  for (long s = 0; s < N; ++s) {
    Vector x(2);
    x << rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]);
    if (contains(T, x)) {
      sum += x;
      ++hits;
    }
  }
  Vector mean = sum / static_cast<double>(hits);
  for (int i = 0; i < 2; ++i) {
    const double se = 0.5 / std::sqrt(static_cast<double>(hits));
    CHECK(std::abs(mean[i] - r.barycentre[i]) < 3.0 * se);
  }
}

TEST_CASE("volume radius of balls, ellipsoids and the square") {
  Body ball = Body::make_ellipsoid(Vector::Zero(3), 2.0 * Matrix::Identity(3, 3));
  CHECK(vol::volume_radius(ball) == doctest::Approx(2.0).epsilon(1e-12));
  Body square = Body::from_vertices(cube_vertices(2, 1.0), false);
  CHECK(vol::volume_radius(square) ==
        doctest::Approx(std::sqrt(4.0 / M_PI)).epsilon(1e-12));
}

TEST_CASE("volume product is exactly 1 on centred ellipsoids") {
  Rng rng(17);
  for (int n = 2; n <= 6; ++n) {
    Matrix G = rng.gaussian_matrix(n, n);
    Matrix S = G * G.transpose() / n + 0.5 * Matrix::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
    Body E = Body::make_ellipsoid(Vector::Zero(n), eig.operatorSqrt() * eig.operatorSqrt());
    CHECK(vol::volume_product(E) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("volume product of the cube matches the closed form and is below 1") {
  for (int n = 2; n <= 5; ++n) {
    Body cube = Body::from_vertices(cube_vertices(n, 1.0), false);
    const double expect =
        std::exp((std::log(std::pow(4.0, n) / factorial(n)) -
                  2.0 * log_unit_ball_volume(n)) / n);
    const double got = vol::volume_product(cube);
    CHECK(got == doctest::Approx(expect).epsilon(1e-10));
    CHECK(got < 1.0);
  }
}

TEST_CASE("volume product of a centred triangle") {
  Matrix V(2, 3);
  V << 1, 0, -1, 0, 1, -1;
  Body T = Body::from_vertices(V, false);
  CHECK(vol::volume_product(T) == doctest::Approx(0.8269933431).epsilon(1e-8));
}

TEST_CASE("volume product requires an interior origin") {
  Matrix V(2, 3);
  V << 0, 1, 0, 0, 0, 1;
  CHECK_THROWS_AS(vol::volume_product(Body::from_vertices(V, false)),
                  PreconditionError);
}

TEST_CASE("dimension cap guards the exact path") {
  Tolerances tol;
  tol.exact_dim_cap = 3;
  Body cube = Body::from_vertices(cube_vertices(4, 1.0), false, tol);
  CHECK_THROWS_AS(vol::exact_volume(cube), DimensionCapExceeded);
}

}  // TEST_SUITE
