#include <array>
#include <cmath>
#include <sstream>

#include "covgeom/body.hpp"
#include "covgeom/covering.hpp"
#include "covgeom/models.hpp"
#include "covgeom/positions.hpp"
#include "covgeom/volume.hpp"
#include "doctest.h"

using namespace covgeom;

namespace {

Body corner_triangle() {
  Matrix V(2, 3);
  V << 0, 1, 0, 0, 0, 1;
  return Body::from_vertices(V);
}

Body quadrilateral() {
  Matrix V(2, 4);
  V << 2, 0, -1, 1.5, 0, 1, -1, -0.8;
  return Body::from_vertices(V);
}

Matrix rot2(double theta) {
  Matrix R(2, 2);
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

Body diag_ellipsoid(std::initializer_list<double> lam) {
  const int n = static_cast<int>(lam.size());
  Matrix S = Matrix::Zero(n, n);
  int i = 0;
  for (double v : lam) {
    S(i, i) = v;
    ++i;
  }
  return Body::make_ellipsoid(Vector::Zero(n), S);
}

double ball_isotropic_constant(int n) {
  return std::exp(-log_unit_ball_volume(n) / n) / std::sqrt(n + 2.0);
}

// Area of the polar of the corner triangle shifted by -z, written out from
// the three edge lines of the polar polygon. Shares nothing with the library
// code paths.
double polar_triangle_area(double zx, double zy) {
  const double vx[3] = {0 - zx, 1 - zx, 0 - zx};
  const double vy[3] = {0 - zy, 0 - zy, 1 - zy};
  double px[3], py[3];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const double det = vx[i] * vy[j] - vy[i] * vx[j];
    px[i] = (vy[j] - vy[i]) / det;
    py[i] = (vx[i] - vx[j]) / det;
  }
  double a = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    a += px[i] * py[j] - px[j] * py[i];
  }
  return std::abs(a) / 2.0;
}

}  // namespace

TEST_SUITE("positions") {

TEST_CASE("centre: fixed points, the corner-triangle shift, equivariance") {
  const auto [cc, crep] = pos::centre(models::cube(2));
  CHECK(crep.v.norm() <= 1e-12);
  CHECK((crep.A - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK(crep.barycentre_residual < 1e-9);

  const auto [tc, trep] = pos::centre(corner_triangle());
  Vector expect(2);
  expect << -1.0 / 3.0, -1.0 / 3.0;
  CHECK((trep.v - expect).norm() <= 1e-14);
  CHECK(trep.tag == "centred");
  CHECK(barycentre(tc).norm() < 1e-14);

  Vector a(2);
  a << 0.7, -2.25;
  const auto [tc2, trep2] = pos::centre(translate(corner_triangle(), a));
  CHECK((tc2.vertex_matrix() - tc.vertex_matrix()).norm() <= 1e-12);
}

TEST_CASE("santalo: symmetric bodies and centred ellipsoids stay put") {
  for (const Body& K :
       {models::cube(2), models::cross_polytope(3), models::regular_simplex(3).body}) {
    const auto [out, rep] = pos::santalo_position(K);
    CHECK(rep.v.norm() <= 1e-8);
    CHECK(rep.barycentre_residual < 1e-7);
    CHECK(rep.tag == "santalo");
  }

  Vector c(2);
  c << 0.3, 0.4;
  const auto [out, rep] = pos::santalo_position(translate(diag_ellipsoid({2, 1}), c));
  CHECK((rep.v + c).norm() <= 1e-12);
  CHECK(out.center().norm() <= 1e-12);
}

TEST_CASE("santalo: corner triangle matches the polar-area grid minimizer") {
  double best = std::numeric_limits<double>::infinity();
  double bx = 0.0, by = 0.0;
  for (int i = 1; i < 399; ++i) {
    for (int j = 1; j < 399; ++j) {
      const double x = i / 399.0, y = j / 399.0;
      if (x + y >= 1.0 - 1e-9) continue;
      const double a = polar_triangle_area(x, y);
      if (a < best) {
        best = a;
        bx = x;
        by = y;
      }
    }
  }
  const auto [out, rep] = pos::santalo_position(corner_triangle());
  const Vector s = -rep.v;
  CHECK(std::hypot(s[0] - bx, s[1] - by) <= 1e-3);
  CHECK(std::abs(s[0] - 1.0 / 3.0) <= 1e-9);
  CHECK(std::abs(s[1] - 1.0 / 3.0) <= 1e-9);
}

TEST_CASE("santalo: asymmetric quadrilateral hits the frozen oracle") {
  // Newton on the polar barycentre of the same quadrilateral, run offline at
  // 40-digit precision.
  const double sx = 0.419120593391212;
  const double sy = -0.152300112726155;

  const auto [out, rep] = pos::santalo_position(quadrilateral());
  const Vector s = -rep.v;
  CHECK(std::hypot(s[0] - sx, s[1] - sy) <= 1e-6);
  CHECK(rep.barycentre_residual < 1e-7);
  CHECK(vol::moments(polar(out)).barycentre.norm() < 1e-7);

  const auto [out2, rep2] = pos::santalo_position(out);
  CHECK(rep2.v.norm() <= 1e-7);

  Vector a(2);
  a << 0.25, -0.5;
  const auto [out3, rep3] = pos::santalo_position(translate(quadrilateral(), a));
  CHECK((-rep3.v - (s + a)).norm() <= 1e-8);
}

TEST_CASE("isotropic: cube and unit-volume ball normalizations") {
  const auto [qc, qrep] = pos::isotropic_position(models::cube(3));
  CHECK(qrep.L == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK((qrep.A - 0.5 * Matrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK(std::abs(vol::exact_volume(qc).value - 1.0) <= 1e-10);
  CHECK(qrep.anisotropy_residual < 1e-8);
  CHECK(qrep.barycentre_residual < 1e-10);
  CHECK(qrep.tag == "isotropic");

  const double r = std::exp(-log_unit_ball_volume(3) / 3.0);
  const auto [bc, brep] = pos::isotropic_position(models::ball(3, r));
  CHECK((brep.A - Matrix::Identity(3, 3)).norm() <= 1e-10);
  CHECK(brep.L == doctest::Approx(ball_isotropic_constant(3)).epsilon(1e-12));
}

TEST_CASE("isotropic: reported L never falls below the ball constant") {
  const Body bodies[] = {models::cube(2), models::cross_polytope(3),
                         models::regular_simplex(3).body, quadrilateral(),
                         models::random_polytope(3, 20, models::PointMode::gaussian,
                                                 20250819u)};
  for (const Body& K : bodies) {
    const auto [out, rep] = pos::isotropic_position(K);
    CHECK(rep.L >= ball_isotropic_constant(K.dim()) * (1.0 - 1e-12));
    CHECK(std::abs(vol::exact_volume(out).value - 1.0) <= 1e-10);
    CHECK(rep.anisotropy_residual < 1e-8);
  }
}

TEST_CASE("isotropic: affine images agree up to an orthogonal map") {
  const Body K = quadrilateral();
  Matrix M(2, 2);
  M << 2, 0.3, -0.4, 1.1;
  Vector m(2);
  m << 0.2, -0.5;
  const Body K2 = affine_image(K, M, m);

  const auto [out1, rep1] = pos::isotropic_position(K);
  const auto [out2, rep2] = pos::isotropic_position(K2);

  CHECK((vol::moments(out1).covariance - vol::moments(out2).covariance).norm() <
        1e-8);
  CHECK(std::abs(rep1.L - rep2.L) < 1e-10);

  const Matrix T = rep2.A * M * rep1.A.inverse();
  CHECK((T.transpose() * T - Matrix::Identity(2, 2)).norm() < 1e-8);
  CHECK((rep2.A * m + rep2.v - T * rep1.v).norm() < 1e-8);

  CHECK((out1.vertex_matrix() -
         affine_image(K, rep1.A, rep1.v).vertex_matrix())
            .norm() <= 1e-12);
}

TEST_CASE("balance: principal square roots of shape matrices") {
  const Body I2 = diag_ellipsoid({1, 1});
  CHECK((pos::balance_ellipsoid(I2).shape() - Matrix::Identity(2, 2)).norm() <=
        1e-14);

  Matrix D(2, 2);
  D << 2, 0, 0, 1;
  CHECK((pos::balance_ellipsoid(diag_ellipsoid({4, 1})).shape() - D).norm() <=
        1e-12);

  const Matrix R = rot2(0.7);
  Matrix lam = Matrix::Zero(2, 2), half = Matrix::Zero(2, 2);
  lam.diagonal() << 9, 4;
  half.diagonal() << 3, 2;
  const Body E = Body::make_ellipsoid(Vector::Zero(2), R * lam * R.transpose());
  const Body B = pos::balance_ellipsoid(E);
  CHECK((B.shape() - R * half * R.transpose()).norm() <= 1e-10);
  CHECK((B.shape() * B.shape() - E.shape()).norm() <= 1e-10);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(B.shape());
  CHECK(eig.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(eig.eigenvalues()[1] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(eig.eigenvectors().col(1).dot(R.col(0))) ==
        doctest::Approx(1.0).epsilon(1e-9));

  Vector off(2);
  off << 0.1, 0.0;
  CHECK_THROWS_AS(
      pos::balance_ellipsoid(Body::make_ellipsoid(off, Matrix::Identity(2, 2))),
      PreconditionError);
  CHECK_THROWS_AS(pos::balance_ellipsoid(models::cube(2)),
                  UnsupportedRepresentation);
}

TEST_CASE("chooser ellipsoids: nested covariance-shaped stand-ins") {
  const Body K = models::cube(2);
  const Body Ej = pos::john_like_ellipsoid(K);
  const Body El = pos::loewner_like_ellipsoid(K);
  const Body Ei = pos::isotropy_ellipsoid(K);

  CHECK(Ej.center().norm() <= 1e-12);
  CHECK((Ej.shape() - Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK((El.shape() - std::sqrt(2.0) * Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK((Ei.shape() - std::sqrt(4.0 / M_PI) * Matrix::Identity(2, 2)).norm() <=
        1e-10);

  const Body Q = pos::centre(quadrilateral()).first;
  const Body Qj = pos::john_like_ellipsoid(Q);
  const Body Ql = pos::loewner_like_ellipsoid(Q);
  const Body Qi = pos::isotropy_ellipsoid(Q);
  CHECK(cov::contained_in_dilate(Qj, Q, 1.0 + 1e-9));
  CHECK(cov::contained_in_dilate(Q, Ql, 1.0 + 1e-9));
  CHECK(std::abs(vol::exact_volume(Qi).value - vol::exact_volume(Q).value) <=
        1e-10);

  const Body E = diag_ellipsoid({3, 2});
  CHECK((pos::isotropy_ellipsoid(E).shape() - E.shape()).norm() == 0.0);
  CHECK((pos::john_like_ellipsoid(E).shape() - E.shape()).norm() == 0.0);
}

TEST_CASE("mposition profile: ball saturates, rows stay monotone") {
  const pos::RegularityProfile prof = pos::mposition_profile(models::ball(3));
  CHECK(prof.saturated);
  CHECK(prof.regular);
  for (const auto& row : prof.rows) CHECK(row.max_logN == 0.0);

  Matrix D(2, 2);
  D << 3, 0, 0, 0.5;
  const Body K = affine_image(models::cross_polytope(2), D, Vector::Zero(2));
  const pos::RegularityProfile p2 = pos::mposition_profile(K);
  CHECK(!p2.saturated);
  for (std::size_t i = 1; i < p2.rows.size(); ++i) {
    CHECK(p2.rows[i].max_logN <= p2.rows[i - 1].max_logN + 1e-12);
    for (int q = 0; q < 4; ++q)
      CHECK(p2.rows[i].logN[q] <= p2.rows[i - 1].logN[q] + 1e-12);
  }
  for (const auto& row : p2.rows)
    for (double v : row.logN) CHECK(v >= 0.0);
}

TEST_CASE("regularize: symmetric bodies reduce to the toward-ball map") {
  Matrix D(2, 2);
  D << 3, 0, 0, 0.5;
  const Body K = affine_image(models::cross_polytope(2), D, Vector::Zero(2));

  const std::pair<pos::MEllipsoidChooser, const char*> choosers[] = {
      {pos::MEllipsoidChooser::isotropy, "isotropy"},
      {pos::MEllipsoidChooser::john, "john"},
      {pos::MEllipsoidChooser::loewner, "loewner"}};
  for (const auto& [chooser, name] : choosers) {
    CAPTURE(name);
    Body E1 = diag_ellipsoid({1, 1});
    switch (chooser) {
      case pos::MEllipsoidChooser::john:
        E1 = pos::john_like_ellipsoid(K);
        break;
      case pos::MEllipsoidChooser::loewner:
        E1 = pos::loewner_like_ellipsoid(K);
        break;
      default:
        E1 = pos::isotropy_ellipsoid(K);
    }
    const Body direct =
        affine_image(K, E1.shape().inverse(), Vector::Zero(2));
    const pos::RegularityProfile want = pos::mposition_profile(direct);

    const auto [out, prof] = pos::regularize(K, chooser);
    REQUIRE(prof.rows.size() == want.rows.size());
    for (std::size_t i = 0; i < prof.rows.size(); ++i)
      for (int q = 0; q < 4; ++q)
        CHECK(prof.rows[i].logN[q] ==
              doctest::Approx(want.rows[i].logN[q]).epsilon(1e-8));
    CHECK(prof.saturated == want.saturated);
    CHECK(prof.regular == want.regular);
    if (!prof.saturated)
      CHECK(prof.beta == doctest::Approx(want.beta).epsilon(1e-7));
  }
}

TEST_CASE("regularize: regular simplexes collapse inside a beta=1 envelope") {
  for (int n = 2; n <= 6; ++n) {
    CAPTURE(n);
    const auto [out, prof] = pos::regularize(models::regular_simplex(n).body);
    CHECK(prof.regular);
    CHECK(prof.rows.back().max_logN <= 1e-12);
    for (const auto& row : prof.rows)
      CHECK(row.max_logN <= 3.0 * n / row.t);
    for (std::size_t i = 1; i < prof.rows.size(); ++i)
      CHECK(prof.rows[i].max_logN <= prof.rows[i - 1].max_logN + 1e-12);
    std::ostringstream line;
    line << "simplex n=" << n << ": saturated=" << prof.saturated << " rows=";
    for (const auto& row : prof.rows) line << row.max_logN << " ";
    MESSAGE(line.str());
  }
}

TEST_CASE("regularize: balls map to the unit ball and saturate") {
  const double r = std::exp(-log_unit_ball_volume(3) / 3.0);
  const auto [out, prof] = pos::regularize(models::ball(3, r));
  REQUIRE(out.kind() == Body::Kind::ellipsoid);
  CHECK((out.shape() - Matrix::Identity(3, 3)).norm() <= 1e-9);
  CHECK(out.center().norm() <= 1e-12);
  CHECK(prof.saturated);
  CHECK(prof.regular);
  for (const auto& row : prof.rows) CHECK(row.max_logN == 0.0);

  const auto [out4, prof4] = pos::regularize(models::ball(4));
  CHECK(prof4.saturated);
}

}  // TEST_SUITE
