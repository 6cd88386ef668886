#include <cmath>
#include <sstream>
#include <vector>

#include "covgeom/body.hpp"
#include "covgeom/covering.hpp"
#include "covgeom/models.hpp"
#include "covgeom/rng.hpp"
#include "covgeom/subspace.hpp"
#include "covgeom/volume.hpp"
#include "doctest.h"

using namespace covgeom;

namespace {

cov::EllipsoidSpectrum make_spectrum(std::initializer_list<double> lam) {
  cov::EllipsoidSpectrum s;
  s.n = static_cast<int>(lam.size());
  s.lambda.resize(s.n);
  int i = 0;
  for (double v : lam) s.lambda[i++] = v;
  return s;
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

// Mean of |theta_1| over the unit sphere in R^n.
double abs_coordinate_mean(int n) {
  return 2.0 * std::exp(std::lgamma(n / 2.0) - std::lgamma((n - 1) / 2.0)) /
         ((n - 1) * std::sqrt(M_PI));
}

}  // namespace

TEST_SUITE("covering") {

TEST_CASE("phi_k on the identity spectrum is 2^{-k/n}") {
  for (int n : {2, 5, 9}) {
    cov::EllipsoidSpectrum spec;
    spec.n = n;
    spec.lambda = Vector::Ones(n);
    for (int k = 1; k <= 12; ++k) {
      const cov::PhiValue phi = cov::phi_k(spec, k);
      CHECK(phi.value == doctest::Approx(std::exp2(-double(k) / n)).epsilon(1e-12));
      CHECK(phi.window.lower == doctest::Approx(phi.value));
      CHECK(phi.window.upper == doctest::Approx(6.0 * phi.value));
    }
  }
}

TEST_CASE("phi_2 of the spectrum (4,1) is 1 through both competitors") {
  const cov::PhiValue phi = cov::phi_k(make_spectrum({4.0, 1.0}), 2);
  CHECK(phi.value == doctest::Approx(1.0).epsilon(1e-12));
  const double l1 = std::exp2(-2.0) * 4.0;
  const double l2 = std::exp2(-1.0) * std::sqrt(4.0);
  CHECK(l1 == doctest::Approx(1.0));
  CHECK(l2 == doctest::Approx(1.0));
}

TEST_CASE("restricting the sup to l <= k loses at most a factor 2") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(rng.uniform() * 9.0);
    std::vector<double> lam(n);
    for (double& v : lam) v = std::exp(rng.gaussian());
    std::sort(lam.begin(), lam.end(), std::greater<>());
    cov::EllipsoidSpectrum spec;
    spec.n = n;
    spec.lambda.resize(n);
    for (int j = 0; j < n; ++j) spec.lambda[j] = lam[j];
    for (int k : {1, 2, 3, 5, 8, 13}) {
      const double full = cov::phi_k(spec, k).value;
      double restricted = 0.0;
      double prefix = 0.0;
      for (int l = 1; l <= std::min(k, n); ++l) {
        prefix += std::log(lam[l - 1]);
        restricted = std::max(restricted, std::exp(-k * std::log(2.0) / l + prefix / l));
      }
      CHECK(restricted <= full * (1.0 + 1e-12));
      CHECK(full <= 2.0 * restricted);
      if (k >= n) CHECK(restricted == doctest::Approx(full));
    }
  }
}

TEST_CASE("extreme shadow and slice volumes of a diagonal spectrum") {
  const auto pv = cov::max_projection_volume(make_spectrum({3.0, 2.0, 1.0}), 2);
  CHECK(pv.max_projection == doctest::Approx(6.0 * M_PI).epsilon(1e-12));
  CHECK(pv.min_section == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  cov::EllipsoidSpectrum ball;
  ball.n = 5;
  ball.lambda = Vector::Ones(5);
  for (int l = 1; l <= 5; ++l) {
    const auto b = cov::max_projection_volume(ball, l);
    CHECK(b.max_projection == doctest::Approx(unit_ball_volume(l)));
    CHECK(b.min_section == doctest::Approx(unit_ball_volume(l)));
  }
}

TEST_CASE("sampled projection scan approaches the exact maximal shadow") {
  const Body E = diag_ellipsoid({3.0, 2.0, 1.0, 1.0});
  const auto pv = cov::max_projection_volume(cov::spectrum_of(E), 2);
  const double exact_vrad = std::sqrt(pv.max_projection / unit_ball_volume(2));
  const sub::ScanReport scan = sub::vrad_scan(E, 2, 500, 20250819);
  CHECK(scan.v_sup <= exact_vrad * (1.0 + 1e-9));
  CHECK(scan.v_sup >= exact_vrad * 0.95);
}

TEST_CASE("regularity constant on reference spectra") {
  cov::EllipsoidSpectrum id;
  id.n = 6;
  id.lambda = Vector::Ones(6);
  const auto r = cov::ellipsoid_regularity(id, 1.0);
  CHECK(r.C == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.t_min == doctest::Approx(6.0 / std::exp(1.0)).epsilon(1e-12));
  CHECK(r.log_bound(r.t_min) == doctest::Approx(std::exp(1.0) * 6.0).epsilon(1e-9));
  CHECK(r.log_bound(6.0) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(r.log_bound(r.t_min * 0.9), PreconditionError);

  const int n = 9;
  cov::EllipsoidSpectrum harm;
  harm.n = n;
  harm.lambda.resize(n);
  for (int j = 1; j <= n; ++j) harm.lambda[j - 1] = double(n) / j;
  double expected = 0.0;
  for (int l = 1; l <= n; ++l) {
    double prod = 1.0;
    for (int j = 1; j <= l; ++j) prod *= double(n) / j;
    expected = std::max(expected, std::pow(prod, 1.0 / l) * l / n);
  }
  CHECK(cov::ellipsoid_regularity(harm, 1.0).C ==
        doctest::Approx(expected).epsilon(1e-10));

  for (double top : {1e6, 2e6}) {
    cov::EllipsoidSpectrum spike;
    spike.n = 4;
    spike.lambda.resize(4);
    spike.lambda << top, 1.0, 1.0, 1.0;
    CHECK(cov::ellipsoid_regularity(spike, 1.0).C ==
          doctest::Approx(top / 4.0).epsilon(1e-9));
  }
}

TEST_CASE("volumetric bracket for a ball covered by a smaller ball") {
  for (int n : {2, 3, 4}) {
    const auto cb =
        cov::volumetric_covering_bounds(models::ball(n, 2.0), models::ball(n), 1.0);
    CHECK(cb.lower == doctest::Approx(std::exp2(double(n))).epsilon(1e-10));
    CHECK(cb.upper == doctest::Approx(std::pow(5.0, n)).epsilon(1e-10));
    CHECK(cb.method == "dilate-algebra");
  }
}

TEST_CASE("volumetric bracket of a symmetric polytope against itself") {
  for (const Body& K : {models::cube(3), models::cross_polytope(3)}) {
    for (double t : {0.5, 1.0, 2.0}) {
      const auto cb = cov::volumetric_covering_bounds(K, K, t);
      CHECK(cb.lower == doctest::Approx(std::pow(t, -3)).epsilon(1e-9));
      CHECK(cb.upper ==
            doctest::Approx(std::pow((2.0 + t) / t, 3)).epsilon(1e-9));
      CHECK(cb.method == "minkowski");
    }
  }
}

TEST_CASE("halfspace-offset upper bound dominates the exact Steiner area") {
  const Body K = models::cube(2);
  const Body L = models::ball(2);
  for (double t : {0.5, 1.0, 2.0}) {
    const auto cb = cov::volumetric_covering_bounds(K, L, t);
    CHECK(cb.method == "halfspace-offset");
    const double steiner = 16.0 + 16.0 * t + M_PI * t * t;
    CHECK(cb.upper * M_PI * t * t >= steiner * (1.0 - 1e-12));
    CHECK(cb.upper ==
          doctest::Approx((4.0 + 2.0 * t) * (4.0 + 2.0 * t) / (M_PI * t * t))
              .epsilon(1e-9));
    CHECK(cb.lower <= cb.upper);
  }
}

TEST_CASE("ellipsoid envelope stays above the proportional-shape answer") {
  const Body K = diag_ellipsoid({2.0, 1.0, 1.0});
  const Body L = models::ball(3);
  const auto cb = cov::volumetric_covering_bounds(K, L, 1.0);
  CHECK(cb.method == "ellipsoid-envelope");
  CHECK(cb.lower == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(cb.upper >= cb.lower);
  const auto exact =
      cov::volumetric_covering_bounds(models::ball(3, 2.0), L, 1.0);
  CHECK(cb.upper >= exact.lower);
}

TEST_CASE("covering profile rows are bracketed, monotone, and fitted") {
  const Body K = models::ball(4, 1.0);
  const auto p = cov::covering_profile(K, K, {2.0, 4.0, 8.0, 16.0, 32.0});
  REQUIRE(p.rows.size() == 5);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    CHECK(p.rows[i].lower <= p.rows[i].upper);
    if (i > 0) {
      CHECK(p.rows[i].lower <= p.rows[i - 1].lower);
      CHECK(p.rows[i].upper <= p.rows[i - 1].upper * (1.0 + 1e-12));
    }
  }
  REQUIRE(p.beta.has_value());
  CHECK(*p.beta > 0.8);
  CHECK(*p.beta < 1.0);
  CHECK(*p.D > 0.0);
}

TEST_CASE("greedy net covers the 4x4 square with few unit squares") {
  const Body K = translate(models::cube(2, 2.0), Vector::Constant(2, 2.0));
  const Body L = models::cube(2, 0.5);
  const auto net = cov::greedy_net(K, L, 1.0, 99, 10000);
  CHECK(net.coverage == doctest::Approx(1.0));
  CHECK(net.count >= 4);
  CHECK(net.count <= 25);
  for (long j = 0; j < net.count; ++j)
    for (long i = 0; i < j; ++i)
      CHECK((net.centers.col(j) - net.centers.col(i)).lpNorm<Eigen::Infinity>() >
            1.0);
}

TEST_CASE("greedy net degenerates to a single center when t dominates") {
  const auto one = cov::greedy_net(models::ball(3), models::ball(3), 1.0, 5);
  CHECK(one.count == 1);
  const auto wide = cov::greedy_net(models::cube(3), models::ball(3), 4.0, 5);
  CHECK(wide.count == 1);
}

TEST_CASE("greedy net is deterministic per seed") {
  const Body K = models::cross_polytope(2);
  const Body L = models::ball(2);
  const auto a = cov::greedy_net(K, L, 0.25, 7, 3000);
  const auto b = cov::greedy_net(K, L, 0.25, 7, 3000);
  CHECK(a.count == b.count);
  CHECK((a.centers - b.centers).norm() == 0.0);
  CHECK(a.count > 1);
}

TEST_CASE("greedy net reports partial coverage through the budget error") {
  const Body K = models::cube(2, 4.0);
  const Body L = models::ball(2);
  bool thrown = false;
  try {
    cov::greedy_net(K, L, 0.05, 11, 4000, 3);
  } catch (const cov::PartialNetError& e) {
    thrown = true;
    CHECK(e.coverage > 0.0);
    CHECK(e.coverage < 1.0);
  }
  CHECK(thrown);
}

TEST_CASE("entropy numbers of a body against itself never exceed one") {
  for (const Body& K : {models::cube(2), models::cross_polytope(3)}) {
    const auto seq = cov::entropy_sequence(K, K, 6);
    REQUIRE(seq.e.size() == 6);
    for (std::size_t k = 0; k < seq.e.size(); ++k) {
      CHECK(seq.e[k].lower <= seq.e[k].upper);
      CHECK(seq.e[k].upper <= 1.0 + 1e-6);
      if (k > 0) {
        CHECK(seq.e[k].lower <= seq.e[k - 1].lower + 1e-12);
        CHECK(seq.e[k].upper <= seq.e[k - 1].upper + 1e-12);
      }
    }
  }
}

TEST_CASE("entropy brackets of a fat ball pair straddle the dyadic scale") {
  const auto seq = cov::entropy_sequence(models::ball(3, 4.0), models::ball(3), 8);
  for (std::size_t k = 0; k < seq.e.size(); ++k) {
    CHECK(seq.e[k].lower <= seq.e[k].upper);
    const double exact_lower = 4.0 * std::exp2(-double(k) / 3.0);
    CHECK(seq.e[k].upper <= 4.0 * (1.0 + 1e-6));
    CHECK(seq.e[k].upper >= exact_lower * (1.0 - 1e-9));
  }
}

TEST_CASE("gelfand bound at l = 1 is the circumradius") {
  const Body K = models::cube(3);
  CHECK(cov::gelfand_upper(K, 1, 5, 31) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("gelfand bound hits the exact semiaxis through tail eigenspaces") {
  const Body E = diag_ellipsoid({4.0, 2.0, 1.0});
  for (int l = 1; l <= 3; ++l) {
    const double lam = (l == 1) ? 4.0 : (l == 2 ? 2.0 : 1.0);
    CHECK(cov::gelfand_upper(E, l, 40, 17) == doctest::Approx(lam).epsilon(1e-9));
  }
}

TEST_CASE("mean width and mean norm of the ball are exactly one") {
  const auto w = cov::mean_width(models::ball(4), 2000, 3);
  const auto m = cov::mean_norm(models::ball(4), 2000, 3);
  CHECK(w.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.stderr_value == doctest::Approx(0.0));
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("mean width of the cube matches the absolute-coordinate integral") {
  for (int n : {2, 3, 5}) {
    const auto w = cov::mean_width(models::cube(n), 200000, 5);
    const double exact = n * abs_coordinate_mean(n);
    CHECK(std::abs(w.value - exact) <= 3.0 * w.stderr_value);
  }
}

TEST_CASE("mean width is invariant under translation") {
  const Body K = models::cross_polytope(3);
  const Body Kt = translate(K, (Vector(3) << 0.4, -0.2, 0.7).finished());
  const auto a = cov::mean_width(K, 100000, 9);
  const auto b = cov::mean_width(Kt, 100000, 10);
  CHECK(std::abs(a.value - b.value) <=
        3.0 * (a.stderr_value + b.stderr_value));
}

TEST_CASE("the product of mean norm and mean width is at least one") {
  std::vector<Body> bodies;
  bodies.push_back(models::cube(3));
  bodies.push_back(models::cross_polytope(4));
  bodies.push_back(diag_ellipsoid({3.0, 1.0, 0.5}));
  bodies.push_back(models::random_polytope(3, 40, models::PointMode::sphere, 23, true));
  for (const Body& K : bodies) {
    const auto m = cov::mean_norm(K, 60000, 12);
    const auto w = cov::mean_width(K, 60000, 13);
    CHECK(m.value * w.value >= 1.0 - 3.0 * (m.stderr_value + w.stderr_value));
  }
}

TEST_CASE("urysohn direction: volume radius is below the mean width") {
  std::vector<Body> bodies;
  bodies.push_back(models::cube(3));
  bodies.push_back(models::cross_polytope(3));
  bodies.push_back(diag_ellipsoid({2.0, 1.0, 0.7}));
  bodies.push_back(models::regular_simplex(4).body);
  bodies.push_back(models::random_polytope(4, 30, models::PointMode::gaussian, 41));
  for (const Body& K : bodies) {
    const auto w = cov::mean_width(K, 150000, 15);
    CHECK(vol::volume_radius(K) <= w.value + 3.0 * w.stderr_value);
  }
}

TEST_CASE("phi_k sandwich is consistent with greedy nets and volume bounds") {
  const std::vector<Body> bodies = {diag_ellipsoid({3.0, 1.2}),
                                    diag_ellipsoid({4.0, 2.0, 1.0})};
  for (const Body& Q : bodies) {
    const int n = Q.dim();
    const Body B = models::ball(n);
    const auto spec = cov::spectrum_of(Q);
    const double volQ = vol::exact_volume(Q).value;
    for (int k = 1; k <= 12; ++k) {
      const cov::PhiValue phi = cov::phi_k(spec, k);
      const double budget = std::exp2(double(k));

      // Packing side: centers are 2t-separated, so the count at t = 6 phi_k
      // is at most N(Q, 6 phi_k B) <= 2^k.
      long count = 0;
      bool within = true;
      try {
        count = cov::greedy_net(Q, B, 6.0 * phi.value, 7, 4000,
                                static_cast<long>(budget) + 8)
                    .count;
      } catch (const cov::PartialNetError&) {
        within = false;
      }
      CHECK(within);
      CHECK(double(count) <= budget);
      CHECK(2.0 * 6.0 * phi.value >= phi.value);

      // Volumetric side: the lower bound at 6 phi_k never exceeds 2^k.
      const double lower =
          volQ / (std::pow(6.0 * phi.value, n) * unit_ball_volume(n));
      CHECK(lower <= budget * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("dudley sum against the sampled mean width") {
  const Body K = models::ball(3, 2.0);
  const auto seq = cov::entropy_sequence(K, models::ball(3), 3);
  const double s = cov::dudley_sum(seq);
  CHECK(s > 0.0);
  CHECK(std::isfinite(s));
  const auto w = cov::mean_width(K, 2000, 21);
  const double ratio = std::sqrt(3.0) * w.value / s;
  CHECK(ratio > 0.0);
  MESSAGE("dudley diagnostic ratio sqrt(n) M* / sum = " << ratio);
}

TEST_CASE("cross-polytope entropy estimates against the reference profile") {
  const int m = 3;
  const Body K = models::cross_polytope(m);
  const Body B = models::ball(m);
  std::ostringstream table;
  for (int k = 1; k <= 5; ++k) {
    const double budget = std::exp2(double(k - 1));
    double best = 2.0;
    for (double t = 1.0; t >= 0.02; t *= 0.85) {
      try {
        const auto net = cov::greedy_net(K, B, t, 3, 3000,
                                         static_cast<long>(budget) + 4);
        if (net.count <= budget) best = 2.0 * t;
      } catch (const cov::PartialNetError&) {
        break;
      }
    }
    const double ref = models::schutt_entropy_reference(m - 1, k);
    table << " k=" << k << " ratio=" << best / ref;
  }
  MESSAGE("schutt diagnostic:" << table.str());
  CHECK(true);
}

}  // TEST_SUITE
