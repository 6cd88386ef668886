#include "covgeom/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "covgeom/rng.hpp"
#include "covgeom/subspace.hpp"
#include "covgeom/volume.hpp"
#include "body_access.hpp"

namespace covgeom::cov {
namespace {

constexpr long kBlockSize = 8192;
constexpr long kMinkowskiVertexBudget = 40000;

// Prefix sums of log lambda_j; entry l is sum over j <= l.
std::vector<double> prefix_log(const Vector& lambda) {
  std::vector<double> s(static_cast<std::size_t>(lambda.size()) + 1, 0.0);
  for (int j = 0; j < lambda.size(); ++j)
    s[static_cast<std::size_t>(j) + 1] = s[static_cast<std::size_t>(j)] + std::log(lambda[j]);
  return s;
}

void check_spectrum(const EllipsoidSpectrum& spec, const char* who) {
  if (spec.n < 1 || spec.lambda.size() != spec.n)
    throw PreconditionError(std::string(who) + ": malformed spectrum");
  for (int j = 0; j < spec.n; ++j) {
    if (!(spec.lambda[j] > 0.0))
      throw PreconditionError(std::string(who) + ": semiaxes must be positive");
    if (j > 0 && spec.lambda[j] > spec.lambda[j - 1] * (1.0 + 1e-12))
      throw PreconditionError(std::string(who) + ": semiaxes must be sorted descending");
  }
}

Matrix symmetric_inverse(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

bool is_centred(const Body& E) {
  return E.center().lpNorm<Eigen::Infinity>() <=
         1e-12 * (1.0 + E.shape().norm());
}

// Gauge of L n -L, evaluated without building the intersection body.
// Polytopal L is read through its halfspace form (unit rows), so the gauge
// is max_i |<a_i, v>| / b_i; a centred ellipsoid uses |S^{-1} v|.
struct SymGauge {
  bool is_ellipsoid = false;
  Matrix A;
  Vector b;
  Matrix Sinv;
  double operator()(const Vector& v) const {
    if (is_ellipsoid) return (Sinv * v).norm();
    double g = 0.0;
    for (int i = 0; i < A.rows(); ++i)
      g = std::max(g, std::abs(A.row(i).dot(v)) / b[i]);
    return g;
  }
};

SymGauge make_sym_gauge(const Body& L, const char* who) {
  SymGauge g;
  if (L.kind() == Body::Kind::ellipsoid) {
    if (!is_centred(L))
      throw UnsupportedRepresentation(std::string(who) +
                                      ": ellipsoid L must be centred");
    g.is_ellipsoid = true;
    g.Sinv = symmetric_inverse(L.shape());
    return g;
  }
  const Body LH = convert(L, Body::Kind::halfspaces);
  g.A = LH.normal_matrix();
  g.b = LH.offset_vector();
  for (int i = 0; i < g.b.size(); ++i)
    if (!(g.b[i] > 0.0))
      throw PreconditionError(std::string(who) +
                              ": L must contain the origin in its interior");
  return g;
}

// sup over K of the gauge of L n -L. Exact for polytopal L (support values
// along its normals) and for polytopal K against an ellipsoid L; the
// ellipsoid-in-ellipsoid case returns a triangle-inequality upper bound.
double sym_gauge_circumradius(const Body& K, const Body& L,
                              const SymGauge& g) {
  if (!g.is_ellipsoid) {
    double r = 0.0;
    for (int i = 0; i < g.A.rows(); ++i) {
      const Vector a = g.A.row(i).transpose();
      r = std::max(r, std::max(support_value(K, a), support_value(K, -a)) / g.b[i]);
    }
    return r;
  }
  if (K.kind() == Body::Kind::ellipsoid) {
    Eigen::JacobiSVD<Matrix> svd(g.Sinv * K.shape());
    return (g.Sinv * K.center()).norm() + svd.singularValues()[0];
  }
  const Body& KV = as_vertex_body(K);
  double r = 0.0;
  for (int j = 0; j < KV.vertex_matrix().cols(); ++j)
    r = std::max(r, g(KV.vertex_matrix().col(j)));
  return r;
}

// Exact volume of the superset of P + rho B_2^n obtained by pushing every
// halfspace of P outward by rho.
double offset_polytope_volume(const Body& P, double rho) {
  const Body PH = convert(P, Body::Kind::halfspaces);
  Vector b = PH.offset_vector().array() + rho;
  const Body out = Body::from_halfspaces(PH.normal_matrix(), b, true, P.tol());
  return vol::exact_volume(out).value;
}

double circumradius_about_origin(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(K.shape());
    return K.center().norm() + eig.eigenvalues().maxCoeff();
  }
  const Body& KV = as_vertex_body(K);
  double r = 0.0;
  for (int j = 0; j < KV.vertex_matrix().cols(); ++j)
    r = std::max(r, KV.vertex_matrix().col(j).norm());
  return r;
}

}  // namespace

EllipsoidSpectrum spectrum_of(const Body& E) {
  if (E.kind() != Body::Kind::ellipsoid)
    throw UnsupportedRepresentation("spectrum_of: body is not an ellipsoid");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(E.shape());
  EllipsoidSpectrum spec;
  spec.n = E.dim();
  spec.lambda = eig.eigenvalues().reverse();
  return spec;
}

PhiValue phi_k(const EllipsoidSpectrum& spec, int k) {
  check_spectrum(spec, "phi_k");
  if (k < 1) throw PreconditionError("phi_k: k must be at least 1");
  const std::vector<double> s = prefix_log(spec.lambda);
  PhiValue out;
  double best = -std::numeric_limits<double>::infinity();
  for (int l = 1; l <= spec.n; ++l) {
    const double cand = (-k * std::log(2.0) + s[static_cast<std::size_t>(l)]) / l;
    if (cand > best) {
      best = cand;
      out.argmax_l = l;
    }
  }
  out.value = std::exp(best);
  out.window = {out.value, 6.0 * out.value};
  return out;
}

ProjectionVolumes max_projection_volume(const EllipsoidSpectrum& spec, int l) {
  check_spectrum(spec, "max_projection_volume");
  if (l < 1 || l > spec.n)
    throw PreconditionError("max_projection_volume: l out of range");
  const std::vector<double> s = prefix_log(spec.lambda);
  const double lb = log_unit_ball_volume(l);
  ProjectionVolumes out;
  out.max_projection = std::exp(s[static_cast<std::size_t>(l)] + lb);
  out.min_section =
      std::exp(s[static_cast<std::size_t>(spec.n)] -
               s[static_cast<std::size_t>(spec.n - l)] + lb);
  return out;
}

double RegularityBound::log_bound(double t) const {
  if (t < t_min * (1.0 - 1e-12))
    throw PreconditionError("RegularityBound: bound not certified below t_min");
  return gamma * std::exp(std::log(6.0 * C) / gamma) * n /
         std::exp(std::log(t) / gamma);
}

RegularityBound ellipsoid_regularity(const EllipsoidSpectrum& spec,
                                     double gamma) {
  check_spectrum(spec, "ellipsoid_regularity");
  if (!(gamma > 0.0))
    throw PreconditionError("ellipsoid_regularity: gamma must be positive");
  const std::vector<double> s = prefix_log(spec.lambda);
  double logC = -std::numeric_limits<double>::infinity();
  for (int l = 1; l <= spec.n; ++l)
    logC = std::max(logC, s[static_cast<std::size_t>(l)] / l -
                              gamma * (std::log(spec.n) - std::log(l)));
  RegularityBound out;
  out.n = spec.n;
  out.gamma = gamma;
  out.C = std::exp(logC);
  out.t_min = 6.0 * out.C * std::exp(-gamma);
  return out;
}

CoverBound volumetric_covering_bounds(const Body& K, const Body& L, double t) {
  if (!(t > 0.0))
    throw PreconditionError("volumetric_covering_bounds: t must be positive");
  if (K.dim() != L.dim())
    throw PreconditionError("volumetric_covering_bounds: dimension mismatch");
  const int n = K.dim();
  const double volK = vol::exact_volume(K).value;
  const double volL = vol::exact_volume(L).value;
  CoverBound out;
  out.t = t;
  out.lower = volK / (std::pow(t, n) * volL);

  const bool Ke = K.kind() == Body::Kind::ellipsoid;
  const bool Le = L.kind() == Body::Kind::ellipsoid;
  if (Le && !is_centred(L))
    throw UnsupportedRepresentation(
        "volumetric_covering_bounds: ellipsoid L must be centred");

  if (Ke && Le) {
    const Matrix& SK = K.shape();
    const Matrix& SL = L.shape();
    const double alpha = (SK.array() * SL.array()).sum() / SL.squaredNorm();
    if ((SK - alpha * SL).norm() <= 1e-9 * (1.0 + SK.norm())) {
      out.upper = std::exp(n * std::log((2.0 * alpha + t) / t));
      out.method = "dilate-algebra";
      return out;
    }
    Eigen::JacobiSVD<Matrix> svd(symmetric_inverse(SL) * SK);
    double logv = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mu = svd.singularValues()[j];
      logv += 0.5 * (std::log(2.0) + std::log(4.0 * mu * mu + t * t)) -
              std::log(t);
    }
    out.upper = std::exp(logv);
    out.method = "ellipsoid-envelope";
    return out;
  }

  if (!Ke && !Le) {
    const Body U0 = symmetric_intersection(L);
    const double volU0 = vol::exact_volume(U0).value;
    const Body& KV = as_vertex_body(K);
    const Body& UV = as_vertex_body(U0);
    const long points = static_cast<long>(KV.vertex_matrix().cols()) *
                        static_cast<long>(UV.vertex_matrix().cols());
    if (points > kMinkowskiVertexBudget)
      throw DimensionCapExceeded(
          "volumetric_covering_bounds: Minkowski sum exceeds the vertex budget");
    const Body sum = minkowski_sum(dilate(K, 2.0), dilate(U0, t));
    out.upper = vol::exact_volume(sum).value / (std::pow(t, n) * volU0);
    out.method = "minkowski";
    return out;
  }

  if (Ke) {
    const Body U0 = symmetric_intersection(L);
    const double volU0 = vol::exact_volume(U0).value;
    const Matrix Sinv = symmetric_inverse(K.shape());
    const Body U0m = affine_image(U0, Sinv, Vector::Zero(n));
    const double num = K.shape().determinant() *
                       offset_polytope_volume(dilate(U0m, t), 2.0);
    out.upper = num / (std::pow(t, n) * volU0);
    out.method = "halfspace-offset";
    return out;
  }

  const Matrix Sinv = symmetric_inverse(L.shape());
  const Body Km = affine_image(dilate(K, 2.0), Sinv, Vector::Zero(n));
  const double num =
      L.shape().determinant() * offset_polytope_volume(Km, t);
  out.upper = num / (std::pow(t, n) * volL);
  out.method = "halfspace-offset";
  return out;
}

bool contained_in_dilate(const Body& K, const Body& L, double t) {
  if (!(t > 0.0))
    throw PreconditionError("contained_in_dilate: t must be positive");
  if (K.dim() != L.dim())
    throw PreconditionError("contained_in_dilate: dimension mismatch");
  if (L.kind() == Body::Kind::ellipsoid) {
    const Matrix Sinv = symmetric_inverse(L.shape());
    const Body Km =
        affine_image(translate(K, -t * L.center()), Sinv, Vector::Zero(K.dim()));
    return circumradius_about_origin(Km) <= t * (1.0 + 1e-12);
  }
  const Body LH = convert(L, Body::Kind::halfspaces);
  const Matrix& A = LH.normal_matrix();
  const Vector& b = LH.offset_vector();
  for (int i = 0; i < A.rows(); ++i) {
    const Vector a = A.row(i).transpose();
    if (support_value(K, a) > t * b[i] + 1e-12 * (1.0 + std::abs(b[i])))
      return false;
  }
  return true;
}

CoveringProfile covering_profile(const Body& K, const Body& L,
                                 const std::vector<double>& tgrid) {
  if (tgrid.empty())
    throw PreconditionError("covering_profile: empty dilation grid");
  CoveringProfile p;
  p.n = K.dim();
  std::vector<double> grid = tgrid;
  std::sort(grid.begin(), grid.end());
  for (double t : grid) p.rows.push_back(volumetric_covering_bounds(K, L, t));
  fit_power_law(p);
  return p;
}

void fit_power_law(CoveringProfile& profile) {
  std::vector<std::pair<double, double>> pts;
  for (const CoverBound& r : profile.rows)
    if (r.upper > 1.0 + 1e-12)
      pts.emplace_back(std::log(r.t), std::log(std::log(r.upper)));
  profile.beta.reset();
  profile.D.reset();
  profile.fit_residual = 0.0;
  if (pts.size() < 2) return;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) return;
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  profile.beta = -slope;
  profile.D = std::exp(intercept) / profile.n;
  double rss = 0.0;
  for (auto& [x, y] : pts) {
    const double r = y - (intercept + slope * x);
    rss += r * r;
  }
  profile.fit_residual = std::sqrt(rss / m);
}

GreedyNet greedy_net(const Body& K, const Body& L, double t,
                     std::uint64_t seed, long cloud_size, long max_centers) {
  if (!(t > 0.0)) throw PreconditionError("greedy_net: t must be positive");
  if (cloud_size < 1)
    throw PreconditionError("greedy_net: cloud size must be positive");
  if (K.dim() != L.dim())
    throw PreconditionError("greedy_net: dimension mismatch");
  const int n = K.dim();
  const SymGauge g = make_sym_gauge(L, "greedy_net");

  const auto [lo, hi] = bounding_box(K);
  const Vector z = interior_point(K);
  const Body Kc = translate(K, -z);

  std::vector<Vector> cloud;
  cloud.reserve(static_cast<std::size_t>(cloud_size) + 64);
  if (K.kind() == Body::Kind::vertices)
    for (int j = 0; j < K.vertex_matrix().cols(); ++j)
      cloud.push_back(K.vertex_matrix().col(j));
  const long boundary = (2 * cloud_size) / 5;
  for (long i = 0; i < cloud_size; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i) + 1));
    if (i < boundary) {
      const Vector theta = rng.sphere_vector(n);
      cloud.push_back(z + theta * ((1.0 - 1e-9) / gauge_value(Kc, theta)));
      continue;
    }
    bool placed = false;
    for (int tries = 0; tries < 64 && !placed; ++tries) {
      Vector x(n);
      for (int d = 0; d < n; ++d)
        x[d] = lo[d] + (hi[d] - lo[d]) * rng.uniform();
      if (contains(K, x)) {
        cloud.push_back(x);
        placed = true;
      }
    }
    if (!placed) {
      const Vector theta = rng.sphere_vector(n);
      cloud.push_back(z + theta * ((1.0 - 1e-9) / gauge_value(Kc, theta)));
    }
  }

  Vector mean = Vector::Zero(n);
  for (const Vector& x : cloud) mean += x;
  mean /= static_cast<double>(cloud.size());

  std::size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d = g(cloud[i] - mean);
    if (d < best) {
      best = d;
      first = i;
    }
  }
  std::vector<Vector> centers{cloud[first]};
  std::vector<double> dist(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    dist[i] = g(cloud[i] - cloud[first]) / t;

  constexpr double kCoverRadius = 2.0;
  const auto covered = [&] {
    std::size_t c = 0;
    for (double d : dist)
      if (d <= kCoverRadius + 1e-12) ++c;
    return static_cast<double>(c) / static_cast<double>(dist.size());
  };
  for (;;) {
    std::size_t far = 0;
    double dmax = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if (dist[i] > dmax) {
        dmax = dist[i];
        far = i;
      }
    if (dmax <= kCoverRadius + 1e-12) break;
    if (max_centers > 0 && static_cast<long>(centers.size()) >= max_centers)
      throw PartialNetError("greedy_net: center budget exhausted", covered());
    centers.push_back(cloud[far]);
    for (std::size_t i = 0; i < dist.size(); ++i)
      dist[i] = std::min(dist[i], g(cloud[i] - cloud[far]) / t);
  }

  GreedyNet net;
  net.count = static_cast<long>(centers.size());
  net.cloud_size = static_cast<long>(cloud.size());
  net.coverage = 1.0;
  net.centers.resize(n, net.count);
  for (long j = 0; j < net.count; ++j)
    net.centers.col(j) = centers[static_cast<std::size_t>(j)];
  return net;
}

EntropySequence entropy_sequence(const Body& K, const Body& L, int k_max) {
  if (k_max < 1)
    throw PreconditionError("entropy_sequence: k_max must be at least 1");
  const SymGauge g = make_sym_gauge(L, "entropy_sequence");
  const double R = sym_gauge_circumradius(K, L, g);
  if (!(R > 0.0))
    throw PreconditionError("entropy_sequence: K has no extent in L's gauge");

  const double t_hi = R * (1.0 + 1e-9);
  const double t_lo = t_hi / 1000.0;
  constexpr int kGridSize = 48;
  std::vector<CoverBound> rows;
  for (int i = 0; i < kGridSize; ++i) {
    const double t =
        t_lo * std::exp(std::log(t_hi / t_lo) * i / (kGridSize - 1));
    rows.push_back(volumetric_covering_bounds(K, L, t));
  }

  EntropySequence seq;
  for (int k = 1; k <= k_max; ++k) {
    const double threshold = std::exp2(k - 1);
    Interval e{0.0, t_hi};
    std::string how = "containment";
    for (const CoverBound& r : rows) {
      if (r.lower > threshold) e.lower = std::max(e.lower, r.t);
      if (r.upper <= threshold && r.t < e.upper) {
        e.upper = r.t;
        how = r.method;
      }
    }
    seq.e.push_back(e);
    seq.method.push_back(how);
  }
  return seq;
}

double gelfand_upper(const Body& K, int l, int samples, std::uint64_t seed) {
  const int n = K.dim();
  if (l < 1 || l > n) throw PreconditionError("gelfand_upper: l out of range");
  if (samples < 0)
    throw PreconditionError("gelfand_upper: negative sample count");
  const int dimF = n - l + 1;

  std::vector<sub::Subspace> candidates;
  if (K.kind() == Body::Kind::ellipsoid && is_centred(K)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(K.shape());
    sub::Subspace tail;
    tail.n = n;
    tail.l = dimF;
    tail.basis = eig.eigenvectors().leftCols(dimF);
    candidates.push_back(tail);
  }
  for (int i = 0; i < samples; ++i)
    candidates.push_back(
        sub::random_subspace(n, dimF, derive_seed(seed, static_cast<std::uint64_t>(i) + 1)));
  if (candidates.empty())
    throw PreconditionError("gelfand_upper: no candidate subspaces");

  double best = std::numeric_limits<double>::infinity();
  for (const sub::Subspace& F : candidates) {
    try {
      best = std::min(best, circumradius_about_origin(sub::section(K, F)));
    } catch (const Error&) {
    }
  }
  if (!std::isfinite(best))
    throw ConvergenceError("gelfand_upper: every sampled section failed");
  return best;
}

namespace {

SphereAverage sphere_mc(const Body& K, long samples, std::uint64_t seed,
                        const std::function<double(const Vector&)>& f) {
  if (samples < 1)
    throw PreconditionError("sphere average: sample count must be positive");
  const int n = K.dim();
  double sum = 0.0, sumsq = 0.0;
  long done = 0;
  for (long block = 0; done < samples; ++block) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(block)));
    const long m = std::min(kBlockSize, samples - done);
    for (long i = 0; i < m; ++i) {
      const double v = f(rng.sphere_vector(n));
      sum += v;
      sumsq += v * v;
    }
    done += m;
  }
  SphereAverage out;
  out.samples = samples;
  out.value = sum / samples;
  const double var =
      std::max(0.0, (sumsq - sum * sum / samples) / std::max<long>(1, samples - 1));
  out.stderr_value = std::sqrt(var / samples);
  return out;
}

}  // namespace

SphereAverage mean_width(const Body& K, long samples, std::uint64_t seed) {
  return sphere_mc(K, samples, seed,
                   [&K](const Vector& th) { return support_value(K, th); });
}

SphereAverage mean_norm(const Body& K, long samples, std::uint64_t seed) {
  return sphere_mc(K, samples, seed,
                   [&K](const Vector& th) { return gauge_value(K, th); });
}

double dudley_sum(const EntropySequence& seq) {
  double s = 0.0;
  for (std::size_t k = 0; k < seq.e.size(); ++k)
    s += seq.e[k].upper / std::sqrt(static_cast<double>(k + 1));
  return s;
}

}  // namespace covgeom::cov
