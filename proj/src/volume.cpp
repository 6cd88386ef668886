#include "covgeom/volume.hpp"

#include <cmath>

#include "covgeom/rng.hpp"
#include "body_access.hpp"

namespace covgeom::vol {
namespace {

constexpr long kBlockSize = 8192;

// Fills the cache's exact moment slots from the hull triangulation and
// returns them. Halfspace bodies go through their cached vertex form.
hull::BodyMoments polytope_moments(const Body& K) {
  const Body& KV = as_vertex_body(K);
  if (KV.dim() > KV.tol().exact_dim_cap)
    throw DimensionCapExceeded("exact_volume: dimension above exact cap");
  auto& c = BodyAccess::cache(KV);
  {
    std::lock_guard<std::mutex> lk(c.mu);
    if (c.volume && c.barycentre && c.second_moment)
      return {*c.volume, *c.barycentre, *c.second_moment};
  }
  hull::BodyMoments m = hull::moments(KV.vertex_matrix(), *KV.hull());
  std::lock_guard<std::mutex> lk(c.mu);
  c.volume = m.volume;
  c.barycentre = m.barycentre;
  c.second_moment = m.second_moment;
  return m;
}

double ellipsoid_volume(const Body& K) {
  return unit_ball_volume(K.dim()) * K.shape().determinant();
}

}  // namespace

VolumeEstimate exact_volume(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid)
    return {ellipsoid_volume(K), 0.0, 0, "ellipsoid"};
  return {polytope_moments(K).volume, 0.0, 0, "exact"};
}

VolumeEstimate mc_volume(const std::function<bool(const Vector&)>& member,
                         const Vector& lo, const Vector& hi, long samples,
                         std::uint64_t seed) {
  const int n = static_cast<int>(lo.size());
  if (n == 0 || hi.size() != n) throw PreconditionError("mc_volume: bad box");
  if (samples <= 0) throw PreconditionError("mc_volume: need a positive sample count");
  const Vector span = hi - lo;
  if (span.minCoeff() <= 0.0) throw PreconditionError("mc_volume: empty box");
  const double box_volume = span.prod();

  long hits = 0;
  Vector x(n);
  const long blocks = (samples + kBlockSize - 1) / kBlockSize;
  for (long b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const long in_block = std::min(kBlockSize, samples - b * kBlockSize);
    for (long s = 0; s < in_block; ++s) {
      for (int i = 0; i < n; ++i) x[i] = lo[i] + span[i] * rng.uniform();
      if (member(x)) ++hits;
    }
  }
  if (hits == 0)
    throw InconclusiveEstimate("mc_volume: no hits in the bounding box",
                               3.0 / static_cast<double>(samples) * box_volume);
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return {box_volume * p, se, samples, "monte-carlo"};
}

VolumeEstimate mc_volume(const Body& K, long samples, std::uint64_t seed) {
  auto [lo, hi] = bounding_box(K);
  return mc_volume([&K](const Vector& x) { return contains(K, x); }, lo, hi,
                   samples, seed);
}

MomentReport moments(const Body& K) {
  const int n = K.dim();
  MomentReport r;
  if (K.kind() == Body::Kind::ellipsoid) {
    r.volume = ellipsoid_volume(K);
    r.barycentre = K.center();
    const Matrix& S = K.shape();
    r.covariance = (S * S) / (n + 2.0);
  } else {
    hull::BodyMoments m = polytope_moments(K);
    r.volume = m.volume;
    r.barycentre = m.barycentre;
    r.covariance = m.second_moment / m.volume -
                   m.barycentre * m.barycentre.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(r.covariance);
  const Vector ev = eig.eigenvalues();
  if (ev.minCoeff() <= 0.0)
    throw InvariantViolation("moments: covariance is not positive definite");
  r.isotropic_constant =
      std::pow(r.volume, -1.0 / n) * std::sqrt(ev.mean());
  r.anisotropy = ev.maxCoeff() / ev.minCoeff();
  return r;
}

double volume_radius(const Body& K) {
  const double v = exact_volume(K).value;
  if (v <= 0.0) throw InvariantViolation("volume_radius: nonpositive volume");
  return std::exp((std::log(v) - log_unit_ball_volume(K.dim())) / K.dim());
}

double volume_product(const Body& K) {
  const double vK = exact_volume(K).value;
  const double vP = exact_volume(polar(K)).value;
  if (vK <= 0.0 || vP <= 0.0)
    throw InvariantViolation("volume_product: nonpositive volume");
  return std::exp((std::log(vK) + std::log(vP) -
                   2.0 * log_unit_ball_volume(K.dim())) / K.dim());
}

}  // namespace covgeom::vol
