#include "covgeom/positions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "covgeom/covering.hpp"
#include "covgeom/volume.hpp"
#include "body_access.hpp"

namespace covgeom::pos {
namespace {

Matrix symmetric_sqrt(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix symmetric_inverse(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

double log_det_spd(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  double s = 0.0;
  for (int j = 0; j < M.rows(); ++j) {
    if (!(eig.eigenvalues()[j] > 0.0))
      throw InvariantViolation("positions: covariance is not positive definite");
    s += std::log(eig.eigenvalues()[j]);
  }
  return s;
}

Body unit_ball(int n) {
  return Body::make_ellipsoid(Vector::Zero(n), Matrix::Identity(n, n));
}

PositionReport translation_report(const Body& out, const std::string& tag,
                                  const Vector& shift) {
  PositionReport rep;
  rep.A = Matrix::Identity(out.dim(), out.dim());
  rep.v = shift;
  rep.tag = tag;
  rep.anisotropy_residual = 0.0;
  rep.L = 0.0;
  return rep;
}

}  // namespace

std::pair<Body, PositionReport> centre(const Body& K) {
  const Vector b = barycentre(K);
  Body out = translate(K, -b);
  PositionReport rep = translation_report(out, "centred", -b);
  rep.barycentre_residual = barycentre(out).norm();
  return {std::move(out), std::move(rep)};
}

std::pair<Body, PositionReport> santalo_position(const Body& K) {
  const int n = K.dim();
  constexpr double kTol = 1e-7;
  constexpr int kMaxIter = 80;

  // State of the strictly convex objective P(s) = |(K - s) polar|.
  struct PolarState {
    double volume;
    Vector b;
    Matrix cov;
  };
  const auto evaluate = [&K](const Vector& s) -> PolarState {
    const vol::MomentReport m = vol::moments(polar(translate(K, -s)));
    return {m.volume, m.barycentre, m.covariance};
  };

  Vector s = barycentre(K);
  PolarState st = evaluate(s);
  double best_residual = st.b.norm();
  Vector best_s = s;

  for (int iter = 0; iter < kMaxIter && st.b.norm() >= kTol; ++iter) {
    // Newton step: grad P = (n+1) vol b, hess P = (n+1)(n+2) vol (cov+bb^T).
    const Matrix M2 = st.cov + st.b * st.b.transpose();
    const Vector d = -M2.ldlt().solve(st.b) / (n + 2);
    bool moved = false;
    double alpha = 1.0;
    for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
      const Vector cand = s + alpha * d;
      PolarState next;
      try {
        next = evaluate(cand);
      } catch (const PreconditionError&) {
        continue;  // candidate shift left the interior
      }
      if (next.volume < st.volume * (1.0 - 1e-15) ||
          next.b.norm() < st.b.norm()) {
        s = cand;
        st = next;
        moved = true;
        break;
      }
    }
    if (st.b.norm() < best_residual) {
      best_residual = st.b.norm();
      best_s = s;
    }
    if (!moved) break;
  }

  if (st.b.norm() >= kTol) {
    std::ostringstream msg;
    msg << "santalo_position: no convergence, best residual "
        << best_residual << " at shift norm " << best_s.norm();
    throw ConvergenceError(msg.str());
  }

  Body out = translate(K, -s);
  PositionReport rep = translation_report(out, "santalo", -s);
  rep.barycentre_residual = vol::moments(polar(out)).barycentre.norm();
  return {std::move(out), std::move(rep)};
}

std::pair<Body, PositionReport> isotropic_position(const Body& K) {
  const int n = K.dim();
  const vol::MomentReport m = vol::moments(K);
  const Matrix W = symmetric_inverse(symmetric_sqrt(m.covariance));
  const double c = std::exp(-std::log(m.volume) / n +
                            0.5 * log_det_spd(m.covariance) / n);
  const Matrix A = c * W;
  Body out = affine_image(K, A, -A * m.barycentre);

  const vol::MomentReport check = vol::moments(out);
  PositionReport rep;
  rep.A = A;
  rep.v = -A * m.barycentre;
  rep.tag = "isotropic";
  rep.barycentre_residual = check.barycentre.norm();
  rep.anisotropy_residual = check.anisotropy - 1.0;
  rep.L = c;
  return {std::move(out), std::move(rep)};
}

Body balance_ellipsoid(const Body& E) {
  if (E.kind() != Body::Kind::ellipsoid)
    throw UnsupportedRepresentation("balance_ellipsoid: input is not an ellipsoid");
  if (E.center().norm() > 1e-12 * (1.0 + E.shape().norm()))
    throw PreconditionError("balance_ellipsoid: ellipsoid must be centred");
  return Body::make_ellipsoid(E.center(), symmetric_sqrt(E.shape()));
}

Body isotropy_ellipsoid(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid) return K;
  const int n = K.dim();
  const vol::MomentReport m = vol::moments(K);
  const Matrix S = symmetric_sqrt(m.covariance);
  const double c = std::exp(
      (std::log(m.volume) - 0.5 * log_det_spd(m.covariance) -
       log_unit_ball_volume(n)) /
      n);
  return Body::make_ellipsoid(m.barycentre, c * S);
}

Body john_like_ellipsoid(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid) return K;
  const vol::MomentReport m = vol::moments(K);
  const Matrix S = symmetric_sqrt(m.covariance);
  const Body KH = convert(K, Body::Kind::halfspaces);
  const Matrix& A = KH.normal_matrix();
  const Vector& b = KH.offset_vector();
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    const double margin = b[i] - A.row(i).dot(m.barycentre);
    c = std::min(c, margin / (S * A.row(i).transpose()).norm());
  }
  if (!(c > 0.0))
    throw InvariantViolation("john_like_ellipsoid: barycentre not interior");
  return Body::make_ellipsoid(m.barycentre, c * S);
}

Body loewner_like_ellipsoid(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid) return K;
  const vol::MomentReport m = vol::moments(K);
  const Matrix S = symmetric_sqrt(m.covariance);
  const Matrix Sinv = symmetric_inverse(S);
  const Body& KV = as_vertex_body(K);
  double c = 0.0;
  for (int j = 0; j < KV.vertex_matrix().cols(); ++j)
    c = std::max(c, (Sinv * (KV.vertex_matrix().col(j) - m.barycentre)).norm());
  return Body::make_ellipsoid(m.barycentre, c * S);
}

std::vector<double> default_mposition_grid() { return {2.0, 4.0, 8.0, 16.0, 32.0}; }

namespace {

double log_covering_upper(const Body& K, const Body& L, double t) {
  if (cov::contained_in_dilate(K, L, t)) return 0.0;
  return std::max(0.0, std::log(cov::volumetric_covering_bounds(K, L, t).upper));
}

Body chosen_ellipsoid(const Body& K, MEllipsoidChooser chooser) {
  switch (chooser) {
    case MEllipsoidChooser::john:
      return john_like_ellipsoid(K);
    case MEllipsoidChooser::loewner:
      return loewner_like_ellipsoid(K);
    default:
      return isotropy_ellipsoid(K);
  }
}

}  // namespace

RegularityProfile mposition_profile(const Body& K,
                                    const std::vector<double>& tgrid) {
  if (tgrid.empty())
    throw PreconditionError("mposition_profile: empty dilation grid");
  const int n = K.dim();
  const Body B = unit_ball(n);
  const Body P = polar(K);

  std::vector<double> grid = tgrid;
  std::sort(grid.begin(), grid.end());

  RegularityProfile prof;
  prof.n = n;
  for (double t : grid) {
    MPositionRow row;
    row.t = t;
    row.logN[0] = log_covering_upper(K, B, t);
    row.logN[1] = log_covering_upper(P, B, t);
    row.logN[2] = log_covering_upper(B, K, t);
    row.logN[3] = log_covering_upper(B, P, t);
    row.max_logN = *std::max_element(row.logN.begin(), row.logN.end());
    prof.rows.push_back(row);
  }

  prof.saturated = true;
  for (const MPositionRow& r : prof.rows)
    if (r.max_logN > 1e-12) prof.saturated = false;
  if (prof.saturated) {
    prof.regular = true;
    return prof;
  }

  const bool collapsed = prof.rows.back().max_logN <= 1e-12;
  std::vector<std::pair<double, double>> pts;
  for (const MPositionRow& r : prof.rows)
    if (r.max_logN > 1e-12)
      pts.emplace_back(std::log(r.t), std::log(r.max_logN));
  if (pts.size() < 2) {
    prof.regular = collapsed;
    return prof;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  prof.beta = -slope;
  prof.D = std::exp(intercept) / n;
  double rss = 0.0;
  for (auto& [x, y] : pts) {
    const double r = y - (intercept + slope * x);
    rss += r * r;
  }
  prof.fit_residual = std::sqrt(rss / m);
  prof.regular = collapsed || prof.beta > 0.0;
  return prof;
}

std::pair<Body, RegularityProfile> regularize(const Body& K,
                                              MEllipsoidChooser chooser,
                                              const std::vector<double>& tgrid) {
  const int n = K.dim();
  const Body lower_sym = symmetric_intersection(K);
  const Body E1 = chosen_ellipsoid(lower_sym, chooser);
  const Matrix T1 = symmetric_inverse(E1.shape());

  const Body K1 = affine_image(K, T1, Vector::Zero(n));
  const Body upper_sym = symmetric_hull(K1);
  const Body E2 = chosen_ellipsoid(upper_sym, chooser);
  const Matrix half = symmetric_inverse(symmetric_sqrt(E2.shape()));

  Body out = affine_image(K1, half, Vector::Zero(n));
  RegularityProfile prof = mposition_profile(out, tgrid);
  return {std::move(out), std::move(prof)};
}

}  // namespace covgeom::pos
