#include "covgeom/subspace.hpp"

#include <cmath>

#include "covgeom/lp.hpp"
#include "covgeom/rng.hpp"
#include "covgeom/volume.hpp"
#include "body_access.hpp"

namespace covgeom::sub {
namespace {

void validate(const Subspace& F) {
  if (F.l < 1 || F.l > F.n || F.basis.rows() != F.n || F.basis.cols() != F.l)
    throw PreconditionError("subspace: inconsistent dimensions");
  const double defect =
      (F.basis.transpose() * F.basis - Matrix::Identity(F.l, F.l)).norm();
  if (defect > 1e-12)
    throw PreconditionError("subspace: basis is not orthonormal");
}

void require_compatible(const Body& K, const Subspace& F) {
  validate(F);
  if (K.dim() != F.n) throw PreconditionError("subspace: body dimension mismatch");
}

Matrix symmetric_sqrt(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.operatorSqrt();
}

Matrix symmetric_inverse(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

// Quasi-uniform unit directions for the radial table; fixed seeding keeps
// the grid identical across calls with the same l.
Matrix direction_grid(int l) {
  if (l == 1) {
    Matrix D(1, 2);
    D << 1.0, -1.0;
    return D;
  }
  const int m = 64 * l;
  Rng rng(derive_seed(0xB0D15EEDULL, static_cast<std::uint64_t>(l)));
  Matrix D(l, m);
  for (int j = 0; j < m; ++j) D.col(j) = rng.sphere_vector(l);
  return D;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 20);
}

}  // namespace

Subspace random_subspace(int n, int l, std::uint64_t seed) {
  if (l < 1 || l > n) throw PreconditionError("random_subspace: need 1 <= l <= n");
  Rng rng(seed);
  Matrix G = rng.gaussian_matrix(n, l);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, l);
  Matrix R = qr.matrixQR().topRows(l).triangularView<Eigen::Upper>();
  for (int j = 0; j < l; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return {n, l, Q};
}

Subspace span_of(const Matrix& columns) {
  const int n = static_cast<int>(columns.rows());
  const int l = static_cast<int>(columns.cols());
  if (n < 1 || l < 1 || l > n) throw PreconditionError("span_of: bad shape");
  Eigen::ColPivHouseholderQR<Matrix> qr(columns);
  qr.setThreshold(1e-10);
  if (qr.rank() != l) throw PreconditionError("span_of: columns are dependent");
  Matrix Q = qr.householderQ() * Matrix::Identity(n, l);
  return {n, l, Q};
}

Subspace orthogonal_complement(const Subspace& F) {
  validate(F);
  if (F.l == F.n)
    throw PreconditionError("orthogonal_complement: complement is trivial");
  Eigen::HouseholderQR<Matrix> qr(F.basis);
  Matrix Qf = qr.householderQ() * Matrix::Identity(F.n, F.n);
  return {F.n, F.n - F.l, Qf.rightCols(F.n - F.l)};
}

Body project(const Body& K, const Subspace& F) {
  require_compatible(K, F);
  const Matrix& Q = F.basis;
  switch (K.kind()) {
    case Body::Kind::ellipsoid: {
      Matrix S = K.shape();
      Matrix shape = symmetric_sqrt(Q.transpose() * S * S * Q);
      return Body::make_ellipsoid(Q.transpose() * K.center(), shape, K.tol());
    }
    default: {
      const Matrix& V = as_vertex_body(K).vertex_matrix();
      const bool prune = F.l <= K.tol().exact_dim_cap;
      return Body::from_vertices(Q.transpose() * V, prune, K.tol());
    }
  }
}

Body section(const Body& K, const Subspace& F, const std::optional<Vector>& offset) {
  require_compatible(K, F);
  const Matrix& Q = F.basis;
  Vector y0 = offset.value_or(Vector::Zero(F.n));
  if (y0.size() != F.n) throw PreconditionError("section: offset dimension mismatch");
  if ((Q.transpose() * y0).norm() > 1e-9)
    throw PreconditionError("section: offset must lie in the orthogonal complement");

  if (K.kind() == Body::Kind::ellipsoid) {
    Matrix M = symmetric_inverse(K.shape());
    Matrix M2 = M * M;
    Matrix G = Q.transpose() * M2 * Q;
    Vector h = Q.transpose() * (M2 * (y0 - K.center()));
    const double k0 = (y0 - K.center()).dot(M2 * (y0 - K.center()));
    Eigen::LDLT<Matrix> ldlt(G);
    Vector Ginv_h = ldlt.solve(h);
    const double rho2 = 1.0 - k0 + h.dot(Ginv_h);
    if (rho2 <= K.tol().feasibility * K.tol().feasibility)
      throw PreconditionError("section: slice misses the interior of the body");
    Matrix shape = std::sqrt(rho2) * symmetric_sqrt(symmetric_inverse(G));
    return Body::make_ellipsoid(-Ginv_h, shape, K.tol());
  }

  const Body& H = (K.kind() == Body::Kind::halfspaces)
                      ? K
                      : convert(K, Body::Kind::halfspaces);
  const Matrix& A = H.normal_matrix();
  const Vector& b = H.offset_vector();
  Matrix rows(A.rows(), F.l);
  Vector offs(A.rows());
  int kept = 0;
  for (int i = 0; i < A.rows(); ++i) {
    Vector r = Q.transpose() * A.row(i).transpose();
    const double bi = b[i] - A.row(i).dot(y0);
    if (r.norm() <= 1e-12) {
      if (bi < -K.tol().feasibility)
        throw PreconditionError("section: slice misses the interior of the body");
      continue;
    }
    rows.row(kept) = r.transpose() / r.norm();
    offs[kept] = bi / r.norm();
    ++kept;
  }
  if (kept == 0) throw PreconditionError("section: slice is unconstrained");
  rows.conservativeResize(kept, F.l);
  offs.conservativeResize(kept);
  lp::Chebyshev ch = lp::chebyshev_centre(rows, offs);
  if (ch.status != lp::Status::optimal || ch.radius <= K.tol().feasibility)
    throw PreconditionError("section: slice misses the interior of the body");
  return Body::from_halfspaces(rows, offs, false, K.tol());
}

double marginal_density(const Body& K, const Subspace& F, const Vector& y) {
  require_compatible(K, F);
  if (y.size() != F.l) throw PreconditionError("marginal_density: bad point dimension");
  if (F.l == F.n)
    throw PreconditionError("marginal_density: fibre dimension is zero");
  Subspace G = orthogonal_complement(F);
  try {
    Body slice = section(K, G, Vector(F.basis * y));
    return vol::exact_volume(slice).value;
  } catch (const PreconditionError&) {
    return 0.0;
  }
}

ScanReport vrad_scan(const Body& K, int l, int samples, std::uint64_t seed) {
  const int n = K.dim();
  if (l < 1 || l >= n) throw PreconditionError("vrad_scan: need 1 <= l < n");
  if (samples < 1) throw PreconditionError("vrad_scan: need samples >= 1");
  ScanReport rep;
  rep.l = l;
  rep.samples = samples;
  bool any = false;
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t sub_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
    Subspace F = random_subspace(n, l, sub_seed);
    ScanSample row;
    row.index = s;
    row.subspace_seed = sub_seed;
    try {
      row.vrad_projection = vol::volume_radius(project(K, F));
      row.vrad_section = vol::volume_radius(section(K, F));
    } catch (const Error&) {
      ++rep.failures;
      continue;
    }
    if (!any) {
      rep.v_sup = rep.v_inf = row.vrad_projection;
      rep.w_sup = rep.w_inf = row.vrad_section;
      any = true;
    } else {
      rep.v_sup = std::max(rep.v_sup, row.vrad_projection);
      rep.v_inf = std::min(rep.v_inf, row.vrad_projection);
      rep.w_sup = std::max(rep.w_sup, row.vrad_section);
      rep.w_inf = std::min(rep.w_inf, row.vrad_section);
    }
    rep.rows.push_back(row);
  }
  if (!any) throw ConvergenceError("vrad_scan: every sampled subspace failed");
  return rep;
}

StarBody ball_body(const Body& K, const Subspace& F, double p) {
  require_compatible(K, F);
  if (p < 1.0) throw PreconditionError("ball_body: p >= 1 only");
  const double g0 = marginal_density(K, F, Vector::Zero(F.l));
  if (g0 <= 0.0)
    throw PreconditionError("ball_body: central marginal density vanishes");

  Body proj = project(K, F);
  StarBody T;
  T.F = F;
  T.p = p;
  T.central_density = g0;
  T.directions = direction_grid(F.l);
  T.radial = Vector::Zero(T.directions.cols());

  for (int j = 0; j < T.directions.cols(); ++j) {
    const Vector theta = T.directions.col(j);
    const double gauge = gauge_value(proj, theta);
    const double u_max = std::isfinite(gauge) && gauge > 0.0 ? 1.0 / gauge : 0.0;
    if (u_max <= 0.0) continue;
    auto integrand = [&](double u) {
      return marginal_density(K, F, Vector(u * theta)) * std::pow(u, p - 1.0);
    };
    const double scale = g0 * std::pow(u_max, p) / p;
    const double I = integrate(integrand, 0.0, u_max, 1e-8 * std::max(scale, 1e-30));
    T.radial[j] = std::pow(std::max(I, 0.0) * p / g0, 1.0 / p);
  }
  return T;
}

SandwichReport ball_body_sandwich(const Body& K, const Subspace& F) {
  StarBody T = ball_body(K, F, F.l + 1.0);
  Body proj = project(K, F);
  const double outer_factor = M_E * (F.n + 1.0) / (F.l + 1.0);
  SandwichReport rep;
  for (int j = 0; j < T.directions.cols(); ++j) {
    const double gauge = gauge_value(proj, T.directions.col(j));
    if (!std::isfinite(gauge) || gauge <= 0.0)
      throw InvariantViolation("ball_body_sandwich: projection not full-dimensional");
    const double r_proj = 1.0 / gauge;
    const double r_T = T.radial[j];
    rep.inner_excess = std::max(rep.inner_excess, r_T / (M_E * r_proj));
    rep.outer_excess = std::max(rep.outer_excess, r_proj / (outer_factor * r_T));
  }
  return rep;
}

}  // namespace covgeom::sub
