#include "covgeom/body.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "covgeom/lp.hpp"
#include "body_access.hpp"

namespace covgeom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw PreconditionError(msg);
}

Matrix columns_at(const Matrix& M, const std::vector<int>& ids) {
  Matrix out(M.rows(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) out.col(j) = M.col(ids[j]);
  return out;
}

// min / max of |c + S v| over the unit sphere by multistart projected
// gradient; used only for radii of non-centred ellipsoids.
double sphere_extremum(const Vector& c, const Matrix& S, bool maximize) {
  const int n = static_cast<int>(c.size());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  std::vector<Vector> starts;
  for (int i = 0; i < n; ++i) {
    starts.push_back(eig.eigenvectors().col(i));
    starts.push_back(-eig.eigenvectors().col(i));
  }
  if (c.norm() > 1e-14) {
    starts.push_back(c.normalized());
    starts.push_back(-c.normalized());
  }
  double best = maximize ? -kInf : kInf;
  for (Vector v : starts) {
    double step = 0.5;
    double f = (c + S * v).norm();
    for (int it = 0; it < 300; ++it) {
      Vector g = S * (c + S * v);  // gradient of |c+Sv|^2 / 2
      Vector w = v + (maximize ? step : -step) * g;
      const double wn = w.norm();
      if (wn < 1e-14) {
        step *= 0.5;
        continue;
      }
      w /= wn;
      const double fw = (c + S * w).norm();
      if ((maximize && fw > f) || (!maximize && fw < f)) {
        v = w;
        f = fw;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    best = maximize ? std::max(best, f) : std::min(best, f);
  }
  return best;
}

}  // namespace

// ---- construction ----------------------------------------------------------

Body Body::from_vertices(const Matrix& V, bool prune, const Tolerances& tol) {
  require(V.rows() >= 1 && V.cols() >= 1, "from_vertices: empty input");
  Body K;
  K.kind_ = Kind::vertices;
  K.dim_ = static_cast<int>(V.rows());
  K.tol_ = tol;
  K.cache_ = std::make_shared<Cache>();

  // Deduplicate, keeping first occurrences.
  std::vector<int> keep;
  for (int j = 0; j < V.cols(); ++j) {
    bool dup = false;
    for (int k : keep) {
      if ((V.col(j) - V.col(k)).norm() <= tol.dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(j);
  }
  Matrix W = columns_at(V, keep);

  if (prune && W.cols() > W.rows() + 1) {
    try {
      hull::Hull h = hull::build(W, tol);
      hull::BodyMoments m = hull::moments(W, h);
      K.V_ = columns_at(W, h.vertices);
      std::lock_guard<std::mutex> lk(K.cache_->mu);
      K.cache_->volume = m.volume;
      K.cache_->barycentre = m.barycentre;
      K.cache_->second_moment = m.second_moment;
      return K;
    } catch (const InvariantViolation&) {
      // Lower-dimensional point set; keep it unpruned.
    }
  }
  K.V_ = std::move(W);
  return K;
}

Body Body::from_halfspaces(const Matrix& A, const Vector& b, bool certify,
                           const Tolerances& tol) {
  require(A.rows() == b.size() && A.cols() >= 1, "from_halfspaces: inconsistent input");
  const int n = static_cast<int>(A.cols());
  std::vector<Vector> rows;
  std::vector<double> offs;
  for (int i = 0; i < A.rows(); ++i) {
    const double norm = A.row(i).norm();
    if (norm <= 1e-14) {
      if (b[i] < -tol.feasibility) throw InvariantViolation("from_halfspaces: empty body");
      continue;  // trivial halfspace
    }
    Vector a = A.row(i).transpose() / norm;
    const double bb = b[i] / norm;
    bool dup = false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((rows[k] - a).norm() <= tol.dedup && std::abs(offs[k] - bb) <= tol.dedup) {
        dup = true;
        break;
      }
      // A parallel tighter halfspace dominates.
      if ((rows[k] - a).norm() <= tol.dedup) {
        offs[k] = std::min(offs[k], bb);
        dup = true;
        break;
      }
    }
    if (!dup) {
      rows.push_back(a);
      offs.push_back(bb);
    }
  }
  require(!rows.empty(), "from_halfspaces: no nontrivial halfspaces");

  Body K;
  K.kind_ = Kind::halfspaces;
  K.dim_ = n;
  K.tol_ = tol;
  K.cache_ = std::make_shared<Cache>();
  K.A_.resize(rows.size(), n);
  K.b_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    K.A_.row(i) = rows[i].transpose();
    K.b_[i] = offs[i];
  }

  if (certify) {
    if (static_cast<int>(rows.size()) < n + 1)
      throw InvariantViolation("from_halfspaces: too few halfspaces to be bounded");
    Vector lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
      Vector e = Vector::Zero(n);
      e[j] = 1.0;
      lp::Result up = lp::solve_max(e, K.A_, K.b_);
      lp::Result dn = lp::solve_max(-e, K.A_, K.b_);
      if (up.status == lp::Status::infeasible || dn.status == lp::Status::infeasible)
        throw InvariantViolation("from_halfspaces: empty body");
      if (up.status != lp::Status::optimal || dn.status != lp::Status::optimal)
        throw InvariantViolation("from_halfspaces: unbounded body");
      hi[j] = up.objective;
      lo[j] = -dn.objective;
    }
    std::lock_guard<std::mutex> lk(K.cache_->mu);
    K.cache_->box = {lo, hi};
  }
  return K;
}

Body Body::make_ellipsoid(const Vector& c, const Matrix& S, const Tolerances& tol) {
  const int n = static_cast<int>(c.size());
  require(S.rows() == n && S.cols() == n && n >= 1, "make_ellipsoid: inconsistent input");
  if ((S - S.transpose()).lpNorm<Eigen::Infinity>() > tol.dedup * std::max(1.0, S.norm()))
    throw InvariantViolation("make_ellipsoid: shape not symmetric");
  Matrix Sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Sym);
  if (eig.eigenvalues().minCoeff() <= 0.0)
    throw InvariantViolation("make_ellipsoid: shape not positive definite");
  Body K;
  K.kind_ = Kind::ellipsoid;
  K.dim_ = n;
  K.tol_ = tol;
  K.cache_ = std::make_shared<Cache>();
  K.c_ = c;
  K.S_ = std::move(Sym);
  return K;
}

const Matrix& Body::vertex_matrix() const {
  if (kind_ != Kind::vertices)
    throw UnsupportedRepresentation("vertex_matrix: not a vertices body");
  return V_;
}
const Matrix& Body::normal_matrix() const {
  if (kind_ != Kind::halfspaces)
    throw UnsupportedRepresentation("normal_matrix: not a halfspaces body");
  return A_;
}
const Vector& Body::offset_vector() const {
  if (kind_ != Kind::halfspaces)
    throw UnsupportedRepresentation("offset_vector: not a halfspaces body");
  return b_;
}
const Vector& Body::center() const {
  if (kind_ != Kind::ellipsoid) throw UnsupportedRepresentation("center: not an ellipsoid");
  return c_;
}
const Matrix& Body::shape() const {
  if (kind_ != Kind::ellipsoid) throw UnsupportedRepresentation("shape: not an ellipsoid");
  return S_;
}

std::shared_ptr<const hull::Hull> Body::hull() const {
  if (kind_ != Kind::vertices) throw UnsupportedRepresentation("hull: not a vertices body");
  std::lock_guard<std::mutex> lk(cache_->mu);
  if (!cache_->hull) cache_->hull = std::make_shared<hull::Hull>(hull::build(V_, tol_));
  return cache_->hull;
}

Body BodyAccess::wrap_vertices(const Matrix& V, const Tolerances& tol) {
  return Body::from_vertices(V, false, tol);
}

// ---- conversion ------------------------------------------------------------

namespace {

Body halfspaces_to_vertices(const Body& K) {
  const int n = K.dim();
  if (n > K.tol().exact_dim_cap)
    throw DimensionCapExceeded("convert: dimension above exact cap");
  const Matrix& A = K.normal_matrix();
  const Vector& b = K.offset_vector();
  lp::Chebyshev ch = lp::chebyshev_centre(A, b);
  if (ch.status == lp::Status::infeasible)
    throw InvariantViolation("convert: empty body");
  if (ch.status == lp::Status::unbounded)
    throw InvariantViolation("convert: unbounded body");
  if (ch.radius <= K.tol().feasibility)
    throw InvariantViolation("convert: body has empty interior");
  Vector shifted = b - A * ch.centre;
  Matrix P(n, A.rows());
  for (int i = 0; i < A.rows(); ++i) P.col(i) = A.row(i).transpose() / shifted[i];
  hull::Hull h = hull::build(P, K.tol());
  Matrix V(n, h.facets.size());
  for (std::size_t f = 0; f < h.facets.size(); ++f) {
    if (h.facets[f].offset <= 1e-12)
      throw InvariantViolation("convert: unbounded body (polar facet through origin)");
    V.col(f) = h.facets[f].normal / h.facets[f].offset + ch.centre;
  }
  return Body::from_vertices(V, false, K.tol());
}

Body vertices_to_halfspaces(const Body& K) {
  if (K.dim() > K.tol().exact_dim_cap)
    throw DimensionCapExceeded("convert: dimension above exact cap");
  auto h = K.hull();
  Matrix A(h->facets.size(), K.dim());
  Vector b(h->facets.size());
  for (std::size_t f = 0; f < h->facets.size(); ++f) {
    A.row(f) = h->facets[f].normal.transpose();
    b[f] = h->facets[f].offset;
  }
  return Body::from_halfspaces(A, b, false, K.tol());
}

}  // namespace

Body convert(const Body& K, Body::Kind target) {
  if (K.kind() == target) return K;
  if (K.kind() == Body::Kind::ellipsoid || target == Body::Kind::ellipsoid)
    throw UnsupportedRepresentation("convert: ellipsoid conversions are not exact");
  if (target == Body::Kind::vertices) return halfspaces_to_vertices(K);
  return vertices_to_halfspaces(K);
}

const Body& as_vertex_body(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::vertices:
      return K;
    case Body::Kind::halfspaces: {
      auto& c = BodyAccess::cache(K);
      std::lock_guard<std::mutex> lk(c.mu);
      if (!c.as_vertices) c.as_vertices = std::make_shared<Body>(halfspaces_to_vertices(K));
      return *c.as_vertices;
    }
    default:
      throw UnsupportedRepresentation("as_vertex_body: ellipsoid has no vertex form");
  }
}

// ---- evaluations -----------------------------------------------------------

double support_value(const Body& K, const Vector& x) {
  require(x.size() == K.dim(), "support_value: dimension mismatch");
  switch (K.kind()) {
    case Body::Kind::vertices:
      return (K.vertex_matrix().transpose() * x).maxCoeff();
    case Body::Kind::halfspaces: {
      lp::Result r = lp::solve_max(x, K.normal_matrix(), K.offset_vector());
      if (r.status == lp::Status::unbounded)
        throw InvariantViolation("support_value: unbounded body");
      if (r.status == lp::Status::infeasible)
        throw InvariantViolation("support_value: empty body");
      return r.objective;
    }
    case Body::Kind::ellipsoid:
      return K.center().dot(x) + (K.shape() * x).norm();
  }
  throw Error("support_value: unreachable");
}

double gauge_value(const Body& K, const Vector& x) {
  require(x.size() == K.dim(), "gauge_value: dimension mismatch");
  const double xn = x.norm();
  if (xn == 0.0) return 0.0;
  switch (K.kind()) {
    case Body::Kind::vertices: {
      const Matrix& V = K.vertex_matrix();
      Vector ones = Vector::Ones(V.cols());
      lp::Result r = lp::solve_standard_min(ones, V, x);
      if (r.status != lp::Status::optimal) return kInf;
      return r.objective;
    }
    case Body::Kind::halfspaces: {
      const Matrix& A = K.normal_matrix();
      const Vector& b = K.offset_vector();
      double t = 0.0;
      for (int i = 0; i < A.rows(); ++i) {
        const double ax = A.row(i).dot(x);
        if (b[i] <= K.tol().feasibility) {
          if (ax > K.tol().feasibility * xn) return kInf;
          continue;
        }
        t = std::max(t, ax / b[i]);
      }
      return t;
    }
    case Body::Kind::ellipsoid: {
      // Solve S v = x and S w = c; the gauge is the positive root of a
      // quadratic in 1/t from |v/t - w| = 1.
      Vector v = K.shape().ldlt().solve(x);
      Vector w = K.shape().ldlt().solve(K.center());
      const double uv = v.dot(w);
      const double disc = uv * uv - v.squaredNorm() * (w.squaredNorm() - 1.0);
      if (disc < 0.0) return kInf;
      const double s = (uv + std::sqrt(disc)) / v.squaredNorm();
      if (s <= 0.0) return kInf;
      return 1.0 / s;
    }
  }
  throw Error("gauge_value: unreachable");
}

bool contains(const Body& K, const Vector& x, double slack) {
  require(x.size() == K.dim(), "contains: dimension mismatch");
  const double eps = slack >= 0.0 ? slack : K.tol().feasibility;
  switch (K.kind()) {
    case Body::Kind::vertices:
      return hull::distance_to_hull(x, K.vertex_matrix()) <= eps;
    case Body::Kind::halfspaces:
      return ((K.normal_matrix() * x - K.offset_vector()).maxCoeff() <= eps);
    case Body::Kind::ellipsoid: {
      Vector v = K.shape().ldlt().solve(x - K.center());
      return v.norm() <= 1.0 + eps;
    }
  }
  return false;
}

std::pair<Vector, Vector> bounding_box(const Body& K) {
  auto& c = BodyAccess::cache(K);
  {
    std::lock_guard<std::mutex> lk(c.mu);
    if (c.box) return *c.box;
  }
  const int n = K.dim();
  Vector lo(n), hi(n);
  switch (K.kind()) {
    case Body::Kind::vertices:
      lo = K.vertex_matrix().rowwise().minCoeff();
      hi = K.vertex_matrix().rowwise().maxCoeff();
      break;
    case Body::Kind::halfspaces: {
      for (int j = 0; j < n; ++j) {
        Vector e = Vector::Zero(n);
        e[j] = 1.0;
        lp::Result up = lp::solve_max(e, K.normal_matrix(), K.offset_vector());
        lp::Result dn = lp::solve_max(-e, K.normal_matrix(), K.offset_vector());
        if (up.status != lp::Status::optimal || dn.status != lp::Status::optimal)
          throw InvariantViolation("bounding_box: body empty or unbounded");
        hi[j] = up.objective;
        lo[j] = -dn.objective;
      }
      break;
    }
    case Body::Kind::ellipsoid:
      for (int j = 0; j < n; ++j) {
        const double half = K.shape().col(j).norm();
        lo[j] = K.center()[j] - half;
        hi[j] = K.center()[j] + half;
      }
      break;
  }
  std::lock_guard<std::mutex> lk(c.mu);
  c.box = {lo, hi};
  return *c.box;
}

Vector interior_point(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::vertices:
      return K.vertex_matrix().rowwise().mean();
    case Body::Kind::halfspaces: {
      lp::Chebyshev ch = lp::chebyshev_centre(K.normal_matrix(), K.offset_vector());
      if (ch.status != lp::Status::optimal || ch.radius <= 0.0)
        throw InvariantViolation("interior_point: body empty, unbounded, or flat");
      return ch.centre;
    }
    case Body::Kind::ellipsoid:
      return K.center();
  }
  throw Error("interior_point: unreachable");
}

Radii radii(const Body& K) {
  Radii out;
  switch (K.kind()) {
    case Body::Kind::vertices: {
      out.circumradius = K.vertex_matrix().colwise().norm().maxCoeff();
      const Body H = convert(K, Body::Kind::halfspaces);
      out.inradius = std::max(0.0, H.offset_vector().minCoeff());
      break;
    }
    case Body::Kind::halfspaces: {
      out.inradius = std::max(0.0, K.offset_vector().minCoeff());
      const Body& V = as_vertex_body(K);
      out.circumradius = V.vertex_matrix().colwise().norm().maxCoeff();
      break;
    }
    case Body::Kind::ellipsoid: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(K.shape());
      if (K.center().norm() <= 1e-14) {
        out.inradius = eig.eigenvalues().minCoeff();
        out.circumradius = eig.eigenvalues().maxCoeff();
      } else {
        out.inradius = sphere_extremum(K.center(), K.shape(), false);
        out.circumradius = sphere_extremum(K.center(), K.shape(), true);
      }
      break;
    }
  }
  return out;
}

double hausdorff_distance(const Body& K, const Body& L) {
  require(K.dim() == L.dim(), "hausdorff_distance: dimension mismatch");
  const Body& KV = as_vertex_body(K);
  const Body& LV = as_vertex_body(L);
  const Matrix& VK = KV.vertex_matrix();
  const Matrix& VL = LV.vertex_matrix();
  double d = 0.0;
  for (int j = 0; j < VK.cols(); ++j)
    d = std::max(d, hull::distance_to_hull(VK.col(j), VL));
  for (int j = 0; j < VL.cols(); ++j)
    d = std::max(d, hull::distance_to_hull(VL.col(j), VK));
  return d;
}

// ---- transformations -------------------------------------------------------

Body translate(const Body& K, const Vector& v) {
  require(v.size() == K.dim(), "translate: dimension mismatch");
  switch (K.kind()) {
    case Body::Kind::vertices:
      return Body::from_vertices(K.vertex_matrix().colwise() + v, false, K.tol());
    case Body::Kind::halfspaces:
      return Body::from_halfspaces(K.normal_matrix(),
                                   K.offset_vector() + K.normal_matrix() * v, false,
                                   K.tol());
    case Body::Kind::ellipsoid:
      return Body::make_ellipsoid(K.center() + v, K.shape(), K.tol());
  }
  throw Error("translate: unreachable");
}

Body negate(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::vertices:
      return Body::from_vertices(-K.vertex_matrix(), false, K.tol());
    case Body::Kind::halfspaces:
      return Body::from_halfspaces(-K.normal_matrix(), K.offset_vector(), false, K.tol());
    case Body::Kind::ellipsoid:
      return Body::make_ellipsoid(-K.center(), K.shape(), K.tol());
  }
  throw Error("negate: unreachable");
}

Body dilate(const Body& K, double t) {
  require(t > 0.0, "dilate: factor must be positive");
  switch (K.kind()) {
    case Body::Kind::vertices:
      return Body::from_vertices(t * K.vertex_matrix(), false, K.tol());
    case Body::Kind::halfspaces:
      return Body::from_halfspaces(K.normal_matrix(), t * K.offset_vector(), false, K.tol());
    case Body::Kind::ellipsoid:
      return Body::make_ellipsoid(t * K.center(), t * K.shape(), K.tol());
  }
  throw Error("dilate: unreachable");
}

Body affine_image(const Body& K, const Matrix& A, const Vector& v) {
  const int n = K.dim();
  require(A.rows() == n && A.cols() == n && v.size() == n,
          "affine_image: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw PreconditionError("affine_image: singular matrix");
  switch (K.kind()) {
    case Body::Kind::vertices:
      return Body::from_vertices((A * K.vertex_matrix()).colwise() + v, false, K.tol());
    case Body::Kind::halfspaces: {
      Matrix At = lu.inverse().transpose();  // normals map by A^{-T}
      Matrix N = K.normal_matrix() * At.transpose();
      Vector b2 = K.offset_vector() + N * v;
      return Body::from_halfspaces(N, b2, false, K.tol());
    }
    case Body::Kind::ellipsoid: {
      Matrix M = A * K.shape();
      Eigen::SelfAdjointEigenSolver<Matrix> eig(M * M.transpose());
      Matrix S = eig.operatorSqrt();
      return Body::make_ellipsoid(A * K.center() + v, S, K.tol());
    }
  }
  throw Error("affine_image: unreachable");
}

namespace {

bool origin_interior(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::halfspaces:
      return K.offset_vector().minCoeff() > K.tol().feasibility;
    case Body::Kind::ellipsoid: {
      Vector v = K.shape().ldlt().solve(K.center());
      return v.norm() < 1.0 - K.tol().feasibility;
    }
    case Body::Kind::vertices: {
      const Body H = convert(K, Body::Kind::halfspaces);
      return H.offset_vector().minCoeff() > K.tol().feasibility;
    }
  }
  return false;
}

}  // namespace

Body polar(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::vertices: {
      if (!origin_interior(K))
        throw PreconditionError("polar: origin not interior");
      return Body::from_halfspaces(K.vertex_matrix().transpose(),
                                   Vector::Ones(K.vertex_matrix().cols()), false,
                                   K.tol());
    }
    case Body::Kind::halfspaces: {
      const Vector& b = K.offset_vector();
      if (b.minCoeff() <= K.tol().feasibility)
        throw PreconditionError("polar: origin not interior");
      Matrix P(K.dim(), b.size());
      for (int i = 0; i < b.size(); ++i)
        P.col(i) = K.normal_matrix().row(i).transpose() / b[i];
      const bool prune = K.dim() <= K.tol().exact_dim_cap;
      return Body::from_vertices(P, prune, K.tol());
    }
    case Body::Kind::ellipsoid: {
      if (K.center().norm() > 1e-12)
        throw UnsupportedRepresentation(
            "polar: non-centred ellipsoid polar is not an ellipsoid; translate first");
      Eigen::SelfAdjointEigenSolver<Matrix> eig(K.shape());
      Matrix Sinv = eig.eigenvectors() *
                    eig.eigenvalues().cwiseInverse().asDiagonal() *
                    eig.eigenvectors().transpose();
      return Body::make_ellipsoid(Vector::Zero(K.dim()), Sinv, K.tol());
    }
  }
  throw Error("polar: unreachable");
}

Body symmetric_hull(const Body& K) {
  switch (K.kind()) {
    case Body::Kind::vertices: {
      const Matrix& V = K.vertex_matrix();
      Matrix W(V.rows(), 2 * V.cols());
      W.leftCols(V.cols()) = V;
      W.rightCols(V.cols()) = -V;
      return Body::from_vertices(W, true, K.tol());
    }
    case Body::Kind::halfspaces:
      return symmetric_hull(as_vertex_body(K));
    case Body::Kind::ellipsoid:
      if (K.center().norm() <= 1e-12) return K;
      throw UnsupportedRepresentation(
          "symmetric_hull: not an ellipsoid for non-centred input; convert first");
  }
  throw Error("symmetric_hull: unreachable");
}

void prune_halfspaces(Matrix& A, Vector& b, double slack) {
  std::vector<int> alive(A.rows());
  std::iota(alive.begin(), alive.end(), 0);
  for (int i = static_cast<int>(alive.size()) - 1; i >= 0; --i) {
    if (alive.size() <= static_cast<std::size_t>(A.cols()) + 1) break;
    std::vector<int> others;
    for (int k : alive) {
      if (k != alive[i]) others.push_back(k);
    }
    Matrix Ao(others.size(), A.cols());
    Vector bo(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) {
      Ao.row(k) = A.row(others[k]);
      bo[k] = b[others[k]];
    }
    Vector c = A.row(alive[i]).transpose();
    lp::Result r = lp::solve_max(c, Ao, bo);
    if (r.status == lp::Status::optimal && r.objective <= b[alive[i]] + slack)
      alive.erase(alive.begin() + i);
  }
  Matrix A2(alive.size(), A.cols());
  Vector b2(alive.size());
  for (std::size_t k = 0; k < alive.size(); ++k) {
    A2.row(k) = A.row(alive[k]);
    b2[k] = b[alive[k]];
  }
  A = std::move(A2);
  b = std::move(b2);
}

Body symmetric_intersection(const Body& K, const std::optional<Vector>& about) {
  Vector p;
  if (about) {
    p = *about;
  } else if (origin_interior(K)) {
    p = Vector::Zero(K.dim());
  } else {
    p = barycentre(K);
  }
  if (K.kind() == Body::Kind::ellipsoid) {
    if ((K.center() - p).norm() > 1e-12)
      throw UnsupportedRepresentation(
          "symmetric_intersection: ellipsoid supported only about its centre");
    return Body::make_ellipsoid(Vector::Zero(K.dim()), K.shape(), K.tol());
  }
  const Body H = (K.kind() == Body::Kind::halfspaces) ? K : convert(K, Body::Kind::halfspaces);
  const Matrix& A = H.normal_matrix();
  Vector b = H.offset_vector() - A * p;
  if (b.minCoeff() <= H.tol().feasibility)
    throw PreconditionError("symmetric_intersection: chosen point not interior");
  Matrix A2(2 * A.rows(), A.cols());
  Vector b2(2 * A.rows());
  A2.topRows(A.rows()) = A;
  A2.bottomRows(A.rows()) = -A;
  b2.head(A.rows()) = b;
  b2.tail(A.rows()) = b;
  prune_halfspaces(A2, b2, H.tol().feasibility);
  return Body::from_halfspaces(A2, b2, false, K.tol());
}

Body minkowski_sum(const Body& K, const Body& L) {
  require(K.dim() == L.dim(), "minkowski_sum: dimension mismatch");
  if (K.kind() == Body::Kind::ellipsoid || L.kind() == Body::Kind::ellipsoid)
    throw UnsupportedRepresentation("minkowski_sum: exact sums need polytopes");
  if (K.dim() > K.tol().exact_dim_cap)
    throw DimensionCapExceeded("minkowski_sum: dimension above exact cap");
  const Matrix& VK = as_vertex_body(K).vertex_matrix();
  const Matrix& VL = as_vertex_body(L).vertex_matrix();
  Matrix W(K.dim(), VK.cols() * VL.cols());
  int col = 0;
  for (int i = 0; i < VK.cols(); ++i) {
    for (int j = 0; j < VL.cols(); ++j) W.col(col++) = VK.col(i) + VL.col(j);
  }
  return Body::from_vertices(W, true, K.tol());
}

Body difference_body(const Body& K) {
  if (K.kind() == Body::Kind::ellipsoid)
    return Body::make_ellipsoid(Vector::Zero(K.dim()), 2.0 * K.shape(), K.tol());
  return minkowski_sum(K, negate(K));
}

Body intersect(const Body& K, const Body& L) {
  require(K.dim() == L.dim(), "intersect: dimension mismatch");
  if (K.kind() != Body::Kind::halfspaces || L.kind() != Body::Kind::halfspaces)
    throw UnsupportedRepresentation("intersect: both bodies must be halfspaces kind");
  Matrix A(K.normal_matrix().rows() + L.normal_matrix().rows(), K.dim());
  Vector b(A.rows());
  A.topRows(K.normal_matrix().rows()) = K.normal_matrix();
  A.bottomRows(L.normal_matrix().rows()) = L.normal_matrix();
  b.head(K.offset_vector().size()) = K.offset_vector();
  b.tail(L.offset_vector().size()) = L.offset_vector();
  prune_halfspaces(A, b, K.tol().feasibility);
  return Body::from_halfspaces(A, b, false, K.tol());
}

Vector barycentre(const Body& K) {
  auto& c = BodyAccess::cache(K);
  {
    std::lock_guard<std::mutex> lk(c.mu);
    if (c.barycentre) return *c.barycentre;
  }
  Vector b;
  switch (K.kind()) {
    case Body::Kind::ellipsoid:
      b = K.center();
      break;
    case Body::Kind::vertices: {
      hull::BodyMoments m = hull::moments(K.vertex_matrix(), *K.hull());
      std::lock_guard<std::mutex> lk(c.mu);
      c.volume = m.volume;
      c.barycentre = m.barycentre;
      c.second_moment = m.second_moment;
      return m.barycentre;
    }
    case Body::Kind::halfspaces: {
      b = barycentre(as_vertex_body(K));
      break;
    }
  }
  std::lock_guard<std::mutex> lk(c.mu);
  c.barycentre = b;
  return b;
}

}  // namespace covgeom
