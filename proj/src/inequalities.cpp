#include "covgeom/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>

#include "covgeom/models.hpp"
#include "covgeom/positions.hpp"
#include "covgeom/rng.hpp"
#include "covgeom/volume.hpp"

namespace covgeom::ineq {
namespace {

double volume_of(const Body& K) { return vol::exact_volume(K).value; }

double ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  b = std::min(b, a - b);
  unsigned long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * static_cast<unsigned long long>(a - b + i) / i;
  return static_cast<double>(r);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionError(msg);
}

void require_centred(const Body& K, const std::string& who) {
  if (barycentre(K).norm() > 1e-6)
    throw PreconditionError(who + ": body must have its barycentre at the origin");
}

void require_subspace(const Body& K, const sub::Subspace& F, const std::string& who,
                      bool allow_full = false) {
  require(F.n == K.dim(), who + ": subspace ambient dimension mismatch");
  const int cap = allow_full ? F.n : F.n - 1;
  require(F.l >= 1 && F.l <= cap, who + ": subspace dimension out of range");
}

const char* tag_name(PositionTag tag) {
  return tag == PositionTag::santalo ? "santalo" : "centred";
}

void verify_position(const Body& K, PositionTag tag, const std::string& who) {
  if (tag == PositionTag::centred) {
    require_centred(K, who);
    return;
  }
  const double res = vol::moments(polar(K)).barycentre.norm();
  if (res > 1e-5)
    throw PreconditionError(who + ": polar barycentre residual " +
                            std::to_string(res) + " exceeds the Santalo tolerance");
}

InequalityRecord base_record(const std::string& name, const Body& K,
                             bool constant_free) {
  InequalityRecord r;
  r.name = name;
  r.n = K.dim();
  r.constant_free = constant_free;
  return r;
}

/// Fraction of the unit n-ball on {z_1 >= tau}; cos^n substitution keeps the
/// integrand smooth at the endpoints.
double cap_fraction(int n, double tau) {
  if (tau <= -1.0) return 1.0;
  if (tau >= 1.0) return 0.0;
  const double lo = std::asin(tau);
  const double hi = std::asin(1.0);
  const int panels = 1 << 12;
  const double h = (hi - lo) / panels;
  const auto f = [n](double theta) { return std::pow(std::cos(theta), n); };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  const double cap = acc * h / 3.0;
  const double full = std::sqrt(M_PI) *
                      std::exp(std::lgamma(0.5 * (n + 1)) - std::lgamma(0.5 * n + 1.0));
  return std::clamp(cap / full, 0.0, 1.0);
}

Body halfspace_clip(const Body& K, const Vector& u, double a) {
  const Body H =
      K.kind() == Body::Kind::halfspaces ? K : convert(K, Body::Kind::halfspaces);
  Matrix A(1, K.dim());
  A.row(0) = -u.transpose();
  Vector b(1);
  b[0] = -a;
  return intersect(H, Body::from_halfspaces(A, b, false, K.tol()));
}

/// Max fibre volume |K cap (G.basis y + G^perp)| over a per-axis support grid
/// in G-coordinates, plus any extra probe points.
double offset_grid_max(const Body& K, const sub::Subspace& G, int grid_points,
                       const std::vector<Vector>& extra) {
  const int m = G.l;
  std::vector<std::vector<double>> axes(m);
  for (int i = 0; i < m; ++i) {
    const Vector g = G.basis.col(i);
    const double hi = support_value(K, g);
    const double lo = -support_value(K, -g);
    if (grid_points == 1) {
      axes[i].push_back(0.5 * (lo + hi));
      continue;
    }
    for (int j = 0; j < grid_points; ++j)
      axes[i].push_back(lo + (hi - lo) * j / (grid_points - 1));
  }
  double best = 0.0;
  Vector y(m);
  std::vector<int> idx(m, 0);
  while (true) {
    for (int i = 0; i < m; ++i) y[i] = axes[i][idx[i]];
    best = std::max(best, sub::marginal_density(K, G, y));
    int i = 0;
    for (; i < m; ++i) {
      if (++idx[i] < static_cast<int>(axes[i].size())) break;
      idx[i] = 0;
    }
    if (i == m) break;
  }
  for (const Vector& p : extra) best = std::max(best, sub::marginal_density(K, G, p));
  return best;
}

}  // namespace

double halfspace_fraction(const Body& K, const Vector& normal, double offset) {
  require(normal.size() == K.dim(), "halfspace_fraction: normal dimension mismatch");
  const double s = normal.norm();
  require(s > 0.0, "halfspace_fraction: zero normal");
  const Vector u = normal / s;
  const double a = offset / s;
  if (K.kind() == Body::Kind::ellipsoid) {
    const Vector w = K.shape() * u;
    return cap_fraction(K.dim(), (a - u.dot(K.center())) / w.norm());
  }
  if (a >= support_value(K, u)) return 0.0;
  if (a <= -support_value(K, -u)) return 1.0;
  return volume_of(halfspace_clip(K, u, a)) / volume_of(K);
}

SeparatingHyperplane separating_hyperplane(const Body& K, const Vector& normal,
                                           double offset) {
  const double s = normal.norm();
  require(s > 0.0, "separating_hyperplane: zero normal");
  SeparatingHyperplane H;
  H.normal = normal / s;
  H.offset = offset / s;
  H.lambda = halfspace_fraction(K, H.normal, H.offset);
  if (H.lambda <= 1e-9 || H.lambda >= 1.0 - 1e-9)
    throw PreconditionError("separating_hyperplane: hyperplane misses the interior of K");
  return H;
}

InequalityRecord check_blaschke_santalo(const Body& K) {
  InequalityRecord r = base_record("blaschke-santalo", K, true);
  r.position_tag = "santalo";
  const auto [Ks, rep] = pos::santalo_position(K);
  r.lhs = volume_of(K) * volume_of(polar(Ks));
  const double bn = ball_volume(K.dim());
  r.rhs = bn * bn;
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

InequalityRecord check_rogers_shephard(const Body& K) {
  InequalityRecord r = base_record("rogers-shephard", K, true);
  const double volK = volume_of(K);
  r.lhs = volume_of(difference_body(K));
  r.rhs = binomial(2 * K.dim(), K.dim()) * volK;
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

InequalityRecord check_sym_hull(const Body& K) {
  require(contains(K, Vector::Zero(K.dim())), "check_sym_hull: K must contain the origin");
  InequalityRecord r = base_record("sym-hull", K, true);
  r.lhs = volume_of(symmetric_hull(K));
  r.rhs = std::ldexp(volume_of(K), K.dim());
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

InequalityRecord check_milman_pajor(const Body& K) {
  require_centred(K, "check_milman_pajor");
  InequalityRecord r = base_record("milman-pajor", K, true);
  r.lhs = volume_of(symmetric_intersection(K));
  r.rhs = std::ldexp(volume_of(K), -K.dim());
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs >= r.rhs * (1.0 - 1e-6);
  return r;
}

InequalityRecord check_meyer_pajor(const Body& K, const SeparatingHyperplane& H) {
  const int n = K.dim();
  require(n >= 2, "check_meyer_pajor: need dimension at least 2");
  require(H.normal.size() == n, "check_meyer_pajor: normal dimension mismatch");
  require(H.lambda > 0.0 && H.lambda < 1.0,
          "check_meyer_pajor: separating fraction must lie in (0, 1)");
  const double s = H.normal.norm();
  require(s > 0.0, "check_meyer_pajor: zero normal");
  const Vector u = H.normal / s;
  const double a = H.offset / s;

  double polar_min = 0.0;
  if (K.kind() == Body::Kind::ellipsoid) {
    // The polar volume of a shifted ellipsoid has a closed form, so the
    // constrained minimizer over the hyperplane does too.
    const Matrix S2 = K.shape() * K.shape();
    const double q = u.dot(S2 * u);
    const double mu = (a - u.dot(K.center())) / q;
    const double r2 = mu * mu * q;
    if (r2 >= 1.0)
      throw PreconditionError("check_meyer_pajor: hyperplane misses the interior of K");
    polar_min = ball_volume(n) / K.shape().determinant() *
                std::pow(1.0 - r2, -0.5 * (n + 1));
  } else {
    constexpr double kTol = 1e-7;
    constexpr int kMaxIter = 80;
    Matrix col(n, 1);
    col.col(0) = u;
    const sub::Subspace Fw = sub::orthogonal_complement(sub::span_of(col));
    const Matrix& W = Fw.basis;

    struct PolarState {
      double volume;
      Vector b;
      Matrix cov;
    };
    const auto evaluate = [&K](const Vector& z) -> PolarState {
      const vol::MomentReport m = vol::moments(polar(translate(K, -z)));
      return {m.volume, m.barycentre, m.covariance};
    };
    const auto residual = [&W](const PolarState& st) {
      return (W.transpose() * st.b).norm();
    };

    const Body slice = sub::section(K, Fw, Vector(a * u));
    Vector z = W * barycentre(slice) + a * u;
    PolarState st = evaluate(z);

    for (int iter = 0; iter < kMaxIter && residual(st) >= kTol; ++iter) {
      const Matrix M2 = st.cov + st.b * st.b.transpose();
      const Matrix Mw = W.transpose() * M2 * W;
      const Vector d = -W * Mw.ldlt().solve(W.transpose() * st.b) / (n + 2);
      bool moved = false;
      double alpha = 1.0;
      for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
        const Vector cand = z + alpha * d;
        PolarState next;
        try {
          next = evaluate(cand);
        } catch (const PreconditionError&) {
          continue;
        }
        if (next.volume < st.volume * (1.0 - 1e-15) || residual(next) < residual(st)) {
          z = cand;
          st = next;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (residual(st) >= kTol) {
      std::ostringstream msg;
      msg << "check_meyer_pajor: no convergence, residual " << residual(st);
      throw ConvergenceError(msg.str());
    }
    polar_min = st.volume;
  }

  InequalityRecord r = base_record("meyer-pajor", K, true);
  r.direction = u;
  r.lambda = H.lambda;
  r.lhs = volume_of(K) * polar_min;
  const double bn = ball_volume(n);
  r.rhs = bn * bn / (4.0 * H.lambda * (1.0 - H.lambda));
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

InequalityRecord check_bs_projection(const Body& K, const sub::Subspace& F,
                                     PositionTag tag) {
  require_subspace(K, F, "check_bs_projection", true);
  verify_position(K, tag, "check_bs_projection");
  const int n = K.dim();
  const int l = F.l;
  const Body Kp = polar(K);
  double vol_proj = 0.0;
  double vol_sec = 0.0;
  if (l == n) {
    vol_proj = volume_of(K);
    vol_sec = volume_of(Kp);
  } else {
    vol_proj = volume_of(sub::project(K, F));
    vol_sec = volume_of(sub::section(Kp, F));
  }
  InequalityRecord r = base_record("bs-projection", K, false);
  r.l = l;
  r.position_tag = tag_name(tag);
  r.lhs = std::pow(vol_proj * vol_sec, 1.0 / l);
  r.rhs = (static_cast<double>(n) / l) * std::exp(2.0 * log_unit_ball_volume(l) / l);
  r.ratio = r.lhs / r.rhs;
  r.implied_constant = r.ratio;
  return r;
}

InequalityRecord check_fradelizi(const Body& K, const sub::Subspace& F,
                                 int grid_points) {
  require_subspace(K, F, "check_fradelizi");
  require_centred(K, "check_fradelizi");
  require(grid_points >= 1, "check_fradelizi: need at least one grid point");
  const int n = K.dim();
  const int l = F.l;
  require(n - l <= 3, "check_fradelizi: offset grid dimension capped at 3");
  const sub::Subspace G = sub::orthogonal_complement(F);
  const double base = sub::marginal_density(K, G, Vector::Zero(G.l));
  InequalityRecord r = base_record("fradelizi", K, true);
  r.l = l;
  r.lhs = offset_grid_max(K, G, grid_points, {Vector::Zero(G.l)});
  r.rhs = std::pow((n + 1.0) / (l + 1.0), l) * base;
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

InequalityRecord check_rudelson(const Body& K, const sub::Subspace& F,
                                int grid_points) {
  require_subspace(K, F, "check_rudelson");
  require(grid_points >= 1, "check_rudelson: need at least one grid point");
  const int n = K.dim();
  const int l = F.l;
  require(n - l <= 3, "check_rudelson: offset grid dimension capped at 3");
  const sub::Subspace G = sub::orthogonal_complement(F);
  const Vector probe = G.basis.transpose() * barycentre(K);
  const double max_sec =
      offset_grid_max(K, G, grid_points, {probe, Vector::Zero(G.l)});
  const double diff_sec = volume_of(sub::section(difference_body(K), F));
  InequalityRecord r = base_record("rudelson", K, false);
  r.l = l;
  r.lhs = std::pow(diff_sec, 1.0 / l);
  r.rhs = std::min(std::sqrt(static_cast<double>(l)), static_cast<double>(n) / l) *
          std::pow(max_sec, 1.0 / l);
  r.ratio = r.lhs / r.rhs;
  r.implied_constant = r.ratio;
  return r;
}

InequalityRecord check_rs_spingarn(const Body& K, const sub::Subspace& F) {
  require_subspace(K, F, "check_rs_spingarn");
  require_centred(K, "check_rs_spingarn");
  const int n = K.dim();
  const int l = F.l;
  const double volK = volume_of(K);
  const double vol_proj = volume_of(sub::project(K, F));
  const double vol_perp = sub::marginal_density(K, F, Vector::Zero(l));
  InequalityRecord r = base_record("rs-spingarn", K, true);
  r.l = l;
  r.lhs = vol_proj * vol_perp;
  r.rhs = binomial(n, l) * volK;
  r.ratio = r.lhs / r.rhs;
  r.pass = r.lhs >= volK * (1.0 - 1e-6) && r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

std::pair<InequalityRecord, InequalityRecord> check_halfspace_sections(
    const Body& K, const sub::Subspace& F, const Vector& xi) {
  require_subspace(K, F, "check_halfspace_sections", true);
  require_centred(K, "check_halfspace_sections");
  const int n = K.dim();
  const int l = F.l;
  Vector xi_f;
  if (xi.size() == l) {
    xi_f = xi;
  } else if (xi.size() == n) {
    xi_f = F.basis.transpose() * xi;
    require(xi_f.norm() > 1e-9,
            "check_halfspace_sections: direction has no component in the subspace");
  } else {
    throw PreconditionError("check_halfspace_sections: direction size mismatch");
  }
  xi_f.normalize();

  const auto [P, S] = [&]() -> std::pair<Body, Body> {
    if (l == n) {
      Body R = affine_image(K, F.basis.transpose(), Vector::Zero(n));
      return {R, R};
    }
    return {sub::project(K, F), sub::section(K, F)};
  }();
  const double bound = std::pow(l / (n + 1.0), l);

  const auto make = [&](const char* name, const Body& body) {
    InequalityRecord r = base_record(name, K, true);
    r.l = l;
    r.direction = F.basis * xi_f;
    r.lhs = halfspace_fraction(body, xi_f, 0.0);
    r.lambda = r.lhs;
    r.rhs = bound;
    r.ratio = r.lhs / r.rhs;
    r.pass = r.lhs >= r.rhs * (1.0 - 1e-6);
    return r;
  };
  return {make("stephen-zhang", P), make("msz", S)};
}

InequalityRecord check_projection_comparison(const Body& K, const sub::Subspace& F,
                                             PositionTag tag) {
  require_subspace(K, F, "check_projection_comparison", true);
  verify_position(K, tag, "check_projection_comparison");
  const int n = K.dim();
  const int l = F.l;
  const Body H = symmetric_hull(K);
  const Body I = symmetric_intersection(K, Vector::Zero(n));
  const double vol_hull = l == n ? volume_of(H) : volume_of(sub::project(H, F));
  const double vol_int = l == n ? volume_of(I) : volume_of(sub::project(I, F));
  InequalityRecord r = base_record("projection-comparison", K, false);
  r.l = l;
  r.position_tag = tag_name(tag);
  r.lhs = std::pow(vol_hull, 1.0 / l);
  const double nl = static_cast<double>(n) / l;
  const double factor = tag == PositionTag::santalo
                            ? nl * nl * nl
                            : std::pow(nl, 5) * std::pow(1.0 + std::log(nl), 2);
  r.rhs = factor * std::pow(vol_int, 1.0 / l);
  r.ratio = r.lhs / r.rhs;
  r.implied_constant = r.ratio;
  return r;
}

namespace {

enum class CheckShape { global, direction, subspace };

struct CheckInfo {
  CheckShape shape;
  bool lower_bound;  // a >=-type bound, smaller ratio is worse
};

CheckInfo classify(const std::string& name) {
  if (name == "blaschke-santalo" || name == "rogers-shephard" || name == "sym-hull")
    return {CheckShape::global, false};
  if (name == "milman-pajor") return {CheckShape::global, true};
  if (name == "meyer-pajor") return {CheckShape::direction, false};
  if (name == "stephen-zhang" || name == "msz") return {CheckShape::subspace, true};
  if (name == "bs-projection" || name == "fradelizi" || name == "rudelson" ||
      name == "rs-spingarn" || name == "projection-comparison")
    return {CheckShape::subspace, false};
  throw PreconditionError("sweep: unknown inequality '" + name + "'");
}

std::vector<std::pair<std::string, Body>> family_bodies(const std::string& family,
                                                        int n, int samples,
                                                        std::uint64_t seed) {
  std::vector<std::pair<std::string, Body>> out;
  const std::string stem = family + "/n=" + std::to_string(n);
  if (family == "ball") {
    out.emplace_back(stem, models::ball(n));
  } else if (family == "cube") {
    out.emplace_back(stem, models::cube(n));
  } else if (family == "cross") {
    out.emplace_back(stem, models::cross_polytope(n));
  } else if (family == "simplex") {
    out.emplace_back(stem, models::regular_simplex(n).body);
  } else if (family == "random") {
    for (int i = 0; i < samples; ++i) {
      const std::uint64_t s =
          derive_seed(seed, (static_cast<std::uint64_t>(n) << 32) ^
                                static_cast<std::uint64_t>(i));
      Body K = models::random_polytope(n, 3 * n + 6, models::PointMode::gaussian, s);
      out.emplace_back(stem + "/i=" + std::to_string(i),
                       translate(K, -barycentre(K)));
    }
  } else {
    throw PreconditionError("sweep: unknown family '" + family + "'");
  }
  return out;
}

std::uint64_t cell_stream(int n, int l, int i, int role) {
  return (static_cast<std::uint64_t>(role) << 48) ^
         (static_cast<std::uint64_t>(n) << 32) ^
         (static_cast<std::uint64_t>(l) << 16) ^ static_cast<std::uint64_t>(i);
}

bool worse_than(const InequalityRecord& a, const InequalityRecord& b,
                bool lower_bound) {
  if (a.constant_free) {
    if (a.pass != b.pass) return !a.pass;
    return lower_bound ? a.ratio < b.ratio : a.ratio > b.ratio;
  }
  return a.implied_constant > b.implied_constant;
}

}  // namespace

std::vector<InequalityRecord> sweep(const SweepRequest& req) {
  require(req.n_lo >= 1 && req.n_lo <= req.n_hi, "sweep: bad dimension range");
  require(req.samples >= 1, "sweep: need at least one sample per cell");
  require(req.l_lo >= 1, "sweep: bad subspace dimension range");
  const CheckInfo info = classify(req.inequality);

  std::vector<InequalityRecord> out;
  for (int n = req.n_lo; n <= req.n_hi; ++n) {
    const auto bodies = family_bodies(req.family, n, req.samples, req.seed);
    const bool multi_body = bodies.size() > 1;

    const auto report_skip = [&](const std::string& id, int l, const Error& e) {
      std::cerr << "sweep: " << req.inequality << " on " << id;
      if (l > 0) std::cerr << " l=" << l;
      std::cerr << " skipped: " << e.what() << "\n";
    };

    if (info.shape != CheckShape::subspace) {
      std::optional<InequalityRecord> worst;
      const int rounds = multi_body ? 1 : req.samples;
      for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
        const auto& [id, K] = bodies[bi];
        for (int j = 0; j < rounds; ++j) {
          const int draw = multi_body ? static_cast<int>(bi) : j;
          try {
            InequalityRecord r;
            if (info.shape == CheckShape::direction) {
              Rng rng(derive_seed(req.seed, cell_stream(n, 0, draw, 2)));
              r = check_meyer_pajor(
                  K, separating_hyperplane(K, rng.sphere_vector(n), 0.0));
            } else if (req.inequality == "blaschke-santalo") {
              r = check_blaschke_santalo(K);
            } else if (req.inequality == "rogers-shephard") {
              r = check_rogers_shephard(K);
            } else if (req.inequality == "sym-hull") {
              r = check_sym_hull(K);
            } else {
              r = check_milman_pajor(K);
            }
            r.body_id = id;
            if (!worst || worse_than(r, *worst, info.lower_bound)) worst = r;
          } catch (const Error& e) {
            report_skip(id, 0, e);
          }
        }
      }
      if (worst) out.push_back(*worst);
      continue;
    }

    const int l_cap = req.inequality == "stephen-zhang" || req.inequality == "msz"
                          ? n
                          : n - 1;
    const int l_hi = req.l_hi == 0 ? n - 1 : std::min(req.l_hi, l_cap);
    for (int l = req.l_lo; l <= l_hi; ++l) {
      if ((req.inequality == "fradelizi" || req.inequality == "rudelson") &&
          n - l > 3) {
        std::cerr << "sweep: " << req.inequality << " n=" << n << " l=" << l
                  << " skipped: offset grid dimension capped at 3\n";
        continue;
      }
      std::optional<InequalityRecord> worst;
      for (int i = 0; i < req.samples; ++i) {
        const auto& [id, K] = bodies[multi_body ? i % bodies.size() : 0];
        const std::uint64_t fseed = derive_seed(req.seed, cell_stream(n, l, i, 1));
        const sub::Subspace F = sub::random_subspace(n, l, fseed);
        try {
          InequalityRecord r;
          if (req.inequality == "bs-projection") {
            r = check_bs_projection(K, F, PositionTag::centred);
          } else if (req.inequality == "fradelizi") {
            r = check_fradelizi(K, F);
          } else if (req.inequality == "rudelson") {
            r = check_rudelson(K, F);
          } else if (req.inequality == "rs-spingarn") {
            r = check_rs_spingarn(K, F);
          } else if (req.inequality == "projection-comparison") {
            r = check_projection_comparison(K, F, PositionTag::centred);
          } else {
            Rng rng(derive_seed(req.seed, cell_stream(n, l, i, 2)));
            auto pair = check_halfspace_sections(K, F, rng.sphere_vector(l));
            r = req.inequality == "msz" ? pair.second : pair.first;
          }
          r.body_id = id;
          r.subspace_seed = fseed;
          if (!worst || worse_than(r, *worst, info.lower_bound)) worst = r;
        } catch (const Error& e) {
          report_skip(id, l, e);
        }
      }
      if (worst) out.push_back(*worst);
    }
  }
  return out;
}

}  // namespace covgeom::ineq
