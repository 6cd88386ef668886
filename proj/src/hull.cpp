#include "covgeom/hull.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "covgeom/rng.hpp"

namespace covgeom::hull {
namespace {

struct WorkFacet {
  std::vector<int> vtx;    // dim point ids
  std::vector<int> neigh;  // neigh[i] shares the ridge opposite vtx[i]
  Vector normal;
  double offset = 0.0;
  bool alive = true;
};

// Unit normal of the hyperplane through dim points (columns of P), via the
// orthogonal complement of the edge span.
Vector hyperplane_normal(const Matrix& P) {
  const int d = static_cast<int>(P.rows());
  const int k = static_cast<int>(P.cols()) - 1;
  Matrix E(d, k);
  for (int j = 0; j < k; ++j) E.col(j) = P.col(j + 1) - P.col(0);
  Eigen::HouseholderQR<Matrix> qr(E);
  Matrix Q = qr.householderQ();
  return Q.col(d - 1);
}

double signed_det(const Matrix& pts, const std::vector<int>& ids, const Vector& o) {
  const int d = static_cast<int>(o.size());
  Matrix M(d, d);
  for (int j = 0; j < d; ++j) M.col(j) = pts.col(ids[j]) - o;
  return M.determinant();
}

// Recursive coordinate-wise grouping of near-identical vectors. Assumes the
// clusters are separated by much more than tol, which holds for facet
// hyperplanes of the bodies this library builds.
void group_by_coordinates(const std::vector<Vector>& keys, std::vector<int>& idx,
                          int coord, double tol, std::vector<std::vector<int>>& out) {
  if (idx.empty()) return;
  const int c = static_cast<int>(keys[idx[0]].size());
  if (coord == c) {
    out.push_back(idx);
    return;
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (keys[a][coord] != keys[b][coord]) return keys[a][coord] < keys[b][coord];
    return a < b;
  });
  std::vector<int> part;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!part.empty() && keys[idx[i]][coord] - keys[part.back()][coord] > tol) {
      group_by_coordinates(keys, part, coord + 1, tol, out);
      part.clear();
    }
    part.push_back(idx[i]);
  }
  group_by_coordinates(keys, part, coord + 1, tol, out);
}

Hull build_1d(const Matrix& points, const std::vector<int>& unique_ids) {
  Hull h;
  h.dim = 1;
  int imin = unique_ids[0], imax = unique_ids[0];
  for (int id : unique_ids) {
    if (points(0, id) < points(0, imin)) imin = id;
    if (points(0, id) > points(0, imax)) imax = id;
  }
  if (points(0, imax) - points(0, imin) <= 0)
    throw InvariantViolation("hull: degenerate input, affine rank 0 in dimension 1");
  h.simplices = {{imax}, {imin}};
  h.orient = {+1, -1};
  MergedFacet hi, lo;
  hi.normal = Vector::Constant(1, 1.0);
  hi.offset = points(0, imax);
  hi.vertex_ids = {imax};
  lo.normal = Vector::Constant(1, -1.0);
  lo.offset = -points(0, imin);
  lo.vertex_ids = {imin};
  h.facets = {hi, lo};
  h.vertices = {std::min(imin, imax), std::max(imin, imax)};
  h.interior = Vector::Constant(1, 0.5 * (points(0, imin) + points(0, imax)));
  return h;
}

}  // namespace

int affine_rank(const Matrix& points, double tol_sv) {
  const int m = static_cast<int>(points.cols());
  if (m <= 1) return 0;
  Matrix E(points.rows(), m - 1);
  for (int j = 1; j < m; ++j) E.col(j - 1) = points.col(j) - points.col(0);
  Eigen::JacobiSVD<Matrix> svd(E);
  const double scale = std::max(1.0, svd.singularValues()[0]);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > tol_sv * scale) ++r;
  }
  return r;
}

namespace {

// One attempt at the joggled beneath-beyond construction.  Returns false
// when the visibility thresholds produced a corrupt complex; the caller
// retries with a fresh joggle.
bool build_complex(const Matrix& points, const std::vector<int>& ids, int d,
                   double scale, double eta, std::uint64_t salt,
                   std::vector<WorkFacet>& facets, Matrix& jog) {
  const double eps_vis = 1e-13 * scale;
  const int m = static_cast<int>(points.cols());
  jog.setZero(d, m);
  for (int j : ids) {
    Rng r(derive_seed(0xC0FFEEULL + salt, static_cast<std::uint64_t>(j) + 1));
    for (int i = 0; i < d; ++i) jog(i, j) = points(i, j) + eta * r.gaussian();
  }

  // Initial simplex: greedily maximize distance to the current affine hull.
  std::vector<int> simplex{ids[0]};
  {
    Matrix E(d, 0);
    while (static_cast<int>(simplex.size()) < d + 1) {
      Eigen::HouseholderQR<Matrix> qr;
      if (E.cols() > 0) qr.compute(E);
      int best = -1;
      double best_dist = -1.0;
      for (int j : ids) {
        if (std::find(simplex.begin(), simplex.end(), j) != simplex.end()) continue;
        Vector w = jog.col(j) - jog.col(simplex[0]);
        Vector res = w;
        if (E.cols() > 0) res = w - E * qr.solve(w);
        if (res.norm() > best_dist) {
          best_dist = res.norm();
          best = j;
        }
      }
      if (best < 0 || best_dist <= 1e-9 * scale)
        throw InvariantViolation("hull: degenerate input, affine rank " +
                                 std::to_string(affine_rank(points)) + " < " +
                                 std::to_string(d));
      simplex.push_back(best);
      E.conservativeResize(d, E.cols() + 1);
      E.col(E.cols() - 1) = jog.col(best) - jog.col(simplex[0]);
    }
  }

  Vector centre = Vector::Zero(d);
  for (int j : simplex) centre += jog.col(j);
  centre /= static_cast<double>(d + 1);

  facets.clear();
  facets.reserve(256);
  for (int skip = 0; skip <= d; ++skip) {
    WorkFacet f;
    for (int i = 0; i <= d; ++i) {
      if (i != skip) f.vtx.push_back(simplex[i]);
    }
    Matrix P(d, d);
    for (int j = 0; j < d; ++j) P.col(j) = jog.col(f.vtx[j]);
    f.normal = hyperplane_normal(P);
    f.offset = f.normal.dot(P.col(0));
    if (f.normal.dot(centre) > f.offset) {
      f.normal = -f.normal;
      f.offset = -f.offset;
    }
    f.neigh.assign(d, -1);
    facets.push_back(f);
  }
  // Neighbor wiring for the initial simplex: the facet omitting vertex i and
  // the one omitting vertex j share the ridge omitting both.
  for (int a = 0; a <= d; ++a) {
    for (int b = 0; b <= d; ++b) {
      if (a == b) continue;
      // in facet a, the slot holding simplex[b] is opposite ridge shared with facet b
      int slot = 0;
      for (int i = 0; i < d; ++i) {
        if (facets[a].vtx[i] == simplex[b]) slot = i;
      }
      facets[a].neigh[slot] = b;
    }
  }

  auto dist = [&](const WorkFacet& f, int j) {
    return f.normal.dot(jog.col(j)) - f.offset;
  };

  // Outside sets: each unprocessed point is attached to one facet it lies
  // beyond.  Points beyond nothing are interior and dropped.
  std::vector<std::vector<int>> outside(facets.size());
  for (int q : ids) {
    if (std::find(simplex.begin(), simplex.end(), q) != simplex.end()) continue;
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
      if (facets[fi].alive && dist(facets[fi], q) > eps_vis) {
        outside[fi].push_back(q);
        break;
      }
    }
  }

  for (;;) {
    // Insert the furthest outside point of some facet; starting from its own
    // host facet keeps the visible region connected.
    int seed = -1;
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
      if (facets[fi].alive && !outside[fi].empty()) {
        seed = static_cast<int>(fi);
        break;
      }
    }
    if (seed < 0) break;
    int q = outside[seed][0];
    for (int p : outside[seed]) {
      if (dist(facets[seed], p) > dist(facets[seed], q)) q = p;
    }

    // Visible region via BFS over the facet adjacency graph.
    std::vector<int> stack{seed}, visible;
    std::vector<char> seen(facets.size(), 0);
    seen[seed] = 1;
    while (!stack.empty()) {
      int fi = stack.back();
      stack.pop_back();
      visible.push_back(fi);
      for (int g : facets[fi].neigh) {
        if (g >= 0 && !seen[g] && facets[g].alive && dist(facets[g], q) > eps_vis) {
          seen[g] = 1;
          stack.push_back(g);
        }
      }
    }
    std::sort(visible.begin(), visible.end());

    struct RidgeInfo {
      std::vector<int> ridge;
      int base;  // surviving facet across the ridge
    };
    std::vector<RidgeInfo> horizon;
    for (;;) {
      horizon.clear();
      for (int fi : visible) {
        for (int i = 0; i < d; ++i) {
          const int g = facets[fi].neigh[i];
          const bool g_visible = g >= 0 && seen[g];
          if (g_visible) continue;
          RidgeInfo r;
          for (int k = 0; k < d; ++k) {
            if (k != i) r.ridge.push_back(facets[fi].vtx[k]);
          }
          r.base = g;
          horizon.push_back(r);
        }
      }
      // The horizon of an exact visible region is embedded: every ridge
      // vertex set appears once and every sub-ridge vertex set exactly
      // twice.  A ridge seen twice means a near-coplanar facet fell on the
      // invisible side of the threshold and pinched the region; absorbing
      // that facet heals it.  Deeper pinches abort the attempt and the
      // caller re-joggles.
      std::map<std::vector<int>, int> ridge_count;
      std::map<std::vector<int>, int> subridge_count;
      for (const RidgeInfo& r : horizon) {
        std::vector<int> key = r.ridge;
        std::sort(key.begin(), key.end());
        ++ridge_count[key];
        for (std::size_t i = 0; i < key.size(); ++i) {
          std::vector<int> sub;
          for (std::size_t k = 0; k < key.size(); ++k) {
            if (k != i) sub.push_back(key[k]);
          }
          ++subridge_count[sub];
        }
      }
      bool grew = false;
      for (const RidgeInfo& r : horizon) {
        std::vector<int> key = r.ridge;
        std::sort(key.begin(), key.end());
        if (ridge_count[key] > 1 && !seen[r.base]) {
          seen[r.base] = 1;
          visible.push_back(r.base);
          grew = true;
        }
      }
      if (!grew) {
        for (const auto& [sub, count] : subridge_count) {
          if (count != 2) return false;
        }
        break;
      }
      std::sort(visible.begin(), visible.end());
    }
    if (horizon.empty()) return false;

    std::vector<int> orphans;
    for (int fi : visible) {
      facets[fi].alive = false;
      orphans.insert(orphans.end(), outside[fi].begin(), outside[fi].end());
      outside[fi].clear();
    }

    // New cone of facets on the horizon; match sibling ridges through a map.
    const int first_new = static_cast<int>(facets.size());
    std::map<std::vector<int>, std::pair<int, int>> open_ridges;
    for (const RidgeInfo& r : horizon) {
      WorkFacet f;
      f.vtx = r.ridge;
      f.vtx.push_back(q);
      Matrix P(d, d);
      for (int j = 0; j < d; ++j) P.col(j) = jog.col(f.vtx[j]);
      f.normal = hyperplane_normal(P);
      f.offset = f.normal.dot(P.col(0));
      if (f.normal.dot(centre) > f.offset) {
        f.normal = -f.normal;
        f.offset = -f.offset;
      }
      f.neigh.assign(d, -1);
      const int id = static_cast<int>(facets.size());
      f.neigh[d - 1] = r.base;  // slot opposite q
      {
        // In the base facet, the slot for this ridge is the one opposite its
        // single vertex that the ridge does not contain.
        for (int i = 0; i < d; ++i) {
          const int v = facets[r.base].vtx[i];
          if (std::find(r.ridge.begin(), r.ridge.end(), v) == r.ridge.end()) {
            facets[r.base].neigh[i] = id;
            break;
          }
        }
      }
      for (int i = 0; i < d - 1; ++i) {
        std::vector<int> key;
        for (int k = 0; k < d - 1; ++k) {
          if (k != i) key.push_back(f.vtx[k]);
        }
        std::sort(key.begin(), key.end());
        auto it = open_ridges.find(key);
        if (it == open_ridges.end()) {
          open_ridges[key] = {id, i};
        } else {
          f.neigh[i] = it->second.first;
          facets[it->second.first].neigh[it->second.second] = id;
          open_ridges.erase(it);
        }
      }
      facets.push_back(std::move(f));
    }

    outside.resize(facets.size());
    for (int p : orphans) {
      if (p == q) continue;
      for (int fi = first_new; fi < static_cast<int>(facets.size()); ++fi) {
        if (dist(facets[fi], p) > eps_vis) {
          outside[fi].push_back(p);
          break;
        }
      }
    }

  }

  // Validate: the alive complex must be a closed pseudomanifold supporting
  // every input point.  Either property can fail when visibility thresholds
  // misclassified a near-coplanar pair; the caller then re-joggles.
  std::map<std::vector<int>, int> ridge_mult;
  for (const WorkFacet& f : facets) {
    if (!f.alive) continue;
    for (std::size_t i = 0; i < f.vtx.size(); ++i) {
      std::vector<int> r;
      for (std::size_t k = 0; k < f.vtx.size(); ++k) {
        if (k != i) r.push_back(f.vtx[k]);
      }
      std::sort(r.begin(), r.end());
      ++ridge_mult[r];
    }
  }
  for (const auto& [r, c] : ridge_mult) {
    if (c != 2) return false;
  }
  for (const WorkFacet& f : facets) {
    if (!f.alive) continue;
    for (int j : ids) {
      if (dist(f, j) > 4.0 * eps_vis) return false;
    }
  }
  return true;
}

}  // namespace

Hull build(const Matrix& points, const Tolerances& tol) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1 || m < 1) throw PreconditionError("hull: empty input");

  double scale = 1.0;
  for (int j = 0; j < m; ++j) scale = std::max(scale, points.col(j).lpNorm<Eigen::Infinity>());

  // Deduplicate, keeping the first occurrence.
  std::vector<int> ids;
  for (int j = 0; j < m; ++j) {
    bool dup = false;
    for (int k : ids) {
      if ((points.col(j) - points.col(k)).norm() <= tol.dedup) {
        dup = true;
        break;
      }
    }
    if (!dup) ids.push_back(j);
  }

  if (d == 1) return build_1d(points, ids);

  if (static_cast<int>(ids.size()) < d + 1)
    throw InvariantViolation("hull: fewer than dim+1 distinct points");

  // Joggled beneath-beyond construction, retried with a fresh joggle until
  // the complex validates; the post-pass below restores exact hyperplanes.
  std::vector<WorkFacet> facets;
  Matrix jog;
  bool ok = false;
  for (int attempt = 0; attempt < 12 && !ok; ++attempt) {
    const double eta = std::min(1e-10 * std::pow(4.0, attempt), 2e-8) * scale;
    ok = build_complex(points, ids, d, scale, eta,
                       static_cast<std::uint64_t>(attempt), facets, jog);
  }
  if (!ok) throw ConvergenceError("hull: joggled construction failed to validate");

  // Assemble the result on original coordinates.
  Hull h;
  h.dim = d;
  std::vector<int> alive;
  for (std::size_t fi = 0; fi < facets.size(); ++fi) {
    if (facets[fi].alive) alive.push_back(static_cast<int>(fi));
  }

  Vector jog_centre = Vector::Zero(d);
  {
    std::vector<char> used(m, 0);
    int count = 0;
    for (int fi : alive) {
      for (int v : facets[fi].vtx) {
        if (!used[v]) {
          used[v] = 1;
          jog_centre += jog.col(v);
          ++count;
        }
      }
    }
    jog_centre /= static_cast<double>(count);
  }

  for (int fi : alive) {
    const WorkFacet& f = facets[fi];
    h.simplices.push_back(f.vtx);
    h.orient.push_back(signed_det(jog, f.vtx, jog_centre) >= 0 ? +1 : -1);
  }

  // Group simplicial facets by joggled hyperplane, then refit each group's
  // supporting hyperplane on the original coordinates.
  std::vector<Vector> keys;
  keys.reserve(alive.size());
  for (int fi : alive) {
    Vector k(d + 1);
    k.head(d) = facets[fi].normal;
    k[d] = facets[fi].offset / scale;
    keys.push_back(k);
  }
  std::vector<int> all_idx(alive.size());
  std::iota(all_idx.begin(), all_idx.end(), 0);
  std::vector<std::vector<int>> groups;
  group_by_coordinates(keys, all_idx, 0, 1e-7, groups);

  const double tol_on = std::max(tol.on_hyperplane, 1e-12 * scale);
  std::vector<MergedFacet> raw;
  for (const auto& g : groups) {
    std::vector<int> pts_on;
    for (int k : g) {
      for (int v : facets[alive[k]].vtx) pts_on.push_back(v);
    }
    std::sort(pts_on.begin(), pts_on.end());
    pts_on.erase(std::unique(pts_on.begin(), pts_on.end()), pts_on.end());
    Matrix P(d, pts_on.size());
    for (std::size_t j = 0; j < pts_on.size(); ++j) P.col(j) = points.col(pts_on[j]);
    Vector mean = P.rowwise().mean();
    Matrix C = P.colwise() - mean;
    Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullU);
    Vector normal = svd.matrixU().col(d - 1);
    if (normal.dot(facets[alive[g[0]]].normal) < 0) normal = -normal;
    MergedFacet mf;
    mf.normal = normal;
    mf.offset = -std::numeric_limits<double>::infinity();
    for (int j : ids) mf.offset = std::max(mf.offset, normal.dot(points.col(j)));
    raw.push_back(std::move(mf));
  }

  // Merge groups that refit to the same hyperplane, then keep true facets only.
  std::vector<Vector> fkeys;
  for (const MergedFacet& mf : raw) {
    Vector k(d + 1);
    k.head(d) = mf.normal;
    k[d] = mf.offset / scale;
    fkeys.push_back(k);
  }
  std::vector<int> fidx(raw.size());
  std::iota(fidx.begin(), fidx.end(), 0);
  std::vector<std::vector<int>> fgroups;
  group_by_coordinates(fkeys, fidx, 0, 1e-7, fgroups);

  for (const auto& g : fgroups) {
    Vector normal = Vector::Zero(d);
    for (int k : g) normal += raw[k].normal;
    normal.normalize();
    double offset = -std::numeric_limits<double>::infinity();
    for (int j : ids) offset = std::max(offset, normal.dot(points.col(j)));
    MergedFacet mf;
    mf.normal = normal;
    mf.offset = offset;
    for (int j : ids) {
      if (offset - normal.dot(points.col(j)) <= tol_on) mf.vertex_ids.push_back(j);
    }
    if (static_cast<int>(mf.vertex_ids.size()) < d) continue;
    Matrix P(d, mf.vertex_ids.size());
    for (std::size_t j = 0; j < mf.vertex_ids.size(); ++j)
      P.col(j) = points.col(mf.vertex_ids[j]);
    if (affine_rank(P, 1e-7) < d - 1) continue;  // supporting plane, not a facet
    h.facets.push_back(std::move(mf));
  }
  if (h.facets.empty()) throw InvariantViolation("hull: no facets survived refit");

  // Extreme points: full-dimensional normal cone among true facets.
  std::vector<int> candidates;
  {
    std::vector<char> used(m, 0);
    for (const MergedFacet& mf : h.facets) {
      for (int v : mf.vertex_ids) {
        if (!used[v]) {
          used[v] = 1;
          candidates.push_back(v);
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (int v : candidates) {
    Matrix N(d, 0);
    for (const MergedFacet& mf : h.facets) {
      if (mf.offset - mf.normal.dot(points.col(v)) <= tol_on) {
        N.conservativeResize(d, N.cols() + 1);
        N.col(N.cols() - 1) = mf.normal;
      }
    }
    if (N.cols() >= d) {
      Eigen::ColPivHouseholderQR<Matrix> qr(N);
      qr.setThreshold(1e-9);
      if (qr.rank() == d) h.vertices.push_back(v);
    }
  }
  if (static_cast<int>(h.vertices.size()) < d + 1)
    throw InvariantViolation("hull: fewer than dim+1 extreme points after refit");

  // Restrict facet vertex lists to extreme points.
  for (MergedFacet& mf : h.facets) {
    std::vector<int> kept;
    for (int v : mf.vertex_ids) {
      if (std::binary_search(h.vertices.begin(), h.vertices.end(), v)) kept.push_back(v);
    }
    mf.vertex_ids = std::move(kept);
  }

  h.interior = Vector::Zero(d);
  for (int v : h.vertices) h.interior += points.col(v);
  h.interior /= static_cast<double>(h.vertices.size());
  return h;
}

double volume(const Matrix& points, const Hull& h) {
  if (h.dim == 1) {
    double v = 0.0;
    for (std::size_t k = 0; k < h.simplices.size(); ++k)
      v += h.orient[k] * points(0, h.simplices[k][0]);
    return v;
  }
  const Vector& o = h.interior;
  double vol = 0.0;
  double dfact = std::tgamma(h.dim + 1.0);
  for (std::size_t k = 0; k < h.simplices.size(); ++k) {
    Matrix M(h.dim, h.dim);
    for (int j = 0; j < h.dim; ++j) M.col(j) = points.col(h.simplices[k][j]) - o;
    vol += h.orient[k] * M.determinant() / dfact;
  }
  return vol;
}

BodyMoments moments(const Matrix& points, const Hull& h) {
  const int d = h.dim;
  BodyMoments out;
  out.barycentre = Vector::Zero(d);
  out.second_moment = Matrix::Zero(d, d);
  const Vector o = (d == 1) ? Vector::Zero(1) : h.interior;
  const double dfact = std::tgamma(d + 1.0);
  double vol = 0.0;
  Vector first = Vector::Zero(d);
  Matrix second = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < h.simplices.size(); ++k) {
    Matrix M(d, d);
    for (int j = 0; j < d; ++j) M.col(j) = points.col(h.simplices[k][j]) - o;
    const double sv = h.orient[k] * M.determinant() / dfact;
    vol += sv;
    // Moments of the cone simplex with vertex set {o, v_1..v_d}.
    Vector sum = o;
    Matrix sq = o * o.transpose();
    for (int j = 0; j < d; ++j) {
      const Vector& v = points.col(h.simplices[k][j]);
      sum += v;
      sq += v * v.transpose();
    }
    first += sv * sum / (d + 1.0);
    second += sv / ((d + 1.0) * (d + 2.0)) * (sq + sum * sum.transpose());
  }
  if (vol <= 0.0) throw InvariantViolation("moments: nonpositive volume");
  out.volume = vol;
  out.barycentre = first / vol;
  out.second_moment = second;
  return out;
}

double distance_to_hull(const Vector& q, const Matrix& X) {
  const int m = static_cast<int>(X.cols());
  if (m == 0) throw PreconditionError("distance_to_hull: empty point set");
  Matrix Y = X.colwise() - q;
  double scale = 1.0;
  for (int j = 0; j < m; ++j) scale = std::max(scale, Y.col(j).norm());

  int start = 0;
  for (int j = 1; j < m; ++j) {
    if (Y.col(j).norm() < Y.col(start).norm()) start = j;
  }
  std::vector<int> S{start};
  std::vector<double> w{1.0};
  Vector p = Y.col(start);

  const double eps_inside = 1e-14 * scale;
  const double eps_gap = 1e-13 * scale * scale;

  for (int iter = 0; iter < 1000; ++iter) {
    if (p.norm() <= eps_inside) return 0.0;
    int jmin = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double v = p.dot(Y.col(j));
      if (v < dmin) {
        dmin = v;
        jmin = j;
      }
    }
    if (dmin >= p.squaredNorm() - eps_gap) break;
    if (std::find(S.begin(), S.end(), jmin) != S.end()) break;
    S.push_back(jmin);
    w.push_back(0.0);

    // Minor cycle: pull the weights to the affine minimizer over S.
    for (;;) {
      const int k = static_cast<int>(S.size());
      Matrix Ys(Y.rows(), k);
      for (int i = 0; i < k; ++i) Ys.col(i) = Y.col(S[i]);
      // Affine min-norm: v = v0 + N z with 1.v = 1.
      Vector v = Vector::Zero(k);
      if (k == 1) {
        v[0] = 1.0;
      } else {
        Matrix N = Matrix::Zero(k, k - 1);
        for (int i = 0; i < k - 1; ++i) {
          N(0, i) = -1.0;
          N(i + 1, i) = 1.0;
        }
        Vector v0 = Vector::Zero(k);
        v0[0] = 1.0;
        Vector z = (Ys * N).colPivHouseholderQr().solve(-Ys * v0);
        v = v0 + N * z;
      }
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        if (v[i] <= 1e-12) ok = false;
      }
      if (ok) {
        w.assign(v.data(), v.data() + k);
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < k; ++i) {
        if (v[i] <= 1e-12 && w[i] - v[i] > 1e-300)
          theta = std::min(theta, w[i] / (w[i] - v[i]));
      }
      std::vector<int> keepS;
      std::vector<double> keepW;
      for (int i = 0; i < k; ++i) {
        const double wi = (1.0 - theta) * w[i] + theta * v[i];
        if (wi > 1e-12) {
          keepS.push_back(S[i]);
          keepW.push_back(wi);
        }
      }
      if (keepS.empty()) {
        keepS.push_back(S[0]);
        keepW.push_back(1.0);
      }
      S = std::move(keepS);
      w = std::move(keepW);
      if (static_cast<int>(S.size()) == 1) break;
    }
    p = Vector::Zero(Y.rows());
    for (std::size_t i = 0; i < S.size(); ++i) p += w[i] * Y.col(S[i]);
  }
  return p.norm();
}

}  // namespace covgeom::hull
