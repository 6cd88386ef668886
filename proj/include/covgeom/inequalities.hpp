#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covgeom/body.hpp"
#include "covgeom/subspace.hpp"

namespace covgeom::ineq {

/// One evaluated inequality instance. `ratio` is always lhs / rhs.
/// Constant-free inequalities carry a pass flag; inequalities stated with an
/// unspecified absolute constant carry the implied constant instead and are
/// never failed. `direction` holds the halfspace or hyperplane normal when
/// one is involved (ambient coordinates), `lambda` the separating fraction.
struct InequalityRecord {
  std::string name;
  std::string body_id;
  std::string position_tag;
  int n = 0;
  int l = 0;                        // 0 when no subspace is involved
  std::uint64_t subspace_seed = 0;  // 0 when the subspace was given explicitly
  Vector direction;                 // empty when unused
  double lambda = 0.0;              // separating fraction, 0 when unused
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool constant_free = false;
  bool pass = false;                // meaningful only when constant_free
  double implied_constant = 0.0;    // meaningful only when !constant_free
};

/// The affine hyperplane {x : <normal, x> = offset} with the measured volume
/// fraction of K on its positive side.
struct SeparatingHyperplane {
  Vector normal;        // unit length
  double offset = 0.0;
  double lambda = 0.0;  // |K cap {<normal,x> >= offset}| / |K|, in (0,1)
};

/// How the caller positioned K, for the checks whose bound depends on it.
enum class PositionTag { centred, santalo };

/// Volume fraction of K on {<normal, x> >= offset}. Exact clip for polytopes,
/// cap integral for ellipsoids.
double halfspace_fraction(const Body& K, const Vector& normal, double offset);

/// Measures the split and packages the hyperplane; throws PreconditionError
/// when the hyperplane misses the interior of K.
SeparatingHyperplane separating_hyperplane(const Body& K, const Vector& normal,
                                           double offset);

/// |K| |(K - s(K))^o| <= |B_2^n|^2; the Santalo point is located internally.
InequalityRecord check_blaschke_santalo(const Body& K);

/// |K - K| <= binom(2n, n) |K|, equality exactly on simplices.
InequalityRecord check_rogers_shephard(const Body& K);

/// |conv(K, -K)| <= 2^n |K|; requires 0 in K.
InequalityRecord check_sym_hull(const Body& K);

/// |K cap (-K)| >= 2^{-n} |K|; requires b(K) = 0.
InequalityRecord check_milman_pajor(const Body& K);

/// |K| |(K - z*)^o| <= |B_2^n|^2 / (4 lambda (1 - lambda)) with z* the
/// minimizer of the polar volume over int(K) cap H. Projected Newton on the
/// hyperplane for polytopes, closed form for ellipsoids; the optimality
/// characterization b((K - z*)^o) in H^perp is verified to 1e-5.
InequalityRecord check_meyer_pajor(const Body& K, const SeparatingHyperplane& H);

/// (|Proj_F(K)| |K^o cap F|)^{1/l} against (n/l) |B_2^l|^{2/l}. K must be
/// positioned (barycentre or Santalo point at the origin); the tag is
/// recorded with the implied constant.
InequalityRecord check_bs_projection(const Body& K, const sub::Subspace& F,
                                     PositionTag tag = PositionTag::centred);

/// max_y |K cap (y + F)| <= ((n+1)/(l+1))^l |K cap F|, the max taken over an
/// offset grid in F^perp (an inner approximation of the true max, so the
/// check is one-sided valid). Requires b(K) = 0 and n - l <= 3.
InequalityRecord check_fradelizi(const Body& K, const sub::Subspace& F,
                                 int grid_points = 21);

/// |(K - K) cap F|^{1/l} <= C min{sqrt(l), n/l} max_y |K cap (y + F)|^{1/l};
/// reports the implied constant C (grid max as in check_fradelizi).
InequalityRecord check_rudelson(const Body& K, const sub::Subspace& F,
                                int grid_points = 21);

/// |K| <= |Proj_F(K)| |K cap F^perp| <= binom(n, l) |K|; the lower bound
/// requires b(K) = 0.
InequalityRecord check_rs_spingarn(const Body& K, const sub::Subspace& F);

/// Centroid-halfspace fractions of the projection on F and the central
/// section by F, both bounded below by (l/(n+1))^l. Requires b(K) = 0;
/// xi may be given in F coordinates (size l) or as an ambient vector with a
/// component in F (size n). Returns the projection record ("stephen-zhang")
/// and the section record ("msz").
std::pair<InequalityRecord, InequalityRecord> check_halfspace_sections(
    const Body& K, const sub::Subspace& F, const Vector& xi);

/// |Proj_F(conv(K, -K))|^{1/l} <= C (n/l)^p [log^2(en/l)] |Proj_F(K cap -K)|^{1/l}
/// with p = 3 for Santalo positioning and p = 5 plus the squared log factor
/// for centred positioning; reports the implied constant C.
InequalityRecord check_projection_comparison(const Body& K,
                                             const sub::Subspace& F,
                                             PositionTag tag);

/// Worst-case hunt over a body family. Families: "ball", "cube", "cross",
/// "simplex", "random" (centred gaussian hulls, `samples` bodies per n).
/// Inequalities are named as in the records ("blaschke-santalo",
/// "rogers-shephard", "sym-hull", "milman-pajor", "meyer-pajor",
/// "bs-projection", "fradelizi", "rudelson", "rs-spingarn", "stephen-zhang",
/// "msz", "projection-comparison"). Subspace checks sample `samples`
/// subspaces per (n, l) cell; l_hi = 0 means l runs to n - 1.
struct SweepRequest {
  std::string family;
  std::string inequality;
  int n_lo = 2;
  int n_hi = 4;
  int l_lo = 1;
  int l_hi = 0;
  int samples = 10;
  std::uint64_t seed = 1;
};

/// One record per cell: the sample with the smallest margin (largest ratio
/// for upper bounds, smallest for lower bounds, largest implied constant
/// otherwise). Cells whose evaluation throws are skipped and logged to
/// stderr. Deterministic for a fixed request.
std::vector<InequalityRecord> sweep(const SweepRequest& req);

}  // namespace covgeom::ineq
