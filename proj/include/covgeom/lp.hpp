#pragma once

#include <optional>

#include "covgeom/defs.hpp"

namespace covgeom::lp {

enum class Status { optimal, unbounded, infeasible };

struct Result {
  Status status = Status::infeasible;
  double objective = 0.0;
  Vector x;  // empty unless status == optimal
};

/// maximize c.x subject to A x <= b, x free.
/// Dense two-phase simplex, Bland's smallest-index rule, hence deterministic
/// and cycle-free. Intended for the small instances this library produces
/// (tens of variables, at most a few thousand constraints).
Result solve_max(const Vector& c, const Matrix& A, const Vector& b);

/// minimize c.z subject to D z = d, z >= 0.
Result solve_standard_min(const Vector& c, const Matrix& D, const Vector& d);

/// Chebyshev centre of {x : A x <= b}: interior point maximizing the distance
/// r to all bounding hyperplanes. Returns centre and r; status unbounded means
/// the radius grows without bound, infeasible means the set is empty.
struct Chebyshev {
  Status status;
  Vector centre;
  double radius = 0.0;
};
Chebyshev chebyshev_centre(const Matrix& A, const Vector& b);

}  // namespace covgeom::lp
