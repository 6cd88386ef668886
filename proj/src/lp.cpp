#include "covgeom/lp.hpp"

#include <limits>
#include <vector>

namespace covgeom::lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;

// Tableau simplex on min c.z, D z = d, z >= 0, d >= 0 assumed after row flips.
// Columns 0..N-1 are structural, N..N+m-1 artificial, last column is the rhs.
class Tableau {
 public:
  Tableau(const Vector& c, const Matrix& D, const Vector& d)
      : m_(static_cast<int>(D.rows())), n_(static_cast<int>(D.cols())) {
    T_.resize(m_, n_ + m_ + 1);
    T_.leftCols(n_) = D;
    T_.middleCols(n_, m_) = Matrix::Identity(m_, m_);
    T_.col(n_ + m_) = d;
    for (int i = 0; i < m_; ++i) {
      if (T_(i, n_ + m_) < 0.0) T_.row(i) = -T_.row(i);
    }
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    cost_ = c;
  }

  Status run(Vector* solution, double* objective) {
    // Phase I: minimize the artificial sum.
    Vector phase1 = Vector::Zero(n_ + m_);
    phase1.tail(m_).setOnes();
    if (!iterate(phase1, n_ + m_)) return Status::unbounded;  // cannot happen
    if (phase1_value() > 1e-8) return Status::infeasible;
    purge_artificials();

    Vector full = Vector::Zero(n_ + m_);
    full.head(n_) = cost_;
    if (!iterate(full, n_)) return Status::unbounded;

    Vector z = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) z[basis_[i]] = T_(i, n_ + m_);
    }
    *solution = z;
    *objective = cost_.dot(z);
    return Status::optimal;
  }

 private:
  double phase1_value() const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) v += T_(i, n_ + m_);
    }
    return v;
  }

  // Pivot basic artificials out, dropping redundant rows.
  void purge_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(T_(i, j)) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        T_.row(i).setZero();  // redundant constraint; row stays inert
        T_(i, basis_[i]) = 1.0;
      }
    }
  }

  // Bland's rule iterations; columns >= limit may not enter.
  bool iterate(const Vector& cost, int limit) {
    const long max_iter = 2000 + 200L * (m_ + n_);
    for (long it = 0; it < max_iter; ++it) {
      Vector y = cost;  // reduced costs via basis elimination
      for (int i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb != 0.0) y -= cb * T_.row(i).head(n_ + m_).transpose();
      }
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (y[j] < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a > kPivotEps) {
          const double ratio = T_(i, n_ + m_) / a;
          if (ratio < best - 1e-14 ||
              (ratio < best + 1e-14 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw ConvergenceError("lp: iteration limit exceeded");
  }

  void pivot(int row, int col) {
    T_.row(row) /= T_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = T_(i, col);
      if (f != 0.0) T_.row(i) -= f * T_.row(row);
    }
    basis_[row] = col;
  }

  int m_, n_;
  Matrix T_;
  std::vector<int> basis_;
  Vector cost_;
};

}  // namespace

Result solve_standard_min(const Vector& c, const Matrix& D, const Vector& d) {
  if (D.rows() != d.size() || D.cols() != c.size())
    throw PreconditionError("lp: inconsistent dimensions");
  Result r;
  if (D.rows() == 0) {
    r.status = Status::optimal;
    r.x = Vector::Zero(c.size());
    r.objective = 0.0;
    return r;
  }
  Tableau t(c, D, d);
  Vector z;
  double obj = 0.0;
  r.status = t.run(&z, &obj);
  if (r.status == Status::optimal) {
    r.x = z;
    r.objective = obj;
  }
  return r;
}

Result solve_max(const Vector& c, const Matrix& A, const Vector& b) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.rows());
  if (A.cols() != n || b.size() != m)
    throw PreconditionError("lp: inconsistent dimensions");

  // x = u - v with u, v >= 0 plus slack per row.
  Matrix D(m, 2 * n + m);
  D.leftCols(n) = A;
  D.middleCols(n, n) = -A;
  D.rightCols(m) = Matrix::Identity(m, m);
  Vector cs = Vector::Zero(2 * n + m);
  cs.head(n) = -c;  // minimize -c.x
  cs.segment(n, n) = c;

  Result inner = solve_standard_min(cs, D, b);
  Result r;
  r.status = inner.status;
  if (inner.status == Status::optimal) {
    r.x = inner.x.head(n) - inner.x.segment(n, n);
    r.objective = c.dot(r.x);
  }
  return r;
}

Chebyshev chebyshev_centre(const Matrix& A, const Vector& b) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  Matrix A2(m, n + 1);
  A2.leftCols(n) = A;
  for (int i = 0; i < m; ++i) A2(i, n) = A.row(i).norm();
  Vector c = Vector::Zero(n + 1);
  c[n] = 1.0;
  Result r = solve_max(c, A2, b);
  Chebyshev out;
  out.status = r.status;
  if (r.status == Status::optimal) {
    out.centre = r.x.head(n);
    out.radius = r.x[n];
  }
  return out;
}

}  // namespace covgeom::lp
