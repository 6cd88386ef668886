#pragma once

#include <cmath>
#include <cstdint>

#include "covgeom/defs.hpp"

namespace covgeom {

/// Deterministic random stream. Wraps a 64-bit generator with explicit
/// distributions so output is identical across standard library versions.
/// Every stochastic routine in the library takes a seed and builds one of
/// these; nothing ever reads the wall clock.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, m).
  std::uint64_t uniform_index(std::uint64_t m) { return next() % m; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
    }
    return m;
  }

  /// Uniform point on the unit sphere S^{n-1}.
  Vector sphere_vector(int n) {
    for (;;) {
      Vector v = gaussian_vector(n);
      const double norm = v.norm();
      if (norm > 1e-12) return v / norm;
    }
  }

  /// Uniform point in the unit ball B_2^n.
  Vector ball_vector(int n) {
    Vector v = sphere_vector(n);
    return v * std::pow(uniform(), 1.0 / n);
  }

  /// Raw 64-bit draw (splitmix64).
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stable seed derivation for sample blocks and sub-streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL + (stream << 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace covgeom
