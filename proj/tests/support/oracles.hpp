#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the transform layer: sums are evaluated directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "helix/field.hpp"

namespace oracle {

using helix::Grid3;
using helix::ScalarField;
using helix::VectorField3;

/// Direct O(N) evaluation of one normalized Fourier coefficient
///   c_m = (1/N) sum_j f_j exp(-2 pi i m . j / n).
inline std::complex<double> dft_coefficient(const ScalarField& f, int mx, int my, int mz) {
  const Grid3& g = f.grid();
  std::complex<double> s{};
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double ph = -2.0 * M_PI *
                          (static_cast<double>(mx) * i / g.nx + static_cast<double>(my) * j / g.ny +
                           static_cast<double>(mz) * k / g.nz);
        s += f.at(i, j, k) * std::polar(1.0, ph);
      }
    }
  }
  return s / static_cast<double>(g.size());
}

/// Uniform random samples in [-1, 1], deterministic in the seed.
inline ScalarField random_scalar(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

inline VectorField3 random_vector(const Grid3& g, std::uint64_t seed) {
  return {random_scalar(g, seed), random_scalar(g, seed + 1000003), random_scalar(g, seed + 2000003)};
}

/// Plain grid-sum L2 norm.
inline double l2(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.grid().cell_volume());
}

inline double l2(const VectorField3& v) {
  const double a = l2(v[0]), b = l2(v[1]), c = l2(v[2]);
  return std::sqrt(a * a + b * b + c * c);
}

inline double sup_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t n = 0; n < x.size(); ++n) m = std::max(m, std::abs(x[n] - y[n]));
  return m;
}

inline double sup_diff(const VectorField3& a, const VectorField3& b) {
  return std::max({sup_diff(a[0], b[0]), sup_diff(a[1], b[1]), sup_diff(a[2], b[2])});
}

inline double sup_abs(const ScalarField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

inline double sup_abs(const VectorField3& v) {
  return std::max({sup_abs(v[0]), sup_abs(v[1]), sup_abs(v[2])});
}

/// Difference of two fields by direct subtraction.
inline ScalarField minus(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = x[n] - y[n];
  return out;
}

inline VectorField3 minus(const VectorField3& a, const VectorField3& b) {
  return {minus(a[0], b[0]), minus(a[1], b[1]), minus(a[2], b[2])};
}

/// Gaussian radial window exp(-r^2 / (2 s^2)).
inline double window(double x, double y, double s) { return std::exp(-0.5 * (x * x + y * y) / (s * s)); }

}  // namespace oracle
