#include "helix/traces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "helix/errors.hpp"

namespace helix {

double Poly2::operator()(double y1, double y2) const {
  double s = 0.0;
  for (const auto& [pq, c] : coeffs) s += c * std::pow(y1, pq.first) * std::pow(y2, pq.second);
  return s;
}

Poly2 Poly2::d1() const {
  Poly2 out;
  for (const auto& [pq, c] : coeffs) {
    if (pq.first > 0) out.coeffs[{pq.first - 1, pq.second}] += c * pq.first;
  }
  return out;
}

Poly2 Poly2::d2() const {
  Poly2 out;
  for (const auto& [pq, c] : coeffs) {
    if (pq.second > 0) out.coeffs[{pq.first, pq.second - 1}] += c * pq.second;
  }
  return out;
}

int Poly2::degree() const {
  int d = 0;
  for (const auto& [pq, c] : coeffs) {
    if (c != 0.0) d = std::max(d, pq.first + pq.second);
  }
  return d;
}

TraceField2 stream_trace(const PlaneGrid& grid, const Poly2& psi_poly, double sigma,
                         const std::vector<double>& axial_radial) {
  if (!(sigma > 0.0)) throw InvalidArgument("trace width must be positive");
  const Poly2 p1 = psi_poly.d1();
  const Poly2 p2 = psi_poly.d2();
  const double inv_s2 = 1.0 / (sigma * sigma);
  return TraceField2::from_function(grid, [&](double y1, double y2) -> Vec3 {
    const double r2 = y1 * y1 + y2 * y2;
    const double g = std::exp(-0.5 * r2 * inv_s2);
    const double p = psi_poly(y1, y2);
    // d_a (P G) = (d_a P - y_a P / sigma^2) G
    const double dpsi1 = (p1(y1, y2) - y1 * p * inv_s2) * g;
    const double dpsi2 = (p2(y1, y2) - y2 * p * inv_s2) * g;
    double q = 0.0;
    for (std::size_t n = axial_radial.size(); n-- > 0;) q = q * r2 + axial_radial[n];
    return {dpsi2, -dpsi1, q * g};
  });
}

TraceField2 dipole_trace(const PlaneGrid& grid, double amplitude, double sigma) {
  Poly2 p;
  p.coeffs[{1, 0}] = amplitude;
  return stream_trace(grid, p, sigma);
}

namespace {

// I_n(r) = int_0^r s^(2n) exp(-s^2 / (2 sigma^2)) ds, n = 0, 1, 2. The power
// series is used for r <= 2 sigma, where the closed form cancels badly.
std::array<double, 3> gaussian_moments(double r, double sigma) {
  const double s2 = sigma * sigma;
  std::array<double, 3> out{};
  if (r <= 2.0 * sigma) {
    for (int n = 0; n < 3; ++n) {
      double term = std::pow(r, 2 * n + 1);  // (-r^2 / (2 s2))^k / k! * r^(2n+1)
      double sum = 0.0;
      for (int k = 0; k < 200; ++k) {
        const double add = term / (2 * n + 2 * k + 1);
        sum += add;
        if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
        term *= -r * r / (2.0 * s2 * (k + 1));
      }
      out[static_cast<std::size_t>(n)] = sum;
    }
    return out;
  }
  const double e = std::exp(-0.5 * r * r / s2);
  out[0] = sigma * std::sqrt(0.5 * kPi) * std::erf(r / (sigma * std::sqrt(2.0)));
  out[1] = s2 * (out[0] - r * e);
  out[2] = s2 * (3.0 * out[1] - r * r * r * e);
  return out;
}

}  // namespace

TraceField2 zero_swirl_trace(const PlaneGrid& grid, double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("trace width must be positive");
  const double s2 = sigma * sigma;
  // G(r) = (a + b r^2) exp(-r^2 / (2 sigma^2)) with the (1 + r^2)-weighted
  // integral of G over (0, inf) equal to zero, so F below decays.
  const double a = 1.0;
  const double b = -a * (1.0 + s2) / (s2 * (1.0 + 3.0 * s2));
  const double h0 = a - 2.0 * b + a / s2;
  const double h1 = b * (1.0 + 1.0 / s2);
  return TraceField2::from_function(grid, [&](double y1, double y2) -> Vec3 {
    const double r2 = y1 * y1 + y2 * y2;
    const double r = std::sqrt(r2);
    const double g = (a + b * r2) * std::exp(-0.5 * r2 / s2);
    // radial amplitude A = F / r with F = int_0^r (1 + s^2) G ds, angular
    // amplitude B = -G, and (A + B) / r^2 = r^-3 int_0^r s^2 (G - G'/s) ds.
    double ar = a, apb = h0 / 3.0;
    if (r > 0.0) {
      const auto m = gaussian_moments(r, sigma);
      ar = (a * m[0] + (a + b) * m[1] + b * m[2]) / r;
      apb = (h0 * m[1] + h1 * m[2]) / (r2 * r);
    }
    const double w1 = ar - apb * y2 * y2;
    const double w2 = apb * y1 * y2;
    return {amplitude * w1, amplitude * w2, amplitude * (-g * y2)};
  });
}

TraceField2 axial_jet_trace(const PlaneGrid& grid, double amplitude, double sigma) {
  return stream_trace(grid, Poly2{}, sigma, {amplitude});
}

TraceField2 windowed_constant_trace(const PlaneGrid& grid, const Vec3& value, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("trace width must be positive");
  return TraceField2::from_function(grid, [&](double y1, double y2) -> Vec3 {
    const double g = std::exp(-0.5 * (y1 * y1 + y2 * y2) / (sigma * sigma));
    return {value[0] * g, value[1] * g, value[2] * g};
  });
}

TraceField2 random_trace(const PlaneGrid& grid, std::uint64_t seed, double sigma, int degree) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Poly2 p;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      // scale higher powers down so the fields stay O(1) over the support
      p.coeffs[{a, b}] = coef(rng) * std::pow(sigma, 1 - a - b);
    }
  }
  std::vector<double> axial = {coef(rng), coef(rng) / (sigma * sigma)};
  return stream_trace(grid, p, sigma, axial);
}

}  // namespace helix
