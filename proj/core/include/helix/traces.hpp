#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "helix/helical.hpp"
#include "helix/reduction.hpp"

namespace helix {

/// Polynomial sum c_pq y1^p y2^q.
struct Poly2 {
  std::map<std::pair<int, int>, double> coeffs;

  [[nodiscard]] double operator()(double y1, double y2) const;
  [[nodiscard]] Poly2 d1() const;
  [[nodiscard]] Poly2 d2() const;
  [[nodiscard]] int degree() const;
};

/// Divergence-free planar velocity from the stream function
/// psi = P(y) exp(-|y|^2 / (2 sigma^2)): w_h = (d2 psi, -d1 psi), plus a
/// radial axial component w3 = Q(|y|^2) exp(-|y|^2 / (2 sigma^2)) where Q is
/// given by its coefficients in |y|^2. The lift of such a trace is divergence
/// free and its z spectrum is limited to |kz| <= deg P + 2.
TraceField2 stream_trace(const PlaneGrid& grid, const Poly2& psi_poly, double sigma,
                         const std::vector<double>& axial_radial = {});

/// psi = amplitude * y1 * exp(-|y|^2 / (2 sigma^2)), w3 = 0: a counter-rotating
/// vortex pair with zero helical swirl before the lift.
TraceField2 dipole_trace(const PlaneGrid& grid, double amplitude, double sigma);

/// Trace whose lift is divergence free with identically zero helical swirl.
/// With e_r, e_phi the polar frame, w_h = A(r) cos(phi) e_r - G(r) sin(phi) e_phi
/// and w3 = y1 w2 - y2 w1 = -G(r) y2, where G = (1 + b r^2) exp(-r^2 / (2 sigma^2))
/// and (r A)' = (1 + r^2) G. Zero swirl of the lift is w3 = y1 w2 - y2 w1, and
/// its divergence is div_y(M w_h) with M = I + r^2 e_phi e_phi^T, which this
/// choice annihilates. All components are entire and Gaussian-decaying, so
/// they carry no 1 / |xi|^2 factor. Scaled by amplitude.
TraceField2 zero_swirl_trace(const PlaneGrid& grid, double amplitude, double sigma);

/// (0, 0, amplitude * exp(-|y|^2 / (2 sigma^2))).
TraceField2 axial_jet_trace(const PlaneGrid& grid, double amplitude, double sigma);

/// value * exp(-|y|^2 / (2 sigma^2)); not divergence free in general.
TraceField2 windowed_constant_trace(const PlaneGrid& grid, const Vec3& value, double sigma);

/// Stream trace with seeded random coefficients, psi degree <= degree and a
/// random radial axial part. Deterministic in the seed.
TraceField2 random_trace(const PlaneGrid& grid, std::uint64_t seed, double sigma, int degree = 2);

}  // namespace helix
