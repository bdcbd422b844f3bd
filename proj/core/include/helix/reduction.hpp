#pragma once

#include <array>
#include <filesystem>
#include <utility>
#include <vector>

#include "helix/field.hpp"
#include "helix/rotation.hpp"

namespace helix {

/// Planar representative (w1, w2, w3) of a helical field, sampled on the
/// horizontal slice of a Grid3. Storage is row-major with y1 fastest.
struct TraceField2 {
  PlaneGrid grid;
  std::array<std::vector<double>, 3> w;

  static TraceField2 zeros(const PlaneGrid& grid);

  template <class F>
  static TraceField2 from_function(const PlaneGrid& grid, F&& f) {
    TraceField2 out = zeros(grid);
    for (int j = 0; j < grid.ny; ++j) {
      for (int i = 0; i < grid.nx; ++i) {
        const auto v = f(grid.x(i), grid.y(j));
        const auto n = grid.index(i, j);
        out.w[0][n] = v[0];
        out.w[1][n] = v[1];
        out.w[2][n] = v[2];
      }
    }
    return out;
  }

  [[nodiscard]] double max_abs() const;
  [[nodiscard]] double l2_norm() const;
  [[nodiscard]] double lp_norm(double p) const;
};

TraceField2 operator-(const TraceField2& a, const TraceField2& b);
TraceField2 operator+(const TraceField2& a, const TraceField2& b);
TraceField2 operator*(double s, const TraceField2& a);

struct LiftOptions {
  Interp interp = Interp::kSpectralShear;
  double support_radius_fraction = 0.35;  ///< of the box side
  double support_tolerance = 1e-6;        ///< relative to max |w|
  bool check_support = true;
};

/// Largest |w| outside radius fraction * L divided by max |w| (0 for w = 0).
double support_leakage(const TraceField2& w, double radius_fraction = 0.35);

/// u(x) = R_{x3} w(Rot(x3) x_h), plane by plane. Throws SupportViolation when
/// the trace is not negligible outside the support radius, GridMismatch when
/// the trace plane does not match the grid.
VectorField3 lift(const TraceField2& w, const Grid3& grid, const LiftOptions& opts = {});

struct TraceReport {
  /// ||trace at x3 - trace at x3 + pi/2|| / ||trace at x3||; zero for exactly
  /// helical input up to interpolation error.
  double slice_defect = 0.0;
};

/// w(y) = R_{x3}^{-1} u(Rot(-x3) y, x3). Off-grid x3 is reached by a spectral
/// z shift. Grid planes are read directly.
TraceField2 trace(const VectorField3& u, double x3, Interp interp = Interp::kSpectralShear);
TraceField2 trace(const VectorField3& u, double x3, Interp interp, TraceReport& report);

/// (||w||_{L^p(plane)}, (2 pi)^{-1/p} ||u||_{L^p(box)}).
std::pair<double, double> norm_correspondence(const TraceField2& w, const VectorField3& u,
                                              double p = 2.0);

struct GradientCorrespondence {
  double grad_trace = 0.0;  ///< ||grad_y w||_{L^2(plane)}
  double grad_field = 0.0;  ///< ||grad u||_{L^2(box)}
  double ratio = 0.0;       ///< grad_trace / grad_field
};

GradientCorrespondence gradient_correspondence(const TraceField2& w, const VectorField3& u);

/// Little-endian: u32 n1, u32 n2, f64 L, then w1, w2, w3 as f64 row-major.
void write_trace(const std::filesystem::path& path, const TraceField2& w);
TraceField2 read_trace(const std::filesystem::path& path);

}  // namespace helix
