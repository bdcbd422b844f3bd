#pragma once

#include <span>
#include <string>

#include "helix/field.hpp"

namespace helix {

/// How rotated samples of a periodic plane are evaluated.
enum class Interp {
  kSpectralShear,  ///< three-shear factorization with spectral row shifts; default
  kBicubic,        ///< periodic Catmull-Rom, fourth order in the spacing
  kTrigonometric,  ///< exact trigonometric interpolant, O(N^2) per sample
};

const char* to_string(Interp interp);
Interp interp_from_string(const std::string& name);

/// out(y) = in(Rot(beta) y) for every node y of the plane, where
/// Rot(beta) is the counter-clockwise rotation. Requires nx == ny.
/// Quarter turns are exact index permutations.
void rotate_plane(const PlaneGrid& grid, std::span<const double> in, std::span<double> out,
                  double beta, Interp interp);

/// Periodic interpolation of a plane at an arbitrary point.
double sample_plane(const PlaneGrid& grid, std::span<const double> in, double x, double y,
                    Interp interp);

/// Shifts every row along x: out(x, y_j) = in(x + shift[j], y_j).
void shift_rows(const PlaneGrid& grid, std::span<const double> in, std::span<double> out,
                std::span<const double> shift);

/// Applies rotate_plane to every z plane of a physical field.
ScalarField rotate_planes(const ScalarField& f, double beta, Interp interp);

/// out(x, y, z) = f(x, y, z + theta), by spectral phase shift.
ScalarField shift_z(const ScalarField& f, double theta);

/// (v o S_theta)(x) = v(Rot(-theta) x_h, x3 + theta) componentwise, without
/// rotating the vector values.
VectorField3 compose_S_theta(const VectorField3& v, double theta, Interp interp);

}  // namespace helix
