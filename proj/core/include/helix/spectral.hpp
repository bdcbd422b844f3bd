#pragma once

#include <optional>

#include "helix/field.hpp"

namespace helix {

enum class Direction { kForward, kInverse };

/// Physical <-> spectral. Throws InvalidArgument when the field's tag does not
/// match the direction.
ScalarField transform(const ScalarField& f, Direction dir);
VectorField3 transform(const VectorField3& v, Direction dir);

/// Convenience: returns the requested representation, transforming if needed.
ScalarField to_spectral(const ScalarField& f);
ScalarField to_physical(const ScalarField& f);
VectorField3 to_spectral(const VectorField3& v);
VectorField3 to_physical(const VectorField3& v);

/// Calls fn(i, j, k, index) for every stored spectral mode.
template <class Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
  const int nxh = g.nxh();
  std::size_t idx = 0;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < nxh; ++i, ++idx) fn(i, j, k, idx);
    }
  }
}

/// Weight of a half-spectrum column in sums over the full spectrum.
inline double mode_weight(const Grid3& g, int i) {
  return (i == 0 || i == g.nx / 2) ? 1.0 : 2.0;
}

/// Spectral derivative along axis 0 (x), 1 (y) or 2 (z). Output keeps the
/// input's representation. Nyquist modes are dropped.
ScalarField derivative(const ScalarField& f, int axis);
/// Spectral Laplacian using the full wavenumbers.
ScalarField laplacian(const ScalarField& f);
VectorField3 gradient(const ScalarField& f);
ScalarField divergence(const VectorField3& v);
VectorField3 curl(const VectorField3& v);

/// Orthogonal projection onto discretely divergence-free fields. Modes whose
/// derivative wavenumber vanishes (the mean and pure-Nyquist modes) pass
/// through unchanged.
VectorField3 leray_project(const VectorField3& v);

enum class DealiasShape {
  kBox,         ///< |m_a| <= (n_a - 1) / 3 on every axis
  kCylinder,    ///< horizontal disk of that radius times the z band
};

/// Zeroes modes outside the retained set. Requires spectral representation.
ScalarField dealias(const ScalarField& f, DealiasShape shape = DealiasShape::kBox);
VectorField3 dealias(const VectorField3& v, DealiasShape shape = DealiasShape::kBox);
void dealias_in_place(ScalarField& f, DealiasShape shape);
bool dealias_keeps(const Grid3& g, int i, int j, int k, DealiasShape shape);

/// Spectral interpolation onto another grid with the same box: modes held by
/// both grids (below both Nyquist indices) are copied, all others are zero.
/// Spectral in, spectral out.
ScalarField resample(const ScalarField& f, const Grid3& target);
VectorField3 resample(const VectorField3& v, const Grid3& target);

struct NormReport {
  double l2 = 0.0;
  double l4 = 0.0;
  double h1_seminorm = 0.0;
  double div_l2 = 0.0;
  double curl_l2 = 0.0;
  std::optional<double> local_l2;
};

/// Norms by uniform-grid quadrature; derivative norms via spectral sums.
NormReport norms(const VectorField3& v, std::optional<LocalBox> box = std::nullopt);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField3& v);
double l4_norm(const VectorField3& v);
double l4_norm(const ScalarField& f);
/// ||grad v||_2 with derivative wavenumbers (matches derivative()).
double h1_seminorm(const ScalarField& f);
double h1_seminorm(const VectorField3& v);
/// Discrete L2 inner product (grid sum times cell volume).
double inner_product(const VectorField3& a, const VectorField3& b);
/// L2 norm restricted to the horizontal box (all z).
double local_l2_norm(const VectorField3& v, const LocalBox& box);
/// L2 norm from spectral coefficients (Parseval).
double spectral_l2_norm(const ScalarField& f);

}  // namespace helix
