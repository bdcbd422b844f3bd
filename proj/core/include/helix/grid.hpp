#pragma once

#include <cstddef>
#include <numbers>

namespace helix {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Periodic grid on the truncated fundamental domain
/// [-L/2, L/2)^2 x [-pi, pi). The z period is exactly 2*pi.
///
/// Physical samples are stored with x fastest:
///   index(i, j, k) = (k * ny + j) * nx + i.
/// Spectral coefficients use the real-to-complex layout with the x axis halved:
///   spectral_index(i, j, k) = (k * ny + j) * (nx / 2 + 1) + i.
struct Grid3 {
  int nx = 64;
  int ny = 64;
  int nz = 32;
  double length = 8.0 * kPi;

  /// Validates and returns a grid. Throws InvalidArgument.
  static Grid3 make(int nx, int ny, int nz, double length = 8.0 * kPi);

  [[nodiscard]] double dx() const { return length / nx; }
  [[nodiscard]] double dy() const { return length / ny; }
  [[nodiscard]] double dz() const { return kTwoPi / nz; }
  [[nodiscard]] double x(int i) const { return -0.5 * length + i * dx(); }
  [[nodiscard]] double y(int j) const { return -0.5 * length + j * dy(); }
  [[nodiscard]] double z(int k) const { return -kPi + k * dz(); }
  [[nodiscard]] double cell_volume() const { return dx() * dy() * dz(); }
  [[nodiscard]] double volume() const { return length * length * kTwoPi; }
  [[nodiscard]] double min_spacing() const;

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  [[nodiscard]] int nxh() const { return nx / 2 + 1; }
  [[nodiscard]] std::size_t spectral_size() const {
    return static_cast<std::size_t>(nz) * ny * nxh();
  }
  [[nodiscard]] std::size_t plane_size() const {
    return static_cast<std::size_t>(nx) * ny;
  }
  [[nodiscard]] std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
  [[nodiscard]] std::size_t spectral_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nxh() + i;
  }

  /// Fourier wavenumbers. The x index runs over [0, nx/2].
  [[nodiscard]] double kx(int i) const { return kTwoPi / length * i; }
  [[nodiscard]] double ky(int j) const {
    return kTwoPi / length * (j <= ny / 2 ? j : j - ny);
  }
  [[nodiscard]] double kz(int k) const { return k <= nz / 2 ? k : k - nz; }

  /// Wavenumbers used for first derivatives: identical to kx/ky/kz except that
  /// the Nyquist index maps to zero so derivatives of real fields stay real.
  [[nodiscard]] double dkx(int i) const { return i == nx / 2 ? 0.0 : kx(i); }
  [[nodiscard]] double dky(int j) const { return j == ny / 2 ? 0.0 : ky(j); }
  [[nodiscard]] double dkz(int k) const { return k == nz / 2 ? 0.0 : kz(k); }

  /// Index of the z plane through z = 0.
  [[nodiscard]] int z_origin_plane() const { return nz / 2; }

  friend bool operator==(const Grid3&, const Grid3&) = default;
};

/// Horizontal slice of a Grid3 (the plane a 2D trace lives on).
struct PlaneGrid {
  int nx = 64;
  int ny = 64;
  double length = 8.0 * kPi;

  static PlaneGrid of(const Grid3& g) { return {g.nx, g.ny, g.length}; }

  [[nodiscard]] double dx() const { return length / nx; }
  [[nodiscard]] double dy() const { return length / ny; }
  [[nodiscard]] double x(int i) const { return -0.5 * length + i * dx(); }
  [[nodiscard]] double y(int j) const { return -0.5 * length + j * dy(); }
  [[nodiscard]] double cell_area() const { return dx() * dy(); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }

  friend bool operator==(const PlaneGrid&, const PlaneGrid&) = default;
};

/// Horizontal sub-box [-half_width, half_width)^2 x [-pi, pi) used for the
/// local L^2 norms. The default half width is L/4.
struct LocalBox {
  double half_width = 2.0 * kPi;

  static LocalBox quarter_of(const Grid3& g) { return {0.25 * g.length}; }
  [[nodiscard]] bool contains(double x, double y) const {
    return x >= -half_width && x < half_width && y >= -half_width && y < half_width;
  }

  friend bool operator==(const LocalBox&, const LocalBox&) = default;
};

}  // namespace helix
