#pragma once

#include <array>
#include <span>

#include "helix/aligned.hpp"
#include "helix/grid.hpp"

namespace helix {

/// Which representation a field currently holds.
enum class Space { kPhysical, kSpectral };

/// A real scalar field sampled on a Grid3, held either as physical samples or
/// as normalized Fourier coefficients (f = sum_k c_k exp(i k.x)). Only one
/// representation is stored at a time; the tag says which.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid3& grid, Space space = Space::kPhysical);

  template <class F>
  static ScalarField from_function(const Grid3& grid, F&& f) {
    ScalarField out(grid);
    auto v = out.values();
    for (int k = 0; k < grid.nz; ++k) {
      for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
          v[grid.index(i, j, k)] = f(grid.x(i), grid.y(j), grid.z(k));
        }
      }
    }
    return out;
  }

  [[nodiscard]] const Grid3& grid() const { return grid_; }
  [[nodiscard]] Space space() const { return space_; }
  [[nodiscard]] bool is_physical() const { return space_ == Space::kPhysical; }

  /// Physical samples; throws InvalidArgument in spectral representation.
  [[nodiscard]] std::span<double> values();
  [[nodiscard]] std::span<const double> values() const;
  /// Spectral coefficients; throws InvalidArgument in physical representation.
  [[nodiscard]] std::span<Complex> coeffs();
  [[nodiscard]] std::span<const Complex> coeffs() const;

  double& at(int i, int j, int k) { return values()[grid_.index(i, j, k)]; }
  [[nodiscard]] double at(int i, int j, int k) const {
    return values()[grid_.index(i, j, k)];
  }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);
  /// this += s * other
  ScalarField& axpy(double s, const ScalarField& other);

  // Storage access for the transform layer.
  RealBuffer& real_storage() { return real_; }
  ComplexBuffer& complex_storage() { return spec_; }
  void reset(Space space);

 private:
  void require_compatible(const ScalarField& other) const;

  Grid3 grid_{};
  Space space_ = Space::kPhysical;
  RealBuffer real_;
  ComplexBuffer spec_;
};

/// Three scalar components sharing one grid and one representation.
class VectorField3 {
 public:
  VectorField3() = default;
  explicit VectorField3(const Grid3& grid, Space space = Space::kPhysical);
  VectorField3(ScalarField a, ScalarField b, ScalarField c);

  template <class F>
  static VectorField3 from_function(const Grid3& grid, F&& f) {
    VectorField3 out(grid);
    for (int k = 0; k < grid.nz; ++k) {
      for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
          const auto v = f(grid.x(i), grid.y(j), grid.z(k));
          const auto idx = grid.index(i, j, k);
          out[0].values()[idx] = v[0];
          out[1].values()[idx] = v[1];
          out[2].values()[idx] = v[2];
        }
      }
    }
    return out;
  }

  ScalarField& operator[](int c) { return comp_[static_cast<std::size_t>(c)]; }
  const ScalarField& operator[](int c) const { return comp_[static_cast<std::size_t>(c)]; }

  [[nodiscard]] const Grid3& grid() const { return comp_[0].grid(); }
  [[nodiscard]] Space space() const { return comp_[0].space(); }

  VectorField3& operator+=(const VectorField3& other);
  VectorField3& operator-=(const VectorField3& other);
  VectorField3& operator*=(double s);
  VectorField3& axpy(double s, const VectorField3& other);

 private:
  std::array<ScalarField, 3> comp_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField3 operator+(VectorField3 a, const VectorField3& b);
VectorField3 operator-(VectorField3 a, const VectorField3& b);
VectorField3 operator*(double s, VectorField3 a);

/// Pointwise product of two physical fields.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Max |f| over the grid (physical).
double max_abs(const ScalarField& f);
/// Max Euclidean length |v| over the grid (physical).
double max_abs(const VectorField3& v);

}  // namespace helix
