#include "helix/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "helix/errors.hpp"

namespace helix {

Grid3 Grid3::make(int nx, int ny, int nz, double length) {
  auto check = [](int n, const char* name) {
    if (n < 8 || n % 2 != 0) {
      throw InvalidArgument(std::string("grid size ") + name + " must be even and >= 8, got " +
                            std::to_string(n));
    }
  };
  check(nx, "nx");
  check(ny, "ny");
  check(nz, "nz");
  if (!(length >= kTwoPi) || !std::isfinite(length)) {
    throw InvalidArgument("box length must be finite and >= 2*pi");
  }
  return Grid3{nx, ny, nz, length};
}

double Grid3::min_spacing() const { return std::min({dx(), dy(), dz()}); }

ScalarField::ScalarField(const Grid3& grid, Space space) : grid_(grid), space_(space) {
  reset(space);
}

void ScalarField::reset(Space space) {
  space_ = space;
  if (space == Space::kPhysical) {
    spec_ = ComplexBuffer();
    real_.assign(grid_.size(), 0.0);
  } else {
    real_ = RealBuffer();
    spec_.assign(grid_.spectral_size(), Complex{});
  }
}

std::span<double> ScalarField::values() {
  if (space_ != Space::kPhysical) throw InvalidArgument("field is in spectral representation");
  return {real_.data(), real_.size()};
}

std::span<const double> ScalarField::values() const {
  if (space_ != Space::kPhysical) throw InvalidArgument("field is in spectral representation");
  return {real_.data(), real_.size()};
}

std::span<Complex> ScalarField::coeffs() {
  if (space_ != Space::kSpectral) throw InvalidArgument("field is in physical representation");
  return {spec_.data(), spec_.size()};
}

std::span<const Complex> ScalarField::coeffs() const {
  if (space_ != Space::kSpectral) throw InvalidArgument("field is in physical representation");
  return {spec_.data(), spec_.size()};
}

void ScalarField::require_compatible(const ScalarField& other) const {
  if (!(grid_ == other.grid_)) throw GridMismatch("fields live on different grids");
  if (space_ != other.space_) throw GridMismatch("fields are in different representations");
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
  require_compatible(other);
  if (space_ == Space::kPhysical) {
    for (std::size_t n = 0; n < real_.size(); ++n) real_[n] += s * other.real_[n];
  } else {
    for (std::size_t n = 0; n < spec_.size(); ++n) spec_[n] += s * other.spec_[n];
  }
  return *this;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) { return axpy(1.0, other); }
ScalarField& ScalarField::operator-=(const ScalarField& other) { return axpy(-1.0, other); }

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : real_) v *= s;
  for (auto& c : spec_) c *= s;
  return *this;
}

VectorField3::VectorField3(const Grid3& grid, Space space)
    : comp_{ScalarField(grid, space), ScalarField(grid, space), ScalarField(grid, space)} {}

VectorField3::VectorField3(ScalarField a, ScalarField b, ScalarField c)
    : comp_{std::move(a), std::move(b), std::move(c)} {
  for (int n = 1; n < 3; ++n) {
    if (!(comp_[n].grid() == comp_[0].grid()) || comp_[n].space() != comp_[0].space()) {
      throw GridMismatch("vector components disagree on grid or representation");
    }
  }
}

VectorField3& VectorField3::axpy(double s, const VectorField3& other) {
  for (int c = 0; c < 3; ++c) (*this)[c].axpy(s, other[c]);
  return *this;
}

VectorField3& VectorField3::operator+=(const VectorField3& other) { return axpy(1.0, other); }
VectorField3& VectorField3::operator-=(const VectorField3& other) { return axpy(-1.0, other); }

VectorField3& VectorField3::operator*=(double s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
VectorField3 operator*(double s, VectorField3 a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw GridMismatch("fields live on different grids");
  ScalarField out(a.grid());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = x[n] * y[n];
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField3& v) {
  auto a = v[0].values();
  auto b = v[1].values();
  auto c = v[2].values();
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    m = std::max(m, a[n] * a[n] + b[n] * b[n] + c[n] * c[n]);
  }
  return std::sqrt(m);
}

}  // namespace helix
