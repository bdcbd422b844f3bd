#pragma once

#include <span>
#include <vector>

#include "helix/field.hpp"
#include "helix/rotation.hpp"

namespace helix {

struct MollifierConfig {
  double epsilon = 0.1;
  /// Upper bound accepted for epsilon; the scaled z profile must fit one period.
  double max_epsilon = 0.5;
};

/// Convolution with rho_eps(x) = eps^-3 rho1(|x_h| / eps) rho2(x3 / eps), where
/// rho1 is the unit-mass radial bump exp(1 / (s^2 - 1)) on the unit disk and
/// rho2 the unit-mass 1D bump on [-1, 1]. Applied as a real spectral
/// multiplier: the zero mode is exactly 1 and every multiplier has magnitude
/// at most 1.
class Mollifier {
 public:
  Mollifier(const Grid3& grid, const MollifierConfig& cfg);

  [[nodiscard]] const Grid3& grid() const { return grid_; }
  [[nodiscard]] double epsilon() const { return eps_; }
  /// Multiplier for each stored spectral mode.
  [[nodiscard]] std::span<const double> multipliers() const { return mult_; }
  /// Number of multipliers whose magnitude was clamped to 1.
  [[nodiscard]] std::size_t clamped_count() const { return clamped_; }

  /// Output keeps the input representation.
  [[nodiscard]] ScalarField apply(const ScalarField& f) const;
  [[nodiscard]] VectorField3 apply(const VectorField3& v) const;
  /// Multiplies spectral coefficients in place by m^power.
  void apply_spectral(ScalarField& f, int power = 1) const;

  /// Normalized transforms of the unit-scale profiles at frequency q.
  static double radial_transform(double q);
  static double axial_transform(double q);

 private:
  Grid3 grid_;
  double eps_;
  std::vector<double> mult_;
  std::size_t clamped_ = 0;
};

ScalarField mollify(const ScalarField& f, const MollifierConfig& cfg);
VectorField3 mollify(const VectorField3& v, const MollifierConfig& cfg);

struct CommutationReport {
  std::vector<double> per_theta;  ///< ||J(f o S) - (J f) o S|| / ||f||
  double max_residual = 0.0;
};

/// Symmetry commutation check of the mollifier against S_theta.
CommutationReport verify_symmetry_commutation(const VectorField3& v, const MollifierConfig& cfg,
                                              std::span<const double> thetas,
                                              Interp interp = Interp::kSpectralShear);
CommutationReport verify_symmetry_commutation(const ScalarField& f, const MollifierConfig& cfg,
                                              std::span<const double> thetas,
                                              Interp interp = Interp::kSpectralShear);

}  // namespace helix
