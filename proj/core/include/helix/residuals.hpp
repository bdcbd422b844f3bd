#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "helix/field.hpp"
#include "helix/helical.hpp"

namespace helix {

/// Residual of an evolution equation dq/dt = rhs along a uniformly sampled
/// trajectory. The time derivative comes from 5-point fourth-order stencils
/// (centered in the interior, offset and one-sided at the ends); with only 3
/// or 4 samples the 3-point second-order stencils are used. Only a window of
/// five samples is kept in memory.
///
/// residual_n = ||dq/dt(t_n) - rhs_n||_2 / (||q_n||_2 + floor).
class EquationResidualTracker {
 public:
  explicit EquationResidualTracker(double floor = 0.0) : floor_(floor) {}

  /// Samples must be pushed at uniform spacing h.
  void push(double t, const ScalarField& q, const ScalarField& rhs);
  /// Flushes the trailing samples. Returns one entry per pushed sample; entries
  /// are empty when fewer than 3 samples were pushed.
  std::vector<std::optional<double>> finish();

  [[nodiscard]] std::size_t pushed() const { return count_; }

 private:
  struct Sample {
    double t;
    ScalarField q;
    ScalarField rhs;
    double q_norm;
  };

  // Derivative at window[at] from weights over window[first .. first + w.size()).
  double evaluate(std::size_t first, std::span<const double> weights, double denom,
                  std::size_t at) const;

  double floor_;
  std::deque<Sample> window_;
  std::vector<std::optional<double>> results_;
  std::size_t count_ = 0;
  bool finished_ = false;
};

/// Right-hand side of the swirl transport equation:
///   -u . grad eta + nu lap eta + 2 nu (d_x u2 - d_y u1) - xi . grad p [+ (P f) . xi].
/// For a helical pressure xi . grad p vanishes. On the periodic box p is not
/// compactly supported, so its images break the symmetry slightly; the term is
/// kept so the residual measures discretization error only.
ScalarField swirl_equation_rhs(const VectorField3& u, double nu,
                               const VectorField3* projected_forcing = nullptr);

/// Right-hand side of the Omega3 equation, from U = u - eta xi / |xi|^2 and
/// curl U = Omega3 xi:
///   d_t Omega3 = [curl(u x omega + nu lap u + P f)]_3 - [curl(S xi / |xi|^2)]_3
/// with S the swirl right-hand side. For zero swirl and nu = 0 this is pure
/// transport, -U . grad Omega3.
ScalarField omega3_equation_rhs(const VectorField3& u, double nu,
                                const VectorField3* projected_forcing = nullptr);

}  // namespace helix
