#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "helix/field.hpp"
#include "helix/helical.hpp"
#include "helix/mollifier.hpp"
#include "helix/reduction.hpp"
#include "helix/rotation.hpp"
#include "helix/spectral.hpp"

namespace helix {

/// How the quadratic term is kept free of aliasing.
enum class DealiasRule {
  kTruncateBox,       ///< 2/3 rule on every axis
  kTruncateCylinder,  ///< 2/3 rule with a horizontal disk instead of a square
  kPadded,            ///< products on a 3/2-refined grid, no resolved mode discarded
};

struct SolverConfig {
  double nu = 0.0;
  /// Mollification width; 0 integrates the plain (Navier-Stokes or Euler) system.
  double epsilon = 0.0;
  double max_epsilon = 0.5;
  double dt = 0.01;
  double t_end = 0.5;
  double cfl_safety = 0.5;
  bool dealias = true;
  DealiasRule dealias_rule = DealiasRule::kPadded;
  /// Re-project through trace and lift every k steps; 0 disables.
  int enforce_every = 0;
  Interp interp = Interp::kSpectralShear;
  /// Below this viscosity (and above zero) a stiffness warning is emitted.
  double nu_floor = 1e-3;
  double div_tolerance = 1e-10;
  /// Allowed relative excess of energy + dissipated energy over the initial energy.
  double energy_tolerance = 1e-6;

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  [[nodiscard]] std::int64_t step_count() const;
};

/// Velocity in spectral representation plus bookkeeping. Derived quantities
/// (swirl, orthogonal part, Omega3) are computed on demand and cached.
struct HelicalState {
  VectorField3 u;             ///< spectral coefficients, divergence free
  double t = 0.0;
  std::int64_t steps = 0;
  double initial_energy = 0.0;
  double dissipated = 0.0;    ///< time integral of the dissipation rate

  [[nodiscard]] VectorField3 velocity() const;
  [[nodiscard]] const SwirlDecomposition& decomposition() const;
  void invalidate() const { cache_.reset(); }

 private:
  mutable std::shared_ptr<const SwirlDecomposition> cache_;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;            ///< 0.5 ||u||^2
  double dissipation = 0.0;       ///< nu ||grad u||^2 (nu ||grad J u||^2 when regularized)
  double eta_l2 = 0.0;
  double grad_eta_l2 = 0.0;
  double omega3_l2 = 0.0;
  double omega3_sq_integral = 0.0;  ///< trapezoidal time integral of ||Omega3||^2
  double hel_res_group = 0.0;
  double hel_res_pde = 0.0;
  double div_l2 = 0.0;
  double energy_budget = 0.0;     ///< energy + dissipated energy
  double swirl_eq_res = std::numeric_limits<double>::quiet_NaN();
  double omega3_eq_res = std::numeric_limits<double>::quiet_NaN();
  double identity_defect = 0.0;   ///< decomposition identity for d_x u2 - d_y u1
  double err_to_euler_local = std::numeric_limits<double>::quiet_NaN();
};

struct RunOptions {
  int sample_stride = 1;
  bool helicality = true;
  bool swirl_residual = true;
  bool omega3_residual = false;
  bool identity_check = true;
  std::optional<LocalBox> local_box;
  /// Called with (sample index, state); the return value fills err_to_euler_local.
  std::function<double(std::size_t, const HelicalState&)> reference_distance;
  /// Called after each sample is recorded.
  std::function<void(std::size_t, const HelicalState&, const DiagnosticsRecord&)> observer;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  HelicalState final_state;
  std::vector<std::string> warnings;
  double max_div_l2 = 0.0;
  /// max over samples of |energy_budget - E0| / (E0 * t).
  double budget_drift_rate = 0.0;
  double max_identity_defect = 0.0;
};

class Solver {
 public:
  using Forcing = std::function<VectorField3(double t)>;

  Solver(const Grid3& grid, SolverConfig cfg);

  [[nodiscard]] const Grid3& grid() const { return grid_; }
  [[nodiscard]] const SolverConfig& config() const { return cfg_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] bool regularized() const { return mollifier_ != nullptr; }

  /// Physical forcing f(t); the solver projects it.
  void set_forcing(Forcing f) { forcing_ = std::move(f); }

  /// Projects (and dealiases, when enabled) the initial velocity.
  [[nodiscard]] HelicalState prepare(const VectorField3& u0) const;
  [[nodiscard]] HelicalState prepare(const TraceField2& w0) const;

  /// One integrating-factor RK4 step of the plain system. Throws CflViolation
  /// before stepping when dt is too large, SolverFailure on NaN/Inf or a
  /// divergence above tolerance.
  void step(HelicalState& s) const;
  /// Same scheme for the mollified system; requires epsilon > 0.
  void step_regularized(HelicalState& s) const;
  /// Dispatches on the configuration.
  void advance(HelicalState& s) const;

  /// Integrates to t_end recording diagnostics every sample_stride steps.
  RunResult run(const HelicalState& initial, const RunOptions& opts = {}) const;

  [[nodiscard]] double energy(const HelicalState& s) const;
  [[nodiscard]] double dissipation_rate(const HelicalState& s) const;
  [[nodiscard]] double divergence_l2(const HelicalState& s) const;
  /// Largest dt accepted for the current state.
  [[nodiscard]] double cfl_limit(const HelicalState& s) const;

  /// Re-projects u through trace at z = 0 and lift.
  void enforce_symmetry(HelicalState& s) const;

  /// Projected forcing at time t, or nullopt without forcing.
  [[nodiscard]] std::optional<VectorField3> projected_forcing(double t) const;

 private:
  VectorField3 nonlinear(const VectorField3& uh, double t, bool regularized, double* umax) const;
  void rk4(HelicalState& s, bool regularized) const;
  double dissipation_of(const VectorField3& uh, bool regularized) const;
  void check_state(const HelicalState& s) const;
  void restrict_modes(VectorField3& uh) const;

  Grid3 grid_;
  Grid3 padded_;  ///< product grid for DealiasRule::kPadded
  SolverConfig cfg_;
  std::unique_ptr<Mollifier> mollifier_;
  std::vector<double> k2_;           ///< |k|^2 per spectral mode
  std::vector<double> decay_half_;   ///< exp(L h / 2)
  std::vector<double> decay_full_;   ///< exp(L h)
  std::vector<double> decay_half_reg_;
  std::vector<double> decay_full_reg_;
  Forcing forcing_;
  std::vector<std::string> warnings_;
};

/// Value-semantics wrappers.
HelicalState step(const HelicalState& s, const Grid3& grid, const SolverConfig& cfg);
HelicalState step_regularized(const HelicalState& s, const Grid3& grid, const SolverConfig& cfg);

}  // namespace helix
