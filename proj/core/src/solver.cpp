#include "helix/solver.hpp"

#include <cmath>
#include <sstream>

#include "helix/errors.hpp"
#include "helix/residuals.hpp"

namespace helix {
void SolverConfig::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be finite and >= 0");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw InvalidArgument("cfl_safety must lie in (0, 1)");
  if (enforce_every < 0) throw InvalidArgument("enforce_every must be >= 0");
  if (!(nu_floor >= 0.0)) throw InvalidArgument("nu_floor must be >= 0");
  const double n = t_end / dt;
  if (std::abs(n - std::nearbyint(n)) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument("t_end must be an integer multiple of dt");
  }
}

std::int64_t SolverConfig::step_count() const {
  return static_cast<std::int64_t>(std::nearbyint(t_end / dt));
}

VectorField3 HelicalState::velocity() const { return to_physical(u); }

const SwirlDecomposition& HelicalState::decomposition() const {
  if (!cache_) cache_ = std::make_shared<const SwirlDecomposition>(decompose(velocity()));
  return *cache_;
}

Solver::Solver(const Grid3& grid, SolverConfig cfg) : grid_(grid), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.dealias && cfg_.dealias_rule == DealiasRule::kPadded) {
    if (grid_.nx % 4 != 0 || grid_.ny % 4 != 0 || grid_.nz % 4 != 0) {
      throw InvalidArgument("padded dealiasing needs grid sizes divisible by 4");
    }
    padded_ = Grid3::make(3 * grid_.nx / 2, 3 * grid_.ny / 2, 3 * grid_.nz / 2, grid_.length);
  }
  if (cfg_.epsilon > 0.0) {
    mollifier_ = std::make_unique<Mollifier>(grid_, MollifierConfig{cfg_.epsilon, cfg_.max_epsilon});
  }
  const std::size_t ns = grid_.spectral_size();
  k2_.resize(ns);
  for_each_mode(grid_, [&](int i, int j, int k, std::size_t n) {
    const double kx = grid_.kx(i), ky = grid_.ky(j), kz = grid_.kz(k);
    k2_[n] = kx * kx + ky * ky + kz * kz;
  });
  const double h = cfg_.dt;
  decay_half_.resize(ns);
  decay_full_.resize(ns);
  for (std::size_t n = 0; n < ns; ++n) {
    decay_half_[n] = std::exp(-cfg_.nu * k2_[n] * 0.5 * h);
    decay_full_[n] = std::exp(-cfg_.nu * k2_[n] * h);
  }
  if (mollifier_) {
    auto m = mollifier_->multipliers();
    decay_half_reg_.resize(ns);
    decay_full_reg_.resize(ns);
    for (std::size_t n = 0; n < ns; ++n) {
      const double l = cfg_.nu * k2_[n] * m[n] * m[n];
      decay_half_reg_[n] = std::exp(-l * 0.5 * h);
      decay_full_reg_[n] = std::exp(-l * h);
    }
  }
  if (cfg_.nu > 0.0 && cfg_.nu < cfg_.nu_floor) {
    std::ostringstream os;
    os << "stiffness warning: nu = " << cfg_.nu << " is below the resolution floor " << cfg_.nu_floor
       << "; the a priori gradient bound grows like exp(C ||u0||_2^4 / nu^4), so expect "
          "under-resolved dynamics on this grid";
    warnings_.push_back(os.str());
  }
}

HelicalState Solver::prepare(const VectorField3& u0) const {
  if (!(u0.grid() == grid_)) throw GridMismatch("initial data on a different grid");
  HelicalState s;
  s.u = leray_project(to_spectral(u0));
  restrict_modes(s.u);
  s.initial_energy = energy(s);
  check_state(s);
  return s;
}

HelicalState Solver::prepare(const TraceField2& w0) const {
  LiftOptions opts;
  opts.interp = cfg_.interp;
  return prepare(lift(w0, grid_, opts));
}

std::optional<VectorField3> Solver::projected_forcing(double t) const {
  if (!forcing_) return std::nullopt;
  VectorField3 f = forcing_(t);
  if (!(f.grid() == grid_)) throw GridMismatch("forcing on a different grid");
  return leray_project(to_spectral(f));
}

void Solver::restrict_modes(VectorField3& uh) const {
  if (!cfg_.dealias) return;
  switch (cfg_.dealias_rule) {
    case DealiasRule::kTruncateBox:
    case DealiasRule::kTruncateCylinder: {
      const DealiasShape shape =
          cfg_.dealias_rule == DealiasRule::kTruncateBox ? DealiasShape::kBox : DealiasShape::kCylinder;
      for (int c = 0; c < 3; ++c) dealias_in_place(uh[c], shape);
      break;
    }
    case DealiasRule::kPadded:
      // The padded product never produces Nyquist modes.
      uh = resample(uh, grid_);
      break;
  }
}

VectorField3 Solver::nonlinear(const VectorField3& uh, double t, bool regularized,
                               double* umax) const {
  // N = P D(a x curl a) with a = J u when regularized and D = J (restricted to
  // the kept modes). Because a only holds kept modes, <a, D(X)> equals the
  // continuous <a, X> and the term conserves energy exactly.
  const bool padded = cfg_.dealias && cfg_.dealias_rule == DealiasRule::kPadded;
  VectorField3 a = uh;
  if (!padded) restrict_modes(a);
  if (regularized) {
    for (int c = 0; c < 3; ++c) mollifier_->apply_spectral(a[c]);
  }
  const VectorField3 ap = to_physical(padded ? resample(a, padded_) : a);
  const VectorField3 wp = to_physical(padded ? resample(curl(a), padded_) : curl(a));
  if (umax != nullptr) *umax = max_abs(ap);

  VectorField3 cross(ap.grid());
  auto a0 = ap[0].values(), a1 = ap[1].values(), a2 = ap[2].values();
  auto w0 = wp[0].values(), w1 = wp[1].values(), w2 = wp[2].values();
  auto c0 = cross[0].values(), c1 = cross[1].values(), c2 = cross[2].values();
  for (std::size_t n = 0; n < c0.size(); ++n) {
    c0[n] = a1[n] * w2[n] - a2[n] * w1[n];
    c1[n] = a2[n] * w0[n] - a0[n] * w2[n];
    c2[n] = a0[n] * w1[n] - a1[n] * w0[n];
  }
  VectorField3 out = padded ? resample(to_spectral(cross), grid_) : to_spectral(cross);
  if (!padded) restrict_modes(out);
  if (regularized) {
    for (int c = 0; c < 3; ++c) mollifier_->apply_spectral(out[c]);
  }
  if (forcing_) {
    VectorField3 f = to_spectral(forcing_(t));
    out += f;
  }
  return leray_project(out);
}

double Solver::dissipation_of(const VectorField3& uh, bool regularized) const {
  if (cfg_.nu == 0.0) return 0.0;
  std::span<const double> m;
  if (regularized) m = mollifier_->multipliers();
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto v = uh[c].coeffs();
    for_each_mode(grid_, [&](int i, int, int, std::size_t n) {
      double w = mode_weight(grid_, i) * k2_[n];
      if (regularized) w *= m[n] * m[n];
      acc += w * std::norm(v[n]);
    });
  }
  return cfg_.nu * acc * grid_.volume();
}

double Solver::energy(const HelicalState& s) const {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto v = s.u[c].coeffs();
    for_each_mode(grid_, [&](int i, int, int, std::size_t n) {
      acc += mode_weight(grid_, i) * std::norm(v[n]);
    });
  }
  return 0.5 * acc * grid_.volume();
}

double Solver::dissipation_rate(const HelicalState& s) const {
  return dissipation_of(s.u, regularized());
}

double Solver::divergence_l2(const HelicalState& s) const {
  return l2_norm(divergence(s.u));
}

double Solver::cfl_limit(const HelicalState& s) const {
  const double umax = max_abs(s.velocity());
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfg_.cfl_safety * grid_.min_spacing() / umax;
}

void Solver::check_state(const HelicalState& s) const {
  for (int c = 0; c < 3; ++c) {
    for (const Complex& z : s.u[c].coeffs()) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "non-finite velocity at t = " << s.t << " (step " << s.steps << ", nu = " << cfg_.nu
           << ", dt = " << cfg_.dt << ", energy budget " << s.initial_energy << " -> "
           << s.dissipated << " dissipated)";
        throw SolverFailure(os.str());
      }
    }
  }
  const double div = divergence_l2(s);
  if (div > cfg_.div_tolerance) {
    std::ostringstream os;
    os << "divergence " << div << " exceeds tolerance " << cfg_.div_tolerance << " at t = " << s.t;
    throw SolverFailure(os.str());
  }
}

void Solver::rk4(HelicalState& s, bool reg) const {
  const double h = cfg_.dt;
  const double t = s.t;
  const auto& eh = reg ? decay_half_reg_ : decay_half_;
  const auto& ef = reg ? decay_full_reg_ : decay_full_;
  const std::size_t ns = grid_.spectral_size();

  double umax = 0.0;
  const VectorField3 k1 = nonlinear(s.u, t, reg, &umax);
  if (umax > 0.0 && h > cfg_.cfl_safety * grid_.min_spacing() / umax) {
    std::ostringstream os;
    os << "dt = " << h << " exceeds the advective limit " << cfg_.cfl_safety * grid_.min_spacing() / umax
       << " at t = " << t;
    throw CflViolation(os.str());
  }
  const double d1 = dissipation_of(s.u, reg);

  VectorField3 ua(grid_, Space::kSpectral);
  for (int c = 0; c < 3; ++c) {
    auto u = s.u[c].coeffs();
    auto k = k1[c].coeffs();
    auto o = ua[c].coeffs();
    for (std::size_t n = 0; n < ns; ++n) o[n] = eh[n] * (u[n] + 0.5 * h * k[n]);
  }
  const VectorField3 k2 = nonlinear(ua, t + 0.5 * h, reg, nullptr);
  const double d2 = dissipation_of(ua, reg);

  VectorField3 ub(grid_, Space::kSpectral);
  for (int c = 0; c < 3; ++c) {
    auto u = s.u[c].coeffs();
    auto k = k2[c].coeffs();
    auto o = ub[c].coeffs();
    for (std::size_t n = 0; n < ns; ++n) o[n] = eh[n] * u[n] + 0.5 * h * k[n];
  }
  const VectorField3 k3 = nonlinear(ub, t + 0.5 * h, reg, nullptr);
  const double d3 = dissipation_of(ub, reg);

  VectorField3 uc(grid_, Space::kSpectral);
  for (int c = 0; c < 3; ++c) {
    auto u = s.u[c].coeffs();
    auto k = k3[c].coeffs();
    auto o = uc[c].coeffs();
    for (std::size_t n = 0; n < ns; ++n) o[n] = ef[n] * u[n] + h * eh[n] * k[n];
  }
  const VectorField3 k4 = nonlinear(uc, t + h, reg, nullptr);
  const double d4 = dissipation_of(uc, reg);

  for (int c = 0; c < 3; ++c) {
    auto u = s.u[c].coeffs();
    auto a = k1[c].coeffs();
    auto b = k2[c].coeffs();
    auto d = k3[c].coeffs();
    auto e = k4[c].coeffs();
    for (std::size_t n = 0; n < ns; ++n) {
      u[n] = ef[n] * u[n] + (h / 6.0) * (ef[n] * a[n] + 2.0 * eh[n] * (b[n] + d[n]) + e[n]);
    }
  }
  s.dissipated += (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  s.steps += 1;
  s.t = t + h;
  s.invalidate();

  if (cfg_.enforce_every > 0 && s.steps % cfg_.enforce_every == 0) enforce_symmetry(s);
  check_state(s);
}

void Solver::step(HelicalState& s) const { rk4(s, false); }

void Solver::step_regularized(HelicalState& s) const {
  if (!mollifier_) throw InvalidArgument("step_regularized needs epsilon > 0");
  rk4(s, true);
}

void Solver::advance(HelicalState& s) const { rk4(s, mollifier_ != nullptr); }

void Solver::enforce_symmetry(HelicalState& s) const {
  LiftOptions opts;
  opts.interp = cfg_.interp;
  opts.check_support = false;
  const VectorField3 lifted = lift(trace(s.velocity(), 0.0, cfg_.interp), grid_, opts);
  s.u = leray_project(to_spectral(lifted));
  restrict_modes(s.u);
  s.invalidate();
}

RunResult Solver::run(const HelicalState& initial, const RunOptions& opts) const {
  if (opts.sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
  const std::int64_t total = cfg_.step_count();
  if (total % opts.sample_stride != 0) {
    throw InvalidArgument("the step count must be a multiple of the sample stride");
  }
  const bool reg = mollifier_ != nullptr;
  RunResult result;
  result.warnings = warnings_;
  HelicalState s = initial;
  s.invalidate();

  const double e0 = s.initial_energy;
  const double floor = 1e-8 * std::sqrt(2.0 * e0);
  EquationResidualTracker swirl_tracker(floor);
  EquationResidualTracker omega_tracker(floor);
  const bool track_swirl = opts.swirl_residual && !reg;
  const bool track_omega = opts.omega3_residual && !reg;
  const auto thetas = default_theta_samples();

  auto record = [&](std::size_t index) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.energy = energy(s);
    r.dissipation = dissipation_of(s.u, reg);
    const VectorField3 u = s.velocity();
    const SwirlDecomposition& d = s.decomposition();
    r.eta_l2 = l2_norm(d.eta);
    r.grad_eta_l2 = h1_seminorm(d.eta);
    r.omega3_l2 = l2_norm(d.omega3);
    if (!result.records.empty()) {
      const auto& prev = result.records.back();
      r.omega3_sq_integral = prev.omega3_sq_integral +
                             0.5 * (r.t - prev.t) * (prev.omega3_l2 * prev.omega3_l2 + r.omega3_l2 * r.omega3_l2);
    }
    if (opts.helicality) {
      const HelicalityReport h = helicality_report(u, thetas, cfg_.interp);
      r.hel_res_group = h.residual_group;
      r.hel_res_pde = h.residual_pde;
    }
    r.div_l2 = divergence_l2(s);
    r.energy_budget = r.energy + s.dissipated;
    if (opts.identity_check) {
      const ScalarField direct = derivative(u[1], 0) - derivative(u[0], 1);
      const ScalarField rebuilt = omega3_from_decomposition(d);
      const double scale = max_abs(direct);
      const double diff = max_abs(direct - rebuilt);
      r.identity_defect = scale > 0.0 ? diff / scale : diff;
    }
    if (track_swirl || track_omega) {
      const auto pf = projected_forcing(s.t);
      const VectorField3 pfp = pf ? to_physical(*pf) : VectorField3();
      if (track_swirl) swirl_tracker.push(s.t, d.eta, swirl_equation_rhs(u, cfg_.nu, pf ? &pfp : nullptr));
      if (track_omega) omega_tracker.push(s.t, d.omega3, omega3_equation_rhs(u, cfg_.nu, pf ? &pfp : nullptr));
    }
    if (opts.reference_distance) r.err_to_euler_local = opts.reference_distance(index, s);

    result.max_div_l2 = std::max(result.max_div_l2, r.div_l2);
    result.max_identity_defect = std::max(result.max_identity_defect, r.identity_defect);
    if (r.t > 0.0 && e0 > 0.0) {
      result.budget_drift_rate =
          std::max(result.budget_drift_rate, std::abs(r.energy_budget - e0) / (e0 * r.t));
    }
    // forcing may inject energy; the inequality only binds for the unforced system
    if (!forcing_ && e0 > 0.0 && r.energy_budget > e0 * (1.0 + cfg_.energy_tolerance)) {
      std::ostringstream os;
      os << "discrete energy inequality violated at t = " << r.t << ": " << r.energy_budget
         << " > " << e0;
      throw SolverFailure(os.str());
    }
    result.records.push_back(r);
    if (opts.observer) opts.observer(index, s, result.records.back());
  };

  std::size_t index = 0;
  record(index++);
  for (std::int64_t n = 0; n < total; ++n) {
    rk4(s, reg);
    if (s.steps % opts.sample_stride == 0) record(index++);
  }

  if (track_swirl) {
    const auto res = swirl_tracker.finish();
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (res[i]) result.records[i].swirl_eq_res = *res[i];
    }
  }
  if (track_omega) {
    const auto res = omega_tracker.finish();
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (res[i]) result.records[i].omega3_eq_res = *res[i];
    }
  }
  result.final_state = std::move(s);
  return result;
}

HelicalState step(const HelicalState& s, const Grid3& grid, const SolverConfig& cfg) {
  HelicalState out = s;
  Solver(grid, cfg).step(out);
  return out;
}

HelicalState step_regularized(const HelicalState& s, const Grid3& grid, const SolverConfig& cfg) {
  HelicalState out = s;
  Solver(grid, cfg).step_regularized(out);
  return out;
}

}  // namespace helix
