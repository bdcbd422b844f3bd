#include "helix/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "helix/errors.hpp"
#include "helix/helical.hpp"
#include "helix/reduction.hpp"
#include "helix/spectral.hpp"
#include "helix/traces.hpp"

namespace helix {

namespace {

double h1_norm(const VectorField3& v) {
  const double a = l2_norm(v), b = h1_seminorm(v);
  return std::sqrt(a * a + b * b);
}

// Trapezoid rule for the integral of f(record) over the sampled times.
template <class F>
double time_integral(const std::vector<DiagnosticsRecord>& r, F&& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) s += 0.5 * (r[i].t - r[i - 1].t) * (f(r[i - 1]) + f(r[i]));
  return s;
}

void summarize(NuRun& run) {
  const auto& r = run.records;
  for (const auto& d : r) {
    run.sup_eta_l2 = std::max(run.sup_eta_l2, d.eta_l2);
    run.sup_omega3_l2 = std::max(run.sup_omega3_l2, d.omega3_l2);
    run.max_hel_res_group = std::max(run.max_hel_res_group, d.hel_res_group);
    run.max_hel_res_pde = std::max(run.max_hel_res_pde, d.hel_res_pde);
    if (std::isfinite(d.swirl_eq_res)) run.max_swirl_eq_res = std::max(run.max_swirl_eq_res, d.swirl_eq_res);
    if (std::isfinite(d.omega3_eq_res)) run.max_omega3_eq_res = std::max(run.max_omega3_eq_res, d.omega3_eq_res);
  }
  const double g2 = time_integral(r, [](const DiagnosticsRecord& d) { return d.grad_eta_l2 * d.grad_eta_l2; });
  run.grad_eta_l2l2 = std::sqrt(run.nu * g2);
}

std::optional<ScalingFit> fit_if_possible(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) return std::nullopt;
  for (const auto& [nu, v] : pts) {
    if (!(nu > 0.0) || !(v > 0.0) || !std::isfinite(v)) return std::nullopt;
  }
  return fit_scaling(pts);
}

}  // namespace

std::string_view version() { return HELIX_VERSION; }

void SweepConfig::validate() const {
  solver.validate();
  if (nu_list.empty()) throw InvalidArgument("nu_list is empty");
  for (std::size_t i = 0; i < nu_list.size(); ++i) {
    if (!(nu_list[i] > 0.0) || !std::isfinite(nu_list[i])) {
      throw InvalidArgument("nu_list entries must be positive and finite");
    }
    if (i > 0 && !(nu_list[i] < nu_list[i - 1])) throw InvalidArgument("nu_list must be strictly decreasing");
  }
  if (!(base.amplitude > 0.0) || !(base.sigma > 0.0)) throw InvalidArgument("base amplitude and sigma must be positive");
  if (base.removal_iterations < 0) throw InvalidArgument("base.removal_iterations must be >= 0");
  if (!(base.swirl_tolerance > 0.0)) throw InvalidArgument("base.swirl_tolerance must be positive");
  if (!(perturbation.sigma > 0.0)) throw InvalidArgument("perturbation sigma must be positive");
  if (solver.dealias && solver.dealias_rule == DealiasRule::kPadded &&
      (grid.nx % 4 != 0 || grid.ny % 4 != 0 || grid.nz % 4 != 0)) {
    throw InvalidArgument("padded dealiasing needs grid sizes divisible by 4");
  }
  if (sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
  if (solver.step_count() % sample_stride != 0) {
    throw InvalidArgument("the step count must be a multiple of sample_stride");
  }
  const LocalBox b = box();
  if (!(b.half_width > 0.0) || b.half_width > 0.5 * grid.length) {
    throw InvalidArgument("local box half width must lie in (0, L/2]");
  }
}

SweepInputs make_sweep_inputs(const SweepConfig& cfg) {
  cfg.validate();
  const PlaneGrid pg = PlaneGrid::of(cfg.grid);
  LiftOptions lo;
  lo.interp = cfg.solver.interp;

  SweepInputs in;
  if (cfg.base.kind == BaseFlowKind::kZeroSwirl) {
    in.u0 = leray_project(lift(zero_swirl_trace(pg, cfg.base.amplitude, cfg.base.sigma), cfg.grid, lo));
  } else {
    VectorField3 v = lift(dipole_trace(pg, cfg.base.amplitude, cfg.base.sigma), cfg.grid, lo);
    for (int it = 0; it < cfg.base.removal_iterations; ++it) v = leray_project(v - swirl_part(swirl(v)));
    in.u0 = leray_project(v);
  }
  in.base_swirl = l2_norm(swirl(in.u0)) / l2_norm(in.u0);
  if (!(in.base_swirl <= cfg.base.swirl_tolerance)) {
    std::ostringstream os;
    os << "base flow swirl " << in.base_swirl << " exceeds tolerance " << cfg.base.swirl_tolerance;
    throw InvalidArgument(os.str());
  }

  if (cfg.perturbation.kind == PerturbationKind::kNone) {
    in.g = VectorField3(cfg.grid);
    return in;
  }
  const VectorField3 jet = leray_project(lift(axial_jet_trace(pg, 1.0, cfg.perturbation.sigma), cfg.grid, lo));
  in.g = (1.0 / l2_norm(swirl(jet))) * jet;
  in.perturbation_swirl = l2_norm(swirl(in.g));
  in.perturbation_h1 = h1_norm(in.g);
  if (!(in.perturbation_swirl >= 0.9 && in.perturbation_swirl <= 1.1)) {
    std::ostringstream os;
    os << "perturbation swirl norm " << in.perturbation_swirl << " outside [0.9, 1.1]";
    throw InvalidArgument(os.str());
  }
  return in;
}

InitialData build_initial_data(const SweepInputs& inputs, double nu, double swirl_tolerance) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be finite and >= 0");
  InitialData d;
  d.nu = nu;
  d.u = nu == 0.0 ? inputs.u0 : leray_project(inputs.u0 + nu * inputs.g);
  d.eta_l2 = l2_norm(swirl(d.u));
  d.h1_distance = h1_norm(d.u - inputs.u0);

  const double eta_bound = 1.1 * nu * inputs.perturbation_swirl + swirl_tolerance * l2_norm(inputs.u0);
  if (!(d.eta_l2 <= eta_bound)) {
    std::ostringstream os;
    os << "initial swirl " << d.eta_l2 << " exceeds the budget " << eta_bound << " at nu = " << nu;
    throw InvalidArgument(os.str());
  }
  const double h1_bound = 1.01 * nu * inputs.perturbation_h1;
  if (!(d.h1_distance <= h1_bound + 1e-14 * h1_norm(inputs.u0))) {
    std::ostringstream os;
    os << "H1 distance " << d.h1_distance << " exceeds " << h1_bound << " at nu = " << nu;
    throw InvalidArgument(os.str());
  }
  return d;
}

InitialData build_initial_data(const SweepConfig& cfg, double nu) {
  return build_initial_data(make_sweep_inputs(cfg), nu, cfg.base.swirl_tolerance);
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, double confidence) {
  if (points.size() < 3) throw InvalidArgument("fit_scaling needs at least 3 points");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [nu, v] : points) {
    if (!(nu > 0.0) || !(v > 0.0) || !std::isfinite(nu) || !std::isfinite(v)) {
      throw InvalidArgument("fit_scaling needs positive finite nu and values");
    }
    mx += std::log(nu);
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [nu, v] : points) {
    const double dx = std::log(nu) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_scaling needs at least two distinct nu");

  ScalingFit f;
  f.points = points.size();
  f.confidence = confidence;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double dof = n - 2.0;
  const double s2 = sse / dof;
  const boost::math::students_t dist(dof);
  const double q = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence)));
  const double se_slope = std::sqrt(s2 / sxx);
  const double se_icpt = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  f.slope_low = f.slope - q * se_slope;
  f.slope_high = f.slope + q * se_slope;
  f.intercept_low = f.intercept - q * se_icpt;
  f.intercept_high = f.intercept + q * se_icpt;
  return f;
}

std::vector<double> local_samples(const VectorField3& u, const LocalBox& box) {
  const VectorField3 p = to_physical(u);
  const Grid3& g = p.grid();
  std::vector<double> out;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!box.contains(g.x(i), g.y(j))) continue;
        const auto n = g.index(i, j, k);
        for (int c = 0; c < 3; ++c) out.push_back(p[c].values()[n]);
      }
    }
  }
  return out;
}

double local_distance(std::span<const double> a, std::span<const double> b, const Grid3& grid) {
  if (a.size() != b.size()) throw GridMismatch("local samples differ in size");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += (a[n] - b[n]) * (a[n] - b[n]);
  return std::sqrt(s * grid.cell_volume());
}

NuRun run_single(const SweepConfig& cfg, const SweepInputs& inputs, double nu, const RunOptions& extra) {
  const auto start = std::chrono::steady_clock::now();
  NuRun run;
  run.nu = nu;
  SolverConfig sc = cfg.solver;
  sc.nu = nu;

  RunOptions opts = extra;
  opts.sample_stride = cfg.sample_stride;
  opts.omega3_residual = cfg.omega3_residual;
  opts.local_box = cfg.box();
  // Collected as they come so a failed run keeps its series up to the failure.
  std::vector<DiagnosticsRecord> partial;
  opts.observer = [&](std::size_t i, const HelicalState& s, const DiagnosticsRecord& r) {
    partial.push_back(r);
    if (extra.observer) extra.observer(i, s, r);
  };

  std::optional<Solver> solver;
  try {
    const InitialData d = build_initial_data(inputs, nu, cfg.base.swirl_tolerance);
    run.eta0_l2 = d.eta_l2;
    run.h1_distance = d.h1_distance;
    solver.emplace(cfg.grid, sc);
    RunResult r = solver->run(solver->prepare(d.u), opts);
    run.records = std::move(r.records);
    run.warnings = std::move(r.warnings);
    run.max_div_l2 = r.max_div_l2;
    run.budget_drift_rate = r.budget_drift_rate;
  } catch (const std::exception& e) {
    run.failed = true;
    run.failure = e.what();
    run.records = std::move(partial);
    if (solver) run.warnings = solver->warnings();
    for (const auto& d : run.records) run.max_div_l2 = std::max(run.max_div_l2, d.div_l2);
  }
  summarize(run);
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

SweepResult run_sweep(const SweepConfig& cfg, const SweepProgress& progress) {
  SweepResult res;
  res.config = cfg;
  res.inputs = make_sweep_inputs(cfg);
  const LocalBox box = cfg.box();

  std::vector<std::vector<double>> reference;
  RunOptions ref_opts;
  ref_opts.observer = [&](std::size_t, const HelicalState& s, const DiagnosticsRecord&) {
    reference.push_back(local_samples(s.velocity(), box));
  };
  if (progress) progress(0.0, 0);
  res.euler = run_single(cfg, res.inputs, 0.0, ref_opts);
  res.partial = res.euler.failed;

  for (std::size_t idx = 0; idx < cfg.nu_list.size(); ++idx) {
    const double nu = cfg.nu_list[idx];
    if (progress) progress(nu, idx + 1);
    RunOptions opts;
    opts.reference_distance = [&](std::size_t i, const HelicalState& s) {
      if (i >= reference.size()) return std::numeric_limits<double>::quiet_NaN();
      return local_distance(local_samples(s.velocity(), box), reference[i], cfg.grid);
    };
    NuRun run = run_single(cfg, res.inputs, nu, opts);
    if (!run.failed && !res.euler.failed) {
      const double e2 = time_integral(run.records, [](const DiagnosticsRecord& d) {
        return d.err_to_euler_local * d.err_to_euler_local;
      });
      run.error_to_euler = std::sqrt(e2);
    }
    res.partial = res.partial || run.failed;
    res.runs.push_back(std::move(run));
  }

  std::vector<std::pair<double, double>> eta, grad, err;
  std::vector<const NuRun*> ok;
  for (const NuRun& r : res.runs) {
    if (r.failed) continue;
    ok.push_back(&r);
    eta.emplace_back(r.nu, r.sup_eta_l2);
    grad.emplace_back(r.nu, r.grad_eta_l2l2);
    if (std::isfinite(r.error_to_euler)) err.emplace_back(r.nu, r.error_to_euler);
  }
  res.swirl_fit = fit_if_possible(eta);
  res.grad_eta_fit = fit_if_possible(grad);
  res.error_fit = fit_if_possible(err);

  if (ok.size() >= 2) {
    SweepProperties p;
    p.eta0_over_nu_min = p.grad_eta_over_nu_min = std::numeric_limits<double>::infinity();
    double omega_max = 0.0;
    for (const NuRun* r : ok) {
      p.eta0_over_nu_min = std::min(p.eta0_over_nu_min, r->eta0_l2 / r->nu);
      p.eta0_over_nu_max = std::max(p.eta0_over_nu_max, r->eta0_l2 / r->nu);
      p.grad_eta_over_nu_min = std::min(p.grad_eta_over_nu_min, r->grad_eta_l2l2 / r->nu);
      p.grad_eta_over_nu_max = std::max(p.grad_eta_over_nu_max, r->grad_eta_l2l2 / r->nu);
      omega_max = std::max(omega_max, r->sup_omega3_l2);
    }
    p.omega3_uniformity = omega_max / ok.front()->sup_omega3_l2;
    // 5% slack between the two largest nu, none further down
    p.error_monotone = true;
    for (std::size_t i = 1; i < ok.size(); ++i) {
      const double ratio = ok[i]->error_to_euler / ok[i - 1]->error_to_euler;
      p.worst_error_ratio = std::max(p.worst_error_ratio, ratio);
      const double slack = i == 1 ? 1.05 : 1.0;
      if (!(ratio <= slack)) p.error_monotone = false;
    }
    res.properties = p;
  }
  return res;
}

}  // namespace helix
