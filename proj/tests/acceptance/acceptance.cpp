// One PASS/FAIL line per acceptance criterion at desk scale (64^2 x 32,
// L = 8 pi, T = 0.5). Exit status is the number of failed criteria.
// Usage: helix_acceptance [output dir]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "helix/errors.hpp"
#include "helix/experiments.hpp"
#include "helix/helical.hpp"
#include "helix/mollifier.hpp"
#include "helix/reduction.hpp"
#include "helix/solver.hpp"
#include "helix/spectral.hpp"
#include "helix/traces.hpp"
#include "oracles.hpp"

using namespace helix;

namespace {

using V3 = std::array<double, 3>;

struct Detail {
  std::ostringstream text;
  bool ok = true;
  // Records one measured quantity against its bound.
  void le(const char* what, double value, double bound) {
    const bool pass = value <= bound;
    ok = ok && pass;
    text << "\n      " << (pass ? "ok  " : "BAD ") << what << " = " << value << " (<= " << bound << ")";
  }
  void ge(const char* what, double value, double bound) {
    const bool pass = value >= bound;
    ok = ok && pass;
    text << "\n      " << (pass ? "ok  " : "BAD ") << what << " = " << value << " (>= " << bound << ")";
  }
  void note(const std::string& s) { text << "\n      " << s; }
};

int failures = 0;

void criterion(const char* name, const std::function<void(Detail&)>& body) {
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(d);
  } catch (const std::exception& e) {
    d.ok = false;
    d.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += d.ok ? 0 : 1;
  std::printf("%s  %s  [%.0f s]%s\n", d.ok ? "PASS" : "FAIL", name, secs, d.text.str().c_str());
  std::fflush(stdout);
}

SolverConfig config(double nu, double dt, double t_end) {
  SolverConfig c;
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

Grid3 desk() { return Grid3::make(64, 64, 32); }

VectorField3 lifted_random(const Grid3& g, std::uint64_t seed, double sigma = 1.2) {
  return to_physical(leray_project(to_spectral(lift(random_trace(PlaneGrid::of(g), seed, sigma), g))));
}

VectorField3 zero_swirl_flow(const Grid3& g) { return lift(zero_swirl_trace(PlaneGrid::of(g), 0.3, 1.3), g); }

// Zero-swirl flow plus an axial jet carrying swirl of norm 0.05.
VectorField3 swirling_flow(const Grid3& g) {
  const VectorField3 jet = lift(axial_jet_trace(PlaneGrid::of(g), 1.0, 1.3), g);
  return zero_swirl_flow(g) + (0.05 / l2_norm(swirl(jet))) * jet;
}

// Pointwise v . xi with xi = (y, -x, 1).
ScalarField swirl_direct(const VectorField3& v) {
  const Grid3& g = v.grid();
  ScalarField out(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        out.values()[n] = v[0].values()[n] * g.y(j) - v[1].values()[n] * g.x(i) + v[2].values()[n];
      }
  return out;
}

// ABC flow with unit wavenumber: curl u = u, so u(t) = exp(-nu t) u(0).
V3 abc(double x, double y, double z) {
  const double a = 1.0, b = 0.7, c = 0.4;
  return {a * std::sin(z) + c * std::cos(y), b * std::sin(x) + a * std::cos(z), c * std::sin(y) + b * std::cos(x)};
}

// Divergence-free cellular field, -lap V = 1.5 V, with (V . grad) V by hand.
struct Cellular {
  static constexpr double al = 0.5;
  static V3 v(double x, double y, double z) {
    const double sx = std::sin(al * x), cx = std::cos(al * x), sy = std::sin(al * y), cy = std::cos(al * y);
    return {cx * sy * std::sin(z), sx * cy * std::sin(z), -sx * sy * std::cos(z)};
  }
  static V3 advect(double x, double y, double z) {
    const double sx = std::sin(al * x), cx = std::cos(al * x), sy = std::sin(al * y), cy = std::cos(al * y);
    const double sz = std::sin(z), cz = std::cos(z);
    const V3 u = v(x, y, z);
    const V3 g1{-al * sx * sy * sz, al * cx * cy * sz, cx * sy * cz};
    const V3 g2{al * cx * cy * sz, -al * sx * sy * sz, sx * cy * cz};
    const V3 g3{-al * cx * sy * cz, -al * sx * cy * cz, sx * sy * sz};
    auto dot = [&](const V3& g) { return u[0] * g[0] + u[1] * g[1] + u[2] * g[2]; };
    return {dot(g1), dot(g2), dot(g3)};
  }
};

double manufactured_error(double dt) {
  const Grid3 g = Grid3::make(32, 32, 8);
  const double nu = 0.05, t_end = 0.5;
  auto amp = [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); };
  auto amp_dot = [](double t) { return 1.5 * std::cos(3.0 * t); };
  Solver solver(g, config(nu, dt, t_end));
  solver.set_forcing([=](double t) {
    const double a = amp(t), ad = amp_dot(t);
    return VectorField3::from_function(g, [&](double x, double y, double z) {
      const V3 v = Cellular::v(x, y, z), n = Cellular::advect(x, y, z);
      V3 f;
      for (int c = 0; c < 3; ++c) f[c] = ad * v[c] + a * a * n[c] + nu * 1.5 * a * v[c];
      return f;
    });
  });
  auto scaled = [&](double t) {
    return VectorField3::from_function(g, [&](double x, double y, double z) {
      V3 v = Cellular::v(x, y, z);
      for (double& c : v) c *= amp(t);
      return v;
    });
  };
  HelicalState s = solver.prepare(scaled(0.0));
  for (std::int64_t n = 0; n < solver.config().step_count(); ++n) solver.step(s);
  const VectorField3 exact = scaled(t_end);
  return oracle::l2(oracle::minus(s.velocity(), exact)) / oracle::l2(exact);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance-out";
  std::printf("helix acceptance, version %s, output %s\n", std::string(version()).c_str(), out.string().c_str());

  criterion("Helmholtz identity on 100 random fields", [](Detail& d) {
    const Grid3 g = desk();
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const NormReport r = norms(oracle::random_vector(g, seed));
      const double lhs = r.h1_seminorm * r.h1_seminorm;
      worst = std::max(worst, std::abs(lhs - r.div_l2 * r.div_l2 - r.curl_l2 * r.curl_l2) / lhs);
    }
    d.le("max | |grad v|^2 - |div v|^2 - |curl v|^2 | / |grad v|^2", worst, 1e-12);
  });

  criterion("swirl decomposition suite", [](Detail& d) {
    double udotxi = 0.0, rebuild = 0.0;
    const Grid3 g = desk();
    for (std::uint64_t seed = 11; seed <= 13; ++seed) {
      const VectorField3 v = lifted_random(g, seed);
      const SwirlDecomposition dec = decompose(v);
      const double vmax = oracle::sup_abs(v);
      udotxi = std::max(udotxi, oracle::sup_abs(swirl_direct(dec.U)) / vmax);
      rebuild = std::max(rebuild, oracle::sup_diff(dec.U + swirl_part(dec.eta), v) / vmax);
    }
    d.le("sup |U . xi| / sup |v| (64^2 x 32)", udotxi, 1e-12);
    d.le("sup |U + eta xi/|xi|^2 - v| / sup |v| (64^2 x 32)", rebuild, 1e-14);
    // Derivatives of eta xi / |xi|^2 resolve the poles of 1 / |xi|^2 only at fine spacing.
    const Grid3 f = Grid3::make(256, 256, 32);
    const VectorField3 v = lifted_random(f, 11);
    const SwirlDecomposition dec = decompose(v);
    d.le("|div U| / |v| (256^2 x 32)", oracle::l2(divergence(dec.U)) / oracle::l2(v), 1e-10);
    const HelicalityReport rv = helicality_report(v), ru = helicality_report(dec.U);
    d.le("U group residual - input group residual", ru.residual_group - rv.residual_group, 1e-8);
    d.le("U derivative residual - input derivative residual", ru.residual_pde - rv.residual_pde, 1e-8);
  });

  // Shared by the vorticity and symmetry criteria.
  RunResult plain_run;
  double plain_growth = 0.0;

  criterion("vorticity structure", [&](Detail& d) {
    const Grid3 g = desk();
    double worst = 0.0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      worst = std::max(worst, curl_structure(lifted_random(g, seed)).relative_defect);
    }
    d.le("curl vs Omega3 xi + (d_y eta, -d_x eta, 0), 20 lifted fields", worst, 1e-10);
    Solver solver(g, config(0.05, 0.01, 0.5));
    RunOptions opts;
    opts.sample_stride = 10;
    plain_run = solver.run(solver.prepare(swirling_flow(g)), opts);
    for (const auto& r : plain_run.records) {
      plain_growth = std::max(plain_growth, r.hel_res_group - plain_run.records.front().hel_res_group);
    }
    d.le("d_x u2 - d_y u1 rebuilt from solver states", plain_run.max_identity_defect, 1e-10);
  });

  criterion("reduction round trip and norm correspondence", [](Detail& d) {
    double err[2];
    for (int n : {64, 128}) {
      const Grid3 g = Grid3::make(n, n, n / 2);
      const TraceField2 w = random_trace(PlaneGrid::of(g), 5, 0.9);
      err[n == 128] = (trace(lift(w, g), 0.3) - w).l2_norm() / w.l2_norm();
    }
    d.le("|trace(lift w) - w| / |w| at 64^2 x 32", err[0], 1e-6);
    d.ge("improvement factor at 128^2 x 64", err[0] / err[1], 10.0);
    const Grid3 g = desk();
    const TraceField2 w = random_trace(PlaneGrid::of(g), 21, 1.2);
    const VectorField3 u = lift(w, g);
    for (double p : {2.0, 4.0}) {
      const auto [a, b] = norm_correspondence(w, u, p);
      d.le(p == 2.0 ? "L2 correspondence" : "L4 correspondence", std::abs(a - b) / a, 1e-8);
    }
  });

  criterion("mollifier properties", [](Detail& d) {
    const Grid3 g = desk();
    const Mollifier j(g, {0.2, 0.5});
    const ScalarField f = oracle::random_scalar(g, 41);
    double dc = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const ScalarField a = j.apply(derivative(f, axis));
      dc = std::max(dc, oracle::sup_diff(a, derivative(j.apply(f), axis)) / oracle::sup_abs(a));
    }
    d.le("derivative commutation", dc, 1e-13);
    const std::vector<double> thetas{0.25 * kPi, 0.5 * kPi, kPi};
    const VectorField3 v = lift(random_trace(PlaneGrid::of(g), 12, 1.2), g);
    d.le("S_theta commutation, theta in {pi/4, pi/2, pi}",
         verify_symmetry_commutation(v, {0.3, 0.5}, thetas).max_residual, 1e-6);
    double cdiff = 0.0;
    for (double c : {1.0, -2.5, 0.1}) {
      const auto k = ScalarField::from_function(g, [c](double, double, double) { return c; });
      cdiff = std::max(cdiff, oracle::sup_diff(j.apply(k), k));
    }
    d.le("constant preservation (exact)", cdiff, 0.0);
  });

  criterion("solver correctness", [](Detail& d) {
    {
      const Grid3 g = Grid3::make(32, 32, 16);
      const double nu = 0.1, t_end = 0.5;
      Solver solver(g, config(nu, 0.01, t_end));
      const auto u0 = VectorField3::from_function(g, abc);
      HelicalState s = solver.prepare(u0);
      for (std::int64_t n = 0; n < solver.config().step_count(); ++n) solver.step(s);
      const VectorField3 expect = std::exp(-nu * t_end) * u0;
      d.le("Beltrami relative error at T = 0.5", oracle::l2(oracle::minus(s.velocity(), expect)) / oracle::l2(expect),
           1e-6);
    }
    const double e1 = manufactured_error(0.1), e2 = manufactured_error(0.05), e3 = manufactured_error(0.025);
    d.ge("manufactured solution order (dt 0.1 -> 0.05)", std::log2(e1 / e2), 3.8);
    d.ge("manufactured solution order (dt 0.05 -> 0.025)", std::log2(e2 / e3), 3.8);
    const Grid3 g = desk();
    Solver solver(g, config(0.05, 0.01, 0.5));
    RunOptions opts;
    opts.helicality = false;
    opts.swirl_residual = false;
    const RunResult r = solver.run(solver.prepare(lifted_random(g, 2)), opts);
    d.le("energy budget drift per unit time", r.budget_drift_rate, 1e-8);
    d.le("max |div u| over every step", r.max_div_l2, 1e-10);
  });

  criterion("symmetry preservation", [&](Detail& d) {
    d.le("group residual growth over T = 0.5, no enforcement", plain_growth, 1e-5);
    const Grid3 g = desk();
    SolverConfig c = config(0.05, 0.01, 0.5);
    c.enforce_every = 20;
    Solver solver(g, c);
    HelicalState s = solver.prepare(swirling_flow(g));
    double worst = 0.0, worst_pde = 0.0;
    for (std::int64_t n = 0; n < c.step_count(); ++n) {
      solver.step(s);
      const HelicalityReport h = helicality_report(s.velocity());
      worst = std::max(worst, h.residual_group);
      worst_pde = std::max(worst_pde, h.residual_pde);
    }
    d.le("worst group residual, reprojection every 20 steps", worst, 1e-7);
    std::ostringstream os;
    os << "derivative residual with reprojection (reported) = " << worst_pde;
    d.note(os.str());
  });

  SweepResult sweep;
  bool sweep_ok = false;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    sweep = run_sweep(SweepConfig{});
    export_sweep(sweep, out / "sweep");
    sweep_ok = !sweep.partial;
    std::printf("      default sweep finished in %.0f s, partial = %d\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), sweep.partial);
  } catch (const std::exception& e) {
    std::printf("      default sweep threw: %s\n", e.what());
  }

  criterion("swirl equation", [&](Detail& d) {
    double res[2];
    for (int n : {64, 128}) {
      const Grid3 g = Grid3::make(n, n, n / 2);
      Solver solver(g, config(0.05, 0.64 / n, 0.5));
      RunOptions opts;
      opts.helicality = false;
      opts.identity_check = false;
      const RunResult r = solver.run(solver.prepare(swirling_flow(g)), opts);
      double a = 0.0;
      for (const auto& rec : r.records) {
        if (std::isfinite(rec.swirl_eq_res)) a = std::max(a, rec.swirl_eq_res);
      }
      res[n == 128] = a;
    }
    d.le("normalized residual at 64^2 x 32, dt 0.01", res[0], 1e-3);
    d.ge("reduction at 128^2 x 64, dt 0.005", res[0] / res[1], 4.0);
    if (!sweep_ok) throw Error("default sweep unavailable");
    d.le("Euler zero-swirl data: sup_t |eta|", sweep.euler.sup_eta_l2, 1e-6);
  });

  criterion("swirl scaling and uniform Omega3 bound", [&](Detail& d) {
    if (!sweep_ok || !sweep.swirl_fit || !sweep.properties) throw Error("default sweep unavailable");
    const ScalingFit& f = *sweep.swirl_fit;
    d.ge("slope of sup_t |eta| vs nu", f.slope, 0.85);
    d.le("slope of sup_t |eta| vs nu", f.slope, 1.15);
    std::ostringstream os;
    os << "95% CI [" << f.slope_low << ", " << f.slope_high << "], |eta_0| / nu in ["
       << sweep.properties->eta0_over_nu_min << ", " << sweep.properties->eta0_over_nu_max << "]";
    d.note(os.str());
    d.le("max_nu sup_t |Omega3| / value at largest nu", sweep.properties->omega3_uniformity, 2.0);
  });

  criterion("convergence to the Euler reference", [&](Detail& d) {
    if (!sweep_ok || !sweep.properties) throw Error("default sweep unavailable");
    const auto& runs = sweep.runs;
    // Oracle: recompute monotonicity directly from the per-nu values.
    double worst_late = 0.0;
    for (std::size_t i = 2; i < runs.size(); ++i) {
      worst_late = std::max(worst_late, runs[i].error_to_euler / runs[i - 1].error_to_euler);
    }
    d.le("error ratio between the two largest nu", runs[1].error_to_euler / runs[0].error_to_euler, 1.05);
    d.le("largest error ratio further down", worst_late, 1.0);
    d.le("error at smallest nu / error at largest nu", runs.back().error_to_euler / runs.front().error_to_euler, 0.15);
    d.le("Euler reference sup_t |eta|", sweep.euler.sup_eta_l2, 1e-6);
  });

  criterion("determinism", [&](Detail& d) {
    if (!sweep_ok) throw Error("default sweep unavailable");
    const ExportedFiles again = export_sweep(run_sweep(SweepConfig{}), out / "rerun");
    double differing = 0.0;
    std::vector<std::filesystem::path> files{again.manifest};
    files.insert(files.end(), again.csv.begin(), again.csv.end());
    for (const auto& p : files) {
      if (slurp(p) != slurp(out / "sweep" / p.filename())) {
        differing += 1.0;
        d.note("differs: " + p.filename().string());
      }
    }
    d.le("files differing between two runs of the default sweep", differing, 0.0);
    std::ostringstream os;
    os << files.size() << " files compared byte for byte";
    d.note(os.str());
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
