// helix-visc: sweeps, single runs and a quick self-check of the operators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helix/errors.hpp"
#include "helix/experiments.hpp"
#include "helix/helical.hpp"
#include "helix/mollifier.hpp"
#include "helix/reduction.hpp"
#include "helix/spectral.hpp"
#include "helix/traces.hpp"

using namespace helix;

namespace {

struct Overrides {
  std::vector<int> grid;
  std::vector<double> nu_list;
  std::optional<int> enforce_every;
};

SweepConfig configure(const std::string& path, const Overrides& o) {
  SweepConfig c = path.empty() ? SweepConfig{} : load_config(path);
  if (!o.grid.empty()) {
    if (o.grid.size() != 3) throw InvalidArgument("--grid takes NX,NY,NZ");
    c.grid = Grid3::make(o.grid[0], o.grid[1], o.grid[2], c.grid.length);
  }
  if (!o.nu_list.empty()) c.nu_list = o.nu_list;
  if (o.enforce_every) c.solver.enforce_every = *o.enforce_every;
  c.validate();
  return c;
}

void print_run(const NuRun& r) {
  std::printf("nu=%-10g sup_eta=%.6e grad_eta_l2l2=%.6e sup_omega3=%.6e err_to_euler=%.6e max_div=%.2e %s\n", r.nu,
              r.sup_eta_l2, r.grad_eta_l2l2, r.sup_omega3_l2, r.error_to_euler, r.max_div_l2,
              r.failed ? ("FAILED: " + r.failure).c_str() : "ok");
  for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
}

int cmd_run(const std::string& config, const std::string& out, const Overrides& o) {
  const SweepConfig c = configure(config, o);
  const SweepInputs in = make_sweep_inputs(c);
  SweepResult r;
  r.config = c;
  r.inputs = in;
  r.runs.push_back(run_single(c, in, c.nu_list.front()));
  r.partial = r.runs.back().failed;
  print_run(r.runs.back());
  const auto dir = out.empty() ? c.output_dir : std::filesystem::path(out);
  export_sweep(r, dir);
  std::printf("wrote %s\n", dir.string().c_str());
  return r.partial ? 3 : 0;
}

int cmd_sweep(const std::string& config, const std::string& out, const Overrides& o) {
  const SweepConfig c = configure(config, o);
  const SweepResult r = run_sweep(c, [](double nu, std::size_t i) {
    if (i == 0) {
      std::fprintf(stderr, "euler reference\n");
    } else {
      std::fprintf(stderr, "nu = %g\n", nu);
    }
  });
  print_run(r.euler);
  for (const NuRun& run : r.runs) print_run(run);
  if (r.swirl_fit) {
    std::printf("sup_eta slope %.4f  CI [%.4f, %.4f]\n", r.swirl_fit->slope, r.swirl_fit->slope_low,
                r.swirl_fit->slope_high);
  }
  if (r.properties) {
    std::printf("omega3 uniformity %.4f  error monotone %s\n", r.properties->omega3_uniformity,
                r.properties->error_monotone ? "yes" : "no");
  }
  const auto dir = out.empty() ? c.output_dir : std::filesystem::path(out);
  export_sweep(r, dir);
  std::printf("wrote %s%s\n", dir.string().c_str(), r.partial ? " (partial)" : "");
  return r.partial ? 3 : 0;
}

// Quick operator checks on seeded random fields; the full suites live in the tests.
class Checker {
 public:
  void check(const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    failed_ += ok ? 0 : 1;
    std::printf("%s  %-44s %.3e  (tol %.1e)\n", ok ? "PASS" : "FAIL", name.c_str(), value, tol);
  }
  [[nodiscard]] int failures() const { return failed_; }

 private:
  int failed_ = 0;
};

VectorField3 noise(const Grid3& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  VectorField3 v(g);
  for (int c = 0; c < 3; ++c) {
    for (double& x : v[c].values()) x = d(rng);
  }
  return v;
}

int cmd_verify(std::uint64_t seed) {
  Checker ck;
  std::mt19937_64 rng(seed);
  const Grid3 g = Grid3::make(64, 64, 32);
  const PlaneGrid pg = PlaneGrid::of(g);

  double helm = 0.0;
  for (int n = 0; n < 20; ++n) {
    const NormReport r = norms(noise(Grid3::make(16, 16, 16), rng));
    const double lhs = r.h1_seminorm * r.h1_seminorm;
    helm = std::max(helm, std::abs(lhs - r.div_l2 * r.div_l2 - r.curl_l2 * r.curl_l2) / lhs);
  }
  ck.check("grad norm = div norm + curl norm (20 fields)", helm, 1e-12);

  double udotxi = 0.0, rebuild = 0.0, curl_defect = 0.0, vort = 0.0;
  for (int n = 0; n < 3; ++n) {
    const VectorField3 v = leray_project(lift(random_trace(pg, rng(), 1.2), g));
    const SwirlDecomposition d = decompose(v);
    const double vmax = max_abs(v);
    udotxi = std::max(udotxi, max_abs(swirl(d.U)) / vmax);
    rebuild = std::max(rebuild, max_abs(d.U + swirl_part(d.eta) - v) / vmax);
    curl_defect = std::max(curl_defect, curl_structure(v).relative_defect);
    vort = std::max(vort, vorticity_identity_defect(v));
  }
  ck.check("U . xi = 0 pointwise", udotxi, 1e-12);
  ck.check("U + eta xi / |xi|^2 = v", rebuild, 1e-14);
  ck.check("curl = Omega3 xi + (d_y eta, -d_x eta, 0)", curl_defect, 1e-10);
  ck.check("d_x u2 - d_y u1 from the decomposition", vort, 1e-10);

  // A narrow trace exercises interpolation at the off-grid slice; the norm
  // comparison needs |u|^p resolved on the grid, so it uses the wider one.
  const TraceField2 w = random_trace(pg, rng(), 0.9);
  ck.check("trace(lift(w)) = w at x3 = 0.3", (trace(lift(w, g), 0.3) - w).l2_norm() / w.l2_norm(), 1e-6);
  const TraceField2 wide = random_trace(pg, rng(), 1.2);
  const VectorField3 u = lift(wide, g);
  for (double p : {2.0, 4.0}) {
    const auto [a, b] = norm_correspondence(wide, u, p);
    ck.check("trace/lift norm correspondence p = " + std::to_string(static_cast<int>(p)), std::abs(a - b) / a, 1e-8);
  }

  const Mollifier j(g, {0.2, 0.5});
  const VectorField3 s = noise(g, rng);
  double dcomm = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const ScalarField a = j.apply(derivative(s[0], axis));
    const ScalarField b = derivative(j.apply(s[0]), axis);
    dcomm = std::max(dcomm, max_abs(a - b) / max_abs(a));
  }
  ck.check("mollifier commutes with derivatives", dcomm, 1e-13);
  const std::vector<double> thetas{0.25 * kPi, 0.5 * kPi, kPi};
  const VectorField3 h = lift(random_trace(pg, rng(), 1.2), g);
  ck.check("mollifier commutes with S_theta", verify_symmetry_commutation(h, {0.3, 0.5}, thetas).max_residual, 1e-6);
  const auto one = ScalarField::from_function(g, [](double, double, double) { return 1.5; });
  ck.check("mollifier preserves constants", max_abs(j.apply(one) - one), 0.0);

  std::printf("%d failure(s)\n", ck.failures());
  return ck.failures() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vanishing-viscosity experiments for helical flows"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  std::uint64_t seed = 1;
  app.add_option("--grid", o.grid, "Grid size NX,NY,NZ")->delimiter(',')->expected(3);
  app.add_option("--nu-list", o.nu_list, "Viscosities, strictly decreasing")->delimiter(',');
  app.add_option("--enforce-symmetry", o.enforce_every, "Re-project onto helical fields every k steps")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for the randomized checks of verify");

  std::string config, out;
  CLI::App* run = app.add_subcommand("run", "Integrate the first viscosity of the config");
  run->add_option("--config", config, "JSON configuration")->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (default: config output_dir)");
  CLI::App* sweep = app.add_subcommand("sweep", "Euler reference plus every viscosity, fits and export");
  sweep->add_option("--config", config, "JSON configuration")->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory (default: config output_dir)");
  CLI::App* verify = app.add_subcommand("verify", "Quick algebra, reduction and mollifier checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, o);
    if (*sweep) return cmd_sweep(config, out, o);
    if (*verify) return cmd_verify(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
