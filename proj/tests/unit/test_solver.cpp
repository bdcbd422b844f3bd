#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "helix/checkpoint.hpp"
#include "helix/errors.hpp"
#include "helix/helical.hpp"
#include "helix/reduction.hpp"
#include "helix/solver.hpp"
#include "helix/spectral.hpp"
#include "helix/traces.hpp"
#include "oracles.hpp"

using namespace helix;

namespace {

using V3 = std::array<double, 3>;

SolverConfig config(double nu, double dt, double t_end) {
  SolverConfig c;
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

// ABC flow with unit wavenumber: curl u = u, so the nonlinear term is a pure
// gradient and u(t) = exp(-nu t) u(0).
V3 abc(double x, double y, double z) {
  const double a = 1.0, b = 0.7, c = 0.4;
  return {a * std::sin(z) + c * std::cos(y), b * std::sin(x) + a * std::cos(z), c * std::sin(y) + b * std::cos(x)};
}

// Divergence-free cellular field with horizontal wavenumber 1/2 and unit
// vertical wavenumber; -lap V = 1.5 V.
struct Cellular {
  static constexpr double al = 0.5;
  static V3 v(double x, double y, double z) {
    const double sx = std::sin(al * x), cx = std::cos(al * x), sy = std::sin(al * y), cy = std::cos(al * y);
    return {cx * sy * std::sin(z), sx * cy * std::sin(z), -sx * sy * std::cos(z)};
  }
  // (V . grad) V from the hand-differentiated components.
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

double amp(double t) { return 1.0 + 0.5 * std::sin(3.0 * t); }
double amp_dot(double t) { return 1.5 * std::cos(3.0 * t); }

double manufactured_error(double dt) {
  const Grid3 g = Grid3::make(32, 32, 8);
  const double nu = 0.05, t_end = 0.5;
  Solver solver(g, config(nu, dt, t_end));
  solver.set_forcing([g, nu](double t) {
    const double a = amp(t), ad = amp_dot(t);
    return VectorField3::from_function(g, [&](double x, double y, double z) {
      const V3 v = Cellular::v(x, y, z);
      const V3 n = Cellular::advect(x, y, z);
      V3 f;
      for (int c = 0; c < 3; ++c) f[c] = ad * v[c] + a * a * n[c] + nu * 1.5 * a * v[c];
      return f;
    });
  });
  const auto u0 = VectorField3::from_function(g, [](double x, double y, double z) {
    V3 v = Cellular::v(x, y, z);
    for (double& c : v) c *= amp(0.0);
    return v;
  });
  HelicalState s = solver.prepare(u0);
  for (std::int64_t n = 0; n < solver.config().step_count(); ++n) solver.step(s);
  const auto exact = VectorField3::from_function(g, [&](double x, double y, double z) {
    V3 v = Cellular::v(x, y, z);
    for (double& c : v) c *= amp(t_end);
    return v;
  });
  return oracle::l2(oracle::minus(s.velocity(), exact)) / oracle::l2(exact);
}

Grid3 default_grid() { return Grid3::make(64, 64, 32); }

VectorField3 helical_field(const Grid3& g, std::uint64_t seed) {
  return lift(random_trace(PlaneGrid::of(g), seed, 1.2), g);
}

VectorField3 zero_swirl_flow(const Grid3& g) { return lift(zero_swirl_trace(PlaneGrid::of(g), 0.3, 1.3), g); }

// Zero-swirl flow plus an axial jet carrying swirl of norm 0.05.
VectorField3 swirling_flow(const Grid3& g) {
  const VectorField3 jet = lift(axial_jet_trace(PlaneGrid::of(g), 1.0, 1.3), g);
  return zero_swirl_flow(g) + (0.05 / l2_norm(swirl(jet))) * jet;
}

}  // namespace

TEST_CASE("solver configuration is validated") {
  CHECK_THROWS_AS(config(-1.0, 0.01, 0.5).validate(), InvalidArgument);
  CHECK_THROWS_AS(config(0.1, 0.0, 0.5).validate(), InvalidArgument);
  CHECK_THROWS_AS(config(0.1, 0.03, 0.5).validate(), InvalidArgument);
  CHECK_NOTHROW(config(0.1, 0.01, 0.5).validate());
  CHECK(config(0.1, 0.01, 0.5).step_count() == 50);
  SolverConfig bad = config(0.1, 0.01, 0.5);
  bad.cfl_safety = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = config(0.1, 0.01, 0.5);
  bad.epsilon = 0.7;
  CHECK_THROWS_AS(Solver(default_grid(), bad), InvalidArgument);
}

TEST_CASE("Beltrami flow decays at the viscous rate") {
  const Grid3 g = Grid3::make(32, 32, 16);
  const double nu = 0.1, t_end = 0.5;
  Solver solver(g, config(nu, 0.01, t_end));
  const auto u0 = VectorField3::from_function(g, abc);
  HelicalState s = solver.prepare(u0);
  for (std::int64_t n = 0; n < solver.config().step_count(); ++n) solver.step(s);
  const VectorField3 expect = std::exp(-nu * t_end) * u0;
  const double err = oracle::l2(oracle::minus(s.velocity(), expect)) / oracle::l2(expect);
  MESSAGE("Beltrami relative error " << err);
  CHECK(err <= 1e-6);
  CHECK(s.t == doctest::Approx(t_end));
  CHECK(s.steps == 50);
}

TEST_CASE("manufactured solution converges at fourth order in time") {
  const double e1 = manufactured_error(0.1);
  const double e2 = manufactured_error(0.05);
  const double e3 = manufactured_error(0.025);
  const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  MESSAGE("errors " << e1 << " " << e2 << " " << e3 << "  orders " << p1 << " " << p2);
  CHECK(p1 >= 3.8);
  CHECK(p2 >= 3.8);
}

TEST_CASE("Euler dynamics conserve the discrete energy") {
  const Grid3 g = Grid3::make(32, 32, 16);
  Solver solver(g, config(0.0, 0.01, 0.2));
  RunOptions opts;
  opts.helicality = false;
  opts.swirl_residual = false;
  opts.identity_check = false;
  const RunResult r = solver.run(solver.prepare(oracle::random_vector(g, 3)), opts);
  // Random data is far from smooth but the dealiased nonlinear term is still orthogonal to u.
  CHECK(std::abs(r.records.back().energy - r.records.front().energy) <= 1e-9 * r.records.front().energy);
  CHECK(r.records.back().dissipation == 0.0);
}

TEST_CASE("energy budget closes for a viscous helical run") {
  const Grid3 g = default_grid();
  Solver solver(g, config(0.05, 0.01, 0.2));
  RunOptions opts;
  opts.sample_stride = 5;
  opts.helicality = false;
  const RunResult r = solver.run(solver.prepare(helical_field(g, 2)), opts);
  MESSAGE("budget drift per unit time " << r.budget_drift_rate << ", max div " << r.max_div_l2);
  CHECK(r.budget_drift_rate <= 1e-8);
  CHECK(r.max_div_l2 <= 1e-10);
  CHECK(r.records.size() == 5);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(r.records[i].energy < r.records[i - 1].energy);
    CHECK(r.records[i].dissipation > 0.0);
  }
}

TEST_CASE("regularized stepping satisfies the energy inequality and approaches the plain system") {
  const Grid3 g = Grid3::make(32, 32, 16);
  const VectorField3 u0 = helical_field(g, 4);
  SolverConfig plain = config(0.05, 0.01, 0.1);
  Solver reference(g, plain);
  HelicalState ref = reference.prepare(u0);
  for (int n = 0; n < 10; ++n) reference.step(ref);

  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.4, 0.2, 0.1}) {
    SolverConfig c = plain;
    c.epsilon = eps;
    Solver solver(g, c);
    CHECK(solver.regularized());
    const RunResult r = solver.run(solver.prepare(u0), RunOptions{.sample_stride = 5, .helicality = false});
    for (const auto& rec : r.records) CHECK(rec.energy_budget <= r.records.front().energy * (1 + 1e-10));
    const double d = l2_norm(r.final_state.u - ref.u);
    CHECK(d < prev);
    prev = d;
  }
  HelicalState s = reference.prepare(u0);
  CHECK_THROWS_AS(reference.step_regularized(s), InvalidArgument);
}

TEST_CASE("oversized steps are rejected before stepping") {
  const Grid3 g = Grid3::make(32, 32, 16);
  Solver solver(g, config(0.01, 0.5, 0.5));
  HelicalState s = solver.prepare(VectorField3::from_function(g, abc));
  const VectorField3 before = s.u;
  CHECK(solver.cfl_limit(s) < 0.5);
  CHECK_THROWS_AS(solver.step(s), CflViolation);
  CHECK(l2_norm(s.u - before) == 0.0);
  CHECK(s.steps == 0);
}

TEST_CASE("non-finite states raise a solver failure") {
  const Grid3 g = Grid3::make(16, 16, 8);
  Solver solver(g, config(0.01, 0.01, 0.5));
  HelicalState s = solver.prepare(oracle::random_vector(g, 9));
  s.u[0].coeffs()[5] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(solver.step(s), SolverFailure);
}

TEST_CASE("stiffness warning only for small positive viscosity") {
  const Grid3 g = Grid3::make(16, 16, 8);
  CHECK(Solver(g, config(1e-4, 0.01, 0.5)).warnings().size() == 1);
  CHECK(Solver(g, config(0.0, 0.01, 0.5)).warnings().empty());
  CHECK(Solver(g, config(0.01, 0.01, 0.5)).warnings().empty());
}

TEST_CASE("sample stride must divide the step count") {
  const Grid3 g = Grid3::make(16, 16, 8);
  Solver solver(g, config(0.01, 0.01, 0.1));
  const HelicalState s = solver.prepare(oracle::random_vector(g, 1));
  CHECK_THROWS_AS(solver.run(s, RunOptions{.sample_stride = 3}), InvalidArgument);
  CHECK_THROWS_AS(solver.run(s, RunOptions{.sample_stride = 0}), InvalidArgument);
}

TEST_CASE("helical data stays helical and divergence free") {
  const Grid3 g = default_grid();
  Solver solver(g, config(0.05, 0.01, 0.5));
  RunOptions opts;
  opts.sample_stride = 10;
  const RunResult r = solver.run(solver.prepare(swirling_flow(g)), opts);
  double growth = 0.0;
  for (const auto& rec : r.records) growth = std::max(growth, rec.hel_res_group - r.records.front().hel_res_group);
  MESSAGE("helicality residual growth " << growth);
  CHECK(growth <= 1e-5);
  CHECK(r.max_div_l2 <= 1e-10);
  CHECK(r.max_identity_defect <= 1e-10);
}

TEST_CASE("random helical data stays helical over a short run") {
  const Grid3 g = default_grid();
  Solver solver(g, config(0.05, 0.01, 0.1));
  const RunResult r = solver.run(solver.prepare(helical_field(g, 6)), RunOptions{.sample_stride = 5});
  CHECK(r.records.back().hel_res_group - r.records.front().hel_res_group <= 1e-5);
}

TEST_CASE("symmetry enforcement keeps the helicality residual small") {
  const Grid3 g = default_grid();
  SolverConfig c = config(0.05, 0.01, 0.5);
  c.enforce_every = 20;
  Solver solver(g, c);
  double worst = 0.0;
  HelicalState s = solver.prepare(swirling_flow(g));
  for (std::int64_t n = 0; n < c.step_count(); ++n) {
    solver.step(s);
    worst = std::max(worst, helicality_report(s.velocity()).residual_group);
  }
  MESSAGE("worst helicality residual with enforcement " << worst);
  CHECK(worst <= 1e-7);
}

TEST_CASE("enforcement restores helicality of a perturbed state") {
  const Grid3 g = default_grid();
  Solver solver(g, config(0.05, 0.01, 0.1));
  // Axisymmetric vortex whose strength varies with z: divergence free, not helical.
  const auto vortex = VectorField3::from_function(g, [](double x, double y, double z) {
    const double s2 = 1.5 * 1.5, psi = oracle::window(x, y, 1.5) * (1.0 + 0.5 * std::cos(z));
    return V3{y / s2 * psi, -x / s2 * psi, 0.0};
  });
  HelicalState s = solver.prepare(zero_swirl_flow(g) + 1e-3 * vortex);
  CHECK(helicality_report(s.velocity()).residual_group > 1e-5);
  solver.enforce_symmetry(s);
  CHECK(helicality_report(s.velocity()).residual_group <= 1e-10);
}

TEST_CASE("inviscid zero-swirl data keeps zero swirl") {
  const Grid3 g = default_grid();
  Solver solver(g, config(0.0, 0.01, 0.5));
  const HelicalState s0 = solver.prepare(zero_swirl_flow(g));
  RunOptions opts;
  opts.sample_stride = 5;
  opts.helicality = false;
  const RunResult r = solver.run(s0, opts);
  double sup = 0.0;
  for (const auto& rec : r.records) sup = std::max(sup, rec.eta_l2);
  MESSAGE("initial swirl " << r.records.front().eta_l2 << ", sup swirl " << sup);
  CHECK(r.records.front().eta_l2 <= 1e-12);
  CHECK(sup <= 1e-6);
}

TEST_CASE("swirl and Omega3 equations are satisfied to discretization accuracy") {
  double swirl_res[2], omega_res[2];
  int idx = 0;
  for (int n : {64, 128}) {
    const Grid3 g = Grid3::make(n, n, n / 2);
    Solver solver(g, config(0.05, 0.64 / n, 0.5));
    RunOptions opts;
    opts.helicality = false;
    opts.identity_check = false;
    opts.omega3_residual = true;
    const RunResult r = solver.run(solver.prepare(swirling_flow(g)), opts);
    double a = 0.0, b = 0.0;
    for (const auto& rec : r.records) {
      a = std::max(a, rec.swirl_eq_res);
      b = std::max(b, rec.omega3_eq_res);
    }
    swirl_res[idx] = a;
    omega_res[idx++] = b;
  }
  MESSAGE("swirl residual " << swirl_res[0] << " -> " << swirl_res[1] << ", Omega3 residual " << omega_res[0]
                            << " -> " << omega_res[1]);
  CHECK(swirl_res[0] <= 1e-3);
  CHECK(swirl_res[1] * 4.0 <= swirl_res[0]);
  CHECK(omega_res[1] * 4.0 <= omega_res[0]);
}

TEST_CASE("checkpoint restart reproduces a continuous run bit for bit") {
  const Grid3 g = Grid3::make(32, 32, 16);
  const SolverConfig c = config(0.05, 0.01, 0.5);
  Solver solver(g, c);
  HelicalState a = solver.prepare(helical_field(g, 8));
  HelicalState b = a;
  for (int n = 0; n < 4; ++n) solver.step(a);
  for (int n = 0; n < 2; ++n) solver.step(b);

  const auto path = std::filesystem::temp_directory_path() / "helix_checkpoint_test.bin";
  write_checkpoint(path, b, g, c);
  const Checkpoint cp = read_checkpoint(path);
  CHECK(cp.grid == g);
  CHECK(cp.t == b.t);
  CHECK(cp.cfg_hash == config_hash(c));
  CHECK(config_hash(c) != config_hash(config(0.06, 0.01, 0.5)));

  HelicalState resumed;
  resumed.u = cp.u;
  resumed.t = cp.t;
  for (int n = 0; n < 2; ++n) solver.step(resumed);
  for (int comp = 0; comp < 3; ++comp) {
    auto x = resumed.u[comp].coeffs();
    auto y = a.u[comp].coeffs();
    CHECK(std::equal(x.begin(), x.end(), y.begin()));
  }
  std::filesystem::resize_file(path, 40);
  CHECK_THROWS_AS(read_checkpoint(path), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("value-semantics step wrappers match the solver") {
  const Grid3 g = Grid3::make(16, 16, 8);
  SolverConfig c = config(0.05, 0.01, 0.5);
  Solver solver(g, c);
  const HelicalState s0 = solver.prepare(oracle::random_vector(g, 12));
  HelicalState s1 = s0;
  solver.step(s1);
  const HelicalState s2 = step(s0, g, c);
  CHECK(l2_norm(s1.u - s2.u) == 0.0);

  c.epsilon = 0.2;
  Solver reg(g, c);
  HelicalState r1 = s0;
  reg.step_regularized(r1);
  CHECK(l2_norm(step_regularized(s0, g, c).u - r1.u) == 0.0);
}
