#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "helix/solver.hpp"

namespace helix {

/// Library version, the project version at build time.
std::string_view version();

enum class BaseFlowKind {
  kZeroSwirl,  ///< analytic trace whose lift has no swirl (zero_swirl_trace)
  kDipole,     ///< vortex pair with iterative swirl removal after the lift
};

struct BaseFlowSpec {
  BaseFlowKind kind = BaseFlowKind::kZeroSwirl;
  double amplitude = 0.3;
  double sigma = 1.3;
  /// Passes of v <- P(v - eta xi / |xi|^2) for kDipole.
  int removal_iterations = 3;
  /// Largest accepted ||swirl(u0)|| / ||u0||.
  double swirl_tolerance = 1e-10;
};

enum class PerturbationKind {
  kAxialJet,  ///< Gaussian axial jet; its lift is pure swirl
  kNone,
};

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kAxialJet;
  double sigma = 1.3;
};

struct SweepConfig {
  Grid3 grid = Grid3::make(64, 64, 32);
  /// Template for every run; nu is overwritten per run.
  SolverConfig solver;
  BaseFlowSpec base;
  PerturbationSpec perturbation;
  std::vector<double> nu_list{0.1, 0.05, 0.025, 0.0125, 0.00625};
  /// Defaults to LocalBox::quarter_of(grid) when unset.
  std::optional<LocalBox> local_box;
  int sample_stride = 1;
  bool omega3_residual = true;
  std::filesystem::path output_dir = "helix-out";

  [[nodiscard]] LocalBox box() const { return local_box.value_or(LocalBox::quarter_of(grid)); }
  /// Structural checks only (no fields are built). Throws InvalidArgument.
  void validate() const;
};

/// Fields shared by every run of a sweep.
struct SweepInputs {
  VectorField3 u0;           ///< physical, projected zero-swirl base flow
  VectorField3 g;            ///< physical, projected lifted perturbation
  double base_swirl = 0.0;   ///< ||swirl(u0)|| / ||u0||
  double perturbation_swirl = 0.0;  ///< ||swirl(g)||
  double perturbation_h1 = 0.0;     ///< ||g||_{H1}
};

/// Builds and checks u0 and g. Throws InvalidArgument with the measured value
/// when the base flow swirl exceeds its tolerance or the perturbation swirl
/// leaves [0.9, 1.1].
SweepInputs make_sweep_inputs(const SweepConfig& cfg);

struct InitialData {
  VectorField3 u;            ///< physical
  double nu = 0.0;
  double eta_l2 = 0.0;       ///< ||swirl(u)||
  double h1_distance = 0.0;  ///< ||u - u0||_{H1}
};

/// P(u0 + nu g). Throws InvalidArgument when ||eta|| exceeds
/// 1.1 nu ||swirl(g)|| (plus the base flow tolerance) or the H1 distance
/// exceeds 1.01 nu ||g||_{H1}.
InitialData build_initial_data(const SweepInputs& inputs, double nu, double swirl_tolerance = 1e-10);
InitialData build_initial_data(const SweepConfig& cfg, double nu);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;     ///< log of the prefactor
  double slope_low = 0.0;     ///< two-sided confidence interval
  double slope_high = 0.0;
  double intercept_low = 0.0;
  double intercept_high = 0.0;
  double r_squared = 1.0;
  double confidence = 0.95;
  std::size_t points = 0;
};

/// Least squares of log(value) on log(nu) with Student-t intervals from the
/// residual variance. Requires >= 3 points with nu > 0 and value > 0.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, double confidence = 0.95);

struct NuRun {
  double nu = 0.0;
  bool failed = false;
  std::string failure;
  std::vector<DiagnosticsRecord> records;
  std::vector<std::string> warnings;
  double eta0_l2 = 0.0;
  double h1_distance = 0.0;
  double sup_eta_l2 = 0.0;
  double grad_eta_l2l2 = 0.0;   ///< sqrt(nu) ||grad eta||_{L2(0,T; L2)}
  double sup_omega3_l2 = 0.0;
  /// ||u - u_Euler||_{L2(0,T; L2(U))}; NaN for the reference itself or on failure.
  double error_to_euler = std::numeric_limits<double>::quiet_NaN();
  double max_div_l2 = 0.0;
  double budget_drift_rate = 0.0;
  double max_hel_res_group = 0.0;
  double max_hel_res_pde = 0.0;
  double max_swirl_eq_res = 0.0;
  double max_omega3_eq_res = 0.0;
  double wall_seconds = 0.0;    ///< exported to timings.json only
};

struct SweepProperties {
  double eta0_over_nu_min = 0.0;
  double eta0_over_nu_max = 0.0;
  /// Largest error_to_euler(nu_{i+1}) / error_to_euler(nu_i) along the list.
  double worst_error_ratio = 0.0;
  bool error_monotone = false;
  /// max over nu of sup ||Omega3|| divided by the value at the largest nu.
  double omega3_uniformity = 0.0;
  double grad_eta_over_nu_min = 0.0;
  double grad_eta_over_nu_max = 0.0;
};

struct SweepResult {
  SweepConfig config;
  SweepInputs inputs;
  NuRun euler;
  std::vector<NuRun> runs;  ///< in nu_list order
  std::optional<ScalingFit> swirl_fit;        ///< sup ||eta|| vs nu
  std::optional<ScalingFit> grad_eta_fit;     ///< sqrt(nu) ||grad eta||_{L2L2} vs nu
  std::optional<ScalingFit> error_fit;        ///< error_to_euler vs nu
  std::optional<SweepProperties> properties;  ///< needs >= 2 successful runs
  bool partial = false;
};

/// Local-box samples of a physical velocity, in grid order; the distance of
/// two such samples is the L2(U) norm of the difference.
std::vector<double> local_samples(const VectorField3& u, const LocalBox& box);
double local_distance(std::span<const double> a, std::span<const double> b, const Grid3& grid);

/// Called before each run with (nu, index) where index 0 is the Euler reference.
using SweepProgress = std::function<void(double nu, std::size_t index)>;

/// Euler reference first, then every nu in order. A run that throws is kept
/// with its failure marker and the sweep continues; result.partial is set.
SweepResult run_sweep(const SweepConfig& cfg, const SweepProgress& progress = {});

/// Summary of one run (reference distance excluded), used by run_sweep and
/// for standalone runs.
NuRun run_single(const SweepConfig& cfg, const SweepInputs& inputs, double nu,
                 const RunOptions& extra = {});

/// JSON configuration with every key optional and unknown keys rejected.
/// Throws InvalidArgument on malformed input.
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::filesystem::path& path);
/// Canonical JSON echo of every field (sorted keys).
std::string config_to_json(const SweepConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "t,energy,dissipation,eta_l2,grad_eta_l2,omega3_l2,hel_res_group,hel_res_pde,swirl_eq_res,"
    "err_to_euler_local";

/// File name of the series for one viscosity, e.g. "nu_0.025.csv".
std::string csv_name(double nu);

struct ExportedFiles {
  std::filesystem::path manifest;
  std::filesystem::path timings;
  std::vector<std::filesystem::path> csv;
};

/// Writes manifest.json, one CSV per run (euler.csv for the reference) and a
/// timings.json sidecar holding wall-clock times, so everything else is
/// byte-identical across reruns. A result without runs writes the manifest
/// only. Throws Error when the directory cannot be written.
ExportedFiles export_sweep(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace helix
