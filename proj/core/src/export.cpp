#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "helix/errors.hpp"
#include "helix/experiments.hpp"

namespace helix {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

// Shortest round-trip form; "nan" for samples a diagnostic does not cover.
void append_number(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

std::string csv_text(const std::vector<DiagnosticsRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    const double row[] = {r.t, r.energy, r.dissipation, r.eta_l2, r.grad_eta_l2, r.omega3_l2,
                          r.hel_res_group, r.hel_res_pde, r.swirl_eq_res, r.err_to_euler_local};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c > 0) out += ',';
      append_number(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  os.close();
  if (!os) throw Error("cannot write " + path.string());
}

json fit_json(const std::optional<ScalingFit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope},
          {"intercept", f->intercept},
          {"slope_ci", {f->slope_low, f->slope_high}},
          {"intercept_ci", {f->intercept_low, f->intercept_high}},
          {"confidence", f->confidence},
          {"r_squared", f->r_squared},
          {"points", f->points}};
}

json run_json(const NuRun& r, const std::string& csv) {
  return {{"nu", r.nu},
          {"csv", csv},
          {"samples", r.records.size()},
          {"failed", r.failed},
          {"failure", r.failure},
          {"warnings", r.warnings},
          {"eta0_l2", r.eta0_l2},
          {"h1_distance", r.h1_distance},
          {"sup_eta_l2", r.sup_eta_l2},
          {"grad_eta_l2l2", r.grad_eta_l2l2},
          {"sup_omega3_l2", r.sup_omega3_l2},
          {"error_to_euler", r.error_to_euler},
          {"max_div_l2", r.max_div_l2},
          {"budget_drift_rate", r.budget_drift_rate},
          {"max_hel_res_group", r.max_hel_res_group},
          {"max_hel_res_pde", r.max_hel_res_pde},
          {"max_swirl_eq_res", r.max_swirl_eq_res},
          {"max_omega3_eq_res", r.max_omega3_eq_res}};
}

bool has_reference(const SweepResult& r) { return !r.euler.records.empty() || r.euler.failed; }

}  // namespace

std::string csv_name(double nu) {
  std::string s = "nu_";
  append_number(s, nu);
  return s + ".csv";
}

ExportedFiles export_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error("cannot create output directory " + dir.string());

  ExportedFiles files;
  const SweepConfig& cfg = result.config;
  const LocalBox box = cfg.box();

  json m;
  m["schema_version"] = kSchemaVersion;
  m["version"] = std::string(version());
  m["config"] = json::parse(config_to_json(cfg));
  m["grid"] = {{"nx", cfg.grid.nx},
               {"ny", cfg.grid.ny},
               {"nz", cfg.grid.nz},
               {"length", cfg.grid.length},
               {"x_range", {-0.5 * cfg.grid.length, 0.5 * cfg.grid.length}},
               {"z_range", {-kPi, kPi}}};
  m["local_box"] = {{"half_width", box.half_width},
                    {"x_range", {-box.half_width, box.half_width}},
                    {"y_range", {-box.half_width, box.half_width}},
                    {"z_range", {-kPi, kPi}}};
  m["inputs"] = {{"base_swirl", result.inputs.base_swirl},
                 {"perturbation_swirl", result.inputs.perturbation_swirl},
                 {"perturbation_h1", result.inputs.perturbation_h1}};
  m["partial"] = result.partial;
  m["status"] = result.partial ? "partial" : "complete";

  json timings;
  double total = 0.0;
  if (has_reference(result)) {
    const auto path = dir / "euler.csv";
    write_file(path, csv_text(result.euler.records));
    files.csv.push_back(path);
    m["euler"] = run_json(result.euler, "euler.csv");
    timings["euler_seconds"] = result.euler.wall_seconds;
    total += result.euler.wall_seconds;
  } else {
    m["euler"] = nullptr;
  }
  m["runs"] = json::array();
  timings["runs"] = json::array();
  for (const NuRun& r : result.runs) {
    const std::string name = csv_name(r.nu);
    write_file(dir / name, csv_text(r.records));
    files.csv.push_back(dir / name);
    m["runs"].push_back(run_json(r, name));
    timings["runs"].push_back({{"nu", r.nu}, {"seconds", r.wall_seconds}});
    total += r.wall_seconds;
  }
  m["fits"] = {{"sup_eta_l2", fit_json(result.swirl_fit)},
               {"grad_eta_l2l2", fit_json(result.grad_eta_fit)},
               {"error_to_euler", fit_json(result.error_fit)}};
  if (result.properties) {
    const SweepProperties& p = *result.properties;
    m["properties"] = {{"eta0_over_nu", {p.eta0_over_nu_min, p.eta0_over_nu_max}},
                       {"grad_eta_over_nu", {p.grad_eta_over_nu_min, p.grad_eta_over_nu_max}},
                       {"error_monotone", p.error_monotone},
                       {"worst_error_ratio", p.worst_error_ratio},
                       {"omega3_uniformity", p.omega3_uniformity}};
  } else {
    m["properties"] = nullptr;
  }

  files.manifest = dir / "manifest.json";
  write_file(files.manifest, m.dump(2) + "\n");
  if (has_reference(result) || !result.runs.empty()) {
    timings["total_seconds"] = total;
    files.timings = dir / "timings.json";
    write_file(files.timings, timings.dump(2) + "\n");
  }
  return files;
}

}  // namespace helix
