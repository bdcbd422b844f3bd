#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helix/errors.hpp"
#include "helix/experiments.hpp"

using namespace helix;

namespace {

std::filesystem::path scratch(const char* name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

constexpr const char* kSmall = R"({
  "grid": {"nx": 64, "ny": 64, "nz": 16},
  "solver": {"dt": 0.01, "t_end": 0.05},
  "nu_list": [0.05],
  "omega3_residual": false
})";

}  // namespace

TEST_CASE("empty config yields the defaults") {
  const SweepConfig c = parse_config("{}");
  const SweepConfig d;
  CHECK(c.grid == d.grid);
  CHECK(c.nu_list == d.nu_list);
  CHECK(c.base.amplitude == d.base.amplitude);
  CHECK(c.box() == LocalBox::quarter_of(c.grid));
  CHECK(config_to_json(c) == config_to_json(d));
}

TEST_CASE("config fields are read and echoed") {
  const SweepConfig c = parse_config(R"({
    "grid": {"nx": 32, "ny": 48, "nz": 16, "length": 30.0},
    "solver": {"dt": 0.005, "t_end": 0.25, "enforce_every": 20, "dealias_rule": "truncate_box",
               "interp": "bicubic", "dealias": true},
    "base": {"kind": "dipole", "amplitude": 0.5, "sigma": 1.1, "removal_iterations": 2, "swirl_tolerance": 0.01},
    "perturbation": {"kind": "none", "sigma": 1.0},
    "nu_list": [0.2, 0.1, 0.05],
    "local_box_half_width": 5.0,
    "sample_stride": 5,
    "omega3_residual": false,
    "output_dir": "runs/a"
  })");
  CHECK(c.grid == Grid3::make(32, 48, 16, 30.0));
  CHECK(c.solver.dt == 0.005);
  CHECK(c.solver.enforce_every == 20);
  CHECK(c.solver.dealias_rule == DealiasRule::kTruncateBox);
  CHECK(c.solver.interp == Interp::kBicubic);
  CHECK(c.base.kind == BaseFlowKind::kDipole);
  CHECK(c.base.removal_iterations == 2);
  CHECK(c.perturbation.kind == PerturbationKind::kNone);
  CHECK(c.nu_list == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(c.box().half_width == 5.0);
  CHECK(c.sample_stride == 5);
  CHECK_FALSE(c.omega3_residual);
  CHECK(c.output_dir == std::filesystem::path("runs/a"));

  const std::string echo = config_to_json(c);
  CHECK(config_to_json(parse_config(echo)) == echo);
}

TEST_CASE("unknown keys, wrong types and bad values are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"nu": 0.1})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"nx": 64, "nw": 3}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"viscosity": 0.1}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"nx": 64.5}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"nu_list": 0.1})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"nu_list": ["a"]})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"nu_list": []})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"nu_list": [0.05, 0.1]})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"base": {"kind": "tripole"}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"dealias": "yes"}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"nx": 7}})"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"([1, 2])"), InvalidArgument);
  CHECK_THROWS_AS(parse_config(R"({"grid": )"), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/helix.json"), InvalidArgument);
}

TEST_CASE("csv file names use the shortest round-trip form") {
  CHECK(csv_name(0.025) == "nu_0.025.csv");
  CHECK(csv_name(0.00625) == "nu_0.00625.csv");
  CHECK(csv_name(0.1) == "nu_0.1.csv");
}

TEST_CASE("an empty sweep writes the manifest only") {
  const auto dir = scratch("helix_export_empty");
  SweepResult r;
  const ExportedFiles f = export_sweep(r, dir);
  CHECK(std::filesystem::exists(f.manifest));
  CHECK(f.csv.empty());
  CHECK(f.timings.empty());
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  const std::string m = slurp(f.manifest);
  CHECK(m.find("\"schema_version\": 1") != std::string::npos);
  CHECK(m.find("\"version\": \"" + std::string(version()) + "\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("one-nu sweep exports one series per run with the exact header") {
  const SweepResult r = run_sweep(parse_config(kSmall));
  const auto dir = scratch("helix_export_one");
  const ExportedFiles f = export_sweep(r, dir);
  REQUIRE(f.csv.size() == 2);
  CHECK(f.csv[0].filename() == "euler.csv");
  CHECK(f.csv[1].filename() == "nu_0.05.csv");
  const std::string csv = slurp(f.csv[1]);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "t,energy,dissipation,eta_l2,grad_eta_l2,omega3_l2,hel_res_group,hel_res_pde,swirl_eq_res,"
        "err_to_euler_local");
  CHECK(count_lines(csv) == 1 + r.runs[0].records.size());
  CHECK(std::filesystem::exists(f.timings));
  CHECK(slurp(f.manifest).find("wall") == std::string::npos);
  CHECK(slurp(f.timings).find("total_seconds") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reruns of the same config are byte-identical") {
  const SweepConfig c = parse_config(kSmall);
  const auto a = scratch("helix_export_rerun_a");
  const auto b = scratch("helix_export_rerun_b");
  const ExportedFiles fa = export_sweep(run_sweep(c), a);
  const ExportedFiles fb = export_sweep(run_sweep(c), b);
  CHECK(slurp(fa.manifest) == slurp(fb.manifest));
  REQUIRE(fa.csv.size() == fb.csv.size());
  for (std::size_t i = 0; i < fa.csv.size(); ++i) CHECK(slurp(fa.csv[i]) == slurp(fb.csv[i]));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("an unwritable output directory is reported") {
  const auto dir = scratch("helix_export_blocked");
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "file") << "x";
  }
  SweepResult r;
  CHECK_THROWS_AS(export_sweep(r, dir / "file" / "sub"), Error);
  std::filesystem::remove_all(dir);
}
