#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "helix/errors.hpp"
#include "helix/experiments.hpp"

namespace helix {

namespace {

using nlohmann::json;

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<DealiasRule> kRules[] = {{DealiasRule::kPadded, "padded"},
                                         {DealiasRule::kTruncateBox, "truncate_box"},
                                         {DealiasRule::kTruncateCylinder, "truncate_cylinder"}};
constexpr Names<Interp> kInterps[] = {{Interp::kSpectralShear, "spectral_shear"},
                                      {Interp::kBicubic, "bicubic"},
                                      {Interp::kTrigonometric, "trigonometric"}};
constexpr Names<BaseFlowKind> kBases[] = {{BaseFlowKind::kZeroSwirl, "zero_swirl"}, {BaseFlowKind::kDipole, "dipole"}};
constexpr Names<PerturbationKind> kPerts[] = {{PerturbationKind::kAxialJet, "axial_jet"},
                                              {PerturbationKind::kNone, "none"}};

template <class E, std::size_t N>
const char* name_of(const Names<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <class E, std::size_t N>
E parse_enum(const Names<E> (&table)[N], const json& j, const std::string& key) {
  if (!j.is_string()) throw InvalidArgument(key + " must be a string");
  const auto s = j.get<std::string>();
  for (const auto& e : table) {
    if (s == e.name) return e.value;
  }
  throw InvalidArgument("unknown value '" + s + "' for " + key);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw InvalidArgument(key + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw InvalidArgument(key + " must be an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw InvalidArgument(key + " must be true or false");
  return j.get<bool>();
}

template <class T, class F>
void read(const json& obj, const char* key, T& out, F&& conv) {
  if (obj.contains(key)) out = conv(obj.at(key), key);
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(root, "config", {"grid", "solver", "base", "perturbation", "nu_list", "local_box_half_width",
                                  "sample_stride", "omega3_residual", "output_dir"});
  SweepConfig c;

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    reject_unknown(g, "grid", {"nx", "ny", "nz", "length"});
    int nx = c.grid.nx, ny = c.grid.ny, nz = c.grid.nz;
    double length = c.grid.length;
    read(g, "nx", nx, integer);
    read(g, "ny", ny, integer);
    read(g, "nz", nz, integer);
    read(g, "length", length, number);
    c.grid = Grid3::make(nx, ny, nz, length);
  }

  if (root.contains("solver")) {
    const json& s = root.at("solver");
    reject_unknown(s, "solver", {"dt", "t_end", "epsilon", "max_epsilon", "cfl_safety", "dealias", "dealias_rule",
                                 "enforce_every", "interp", "nu_floor", "div_tolerance", "energy_tolerance"});
    SolverConfig& o = c.solver;
    read(s, "dt", o.dt, number);
    read(s, "t_end", o.t_end, number);
    read(s, "epsilon", o.epsilon, number);
    read(s, "max_epsilon", o.max_epsilon, number);
    read(s, "cfl_safety", o.cfl_safety, number);
    read(s, "dealias", o.dealias, boolean);
    read(s, "enforce_every", o.enforce_every, integer);
    read(s, "nu_floor", o.nu_floor, number);
    read(s, "div_tolerance", o.div_tolerance, number);
    read(s, "energy_tolerance", o.energy_tolerance, number);
    if (s.contains("dealias_rule")) o.dealias_rule = parse_enum(kRules, s.at("dealias_rule"), "solver.dealias_rule");
    if (s.contains("interp")) o.interp = parse_enum(kInterps, s.at("interp"), "solver.interp");
  }

  if (root.contains("base")) {
    const json& b = root.at("base");
    reject_unknown(b, "base", {"kind", "amplitude", "sigma", "removal_iterations", "swirl_tolerance"});
    if (b.contains("kind")) c.base.kind = parse_enum(kBases, b.at("kind"), "base.kind");
    read(b, "amplitude", c.base.amplitude, number);
    read(b, "sigma", c.base.sigma, number);
    read(b, "removal_iterations", c.base.removal_iterations, integer);
    read(b, "swirl_tolerance", c.base.swirl_tolerance, number);
  }

  if (root.contains("perturbation")) {
    const json& p = root.at("perturbation");
    reject_unknown(p, "perturbation", {"kind", "sigma"});
    if (p.contains("kind")) c.perturbation.kind = parse_enum(kPerts, p.at("kind"), "perturbation.kind");
    read(p, "sigma", c.perturbation.sigma, number);
  }

  if (root.contains("nu_list")) {
    const json& l = root.at("nu_list");
    if (!l.is_array()) throw InvalidArgument("nu_list must be an array");
    c.nu_list.clear();
    for (const json& v : l) c.nu_list.push_back(number(v, "nu_list entry"));
  }
  if (root.contains("local_box_half_width")) {
    c.local_box = LocalBox{number(root.at("local_box_half_width"), "local_box_half_width")};
  }
  read(root, "sample_stride", c.sample_stride, integer);
  read(root, "omega3_residual", c.omega3_residual, boolean);
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) throw InvalidArgument("output_dir must be a string");
    c.output_dir = root.at("output_dir").get<std::string>();
  }

  c.validate();
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot read config " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return parse_config(os.str());
}

std::string config_to_json(const SweepConfig& c) {
  const SolverConfig& s = c.solver;
  json j;
  j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"nz", c.grid.nz}, {"length", c.grid.length}};
  j["solver"] = {{"dt", s.dt},
                 {"t_end", s.t_end},
                 {"epsilon", s.epsilon},
                 {"max_epsilon", s.max_epsilon},
                 {"cfl_safety", s.cfl_safety},
                 {"dealias", s.dealias},
                 {"dealias_rule", name_of(kRules, s.dealias_rule)},
                 {"enforce_every", s.enforce_every},
                 {"interp", name_of(kInterps, s.interp)},
                 {"nu_floor", s.nu_floor},
                 {"div_tolerance", s.div_tolerance},
                 {"energy_tolerance", s.energy_tolerance}};
  j["base"] = {{"kind", name_of(kBases, c.base.kind)},
               {"amplitude", c.base.amplitude},
               {"sigma", c.base.sigma},
               {"removal_iterations", c.base.removal_iterations},
               {"swirl_tolerance", c.base.swirl_tolerance}};
  j["perturbation"] = {{"kind", name_of(kPerts, c.perturbation.kind)}, {"sigma", c.perturbation.sigma}};
  j["nu_list"] = c.nu_list;
  j["local_box_half_width"] = c.box().half_width;
  j["sample_stride"] = c.sample_stride;
  j["omega3_residual"] = c.omega3_residual;
  j["output_dir"] = c.output_dir.generic_string();
  return j.dump(2);
}

}  // namespace helix
