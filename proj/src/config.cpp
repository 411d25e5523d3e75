#include "polarlattice/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "polarlattice/errors.hpp"
#include "polarlattice/io.hpp"

namespace polarlattice {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(join(prefix, it.key()), "unknown key");
  }
}

const json& object_at(const json& obj, const std::string& prefix, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(join(prefix, key), "expected an object");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

double positive(const json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d > 0.0)) throw ConfigError(path, "must be positive");
  return d;
}

double non_negative(const json& v, const std::string& path) {
  const double d = number(v, path);
  if (d < 0.0) throw ConfigError(path, "must be non-negative");
  return d;
}

std::size_t positive_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(path, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

MaterialEntry parse_material(const json& v, const std::string& path) {
  if (v.is_string()) {
    try {
      return find_material(v.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (!v.is_object()) throw ConfigError(path, "expected a material name or object");
  check_keys(v, path, {"name", "model", "parameters", "units"});
  MaterialEntry m;
  m.name = v.contains("name") ? string(v["name"], path + ".name") : "custom";
  if (!v.contains("model")) throw ConfigError(path + ".model", "missing (polar or lorentz)");
  m.model = string(v["model"], path + ".model");
  FrequencyUnit unit = FrequencyUnit::inverse_cm;
  if (v.contains("units")) {
    try {
      unit = frequency_unit_from_string(string(v["units"], path + ".units"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(path + ".units", e.what());
    }
  }
  if (!v.contains("parameters")) throw ConfigError(path + ".parameters", "missing");
  const json& p = object_at(v, path, "parameters");
  const std::string pp = path + ".parameters";
  auto need = [&](const char* key) -> const json& {
    if (!p.contains(key)) throw ConfigError(join(pp, key), "missing");
    return p[key];
  };
  if (m.model == "polar") {
    check_keys(p, pp, {"omega_L", "omega_T", "eps_inf", "V_cell_nm3"});
    m.polar.omega_L = positive(need("omega_L"), pp + ".omega_L");
    m.polar.omega_T = positive(need("omega_T"), pp + ".omega_T");
    m.polar.eps_inf = p.contains("eps_inf") ? positive(p["eps_inf"], pp + ".eps_inf") : 1.0;
    if (p.contains("V_cell_nm3")) m.polar.V_cell_nm3 = positive(p["V_cell_nm3"], pp + ".V_cell_nm3");
    m.polar.unit = unit;
    if (m.polar.omega_L < m.polar.omega_T) throw ConfigError(pp + ".omega_L", "must be >= omega_T");
  } else if (m.model == "lorentz") {
    check_keys(p, pp, {"S", "omega_mol", "eps_inf"});
    m.lorentz.S = non_negative(need("S"), pp + ".S");
    m.lorentz.omega_mol = positive(need("omega_mol"), pp + ".omega_mol");
    m.lorentz.eps_inf = p.contains("eps_inf") ? positive(p["eps_inf"], pp + ".eps_inf") : 1.0;
    m.lorentz.unit = unit;
  } else {
    throw ConfigError(path + ".model", "expected polar or lorentz");
  }
  return m;
}

std::vector<SweepAxis> parse_sweep(const json& v, const json& root) {
  const std::string path = "sweep";
  if (!v.is_object()) throw ConfigError(path, "expected an object with an 'axes' array");
  check_keys(v, path, {"axes"});
  if (!v.contains("axes") || !v["axes"].is_array()) throw ConfigError(path + ".axes", "expected an array");
  std::vector<SweepAxis> axes;
  for (std::size_t i = 0; i < v["axes"].size(); ++i) {
    const json& a = v["axes"][i];
    const std::string ap = path + ".axes[" + std::to_string(i) + "]";
    if (!a.is_object()) throw ConfigError(ap, "expected an object");
    check_keys(a, ap, {"field", "values", "from", "to", "steps"});
    SweepAxis axis;
    if (!a.contains("field")) throw ConfigError(ap + ".field", "missing");
    axis.field = string(a["field"], ap + ".field");
    std::string ptr = "/" + axis.field;
    for (char& c : ptr) if (c == '.') c = '/';
    json::json_pointer jp;
    try {
      jp = json::json_pointer(ptr);
    } catch (const json::exception&) {
      throw ConfigError(ap + ".field", "not a valid field path");
    }
    if (!root.contains(jp) || root.at(jp).is_structured() || axis.field == "config_version") {
      throw ConfigError(ap + ".field", "'" + axis.field + "' is not a scalar field of this config");
    }
    if (a.contains("values")) {
      if (a.contains("from") || a.contains("to") || a.contains("steps"))
        throw ConfigError(ap, "give either values or from/to/steps");
      if (!a["values"].is_array()) throw ConfigError(ap + ".values", "expected an array");
      for (std::size_t k = 0; k < a["values"].size(); ++k)
        axis.values.push_back(number(a["values"][k], ap + ".values[" + std::to_string(k) + "]"));
    } else {
      if (!a.contains("from") || !a.contains("to") || !a.contains("steps"))
        throw ConfigError(ap, "needs values or all of from, to, steps");
      const double from = number(a["from"], ap + ".from");
      const double to = number(a["to"], ap + ".to");
      const std::size_t steps = positive_integer(a["steps"], ap + ".steps");
      for (std::size_t k = 0; k < steps; ++k) {
        axis.values.push_back(steps == 1 ? from
                                         : from + (to - from) * static_cast<double>(k) /
                                                      static_cast<double>(steps - 1));
      }
    }
    if (axis.values.empty()) throw ConfigError(ap, "axis has no values");
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw ConfigError(path + ".axes", "no sweep axes given");
  return axes;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  check_keys(j, "", {"config_version", "description", "lattice", "molecular", "cavity", "losses",
                     "spectrum", "modes", "sweep", "output", "threads"});
  if (!j.contains("config_version")) throw ConfigError("config_version", "missing");
  if (!j["config_version"].is_number_integer() || j["config_version"].get<int>() != config_version) {
    throw ConfigError("config_version", "unsupported (this build reads version " +
                                            std::to_string(config_version) + ")");
  }
  ExperimentConfig c;
  c.source = j;
  c.sha256 = io::sha256_hex(j.dump());

  if (!j.contains("lattice")) throw ConfigError("lattice", "missing");
  {
    const json& l = object_at(j, "", "lattice");
    check_keys(l, "lattice", {"nx", "ny", "a_nm"});
    for (const char* key : {"nx", "ny", "a_nm"})
      if (!l.contains(key)) throw ConfigError(join("lattice", key), "missing");
    c.lattice.nx = positive_integer(l["nx"], "lattice.nx");
    c.lattice.ny = positive_integer(l["ny"], "lattice.ny");
    c.lattice.a_nm = positive(l["a_nm"], "lattice.a_nm");
  }

  if (!j.contains("molecular")) throw ConfigError("molecular", "missing");
  {
    const json& m = object_at(j, "", "molecular");
    check_keys(m, "molecular", {"omega_mol_meV", "omega0_meV", "material"});
    const bool has_o = m.contains("omega0_meV"), has_m = m.contains("material");
    if (has_o == has_m) throw ConfigError("molecular", "give exactly one of omega0_meV and material");
    if (has_o) {
      c.molecular.omega0_meV = number(m["omega0_meV"], "molecular.omega0_meV");
      if (!m.contains("omega_mol_meV")) throw ConfigError("molecular.omega_mol_meV", "missing");
      c.molecular.omega_mol_meV = positive(m["omega_mol_meV"], "molecular.omega_mol_meV");
    } else {
      c.molecular.material = parse_material(m["material"], "molecular.material");
      MaterialCoupling mc;
      try {
        mc = material_coupling(*c.molecular.material);
      } catch (const InvalidArgument& e) {
        throw ConfigError("molecular.material", e.what());
      }
      c.molecular.omega0_meV = mc.omega0_meV;
      c.molecular.omega_mol_meV = m.contains("omega_mol_meV")
                                      ? positive(m["omega_mol_meV"], "molecular.omega_mol_meV")
                                      : mc.reference_meV;
    }
  }

  if (j.contains("cavity")) {
    const json& v = object_at(j, "", "cavity");
    check_keys(v, "cavity", {"omega_cav_meV", "sigma_L_over_a", "g_tot_meV", "center_nm", "diamagnetic"});
    if (v.contains("omega_cav_meV")) {
      const json& w = v["omega_cav_meV"];
      if (w.is_string()) {
        if (w.get<std::string>() != "resonant_W1")
          throw ConfigError("cavity.omega_cav_meV", "expected a number or \"resonant_W1\"");
      } else {
        c.cavity.resonant_W1 = false;
        c.cavity.omega_cav_meV = positive(w, "cavity.omega_cav_meV");
      }
    }
    if (v.contains("sigma_L_over_a")) {
      const json& s = v["sigma_L_over_a"];
      if (s.is_string()) {
        if (s.get<std::string>() != "homogeneous")
          throw ConfigError("cavity.sigma_L_over_a", "expected a number or \"homogeneous\"");
      } else {
        c.cavity.homogeneous = false;
        c.cavity.sigma_L_over_a = positive(s, "cavity.sigma_L_over_a");
      }
    }
    if (v.contains("g_tot_meV")) c.cavity.g_tot_meV = non_negative(v["g_tot_meV"], "cavity.g_tot_meV");
    if (v.contains("center_nm")) {
      const json& p = v["center_nm"];
      if (!p.is_array() || p.size() != 2) throw ConfigError("cavity.center_nm", "expected [x, y]");
      c.cavity.center_nm = Point{number(p[0], "cavity.center_nm[0]"), number(p[1], "cavity.center_nm[1]")};
    }
    if (v.contains("diamagnetic")) c.cavity.diamagnetic = boolean(v["diamagnetic"], "cavity.diamagnetic");
  }

  if (j.contains("losses")) {
    const json& v = object_at(j, "", "losses");
    check_keys(v, "losses", {"gamma_meV", "kappa_meV", "Gamma_meV", "method"});
    if (v.contains("gamma_meV")) c.losses.gamma_meV = positive(v["gamma_meV"], "losses.gamma_meV");
    c.losses.kappa_meV = c.losses.Gamma_meV = c.losses.gamma_meV;
    if (v.contains("kappa_meV")) c.losses.kappa_meV = non_negative(v["kappa_meV"], "losses.kappa_meV");
    if (v.contains("Gamma_meV")) c.losses.Gamma_meV = non_negative(v["Gamma_meV"], "losses.Gamma_meV");
    if (v.contains("method")) {
      try {
        c.losses.method = spectrum_method_from_string(string(v["method"], "losses.method"));
      } catch (const InvalidArgument& e) {
        throw ConfigError("losses.method", e.what());
      }
    }
  }

  if (j.contains("spectrum")) {
    const json& v = object_at(j, "", "spectrum");
    check_keys(v, "spectrum", {"points", "from_meV", "to_meV", "normalize"});
    if (v.contains("points")) {
      c.spectrum.points = positive_integer(v["points"], "spectrum.points");
      if (c.spectrum.points < 2) throw ConfigError("spectrum.points", "need at least 2 points");
    }
    if (v.contains("from_meV")) c.spectrum.from_meV = number(v["from_meV"], "spectrum.from_meV");
    if (v.contains("to_meV")) c.spectrum.to_meV = number(v["to_meV"], "spectrum.to_meV");
    if (c.spectrum.from_meV.has_value() != c.spectrum.to_meV.has_value())
      throw ConfigError("spectrum", "from_meV and to_meV go together");
    if (c.spectrum.from_meV && !(*c.spectrum.to_meV > *c.spectrum.from_meV))
      throw ConfigError("spectrum.to_meV", "must exceed from_meV");
    if (v.contains("normalize")) c.spectrum.normalize = boolean(v["normalize"], "spectrum.normalize");
  }

  if (j.contains("modes")) {
    const json& v = object_at(j, "", "modes");
    check_keys(v, "modes", {"maps"});
    if (v.contains("maps")) {
      if (!v["maps"].is_array()) throw ConfigError("modes.maps", "expected an array of mode indices");
      c.mode_maps.clear();
      c.mode_maps_explicit = true;
      for (std::size_t i = 0; i < v["maps"].size(); ++i)
        c.mode_maps.push_back(positive_integer(v["maps"][i], "modes.maps[" + std::to_string(i) + "]"));
    }
  }

  if (j.contains("output")) {
    const json& v = object_at(j, "", "output");
    check_keys(v, "output", {"directory"});
    if (v.contains("directory")) {
      c.output_dir = string(v["directory"], "output.directory");
      if (c.output_dir->empty()) throw ConfigError("output.directory", "must not be empty");
    }
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<long long>() < 0)
      throw ConfigError("threads", "expected a non-negative integer");
    c.threads = static_cast<unsigned>(j["threads"].get<long long>());
  }

  if (j.contains("sweep")) {
    c.sweep = parse_sweep(j["sweep"], j);
    // Every point must itself be a valid config.
    for (const auto& point : sweep_points(c.sweep)) parse_config(with_values(j, c.sweep, point));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json with_values(const json& base, const std::vector<SweepAxis>& axes,
                 const std::vector<double>& values) {
  json j = base;
  j.erase("sweep");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    std::string ptr = "/" + axes[i].field;
    for (char& c : ptr) if (c == '.') c = '/';
    const double v = values.at(i);
    if (std::floor(v) == v && std::abs(v) < 9e15 && base.at(json::json_pointer(ptr)).is_number_integer())
      j[json::json_pointer(ptr)] = static_cast<long long>(v);
    else
      j[json::json_pointer(ptr)] = v;
  }
  return j;
}

std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out) {
      for (double v : axis.values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace polarlattice
