#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "polarlattice/config.hpp"
#include "polarlattice/errors.hpp"
#include "polarlattice/io.hpp"

using namespace polarlattice;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
  return json::parse(R"({
    "config_version": 1,
    "lattice": {"nx": 3, "ny": 2, "a_nm": 0.5},
    "molecular": {"omega_mol_meV": 100, "omega0_meV": 1}
  })");
}

std::string config_error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polarlattice_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const fs::path dir = scratch("sha");
  io::write_atomic(dir / "f.txt", "abc");
  CHECK(io::sha256_file(dir / "f.txt") == io::sha256_hex("abc"));
  fs::remove_all(dir);
}

TEST_CASE("format_number") {
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(108.253525333740) == "108.253525334");
  CHECK(io::format_number(1e-20) == "1e-20");
  CHECK(io::format_number(-2.5) == "-2.5");
}

TEST_CASE("CsvTable") {
  io::CsvTable t("abc123", {"x", "y"});
  t.add_row(std::vector<double>{1.0, -0.0});
  t.add_row(std::vector<std::string>{"2", "a;b"});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "# config_sha256=abc123\nx,y\n1,0\n2,a;b\n");
  CHECK_THROWS(t.add_row(std::vector<double>{1.0}));
}

TEST_CASE("write_atomic and the manifest") {
  const fs::path dir = scratch("manifest");
  io::write_atomic(dir / "b.csv", "b\n");
  io::write_atomic(dir / "sub" / "a.csv", "a\n");
  io::write_atomic(dir / "b.csv", "b2\n");  // overwrite in place
  CHECK(slurp(dir / "b.csv") == "b2\n");
  const json m = io::write_manifest(dir, {"modes", json{{"k", 1}}, "sha", 1.5, {{"stage", 0.5}}});
  const auto files = io::scan_outputs(dir);
  REQUIRE(files.size() == 2);
  CHECK(files[0].path == "b.csv");
  CHECK(files[1].path == "sub/a.csv");
  const json on_disk = json::parse(slurp(dir / io::manifest_name));
  CHECK(on_disk == m);
  CHECK(on_disk["command"] == "modes");
  CHECK(on_disk["config_sha256"] == "sha");
  CHECK(on_disk.contains("code_version"));
  CHECK(on_disk["files"].size() == 2);
  for (const auto& f : on_disk["files"])
    CHECK(f["sha256"] == io::sha256_file(dir / f["path"].get<std::string>()));
  // no stray temporaries
  for (const auto& e : fs::recursive_directory_iterator(dir))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("parse_config: defaults") {
  const ExperimentConfig c = parse_config(minimal());
  CHECK(c.lattice.nx == 3);
  CHECK(c.lattice.ny == 2);
  CHECK(c.molecular.omega0_meV == 1.0);
  CHECK(c.cavity.resonant_W1);
  CHECK(c.cavity.homogeneous);
  CHECK(c.cavity.g_tot_meV == 2.0);
  CHECK(c.losses.method == SpectrumMethod::lorentzian_adhoc);
  CHECK(c.spectrum.points == 2001);
  CHECK(c.mode_maps == std::vector<std::size_t>{1, 50, 300, 1500});
  CHECK(!c.mode_maps_explicit);
  CHECK(c.sha256.size() == 64);
}

TEST_CASE("parse_config: full document") {
  json j = minimal();
  j["cavity"] = {{"omega_cav_meV", 104.5}, {"sigma_L_over_a", 2.5}, {"g_tot_meV", 3},
                 {"center_nm", {0.5, 0.25}}, {"diamagnetic", true}};
  j["losses"] = {{"gamma_meV", 0.5}, {"kappa_meV", 0.7}, {"method", "complex_hamiltonian"}};
  j["spectrum"] = {{"points", 11}, {"from_meV", 90}, {"to_meV", 110}, {"normalize", false}};
  j["modes"] = {{"maps", {1, 2}}};
  j["output"] = {{"directory", "out"}};
  j["threads"] = 2;
  const ExperimentConfig c = parse_config(j);
  CHECK(!c.cavity.resonant_W1);
  CHECK(c.cavity.omega_cav_meV == 104.5);
  CHECK(c.cavity.sigma_L_over_a == 2.5);
  CHECK(c.cavity.center_nm->y == 0.25);
  CHECK(c.cavity.diamagnetic);
  CHECK(c.losses.kappa_meV == 0.7);
  CHECK(c.losses.Gamma_meV == 0.5);
  CHECK(c.losses.method == SpectrumMethod::complex_hamiltonian);
  CHECK(*c.spectrum.to_meV == 110.0);
  CHECK(!c.spectrum.normalize);
  CHECK(c.mode_maps_explicit);
  CHECK(*c.output_dir == "out");
  CHECK(c.threads == 2);
}

TEST_CASE("parse_config: materials") {
  json j = minimal();
  j["molecular"] = {{"material", "SiC"}};
  ExperimentConfig c = parse_config(j);
  CHECK(c.molecular.material->name == "SiC");
  CHECK(c.molecular.omega_mol_meV == doctest::Approx(793.0 / 8.06554));
  CHECK(c.molecular.omega0_meV == doctest::Approx(0.0196 * 793.0 / 8.06554).epsilon(0.02));

  j["molecular"] = json::parse(R"({"material": {"name": "mine", "model": "lorentz",
      "parameters": {"S": 10, "omega_mol": 100, "eps_inf": 2}, "units": "meV"}})");
  c = parse_config(j);
  CHECK(c.molecular.omega_mol_meV == 100.0);
  CHECK(c.molecular.omega0_meV == doctest::Approx(100.0 / (8 * 3.141592653589793 * 100.0 * 2.0)));

  j["molecular"]["material"]["units"] = "THz";
  CHECK(config_error_path(j) == "molecular.material.units");
  j["molecular"] = {{"material", "unobtainium"}};
  CHECK(config_error_path(j) == "molecular.material");
}

TEST_CASE("parse_config: errors name the field") {
  json j = minimal();
  j["lattice"]["bogus"] = 1;
  CHECK(config_error_path(j) == "lattice.bogus");

  j = minimal();
  j.erase("config_version");
  CHECK(config_error_path(j) == "config_version");

  j = minimal();
  j["config_version"] = 2;
  CHECK(config_error_path(j) == "config_version");

  j = minimal();
  j["lattice"]["nx"] = 0;
  CHECK(config_error_path(j) == "lattice.nx");

  j = minimal();
  j["lattice"]["a_nm"] = "half";
  CHECK(config_error_path(j) == "lattice.a_nm");

  j = minimal();
  j["molecular"]["material"] = "SiC";
  CHECK(config_error_path(j) == "molecular");

  j = minimal();
  j["cavity"] = {{"sigma_L_over_a", "wide"}};
  CHECK(config_error_path(j) == "cavity.sigma_L_over_a");

  j = minimal();
  j["cavity"] = {{"omega_cav_meV", -5}};
  CHECK(config_error_path(j) == "cavity.omega_cav_meV");

  j = minimal();
  j["losses"] = {{"gamma_meV", 0}};
  CHECK(config_error_path(j) == "losses.gamma_meV");

  j = minimal();
  j["spectrum"] = {{"from_meV", 90}};
  CHECK(config_error_path(j) == "spectrum");

  j = minimal();
  j["modes"] = {{"maps", {1, 0}}};
  CHECK(config_error_path(j) == "modes.maps[1]");

  j = minimal();
  j["surprise"] = true;
  CHECK(config_error_path(j) == "surprise");
}

TEST_CASE("sweep axes") {
  json j = minimal();
  j["losses"] = {{"gamma_meV", 1}};
  j["sweep"] = json::parse(R"({"axes": [
      {"field": "losses.gamma_meV", "from": 0.5, "to": 2, "steps": 4},
      {"field": "lattice.nx", "values": [2, 3]}]})");
  const ExperimentConfig c = parse_config(j);
  REQUIRE(c.sweep.size() == 2);
  CHECK(c.sweep[0].values == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  const auto pts = sweep_points(c.sweep);
  REQUIRE(pts.size() == 8);
  CHECK(pts[1] == std::vector<double>{0.5, 3.0});
  const json p = with_values(c.source, c.sweep, pts[5]);
  CHECK(!p.contains("sweep"));
  CHECK(p["losses"]["gamma_meV"] == 1.5);
  CHECK(p["lattice"]["nx"].is_number_integer());
  CHECK(p["lattice"]["nx"] == 3);
  const ExperimentConfig pc = parse_config(p);
  CHECK(pc.losses.gamma_meV == 1.5);
  CHECK(pc.losses.kappa_meV == 1.5);
}

TEST_CASE("sweep errors") {
  json j = minimal();
  j["sweep"] = json::parse(R"({"axes": []})");
  CHECK(config_error_path(j) == "sweep.axes");
  j["sweep"] = json::parse(R"({"axes": [{"field": "losses.gamma_meV", "values": [1]}]})");
  CHECK(config_error_path(j) == "sweep.axes[0].field");  // not present in this config
  j["sweep"] = json::parse(R"({"axes": [{"field": "lattice.nx", "values": []}]})");
  CHECK(config_error_path(j) == "sweep.axes[0]");
  j["sweep"] = json::parse(R"({"axes": [{"field": "lattice", "values": [1]}]})");
  CHECK(config_error_path(j) == "sweep.axes[0].field");
  j["sweep"] = json::parse(R"({"axes": [{"field": "lattice.nx", "values": [2, 0]}]})");
  CHECK(config_error_path(j) == "lattice.nx");  // the offending point is reported
  j["sweep"] = json::parse(R"({"axes": [{"field": "lattice.nx", "from": 1, "to": 3}]})");
  CHECK(config_error_path(j) == "sweep.axes[0]");
}

TEST_CASE("load_config") {
  const fs::path dir = scratch("load");
  io::write_atomic(dir / "c.json", minimal().dump());
  CHECK(load_config(dir / "c.json").lattice.nx == 3);
  io::write_atomic(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}
