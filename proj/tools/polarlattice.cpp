#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "polarlattice/backend.hpp"
#include "polarlattice/commands.hpp"

int main(int argc, char** argv) {
  using namespace polarlattice;
  reexec_with_working_blas(argv);

  CLI::App app{"Collective vibrational modes and cavity polaritons of dipole lattices"};
  app.set_version_flag("--version", POLARLATTICE_VERSION);
  app.require_subcommand(1);

  CommandOptions opts;
  std::string config;
  std::string out;
  unsigned threads = 0;

  auto add = [&](const std::string& name, const std::string& help, bool needs_config) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* c = sub->add_option("-c,--config", config, "experiment config (JSON)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    return sub;
  };

  for (const char* name : {"modes", "spectrum", "sweep"}) {
    const std::string n = name;
    const std::string help = n == "modes"      ? "collective modes, mode maps and dispersion"
                             : n == "spectrum" ? "polariton modes and optical spectrum"
                                               : "spectra over a parameter grid";
    CLI::App* sub = add(n, help, true);
    sub->add_option("-o,--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads (sweep)")->check(CLI::PositiveNumber);
    sub->add_flag("--seed-check", opts.seed_check, "rerun and require byte-identical outputs");
  }
  CLI::App* crit = add("criterion", "when dipole-dipole interactions are resolvable", true);
  crit->add_option("-o,--out", out, "also write criterion.json here");
  add("material", "Omega0 from material parameters", true);
  CLI::App* val = app.add_subcommand("validate", "built-in oracle checks on small lattices");
  val->add_flag("--inject-fault", opts.inject_fault, "perturb a coupling so a check must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  opts.config = config;
  if (!out.empty()) opts.out = out;
  if (threads > 0) opts.threads = threads;
  return run_command(command, opts, std::cout, std::cerr);
}
