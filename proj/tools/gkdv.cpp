// gkdv: command-line front end. See README.md for subcommands and exit codes.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gkdv/gkdv.hpp"

namespace fs = std::filesystem;
using namespace gkdv;
using namespace gkdv::cli;

namespace {

struct Common {
  std::vector<std::string> configs;
  std::size_t jobs = 1;
  std::string output;
  bool quiet = false;
};

fs::path output_for(const Common& o, const ScenarioConfig& c, bool batch) {
  fs::path base = o.output.empty() ? fs::path(c.output) : fs::path(o.output);
  return batch ? base / c.name : base;
}

int report(const RunResult& r, const std::string& who, bool quiet) {
  if (r.code != exit_ok) std::cerr << who << ": " << r.message << '\n';
  else if (!quiet) std::cerr << who << ": ok\n";
  return r.code;
}

int cmd_run(const Common& o) {
  if (o.configs.empty()) {
    std::cerr << "run: --config is required\n";
    return exit_config;
  }
  const bool batch = o.configs.size() > 1;
  auto results = run_batch(o.configs.size(), std::max<std::size_t>(1, o.jobs), [&](std::size_t i) {
    RunResult r;
    try {
      const auto c = load_scenario(o.configs[i]);
      std::ostringstream log;
      r = run_scenario(c, output_for(o, c, batch), fs::path(o.configs[i]).parent_path(), log);
      if (!o.quiet) std::cout << "[" << c.name << "]\n" << log.str();
    } catch (const ConfigError& e) {
      r.code = exit_config;
      r.message = std::string("config error: ") + e.what();
    }
    return r;
  });
  int code = exit_ok;
  for (std::size_t i = 0; i < results.size(); ++i) code = std::max(code, report(results[i], o.configs[i], o.quiet));
  return code;
}

int cmd_study(const Common& o, const std::string& kind, const std::vector<double>& ladder) {
  if (o.configs.size() != 1) {
    std::cerr << "study: exactly one --config is required\n";
    return exit_config;
  }
  try {
    auto c = load_scenario(o.configs[0]);
    if (!kind.empty()) c.study.kind = kind;
    if (!ladder.empty()) c.study.ladder = ladder;
    if (c.study.kind != "temporal" && c.study.kind != "spatial" && c.study.kind != "viscosity")
      throw ConfigError("unknown study kind '" + c.study.kind + "'");
    const auto tab = run_study(c, fs::path(o.configs[0]).parent_path());
    const fs::path dir = output_for(o, c, false);
    fs::create_directories(dir);
    std::ofstream f(dir / ("study_" + c.study.kind + ".csv"));
    tab.write(f);
    if (!o.quiet) tab.write(std::cout);
    if (!tab.complete) {
      std::cerr << "study: " << tab.failure << '\n';
      return c.study.kind == "viscosity" ? exit_verdict : exit_instability;
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

int cmd_norms(const Common& o, const std::string& input, const std::vector<double>& ss,
              const std::vector<double>& bs, double eps, bool extend) {
  try {
    auto traj = io::read_trajectory(input);
    if (extend) traj = extend_rho_T(traj);
    const auto rows = trajectory_norms(traj, ss, bs, eps);
    if (o.output.empty()) {
      write_norms(std::cout, rows);
    } else {
      fs::create_directories(o.output);
      std::ofstream f(fs::path(o.output) / "norms.csv");
      write_norms(f, rows);
      if (!o.quiet) write_norms(std::cout, rows);
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const Error& e) {
    std::cerr << "norms: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

int cmd_split(const Common& o, const std::string& input, double s) {
  try {
    const auto phi = io::read_field(input);
    const auto sp = zhidkov_split(phi);
    const fs::path dir = o.output.empty() ? fs::path(".") : fs::path(o.output);
    io::write_field(dir / "psi0", sp.psi0);
    io::write_field(dir / "u0", sp.u0);
    std::cout << "psi0_linf = " << io::format_double(sp.psi0.max_abs()) << "\nu0_hs = "
              << io::format_double(sobolev_norm(sp.u0, s)) << "\ns = " << io::format_double(s) << '\n';
    return exit_ok;
  } catch (const Error& e) {
    std::cerr << "split: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gKdV on a non-decaying background"};
  app.require_subcommand(1);
  Common o;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--config", o.configs, "scenario INI file (repeat for a batch)");
    sc->add_option("--jobs", o.jobs, "concurrent scenarios")->check(CLI::PositiveNumber);
    sc->add_option("--output", o.output, "output directory");
    sc->add_flag("--quiet", o.quiet, "suppress progress output");
  };

  auto* run = app.add_subcommand("run", "evolve a scenario and write diagnostics");
  add_common(run);

  std::string kind;
  std::vector<double> ladder;
  auto* study = app.add_subcommand("study", "convergence study: temporal, spatial or viscosity");
  add_common(study);
  study->add_option("--kind", kind, "overrides [study] kind");
  study->add_option("--ladder", ladder, "overrides [study] ladder")->delimiter(',');

  std::string input;
  std::vector<double> ss{1.0}, bs{0.5};
  double eps = 0.05;
  bool extend = false;
  auto* norms = app.add_subcommand("norms", "Sobolev, enveloped and Bourgain norms of a trajectory");
  add_common(norms);
  norms->add_option("--input", input, "trajectory file (.meta/.bin stem)")->required();
  norms->add_option("-s", ss, "regularity indices")->delimiter(',');
  norms->add_option("-b", bs, "modulation indices")->delimiter(',');
  norms->add_option("--epsilon", eps, "envelope exponent");
  norms->add_flag("--extend", extend, "apply the rho_T extension first");

  std::string split_input;
  double split_s = 1.0;
  auto* split = app.add_subcommand("split", "Zhidkov split of a bounded field");
  add_common(split);
  split->add_option("--input", split_input, "field file")->required();
  split->add_option("-s", split_s, "regularity for the reported norm");

  auto* cat = app.add_subcommand("catalog", "list backgrounds and nonlinearities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  if (run->parsed()) return cmd_run(o);
  if (study->parsed()) return cmd_study(o, kind, ladder);
  if (norms->parsed()) return cmd_norms(o, input, ss, bs, eps, extend);
  if (split->parsed()) return cmd_split(o, split_input, split_s);
  if (cat->parsed()) {
    catalog(std::cout);
    return exit_ok;
  }
  return exit_failure;
}
