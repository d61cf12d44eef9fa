#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gkdv/config.hpp"
#include "gkdv/error.hpp"
#include "gkdv/run.hpp"
#include "gkdv/verify.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kVerify = 4 };

std::vector<double> parse_amplitudes(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw gkdv::ConfigError("--amplitudes", "cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw gkdv::ConfigError("--amplitudes", "no amplitudes given");
  return out;
}

gkdv::RunConfig load(const std::string& path) {
  gkdv::RunConfig cfg = gkdv::load_config(path);
  for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gkdvlab: pseudospectral gKdV simulator and scattering diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GKDV_TOOL_VERSION);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "evolve the configured data and write a run directory");
  simulate->add_option("-c,--config", config_path, "JSON configuration")->required();

  std::string run_dir;
  auto* diagnose = app.add_subcommand("diagnose", "write diagnostics.csv, its schema and summary.json");
  diagnose->add_option("dir", run_dir, "run directory")->required();

  std::optional<double> kappa;
  auto* criteria = app.add_subcommand("criteria", "evaluate the scattering criteria and write report.json");
  criteria->add_option("dir", run_dir, "run directory")->required();
  criteria->add_option("--kappa", kappa, "decay weight kappa (default: midpoint value)");

  std::string amplitudes;
  unsigned workers = 0;
  auto* sweep = app.add_subcommand("sweep", "run one Gaussian per amplitude and write sweep_summary.csv");
  sweep->add_option("-c,--config", config_path, "JSON configuration")->required();
  sweep->add_option("--amplitudes", amplitudes, "comma-separated increasing amplitudes")->required();
  sweep->add_option("-j,--jobs", workers, "concurrent runs (0 = hardware concurrency)");

  std::string suite;
  std::uint64_t seed = 20240501;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "operators | conservation | strichartz | kappa | all")->required();
  verify->add_option("--seed", seed, "seed for random ensembles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (simulate->parsed()) {
      const gkdv::SimulateResult r = gkdv::run_simulate(load(config_path));
      std::cout << r.dir.string() << '\n';
      if (r.blowup) {
        std::cerr << "blow-up: " << r.blowup_reason << " (" << r.slices << " slices kept)\n";
        return kNumerical;
      }
    } else if (diagnose->parsed()) {
      std::cout << gkdv::run_diagnose(run_dir).string() << '\n';
    } else if (criteria->parsed()) {
      std::cout << gkdv::run_criteria(run_dir, kappa).string() << '\n';
    } else if (sweep->parsed()) {
      const gkdv::RunConfig cfg = load(config_path);
      std::cout << gkdv::run_sweep(cfg, parse_amplitudes(amplitudes), workers).string() << '\n';
    } else if (verify->parsed()) {
      const auto checks = gkdv::run_verify(suite, seed);
      std::cout << gkdv::format_verify_table(checks);
      for (const auto& c : checks) {
        if (!c.pass) return kVerify;
      }
    }
  } catch (const gkdv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const gkdv::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kFailure;
  } catch (const gkdv::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return verify->parsed() ? kConfig : kFailure;
  } catch (const gkdv::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return simulate->parsed() ? kNumerical : kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
