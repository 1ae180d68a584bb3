#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "splitsea/config.hpp"

namespace {

using splitsea::RunConfig;

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << '\n';
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out)
    throw splitsea::ConfigError("cannot write to '" + cfg.output_path + "'");
  out << text;
}

int do_compute(const std::string& path) {
  RunConfig cfg = splitsea::load_config_file(path);
  const auto report = splitsea::run_compute(cfg);
  write_output(cfg, splitsea::dump_report(report));
  return 0;
}

int do_verify(const std::string& path) {
  RunConfig cfg = splitsea::load_config_file(path);
  const auto outcome = splitsea::run_verify(cfg);
  std::printf("%-45s %14s %10s  %s\n", "invariant", "residual", "tolerance",
              "status");
  for (const auto& c : outcome.checks)
    std::printf("%-45s %14.6e %10.1e  %s\n", c.name.c_str(), c.residual,
                c.tolerance, c.pass ? "pass" : "FAIL");
  if (!cfg.output_path.empty())
    write_output(cfg, splitsea::dump_report(outcome.report));
  return outcome.pass ? 0 : 1;
}

int do_scaling(const std::string& path, int jobs) {
  RunConfig cfg = splitsea::load_config_file(path);
  if (jobs > 0) cfg.jobs = jobs;
  write_output(cfg, splitsea::run_scaling(cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dressed quantities and 1/L spectra for split-Fermi-sea "
               "states in integrable models"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 0;

  auto* compute = app.add_subcommand(
      "compute", "solve the dressed state and spectrum requests");
  compute->add_option("config", config_path, "JSON config file")->required();

  auto* verify =
      app.add_subcommand("verify", "run the identity suite at the configured "
                         "state");
  verify->add_option("config", config_path, "JSON config file")->required();

  auto* scaling = app.add_subcommand(
      "scaling", "finite-N energies vs the 1/L prediction across L values");
  scaling->add_option("config", config_path, "JSON config file")->required();
  scaling->add_option("--jobs", jobs, "max concurrent rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (compute->parsed()) return do_compute(config_path);
    if (verify->parsed()) return do_verify(config_path);
    if (scaling->parsed()) return do_scaling(config_path, jobs);
  } catch (const splitsea::ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const splitsea::NonConvergenceError& e) {
    emit_error("nonconvergence", e.what());
    return 3;
  } catch (const splitsea::SingularSystemError& e) {
    emit_error("singular_system", e.what());
    return 3;
  } catch (const splitsea::Error& e) {
    emit_error("error", e.what());
    return 3;
  }
  return 0;
}
