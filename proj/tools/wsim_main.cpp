// wsim: expand and cascade W states through the one-photon gate, rediscover
// the gate reflectivities, and cross-check every closed-form probability.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "wsim/elements.hpp"
#include "wsim/report.hpp"

namespace {

using wsim::report::RunConfig;

int emit(const wsim::report::Document& doc, const std::string& output) {
  if (output == "-") {
    std::cout << doc.body;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << output << "' for writing\n";
      return 2;
    }
    file << doc.body;
  }
  if (doc.exit_code != 0) std::cerr << "error: " << doc.diagnostic << "\n";
  return doc.exit_code;
}

void add_format_flags(CLI::App* cmd, RunConfig& config, std::string& format) {
  cmd->add_option("--format", format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", config.output,
                  "Output path ('-' for standard output)")
      ->capture_default_str();
}

void add_eta_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--eta-h", config.eta_h, "PDBS reflectivity for H polarization")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eta-v", config.eta_v, "PDBS reflectivity for V polarization")
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical simulator of one-photon W-state expansion"};
  app.require_subcommand(1);

  RunConfig config;
  const wsim::Reflectivity defaults = wsim::Reflectivity::optimal();
  config.eta_h = defaults.eta_h();
  config.eta_v = defaults.eta_v();
  std::string format = "json";

  CLI::App* expand = app.add_subcommand(
      "expand", "Add one photon to W_n and report probability, state, fidelity");
  expand->add_option("-n,--n", config.n, "Photon number of the input W state")
      ->required()
      ->check(CLI::PositiveNumber);
  add_eta_flags(expand, config);
  add_format_flags(expand, config, format);

  CLI::App* cascade = app.add_subcommand(
      "cascade", "Prepare W_n from scratch and report the per-stage table");
  cascade->add_option("-n,--n", config.n, "Target photon number")
      ->required()
      ->check(CLI::PositiveNumber);
  cascade->add_option("--source", config.source, "Initial resource: single or epr")
      ->check(CLI::IsMember({"single", "epr"}))
      ->capture_default_str();
  cascade->add_option("--first", config.first, "First element: pdbs or balanced")
      ->check(CLI::IsMember({"pdbs", "balanced"}))
      ->capture_default_str();
  add_eta_flags(cascade, config);
  add_format_flags(cascade, config, format);

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Recover the gate reflectivities by constrained grid search");
  optimize->add_option("-n,--n", config.n, "Expansion size used as the objective")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize->add_option("--grid", config.grid, "Stage-1 lattice points per axis")
      ->check(CLI::Range(11, 100000))
      ->capture_default_str();
  optimize->add_option("--refine-rounds", config.refine_rounds, "Stage-2 window halvings")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  add_format_flags(optimize, config, format);

  CLI::App* verify = app.add_subcommand(
      "verify", "Tabulate all closed-form probabilities against simulation for N=2..8");
  add_format_flags(verify, config, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2; --help exits 0
  }

  if (expand->parsed()) config.command = RunConfig::Command::Expand;
  if (cascade->parsed()) config.command = RunConfig::Command::Cascade;
  if (optimize->parsed()) config.command = RunConfig::Command::Optimize;
  if (verify->parsed()) config.command = RunConfig::Command::Verify;
  config.format =
      format == "csv" ? RunConfig::Format::Csv : RunConfig::Format::Json;

  try {
    return emit(wsim::report::run_command(config), config.output);
  } catch (const wsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
