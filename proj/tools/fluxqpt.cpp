#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluxqpt/config.hpp"
#include "fluxqpt/error.hpp"
#include "fluxqpt/runner.hpp"

namespace {

struct QuickOptions {
  std::optional<std::size_t> n;
  std::string topology = "triangle";
  std::optional<std::size_t> grid;
  std::string out = "fluxqpt-out";
  std::size_t threads = 1;
};

void add_quick_options(CLI::App* sub, QuickOptions& opts) {
  sub->add_option("--n", opts.n, "number of sites (chain and custom topologies)");
  sub->add_option("--topology", opts.topology, "triangle | nn-nnn-chain")->capture_default_str();
  sub->add_option("--grid", opts.grid, "grid points along the sweep (default 1001)");
  sub->add_option("--out", opts.out, "output directory")->capture_default_str();
  sub->add_option("--threads", opts.threads, "worker threads for the chi_F sweep")
      ->capture_default_str();
}

fluxqpt::ExperimentConfig quick_config(const QuickOptions& opts, const std::string& metric) {
  nlohmann::json j = nlohmann::json::object();
  j["topology"] = opts.topology;
  if (opts.n) j["n"] = *opts.n;
  if (opts.grid) j["grid_points"] = *opts.grid;
  j["out"] = opts.out;
  j["threads"] = opts.threads;
  j["chi_f"] = metric == "chi";
  j["witness"] = metric == "witness";
  j["macro"] = metric == "macro";
  j["dynamics_verify"] = metric == "dynamics-verify";
  return fluxqpt::validate_config(j.dump());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fluxqpt::Error(fluxqpt::ErrorCategory::io, "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int report_error(fluxqpt::ErrorCategory category, const std::string& message) {
  nlohmann::json j{{"error", std::string(fluxqpt::to_string(category))},
                   {"exit_code", fluxqpt::exit_code(category)},
                   {"message", message}};
  std::cerr << j.dump() << '\n';
  return fluxqpt::exit_code(category);
}

void print_summary(const fluxqpt::RunManifest& manifest) {
  nlohmann::json j{{"out", manifest.config.out},
                   {"files", manifest.files},
                   {"summary", manifest.summary},
                   {"warnings", manifest.warnings},
                   {"duration_seconds", manifest.duration_seconds}};
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux-qubit transverse-field Ising sweep simulator"};
  app.set_version_flag("--version", std::string(fluxqpt::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_override;
  auto* run_cmd = app.add_subcommand("run", "run every metric enabled in a JSON config");
  run_cmd->add_option("config", config_path, "path to the JSON config")->required();
  run_cmd->add_option("--out", out_override, "override the config's output directory");

  QuickOptions quick;
  const std::vector<std::pair<std::string, std::string>> metrics{
      {"chi", "fidelity susceptibility trace"},
      {"witness", "three-site witness trace"},
      {"macro", "moment histograms and the macro measure D"},
      {"dynamics-verify", "integrate the sweep and report the adiabatic fidelity"}};
  for (const auto& [name, help] : metrics) add_quick_options(app.add_subcommand(name, help), quick);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return fluxqpt::exit_code(fluxqpt::ErrorCategory::config);
  }

  try {
    fluxqpt::ExperimentConfig config;
    if (run_cmd->parsed()) {
      config = fluxqpt::validate_config(read_file(config_path));
      if (out_override) config.out = *out_override;
    } else {
      for (const auto& [name, help] : metrics) {
        if (app.got_subcommand(name)) config = quick_config(quick, name);
      }
    }
    print_summary(fluxqpt::run(config));
    return 0;
  } catch (const fluxqpt::Error& e) {
    return report_error(e.category(), e.what());
  } catch (const std::bad_alloc&) {
    return report_error(fluxqpt::ErrorCategory::memory_budget, "allocation failed");
  }
}
