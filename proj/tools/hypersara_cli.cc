#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypersara/experiment.h"

namespace {

using nlohmann::json;
using namespace hypersara;

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Options {
  std::string config;
  std::string out = "run";
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  std::string adaptive;
  std::optional<int> workers;
  std::string visibilities;
  std::string truth;
  std::string estimate;
  bool resume = false;
};

json load_document(std::string const &path) {
  if(path.empty())
    return json::object();
  std::ifstream is(path);
  if(!is)
    throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(is);
  } catch(json::parse_error const &e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// Command-line flags override keys of the file.
RunConfig effective_config(Options const &o) {
  auto doc = load_document(o.config);
  if(!doc.is_object())
    throw ConfigError("config: top level must be a JSON object");
  if(o.seed)
    doc["seed"] = *o.seed;
  if(!o.algorithm.empty())
    doc["algorithm"] = o.algorithm;
  if(!o.adaptive.empty())
    doc["adaptive_eps"] = o.adaptive == "on";
  if(o.workers)
    doc["workers"] = *o.workers;
  if(!o.visibilities.empty())
    doc["visibilities"] = o.visibilities;
  if(!o.truth.empty())
    doc["truth"] = o.truth;
  return validate_config(doc);
}

void report(RunSummary const &summary) {
  std::cout << "output: " << summary.directory.string() << (summary.reused ? " (unchanged)" : "")
            << '\n';
  if(summary.metrics)
    std::cout << "aSNR " << summary.metrics->asnr << " dB, aSM " << summary.metrics->asm_db
              << " dB, aSTD " << summary.metrics->astd << '\n';
}

void add_common(CLI::App &cmd, Options &o) {
  cmd.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd.add_option("--out", o.out, "output directory")->capture_default_str();
  cmd.add_option("--seed", o.seed, "random seed (overrides the config)");
  cmd.add_option("--workers", o.workers, "OpenMP threads, 0 for the default")->check(CLI::NonNegativeNumber);
}

void add_solver(CLI::App &cmd, Options &o) {
  cmd.add_option("--algorithm", o.algorithm, "solver")
      ->check(CLI::IsMember({"hypersara", "lrjas", "lr", "jas", "sara"}));
  cmd.add_option("--adaptive-eps", o.adaptive, "adjust the data bounds during the solve")
      ->check(CLI::IsMember({"on", "off"}));
}

void add_data(CLI::App &cmd, Options &o) {
  cmd.add_option("--visibilities", o.visibilities, "WBVIS1 file; data are simulated when absent")
      ->check(CLI::ExistingFile);
  cmd.add_option("--truth", o.truth, "WBCUBE1 ground truth for the metrics")->check(CLI::ExistingFile);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Wideband radio-interferometric imaging with low-rank and joint-sparsity priors"};
  app.require_subcommand(1);
  Options o;

  auto *simulate_cmd = app.add_subcommand("simulate", "write a simulated ground truth and its visibilities");
  add_common(*simulate_cmd, o);

  auto *solve_cmd = app.add_subcommand("solve", "simulate or load data, reconstruct, evaluate");
  add_common(*solve_cmd, o);
  add_solver(*solve_cmd, o);
  add_data(*solve_cmd, o);
  solve_cmd->add_flag("--resume", o.resume, "leave a completed run with the same config untouched");

  auto *metrics_cmd = app.add_subcommand("metrics", "evaluate an estimate cube");
  add_common(*metrics_cmd, o);
  add_data(*metrics_cmd, o);
  metrics_cmd->add_option("--estimate", o.estimate, "WBCUBE1 estimate")->required()->check(CLI::ExistingFile);

  auto *sweep_cmd = app.add_subcommand("sweep", "one solve per algorithm, sampling rate and seed");
  add_common(*sweep_cmd, o);
  add_solver(*sweep_cmd, o);
  sweep_cmd->add_flag("--resume", o.resume, "skip points that already completed");

  app.add_subcommand("config-keys", "list every config key with its default and range")
      ->callback([] { std::cout << config_documentation(); });

  try {
    app.parse(argc, argv);
  } catch(CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch(CLI::CallForAllHelp const &e) {
    return app.exit(e);
  } catch(CLI::ParseError const &e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if(simulate_cmd->parsed())
      report(simulate_run(effective_config(o), o.out));
    else if(solve_cmd->parsed()) {
      auto const summary = run_experiment(effective_config(o), o.out, o.resume);
      report(summary);
    } else if(metrics_cmd->parsed())
      report(metrics_run(effective_config(o), o.estimate, o.out));
    else if(sweep_cmd->parsed())
      report(sweep_run(effective_config(o), o.out, o.resume));
  } catch(ConfigError const &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch(IoError const &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch(InvalidInput const &e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch(NumericalError const &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch(std::exception const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
