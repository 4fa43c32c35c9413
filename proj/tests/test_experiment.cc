#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hypersara/experiment.h"

using namespace hypersara;
using nlohmann::json;

namespace {

fs::path fresh(std::string const &name) {
  auto const dir = fs::temp_directory_path() / "hypersara_experiment_test" / name;
  fs::remove_all(dir);
  return dir;
}

json minimal() {
  return json{{"seed", 5},        {"n1", 32},        {"n2", 32},
              {"channels", 2},    {"sources", 2},    {"sampling_rate", 0.5},
              {"algorithm", "lrjas"}, {"max_iter", 300}};
}

int run_cli(std::string const &args) {
  auto const status = std::system((std::string(HYPERSARA_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("minimal run writes its artifacts and a manifest") {
  auto const out = fresh("minimal");
  auto const summary = run_experiment(validate_config(minimal()), out);
  for(auto const *name : {"manifest.json", "estimate.cube", "truth.cube", "metrics.csv", "bounds.csv",
                          "progress.csv", "residual_std.csv"})
    CHECK_MESSAGE(fs::exists(out / name), name);
  REQUIRE(summary.metrics.has_value());
  CHECK(summary.metrics->asnr > 10);
  std::ifstream is(out / "manifest.json");
  auto const manifest = json::parse(is);
  CHECK(manifest["verb"] == "solve");
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["algorithm"] == "lrjas");
  CHECK(manifest["config"]["channels"] == 2);
  CHECK(manifest.contains("versions"));
  CHECK(manifest["files"].contains("estimate.cube"));
  CHECK(manifest["files"]["estimate.cube"] == file_digest(out / "estimate.cube"));
}

TEST_CASE("reruns and worker counts reproduce identical files") {
  auto doc = minimal();
  doc["workers"] = 1;
  auto const a = fresh("workers1");
  auto const b = fresh("workers1_again");
  auto const c = fresh("workers3");
  run_experiment(validate_config(doc), a);
  run_experiment(validate_config(doc), b);
  doc["workers"] = 3;
  run_experiment(validate_config(doc), c);
  auto files = [](fs::path const &dir) {
    std::ifstream is(dir / "manifest.json");
    return json::parse(is)["files"];
  };
  CHECK(files(a) == files(b));
  CHECK(files(a) == files(c));
}

TEST_CASE("resume leaves a completed run untouched") {
  auto const out = fresh("resume");
  auto const config = validate_config(minimal());
  run_experiment(config, out);
  auto const before = fs::last_write_time(out / "estimate.cube");
  auto const manifest_before = fs::last_write_time(out / "manifest.json");
  auto const again = run_experiment(config, out, true);
  CHECK(again.reused);
  CHECK(again.metrics.has_value());
  CHECK(fs::last_write_time(out / "estimate.cube") == before);
  CHECK(fs::last_write_time(out / "manifest.json") == manifest_before);

  // A changed config is not a completed run.
  auto doc = minimal();
  doc["max_iter"] = 301;
  CHECK_FALSE(run_experiment(validate_config(doc), out, true).reused);
}

TEST_CASE("sweep writes one row per algorithm, sampling rate and seed") {
  auto doc = minimal();
  doc["algorithm"] = "lr";
  doc["sweep_sampling_rates"] = {0.05, 0.1, 0.3};
  doc["max_iter"] = 100;
  auto const out = fresh("sweep");
  sweep_run(validate_config(doc), out);
  std::ifstream is(out / "sweep.csv");
  std::string line;
  std::vector<std::string> rows;
  while(std::getline(is, line))
    rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "algorithm,sampling_rate,seed,asnr,converged");
  std::vector<t_real> const rates{0.05, 0.1, 0.3};
  for(std::size_t k = 0; k < 3; ++k) {
    std::istringstream fields(rows[k + 1]);
    std::string algorithm, rate, seed;
    std::getline(fields, algorithm, ',');
    std::getline(fields, rate, ',');
    std::getline(fields, seed, ',');
    CHECK(algorithm == "lr");
    CHECK(std::stod(rate) == rates[k]);
    CHECK(seed == "5");
  }
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("simulation requires a seed and loaded data solve like simulated data") {
  auto doc = minimal();
  doc.erase("seed");
  CHECK_THROWS_AS(run_experiment(validate_config(doc), fresh("noseed")), ConfigError);

  auto const sim_dir = fresh("simulated");
  auto const sim = simulate_run(validate_config(minimal()), sim_dir);
  CHECK(fs::exists(sim_dir / "visibilities.wbvis"));
  CHECK(fs::exists(sim_dir / "truth.cube"));

  auto loaded = minimal();
  loaded.erase("seed");
  loaded["visibilities"] = (sim_dir / "visibilities.wbvis").string();
  loaded["truth"] = (sim_dir / "truth.cube").string();
  auto const run = run_experiment(validate_config(loaded), fresh("loaded"));
  REQUIRE(run.metrics.has_value());
  CHECK(run.metrics->asnr > 10);

  loaded["visibilities"] = (sim_dir / "missing.wbvis").string();
  CHECK_THROWS_AS(run_experiment(validate_config(loaded), fresh("missing")), IoError);
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("config-keys") == 0);
  auto const dir = fresh("cli");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "bad.json");
    os << R"({"lambda2": 1.5})";
  }
  {
    auto doc = minimal();
    doc["max_iter"] = 50;
    std::ofstream os(dir / "good.json");
    os << doc.dump();
  }
  CHECK(run_cli("solve --config " + (dir / "bad.json").string() + " --out " + (dir / "x").string()) == 2);
  CHECK(run_cli("solve --algorithm clean") == 2);
  CHECK(run_cli("solve --out " + (dir / "noseed").string()) == 2);
  CHECK(run_cli("solve --config " + (dir / "good.json").string() + " --out " + (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "manifest.json"));
  CHECK(run_cli("simulate --config " + (dir / "good.json").string() + " --seed 9 --out " +
                (dir / "sim").string()) == 0);
  CHECK(run_cli("metrics --config " + (dir / "good.json").string() + " --estimate " +
                (dir / "ok" / "estimate.cube").string() + " --out " + (dir / "m").string()) == 0);
  CHECK(fs::exists(dir / "m" / "metrics.csv"));
}
