#include "hypersara/experiment.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <fftw3.h>
#include <omp.h>

#include "hypersara/power_method.h"

#ifndef HYPERSARA_VERSION
#define HYPERSARA_VERSION "unknown"
#endif

namespace hypersara {

using nlohmann::json;

namespace {

constexpr char kManifest[] = "manifest.json";

struct Problem {
  WidebandData data;
  std::optional<Cube> truth;
  std::optional<Simulation> simulation;
  t_real sigma = 0;  //!< noise std of the (weighted) visibilities
};

void apply_workers(RunConfig const &config) {
  if(config.workers > 0)
    omp_set_num_threads(static_cast<int>(config.workers));
}

std::uint64_t required_seed(RunConfig const &config) {
  if(!config.seed)
    throw ConfigError("config key 'seed' is required to simulate data");
  return *config.seed;
}

Problem prepare(RunConfig const &config) {
  Problem p;
  auto const dims = config.simulation.dims;
  if(!config.visibilities.empty()) {
    auto const channels = read_visibilities(config.visibilities);
    if(channels.empty())
      throw IoError("visibility file has no channels: " + config.visibilities);
    p.data = wideband_data(channels, dims, config.simulation.blocks, config.simulation.op);
    // Natural weighting leaves unit noise, so the chi^2 bound has sigma = 1.
    p.sigma = 1;
    for(auto &channel : p.data)
      for(auto &block : channel.blocks)
        block.epsilon = epsilon_from_noise(1, block.size());
  } else {
    auto sim_config = config.simulation;
    sim_config.seed = required_seed(config);
    p.simulation = simulate(sim_config);
    p.data = p.simulation->data;
    p.truth = p.simulation->truth;
    p.sigma = p.simulation->noisy.sigma;
  }
  if(!config.truth.empty()) {
    ImageDims truth_dims;
    p.truth = read_cube(config.truth, &truth_dims);
    if(truth_dims != dims || p.truth->cols() != static_cast<t_int>(p.data.size()))
      throw InvalidInput("ground truth cube does not match the image size and channel count");
  }
  return p;
}

std::vector<t_int> preview_channels(t_int channels) {
  std::vector<t_int> out{0, channels / 2, channels - 1};
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_previews(fs::path const &directory, std::string const &stem, Cube const &cube,
                    ImageDims dims, Stretch stretch) {
  for(auto l : preview_channels(cube.cols())) {
    std::ostringstream name;
    name << stem << "_c" << std::setw(3) << std::setfill('0') << l << ".pgm";
    write_pgm(directory / "images" / name.str(), cube.col(l), dims, stretch);
  }
}

void write_bounds_csv(fs::path const &path, std::vector<std::vector<t_real>> const &initial,
                      std::vector<std::vector<t_real>> const &final_bounds,
                      std::vector<std::vector<t_real>> const *reference) {
  std::ofstream os(path);
  if(!os)
    throw IoError("cannot write " + path.string());
  os << std::setprecision(17) << "channel,block,epsilon_initial,epsilon_final"
     << (reference ? ",epsilon_true" : "") << '\n';
  for(std::size_t l = 0; l < initial.size(); ++l)
    for(std::size_t b = 0; b < initial[l].size(); ++b) {
      os << l << ',' << b << ',' << initial[l][b] << ',' << final_bounds[l][b];
      if(reference)
        os << ',' << (*reference)[l][b];
      os << '\n';
    }
}

void write_adaptation_csv(fs::path const &path, std::vector<InnerReport> const &reports) {
  std::ofstream os(path);
  if(!os)
    throw IoError("cannot write " + path.string());
  os << std::setprecision(17) << "t,channel,block,rho,epsilon_old,epsilon_new\n";
  for(auto const &report : reports)
    for(auto const &u : report.bound_updates)
      os << u.iteration << ',' << u.channel << ',' << u.block << ',' << u.rho << ','
         << u.epsilon_old << ',' << u.epsilon_new << '\n';
}

std::vector<std::vector<t_real>> block_bounds(WidebandData const &data) {
  std::vector<std::vector<t_real>> out;
  for(auto const &channel : data) {
    out.emplace_back();
    for(auto const &block : channel.blocks)
      out.back().push_back(block.epsilon);
  }
  return out;
}

//! Bounds after the adaptive updates of all inner solves.
std::vector<std::vector<t_real>> final_bounds(WidebandData const &data,
                                              std::vector<InnerReport> const &reports) {
  auto bounds = block_bounds(data);
  for(auto const &report : reports)
    for(auto const &u : report.bound_updates)
      bounds[u.channel][u.block] = u.epsilon_new;
  return bounds;
}

//! Relative paths and digests of every file below `directory` except the manifest.
json digests(fs::path const &directory) {
  std::map<std::string, std::string> files;
  for(auto const &entry : fs::recursive_directory_iterator(directory)) {
    if(!entry.is_regular_file())
      continue;
    auto const relative = fs::relative(entry.path(), directory).generic_string();
    if(relative == kManifest)
      continue;
    files[relative] = file_digest(entry.path());
  }
  return json(files);
}

std::string config_digest(RunConfig const &config) {
  return string_digest(config.normalized.dump());
}

json base_manifest(RunConfig const &config, std::string const &verb) {
  json m;
  m["verb"] = verb;
  m["config"] = config.normalized;
  m["config_digest"] = config_digest(config);
  m["seed"] = config.seed ? json(*config.seed) : json(nullptr);
  m["versions"] = version_info();
  return m;
}

void finish_manifest(fs::path const &directory, json &manifest) {
  manifest["files"] = digests(directory);
  std::ofstream os(directory / kManifest);
  if(!os)
    throw IoError("cannot write " + (directory / kManifest).string());
  os << manifest.dump(2) << '\n';
}

//! The stored manifest when the run in `directory` is complete and matches the config.
std::optional<json> completed_run(fs::path const &directory, RunConfig const &config,
                                  std::string const &verb) {
  auto const path = directory / kManifest;
  if(!fs::exists(path))
    return std::nullopt;
  json manifest;
  try {
    std::ifstream is(path);
    manifest = json::parse(is);
  } catch(json::exception const &) {
    return std::nullopt;
  }
  if(manifest.value("verb", "") != verb || manifest.value("config_digest", "") != config_digest(config))
    return std::nullopt;
  if(!manifest.contains("files") || manifest["files"] != digests(directory))
    return std::nullopt;
  return manifest;
}

json metrics_json(ChannelMetrics const &m) {
  return {{"asnr", m.asnr}, {"asm", m.asm_db}, {"astd", m.astd}};
}

ChannelMetrics metrics_from_json(json const &j, t_int channels) {
  ChannelMetrics m;
  m.asnr = j.value("asnr", std::numeric_limits<t_real>::quiet_NaN());
  m.asm_db = j.value("asm", std::numeric_limits<t_real>::quiet_NaN());
  m.astd = j.value("astd", std::numeric_limits<t_real>::quiet_NaN());
  m.snr = RealVector::Constant(channels, std::numeric_limits<t_real>::quiet_NaN());
  m.similarity = m.snr;
  m.residual_std = m.snr;
  return m;
}

void write_residual_csv(fs::path const &path, ResidualCube const &residual) {
  std::ofstream os(path);
  if(!os)
    throw IoError("cannot write " + path.string());
  os << std::setprecision(17) << "channel,std\n";
  for(t_int l = 0; l < residual.std.size(); ++l)
    os << l << ',' << residual.std[l] << '\n';
  os << "mean," << residual.astd << '\n';
}

//! Shared by run_experiment and metrics_run: residuals, metrics and previews of an estimate.
std::optional<ChannelMetrics> write_evaluation(fs::path const &out, Problem const &problem,
                                               Cube const &x, RunConfig const &config) {
  auto const dims = config.simulation.dims;
  auto const residual = residual_cube(problem.data, x);
  write_cube(out / "residual.cube", residual.residual, dims);
  write_residual_csv(out / "residual_std.csv", residual);
  write_previews(out, "estimate", x, dims, config.pgm_stretch);
  write_previews(out, "residual", residual.residual, dims, Stretch::linear);
  if(!problem.truth)
    return std::nullopt;
  auto metrics = evaluate(problem.data, *problem.truth, x);
  write_metrics_csv(out / "metrics.csv", metrics);
  return metrics;
}

HyperSaraConfig solver_config(RunConfig const &config, Problem const &problem,
                              SaraDictionary const &dict) {
  auto solver = config.solver;
  if(config.noise_floors && problem.sigma > 0) {
    auto const channels = config.algorithm == Algorithm::sara ? 1 : static_cast<t_int>(problem.data.size());
    solver.floors = data_noise_floors(problem.data, dict, problem.sigma, channels);
  }
  return solver;
}

} // namespace

SolveOutcome run_algorithm(Algorithm algorithm, WidebandData const &data,
                           SaraDictionary const &dict, OperatorNorms const &norms,
                           HyperSaraConfig const &config, Cube const *truth) {
  SolveOutcome out;
  auto single = [&](auto solver) {
    InnerReport report;
    out.x = solver(data, dict, norms, config, &report);
    out.converged = report.converged;
    out.reports.push_back(std::move(report));
  };
  switch(algorithm) {
  case Algorithm::hypersara: {
    auto result = solve_hypersara(data, dict, norms, config, truth);
    out.x = std::move(result.x);
    out.records = std::move(result.records);
    out.reports = std::move(result.reports);
    out.converged = std::all_of(out.reports.begin(), out.reports.end(),
                                [](InnerReport const &r) { return r.converged; });
    break;
  }
  case Algorithm::lrjas:
    single(solve_lrjas);
    break;
  case Algorithm::lr:
    single(solve_lr);
    break;
  case Algorithm::jas:
    single(solve_jas);
    break;
  case Algorithm::sara: {
    auto const channels = static_cast<t_int>(data.size());
    out.x = Cube(dict.dims().size(), channels);
    std::vector<char> converged(channels, 1);
#pragma omp parallel for schedule(dynamic)
    for(t_int l = 0; l < channels; ++l) {
      auto const result = solve_sara_channel(data[l], dict, config);
      out.x.col(l) = result.x;
      for(auto const &r : result.reports)
        converged[l] = converged[l] && r.converged;
    }
    out.converged = std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
    break;
  }
  }
  return out;
}

ReweightFloors data_noise_floors(WidebandData const &data, SaraDictionary const &dict,
                                 t_real sigma, t_int channels) {
  if(data.empty() || !(sigma > 0))
    return {};
  auto const &op = *data.front().op;
  auto const n = op.dims().size();
  auto ws = op.workspace();
  ComplexVector visibilities(op.rows());
  auto normal = [&](RealVector const &x) {
    RealVector out(n);
    op.forward(x, visibilities, ws);
    op.adjoint(visibilities, out, ws);
    return out;
  };
  auto const phi = spectral_norm(normal, n, 1e-6, 500).norm;
  auto const noise = image_noise_level(sigma, op.rows(), phi, n);
  return noise_floors(noise, n, channels, dict.size());
}

NnlsResult apply_nnls_bounds(WidebandData &data, NnlsOptions const &options) {
  auto result = nnls_epsilon_init(data, options);
  for(std::size_t l = 0; l < data.size(); ++l)
    for(std::size_t b = 0; b < data[l].blocks.size(); ++b)
      data[l].blocks[b].epsilon = result.epsilon[l][b];
  return result;
}

json version_info() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  std::ostringstream compiler;
#if defined(__clang__)
  compiler << "clang " << __clang_major__ << '.' << __clang_minor__ << '.' << __clang_patchlevel__;
#elif defined(__GNUC__)
  compiler << "gcc " << __GNUC__ << '.' << __GNUC_MINOR__ << '.' << __GNUC_PATCHLEVEL__;
#else
  compiler << "unknown";
#endif
  return {{"hypersara", HYPERSARA_VERSION},
          {"eigen", eigen.str()},
          {"fftw", std::string(fftw_version)},
          {"compiler", compiler.str()},
          {"openmp", _OPENMP}};
}

RunSummary simulate_run(RunConfig const &config, fs::path const &out) {
  apply_workers(config);
  if(!config.visibilities.empty())
    throw ConfigError("config key 'visibilities' cannot be combined with simulate");
  auto const problem = prepare(config);
  auto const &sim = *problem.simulation;
  auto const dims = config.simulation.dims;
  fs::create_directories(out);
  write_cube(out / "truth.cube", sim.truth, dims);
  write_visibilities(out / "visibilities.wbvis", visibilities_of(sim));
  write_model_csv(out / "model", sim.model);
  auto const bounds = true_bounds(sim);
  write_bounds_csv(out / "bounds.csv", bounds, bounds, nullptr);
  write_previews(out, "truth", sim.truth, dims, config.pgm_stretch);

  RunSummary summary;
  summary.directory = out;
  summary.manifest = base_manifest(config, "simulate");
  summary.manifest["noise_sigma"] = sim.noisy.sigma;
  finish_manifest(out, summary.manifest);
  return summary;
}

RunSummary run_experiment(RunConfig const &config, fs::path const &out, bool resume) {
  apply_workers(config);
  RunSummary summary;
  summary.directory = out;
  if(resume) {
    if(auto manifest = completed_run(out, config, "solve")) {
      summary.reused = true;
      summary.manifest = *manifest;
      summary.converged = manifest->value("converged", false);
      if(manifest->contains("metrics"))
        summary.metrics = metrics_from_json((*manifest)["metrics"], config.simulation.channels);
      return summary;
    }
  }

  auto problem = prepare(config);
  auto const dims = config.simulation.dims;
  fs::create_directories(out);
  SaraDictionary const dict(dims);
  auto const reference_bounds = block_bounds(problem.data);
  if(config.nnls_init)
    apply_nnls_bounds(problem.data, config.nnls);
  auto const initial = block_bounds(problem.data);
  auto const norms = config.norms ? *config.norms : compute_operator_norms(problem.data, dict);

  auto solver = solver_config(config, problem, dict);
  std::ofstream progress;
  if(config.progress_every > 0) {
    progress.open(out / "progress.csv");
    if(!progress)
      throw IoError("cannot write " + (out / "progress.csv").string());
    progress << std::setprecision(17);
    write_progress_header(progress);
    solver.ppd.observer = [&progress](IterationRecord const &r) { write_progress_row(progress, r); };
    solver.ppd.observe_every = config.progress_every;
  }

  Cube const *truth = problem.truth ? &*problem.truth : nullptr;
  auto const outcome = run_algorithm(config.algorithm, problem.data, dict, norms, solver, truth);
  if(progress.is_open())
    progress.close();
  if(!outcome.converged)
    std::cerr << "warning: " << algorithm_name(config.algorithm)
              << " stopped at the iteration limit before meeting the stopping rule\n";

  write_cube(out / "estimate.cube", outcome.x, dims);
  if(!outcome.records.empty())
    write_reweight_csv(out / "reweights.csv", outcome.records);
  if(config.solver.ppd.adaptive.enabled)
    write_adaptation_csv(out / "adaptation.csv", outcome.reports);
  write_bounds_csv(out / "bounds.csv", initial, final_bounds(problem.data, outcome.reports),
                   problem.simulation ? &reference_bounds : nullptr);
  if(problem.simulation) {
    write_cube(out / "truth.cube", problem.simulation->truth, dims);
    write_model_csv(out / "model", problem.simulation->model);
  }
  if(problem.truth)
    write_previews(out, "truth", *problem.truth, dims, config.pgm_stretch);
  summary.metrics = write_evaluation(out, problem, outcome.x, config);
  summary.converged = outcome.converged;

  auto &m = summary.manifest;
  m = base_manifest(config, "solve");
  m["algorithm"] = algorithm_name(config.algorithm);
  m["converged"] = outcome.converged;
  m["norms"] = {{"psi", norms.psi}, {"phi", norms.phi}};
  json iterations = json::array();
  for(auto const &r : outcome.reports)
    iterations.push_back(r.iterations);
  m["iterations"] = iterations;
  if(summary.metrics)
    m["metrics"] = metrics_json(*summary.metrics);
  finish_manifest(out, m);
  return summary;
}

RunSummary metrics_run(RunConfig const &config, fs::path const &estimate, fs::path const &out) {
  apply_workers(config);
  auto const problem = prepare(config);
  ImageDims dims;
  auto const x = read_cube(estimate, &dims);
  if(dims != config.simulation.dims || x.cols() != static_cast<t_int>(problem.data.size()))
    throw InvalidInput("estimate cube does not match the image size and channel count");
  fs::create_directories(out);
  RunSummary summary;
  summary.directory = out;
  summary.metrics = write_evaluation(out, problem, x, config);
  summary.manifest = base_manifest(config, "metrics");
  summary.manifest["estimate_digest"] = file_digest(estimate);
  if(summary.metrics)
    summary.manifest["metrics"] = metrics_json(*summary.metrics);
  finish_manifest(out, summary.manifest);
  return summary;
}

RunSummary sweep_run(RunConfig const &config, fs::path const &out, bool resume) {
  apply_workers(config);
  if(!config.visibilities.empty())
    throw ConfigError("config key 'visibilities' cannot be combined with sweep");
  auto const algorithms =
      config.sweep_algorithms.empty() ? std::vector<Algorithm>{config.algorithm} : config.sweep_algorithms;
  auto const rates = config.sweep_sampling_rates.empty()
                         ? std::vector<t_real>{config.simulation.sampling_rate}
                         : config.sweep_sampling_rates;
  auto const seeds = config.sweep_seeds.empty() ? std::vector<std::uint64_t>{required_seed(config)}
                                                : config.sweep_seeds;
  fs::create_directories(out);

  std::ostringstream table;
  table << std::setprecision(17) << "algorithm,sampling_rate,seed,asnr,converged\n";
  bool all_converged = true;
  for(auto algorithm : algorithms)
    for(auto rate : rates)
      for(auto seed : seeds) {
        auto point = config;
        point.algorithm = algorithm;
        point.simulation.sampling_rate = rate;
        point.seed = seed;
        point.sweep_algorithms.clear();
        point.sweep_sampling_rates.clear();
        point.sweep_seeds.clear();
        point.normalized["algorithm"] = algorithm_name(algorithm);
        point.normalized["sampling_rate"] = rate;
        point.normalized["seed"] = seed;
        point.normalized["sweep_algorithms"] = json::array();
        point.normalized["sweep_sampling_rates"] = json::array();
        point.normalized["sweep_seeds"] = json::array();

        std::ostringstream name;
        name << algorithm_name(algorithm) << "_sr" << rate << "_seed" << seed;
        auto const result = run_experiment(point, out / "points" / name.str(), resume);
        all_converged = all_converged && result.converged;
        table << algorithm_name(algorithm) << ',' << rate << ',' << seed << ','
              << (result.metrics ? result.metrics->asnr : std::numeric_limits<t_real>::quiet_NaN())
              << ',' << (result.converged ? 1 : 0) << '\n';
      }
  {
    std::ofstream os(out / "sweep.csv");
    if(!os)
      throw IoError("cannot write " + (out / "sweep.csv").string());
    os << table.str();
  }
  RunSummary summary;
  summary.directory = out;
  summary.converged = all_converged;
  summary.manifest = base_manifest(config, "sweep");
  finish_manifest(out, summary.manifest);
  return summary;
}

} // namespace hypersara
