#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "hypersara/benchmarks.h"
#include "hypersara/config.h"
#include "hypersara/io.h"
#include "hypersara/metrics.h"

namespace hypersara {

//! Output of any of the five solvers.
struct SolveOutcome {
  Cube x;
  std::vector<ReweightRecord> records;  //!< reweighted solvers only (HyperSARA)
  std::vector<InnerReport> reports;     //!< one per inner solve; empty for SARA
  bool converged = true;                //!< every inner solve met its stopping rule
};

SolveOutcome run_algorithm(Algorithm algorithm, WidebandData const &data,
                           SaraDictionary const &dict, OperatorNorms const &norms,
                           HyperSaraConfig const &config, Cube const *truth = nullptr);

/// Weight-scale floors for naturally weighted data with visibility noise std `sigma`, from the
/// first channel's operator norm. `channels` is L for the joint solvers and 1 for SARA.
ReweightFloors data_noise_floors(WidebandData const &data, SaraDictionary const &dict,
                                 t_real sigma, t_int channels);

//! Replaces every block bound with the NNLS residual norm.
NnlsResult apply_nnls_bounds(WidebandData &data, NnlsOptions const &options);

struct RunSummary {
  fs::path directory;
  bool reused = false;  //!< resume found a complete run with the same config
  bool converged = true;
  std::optional<ChannelMetrics> metrics;
  nlohmann::json manifest;
};

/// Ground truth, visibilities and the spectral model of a simulated data set.
RunSummary simulate_run(RunConfig const &config, fs::path const &out);

/// generate (or load visibilities) -> solve -> metrics. Writes cubes, CSVs, PGMs and
/// manifest.json. With `resume`, a directory whose manifest matches the config and whose files
/// still match their digests is left untouched.
RunSummary run_experiment(RunConfig const &config, fs::path const &out, bool resume = false);

//! Metrics of an existing estimate against the truth, on simulated or loaded data.
RunSummary metrics_run(RunConfig const &config, fs::path const &estimate, fs::path const &out);

/// One solve per (algorithm, sampling rate, seed); sweep.csv holds one aSNR row for each.
/// Every point is a complete run in its own subdirectory, so resume skips finished points.
RunSummary sweep_run(RunConfig const &config, fs::path const &out, bool resume = false);

//! Library, Eigen, FFTW and compiler versions.
nlohmann::json version_info();

} // namespace hypersara
