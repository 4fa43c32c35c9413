#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypersara/adaptive_bounds.h"
#include "hypersara/io.h"
#include "hypersara/reweighting.h"
#include "hypersara/simulation.h"

namespace hypersara {

enum class Algorithm { hypersara, lrjas, lr, jas, sara };

Algorithm parse_algorithm(std::string const &name);
std::string algorithm_name(Algorithm algorithm);

/// Run configuration. Every key of the flat JSON schema maps to one field; see
/// config_documentation() for names, defaults and admissible ranges.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  SimulationConfig simulation;
  Algorithm algorithm = Algorithm::hypersara;
  HyperSaraConfig solver;
  bool nnls_init = false;
  NnlsOptions nnls;
  std::optional<OperatorNorms> norms;  //!< supplied norms skip the power method
  std::optional<std::array<t_real, 4>> manual_steps;  //!< tau, kappa1, kappa2, kappa3
  bool noise_floors = true;            //!< floor the reweighting scales at the noise level
  t_int progress_every = 10;           //!< 0 disables the progress CSV
  t_int workers = 0;                   //!< 0 keeps the OpenMP default
  Stretch pgm_stretch = Stretch::linear;
  std::string visibilities;            //!< WBVIS1 input for `solve`; empty means simulate
  std::string truth;                   //!< optional WBCUBE1 ground truth for metrics
  std::vector<t_real> sweep_sampling_rates;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<Algorithm> sweep_algorithms;
  nlohmann::json normalized;           //!< every key with its effective value
};

/// Fills defaults, checks types and ranges; throws ConfigError naming the key and its range.
/// Unknown keys are rejected. When both norms and manual step sizes are given, the
/// convergence condition is checked here.
RunConfig validate_config(nlohmann::json const &document);

RunConfig load_config(std::string const &path);

//! One line per key: name, default, admissible range.
std::string config_documentation();

} // namespace hypersara
