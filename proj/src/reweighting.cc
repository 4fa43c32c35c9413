#include "hypersara/reweighting.h"

#include <cmath>
#include <limits>

#include "hypersara/metrics.h"
#include "hypersara/proximal.h"

namespace hypersara {

RealVector update_l21_weights(RealMatrix const &coefficients, t_real gamma_bar) {
  if(!(gamma_bar > 0))
    throw InvalidInput("l21 reweighting: gamma_bar must be strictly positive");
  RealVector const norms = coefficients.rowwise().norm();
  return (gamma_bar / (gamma_bar + norms.array())).matrix();
}

RealVector update_l21_weights(Cube const &x, SaraDictionary const &dict, t_real gamma_bar) {
  return update_l21_weights(dict.analysis(x), gamma_bar);
}

RealVector update_nuclear_weights(Cube const &x, t_real gamma) {
  if(!(gamma > 0))
    throw InvalidInput("nuclear reweighting: gamma must be strictly positive");
  RealVector const sigma = singular_values(x);
  return (gamma / (gamma + sigma.array())).matrix();
}

t_int effective_rank(Cube const &x, t_real relative_threshold) {
  RealVector const sigma = singular_values(x);
  if(sigma.size() == 0 || sigma[0] == 0)
    return 0;
  return (sigma.array() > relative_threshold * sigma[0]).count();
}

t_int row_support(RealMatrix const &z, t_real threshold) {
  return (z.rowwise().norm().array() > threshold).count();
}

ReweightFloors noise_floors(t_real image_noise, t_int pixels, t_int channels, t_int bases) {
  auto const n = static_cast<t_real>(pixels);
  auto const l = static_cast<t_real>(channels);
  auto const d = static_cast<t_real>(bases);
  return {image_noise * (std::sqrt(n) + std::sqrt(l)), image_noise * std::sqrt(l / d)};
}

t_real image_noise_level(t_real visibility_noise, t_int rows, t_real phi_norm, t_int pixels) {
  if(!(phi_norm > 0))
    throw InvalidInput("image noise level: operator norm must be strictly positive");
  return visibility_noise * std::sqrt(static_cast<t_real>(rows)) /
         (phi_norm * std::sqrt(static_cast<t_real>(pixels)));
}

StepSizes resolve_step_sizes(WidebandData const &data, OperatorNorms const &norms,
                             HyperSaraConfig const &config, PriorSelection priors) {
  if(config.steps)
    return *config.steps;
  if(config.balance_target > 0)
    return auto_step_sizes(data, norms, priors, config.balance_target);
  return default_step_sizes(norms, priors);
}

HyperSaraResult solve_hypersara(WidebandData const &data, SaraDictionary const &dict,
                                OperatorNorms const &norms, HyperSaraConfig const &config,
                                Cube const *ground_truth) {
  if(config.reweights < 1)
    throw InvalidInput("HyperSARA: at least one reweight is required");
  if(!(config.decay > 0 && config.decay < 1))
    throw InvalidInput("HyperSARA: decay must lie in (0, 1)");
  auto const steps = resolve_step_sizes(data, norms, config, config.ppd.priors);
  PpdSolver solver(data, dict, steps, config.ppd);

  auto const n = dict.dims().size();
  auto const channels = static_cast<t_int>(data.size());
  HyperSaraResult result;
  result.state = SolverState::zeros(data, dict);
  auto weights = Weights::ones(n, channels, dict.coefficient_rows());

  t_real gamma = 0, gamma_bar = 0;
  for(t_int k = 1; k <= config.reweights; ++k) {
    auto report = solver.solve(result.state, weights);
    auto const &x = result.state.x;
    RealMatrix const coefficients = dict.analysis(x);

    ReweightRecord record;
    record.k = k;
    record.gamma = gamma;
    record.gamma_bar = gamma_bar;
    record.effective_rank = effective_rank(x);
    RealVector const row_norms = coefficients.rowwise().norm();
    record.row_support = row_support(coefficients, 1e-3 * row_norms.maxCoeff());
    record.asnr = ground_truth ? asnr(*ground_truth, x) : std::numeric_limits<t_real>::quiet_NaN();
    record.iterations = report.iterations;
    record.converged = report.converged;
    result.records.push_back(record);
    result.reports.push_back(std::move(report));
    result.estimates.push_back(x);

    if(k == config.reweights)
      break;
    if(k == 1) {
      // Initial scales from the first (unit-weight) solution.
      RealVector const sigma = singular_values(x);
      gamma = sigma.size() > 0 ? sigma[0] : 0;
      gamma_bar = row_norms.maxCoeff();
      if(!(gamma > 0))
        gamma = 1;
      if(!(gamma_bar > 0))
        gamma_bar = 1;
    }
    gamma = std::max(config.decay * gamma, config.floors.gamma);
    gamma_bar = std::max(config.decay * gamma_bar, config.floors.gamma_bar);
    weights.nuclear = update_nuclear_weights(x, gamma);
    weights.l21 = update_l21_weights(coefficients, gamma_bar);
  }
  result.x = result.state.x;
  return result;
}

} // namespace hypersara
