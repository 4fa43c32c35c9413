#include "hypersara/benchmarks.h"

#include <cmath>
#include <limits>

#include "hypersara/metrics.h"

namespace hypersara {

namespace {

Cube single_solve(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
                  HyperSaraConfig const &config, PriorSelection priors, InnerReport *report) {
  auto ppd = config.ppd;
  ppd.priors = priors;
  auto const steps = resolve_step_sizes(data, norms, config, priors);
  PpdSolver solver(data, dict, steps, ppd);
  auto state = SolverState::zeros(data, dict);
  auto const weights = Weights::ones(dict.dims().size(), static_cast<t_int>(data.size()),
                                     dict.coefficient_rows());
  auto inner = solver.solve(state, weights);
  if(report)
    *report = std::move(inner);
  return state.x;
}

} // namespace

Cube solve_lr(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
              HyperSaraConfig const &config, InnerReport *report) {
  return single_solve(data, dict, norms, config, {true, false}, report);
}

Cube solve_jas(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
               HyperSaraConfig const &config, InnerReport *report) {
  return single_solve(data, dict, norms, config, {false, true}, report);
}

Cube solve_lrjas(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
                 HyperSaraConfig const &config, InnerReport *report) {
  return single_solve(data, dict, norms, config, {true, true}, report);
}

HyperSaraResult solve_sara_channel(ChannelData const &channel, SaraDictionary const &dict,
                                   HyperSaraConfig const &config, RealVector const *ground_truth) {
  WidebandData single{channel};
  auto sara = config;
  sara.ppd.priors = {false, true};
  OperatorNorms norms;
  norms.psi = 1;
  norms.phi = preconditioned_norm(channel);
  sara.steps.reset();
  sara.ppd.observer = nullptr;  // channels run concurrently
  if(ground_truth) {
    Cube truth = *ground_truth;
    return solve_hypersara(single, dict, norms, sara, &truth);
  }
  return solve_hypersara(single, dict, norms, sara);
}

Cube solve_sara(WidebandData const &data, SaraDictionary const &dict, HyperSaraConfig const &config) {
  auto const channels = static_cast<t_int>(data.size());
  Cube x(dict.dims().size(), channels);
#pragma omp parallel for schedule(dynamic)
  for(t_int l = 0; l < channels; ++l)
    x.col(l) = solve_sara_channel(data[l], dict, config).x;
  return x;
}

} // namespace hypersara
