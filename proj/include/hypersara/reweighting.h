#pragma once

#include <optional>
#include <vector>

#include "hypersara/ppd.h"

namespace hypersara {

//! w-bar_n = gamma_bar / (gamma_bar + ||(Psi^T X)_n||) from precomputed analysis coefficients.
RealVector update_l21_weights(RealMatrix const &coefficients, t_real gamma_bar);
RealVector update_l21_weights(Cube const &x, SaraDictionary const &dict, t_real gamma_bar);
//! w_j = gamma / (gamma + sigma_j(X)), decreasing singular value order.
RealVector update_nuclear_weights(Cube const &x, t_real gamma);

//! Number of singular values above relative_threshold * sigma_1.
t_int effective_rank(Cube const &x, t_real relative_threshold = 1e-3);
//! Number of rows with l2 norm above threshold.
t_int row_support(RealMatrix const &z, t_real threshold);

/// Noise-equivalent floors for the reweighting parameters. `image_noise` is the per-pixel noise
/// level in the image domain; a pure-noise N x L cube has singular values near
/// image_noise (sqrt(N) + sqrt(L)) and analysis rows of norm near image_noise sqrt(L / D).
struct ReweightFloors {
  t_real gamma = 0;
  t_real gamma_bar = 0;
};
ReweightFloors noise_floors(t_real image_noise, t_int pixels, t_int channels, t_int bases);
//! Image-domain noise level from the visibility noise std, M rows and ||Phi||_S.
t_real image_noise_level(t_real visibility_noise, t_int rows, t_real phi_norm, t_int pixels);

struct HyperSaraConfig {
  PpdConfig ppd;
  t_int reweights = 5;   //!< number of inner solves; the first one uses unit weights
  t_real decay = 0.5;    //!< gamma^(k) = max(decay gamma^(k-1), floor)
  ReweightFloors floors;
  std::optional<StepSizes> steps;  //!< auto_step_sizes when absent
  t_real balance_target = kBalanceTarget;  //!< see auto_step_sizes; 0 keeps the plain defaults
};

//! Explicit steps when configured, otherwise auto_step_sizes for the given priors.
StepSizes resolve_step_sizes(WidebandData const &data, OperatorNorms const &norms,
                             HyperSaraConfig const &config, PriorSelection priors);

struct ReweightRecord {
  t_int k = 0;
  t_real gamma = 0;       //!< used for the weights of this solve (0 for unit weights)
  t_real gamma_bar = 0;
  t_int effective_rank = 0;
  t_int row_support = 0;  //!< analysis rows above 1e-3 of the largest row norm
  t_real asnr = 0;        //!< NaN without ground truth
  t_int iterations = 0;
  bool converged = false;
};

struct HyperSaraResult {
  Cube x;
  std::vector<ReweightRecord> records;
  std::vector<InnerReport> reports;
  std::vector<Cube> estimates;  //!< solution after every reweight
  SolverState state;
};

/// Reweighted outer loop: inner PPD solve with the current weights, warm-started from the
/// previous one, then new nuclear and l2,1 weights from the solution.
HyperSaraResult solve_hypersara(WidebandData const &data, SaraDictionary const &dict,
                                OperatorNorms const &norms, HyperSaraConfig const &config,
                                Cube const *ground_truth = nullptr);

} // namespace hypersara
