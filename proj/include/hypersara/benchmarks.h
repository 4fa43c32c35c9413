#pragma once

#include "hypersara/reweighting.h"

namespace hypersara {

//! min ||X||_* s.t. fidelity and positivity.
Cube solve_lr(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
              HyperSaraConfig const &config, InnerReport *report = nullptr);
//! min ||Psi^T X||_{2,1} s.t. fidelity and positivity.
Cube solve_jas(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
               HyperSaraConfig const &config, InnerReport *report = nullptr);
//! Both priors with unit weights, single inner solve.
Cube solve_lrjas(WidebandData const &data, SaraDictionary const &dict, OperatorNorms const &norms,
                 HyperSaraConfig const &config, InnerReport *report = nullptr);

/// Single-channel reweighted l1 analysis (SARA): the L = 1 case of the joint-sparsity path with
/// weights gamma / (gamma + |(Psi^T x)_i|) and the same decay schedule as HyperSARA.
HyperSaraResult solve_sara_channel(ChannelData const &channel, SaraDictionary const &dict,
                                   HyperSaraConfig const &config,
                                   RealVector const *ground_truth = nullptr);
//! SARA on every channel independently; channels run in parallel.
Cube solve_sara(WidebandData const &data, SaraDictionary const &dict, HyperSaraConfig const &config);

} // namespace hypersara
