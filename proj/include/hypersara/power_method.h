#pragma once

#include <cstdint>
#include <functional>

#include "hypersara/types.h"

namespace hypersara {

struct PowerMethodResult {
  t_real norm = 0;        //!< largest singular value of A
  t_int iterations = 0;
  bool converged = false; //!< false: max_iter reached, norm is the last estimate
};

//! Applies A^T A to a vector of the operator's domain.
using NormalOperator = std::function<RealVector(RealVector const &)>;

/// Spectral norm ||A||_S by power iteration on A^T A. Starts from a fixed-seed Gaussian vector, so
/// the result is reproducible. Stops when the relative change of the eigenvalue estimate drops
/// below `tol`.
PowerMethodResult spectral_norm(NormalOperator const &normal, t_int dimension, t_real tol = 1e-8,
                                t_int max_iter = 1000, std::uint64_t seed = 0x5eed);

} // namespace hypersara
