#pragma once

#include <limits>
#include <vector>

#include "hypersara/fourier.h"
#include "hypersara/types.h"

namespace hypersara {

struct AdaptiveBoundParams {
  bool enabled = false;
  t_real lambda1 = 1e-3;  //!< bound on the relative variation beta
  t_real lambda2 = 1e-2;  //!< tolerance on |rho - epsilon| / epsilon; infinity disables updates
  t_real lambda3 = 0.5;   //!< weight of rho in the new bound
  t_int min_gap = 100;    //!< minimum iterations between two updates of the same block
};

struct BlockBound {
  t_real epsilon = 0;
  t_int last_update = 0;  //!< iteration of the previous update
  t_real rho = 0;         //!< latest residual norm
};

//! Per-channel, per-block bounds.
using BoundTable = std::vector<std::vector<BlockBound>>;

BoundTable initial_bounds(WidebandData const &data);

struct BoundUpdate {
  t_int iteration = 0;
  t_int channel = 0;
  t_int block = 0;
  t_real rho = 0;
  t_real epsilon_old = 0;
  t_real epsilon_new = 0;
};

/// Updates one block's bound in place when beta < lambda1, t - last_update > min_gap and
/// |rho - epsilon| / epsilon > lambda2 (a zero epsilon always passes the last test). The new
/// bound is lambda3 rho + (1 - lambda3) epsilon. Records rho either way; returns true on update.
bool maybe_update_epsilon(BlockBound &bound, AdaptiveBoundParams const &params, t_int t,
                          t_real beta, t_real rho);

struct NnlsOptions {
  t_real tol = 1e-5;      //!< relative change of the objective
  t_int max_iter = 2000;
};

struct NnlsResult {
  Cube x;
  std::vector<std::vector<t_real>> epsilon;  //!< ||y_l^b - Phi_l^b x_l||
  std::vector<bool> converged;               //!< per channel
  std::vector<t_int> iterations;
};

/// Per-channel nonnegative least squares min ||y_l - Phi_l x||^2 s.t. x >= 0 by accelerated
/// projected gradient; the block residual norms give initial (under-estimated) bounds.
NnlsResult nnls_epsilon_init(WidebandData const &data, NnlsOptions const &options = {});

//! Single-channel NNLS core, exposed for testing.
RealVector nnls_projected_gradient(MeasurementOperator const &op, ComplexVector const &y,
                                   NnlsOptions const &options, bool *converged = nullptr,
                                   t_int *iterations = nullptr);

} // namespace hypersara
