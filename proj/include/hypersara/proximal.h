#pragma once

#include "hypersara/types.h"

namespace hypersara {

//! Economy SVD, singular values in decreasing order; J = min(rows, cols).
struct Svd {
  RealMatrix left;   //!< rows x J
  RealVector sigma;  //!< J, decreasing
  RealMatrix right;  //!< cols x J
};

/// Economy SVD. Tall matrices with at most 64 columns go through the eigendecomposition of the
/// cols x cols Gram matrix; anything else through Eigen's bidiagonal divide and conquer.
Svd economy_svd(RealMatrix const &z);
RealVector singular_values(RealMatrix const &z);

//! Entrywise max(z, 0).
RealMatrix project_positive(RealMatrix const &z);

/// Weighted singular value soft-thresholding:
///   U diag(max(sigma_j - weights_j * threshold, 0)) V^T
/// with `weights` aligned with the decreasing singular values.
RealMatrix prox_weighted_nuclear(RealMatrix const &z, RealVector const &weights, t_real threshold);

//! Row-wise soft-thresholding of z with per-row thresholds weights_n * threshold.
RealMatrix prox_weighted_l21(RealMatrix const &z, RealVector const &weights, t_real threshold);

//! sum_j weights_j sigma_j
t_real weighted_nuclear_norm(RealMatrix const &z, RealVector const &weights);
//! sum_n weights_n ||z_n||_2
t_real weighted_l21_norm(RealMatrix const &z, RealVector const &weights);

struct EllipsoidProjection {
  ComplexVector point;
  t_real multiplier = 0;  //!< Lagrange multiplier of the ball constraint; warm start for next call
  t_int iterations = 0;
  bool converged = true;
};

/// Euclidean projection of z onto E = { q : ||y - U^{-1/2} q||_2 <= epsilon } with U diagonal
/// (`preconditioner` holds its strictly positive entries). Mapping back p = U^{-1/2} q gives the
/// point of the ball B(y, epsilon) closest to U^{-1/2} z in the U-metric.
///
/// The multiplier solves the secular equation
///   sum_i |y_i - d_i z_i|^2 / (1 + lambda d_i^2)^2 = epsilon^2,   d_i = U_ii^{-1/2},
/// by Newton's method on 1/sqrt(.) with a bisection safeguard. Stops once the constraint residual
/// is within tol * epsilon.
EllipsoidProjection project_ellipsoid(ComplexVector const &z, ComplexVector const &y,
                                      t_real epsilon, RealVector const &preconditioner,
                                      t_int max_iter = 50, t_real tol = 1e-8,
                                      t_real warm_multiplier = 0);

/// Moreau split: the dual update (I - prox)(input) given prox(input). With identity metric,
/// prox(input) + dual_from_prox(...) reconstructs input.
template <typename Derived, typename Other>
auto dual_from_prox(Eigen::MatrixBase<Derived> const &prox_result,
                    Eigen::MatrixBase<Other> const &input) {
  return (input - prox_result).eval();
}

} // namespace hypersara
