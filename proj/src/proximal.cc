#include "hypersara/proximal.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hypersara/kernels.h"

namespace hypersara {

namespace {

constexpr t_int kGramColumnLimit = 64;

Svd gram_svd(RealMatrix const &z) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(z.transpose() * z);
  if(eig.info() != Eigen::Success)
    throw NumericalError("Gram eigendecomposition failed for a " + std::to_string(z.rows()) + "x" +
                         std::to_string(z.cols()) + " matrix");
  auto const j = z.cols();
  Svd svd;
  svd.sigma.resize(j);
  svd.right.resize(j, j);
  // Eigen returns ascending eigenvalues.
  for(t_int k = 0; k < j; ++k) {
    svd.sigma[k] = std::sqrt(std::max(eig.eigenvalues()[j - 1 - k], 0.0));
    svd.right.col(k) = eig.eigenvectors().col(j - 1 - k);
  }
  svd.left = z * svd.right;
  for(t_int k = 0; k < j; ++k) {
    if(svd.sigma[k] > 0)
      svd.left.col(k) /= svd.sigma[k];
    else
      svd.left.col(k).setZero();
  }
  return svd;
}

Svd bidiagonal_svd(RealMatrix const &z) {
  Eigen::BDCSVD<RealMatrix> solver(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if(solver.info() != Eigen::Success)
    throw NumericalError("SVD did not converge for a " + std::to_string(z.rows()) + "x" +
                         std::to_string(z.cols()) + " matrix");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

bool use_gram(RealMatrix const &z) { return z.cols() <= kGramColumnLimit && z.rows() >= z.cols(); }

void check_finite(RealMatrix const &z, char const *where) {
  if(!z.allFinite())
    throw NumericalError(std::string(where) + ": input contains non-finite values");
}

} // namespace

Svd economy_svd(RealMatrix const &z) {
  check_finite(z, "economy_svd");
  return use_gram(z) ? gram_svd(z) : bidiagonal_svd(z);
}

RealVector singular_values(RealMatrix const &z) { return economy_svd(z).sigma; }

RealMatrix project_positive(RealMatrix const &z) { return z.cwiseMax(0.0); }

RealMatrix prox_weighted_nuclear(RealMatrix const &z, RealVector const &weights, t_real threshold) {
  if(threshold < 0)
    throw InvalidInput("nuclear prox: threshold must be nonnegative");
  auto const j = std::min(z.rows(), z.cols());
  if(weights.size() != j)
    throw InvalidInput("nuclear prox: expected " + std::to_string(j) + " weights, got " +
                       std::to_string(weights.size()));
  if(threshold == 0)
    return z;
  check_finite(z, "prox_weighted_nuclear");
  if(use_gram(z)) {
    // Z V diag(f) V^T with f_j = max(1 - w_j t / sigma_j, 0) avoids forming U explicitly.
    auto const svd = gram_svd(z);
    RealVector factor(j);
    for(t_int k = 0; k < j; ++k) {
      auto const s = svd.sigma[k];
      factor[k] = s > 0 ? std::max(1.0 - weights[k] * threshold / s, 0.0) : 0.0;
    }
    return (z * svd.right) * factor.asDiagonal() * svd.right.transpose();
  }
  auto svd = bidiagonal_svd(z);
  for(t_int k = 0; k < j; ++k)
    svd.sigma[k] = std::max(svd.sigma[k] - weights[k] * threshold, 0.0);
  return svd.left * svd.sigma.asDiagonal() * svd.right.transpose();
}

RealMatrix prox_weighted_l21(RealMatrix const &z, RealVector const &weights, t_real threshold) {
  if(threshold < 0)
    throw InvalidInput("l21 prox: threshold must be nonnegative");
  if(weights.size() != z.rows())
    throw InvalidInput("l21 prox: expected " + std::to_string(z.rows()) + " weights, got " +
                       std::to_string(weights.size()));
  RealMatrix out = z;
  RealVector thresholds = weights * threshold;
  kernels::omp::row_soft_threshold(out, thresholds);
  return out;
}

t_real weighted_nuclear_norm(RealMatrix const &z, RealVector const &weights) {
  auto const sigma = singular_values(z);
  if(weights.size() != sigma.size())
    throw InvalidInput("nuclear norm: weight count mismatch");
  return weights.dot(sigma);
}

t_real weighted_l21_norm(RealMatrix const &z, RealVector const &weights) {
  if(weights.size() != z.rows())
    throw InvalidInput("l21 norm: weight count mismatch");
  return weights.dot(z.rowwise().norm());
}

EllipsoidProjection project_ellipsoid(ComplexVector const &z, ComplexVector const &y,
                                      t_real epsilon, RealVector const &preconditioner,
                                      t_int max_iter, t_real tol, t_real warm_multiplier) {
  auto const m = z.size();
  if(y.size() != m || preconditioner.size() != m)
    throw InvalidInput("ellipsoid projection: size mismatch");
  if(!(epsilon >= 0))
    throw InvalidInput("ellipsoid projection: epsilon must be nonnegative");
  if(!(preconditioner.array() > 0).all())
    throw InvalidInput("ellipsoid projection: preconditioner must be strictly positive");

  RealVector const d = preconditioner.array().rsqrt();
  RealVector const d2 = d.array().square();
  RealVector const r2 = (y - d.cast<t_complex>().cwiseProduct(z)).cwiseAbs2();
  t_real const initial = std::sqrt(r2.sum());

  EllipsoidProjection result;
  if(initial <= epsilon) {
    result.point = z;
    result.multiplier = 0;
    return result;
  }
  if(epsilon == 0) {
    result.point = y.cwiseQuotient(d.cast<t_complex>());
    result.multiplier = std::numeric_limits<t_real>::infinity();
    return result;
  }

  // h(lambda) = 1 / ||r(lambda)|| - 1 / epsilon is increasing; h(0) < 0.
  auto residual_norm = [&](t_real lambda, t_real &derivative) {
    t_real psi = 0, dpsi = 0;
    for(t_int i = 0; i < m; ++i) {
      auto const denom = 1 + lambda * d2[i];
      auto const term = r2[i] / (denom * denom);
      psi += term;
      dpsi += -2 * term * d2[i] / denom;
    }
    auto const norm = std::sqrt(psi);
    // d/dlambda psi^{-1/2} = -1/2 psi^{-3/2} dpsi
    derivative = -0.5 * dpsi / (psi * norm);
    return norm;
  };

  t_real lo = 0;
  t_real hi = (initial / epsilon - 1) / d2.minCoeff();
  t_real lambda = std::clamp(warm_multiplier, lo, hi);
  if(!(lambda > lo && lambda < hi))
    lambda = 0.5 * (lo + hi);
  result.converged = false;
  for(t_int it = 1; it <= max_iter; ++it) {
    result.iterations = it;
    t_real slope;
    auto const norm = residual_norm(lambda, slope);
    if(std::abs(norm - epsilon) <= tol * epsilon) {
      result.converged = true;
      break;
    }
    auto const h = 1 / norm - 1 / epsilon;
    if(h < 0)
      lo = lambda;
    else
      hi = lambda;
    auto next = lambda - h / slope;
    if(!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    lambda = next;
  }

  result.multiplier = lambda;
  result.point.resize(m);
  for(t_int i = 0; i < m; ++i)
    result.point[i] = (z[i] + lambda * d[i] * y[i]) / (1 + lambda * d2[i]);
  return result;
}

} // namespace hypersara
