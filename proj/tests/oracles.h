#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "hypersara/types.h"

namespace testing {

using namespace hypersara;

// Oracles built on Eigen's one-sided Jacobi SVD, independent of economy_svd.
inline RealMatrix svt_oracle(RealMatrix const &z, RealVector const &weights, t_real threshold) {
  Eigen::JacobiSVD<RealMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  RealVector s = svd.singularValues();
  for(t_int j = 0; j < s.size(); ++j)
    s[j] = std::max(s[j] - weights[j] * threshold, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

inline t_real nuclear_oracle(RealMatrix const &z, RealVector const &weights) {
  Eigen::JacobiSVD<RealMatrix> svd(z);
  return weights.dot(svd.singularValues());
}

inline RealMatrix row_oracle(RealMatrix const &z, RealVector const &weights, t_real threshold) {
  RealMatrix out = z;
  for(t_int n = 0; n < z.rows(); ++n) {
    t_real norm = 0;
    for(t_int l = 0; l < z.cols(); ++l)
      norm += z(n, l) * z(n, l);
    norm = std::sqrt(norm);
    auto const t = weights[n] * threshold;
    auto const scale = norm > t ? (norm - t) / norm : 0.0;
    for(t_int l = 0; l < z.cols(); ++l)
      out(n, l) = z(n, l) * scale;
  }
  return out;
}

// Scalar secular equation on the multiplier, solved by plain bisection.
inline ComplexVector ellipsoid_oracle(ComplexVector const &z, ComplexVector const &y, t_real epsilon,
                               RealVector const &u) {
  RealVector const d = u.cwiseSqrt().cwiseInverse();
  auto residual = [&](t_real lambda) {
    t_real s = 0;
    for(t_int i = 0; i < z.size(); ++i)
      s += std::norm(y[i] - d[i] * z[i]) / std::pow(1 + lambda * d[i] * d[i], 2);
    return std::sqrt(s);
  };
  auto point = [&](t_real lambda) {
    ComplexVector q(z.size());
    for(t_int i = 0; i < z.size(); ++i)
      q[i] = (z[i] + lambda * d[i] * y[i]) / (1 + lambda * d[i] * d[i]);
    return q;
  };
  if(residual(0) <= epsilon)
    return z;
  t_real lo = 0, hi = 1;
  while(residual(hi) > epsilon)
    hi *= 2;
  for(int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    auto const mid = 0.5 * (lo + hi);
    (residual(mid) > epsilon ? lo : hi) = mid;
  }
  return point(0.5 * (lo + hi));
}

} // namespace testing
