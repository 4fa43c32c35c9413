#include "hypersara/power_method.h"

#include <cmath>
#include <random>

namespace hypersara {

PowerMethodResult spectral_norm(NormalOperator const &normal, t_int dimension, t_real tol,
                                t_int max_iter, std::uint64_t seed) {
  if(dimension <= 0)
    throw InvalidInput("power method: empty domain");
  std::mt19937_64 rng(seed);
  std::normal_distribution<t_real> gaussian;
  RealVector x(dimension);
  for(t_int i = 0; i < dimension; ++i)
    x[i] = gaussian(rng);
  x.normalize();

  PowerMethodResult result;
  t_real eigenvalue = 0;
  for(t_int it = 1; it <= max_iter; ++it) {
    RealVector y = normal(x);
    t_real const next = y.norm();
    result.iterations = it;
    if(!std::isfinite(next))
      throw NumericalError("power method produced a non-finite iterate");
    if(next == 0) {
      result.norm = 0;
      result.converged = true;
      return result;
    }
    x = y / next;
    bool const done = it > 1 && std::abs(next - eigenvalue) <= tol * next;
    eigenvalue = next;
    if(done) {
      result.converged = true;
      break;
    }
  }
  result.norm = std::sqrt(eigenvalue);
  return result;
}

} // namespace hypersara
