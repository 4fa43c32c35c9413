#include "hypersara/adaptive_bounds.h"

#include <cmath>
#include <limits>

#include "hypersara/power_method.h"

namespace hypersara {

BoundTable initial_bounds(WidebandData const &data) {
  BoundTable table;
  for(auto const &channel : data) {
    std::vector<BlockBound> row;
    for(auto const &block : channel.blocks)
      row.push_back({block.epsilon, 0, 0});
    table.push_back(std::move(row));
  }
  return table;
}

bool maybe_update_epsilon(BlockBound &bound, AdaptiveBoundParams const &params, t_int t,
                          t_real beta, t_real rho) {
  bound.rho = rho;
  if(!(beta < params.lambda1))
    return false;
  if(!(t - bound.last_update > params.min_gap))
    return false;
  if(std::isinf(params.lambda2))
    return false;
  bool const saturated =
      bound.epsilon == 0 || std::abs(rho - bound.epsilon) / bound.epsilon > params.lambda2;
  if(!saturated)
    return false;
  bound.epsilon = params.lambda3 * rho + (1 - params.lambda3) * bound.epsilon;
  bound.last_update = t;
  return true;
}

RealVector nnls_projected_gradient(MeasurementOperator const &op, ComplexVector const &y,
                                   NnlsOptions const &options, bool *converged, t_int *iterations) {
  auto const n = op.dims().size();
  auto ws = op.workspace();
  ComplexVector residual(op.rows());
  RealVector gradient(n);

  auto normal = [&](RealVector const &x) {
    RealVector out(n);
    op.forward(x, residual, ws);
    op.adjoint(residual, out, ws);
    return out;
  };
  auto const lipschitz = std::pow(spectral_norm(normal, n, 1e-6, 500).norm, 2);
  if(!(lipschitz > 0))
    throw NumericalError("NNLS: measurement operator has zero norm");
  auto const step = 1 / lipschitz;

  // FISTA with the projected gradient step and adaptive restart on objective increase.
  RealVector x = RealVector::Zero(n);
  RealVector previous = x;
  RealVector momentum = x;
  t_real t_k = 1;
  t_real objective = 0.5 * y.squaredNorm();
  bool done = y.squaredNorm() == 0;
  t_int it = 0;
  for(; it < options.max_iter && !done; ++it) {
    op.forward(momentum, residual, ws);
    residual -= y;
    op.adjoint(residual, gradient, ws);
    previous = x;
    x = (momentum - step * gradient).cwiseMax(0.0);

    op.forward(x, residual, ws);
    auto const next_objective = 0.5 * (residual - y).squaredNorm();
    if(next_objective > objective) {
      t_k = 1;
      momentum = x;
    } else {
      auto const t_next = 0.5 * (1 + std::sqrt(1 + 4 * t_k * t_k));
      momentum = x + ((t_k - 1) / t_next) * (x - previous);
      t_k = t_next;
    }
    auto const change = std::abs(objective - next_objective);
    done = change <= options.tol * std::max(objective, std::numeric_limits<t_real>::min());
    objective = next_objective;
  }
  if(converged)
    *converged = done;
  if(iterations)
    *iterations = it;
  return x;
}

NnlsResult nnls_epsilon_init(WidebandData const &data, NnlsOptions const &options) {
  auto const channels = static_cast<t_int>(data.size());
  if(channels == 0)
    throw InvalidInput("NNLS: no channels");
  auto const n = data.front().op->dims().size();
  NnlsResult result;
  result.x = Cube::Zero(n, channels);
  result.epsilon.resize(channels);
  result.converged.assign(channels, false);
  result.iterations.assign(channels, 0);
  std::vector<char> converged(channels, 0);
#pragma omp parallel for schedule(dynamic)
  for(t_int l = 0; l < channels; ++l) {
    auto const &channel = data[l];
    ComplexVector y(channel.op->rows());
    for(auto const &block : channel.blocks)
      y.segment(block.begin, block.size()) = block.y;
    bool ok = false;
    t_int iterations = 0;
    result.x.col(l) = nnls_projected_gradient(*channel.op, y, options, &ok, &iterations);
    converged[l] = ok;
    result.iterations[l] = iterations;
    ComplexVector const model = channel.op->forward(result.x.col(l));
    for(auto const &block : channel.blocks)
      result.epsilon[l].push_back((block.y - model.segment(block.begin, block.size())).norm());
  }
  for(t_int l = 0; l < channels; ++l)
    result.converged[l] = converged[l] != 0;
  return result;
}

} // namespace hypersara
