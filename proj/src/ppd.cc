#include "hypersara/ppd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "hypersara/kernels.h"
#include "hypersara/power_method.h"
#include "hypersara/proximal.h"

namespace hypersara {

t_real StepSizes::condition(PriorSelection priors) const {
  t_real sum = kappa3 * norms.phi * norms.phi;
  if(priors.low_rank)
    sum += kappa1;
  if(priors.joint_sparsity)
    sum += kappa2 * norms.psi * norms.psi;
  return tau * sum;
}

StepSizes default_step_sizes(OperatorNorms norms, PriorSelection priors) {
  if(!(norms.psi > 0) || !(norms.phi > 0))
    throw InvalidInput("step sizes: operator norms must be strictly positive");
  StepSizes steps;
  steps.norms = norms;
  steps.kappa1 = 1;
  steps.kappa2 = 1 / (norms.psi * norms.psi);
  steps.kappa3 = 1 / (norms.phi * norms.phi);
  steps.tau = 0.99 / static_cast<t_real>(1 + priors.count());
  return steps;
}

StepSizes balanced_step_sizes(OperatorNorms norms, PriorSelection priors, t_real balance) {
  if(!(balance > 0) || !std::isfinite(balance))
    throw InvalidInput("step sizes: balance must be finite and strictly positive");
  auto steps = default_step_sizes(norms, priors);
  steps.kappa1 *= balance;
  steps.kappa2 *= balance;
  steps.kappa3 *= balance;
  steps.tau /= balance;
  return steps;
}

t_real dirty_peak(WidebandData const &data) {
  t_real peak = 0;
  for(auto const &channel : data) {
    auto const &op = *channel.op;
    ComplexVector y = ComplexVector::Zero(op.rows());
    for(auto const &block : channel.blocks)
      y.segment(block.begin, block.size()) = block.y;
    if(y.squaredNorm() == 0)
      continue;
    auto const eta = psf_and_eta(op).eta;
    peak = std::max(peak, eta * op.adjoint(y).maxCoeff());
  }
  return peak;
}

StepSizes auto_step_sizes(WidebandData const &data, OperatorNorms norms, PriorSelection priors,
                          t_real target) {
  auto const peak = dirty_peak(data);
  if(!(peak > 0) || !(target > 0))
    return default_step_sizes(norms, priors);
  return balanced_step_sizes(norms, priors, target / peak);
}

StepSizes make_step_sizes(t_real tau, t_real kappa1, t_real kappa2, t_real kappa3,
                          OperatorNorms norms, PriorSelection priors) {
  if(!(tau > 0 && kappa1 > 0 && kappa2 > 0 && kappa3 > 0))
    throw InvalidInput("step sizes must be strictly positive");
  StepSizes steps{tau, kappa1, kappa2, kappa3, norms};
  auto const product = steps.condition(priors);
  if(!(product < 1))
    throw InvalidInput("step sizes violate tau (kappa1 + kappa2 ||Psi||^2 + kappa3 ||U^1/2 Phi||^2) "
                       "< 1: product is " + std::to_string(product));
  return steps;
}

t_real preconditioned_norm(ChannelData const &channel, t_real tol, t_int max_iter) {
  auto const &op = *channel.op;
  RealVector u(op.rows());
  for(auto const &block : channel.blocks)
    u.segment(block.begin, block.size()) = block.preconditioner;
  auto ws = op.workspace();
  ComplexVector vis(op.rows());
  auto normal = [&](RealVector const &x) {
    RealVector out(x.size());
    op.forward(x, vis, ws);
    vis.array() *= u.array().cast<t_complex>();
    op.adjoint(vis, out, ws);
    return out;
  };
  return spectral_norm(normal, op.dims().size(), tol, max_iter).norm;
}

OperatorNorms compute_operator_norms(WidebandData const &data, SaraDictionary const &dict,
                                     t_real tol, t_int max_iter) {
  OperatorNorms norms;
  auto normal = [&](RealVector const &x) {
    Cube column = x;
    return RealVector(dict.synthesis_adjoint(dict.analysis(column)));
  };
  norms.psi = spectral_norm(normal, dict.dims().size(), tol, max_iter).norm;
  norms.phi = 0;
  for(auto const &channel : data)
    norms.phi = std::max(norms.phi, preconditioned_norm(channel, tol, max_iter));
  return norms;
}

Weights Weights::ones(t_int pixels, t_int channels, t_int coefficient_rows) {
  return {RealVector::Ones(std::min(pixels, channels)), RealVector::Ones(coefficient_rows)};
}

SolverState SolverState::zeros(WidebandData const &data, SaraDictionary const &dict) {
  auto const n = dict.dims().size();
  auto const l = static_cast<t_int>(data.size());
  SolverState state;
  state.x = Cube::Zero(n, l);
  state.x_tilde = Cube::Zero(n, l);
  state.p = Cube::Zero(n, l);
  state.a = RealMatrix::Zero(dict.coefficient_rows(), l);
  for(auto const &channel : data) {
    std::vector<ComplexVector> duals;
    std::vector<t_real> multipliers;
    for(auto const &block : channel.blocks) {
      duals.push_back(ComplexVector::Zero(block.size()));
      multipliers.push_back(0);
    }
    state.v.push_back(std::move(duals));
    state.multipliers.push_back(std::move(multipliers));
  }
  state.bounds = initial_bounds(data);
  return state;
}

PpdSolver::PpdSolver(WidebandData const &data, SaraDictionary const &dict, StepSizes steps,
                     PpdConfig config)
    : data_(data), dict_(dict), steps_(steps), config_(config) {
  if(data_.empty())
    throw InvalidInput("PPD: no channels");
  if(!(config_.mu > 0))
    throw InvalidInput("PPD: mu must be strictly positive");
  if(!(steps_.condition(config_.priors) < 1))
    throw InvalidInput("PPD: step sizes violate the convergence condition");
  if(config_.observer)
    on_iteration(config_.observer, config_.observe_every);
  for(auto const &channel : data_) {
    if(!channel.op || channel.op->dims() != dict_.dims())
      throw InvalidInput("PPD: channel operator does not match the dictionary image size");
    workspaces_.push_back(channel.op->workspace());
    rho_.emplace_back(channel.blocks.size(), 0.0);
  }
}

void PpdSolver::on_iteration(IterationObserver callback, t_int every) {
  observer_ = std::move(callback);
  observe_every_ = std::max<t_int>(every, 1);
}

void PpdSolver::check_state(SolverState const &state) const {
  auto const n = dict_.dims().size();
  auto const l = static_cast<t_int>(data_.size());
  if(state.x.rows() != n || state.x.cols() != l || state.x_tilde.rows() != n ||
     state.x_tilde.cols() != l || state.p.rows() != n || state.p.cols() != l ||
     state.a.rows() != dict_.coefficient_rows() || state.a.cols() != l ||
     static_cast<t_int>(state.v.size()) != l || static_cast<t_int>(state.bounds.size()) != l)
    throw InvalidInput("PPD: solver state does not match the problem");
}

void PpdSolver::iterate(SolverState &state, Weights const &weights,
                        std::vector<BoundUpdate> *updates) {
  check_state(state);
  auto const channels = static_cast<t_int>(data_.size());
  auto const t = state.iteration + 1;
  auto const beta_prev = state.beta;

  // Low rankness: P = (I - prox_{w/kappa1})(P + X~)
  if(config_.priors.low_rank) {
    Cube z = state.p + state.x_tilde;
    state.p = dual_from_prox(prox_weighted_nuclear(z, weights.nuclear, 1 / steps_.kappa1), z);
  }

  // Joint sparsity: A_d = (I - prox_{w-bar mu/kappa2})(A_d + Psi_d^T X~), all d at once.
  if(config_.priors.joint_sparsity) {
    kernels::omp::sara_analysis(dict_, state.x_tilde, coefficients_);
    coefficients_ += state.a;
    state.a = coefficients_;
    RealVector thresholds = weights.l21 * (config_.mu / steps_.kappa2);
    kernels::omp::row_soft_threshold(coefficients_, thresholds);
    state.a -= coefficients_;
  }

  // Data fidelity, per channel and block.
  fidelity_.resize(dict_.dims().size(), channels);
  std::vector<std::vector<BoundUpdate>> channel_updates(channels);
#pragma omp parallel for schedule(dynamic)
  for(t_int l = 0; l < channels; ++l) {
    auto const &channel = data_[l];
    auto const &op = *channel.op;
    auto &ws = workspaces_[l];
    op.fourier_grid(state.x_tilde.col(l), ws);
    ComplexVector duals(op.rows());
    for(std::size_t b = 0; b < channel.blocks.size(); ++b) {
      auto const &block = channel.blocks[b];
      auto &bound = state.bounds[l][b];
      ComplexVector phi_x(block.size());
      op.degrid_rows(ws, block.begin, block.end, phi_x);
      auto const rho = (block.y - phi_x).norm();
      rho_[l][b] = rho;

      auto const sqrt_u = block.preconditioner.cwiseSqrt().cast<t_complex>().eval();
      ComplexVector v_tilde = state.v[l][b] + block.preconditioner.cast<t_complex>().cwiseProduct(phi_x);
      ComplexVector z = v_tilde.cwiseQuotient(sqrt_u);
      auto projection = project_ellipsoid(z, block.y, bound.epsilon, block.preconditioner,
                                          config_.ellipsoid_max_iter, config_.ellipsoid_tol,
                                          state.multipliers[l][b]);
      if(std::isfinite(projection.multiplier))
        state.multipliers[l][b] = projection.multiplier;
      state.v[l][b] = sqrt_u.cwiseProduct(z - projection.point);

      if(config_.adaptive.enabled) {
        auto const old = bound.epsilon;
        if(maybe_update_epsilon(bound, config_.adaptive, t, beta_prev, rho))
          channel_updates[l].push_back({t, l, static_cast<t_int>(b), rho, old, bound.epsilon});
      } else {
        bound.rho = rho;
      }
      duals.segment(block.begin, block.size()) = state.v[l][b];
    }
    RealVector back(op.dims().size());
    op.adjoint(duals, back, ws);
    fidelity_.col(l) = back;
  }
  if(updates)
    for(auto const &list : channel_updates)
      updates->insert(updates->end(), list.begin(), list.end());

  // Primal step: G = kappa1 P + kappa2 sum_d Psi_d A_d + kappa3 sum_(l,b) Phi^T v
  gradient_.setZero(state.x.rows(), channels);
  if(config_.priors.low_rank)
    gradient_ = steps_.kappa1 * state.p;
  if(config_.priors.joint_sparsity) {
    Cube synthesis;
    kernels::omp::sara_synthesis(dict_, state.a, synthesis);
    gradient_ += steps_.kappa2 * synthesis;
  }
  gradient_ += steps_.kappa3 * fidelity_;
  kernels::omp::projected_step(state.x, gradient_, steps_.tau, x_next_);

  if(!x_next_.allFinite()) {
    std::ostringstream dump;
    dump << "PPD: non-finite primal iterate at t = " << t << " (beta_prev = " << beta_prev
         << ", |X| = " << state.x.norm() << ", |P| = " << state.p.norm()
         << ", |A| = " << state.a.norm() << ", |G| = " << gradient_.norm() << ")";
    throw NumericalError(dump.str());
  }

  state.x_tilde = 2 * x_next_ - state.x;
  auto const change = (x_next_ - state.x).norm();
  auto const size = x_next_.norm();
  if(size > 0)
    state.beta = change / size;
  else
    state.beta = change == 0 ? 0 : std::numeric_limits<t_real>::infinity();
  std::swap(state.x, x_next_);
  state.iteration = t;

  if(observer_ && t % observe_every_ == 0) {
    IterationRecord record;
    record.iteration = t;
    record.beta = state.beta;
    record.nuclear = weighted_nuclear_norm(state.x, weights.nuclear);
    record.l21 = weighted_l21_norm(dict_.analysis(state.x), weights.l21);
    record.max_feasibility_gap = -std::numeric_limits<t_real>::infinity();
    for(t_int l = 0; l < channels; ++l)
      for(std::size_t b = 0; b < rho_[l].size(); ++b) {
        auto const eps = state.bounds[l][b].epsilon;
        auto const gap = eps > 0 ? (rho_[l][b] - eps) / eps : rho_[l][b];
        record.max_feasibility_gap = std::max(record.max_feasibility_gap, gap);
      }
    observer_(record);
  }
}

std::vector<std::vector<t_real>> PpdSolver::residual_norms(Cube const &x) const {
  auto const channels = static_cast<t_int>(data_.size());
  std::vector<std::vector<t_real>> norms(channels);
#pragma omp parallel for schedule(dynamic)
  for(t_int l = 0; l < channels; ++l) {
    auto const &channel = data_[l];
    auto ws = channel.op->workspace();
    channel.op->fourier_grid(x.col(l), ws);
    for(auto const &block : channel.blocks) {
      ComplexVector phi_x(block.size());
      channel.op->degrid_rows(ws, block.begin, block.end, phi_x);
      norms[l].push_back((block.y - phi_x).norm());
    }
  }
  return norms;
}

InnerReport PpdSolver::solve(SolverState &state, Weights const &weights) {
  InnerReport report;
  auto feasible = [&](std::vector<std::vector<t_real>> const &residuals) {
    report.residual_norms = residuals;
    report.feasibility_gaps.clear();
    bool ok = true;
    for(std::size_t l = 0; l < residuals.size(); ++l) {
      std::vector<t_real> gaps;
      for(std::size_t b = 0; b < residuals[l].size(); ++b) {
        auto const eps = state.bounds[l][b].epsilon;
        auto const gap = eps > 0 ? std::max(residuals[l][b] / eps - 1, 0.0) : residuals[l][b];
        gaps.push_back(gap);
        if(residuals[l][b] > eps * (1 + config_.feas_tol))
          ok = false;
      }
      report.feasibility_gaps.push_back(std::move(gaps));
    }
    return ok;
  };

  for(t_int it = 0; it < config_.max_iter; ++it) {
    iterate(state, weights, &report.bound_updates);
    report.iterations = it + 1;
    report.beta = state.beta;
    if(state.beta < config_.rel_tol && feasible(residual_norms(state.x))) {
      report.converged = true;
      return report;
    }
  }
  feasible(residual_norms(state.x));
  return report;
}

void write_progress_header(std::ostream &os) {
  os << "t,beta,nuclear,l21,max_feasibility_gap\n";
}

void write_progress_row(std::ostream &os, IterationRecord const &record) {
  os << record.iteration << ',' << record.beta << ',' << record.nuclear << ',' << record.l21 << ','
     << record.max_feasibility_gap << '\n';
}

} // namespace hypersara
