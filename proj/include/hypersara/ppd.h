#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "hypersara/adaptive_bounds.h"
#include "hypersara/fourier.h"
#include "hypersara/sara.h"
#include "hypersara/types.h"

namespace hypersara {

//! Operator norms the step sizes depend on.
struct OperatorNorms {
  t_real psi = 1;  //!< ||Psi^T||_S
  t_real phi = 1;  //!< ||U^{1/2} Phi||_S
};

//! Which dual paths are active: both for HyperSARA/LRJAS, one for LR or JAS.
struct PriorSelection {
  bool low_rank = true;
  bool joint_sparsity = true;
  [[nodiscard]] int count() const { return int(low_rank) + int(joint_sparsity); }
};

struct StepSizes {
  t_real tau = 0;
  t_real kappa1 = 0;
  t_real kappa2 = 0;
  t_real kappa3 = 0;
  OperatorNorms norms;

  //! tau (kappa1 + kappa2 ||Psi^T||^2 + kappa3 ||U^{1/2} Phi||^2), restricted to active paths.
  [[nodiscard]] t_real condition(PriorSelection priors = {}) const;
};

/// kappa1 = 1, kappa2 = 1/||Psi^T||^2, kappa3 = 1/||U^{1/2} Phi||^2 and tau = 0.99 / (number of
/// active terms), so the convergence product is exactly 0.99.
StepSizes default_step_sizes(OperatorNorms norms, PriorSelection priors = {});

/// default_step_sizes with every kappa multiplied and tau divided by `balance`; the convergence
/// product is unchanged. Equivalent to running the defaults on data scaled by `balance`.
StepSizes balanced_step_sizes(OperatorNorms norms, PriorSelection priors, t_real balance);

//! Largest value of the normalized dirty images eta_l Phi_l^T y_l.
t_real dirty_peak(WidebandData const &data);

inline constexpr t_real kBalanceTarget = 1000;

/// Balanced steps with balance = target / dirty_peak(data), so the iterates are equivariant to a
/// rescaling of the data. Zero data keeps the defaults.
StepSizes auto_step_sizes(WidebandData const &data, OperatorNorms norms, PriorSelection priors,
                          t_real target = kBalanceTarget);

//! Validates a manual choice; throws InvalidInput unless the convergence product is < 1.
StepSizes make_step_sizes(t_real tau, t_real kappa1, t_real kappa2, t_real kappa3,
                          OperatorNorms norms, PriorSelection priors = {});

//! ||Psi^T||_S and max_l ||U_l^{1/2} Phi_l||_S by power iteration.
OperatorNorms compute_operator_norms(WidebandData const &data, SaraDictionary const &dict,
                                     t_real tol = 1e-6, t_int max_iter = 500);

//! Norm of the preconditioned operator of one channel.
t_real preconditioned_norm(ChannelData const &channel, t_real tol = 1e-6, t_int max_iter = 500);

struct Weights {
  RealVector nuclear;  //!< J = min(N, L), aligned with decreasing singular values
  RealVector l21;      //!< one per analysis row, D N
  static Weights ones(t_int pixels, t_int channels, t_int coefficient_rows);
};

struct IterationRecord {
  t_int iteration = 0;
  t_real beta = 0;
  t_real nuclear = 0;       //!< ||X||_{omega,*}
  t_real l21 = 0;           //!< ||Psi^T X||_{omega-bar,2,1}
  t_real max_feasibility_gap = 0;  //!< max_(l,b) (rho - epsilon) / epsilon
};

using IterationObserver = std::function<void(IterationRecord const &)>;

struct PpdConfig {
  t_real mu = 1;
  PriorSelection priors;
  t_real rel_tol = 5e-4;
  t_real feas_tol = 1e-3;
  t_int max_iter = 5000;
  t_int ellipsoid_max_iter = 50;
  t_real ellipsoid_tol = 1e-8;
  AdaptiveBoundParams adaptive;
  IterationObserver observer;  //!< installed by PpdSolver, see on_iteration
  t_int observe_every = 1;
};

struct SolverState {
  Cube x;
  Cube x_tilde;
  Cube p;                                   //!< nuclear dual, N x L
  RealMatrix a;                             //!< stacked A_d, (D N) x L
  std::vector<std::vector<ComplexVector>> v; //!< fidelity duals per (l, b)
  std::vector<std::vector<t_real>> multipliers; //!< ellipsoid multipliers, warm starts
  BoundTable bounds;
  t_int iteration = 0;  //!< global iteration counter t, kept across warm starts
  t_real beta = std::numeric_limits<t_real>::infinity();

  //! X = X~ = 0, every dual zero, bounds from the data blocks.
  static SolverState zeros(WidebandData const &data, SaraDictionary const &dict);
};


struct InnerReport {
  t_int iterations = 0;
  t_real beta = 0;
  bool converged = false;
  std::vector<std::vector<t_real>> residual_norms;   //!< ||y - Phi X|| per block at exit
  std::vector<std::vector<t_real>> feasibility_gaps; //!< max(residual / epsilon - 1, 0)
  std::vector<BoundUpdate> bound_updates;
};

/// Preconditioned primal-dual iterations for
///   min ||X||_{w,*} + mu ||Psi^T X||_{w-bar,2,1}  s.t.  ||y_l^b - Phi_l^b x_l|| <= eps_l^b, X >= 0
/// Dual updates for distinct bases and blocks are independent; the primal step waits for all of
/// them and accumulates in fixed (l, b, d) order, so results do not depend on the thread count.
class PpdSolver {
public:
  PpdSolver(WidebandData const &data, SaraDictionary const &dict, StepSizes steps,
            PpdConfig config);

  //! One pass of the dual updates, the projected primal step and over-relaxation.
  void iterate(SolverState &state, Weights const &weights,
               std::vector<BoundUpdate> *updates = nullptr);

  //! Iterates until beta < rel_tol with every block feasible within feas_tol, or max_iter.
  InnerReport solve(SolverState &state, Weights const &weights);

  //! Per-block ||y - Phi X||.
  [[nodiscard]] std::vector<std::vector<t_real>> residual_norms(Cube const &x) const;

  //! Optional per-iteration observer (progress CSV).
  void on_iteration(IterationObserver callback, t_int every = 1);

  [[nodiscard]] StepSizes const &steps() const { return steps_; }
  [[nodiscard]] PpdConfig const &config() const { return config_; }
  [[nodiscard]] std::vector<std::vector<t_real>> const &last_rho() const { return rho_; }

private:
  void check_state(SolverState const &state) const;

  WidebandData const &data_;
  SaraDictionary const &dict_;
  StepSizes steps_;
  PpdConfig config_;
  std::vector<FourierWorkspace> workspaces_;
  std::vector<std::vector<t_real>> rho_;
  RealMatrix coefficients_;
  Cube fidelity_;
  Cube gradient_;
  Cube x_next_;
  IterationObserver observer_;
  t_int observe_every_ = 1;
};

//! Progress CSV: header plus one row per record.
void write_progress_header(std::ostream &os);
void write_progress_row(std::ostream &os, IterationRecord const &record);

} // namespace hypersara
