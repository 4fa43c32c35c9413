#include "doctest.h"

#include <map>

#include "hypersara/adaptive_bounds.h"
#include "hypersara/ppd.h"
#include "hypersara/sara.h"
#include "support.h"

using namespace testing;

namespace {

AdaptiveBoundParams open_guards() {
  AdaptiveBoundParams p;
  p.enabled = true;
  p.min_gap = 0;
  return p;
}

/// Lawson-Hanson active set for min ||a x - b|| s.t. x >= 0.
RealVector lawson_hanson(RealMatrix const &a, RealVector const &b) {
  auto const n = a.cols();
  RealVector x = RealVector::Zero(n);
  std::vector<bool> passive(n, false);
  auto solve_passive = [&] {
    std::vector<t_int> idx;
    for(t_int j = 0; j < n; ++j)
      if(passive[j])
        idx.push_back(j);
    RealMatrix sub(a.rows(), idx.size());
    for(std::size_t k = 0; k < idx.size(); ++k)
      sub.col(k) = a.col(idx[k]);
    RealVector const zs = sub.colPivHouseholderQr().solve(b);
    RealVector z = RealVector::Zero(n);
    for(std::size_t k = 0; k < idx.size(); ++k)
      z[idx[k]] = zs[k];
    return z;
  };
  for(int outer = 0; outer < 100; ++outer) {
    RealVector const w = a.transpose() * (b - a * x);
    t_int best = -1;
    for(t_int j = 0; j < n; ++j)
      if(!passive[j] && w[j] > 1e-14 && (best < 0 || w[j] > w[best]))
        best = j;
    if(best < 0)
      break;
    passive[best] = true;
    for(;;) {
      RealVector const z = solve_passive();
      bool feasible = true;
      for(t_int j = 0; j < n; ++j)
        if(passive[j] && z[j] <= 0)
          feasible = false;
      if(feasible) {
        x = z;
        break;
      }
      t_real alpha = 1;
      for(t_int j = 0; j < n; ++j)
        if(passive[j] && z[j] <= 0)
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for(t_int j = 0; j < n; ++j)
        if(passive[j] && x[j] <= 1e-14) {
          passive[j] = false;
          x[j] = 0;
        }
    }
  }
  return x;
}

} // namespace

TEST_CASE("bound update guards") {
  auto const p = open_guards();
  SUBCASE("convex combination when every guard passes") {
    BlockBound b{10, 0, 0};
    CHECK(maybe_update_epsilon(b, p, 5, 1e-4, 20));
    CHECK(b.epsilon == 15);
    CHECK(b.last_update == 5);
    CHECK(b.rho == 20);
  }
  SUBCASE("beta at or above lambda1 blocks the update") {
    BlockBound b{10, 0, 0};
    CHECK_FALSE(maybe_update_epsilon(b, p, 5, 1e-3, 20));
    CHECK_FALSE(maybe_update_epsilon(b, p, 5, 0.5, 20));
    CHECK(b.epsilon == 10);
    CHECK(b.last_update == 0);
    CHECK(b.rho == 20);
  }
  SUBCASE("relative gap within lambda2 keeps the bound") {
    BlockBound b{10, 0, 0};
    CHECK_FALSE(maybe_update_epsilon(b, p, 5, 0, 10.05));
    CHECK(b.epsilon == 10);
  }
  SUBCASE("infinite lambda2 disables updates") {
    auto q = p;
    q.lambda2 = std::numeric_limits<t_real>::infinity();
    BlockBound b{10, 0, 0};
    CHECK_FALSE(maybe_update_epsilon(b, q, 5, 0, 1000));
    BlockBound zero{0, 0, 0};
    CHECK_FALSE(maybe_update_epsilon(zero, q, 5, 0, 1000));
  }
  SUBCASE("zero bound always counts as saturated") {
    BlockBound b{0, 0, 0};
    CHECK(maybe_update_epsilon(b, p, 1, 0, 4));
    CHECK(b.epsilon == 2);
  }
  SUBCASE("minimum gap between updates") {
    auto q = p;
    q.min_gap = 100;
    BlockBound b{10, 0, 0};
    CHECK_FALSE(maybe_update_epsilon(b, q, 100, 0, 20));
    CHECK(maybe_update_epsilon(b, q, 101, 0, 20));
    CHECK_FALSE(maybe_update_epsilon(b, q, 201, 0, 20));
    CHECK(maybe_update_epsilon(b, q, 202, 0, 20));
    CHECK(b.last_update == 202);
  }
}

TEST_CASE("constant residual: bounds converge geometrically") {
  auto const p = open_guards();
  BlockBound b{10, 0, 0};
  t_int updates = 0;
  for(t_int t = 1; t <= 50; ++t) {
    auto const gap = 20 - b.epsilon;
    if(maybe_update_epsilon(b, p, t, 0, 20)) {
      ++updates;
      CHECK((20 - b.epsilon) == doctest::Approx(0.5 * gap));
    }
  }
  // Gaps 10, 5, ..., 0.3125 are above 1 % of the bound; 0.15625 / 19.84 is not.
  CHECK(updates == 6);
  CHECK(std::abs(20 - b.epsilon) / b.epsilon <= p.lambda2);
}

TEST_CASE("updated bounds lie strictly between the old bound and the residual") {
  auto g = rng(17);
  std::uniform_real_distribution<t_real> u(0.01, 10);
  std::uniform_real_distribution<t_real> lambda(0.05, 0.95);
  for(int i = 0; i < 1000; ++i) {
    auto p = open_guards();
    p.lambda3 = lambda(g);
    BlockBound b{u(g), 0, 0};
    auto const old = b.epsilon;
    auto const rho = u(g);
    if(maybe_update_epsilon(b, p, 1, 0, rho)) {
      CHECK(b.epsilon > std::min(old, rho));
      CHECK(b.epsilon < std::max(old, rho));
    } else {
      CHECK(std::abs(rho - old) / old <= p.lambda2);
    }
  }
}

TEST_CASE("initial bounds copy the block epsilons") {
  ImageDims const dims{16, 16};
  auto const data = channel_data(random_matrix(256, 2, 3).cwiseAbs(), dims, 100, 4, 0.1, 3);
  auto const table = initial_bounds(data);
  REQUIRE(table.size() == 2);
  for(std::size_t l = 0; l < 2; ++l) {
    REQUIRE(table[l].size() == 3);
    for(std::size_t b = 0; b < 3; ++b) {
      CHECK(table[l][b].epsilon == data[l].blocks[b].epsilon);
      CHECK(table[l][b].last_update == 0);
    }
  }
}

TEST_CASE("NNLS") {
  SUBCASE("zero data") {
    ImageDims const dims{16, 16};
    auto const data = channel_data(Cube::Zero(256, 2), dims, 80, 1, 0);
    auto const r = nnls_epsilon_init(data);
    CHECK(r.x.isZero(0));
    CHECK(r.epsilon[0][0] == 0);
    CHECK(r.epsilon[1][0] == 0);
    CHECK(r.converged[0]);
  }
  SUBCASE("consistent noiseless data are fitted") {
    ImageDims const dims{16, 16};
    Cube const x = point_source_cube(dims, 2, 2, 5);
    auto const data = channel_data(x, dims, 100, 6, 0, 2);
    auto const r = nnls_epsilon_init(data);
    for(std::size_t l = 0; l < 2; ++l) {
      t_real total = 0, norm = 0;
      for(std::size_t b = 0; b < 2; ++b) {
        total += std::pow(r.epsilon[l][b], 2);
        norm += data[l].blocks[b].y.squaredNorm();
      }
      CHECK(std::sqrt(total) <= 1e-3 * std::sqrt(norm));
    }
    CHECK(r.x.minCoeff() >= 0);
  }
  SUBCASE("small dense instance against an active-set oracle") {
    ImageDims const dims{2, 4};
    OperatorParams const params{4, 7};
    for(std::uint64_t seed = 0; seed < 5; ++seed) {
      CAPTURE(seed);
      MeasurementOperator const op(dims, uniform_uv(12, seed), params);
      ComplexVector const y = random_complex(12, seed + 50);
      auto const dense = dense_operator(op);
      RealMatrix a(24, 8);
      a << dense.real(), dense.imag();
      RealVector b(24);
      b << y.real(), y.imag();
      RealVector const oracle = lawson_hanson(a, b);
      auto const oracle_residual = (a * oracle - b).norm();

      bool converged = false;
      RealVector const x = nnls_projected_gradient(op, y, {1e-12, 100000}, &converged);
      CHECK(converged);
      CHECK(x.minCoeff() >= 0);
      auto const residual = (y - op.forward(x)).norm();
      CHECK(residual == doctest::Approx(oracle_residual).epsilon(1e-6));
      CHECK(residual >= oracle_residual * (1 - 1e-12));
    }
  }
  SUBCASE("iteration cap reports non-convergence") {
    ImageDims const dims{16, 16};
    auto const data = channel_data(point_source_cube(dims, 1, 1, 2), dims, 100, 3, 0);
    ComplexVector const y = data[0].blocks[0].y + 0.1 * random_complex(100, 4);
    bool converged = true;
    t_int iterations = 0;
    nnls_projected_gradient(*data[0].op, y, {1e-16, 3}, &converged, &iterations);
    CHECK_FALSE(converged);
    CHECK(iterations == 3);
  }
}

TEST_CASE("adaptive solve keeps the guard invariants") {
  SimulationConfig config;
  config.dims = {32, 32};
  config.channels = 3;
  config.sources = 2;
  config.sampling_rate = 0.5;
  config.blocks = 2;
  config.seed = 8;
  auto sim = simulate(config);
  auto const truth_bounds = true_bounds(sim);
  for(std::size_t l = 0; l < sim.data.size(); ++l)
    for(auto &block : sim.data[l].blocks)
      block.epsilon *= 0.5;
  SaraDictionary const dict(config.dims);
  PpdConfig ppd;
  ppd.adaptive.enabled = true;
  auto const steps = auto_step_sizes(sim.data, compute_operator_norms(sim.data, dict), {});
  PpdSolver solver(sim.data, dict, steps, ppd);
  auto state = SolverState::zeros(sim.data, dict);
  auto const report = solver.solve(state, Weights::ones(1024, 3, dict.coefficient_rows()));
  REQUIRE_FALSE(report.bound_updates.empty());
  std::map<std::pair<t_int, t_int>, t_int> last;
  for(auto const &u : report.bound_updates) {
    CHECK(u.epsilon_new > std::min(u.epsilon_old, u.rho));
    CHECK(u.epsilon_new < std::max(u.epsilon_old, u.rho));
    auto const key = std::make_pair(u.channel, u.block);
    if(last.count(key))
      CHECK(u.iteration - last[key] > ppd.adaptive.min_gap);
    last[key] = u.iteration;
  }
  for(std::size_t l = 0; l < sim.data.size(); ++l)
    for(std::size_t b = 0; b < 2; ++b) {
      auto const ratio = state.bounds[l][b].epsilon / truth_bounds[l][b];
      // Bounds only move up from an underestimate.
      CHECK(ratio > 0.5);
      CHECK(ratio < 1.3);
    }
}
