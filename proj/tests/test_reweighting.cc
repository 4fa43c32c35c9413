#include "doctest.h"

#include "hypersara/benchmarks.h"
#include "hypersara/experiment.h"
#include "hypersara/metrics.h"
#include "hypersara/proximal.h"
#include "hypersara/reweighting.h"
#include "support.h"

using namespace testing;

TEST_CASE("nuclear weights") {
  // diag(4, 1) has singular values 4 and 1.
  Cube x = Cube::Zero(5, 2);
  x(0, 0) = 4;
  x(3, 1) = 1;
  auto const w = update_nuclear_weights(x, 1);
  CHECK(w[0] == doctest::Approx(0.2));
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w[0] <= w[1]);

  // Rank one: the trailing weights are exactly 1.
  Cube const rank_one = random_vector(20, 1).cwiseAbs() * RealVector::LinSpaced(4, 1, 2).transpose();
  auto const w1 = update_nuclear_weights(rank_one, 0.3);
  CHECK(w1[0] < 1);
  for(int j = 1; j < 4; ++j)
    CHECK(w1[j] == doctest::Approx(1).epsilon(1e-6));

  CHECK_THROWS_AS(update_nuclear_weights(x, 0), InvalidInput);
}

TEST_CASE("l21 weights") {
  RealMatrix z(3, 2);
  z << 3, 4, 0, 0, 1, 0;
  auto const w = update_l21_weights(z, 5);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == 1);
  CHECK(w[2] == doctest::Approx(5.0 / 6));
  CHECK_THROWS_AS(update_l21_weights(z, -1), InvalidInput);

  SaraDictionary const dict({16, 16}, 2);
  Cube const x = random_matrix(256, 3, 4);
  CHECK((update_l21_weights(x, dict, 0.2).array() == update_l21_weights(dict.analysis(x), 0.2).array()).all());
}

TEST_CASE("small scales approach the l0 counting penalty") {
  // gamma -> 0: sum_j w_j sigma_j / gamma -> rank; same for the row norms.
  Cube const x = random_matrix(30, 2, 5) * random_matrix(2, 6, 6);
  auto const gamma = 1e-6;
  auto const sigma = singular_values(x);
  auto const w = update_nuclear_weights(x, gamma);
  t_real penalty = 0;
  for(int j = 0; j < 2; ++j)
    penalty += w[j] * sigma[j] / gamma;
  CHECK(penalty == doctest::Approx(2).epsilon(1e-4));
  CHECK(effective_rank(x) == 2);

  RealMatrix z = RealMatrix::Zero(10, 3);
  z.row(2) = random_vector(3, 7);
  z.row(7) = random_vector(3, 8);
  auto const wr = update_l21_weights(z, gamma);
  CHECK(wr.dot(z.rowwise().norm()) / gamma == doctest::Approx(2).epsilon(1e-4));
  CHECK(row_support(z, 1e-12) == 2);
}

TEST_CASE("effective rank and noise floors") {
  CHECK(effective_rank(Cube::Zero(10, 3)) == 0);
  Cube x = Cube::Zero(10, 3);
  x(0, 0) = 1;
  x(1, 1) = 2e-3;
  x(2, 2) = 5e-4;
  CHECK(effective_rank(x) == 2);
  CHECK(effective_rank(x, 1e-4) == 3);

  auto const floors = noise_floors(0.1, 100, 4, 9);
  CHECK(floors.gamma == doctest::Approx(1.2));
  CHECK(floors.gamma_bar == doctest::Approx(0.1 * 2.0 / 3));
  CHECK(image_noise_level(2, 100, 4, 25) == doctest::Approx(1));
  CHECK_THROWS_AS(image_noise_level(1, 10, 0, 10), InvalidInput);

  // The floors sit at the singular-value and row-norm scale of pure noise.
  Cube const noise = 0.1 * random_matrix(1024, 4, 9);
  auto const f = noise_floors(0.1, 1024, 4, 9);
  CHECK(singular_values(noise)[0] == doctest::Approx(f.gamma).epsilon(0.1));
  SaraDictionary const dict({32, 32});
  RealVector const rows = dict.analysis(noise).rowwise().norm();
  CHECK(std::sqrt(rows.squaredNorm() / rows.size()) == doctest::Approx(f.gamma_bar).epsilon(0.05));
}

TEST_CASE("a single reweight is the unit-weight solve") {
  ImageDims const dims{32, 32};
  SaraDictionary const dict(dims);
  Cube const truth = point_source_cube(dims, 4, 2, 3);
  auto const data = channel_data(truth, dims, 512, 4, 1e-2);
  auto const norms = compute_operator_norms(data, dict);
  HyperSaraConfig config;
  config.reweights = 1;
  config.ppd.max_iter = 500;
  auto const result = solve_hypersara(data, dict, norms, config, &truth);
  Cube const lrjas = solve_lrjas(data, dict, norms, config);
  CHECK(relative_error(result.x, lrjas) < 1e-8);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].gamma == 0);
  CHECK(result.records[0].asnr == doctest::Approx(asnr(truth, result.x)));
  CHECK(result.estimates.size() == 1);

  config.reweights = 0;
  CHECK_THROWS_AS(solve_hypersara(data, dict, norms, config), InvalidInput);
  config.reweights = 2;
  config.decay = 1;
  CHECK_THROWS_AS(solve_hypersara(data, dict, norms, config), InvalidInput);
}

namespace {

HyperSaraResult noiseless_reweights(SaraDictionary const &dict, std::uint64_t seed) {
  auto const dims = dict.dims();
  Cube const truth = point_source_cube(dims, 4, 2, seed);
  auto const data = channel_data(truth, dims, 512, seed + 100, 1e-4);
  HyperSaraConfig config;
  config.reweights = 5;
  return solve_hypersara(data, dict, compute_operator_norms(data, dict), config, &truth);
}

} // namespace

// Point sources are exactly row-sparse in the Dirac basis with nonzero rows far above the
// support threshold, so the support count is well defined.
TEST_CASE("reweighting never grows rank or row support on exactly sparse low-rank cubes") {
  SaraDictionary const dirac({32, 32}, 4, {0});
  for(std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    auto const result = noiseless_reweights(dirac, seed);
    REQUIRE(result.records.size() == 5);
    for(std::size_t k = 1; k < result.records.size(); ++k) {
      auto const &prev = result.records[k - 1];
      auto const &cur = result.records[k];
      CHECK(cur.effective_rank <= prev.effective_rank);
      CHECK(cur.row_support <= prev.row_support);
      CHECK(cur.gamma > 0);
      if(k > 1)
        CHECK(cur.gamma == doctest::Approx(0.5 * prev.gamma));
    }
    CHECK(result.records.back().effective_rank <= 2);
  }
}

TEST_CASE("reweighting with the full dictionary keeps the true rank") {
  SaraDictionary const sara({32, 32});
  for(std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    auto const result = noiseless_reweights(sara, seed);
    for(std::size_t k = 1; k < result.records.size(); ++k)
      CHECK(result.records[k].effective_rank <= result.records[k - 1].effective_rank);
    CHECK(result.records.back().effective_rank <= 2);
    CHECK(result.records.back().asnr > 60);
  }
}

TEST_CASE("aSNR does not drop across reweights on the regression fixture") {
  SimulationConfig fixture;
  fixture.dims = {64, 64};
  fixture.channels = 8;
  fixture.sources = 3;
  fixture.sampling_rate = 0.3;
  fixture.insnr_db = 40;
  fixture.seed = 1;
  auto const sim = simulate(fixture);
  SaraDictionary const dict(fixture.dims);
  auto const norms = compute_operator_norms(sim.data, dict);
  HyperSaraConfig config;
  config.floors = data_noise_floors(sim.data, dict, sim.noisy.sigma, fixture.channels);
  auto const result = solve_hypersara(sim.data, dict, norms, config, &sim.truth);
  REQUIRE(result.records.size() == 5);
  for(std::size_t k = 1; k < result.records.size(); ++k)
    CHECK(result.records[k].asnr >= result.records[k - 1].asnr - 0.1);
}
