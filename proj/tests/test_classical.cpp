#include <gtest/gtest.h>

#include "biduct/classical.hpp"
#include "biduct/errors.hpp"
#include "oracles.hpp"

using namespace biduct;

namespace {

Budget budget(std::uint64_t seed) {
  Budget b;
  b.seed = seed;
  b.restarts = 8;
  b.max_iters = 500;
  return b;
}

JointInputDistribution uniform_product(int na, int nb) {
  return JointInputDistribution::product_of(std::vector<double>(na, 1.0 / na), std::vector<double>(nb, 1.0 / nb));
}

JointInputDistribution random_joint(int na, int nb, Rng& rng) {
  const auto flat = random_probabilities(static_cast<std::size_t>(na * nb), rng);
  Eigen::MatrixXd p(na, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) p(a, b) = flat[static_cast<std::size_t>(a * nb + b)];
  return JointInputDistribution(p);
}

// max over a 1e-2 grid of min(q h(p), p h(q)), refined at 1e-4 around the best point
double bmc_grid_oracle() {
  auto score = [](double p, double q) {
    const auto [f, b] = oracle::bmc_rates(p, q);
    return std::min(f, b);
  };
  double best = 0, bp = 0, bq = 0;
  for (int i = 0; i <= 100; ++i)
    for (int k = 0; k <= 100; ++k)
      if (score(i * 0.01, k * 0.01) > best) {
        best = score(i * 0.01, k * 0.01);
        bp = i * 0.01;
        bq = k * 0.01;
      }
  const double p0 = bp, q0 = bq;
  for (int i = -200; i <= 200; ++i)
    for (int k = -200; k <= 200; ++k) {
      const double p = p0 + i * 1e-4, q = q0 + k * 1e-4;
      if (p < 0 || p > 1 || q < 0 || q > 1) continue;
      best = std::max(best, score(p, q));
    }
  return best;
}

}  // namespace

TEST(Cmi, Examples) {
  // X independent of Y given Z
  std::vector<double> j(8);
  const double px[2] = {0.3, 0.7}, py[2] = {0.6, 0.4}, pz[2] = {0.5, 0.5};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) j[(x * 2 + y) * 2 + z] = px[x] * py[y] * pz[z];
  EXPECT_NEAR(conditional_mutual_information(j, 2, 2, 2), 0.0, 1e-12);
  // trivial Z, X = Y uniform
  EXPECT_NEAR(conditional_mutual_information(std::vector<double>{0.5, 0, 0, 0.5}, 2, 2, 1), 1.0, 1e-12);
}

TEST(Cmi, MatchesDirectSummation) {
  auto rng = make_rng(81);
  for (int t = 0; t < 20; ++t) {
    const int nx = 2 + t % 2, ny = 2 + (t / 2) % 2, nz = 2 + (t / 4) % 2;
    const auto j = random_probabilities(static_cast<std::size_t>(nx * ny * nz), rng);
    const double v = conditional_mutual_information(j, nx, ny, nz);
    EXPECT_NEAR(v, oracle::cmi_direct(j, nx, ny, nz), 1e-12);
    EXPECT_GE(v, -1e-12);
  }
}

TEST(ClassicalChannel, Validation) {
  EXPECT_THROW(ClassicalTwoWayChannel({1, 1, 1, 2}, {0.5, 0.4}), InvariantError);
  EXPECT_THROW(ClassicalTwoWayChannel({1, 1, 1, 2}, {0.5}), InputError);
  EXPECT_THROW(JointInputDistribution((Eigen::MatrixXd(2, 2) << 0.5, 0, 0, 0.5).finished(), true), InvariantError);
  EXPECT_NO_THROW(uniform_product(2, 3));
}

TEST(ShannonRectangle, Examples) {
  const auto fwd = shannon_rectangle(classical_channels::noiseless_forward(2), uniform_product(2, 2));
  EXPECT_NEAR(fwd.r_fwd, 1.0, 1e-12);
  EXPECT_NEAR(fwd.r_bwd, 0.0, 1e-12);
  const auto bmc = shannon_rectangle(classical_channels::binary_multiplying(), uniform_product(2, 2));
  const auto want = oracle::bmc_rates(0.5, 0.5);
  EXPECT_NEAR(bmc.r_fwd, want.first, 1e-12);
  EXPECT_NEAR(bmc.r_bwd, want.second, 1e-12);
  const std::vector<double> out{0.1, 0.2, 0.3, 0.4};
  const auto ind = shannon_rectangle(classical_channels::input_independent({2, 2, 2, 2}, out), uniform_product(2, 2));
  EXPECT_NEAR(ind.r_fwd, 0.0, 1e-12);
  EXPECT_NEAR(ind.r_bwd, 0.0, 1e-12);
}

TEST(ShannonRectangle, BmcClosedFormOnProductInputs) {
  const auto w = classical_channels::binary_multiplying();
  for (double p : {0.1, 0.4, 0.7})
    for (double q : {0.2, 0.5, 0.9}) {
      const auto r = shannon_rectangle(w, JointInputDistribution::product_of(std::vector<double>{1 - p, p},
                                                                             std::vector<double>{1 - q, q}));
      const auto want = oracle::bmc_rates(p, q);
      EXPECT_NEAR(r.r_fwd, want.first, 1e-12);
      EXPECT_NEAR(r.r_bwd, want.second, 1e-12);
    }
}

TEST(ShannonRegion, ExchangeIsUnitSquare) {
  const auto r = shannon_inner_region(classical_channels::exchange(2), budget(1));
  ASSERT_EQ(r.vertices.size(), 3u);
  EXPECT_NEAR(r.vertices[1].first, 1.0, 1e-9);
  EXPECT_NEAR(r.vertices[1].second, 1.0, 1e-9);
  EXPECT_FALSE(r.heuristic);
}

TEST(ShannonRegion, BmcSymmetricRateMatchesGridOracle) {
  const double want = bmc_grid_oracle();
  EXPECT_NEAR(want, 0.6169, 1e-4);
  const auto r = shannon_inner_region(classical_channels::binary_multiplying(), budget(2));
  EXPECT_NEAR(diagonal_rate(r), want, 1e-3);
  const auto o = shannon_outer_region(classical_channels::binary_multiplying(), budget(2));
  EXPECT_GE(diagonal_rate(o), diagonal_rate(r) - 1e-12);
}

TEST(ShannonRegion, InnerInsideOuterForRandomChannels) {
  auto rng = make_rng(82);
  for (int t = 0; t < 5; ++t) {
    const auto w = random_classical_channel({2, 2 + t % 2, 2, 2}, rng);
    const auto in = shannon_inner_region(w, budget(10 + t));
    const auto out = shannon_outer_region(w, budget(10 + t));
    for (const auto& v : in.vertices) EXPECT_TRUE(region_contains(out, v.first, v.second, 1e-9));
  }
}

TEST(ShannonSweep, WeightedMaximumBeatsRandomPoints) {
  auto rng = make_rng(83);
  const auto w = random_classical_channel({2, 2, 2, 2}, rng);
  const auto best = maximize_shannon_weighted(w, 0.4, false, budget(3));
  for (int t = 0; t < 50; ++t) {
    const auto [f, b] = shannon_rates(w, random_joint(2, 2, rng));
    EXPECT_LE(0.4 * f + 0.6 * b, best.value + 1e-9);
  }
}

TEST(Consistency, Examples) {
  const auto nf = classical_consistency(classical_channels::noiseless_forward(2), uniform_product(2, 2));
  EXPECT_NEAR(nf.delta_forward, 1.0, 1e-9);
  EXPECT_LE(nf.deviation, 1e-9);
  EXPECT_LE(classical_consistency_check(classical_channels::binary_multiplying(), uniform_product(2, 2)), 1e-9);
  const auto pa = std::vector<double>{0.3, 0.7};
  const auto d = JointInputDistribution::product_of(pa, std::vector<double>{0.5, 0.5});
  const auto ex = classical_consistency(classical_channels::exchange(2), d);
  EXPECT_NEAR(ex.delta_forward, shannon_entropy(pa), 1e-9);
  EXPECT_LE(ex.deviation, 1e-9);
  const auto id = classical_consistency(classical_channels::identity(2), d);
  EXPECT_NEAR(id.delta_forward, 0.0, 1e-9);
  EXPECT_LE(id.deviation, 1e-9);
}

TEST(Consistency, RandomChannelsAndInputs) {
  auto rng = make_rng(84);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_classical_channel({2, 2 + t % 2, 2, 2}, rng);
    EXPECT_LE(classical_consistency_check(w, random_joint(2, 2 + t % 2, rng)), 1e-9);
  }
}

TEST(Consistency, OverflowRejected) {
  auto rng = make_rng(85);
  const auto w = random_classical_channel({3, 3, 3, 3}, rng);
  EXPECT_THROW(classical_consistency_check(w, uniform_product(3, 3)), InputError);
}

TEST(Consistency, EntanglementAssistanceDoesNotHelpBmc) {
  Budget b = budget(4);
  b.ancilla_levels = 2;
  const auto r = one_way_capacity(embed_classical(classical_channels::binary_multiplying()), Direction::Forward, b);
  EXPECT_LE(r.best_value, 1.0 + 2e-2);
  EXPECT_GE(r.best_value, 1.0 - 1e-2);
}
