#include <gtest/gtest.h>

#include "biduct/errors.hpp"
#include "biduct/holevo.hpp"
#include "biduct/random.hpp"
#include "biduct/standard_channels.hpp"
#include "oracles.hpp"

using namespace biduct;

namespace {

const SubsystemLayout kAB({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});

Ensemble random_ensemble(const SubsystemLayout& l, int m, Rng& rng) {
  const auto p = random_probabilities(static_cast<std::size_t>(m), rng);
  std::vector<EnsembleMember> members;
  for (int i = 0; i < m; ++i)
    members.push_back({p[static_cast<std::size_t>(i)], DensityOperator(random_density_matrix(l.total_dim(), rng), l)});
  return Ensemble(members);
}

MessageEnsemble random_message_ensemble(Rng& rng, int na, int nb) {
  Eigen::MatrixXd p(na, nb);
  const auto flat = random_probabilities(static_cast<std::size_t>(na * nb), rng);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) p(a, b) = flat[static_cast<std::size_t>(a * nb + b)];
  std::vector<DensityOperator> states;
  for (int i = 0; i < na * nb; ++i) states.emplace_back(random_density_matrix(4, rng, 1 + i % 3), kAB);
  return MessageEnsemble(p, states);
}

// chi computed straight from its definition with the oracle entropy
double chi_oracle(const Ensemble& e) {
  Matrix avg = Matrix::Zero(e.layout().total_dim(), e.layout().total_dim());
  double s = 0.0;
  for (const auto& m : e.members()) {
    avg += m.p * m.state.matrix();
    s += m.p * oracle::entropy(m.state.matrix());
  }
  return oracle::entropy(avg) - s;
}

}  // namespace

TEST(Holevo, OrthogonalPureStatesGiveShannonEntropy) {
  const SubsystemLayout l({{"A", 3, Party::Alice}});
  const std::vector<double> p{0.2, 0.3, 0.5};
  std::vector<Vector> states;
  for (int i = 0; i < 3; ++i) states.push_back(Vector::Unit(3, i));
  EXPECT_NEAR(holevo_chi(Ensemble::from_pure(p, states, l)), shannon_entropy(p), 1e-12);
}

TEST(Holevo, IdenticalStatesGiveZero) {
  auto rng = make_rng(41);
  const DensityOperator rho(random_density_matrix(4, rng), kAB);
  EXPECT_NEAR(holevo_chi(Ensemble({{0.3, rho}, {0.7, rho}})), 0.0, 1e-12);
}

TEST(Holevo, MatchesDefinitionAndBounds) {
  auto rng = make_rng(42);
  for (int t = 0; t < 20; ++t) {
    const auto e = random_ensemble(kAB, 2 + t % 4, rng);
    const double chi = holevo_chi(e);
    EXPECT_NEAR(chi, chi_oracle(e), 1e-9);
    EXPECT_GE(chi, -1e-12);
    EXPECT_LE(chi, std::min(2.0, shannon_entropy(e.probabilities())) + 1e-10);
    // monotone under discarding a subsystem
    EXPECT_LE(chi_forward(e), chi + 1e-10);
    EXPECT_LE(chi_backward(e), chi + 1e-10);
  }
}

TEST(Holevo, DataProcessingUnderChannels) {
  auto rng = make_rng(43);
  const auto n = standard::random_two_way_channel({2, 2, 2, 2}, 3, rng);
  for (int t = 0; t < 10; ++t) {
    const auto e = random_ensemble(kAB, 3, rng);
    EXPECT_LE(holevo_chi(apply_to_ensemble(n, e)), holevo_chi(e) + 1e-10);
  }
}

TEST(Holevo, DeltaChiOfIdentityAndSwap) {
  auto rng = make_rng(44);
  const auto e = random_ensemble(kAB, 3, rng);
  EXPECT_NEAR(delta_chi_forward(standard::identity_two_way(2, 2), e), 0.0, 1e-12);
  EXPECT_NEAR(delta_chi_backward(standard::identity_two_way(2, 2), e), 0.0, 1e-12);
  // SWAP hands Bob Alice's marginal ensemble
  const auto s = standard::swap(2);
  const std::vector<std::string> a{"A"};
  EXPECT_NEAR(delta_chi_forward(s, e), holevo_chi(reduce(e, a)) - chi_forward(e), 1e-10);
}

TEST(Holevo, MessageRegisterIdentity) {
  auto rng = make_rng(45);
  for (int t = 0; t < 20; ++t) {
    const auto me = random_message_ensemble(rng, 2 + t % 2, 2 + (t / 2) % 2);
    const auto flat = me.flatten();
    EXPECT_NEAR(chi_forward(flat), shannon_entropy(me.marginal_b()) + chi_bar_forward(me), 1e-10);
    EXPECT_NEAR(chi_backward(flat), shannon_entropy(me.marginal_a()) + chi_bar_backward(me), 1e-10);
  }
}

TEST(Holevo, LocalUnitaryOnReceiverLeavesChiBar) {
  auto rng = make_rng(46);
  const auto me = random_message_ensemble(rng, 2, 2);
  const auto moved = me.with_local_unitary(haar_unitary(2, rng), "B");
  EXPECT_NEAR(chi_bar_forward(moved), chi_bar_forward(me), 1e-10);
}

TEST(Holevo, Validation) {
  auto rng = make_rng(47);
  const DensityOperator rho(random_density_matrix(4, rng), kAB);
  EXPECT_THROW(Ensemble({{0.5, rho}, {0.6, rho}}), InputError);
  EXPECT_THROW(Ensemble(std::vector<EnsembleMember>{}), InputError);
  const DensityOperator other(random_density_matrix(2, rng), SubsystemLayout({{"A", 2, Party::Alice}}));
  EXPECT_THROW(Ensemble({{0.5, rho}, {0.5, other}}), InputError);
  EXPECT_THROW(chi_forward(Ensemble({{1.0, other}})), InputError);
}

TEST(Holevo, JsonRoundTrip) {
  auto rng = make_rng(48);
  const auto e = random_ensemble(kAB, 3, rng);
  const auto back = ensemble_from_json(ensemble_to_json(e));
  EXPECT_NEAR(holevo_chi(back), holevo_chi(e), 1e-9);
  EXPECT_EQ(back.layout(), e.layout());
  EXPECT_THROW(ensemble_from_json(json::parse(R"({"members": 3})")), InputError);
}
