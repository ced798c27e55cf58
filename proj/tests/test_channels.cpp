#include <gtest/gtest.h>

#include "biduct/channels.hpp"
#include "biduct/errors.hpp"
#include "biduct/standard_channels.hpp"
#include "oracles.hpp"

using namespace biduct;

namespace {

Matrix kraus_action(const std::vector<Matrix>& ks, const Matrix& rho) {
  Matrix out = Matrix::Zero(ks[0].rows(), ks[0].rows());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

TEST(Channels, CompletenessEnforced) {
  std::vector<Matrix> ks{Matrix::Identity(2, 2) * 0.9};
  EXPECT_THROW(OneWayChannel(ks, 2, 2), InvariantError);
  EXPECT_THROW(OneWayChannel({Matrix::Identity(3, 2)}, 2, 2), InputError);
  EXPECT_NO_THROW(standard::amplitude_damping(0.3));
  EXPECT_LT(standard::dephasing(0.2).completeness_deviation(), 1e-12);
}

TEST(Channels, ChoiTraceAndMarginal) {
  auto rng = make_rng(31);
  for (int t = 0; t < 5; ++t) {
    const auto m = standard::random_channel(2, 3, 1 + t, rng);
    const auto& c = m.choi();
    EXPECT_NEAR(c.matrix().trace().real(), 2.0, 1e-10);
    // trace over the output leaves the identity on the input
    const Matrix in = oracle::partial_trace(c.matrix(), {2, 3}, {0});
    EXPECT_LT((in - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(hermitian_eigenvalues(c.matrix()).minCoeff(), -1e-10);
  }
}

TEST(Channels, ApplyMatchesKraus) {
  auto rng = make_rng(32);
  const auto m = standard::random_channel(2, 2, 3, rng);
  const SubsystemLayout l({{"A", 2, Party::Alice}});
  const DensityOperator rho(random_density_matrix(2, rng), l);
  EXPECT_LT((apply(m, rho, "A").matrix() - kraus_action(m.kraus(), rho.matrix())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channels, ApplyOnSpectatorLayout) {
  auto rng = make_rng(33);
  const auto m = standard::random_channel(2, 3, 2, rng);
  const SubsystemLayout l({{"R", 2, Party::Bob}, {"A", 2, Party::Alice}});
  const DensityOperator rho(random_density_matrix(4, rng), l);
  const auto out = apply(m, rho, "A");
  EXPECT_EQ(out.layout().dims(), (std::vector<int>{2, 3}));
  // spectator marginal unchanged
  EXPECT_LT((partial_trace(out, {"R"}).matrix() - partial_trace(rho, {"R"}).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  // local action matches the Kraus oracle on the reduced input
  const Matrix want = kraus_action(m.kraus(), partial_trace(rho, {"A"}).matrix());
  EXPECT_LT((partial_trace(out, {"A"}).matrix() - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channels, TwoWaySwapExchangesMarginals) {
  auto rng = make_rng(34);
  const SubsystemLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});
  const DensityOperator x(random_density_matrix(2, rng), SubsystemLayout({{"A", 2, Party::Alice}}));
  const DensityOperator y(random_density_matrix(2, rng), SubsystemLayout({{"B", 2, Party::Bob}}));
  const auto out = apply(standard::swap(2), tensor(x, y));
  EXPECT_LT((partial_trace(out, {"A"}).matrix() - y.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((partial_trace(out, {"B"}).matrix() - x.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channels, EmbeddingOfOneWayActsLikeTheChannel) {
  auto rng = make_rng(35);
  const auto m = standard::random_channel(2, 2, 2, rng);
  const auto n = embed_one_way(m);
  EXPECT_EQ(n.dims(), (ChannelDims{2, 1, 1, 2}));
  const SubsystemLayout l({{"A", 2, Party::Alice}, {"B", 1, Party::Bob}});
  const DensityOperator rho(random_density_matrix(2, rng), l);
  const auto out = apply(n, rho);
  EXPECT_LT((out.matrix() - kraus_action(m.kraus(), rho.matrix())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channels, TensorOfChannels) {
  auto rng = make_rng(36);
  const auto m1 = standard::random_channel(2, 2, 2, rng), m2 = standard::random_channel(2, 2, 2, rng);
  const auto m = tensor_channels(m1, m2);
  const Matrix a = random_density_matrix(2, rng), b = random_density_matrix(2, rng);
  Matrix ab(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ab.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  const Matrix got = m.map(ab), ma = m1.map(a), mb = m2.map(b);
  Matrix want(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) want.block(2 * i, 2 * j, 2, 2) = ma(i, j) * mb;
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channels, EntanglementBreakingVerdicts) {
  EXPECT_EQ(is_entanglement_breaking(standard::identity(2)), EbVerdict::NotEntanglementBreaking);
  EXPECT_EQ(is_entanglement_breaking(standard::measure_reprepare(2)), EbVerdict::EntanglementBreaking);
  EXPECT_EQ(is_entanglement_breaking(standard::completely_depolarizing(2, 2)), EbVerdict::EntanglementBreaking);
  EXPECT_EQ(is_entanglement_breaking(standard::dephasing(0.5)), EbVerdict::EntanglementBreaking);
  EXPECT_EQ(is_entanglement_breaking(standard::dephasing(0.2)), EbVerdict::NotEntanglementBreaking);
  auto rng = make_rng(37);
  for (int t = 0; t < 5; ++t)
    EXPECT_EQ(is_entanglement_breaking(standard::random_entanglement_breaking(2, 2, 2 + t % 3, rng)),
              EbVerdict::EntanglementBreaking);
  // 3x3 PPT is not conclusive
  EXPECT_EQ(is_entanglement_breaking(standard::measure_reprepare(3)), EbVerdict::Inconclusive);
}

TEST(Channels, ClassicalEmbeddingOnBasisStates) {
  const auto w = classical_channels::binary_multiplying();
  const auto n = embed_classical(w);
  const SubsystemLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});
  const auto out = apply(n, DensityOperator::basis(l, 3));  // |11>
  EXPECT_NEAR(out.matrix()(3, 3).real(), 1.0, 1e-12);
  const auto out2 = apply(n, DensityOperator::basis(l, 2));  // |10> -> |00>
  EXPECT_NEAR(out2.matrix()(0, 0).real(), 1.0, 1e-12);
}
