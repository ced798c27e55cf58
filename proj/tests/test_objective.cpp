#include <gtest/gtest.h>

#include "biduct/objective.hpp"
#include "biduct/optimize.hpp"
#include "biduct/random.hpp"
#include "biduct/standard_channels.hpp"

using namespace biduct;

namespace {

std::vector<ObjectiveTerm> delta_terms(const TwoWayChannel& n, const SubsystemLayout& l, double lambda) {
  const std::vector<std::string> bob{"B", "Bp"}, alice{"A", "Ap"};
  std::vector<ObjectiveTerm> t;
  t.push_back({ObjectiveTerm::Kind::Holevo, lambda, PureStateMap(l, &n, "A", "B", bob)});
  t.push_back({ObjectiveTerm::Kind::Holevo, -lambda, PureStateMap(l, nullptr, "A", "B", bob)});
  t.push_back({ObjectiveTerm::Kind::Holevo, 1 - lambda, PureStateMap(l, &n, "A", "B", alice)});
  t.push_back({ObjectiveTerm::Kind::Holevo, lambda - 1, PureStateMap(l, nullptr, "A", "B", alice)});
  t.push_back({ObjectiveTerm::Kind::Entropy, 0.3, PureStateMap(l, &n, "A", "B", {"B"})});
  return t;
}

void check_gradient(const EnsembleObjective& obj, Rng& rng, double eps) {
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(obj.num_parameters()));
  for (auto& v : x) v = g(rng);
  std::vector<double> grad(x.size());
  obj.evaluate(x.data(), grad.data(), eps);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (obj.evaluate(xp.data(), nullptr, eps) - obj.evaluate(xm.data(), nullptr, eps)) / (2 * h);
    worst = std::max(worst, std::abs(fd - grad[i]));
  }
  EXPECT_LT(worst, 1e-5);
}

EnsembleStructure joint_structure(const SubsystemLayout& l, int m) {
  EnsembleStructure s;
  s.layout = l;
  s.x_labels = l.labels();
  s.members = m;
  for (int i = 0; i < m; ++i) {
    s.block_dims.push_back(l.total_dim());
    s.components.push_back({i, i, -1});
  }
  return s;
}

EnsembleStructure product_structure(const SubsystemLayout& l, int mx, int my) {
  EnsembleStructure s;
  s.layout = l;
  s.x_labels = {"A", "Bp"};
  s.y_labels = {"B", "Ap"};
  s.members = mx * my;
  s.weights = WeightScheme::Product;
  s.product_x = mx;
  s.product_y = my;
  const int dx = l[0].dim * l[3].dim, dy = l[2].dim * l[1].dim;
  for (int a = 0; a < mx; ++a) s.block_dims.push_back(dx);
  for (int b = 0; b < my; ++b) s.block_dims.push_back(dy);
  for (int a = 0; a < mx; ++a)
    for (int b = 0; b < my; ++b) s.components.push_back({a * my + b, a, mx + b});
  return s;
}

}  // namespace

TEST(Objective, JointGradientMatchesFiniteDifferences) {
  auto rng = make_rng(51);
  const auto n = standard::random_two_way_channel({2, 2, 2, 2}, 2, rng);
  const auto l = canonical_layout(2, 2, 2, 1);
  EnsembleObjective obj(joint_structure(l, 3), delta_terms(n, l, 0.4));
  check_gradient(obj, rng, 1e-9);
  check_gradient(obj, rng, 1e-3);
}

TEST(Objective, ProductGradientMatchesFiniteDifferences) {
  auto rng = make_rng(52);
  const auto n = standard::random_two_way_channel({2, 2, 2, 2}, 2, rng);
  const auto l = canonical_layout(2, 2, 2, 2);
  EnsembleObjective obj(product_structure(l, 2, 3), delta_terms(n, l, 0.7));
  check_gradient(obj, rng, 1e-9);
}

TEST(Objective, FixedStateGradientMatchesFiniteDifferences) {
  auto rng = make_rng(53);
  const auto n = standard::random_two_way_channel({2, 2, 2, 2}, 3, rng);
  const auto l = canonical_layout(2, 1, 2, 1);
  EnsembleStructure s;
  s.layout = l;
  s.x_labels = l.labels();
  s.members = 3;
  for (int i = 0; i < 3; ++i) {
    s.fixed_states.push_back(haar_vector(4, rng));
    s.components.push_back({i, 0, -1});
  }
  EnsembleObjective obj(s, delta_terms(n, l, 0.5));
  EXPECT_EQ(obj.num_parameters(), obj.weight_parameters());
  check_gradient(obj, rng, 1e-9);
}

TEST(Objective, ValueMatchesCertificate) {
  auto rng = make_rng(54);
  const auto n = standard::random_two_way_channel({2, 2, 2, 2}, 2, rng);
  const auto l = canonical_layout(2, 2, 2, 2);
  const double lambda = 0.6;
  const std::vector<std::string> bob{"B", "Bp"};
  std::vector<ObjectiveTerm> terms;
  terms.push_back({ObjectiveTerm::Kind::Holevo, lambda, PureStateMap(l, &n, "A", "B", bob)});
  terms.push_back({ObjectiveTerm::Kind::Holevo, -lambda, PureStateMap(l, nullptr, "A", "B", bob)});
  EnsembleObjective obj(product_structure(l, 2, 2), std::move(terms));
  std::normal_distribution<double> g;
  std::vector<double> x(static_cast<std::size_t>(obj.num_parameters()));
  for (auto& v : x) v = g(rng);
  const auto cert = obj.certificate(x.data());
  const double direct = lambda * delta_chi_forward(n, cert);
  EXPECT_NEAR(obj.evaluate(x.data(), nullptr, 0.0), direct, 1e-9);
  EXPECT_NEAR(obj.value_of(cert), direct, 1e-9);
}

TEST(Objective, PackRoundTrip) {
  auto rng = make_rng(55);
  const auto l = canonical_layout(2, 1, 2, 1);
  EnsembleObjective obj(joint_structure(l, 2), {});
  const std::vector<double> logits{0.0, std::log(3.0)};
  const std::vector<Vector> blocks{Vector::Unit(4, 0) * 2.0, Vector::Unit(4, 3)};
  const auto x = obj.pack(logits, blocks);
  const auto e = obj.certificate(x.data());
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e.members()[0].p, 0.25, 1e-12);
  EXPECT_NEAR(e.members()[1].state.matrix()(3, 3).real(), 1.0, 1e-12);
}

TEST(Objective, RegularizedEntropyGradient) {
  auto rng = make_rng(56);
  const Matrix x = random_density_matrix(3, rng) * 0.7;
  const Matrix y = random_density_matrix(3, rng) - Matrix::Identity(3, 3) / 3.0;
  Matrix f;
  const double eps = 1e-6;
  regularized_entropy(x, eps, &f);
  const double h = 1e-6;
  const double fd = (regularized_entropy(x + h * y, eps, nullptr) - regularized_entropy(x - h * y, eps, nullptr)) / (2 * h);
  EXPECT_NEAR(fd, (f * y).trace().real(), 1e-5);
  EXPECT_NEAR(regularized_entropy(Matrix::Identity(4, 4) / 4.0, 0.0, nullptr), 2.0, 1e-12);
}
