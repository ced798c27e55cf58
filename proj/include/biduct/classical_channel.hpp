#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biduct/random.hpp"

namespace biduct {

struct Alphabets {
  int a = 2;      // Alice's input
  int b = 2;      // Bob's input
  int a_out = 2;  // delivered to Alice
  int b_out = 2;  // delivered to Bob

  bool operator==(const Alphabets&) const = default;
};

/// Conditional pmf p(a', b' | a, b) of a two-way classical channel.
class ClassicalTwoWayChannel {
 public:
  /// `pmf` is flat, indexed [a][b][a'][b'] row-major. Every row (a, b) must
  /// be non-negative and sum to one within tol::kClassicalRow; a violation
  /// throws InvariantError naming the offending (a, b).
  ClassicalTwoWayChannel(Alphabets alphabets, std::vector<double> pmf);

  /// Deterministic channel from a rule (a, b) -> (a', b').
  static ClassicalTwoWayChannel deterministic(
      Alphabets alphabets, const std::function<std::pair<int, int>(int, int)>& rule);

  const Alphabets& alphabets() const noexcept { return alphabets_; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double operator()(int a, int b, int a_out, int b_out) const;

 private:
  Alphabets alphabets_;
  std::vector<double> pmf_;
};

/// Joint input distribution p_ab.
class JointInputDistribution {
 public:
  /// Validates entries and normalisation (1e-12). If `product` is set the
  /// matrix must be rank one within tol::kProductDistribution.
  explicit JointInputDistribution(Eigen::MatrixXd p, bool product = false);
  static JointInputDistribution product_of(std::span<const double> pa, std::span<const double> qb);

  const Eigen::MatrixXd& p() const noexcept { return p_; }
  bool is_product() const noexcept { return product_; }
  std::vector<double> marginal_a() const;
  std::vector<double> marginal_b() const;

 private:
  Eigen::MatrixXd p_;
  bool product_;
};

/// I(X;Y|Z) in bits for a joint pmf indexed [x][y][z] (flat, row-major).
double conditional_mutual_information(std::span<const double> joint, int nx, int ny, int nz);

/// Output-input joint pmf p_ab p(a'b'|ab), flat over [a][b][a'][b'].
std::vector<double> joint_pmf(const ClassicalTwoWayChannel& w, const JointInputDistribution& d);

/// I(A;B'|B) and I(B;A'|A) for the given channel and inputs.
std::pair<double, double> shannon_rates(const ClassicalTwoWayChannel& w,
                                        const JointInputDistribution& d);

ClassicalTwoWayChannel random_classical_channel(Alphabets alphabets, Rng& rng);

namespace classical_channels {

/// Both parties receive a AND b.
ClassicalTwoWayChannel binary_multiplying();
/// a' = a, b' = b: each party gets its own input back; acts as the identity
/// on computational basis states and carries no information.
ClassicalTwoWayChannel identity(int n = 2);
/// a' = b, b' = a: noiseless in both directions.
ClassicalTwoWayChannel exchange(int n = 2);
/// b' = a, a' = 0: noiseless forward, nothing backward.
ClassicalTwoWayChannel noiseless_forward(int n = 2);
/// Outputs independent of the inputs.
ClassicalTwoWayChannel input_independent(Alphabets alphabets, std::span<const double> out_pmf);
/// b' = a with flip probability `flip`; Bob's input is ignored and Alice
/// receives nothing useful.
ClassicalTwoWayChannel binary_symmetric_forward(double flip);

}  // namespace classical_channels

}  // namespace biduct
