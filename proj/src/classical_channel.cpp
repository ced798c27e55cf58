#include "biduct/classical_channel.hpp"

#include <cmath>
#include <string>

#include "biduct/errors.hpp"
#include "biduct/tolerances.hpp"

namespace biduct {

namespace {

constexpr double kJointNorm = 1e-12;

std::size_t flat_index(const Alphabets& al, int a, int b, int ap, int bp) {
  return ((static_cast<std::size_t>(a) * al.b + b) * al.a_out + ap) * al.b_out + bp;
}

double entropy_of_counts(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

}  // namespace

ClassicalTwoWayChannel::ClassicalTwoWayChannel(Alphabets alphabets, std::vector<double> pmf)
    : alphabets_(alphabets), pmf_(std::move(pmf)) {
  const auto& al = alphabets_;
  if (al.a < 1 || al.b < 1 || al.a_out < 1 || al.b_out < 1)
    throw InputError("classical alphabets must be non-empty");
  const std::size_t expected = static_cast<std::size_t>(al.a) * al.b * al.a_out * al.b_out;
  if (pmf_.size() != expected)
    throw InputError("pmf has " + std::to_string(pmf_.size()) + " entries, expected " +
                     std::to_string(expected));
  for (int a = 0; a < al.a; ++a)
    for (int b = 0; b < al.b; ++b) {
      double sum = 0.0;
      for (int ap = 0; ap < al.a_out; ++ap)
        for (int bp = 0; bp < al.b_out; ++bp) {
          const double v = pmf_[flat_index(al, a, b, ap, bp)];
          if (!(v >= 0.0))
            throw InvariantError("pmf non-negativity", -v,
                                 "row (a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")");
          sum += v;
        }
      const double dev = std::abs(sum - 1.0);
      if (dev > tol::kClassicalRow)
        throw InvariantError("pmf row normalisation", dev,
                             "row (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                                 ") sums to " + std::to_string(sum));
    }
}

ClassicalTwoWayChannel ClassicalTwoWayChannel::deterministic(
    Alphabets alphabets, const std::function<std::pair<int, int>(int, int)>& rule) {
  std::vector<double> pmf(static_cast<std::size_t>(alphabets.a) * alphabets.b * alphabets.a_out *
                              alphabets.b_out,
                          0.0);
  for (int a = 0; a < alphabets.a; ++a)
    for (int b = 0; b < alphabets.b; ++b) {
      const auto [ap, bp] = rule(a, b);
      if (ap < 0 || ap >= alphabets.a_out || bp < 0 || bp >= alphabets.b_out)
        throw InputError("deterministic rule maps outside the output alphabets");
      pmf[flat_index(alphabets, a, b, ap, bp)] = 1.0;
    }
  return ClassicalTwoWayChannel(alphabets, std::move(pmf));
}

double ClassicalTwoWayChannel::operator()(int a, int b, int a_out, int b_out) const {
  return pmf_[flat_index(alphabets_, a, b, a_out, b_out)];
}

JointInputDistribution::JointInputDistribution(Eigen::MatrixXd p, bool product)
    : p_(std::move(p)), product_(product) {
  if (p_.size() == 0) throw InputError("empty input distribution");
  if ((p_.array() < 0.0).any()) throw InputError("input distribution has a negative entry");
  const double dev = std::abs(p_.sum() - 1.0);
  if (dev > kJointNorm) throw InvariantError("input distribution normalisation", dev);
  if (product_) {
    const Eigen::VectorXd pa = p_.rowwise().sum();
    const Eigen::RowVectorXd qb = p_.colwise().sum();
    const double rank1 = (p_ - pa * qb).cwiseAbs().maxCoeff();
    if (rank1 > tol::kProductDistribution) throw InvariantError("product distribution", rank1);
  }
}

JointInputDistribution JointInputDistribution::product_of(std::span<const double> pa,
                                                          std::span<const double> qb) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(pa.size()), static_cast<Eigen::Index>(qb.size()));
  for (std::size_t a = 0; a < pa.size(); ++a)
    for (std::size_t b = 0; b < qb.size(); ++b)
      p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = pa[a] * qb[b];
  return JointInputDistribution(std::move(p), true);
}

std::vector<double> JointInputDistribution::marginal_a() const {
  std::vector<double> out(static_cast<std::size_t>(p_.rows()));
  for (Eigen::Index a = 0; a < p_.rows(); ++a) out[static_cast<std::size_t>(a)] = p_.row(a).sum();
  return out;
}

std::vector<double> JointInputDistribution::marginal_b() const {
  std::vector<double> out(static_cast<std::size_t>(p_.cols()));
  for (Eigen::Index b = 0; b < p_.cols(); ++b) out[static_cast<std::size_t>(b)] = p_.col(b).sum();
  return out;
}

double conditional_mutual_information(std::span<const double> joint, int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw InputError("alphabet sizes must be positive");
  if (joint.size() != static_cast<std::size_t>(nx) * ny * nz)
    throw InputError("joint pmf size does not match the alphabet sizes");
  double sum = 0.0;
  for (double v : joint) {
    if (!(v >= 0.0)) throw InputError("joint pmf has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kJointNorm) throw InputError("joint pmf does not sum to 1");

  std::vector<double> xz(static_cast<std::size_t>(nx) * nz, 0.0);
  std::vector<double> yz(static_cast<std::size_t>(ny) * nz, 0.0);
  std::vector<double> z(static_cast<std::size_t>(nz), 0.0);
  std::vector<double> xyz(joint.begin(), joint.end());
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int k = 0; k < nz; ++k) {
        const double v = joint[(static_cast<std::size_t>(x) * ny + y) * nz + k];
        xz[static_cast<std::size_t>(x) * nz + k] += v;
        yz[static_cast<std::size_t>(y) * nz + k] += v;
        z[static_cast<std::size_t>(k)] += v;
      }
  // I(X;Y|Z) = H(XZ) + H(YZ) - H(XYZ) - H(Z)
  return entropy_of_counts(xz) + entropy_of_counts(yz) - entropy_of_counts(xyz) -
         entropy_of_counts(z);
}

std::vector<double> joint_pmf(const ClassicalTwoWayChannel& w, const JointInputDistribution& d) {
  const auto& al = w.alphabets();
  if (d.p().rows() != al.a || d.p().cols() != al.b)
    throw InputError("input distribution alphabet does not match the channel");
  std::vector<double> out(w.pmf().size());
  for (int a = 0; a < al.a; ++a)
    for (int b = 0; b < al.b; ++b)
      for (int ap = 0; ap < al.a_out; ++ap)
        for (int bp = 0; bp < al.b_out; ++bp) {
          const auto i = flat_index(al, a, b, ap, bp);
          out[i] = d.p()(a, b) * w.pmf()[i];
        }
  return out;
}

std::pair<double, double> shannon_rates(const ClassicalTwoWayChannel& w,
                                        const JointInputDistribution& d) {
  const auto& al = w.alphabets();
  const auto j = joint_pmf(w, d);
  // forward: X = A, Y = B', Z = B
  std::vector<double> fwd(static_cast<std::size_t>(al.a) * al.b_out * al.b, 0.0);
  // backward: X = B, Y = A', Z = A
  std::vector<double> bwd(static_cast<std::size_t>(al.b) * al.a_out * al.a, 0.0);
  for (int a = 0; a < al.a; ++a)
    for (int b = 0; b < al.b; ++b)
      for (int ap = 0; ap < al.a_out; ++ap)
        for (int bp = 0; bp < al.b_out; ++bp) {
          const double v = j[flat_index(al, a, b, ap, bp)];
          fwd[(static_cast<std::size_t>(a) * al.b_out + bp) * al.b + b] += v;
          bwd[(static_cast<std::size_t>(b) * al.a_out + ap) * al.a + a] += v;
        }
  return {conditional_mutual_information(fwd, al.a, al.b_out, al.b),
          conditional_mutual_information(bwd, al.b, al.a_out, al.a)};
}

ClassicalTwoWayChannel random_classical_channel(Alphabets alphabets, Rng& rng) {
  std::vector<double> pmf;
  const std::size_t row = static_cast<std::size_t>(alphabets.a_out) * alphabets.b_out;
  for (int a = 0; a < alphabets.a; ++a)
    for (int b = 0; b < alphabets.b; ++b) {
      auto r = random_probabilities(row, rng);
      pmf.insert(pmf.end(), r.begin(), r.end());
    }
  return ClassicalTwoWayChannel(alphabets, std::move(pmf));
}

namespace classical_channels {

ClassicalTwoWayChannel binary_multiplying() {
  return ClassicalTwoWayChannel::deterministic({2, 2, 2, 2},
                                               [](int a, int b) { return std::pair{a * b, a * b}; });
}

ClassicalTwoWayChannel identity(int n) {
  return ClassicalTwoWayChannel::deterministic({n, n, n, n},
                                               [](int a, int b) { return std::pair{a, b}; });
}

ClassicalTwoWayChannel exchange(int n) {
  return ClassicalTwoWayChannel::deterministic({n, n, n, n},
                                               [](int a, int b) { return std::pair{b, a}; });
}

ClassicalTwoWayChannel noiseless_forward(int n) {
  return ClassicalTwoWayChannel::deterministic({n, n, n, n},
                                               [](int a, int) { return std::pair{0, a}; });
}

ClassicalTwoWayChannel input_independent(Alphabets al, std::span<const double> out_pmf) {
  if (out_pmf.size() != static_cast<std::size_t>(al.a_out) * al.b_out)
    throw InputError("output pmf has the wrong size");
  std::vector<double> pmf;
  for (int r = 0; r < al.a * al.b; ++r) pmf.insert(pmf.end(), out_pmf.begin(), out_pmf.end());
  return ClassicalTwoWayChannel(al, std::move(pmf));
}

ClassicalTwoWayChannel binary_symmetric_forward(double flip) {
  Alphabets al{2, 2, 1, 2};
  std::vector<double> pmf;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp) pmf.push_back(bp == a ? 1.0 - flip : flip);
  return ClassicalTwoWayChannel(al, std::move(pmf));
}

}  // namespace classical_channels

}  // namespace biduct
