#include "biduct/random.hpp"

#include <cmath>

namespace biduct {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x62696475u};
  return Rng(seq);
}

Vector random_gaussian_vector(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = n(rng);
    const double im = n(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

Vector haar_vector(int d, Rng& rng) {
  Vector v = random_gaussian_vector(d, rng);
  return v / v.norm();
}

Matrix haar_unitary(int d, Rng& rng) {
  Matrix g(d, d);
  for (int c = 0; c < d; ++c) g.col(c) = random_gaussian_vector(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const cplx diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(i) *= diag / mag;
  }
  return q;
}

Matrix random_density_matrix(int d, Rng& rng, int rank) {
  if (rank <= 0) rank = d;
  Matrix g(d, rank);
  for (int c = 0; c < rank; ++c) g.col(c) = random_gaussian_vector(d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = e(rng));
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace biduct
