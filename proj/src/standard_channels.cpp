#include "biduct/standard_channels.hpp"

#include <cmath>
#include <numbers>

#include "biduct/errors.hpp"

namespace biduct::standard {

OneWayChannel identity(int d) { return OneWayChannel({Matrix::Identity(d, d)}, d, d); }

OneWayChannel completely_depolarizing(int d_in, int d_out) {
  std::vector<Matrix> kraus;
  const double s = 1.0 / std::sqrt(static_cast<double>(d_out));
  for (int o = 0; o < d_out; ++o)
    for (int i = 0; i < d_in; ++i) {
      Matrix k = Matrix::Zero(d_out, d_in);
      k(o, i) = s;
      kraus.push_back(std::move(k));
    }
  return OneWayChannel(std::move(kraus), d_in, d_out);
}

OneWayChannel dephasing(double p) {
  return OneWayChannel({std::sqrt(1.0 - p) * pauli(0), std::sqrt(p) * pauli(3)}, 2, 2);
}

OneWayChannel amplitude_damping(double gamma) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return OneWayChannel({k0, k1}, 2, 2);
}

OneWayChannel measure_reprepare(int d) {
  std::vector<Matrix> kraus;
  for (int i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(std::move(k));
  }
  return OneWayChannel(std::move(kraus), d, d);
}

TwoWayChannel identity_two_way(int d_a, int d_b) {
  const int d = d_a * d_b;
  return TwoWayChannel({Matrix::Identity(d, d)}, {d_a, d_b, d_a, d_b});
}

TwoWayChannel swap(int d) {
  Matrix u = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) u(b * d + a, a * d + b) = 1.0;
  return TwoWayChannel::from_unitary(u, {d, d, d, d});
}

TwoWayChannel completely_depolarizing_two_way(ChannelDims dims) {
  std::vector<Matrix> kraus;
  const double s = 1.0 / std::sqrt(static_cast<double>(dims.out()));
  for (int o = 0; o < dims.out(); ++o)
    for (int i = 0; i < dims.in(); ++i) {
      Matrix k = Matrix::Zero(dims.out(), dims.in());
      k(o, i) = s;
      kraus.push_back(std::move(k));
    }
  return TwoWayChannel(std::move(kraus), dims);
}

namespace {

std::vector<Matrix> random_kraus(int d_in, int d_out, int rank, Rng& rng) {
  // Haar isometry V: C^{d_in} -> C^{d_out} (x) C^{rank}; K_k = (I (x) <k|) V.
  const Matrix u = haar_unitary(d_out * rank, rng);
  const Matrix v = u.leftCols(d_in);
  std::vector<Matrix> kraus;
  for (int k = 0; k < rank; ++k) {
    Matrix kk(d_out, d_in);
    for (int o = 0; o < d_out; ++o) kk.row(o) = v.row(o * rank + k);
    kraus.push_back(std::move(kk));
  }
  return kraus;
}

Matrix inverse_sqrt(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  const RealVector inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

OneWayChannel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng) {
  if (d_out * kraus_rank < d_in) throw InputError("Kraus rank too small for an isometry");
  return OneWayChannel(random_kraus(d_in, d_out, kraus_rank, rng), d_in, d_out);
}

TwoWayChannel random_two_way_channel(ChannelDims dims, int kraus_rank, Rng& rng) {
  if (dims.out() * kraus_rank < dims.in()) throw InputError("Kraus rank too small for an isometry");
  return TwoWayChannel(random_kraus(dims.in(), dims.out(), kraus_rank, rng), dims);
}

OneWayChannel random_entanglement_breaking(int d_in, int d_out, int outcomes, Rng& rng) {
  if (outcomes < d_in) throw InputError("a rank-one POVM needs at least d_in outcomes");
  std::vector<Vector> vs;
  Matrix frame = Matrix::Zero(d_in, d_in);
  for (int j = 0; j < outcomes; ++j) {
    vs.push_back(haar_vector(d_in, rng));
    frame += vs.back() * vs.back().adjoint();
  }
  const Matrix norm = inverse_sqrt(frame);
  std::vector<Matrix> kraus;
  for (int j = 0; j < outcomes; ++j) {
    const Vector e = norm * vs[static_cast<std::size_t>(j)];
    const Matrix sigma = random_density_matrix(d_out, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
    for (int l = 0; l < d_out; ++l) {
      const double mu = std::max(0.0, es.eigenvalues()(l));
      if (mu <= 0.0) continue;
      kraus.push_back(std::sqrt(mu) * es.eigenvectors().col(l) * e.adjoint());
    }
  }
  return OneWayChannel(std::move(kraus), d_in, d_out);
}

Matrix pauli(int index) {
  Matrix m = Matrix::Zero(2, 2);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw InputError("Pauli index must be 0..3");
  }
  return m;
}

Matrix weyl(int d, int j, int k) {
  Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    x((i + j) % d, i) = 1.0;
    z(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * k * i / d);
  }
  return x * z;
}

}  // namespace biduct::standard
