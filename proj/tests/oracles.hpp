#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXcd;

// Entropy through the general (non-Hermitian) eigensolver.
inline double entropy(const Matrix& rho) {
  Eigen::ComplexEigenSolver<Matrix> es(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i).real();
    if (l > 1e-12) h -= l * std::log2(l);
  }
  return h;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Partial trace by explicit multi-index loops; `keep` lists factor indices
// in increasing order.
inline Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  int dk = 1;
  for (int k : keep) dk *= dims[k];
  const int total = static_cast<int>(rho.rows());
  Matrix out = Matrix::Zero(dk, dk);
  auto digits = [&](int idx) {
    std::vector<int> d(n);
    for (int k = n - 1; k >= 0; --k) {
      d[k] = idx % dims[k];
      idx /= dims[k];
    }
    return d;
  };
  for (int i = 0; i < total; ++i) {
    const auto di = digits(i);
    for (int j = 0; j < total; ++j) {
      const auto dj = digits(j);
      bool traced_equal = true;
      for (int k = 0; k < n && traced_equal; ++k)
        if (std::find(keep.begin(), keep.end(), k) == keep.end() && di[k] != dj[k]) traced_equal = false;
      if (!traced_equal) continue;
      int ki = 0, kj = 0;
      for (int k : keep) {
        ki = ki * dims[k] + di[k];
        kj = kj * dims[k] + dj[k];
      }
      out(ki, kj) += rho(i, j);
    }
  }
  return out;
}

// Capacity of a classical channel W[x][y] (rows sum to one).
inline double blahut_arimoto(const std::vector<std::vector<double>>& w, int iters = 20000) {
  const std::size_t nx = w.size(), ny = w[0].size();
  std::vector<double> p(nx, 1.0 / nx);
  double cap = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> q(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * w[x][y];
    std::vector<double> c(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0) c[x] += w[x][y] * std::log2(w[x][y] / q[y]);
    double z = 0.0, lower = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      z += p[x] * std::exp2(c[x]);
      lower += p[x] * c[x];
    }
    cap = lower;
    for (std::size_t x = 0; x < nx; ++x) p[x] = p[x] * std::exp2(c[x]) / z;
    if (std::log2(z) - lower < 1e-13) break;
  }
  return cap;
}

// I(X;Y|Z) = sum p(x,y,z) log p(x,y,z) p(z) / (p(x,z) p(y,z)), joint[x][y][z]
// flat.
inline double cmi_direct(const std::vector<double>& j, int nx, int ny, int nz) {
  auto at = [&](int x, int y, int z) { return j[(static_cast<std::size_t>(x) * ny + y) * nz + z]; };
  double total = 0.0;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) {
        const double p = at(x, y, z);
        if (p <= 0) continue;
        double pz = 0, pxz = 0, pyz = 0;
        for (int a = 0; a < nx; ++a)
          for (int b = 0; b < ny; ++b) pz += at(a, b, z);
        for (int b = 0; b < ny; ++b) pxz += at(x, b, z);
        for (int a = 0; a < nx; ++a) pyz += at(a, y, z);
        total += p * std::log2(p * pz / (pxz * pyz));
      }
  return total;
}

// Membership in conv({0} and the rectangles [0,x]x[0,y]) via the support
// function over every normal spanned by two corner points plus the axes.
inline bool in_rectangle_hull(const std::vector<std::pair<double, double>>& rects, double x, double y,
                              double tol = 1e-9) {
  if (x < -tol || y < -tol) return false;
  std::vector<std::pair<double, double>> corners{{0, 0}};
  for (auto [a, b] : rects) {
    corners.push_back({a, 0});
    corners.push_back({0, b});
    corners.push_back({a, b});
  }
  std::vector<std::pair<double, double>> normals{{1, 0}, {0, 1}};
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t k = i + 1; k < corners.size(); ++k) {
      const double dx = corners[k].first - corners[i].first, dy = corners[k].second - corners[i].second;
      double nx = -dy, ny = dx;
      if (nx < 0 || ny < 0) {
        nx = -nx;
        ny = -ny;
      }
      if (nx >= 0 && ny >= 0 && (nx > 0 || ny > 0)) {
        const double len = std::hypot(nx, ny);
        normals.push_back({nx / len, ny / len});
      }
    }
  for (auto [nx, ny] : normals) {
    double h = -1e300;
    for (auto [a, b] : corners) h = std::max(h, nx * a + ny * b);
    if (nx * x + ny * y > h + tol) return false;
  }
  return true;
}

// I(A;B'|B) and I(B;A'|A) for the binary multiplying channel with product
// inputs P(a=1)=p, P(b=1)=q, computed from its closed form.
inline std::pair<double, double> bmc_rates(double p, double q) {
  // Bob learns a only when b = 1: I(A;B'|B) = q h(p); symmetrically p h(q).
  return {q * binary_entropy(p), p * binary_entropy(q)};
}

}  // namespace oracle
