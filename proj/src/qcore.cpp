#include "biduct/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "biduct/errors.hpp"
#include "biduct/tolerances.hpp"

namespace biduct {

const char* to_string(Party p) { return p == Party::Alice ? "Alice" : "Bob"; }

Party party_from_string(const std::string& s) {
  if (s == "Alice" || s == "alice" || s == "A") return Party::Alice;
  if (s == "Bob" || s == "bob" || s == "B") return Party::Bob;
  throw InputError("unknown party '" + s + "'");
}

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> systems) : systems_(std::move(systems)) {
  std::set<std::string> seen;
  for (const auto& s : systems_) {
    if (s.dim < 1) throw InputError("subsystem '" + s.label + "' has dimension < 1");
    if (s.label.empty()) throw InputError("empty subsystem label");
    if (!seen.insert(s.label).second) throw InputError("duplicate subsystem label '" + s.label + "'");
  }
}

int SubsystemLayout::total_dim() const noexcept {
  int d = 1;
  for (const auto& s : systems_) d *= s.dim;
  return d;
}

std::vector<int> SubsystemLayout::dims() const {
  std::vector<int> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.dim);
  return out;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> out;
  for (const auto& s : systems_) out.push_back(s.label);
  return out;
}

std::vector<std::string> SubsystemLayout::labels_of(Party p) const {
  std::vector<std::string> out;
  for (const auto& s : systems_)
    if (s.party == p) out.push_back(s.label);
  return out;
}

std::optional<std::size_t> SubsystemLayout::find(const std::string& label) const {
  for (std::size_t i = 0; i < systems_.size(); ++i)
    if (systems_[i].label == label) return i;
  return std::nullopt;
}

std::size_t SubsystemLayout::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) throw InputError("unknown subsystem label '" + label + "'");
  return *i;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Subsystem> all = systems_;
  for (const auto& s : other.systems_) {
    if (contains(s.label)) throw InputError("label collision on '" + s.label + "'");
    all.push_back(s);
  }
  return SubsystemLayout(std::move(all));
}

SubsystemLayout SubsystemLayout::reordered(std::span<const std::string> labels) const {
  if (labels.size() != systems_.size())
    throw InputError("reorder must list every subsystem exactly once");
  std::vector<Subsystem> out;
  for (const auto& l : labels) out.push_back(systems_[index_of(l)]);
  return SubsystemLayout(std::move(out));
}

SubsystemLayout SubsystemLayout::with_dim(const std::string& label, int dim) const {
  auto copy = systems_;
  copy[index_of(label)].dim = dim;
  return SubsystemLayout(std::move(copy));
}

std::vector<std::size_t> permutation_gather(std::span<const int> dims,
                                            std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  std::vector<std::size_t> in_stride(n, 1);
  for (std::size_t j = n; j-- > 1;) in_stride[j - 1] = in_stride[j] * static_cast<std::size_t>(dims[j]);
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);

  std::vector<std::size_t> table(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < n; ++k) src += digit[k] * in_stride[order[k]];
    table[i] = src;
    // increment the row-major counter over the output dims
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < static_cast<std::size_t>(dims[order[k]])) break;
      digit[k] = 0;
    }
  }
  return table;
}

double hermiticity_deviation(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double entropy_of_hermitian(const Matrix& m) {
  const RealVector ev = hermitian_eigenvalues(m);
  double s = 0.0;
  for (double l : ev)
    if (l > tol::kEigenClamp) s -= l * std::log2(l);
  return s;
}

DensityOperator::DensityOperator(Matrix matrix, SubsystemLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  if (matrix_.rows() != matrix_.cols())
    throw InputError("density operator must be square");
  if (matrix_.rows() != layout_.total_dim())
    throw InputError("matrix dimension " + std::to_string(matrix_.rows()) +
                     " does not match layout dimension " + std::to_string(layout_.total_dim()));
  const double herm = hermiticity_deviation(matrix_);
  if (herm > tol::kHermitian) throw InvariantError("hermiticity", herm);
  const cplx tr = matrix_.trace();
  const double tr_dev = std::abs(tr - cplx(1.0, 0.0));
  if (tr_dev > tol::kTrace) throw InvariantError("unit trace", tr_dev);
  const double min_ev = hermitian_eigenvalues(matrix_)(0);
  if (min_ev < -tol::kPsd) throw InvariantError("positive semidefinite", -min_ev);
}

DensityOperator DensityOperator::maximally_mixed(SubsystemLayout layout) {
  const int d = layout.total_dim();
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), std::move(layout));
}

DensityOperator DensityOperator::basis(SubsystemLayout layout, std::size_t index) {
  const int d = layout.total_dim();
  if (index >= static_cast<std::size_t>(d)) throw InputError("basis index out of range");
  Matrix m = Matrix::Zero(d, d);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityOperator(std::move(m), std::move(layout));
}

PureState::PureState(Vector vector, SubsystemLayout layout)
    : vector_(std::move(vector)), layout_(std::move(layout)) {
  if (vector_.size() != layout_.total_dim())
    throw InputError("state vector length does not match layout dimension");
  const double dev = std::abs(vector_.norm() - 1.0);
  if (dev > tol::kPureNorm) throw InvariantError("unit norm", dev);
}

PureState PureState::normalized(Vector vector, SubsystemLayout layout) {
  const double n = vector.norm();
  if (n == 0.0) throw InputError("cannot normalise the zero vector");
  return PureState(vector / n, std::move(layout));
}

DensityOperator PureState::density() const {
  return DensityOperator(vector_ * vector_.adjoint(), layout_);
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix gather_matrix(const Matrix& m, const std::vector<std::size_t>& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = m(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(g[j]));
  return out;
}

Matrix scatter_matrix(const Matrix& m, const std::vector<std::size_t>& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(static_cast<Eigen::Index>(g[i]), static_cast<Eigen::Index>(g[j])) = m(i, j);
  return out;
}

std::vector<std::size_t> order_indices(const SubsystemLayout& layout,
                                       std::span<const std::string> order) {
  if (order.size() != layout.size()) throw InputError("permutation must name every subsystem once");
  std::vector<std::size_t> idx;
  std::set<std::size_t> seen;
  for (const auto& l : order) {
    const auto i = layout.index_of(l);
    if (!seen.insert(i).second) throw InputError("permutation repeats label '" + l + "'");
    idx.push_back(i);
  }
  return idx;
}

}  // namespace

DensityOperator tensor(const DensityOperator& x, const DensityOperator& y) {
  auto layout = x.layout().concat(y.layout());
  return DensityOperator(kron(x.matrix(), y.matrix()), std::move(layout));
}

PureState tensor(const PureState& x, const PureState& y) {
  auto layout = x.layout().concat(y.layout());
  Vector v(x.vector().size() * y.vector().size());
  for (Eigen::Index i = 0; i < x.vector().size(); ++i)
    v.segment(i * y.vector().size(), y.vector().size()) = x.vector()(i) * y.vector();
  return PureState(std::move(v), std::move(layout));
}

Matrix partial_trace_matrix(const Matrix& rho, const SubsystemLayout& layout,
                            std::span<const std::size_t> keep_indices) {
  std::vector<bool> kept(layout.size(), false);
  for (auto k : keep_indices) {
    if (k >= layout.size()) throw InputError("partial trace index out of range");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_sorted(keep_indices.begin(), keep_indices.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());
  keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()), keep_sorted.end());

  std::vector<std::size_t> order;
  std::size_t d_traced = 1, d_kept = 1;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (!kept[i]) {
      order.push_back(i);
      d_traced *= static_cast<std::size_t>(layout[i].dim);
    }
  for (auto i : keep_sorted) {
    order.push_back(i);
    d_kept *= static_cast<std::size_t>(layout[i].dim);
  }
  const auto dims = layout.dims();
  const auto g = permutation_gather(dims, order);

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d_kept), static_cast<Eigen::Index>(d_kept));
  for (std::size_t t = 0; t < d_traced; ++t)
    for (std::size_t c = 0; c < d_kept; ++c) {
      const auto col = static_cast<Eigen::Index>(g[t * d_kept + c]);
      for (std::size_t r = 0; r < d_kept; ++r)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
            rho(static_cast<Eigen::Index>(g[t * d_kept + r]), col);
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep) {
  if (keep.empty()) throw InputError("partial trace must keep at least one subsystem");
  std::vector<std::size_t> idx;
  for (const auto& l : keep) idx.push_back(rho.layout().index_of(l));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw InputError("partial trace keep-set repeats a label");
  std::vector<Subsystem> kept;
  for (auto i : idx) kept.push_back(rho.layout()[i]);
  Matrix m = partial_trace_matrix(rho.matrix(), rho.layout(), idx);
  return DensityOperator(std::move(m), SubsystemLayout(std::move(kept)));
}

DensityOperator partial_trace(const DensityOperator& rho, std::initializer_list<std::string> keep) {
  std::vector<std::string> v(keep);
  return partial_trace(rho, std::span<const std::string>(v));
}

DensityOperator permute(const DensityOperator& rho, std::span<const std::string> order) {
  const auto idx = order_indices(rho.layout(), order);
  const auto g = permutation_gather(rho.layout().dims(), idx);
  return DensityOperator(gather_matrix(rho.matrix(), g), rho.layout().reordered(order));
}

Vector permute_vector(const Vector& v, const SubsystemLayout& layout,
                      std::span<const std::string> order) {
  const auto idx = order_indices(layout, order);
  const auto g = permutation_gather(layout.dims(), idx);
  Vector out(v.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(g[i]));
  return out;
}

DensityOperator reduce_to_party(const DensityOperator& rho, Party p) {
  const auto labels = rho.layout().labels_of(p);
  if (labels.empty())
    throw InputError(std::string("layout has no subsystem owned by ") + to_string(p));
  return partial_trace(rho, std::span<const std::string>(labels));
}

double von_neumann_entropy(const DensityOperator& rho) {
  return entropy_of_hermitian(rho.matrix());
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!(rho.layout() == sigma.layout())) throw InputError("trace distance needs identical layouts");
  const RealVector ev = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return 0.5 * ev.cwiseAbs().sum();
}

void validate_probabilities(std::span<const double> p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0)) throw InputError("probability entry " + std::to_string(i) + " is negative");
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > tol::kProbability)
    throw InputError("probabilities sum to " + std::to_string(sum) + ", not 1");
}

double shannon_entropy(std::span<const double> p) {
  validate_probabilities(p);
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

DensityOperator apply_local_unitary(const DensityOperator& rho, const Matrix& u,
                                    const std::string& label) {
  const auto& layout = rho.layout();
  const auto target = layout.index_of(label);
  const int d = layout[target].dim;
  if (u.rows() != d || u.cols() != d) throw InputError("local unitary has the wrong dimension");
  std::vector<std::size_t> order{target};
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (i != target) order.push_back(i);
  const auto g = permutation_gather(layout.dims(), order);
  const int rest = layout.total_dim() / d;
  const Matrix lifted = kron(u, Matrix::Identity(rest, rest));
  Matrix m = gather_matrix(rho.matrix(), g);
  m = lifted * m * lifted.adjoint();
  return DensityOperator(scatter_matrix(m, g), layout);
}

}  // namespace biduct
