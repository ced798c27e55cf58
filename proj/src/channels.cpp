#include "biduct/channels.hpp"

#include <algorithm>
#include <cmath>

#include "biduct/errors.hpp"
#include "biduct/tolerances.hpp"

namespace biduct {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_shapes(const std::vector<Matrix>& kraus, int d_in, int d_out) {
  if (kraus.empty()) throw InputError("a channel needs at least one Kraus operator");
  if (d_in < 1 || d_out < 1) throw InputError("channel dimensions must be positive");
  for (std::size_t k = 0; k < kraus.size(); ++k)
    if (kraus[k].rows() != d_out || kraus[k].cols() != d_in)
      throw InputError("Kraus operator " + std::to_string(k) + " has shape " +
                       std::to_string(kraus[k].rows()) + "x" + std::to_string(kraus[k].cols()) +
                       ", expected " + std::to_string(d_out) + "x" + std::to_string(d_in));
}

void check_complete(const std::vector<Matrix>& kraus, int d_in) {
  const double dev = detail::completeness_deviation(kraus, d_in);
  if (dev > tol::kKrausCompleteness) throw InvariantError("Kraus completeness", dev);
}

const ChoiMatrix& cached_choi(const std::shared_ptr<detail::ChoiCache>& cache,
                              const std::vector<Matrix>& kraus, int d_in, int d_out) {
  std::call_once(cache->once, [&] {
    cache->value = std::make_unique<ChoiMatrix>(detail::choi_from_kraus(kraus, d_in, d_out));
  });
  return *cache->value;
}

}  // namespace

namespace detail {

double completeness_deviation(const std::vector<Matrix>& kraus, int d_in) {
  Matrix sum = Matrix::Zero(d_in, d_in);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return (sum - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
}

ChoiMatrix choi_from_kraus(const std::vector<Matrix>& kraus, int d_in, int d_out) {
  const int d = d_in * d_out;
  Matrix j = Matrix::Zero(d, d);
  Vector v(d);
  for (const auto& k : kraus) {
    for (int i = 0; i < d_in; ++i)
      for (int o = 0; o < d_out; ++o) v(i * d_out + o) = k(o, i);
    j += v * v.adjoint();
  }
  return ChoiMatrix(std::move(j), d_in, d_out);
}

}  // namespace detail

ChoiMatrix::ChoiMatrix(Matrix matrix, int d_in, int d_out)
    : matrix_(std::move(matrix)), d_in_(d_in), d_out_(d_out) {
  if (matrix_.rows() != d_in * d_out || matrix_.cols() != d_in * d_out)
    throw InputError("Choi matrix has the wrong dimension");
  const double min_ev = hermitian_eigenvalues(matrix_)(0);
  if (min_ev < -tol::kPsd) throw InvariantError("Choi positivity", -min_ev);
  SubsystemLayout layout({{"in", d_in, Party::Alice}, {"out", d_out, Party::Bob}});
  const std::size_t keep[] = {0};
  const Matrix marginal = partial_trace_matrix(matrix_, layout, keep);
  const double dev = (marginal - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  if (dev > tol::kChoiMarginal) throw InvariantError("Choi output marginal", dev);
}

Matrix ChoiMatrix::partial_transpose_output() const {
  Matrix out(matrix_.rows(), matrix_.cols());
  for (int i = 0; i < d_in_; ++i)
    for (int o = 0; o < d_out_; ++o)
      for (int j = 0; j < d_in_; ++j)
        for (int p = 0; p < d_out_; ++p)
          out(i * d_out_ + o, j * d_out_ + p) = matrix_(i * d_out_ + p, j * d_out_ + o);
  return out;
}

TwoWayChannel::TwoWayChannel(std::vector<Matrix> kraus, ChannelDims dims)
    : kraus_(std::move(kraus)), dims_(dims), choi_(std::make_shared<detail::ChoiCache>()) {
  if (dims_.a_in < 1 || dims_.b_in < 1 || dims_.a_out < 1 || dims_.b_out < 1)
    throw InputError("channel dimensions must be positive");
  check_shapes(kraus_, dims_.in(), dims_.out());
  check_complete(kraus_, dims_.in());
}

TwoWayChannel TwoWayChannel::from_unitary(const Matrix& u, ChannelDims dims) {
  return TwoWayChannel({u}, dims);
}

double TwoWayChannel::completeness_deviation() const {
  return detail::completeness_deviation(kraus_, dims_.in());
}

const ChoiMatrix& TwoWayChannel::choi() const {
  return cached_choi(choi_, kraus_, dims_.in(), dims_.out());
}

OneWayChannel::OneWayChannel(std::vector<Matrix> kraus, int d_in, int d_out)
    : kraus_(std::move(kraus)), d_in_(d_in), d_out_(d_out),
      choi_(std::make_shared<detail::ChoiCache>()) {
  check_shapes(kraus_, d_in_, d_out_);
  check_complete(kraus_, d_in_);
}

OneWayChannel OneWayChannel::from_unitary(const Matrix& u) {
  return OneWayChannel({u}, static_cast<int>(u.cols()), static_cast<int>(u.rows()));
}

double OneWayChannel::completeness_deviation() const {
  return detail::completeness_deviation(kraus_, d_in_);
}

const ChoiMatrix& OneWayChannel::choi() const { return cached_choi(choi_, kraus_, d_in_, d_out_); }

Matrix OneWayChannel::map(const Matrix& rho) const {
  Matrix out = Matrix::Zero(d_out_, d_out_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

Matrix apply_kraus_leading(const std::vector<Matrix>& kraus, const Matrix& rho, int d_in) {
  const auto rest = rho.rows() / d_in;
  const Matrix id = Matrix::Identity(rest, rest);
  const auto d_out = kraus.front().rows();
  Matrix out = Matrix::Zero(d_out * rest, d_out * rest);
  for (const auto& k : kraus) {
    const Matrix lifted = kron(k, id);
    out.noalias() += lifted * rho * lifted.adjoint();
  }
  return out;
}

namespace {

DensityOperator apply_on_labels(const std::vector<Matrix>& kraus, int d_in,
                                const DensityOperator& rho, std::vector<std::string> front,
                                std::vector<int> out_dims) {
  const auto& layout = rho.layout();
  std::vector<std::string> order = front;
  for (const auto& s : layout)
    if (std::find(front.begin(), front.end(), s.label) == front.end()) order.push_back(s.label);
  const DensityOperator moved = permute(rho, order);

  Matrix out = apply_kraus_leading(kraus, moved.matrix(), d_in);
  out = 0.5 * (out + out.adjoint());

  SubsystemLayout out_layout = moved.layout();
  for (std::size_t i = 0; i < front.size(); ++i) out_layout = out_layout.with_dim(front[i], out_dims[i]);
  DensityOperator result(std::move(out), out_layout);
  return permute(result, layout.labels());
}

}  // namespace

DensityOperator apply(const TwoWayChannel& n, const DensityOperator& rho, const std::string& label_a,
                      const std::string& label_b) {
  const auto& layout = rho.layout();
  const auto ia = layout.index_of(label_a);
  const auto ib = layout.index_of(label_b);
  if (ia == ib) throw InputError("channel labels must differ");
  const auto& d = n.dims();
  if (layout[ia].dim != d.a_in || layout[ib].dim != d.b_in)
    throw InputError("channel input dimensions (" + std::to_string(d.a_in) + ", " +
                     std::to_string(d.b_in) + ") do not match subsystems '" + label_a + "' (" +
                     std::to_string(layout[ia].dim) + ") and '" + label_b + "' (" +
                     std::to_string(layout[ib].dim) + ")");
  return apply_on_labels(n.kraus(), d.in(), rho, {label_a, label_b}, {d.a_out, d.b_out});
}

DensityOperator apply(const OneWayChannel& m, const DensityOperator& rho, const std::string& label) {
  const auto i = rho.layout().index_of(label);
  if (rho.layout()[i].dim != m.d_in())
    throw InputError("channel input dimension does not match subsystem '" + label + "'");
  return apply_on_labels(m.kraus(), m.d_in(), rho, {label}, {m.d_out()});
}

TwoWayChannel tensor_channels(const TwoWayChannel& n1, const TwoWayChannel& n2) {
  const auto& d1 = n1.dims();
  const auto& d2 = n2.dims();
  const ChannelDims d{d1.a_in * d2.a_in, d1.b_in * d2.b_in, d1.a_out * d2.a_out,
                      d1.b_out * d2.b_out};
  // (A1 B1 A2 B2) <-> (A1 A2 B1 B2)
  const std::size_t swap_middle[] = {0, 2, 1, 3};
  const int in_dims[] = {d1.a_in, d2.a_in, d1.b_in, d2.b_in};
  const int out_dims[] = {d1.a_out, d1.b_out, d2.a_out, d2.b_out};
  const auto g = permutation_gather(in_dims, swap_middle);
  const auto h = permutation_gather(out_dims, swap_middle);

  std::vector<Matrix> kraus;
  kraus.reserve(n1.kraus().size() * n2.kraus().size());
  for (const auto& k1 : n1.kraus())
    for (const auto& k2 : n2.kraus()) {
      const Matrix kk = kron(k1, k2);
      Matrix k(d.out(), d.in());
      for (int i = 0; i < d.out(); ++i)
        for (int l = 0; l < d.in(); ++l)
          k(i, static_cast<Eigen::Index>(g[static_cast<std::size_t>(l)])) =
              kk(static_cast<Eigen::Index>(h[static_cast<std::size_t>(i)]), l);
      kraus.push_back(std::move(k));
    }
  return TwoWayChannel(std::move(kraus), d);
}

OneWayChannel tensor_channels(const OneWayChannel& m1, const OneWayChannel& m2) {
  std::vector<Matrix> kraus;
  for (const auto& k1 : m1.kraus())
    for (const auto& k2 : m2.kraus()) kraus.push_back(kron(k1, k2));
  return OneWayChannel(std::move(kraus), m1.d_in() * m2.d_in(), m1.d_out() * m2.d_out());
}

TwoWayChannel embed_one_way(const OneWayChannel& m) {
  return TwoWayChannel(m.kraus(), {m.d_in(), 1, 1, m.d_out()});
}

TwoWayChannel embed_classical(const ClassicalTwoWayChannel& w) {
  const auto& al = w.alphabets();
  const ChannelDims d{al.a, al.b, al.a_out, al.b_out};
  std::vector<Matrix> kraus;
  for (int a = 0; a < al.a; ++a)
    for (int b = 0; b < al.b; ++b)
      for (int ap = 0; ap < al.a_out; ++ap)
        for (int bp = 0; bp < al.b_out; ++bp) {
          const double p = w(a, b, ap, bp);
          if (p <= 0.0) continue;
          Matrix k = Matrix::Zero(d.out(), d.in());
          k(ap * al.b_out + bp, a * al.b + b) = std::sqrt(p);
          kraus.push_back(std::move(k));
        }
  return TwoWayChannel(std::move(kraus), d);
}

const char* to_string(EbVerdict v) {
  switch (v) {
    case EbVerdict::EntanglementBreaking: return "EB";
    case EbVerdict::NotEntanglementBreaking: return "NOT_EB";
    case EbVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

EbReport entanglement_breaking_report(const OneWayChannel& m) {
  const Matrix pt = m.choi().partial_transpose_output();
  const double min_ev = hermitian_eigenvalues(pt)(0);
  if (min_ev < -tol::kPpt) return {EbVerdict::NotEntanglementBreaking, min_ev};
  if (m.d_in() * m.d_out() <= 6) return {EbVerdict::EntanglementBreaking, min_ev};
  return {EbVerdict::Inconclusive, min_ev};
}

EbVerdict is_entanglement_breaking(const OneWayChannel& m) {
  return entanglement_breaking_report(m).verdict;
}

}  // namespace biduct
