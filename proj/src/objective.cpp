#include "biduct/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biduct/errors.hpp"
#include "biduct/tolerances.hpp"

namespace biduct {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<double> softmax(const double* w, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double mx = *std::max_element(w, w + n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) z += (out[static_cast<std::size_t>(i)] = std::exp(w[i] - mx));
  for (auto& v : out) v /= z;
  return out;
}

// g_w = c * (g_c - <c, g_c>)
void softmax_backward(const std::vector<double>& c, const std::vector<double>& gc, double* gw) {
  double dot = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) dot += c[i] * gc[i];
  for (std::size_t i = 0; i < c.size(); ++i) gw[i] = c[i] * (gc[i] - dot);
}

}  // namespace

PureStateMap::PureStateMap(const SubsystemLayout& in, const TwoWayChannel* channel,
                           const std::string& label_a, const std::string& label_b,
                           std::vector<std::string> keep) {
  const auto dims_in = in.dims();
  const int d_in = in.total_dim();

  // Bring the channel labels to the front, apply K (x) I, and describe the
  // resulting factor order.
  std::vector<std::size_t> order1;
  std::vector<std::string> mid_labels;
  std::vector<int> mid_dims;
  std::vector<Matrix> ops;
  if (channel != nullptr) {
    const auto ia = in.index_of(label_a), ib = in.index_of(label_b);
    const auto& cd = channel->dims();
    if (in[ia].dim != cd.a_in || in[ib].dim != cd.b_in)
      throw InputError("channel input dimensions do not match the layout");
    order1 = {ia, ib};
    mid_labels = {label_a, label_b};
    mid_dims = {cd.a_out, cd.b_out};
    int rest = 1;
    for (std::size_t k = 0; k < in.size(); ++k)
      if (k != ia && k != ib) {
        order1.push_back(k);
        mid_labels.push_back(in[k].label);
        mid_dims.push_back(in[k].dim);
        rest *= in[k].dim;
      }
    const auto g1 = permutation_gather(dims_in, order1);
    std::vector<std::size_t> inv1(g1.size());
    for (std::size_t i = 0; i < g1.size(); ++i) inv1[g1[i]] = i;
    const Matrix id = Matrix::Identity(rest, rest);
    for (const auto& k : channel->kraus()) {
      const Matrix m = kron(k, id);
      Matrix mp(m.rows(), d_in);
      for (int c = 0; c < d_in; ++c) mp.col(c) = m.col(static_cast<Eigen::Index>(inv1[static_cast<std::size_t>(c)]));
      ops.push_back(std::move(mp));
    }
  } else {
    mid_labels = in.labels();
    mid_dims = dims_in;
    ops.push_back(Matrix::Identity(d_in, d_in));
  }

  std::vector<std::size_t> order2;
  for (std::size_t k = 0; k < mid_labels.size(); ++k)
    if (std::find(keep.begin(), keep.end(), mid_labels[k]) == keep.end()) order2.push_back(k);
  const std::size_t traced_count = order2.size();
  for (const auto& l : keep) {
    const auto it = std::find(mid_labels.begin(), mid_labels.end(), l);
    if (it == mid_labels.end()) throw InputError("unknown label to keep: " + l);
    order2.push_back(static_cast<std::size_t>(it - mid_labels.begin()));
  }
  int d_tr = 1;
  out_dim_ = 1;
  for (std::size_t k = 0; k < order2.size(); ++k)
    (k < traced_count ? d_tr : out_dim_) *= mid_dims[order2[k]];
  const auto g2 = permutation_gather(mid_dims, order2);

  count_ = static_cast<int>(ops.size()) * d_tr;
  stacked_.resize(static_cast<Eigen::Index>(count_) * out_dim_, d_in);
  Eigen::Index row = 0;
  for (const auto& op : ops)
    for (std::size_t i = 0; i < g2.size(); ++i) stacked_.row(row++) = op.row(static_cast<Eigen::Index>(g2[i]));
}

Matrix PureStateMap::apply(const Vector& psi) const {
  const Vector w = stacked_ * psi;
  const Eigen::Map<const Matrix> wm(w.data(), out_dim_, count_);
  return wm * wm.adjoint();
}

Matrix PureStateMap::apply_density(const Matrix& rho) const {
  Matrix out = Matrix::Zero(out_dim_, out_dim_);
  for (int j = 0; j < count_; ++j) {
    const auto v = stacked_.middleRows(static_cast<Eigen::Index>(j) * out_dim_, out_dim_);
    out += v * rho * v.adjoint();
  }
  return out;
}

Vector PureStateMap::adjoint_apply(const Matrix& g, const Vector& psi) const {
  const Vector w = stacked_ * psi;
  const Eigen::Map<const Matrix> wm(w.data(), out_dim_, count_);
  const Matrix gw = g * wm;
  const Eigen::Map<const Vector> flat(gw.data(), gw.size());
  return stacked_.adjoint() * flat;
}

double regularized_entropy(const Matrix& x, double eps, Matrix* gradient) {
  const auto d = x.rows();
  const double tr = x.trace().real();
  Matrix xr = (1.0 - eps) * x;
  xr.diagonal().array() += eps * tr / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (xr + xr.adjoint()));
  const RealVector& lam = es.eigenvalues();
  double f = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double l = lam(i);
    if (eps > 0.0 ? l > 0.0 : l > tol::kEigenClamp) f -= l * std::log2(l);
  }
  if (gradient != nullptr) {
    RealVector fp(d);
    for (Eigen::Index i = 0; i < d; ++i) fp(i) = -std::log2(std::max(lam(i), 1e-300)) - kInvLn2;
    Matrix fprime = es.eigenvectors() * fp.asDiagonal() * es.eigenvectors().adjoint();
    const cplx trace_fp = fprime.trace();
    *gradient = (1.0 - eps) * fprime;
    gradient->diagonal().array() += eps * trace_fp / static_cast<double>(d);
  }
  return f;
}

struct EnsembleObjective::Decoded {
  std::vector<double> weights;
  std::vector<Vector> units;
  std::vector<double> norms;
  std::vector<Vector> states;          // canonical order
  std::vector<double> member_p;
};

EnsembleObjective::EnsembleObjective(EnsembleStructure structure, std::vector<ObjectiveTerm> terms)
    : s_(std::move(structure)), terms_(std::move(terms)) {
  if (s_.components.empty()) throw InputError("ensemble structure has no components");
  if (s_.members < 1) throw InputError("ensemble structure needs at least one member");
  std::vector<std::string> xy = s_.x_labels;
  xy.insert(xy.end(), s_.y_labels.begin(), s_.y_labels.end());
  if (xy.size() != s_.layout.size()) throw InputError("X and Y labels must cover the layout");
  const auto xy_layout = s_.layout.reordered(xy);
  std::vector<std::size_t> order;
  for (const auto& l : s_.layout.labels())
    order.push_back(static_cast<std::size_t>(std::find(xy.begin(), xy.end(), l) - xy.begin()));
  to_canonical_ = permutation_gather(xy_layout.dims(), order);

  for (const auto& c : s_.components)
    if (c.member < 0 || c.member >= s_.members) throw InputError("component member index out of range");
  if (s_.weights == WeightScheme::Product) {
    if (s_.product_x * s_.product_y != static_cast<int>(s_.components.size()))
      throw InputError("product weight scheme needs product_x * product_y components");
    weight_params_ = s_.product_x + s_.product_y;
  } else {
    weight_params_ = static_cast<int>(s_.components.size());
  }
  int offset = weight_params_;
  if (s_.fixed_states.empty()) {
    for (int d : s_.block_dims) {
      block_offset_.push_back(offset);
      offset += 2 * d;
    }
  } else if (s_.fixed_states.size() != s_.components.size()) {
    throw InputError("fixed states must match the component count");
  }
  num_parameters_ = offset;
  for (const auto& t : terms_)
    if (t.map.in_dim() != s_.layout.total_dim()) throw InputError("objective map does not match the layout");
}

EnsembleObjective::Decoded EnsembleObjective::decode(const double* x) const {
  Decoded d;
  const std::size_t nc = s_.components.size();
  if (s_.weights == WeightScheme::Product) {
    const auto p = softmax(x, s_.product_x);
    const auto q = softmax(x + s_.product_x, s_.product_y);
    d.weights.resize(nc);
    for (int a = 0; a < s_.product_x; ++a)
      for (int b = 0; b < s_.product_y; ++b)
        d.weights[static_cast<std::size_t>(a * s_.product_y + b)] =
            p[static_cast<std::size_t>(a)] * q[static_cast<std::size_t>(b)];
  } else {
    d.weights = softmax(x, static_cast<int>(nc));
  }
  d.member_p.assign(static_cast<std::size_t>(s_.members), 0.0);
  for (std::size_t c = 0; c < nc; ++c)
    d.member_p[static_cast<std::size_t>(s_.components[c].member)] += d.weights[c];

  if (!s_.fixed_states.empty()) {
    d.states = s_.fixed_states;
    return d;
  }
  for (std::size_t b = 0; b < s_.block_dims.size(); ++b) {
    const int dim = s_.block_dims[b];
    Vector v(dim);
    const double* p = x + block_offset_[b];
    for (int i = 0; i < dim; ++i) v(i) = cplx(p[2 * i], p[2 * i + 1]);
    double n = v.norm();
    if (!(n > 1e-150)) {
      v = Vector::Zero(dim);
      v(0) = 1.0;
      n = 1e-150;
    } else {
      v /= n;
    }
    d.units.push_back(std::move(v));
    d.norms.push_back(n);
  }
  for (const auto& c : s_.components) {
    const Vector& u = d.units[static_cast<std::size_t>(c.x_block)];
    Vector xy = c.y_block < 0 ? u : kron(u, d.units[static_cast<std::size_t>(c.y_block)]);
    Vector canon(xy.size());
    for (std::size_t i = 0; i < to_canonical_.size(); ++i)
      canon(static_cast<Eigen::Index>(i)) = xy(static_cast<Eigen::Index>(to_canonical_[i]));
    d.states.push_back(std::move(canon));
  }
  return d;
}

double EnsembleObjective::evaluate(const double* x, double* grad, double eps) const {
  const Decoded d = decode(x);
  const std::size_t nc = s_.components.size();
  const int dim = s_.layout.total_dim();
  std::vector<double> g_weight(nc, 0.0);
  std::vector<Vector> g_state(nc, Vector::Zero(dim));
  double value = 0.0;

  for (const auto& term : terms_) {
    std::vector<Matrix> images;
    images.reserve(nc);
    for (const auto& psi : d.states) images.push_back(term.map.apply(psi));
    const int od = term.map.out_dim();
    Matrix avg = Matrix::Zero(od, od);
    for (std::size_t c = 0; c < nc; ++c) avg += d.weights[c] * images[c];
    Matrix f_avg;
    double v = regularized_entropy(avg, eps, grad ? &f_avg : nullptr);

    if (term.kind == ObjectiveTerm::Kind::Entropy) {
      value += term.coefficient * v;
      if (grad == nullptr) continue;
      for (std::size_t c = 0; c < nc; ++c) {
        g_weight[c] += term.coefficient * (f_avg.cwiseProduct(images[c].transpose()).sum()).real();
        if (s_.fixed_states.empty())
          g_state[c] += term.coefficient * 2.0 * d.weights[c] * term.map.adjoint_apply(f_avg, d.states[c]);
      }
      continue;
    }

    std::vector<Matrix> member_sum(static_cast<std::size_t>(s_.members), Matrix::Zero(od, od));
    for (std::size_t c = 0; c < nc; ++c)
      member_sum[static_cast<std::size_t>(s_.components[c].member)] += d.weights[c] * images[c];
    std::vector<Matrix> f_member(static_cast<std::size_t>(s_.members));
    for (int i = 0; i < s_.members; ++i) {
      const double p = d.member_p[static_cast<std::size_t>(i)];
      if (!(p > 0.0)) continue;
      v -= regularized_entropy(member_sum[static_cast<std::size_t>(i)], eps,
                               grad ? &f_member[static_cast<std::size_t>(i)] : nullptr);
      v -= p * std::log2(p);
    }
    value += term.coefficient * v;
    if (grad == nullptr) continue;
    for (std::size_t c = 0; c < nc; ++c) {
      const auto i = static_cast<std::size_t>(s_.components[c].member);
      const double p = std::max(d.member_p[i], 1e-300);
      if (f_member[i].size() == 0) continue;
      const Matrix diff = f_avg - f_member[i];
      g_weight[c] += term.coefficient *
                     ((diff.cwiseProduct(images[c].transpose()).sum()).real() - std::log2(p) - kInvLn2);
      if (s_.fixed_states.empty())
        g_state[c] += term.coefficient * 2.0 * d.weights[c] * term.map.adjoint_apply(diff, d.states[c]);
    }
  }

  if (grad == nullptr) return value;
  std::fill(grad, grad + num_parameters_, 0.0);

  if (s_.weights == WeightScheme::Product) {
    const auto p = softmax(x, s_.product_x);
    const auto q = softmax(x + s_.product_x, s_.product_y);
    std::vector<double> gp(p.size(), 0.0), gq(q.size(), 0.0);
    for (int a = 0; a < s_.product_x; ++a)
      for (int b = 0; b < s_.product_y; ++b) {
        const double g = g_weight[static_cast<std::size_t>(a * s_.product_y + b)];
        gp[static_cast<std::size_t>(a)] += g * q[static_cast<std::size_t>(b)];
        gq[static_cast<std::size_t>(b)] += g * p[static_cast<std::size_t>(a)];
      }
    softmax_backward(p, gp, grad);
    softmax_backward(q, gq, grad + s_.product_x);
  } else {
    softmax_backward(d.weights, g_weight, grad);
  }
  if (!s_.fixed_states.empty()) return value;

  std::vector<Vector> g_unit(d.units.size());
  for (std::size_t b = 0; b < d.units.size(); ++b) g_unit[b] = Vector::Zero(d.units[b].size());
  for (std::size_t c = 0; c < nc; ++c) {
    Vector g_xy(dim);
    for (std::size_t i = 0; i < to_canonical_.size(); ++i)
      g_xy(static_cast<Eigen::Index>(to_canonical_[i])) = g_state[c](static_cast<Eigen::Index>(i));
    const auto& comp = s_.components[c];
    if (comp.y_block < 0) {
      g_unit[static_cast<std::size_t>(comp.x_block)] += g_xy;
      continue;
    }
    const Vector& phi = d.units[static_cast<std::size_t>(comp.x_block)];
    const Vector& xi = d.units[static_cast<std::size_t>(comp.y_block)];
    // gt(y, x) = g[x * dy + y]
    const Eigen::Map<const Matrix> gt(g_xy.data(), xi.size(), phi.size());
    g_unit[static_cast<std::size_t>(comp.x_block)] += gt.transpose() * xi.conjugate();
    g_unit[static_cast<std::size_t>(comp.y_block)] += gt * phi.conjugate();
  }
  for (std::size_t b = 0; b < d.units.size(); ++b) {
    const Vector& u = d.units[b];
    const double proj = u.dot(g_unit[b]).real();  // Re(u^dagger g)
    const Vector gv = (g_unit[b] - proj * u) / d.norms[b];
    double* out = grad + block_offset_[b];
    for (Eigen::Index i = 0; i < gv.size(); ++i) {
      out[2 * i] = gv(i).real();
      out[2 * i + 1] = gv(i).imag();
    }
  }
  return value;
}

Ensemble EnsembleObjective::certificate(const double* x) const {
  const Decoded d = decode(x);
  const int dim = s_.layout.total_dim();
  std::vector<Matrix> rho(static_cast<std::size_t>(s_.members), Matrix::Zero(dim, dim));
  for (std::size_t c = 0; c < s_.components.size(); ++c) {
    const auto i = static_cast<std::size_t>(s_.components[c].member);
    rho[i] += d.weights[c] * d.states[c] * d.states[c].adjoint();
  }
  std::vector<EnsembleMember> members;
  for (int i = 0; i < s_.members; ++i) {
    Matrix& r = rho[static_cast<std::size_t>(i)];
    const double p = d.member_p[static_cast<std::size_t>(i)];
    r = 0.5 * (r + r.adjoint());
    const double t = r.trace().real();
    if (t > 0.0) r /= t;
    else r = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    members.push_back({p, DensityOperator(r, s_.layout)});
  }
  return Ensemble(std::move(members));
}

double EnsembleObjective::value_of(const Ensemble& e) const {
  if (!(e.layout() == s_.layout)) throw InputError("ensemble layout does not match the objective");
  double value = 0.0;
  for (const auto& term : terms_) {
    std::vector<Matrix> images;
    Matrix avg = Matrix::Zero(term.map.out_dim(), term.map.out_dim());
    for (const auto& m : e.members()) {
      images.push_back(term.map.apply_density(m.state.matrix()));
      avg += m.p * images.back();
    }
    double v = entropy_of_hermitian(0.5 * (avg + avg.adjoint()));
    if (term.kind == ObjectiveTerm::Kind::Holevo)
      for (std::size_t i = 0; i < images.size(); ++i) {
        const double p = e.members()[i].p;
        if (p > 0.0) v -= p * entropy_of_hermitian(0.5 * (images[i] + images[i].adjoint()));
      }
    value += term.coefficient * v;
  }
  return value;
}

std::vector<double> EnsembleObjective::pack(std::span<const double> logits,
                                            std::span<const Vector> blocks) const {
  if (logits.size() != static_cast<std::size_t>(weight_params_))
    throw InputError("wrong number of weight logits");
  std::vector<double> x(static_cast<std::size_t>(num_parameters_), 0.0);
  std::copy(logits.begin(), logits.end(), x.begin());
  if (!s_.fixed_states.empty()) return x;
  if (blocks.size() != s_.block_dims.size()) throw InputError("wrong number of blocks");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != s_.block_dims[b]) throw InputError("block has the wrong dimension");
    double* out = x.data() + block_offset_[b];
    for (Eigen::Index i = 0; i < blocks[b].size(); ++i) {
      out[2 * i] = blocks[b](i).real();
      out[2 * i + 1] = blocks[b](i).imag();
    }
  }
  return x;
}

Vector EnsembleObjective::canonical_to_xy(const Vector& v) const {
  Vector xy(v.size());
  for (std::size_t i = 0; i < to_canonical_.size(); ++i)
    xy(static_cast<Eigen::Index>(to_canonical_[i])) = v(static_cast<Eigen::Index>(i));
  return xy;
}

}  // namespace biduct
