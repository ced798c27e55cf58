#include "biduct/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>

#include <ceres/ceres.h>

#include "biduct/errors.hpp"
#include "biduct/holevo.hpp"
#include "biduct/random.hpp"

namespace biduct {

RateRectangle shannon_rectangle(const ClassicalTwoWayChannel& w, const JointInputDistribution& d) {
  const auto& al = w.alphabets();
  if (d.p().rows() != al.a || d.p().cols() != al.b) throw InputError("input distribution does not match the channel alphabets");
  const auto [f, b] = shannon_rates(w, d);
  return RateRectangle::clipped(f, b, d.is_product() ? "shannon/product" : "shannon/joint");
}

namespace {

constexpr int kMaxAlphabet = 8;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// lambda I(A;B'|B) + (1 - lambda) I(B;A'|A) as a function of softmax logits.
class ShannonObjective final : public ceres::FirstOrderFunction {
 public:
  ShannonObjective(const ClassicalTwoWayChannel& w, double lambda, bool product)
      : na_(w.alphabets().a), nb_(w.alphabets().b), lambda_(lambda), product_(product) {
    const auto& al = w.alphabets();
    nbo_ = al.b_out;
    nao_ = al.a_out;
    wf_.assign(static_cast<std::size_t>(na_ * nb_ * nbo_), 0.0);
    wb_.assign(static_cast<std::size_t>(na_ * nb_ * nao_), 0.0);
    cf_.assign(static_cast<std::size_t>(na_ * nb_), 0.0);
    cb_.assign(static_cast<std::size_t>(na_ * nb_), 0.0);
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < nb_; ++b) {
        for (int ap = 0; ap < nao_; ++ap)
          for (int bp = 0; bp < nbo_; ++bp) {
            const double v = w(a, b, ap, bp);
            wf_[idx3(a, b, bp, nbo_)] += v;
            wb_[idx3(a, b, ap, nao_)] += v;
          }
        for (int bp = 0; bp < nbo_; ++bp) cf_[a * nb_ + b] += xlog2x(wf_[idx3(a, b, bp, nbo_)]);
        for (int ap = 0; ap < nao_; ++ap) cb_[a * nb_ + b] += xlog2x(wb_[idx3(a, b, ap, nao_)]);
      }
  }

  int NumParameters() const override { return product_ ? na_ + nb_ : na_ * nb_; }

  Eigen::MatrixXd distribution(const double* x) const {
    if (product_) {
      const auto p = softmax(x, na_), q = softmax(x + na_, nb_);
      return Eigen::Map<const Eigen::VectorXd>(p.data(), na_) *
             Eigen::Map<const Eigen::VectorXd>(q.data(), nb_).transpose();
    }
    const auto p = softmax(x, na_ * nb_);
    Eigen::MatrixXd m(na_, nb_);
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < nb_; ++b) m(a, b) = p[static_cast<std::size_t>(a * nb_ + b)];
    return m;
  }

  // Maximised quantity and its gradient with respect to p_ab.
  double value(const Eigen::MatrixXd& p, Eigen::MatrixXd* g) const {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nb_, nbo_);  // p(b, b')
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(na_, nao_);  // p(a, a')
    double lin_f = 0.0, lin_b = 0.0;
    for (int a = 0; a < na_; ++a)
      for (int b = 0; b < nb_; ++b) {
        const double pab = p(a, b);
        lin_f += pab * cf_[a * nb_ + b];
        lin_b += pab * cb_[a * nb_ + b];
        for (int bp = 0; bp < nbo_; ++bp) r(b, bp) += pab * wf_[idx3(a, b, bp, nbo_)];
        for (int ap = 0; ap < nao_; ++ap) s(a, ap) += pab * wb_[idx3(a, b, ap, nao_)];
      }
    const Eigen::VectorXd pb = p.colwise().sum().transpose(), pa = p.rowwise().sum();
    double i_f = lin_f, i_b = lin_b;
    for (int b = 0; b < nb_; ++b) {
      i_f += xlog2x(pb(b));
      for (int bp = 0; bp < nbo_; ++bp) i_f -= xlog2x(r(b, bp));
    }
    for (int a = 0; a < na_; ++a) {
      i_b += xlog2x(pa(a));
      for (int ap = 0; ap < nao_; ++ap) i_b -= xlog2x(s(a, ap));
    }
    if (g != nullptr) {
      g->resize(na_, nb_);
      for (int a = 0; a < na_; ++a)
        for (int b = 0; b < nb_; ++b) {
          double gf = cf_[a * nb_ + b] + (pb(b) > 0.0 ? std::log2(pb(b)) : 0.0);
          for (int bp = 0; bp < nbo_; ++bp) {
            const double wv = wf_[idx3(a, b, bp, nbo_)];
            if (wv > 0.0 && r(b, bp) > 0.0) gf -= wv * std::log2(r(b, bp));
          }
          double gb = cb_[a * nb_ + b] + (pa(a) > 0.0 ? std::log2(pa(a)) : 0.0);
          for (int ap = 0; ap < nao_; ++ap) {
            const double wv = wb_[idx3(a, b, ap, nao_)];
            if (wv > 0.0 && s(a, ap) > 0.0) gb -= wv * std::log2(s(a, ap));
          }
          (*g)(a, b) = lambda_ * gf + (1.0 - lambda_) * gb;
        }
    }
    return lambda_ * i_f + (1.0 - lambda_) * i_b;
  }

  bool Evaluate(const double* x, double* cost, double* grad) const override {
    const auto p = distribution(x);
    Eigen::MatrixXd g;
    const double v = value(p, grad != nullptr ? &g : nullptr);
    *cost = -v;
    if (grad != nullptr) {
      if (product_) {
        const Eigen::VectorXd pa = p.rowwise().sum(), qb = p.colwise().sum().transpose();
        const Eigen::VectorXd ga = g * qb, gb = g.transpose() * pa;
        softmax_backward(pa, ga, grad);
        softmax_backward(qb, gb, grad + na_);
      } else {
        Eigen::VectorXd flat(na_ * nb_), gflat(na_ * nb_);
        for (int a = 0; a < na_; ++a)
          for (int b = 0; b < nb_; ++b) {
            flat(a * nb_ + b) = p(a, b);
            gflat(a * nb_ + b) = g(a, b);
          }
        softmax_backward(flat, gflat, grad);
      }
      for (int i = 0; i < NumParameters(); ++i) grad[i] = -grad[i];
    }
    return std::isfinite(v);
  }

 private:
  std::size_t idx3(int a, int b, int k, int n) const {
    return (static_cast<std::size_t>(a) * nb_ + b) * n + k;
  }

  static std::vector<double> softmax(const double* x, int n) {
    const double mx = *std::max_element(x, x + n);
    std::vector<double> p(static_cast<std::size_t>(n));
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += (p[i] = std::exp(x[i] - mx));
    for (auto& v : p) v /= z;
    return p;
  }

  static void softmax_backward(const Eigen::VectorXd& p, const Eigen::VectorXd& g, double* out) {
    const double mean = p.dot(g);
    for (Eigen::Index i = 0; i < p.size(); ++i) out[i] = p(i) * (g(i) - mean);
  }

  int na_, nb_, nao_ = 1, nbo_ = 1;
  double lambda_;
  bool product_;
  std::vector<double> wf_, wb_, cf_, cb_;
};

std::vector<double> logits_of(const JointInputDistribution& d, bool product) {
  auto safe_log = [](double v) { return std::log(std::max(v, 1e-12)); };
  std::vector<double> x;
  if (product) {
    for (double v : d.marginal_a()) x.push_back(safe_log(v));
    for (double v : d.marginal_b()) x.push_back(safe_log(v));
  } else {
    for (int a = 0; a < d.p().rows(); ++a)
      for (int b = 0; b < d.p().cols(); ++b) x.push_back(safe_log(d.p()(a, b)));
  }
  return x;
}

JointInputDistribution to_distribution(const ShannonObjective& obj, const double* x, bool product) {
  Eigen::MatrixXd p = obj.distribution(x);
  if (product) {
    const Eigen::VectorXd pa = p.rowwise().sum(), qb = p.colwise().sum().transpose();
    std::vector<double> va(pa.data(), pa.data() + pa.size()), vb(qb.data(), qb.data() + qb.size());
    return JointInputDistribution::product_of(va, vb);
  }
  p /= p.sum();
  return JointInputDistribution(p, false);
}

}  // namespace

ClassicalSweepPoint maximize_shannon_weighted(const ClassicalTwoWayChannel& w, double lambda, bool product,
                                              const Budget& budget, const JointInputDistribution* warm) {
  const auto& al = w.alphabets();
  if (al.a > kMaxAlphabet || al.b > kMaxAlphabet || al.a_out > kMaxAlphabet || al.b_out > kMaxAlphabet)
    throw InputError("region sweeps support alphabets of at most 8 symbols");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  auto* obj = new ShannonObjective(w, lambda, product);
  ceres::GradientProblem problem(obj);
  const int n = obj->NumParameters();

  std::vector<std::vector<double>> starts;
  starts.emplace_back(static_cast<std::size_t>(n), 0.0);
  if (warm != nullptr) starts.push_back(logits_of(*warm, product));
  auto rng = make_rng(budget.seed, 0xc1a55);
  std::normal_distribution<double> gauss(0.0, 1.5);
  while (static_cast<int>(starts.size()) < std::max(budget.restarts, 1) + (warm != nullptr ? 1 : 0)) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = gauss(rng);
    starts.push_back(std::move(x));
  }

  ceres::GradientProblemSolver::Options options;
  options.max_num_iterations = budget.max_iters;
  options.function_tolerance = 1e-14;
  options.gradient_tolerance = 1e-12;
  options.parameter_tolerance = 1e-14;
  options.logging_type = ceres::SILENT;

  std::optional<ClassicalSweepPoint> best;
  for (auto& x : starts) {
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, x.data(), &summary);
    auto d = to_distribution(*obj, x.data(), product);
    const auto [f, b] = shannon_rates(w, d);
    const double v = lambda * f + (1.0 - lambda) * b;
    if (!best || v > best->value) best = ClassicalSweepPoint{lambda, std::move(d), v};
  }
  if (warm != nullptr) {
    const auto [f, b] = shannon_rates(w, *warm);
    const double v = lambda * f + (1.0 - lambda) * b;
    if (v > best->value && (!product || warm->is_product())) best = ClassicalSweepPoint{lambda, *warm, v};
  }
  return std::move(*best);
}

namespace {

RateRegion shannon_sweep(const ClassicalTwoWayChannel& w, const Budget& budget, const std::vector<double>& lambdas,
                         bool product, std::vector<JointInputDistribution>* points) {
  if (lambdas.empty()) throw InputError("empty lambda sweep");
  std::vector<RateRectangle> rects;
  std::optional<JointInputDistribution> prev;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    Budget b = budget;
    b.seed = budget.seed * 1000003ULL + k + (product ? 0 : 500);
    const JointInputDistribution* warm = prev ? &*prev : nullptr;
    if (!product && points != nullptr && k < points->size()) warm = &(*points)[k];
    auto pt = maximize_shannon_weighted(w, lambdas[k], product, b, warm);
    auto rect = shannon_rectangle(w, pt.distribution);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s/lambda=%.6g", product ? "product" : "joint", lambdas[k]);
    rect.certificate_id = buf;
    rects.push_back(rect);
    prev = pt.distribution;
    if (product && points != nullptr) points->push_back(std::move(pt.distribution));
  }
  auto r = hull_of_rectangles(rects, product ? RegionKind::ShannonInner : RegionKind::ShannonOuter);
  r.family = product ? "product-distribution" : "joint-distribution";
  r.lambdas = lambdas;
  r.budget = budget_to_json(budget);
  return r;
}

}  // namespace

RateRegion shannon_inner_region(const ClassicalTwoWayChannel& w, const Budget& budget,
                                const std::vector<double>& lambdas, const std::string& channel_id) {
  auto r = shannon_sweep(w, budget, lambdas, true, nullptr);
  r.channel = channel_id;
  return r;
}

RateRegion shannon_outer_region(const ClassicalTwoWayChannel& w, const Budget& budget,
                                const std::vector<double>& lambdas, const std::string& channel_id) {
  std::vector<JointInputDistribution> inner_points;
  auto inner = shannon_sweep(w, budget, lambdas, true, &inner_points);
  auto outer = shannon_sweep(w, budget, lambdas, false, &inner_points);
  auto rects = inner.rectangles;
  rects.insert(rects.end(), outer.rectangles.begin(), outer.rectangles.end());
  auto r = hull_of_rectangles(rects, RegionKind::ShannonOuter);
  r.family = outer.family;
  r.lambdas = lambdas;
  r.budget = outer.budget;
  r.channel = channel_id;
  return r;
}

Ensemble classical_input_ensemble(const JointInputDistribution& d) {
  const int na = static_cast<int>(d.p().rows()), nb = static_cast<int>(d.p().cols());
  const auto layout = canonical_layout(na, na, nb, nb);
  std::vector<EnsembleMember> members;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      if (d.p()(a, b) <= 0.0) continue;
      const std::size_t index = ((static_cast<std::size_t>(a) * na + a) * nb + b) * nb + b;
      members.push_back({d.p()(a, b), DensityOperator::basis(layout, index)});
    }
  return Ensemble(std::move(members));
}

ConsistencyResult classical_consistency(const ClassicalTwoWayChannel& w, const JointInputDistribution& d) {
  const auto& al = w.alphabets();
  if (d.p().rows() != al.a || d.p().cols() != al.b) throw InputError("input distribution does not match the channel alphabets");
  if (al.a * al.b * al.a_out * al.b_out > 64)
    throw InputError("consistency check limited to a * b * a' * b' <= 64");
  const auto n = embed_classical(w);
  const auto e = classical_input_ensemble(d);
  const auto [cf, cb] = shannon_rates(w, d);
  ConsistencyResult r;
  r.delta_forward = delta_chi_forward(n, e);
  r.delta_backward = delta_chi_backward(n, e);
  r.cmi_forward = cf;
  r.cmi_backward = cb;
  r.deviation = std::max(std::abs(r.delta_forward - cf), std::abs(r.delta_backward - cb));
  return r;
}

double classical_consistency_check(const ClassicalTwoWayChannel& w, const JointInputDistribution& d) {
  return classical_consistency(w, d).deviation;
}

}  // namespace biduct
