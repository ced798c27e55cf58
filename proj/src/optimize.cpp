#include "biduct/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <memory>
#include <numeric>
#include <thread>

#include <ceres/ceres.h>

#include "biduct/errors.hpp"
#include "biduct/objective.hpp"
#include "biduct/random.hpp"
#include "biduct/standard_channels.hpp"
#include "biduct/tolerances.hpp"

namespace biduct {

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

Direction direction_from_string(const std::string& s) {
  if (s == "forward" || s == "fwd") return Direction::Forward;
  if (s == "backward" || s == "bwd") return Direction::Backward;
  throw InputError("unknown direction: " + s);
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Arbitrary: return "arbitrary";
    case FamilyKind::Product: return "product";
    case FamilyKind::Separable: return "separable";
    case FamilyKind::ZeroChi: return "zero-chi";
    case FamilyKind::Classical: return "classical";
  }
  return "?";
}

FamilyKind family_from_string(const std::string& s) {
  for (auto k : {FamilyKind::Arbitrary, FamilyKind::Product, FamilyKind::Separable, FamilyKind::ZeroChi,
                 FamilyKind::Classical})
    if (s == to_string(k)) return k;
  throw InputError("unknown ensemble family: " + s);
}

int resolve_threads(const Budget& budget) {
  if (budget.threads > 0) return budget.threads;
  if (const char* env = std::getenv("BIDUCT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SubsystemLayout canonical_layout(int a, int ap, int b, int bp) {
  return SubsystemLayout({{"A", a, Party::Alice},
                          {"Ap", ap, Party::Alice},
                          {"B", b, Party::Bob},
                          {"Bp", bp, Party::Bob}});
}

Ensemble pad_ensemble(const Ensemble& e, const SubsystemLayout& target) {
  const auto& src = e.layout();
  if (src == target) return e;
  if (src.labels() != target.labels()) throw InputError("cannot pad an ensemble onto different labels");
  const auto sd = src.dims(), td = target.dims();
  for (std::size_t k = 0; k < sd.size(); ++k)
    if (sd[k] > td[k]) throw InputError("cannot pad an ensemble onto smaller dimensions");
  const int ds = src.total_dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(ds));
  for (int i = 0; i < ds; ++i) {
    int rem = i;
    Eigen::Index t = 0, stride = 1;
    for (std::size_t k = sd.size(); k-- > 0;) {
      t += static_cast<Eigen::Index>(rem % sd[k]) * stride;
      rem /= sd[k];
      stride *= td[k];
    }
    map[static_cast<std::size_t>(i)] = t;
  }
  std::vector<EnsembleMember> out;
  for (const auto& m : e.members()) {
    Matrix r = Matrix::Zero(target.total_dim(), target.total_dim());
    for (int i = 0; i < ds; ++i)
      for (int j = 0; j < ds; ++j)
        r(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = m.state.matrix()(i, j);
    out.push_back({m.p, DensityOperator(r, target)});
  }
  return Ensemble(std::move(out));
}

namespace {

constexpr double kTinyWeight = 1e-9;

// ---------------------------------------------------------------- structures

int dim_of(const SubsystemLayout& l, const std::vector<std::string>& labels) {
  int d = 1;
  for (const auto& s : labels) d *= l[l.index_of(s)].dim;
  return d;
}

std::vector<Cut> default_cuts() {
  std::vector<Cut> cuts;
  for (int mask = 0; mask < 4; ++mask) {
    Cut c{{"A"}, {"B"}};
    ((mask & 1) ? c.x : c.y).push_back("Ap");
    ((mask & 2) ? c.x : c.y).push_back("Bp");
    cuts.push_back(std::move(c));
  }
  return cuts;
}

Cut party_cut(bool forward) {
  Cut alice{{"A", "Ap"}, {"B", "Bp"}};
  if (forward) return alice;
  return Cut{alice.y, alice.x};
}

EnsembleStructure arbitrary_structure(const SubsystemLayout& l, int m) {
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

EnsembleStructure cut_structure(const SubsystemLayout& l, const Cut& cut) {
  EnsembleStructure s;
  s.layout = l;
  s.x_labels = cut.x;
  s.y_labels = cut.y;
  return s;
}

EnsembleStructure member_product_structure(const SubsystemLayout& l, const Cut& cut, int m, int terms) {
  auto s = cut_structure(l, cut);
  const int dx = dim_of(l, cut.x), dy = dim_of(l, cut.y);
  s.members = m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < terms; ++j) {
      const int b = static_cast<int>(s.block_dims.size());
      s.block_dims.push_back(dx);
      s.block_dims.push_back(dy);
      s.components.push_back({i, b, b + 1});
    }
  return s;
}

EnsembleStructure zero_chi_structure(const SubsystemLayout& l, const Cut& cut, int m) {
  auto s = cut_structure(l, cut);
  const int dx = dim_of(l, cut.x), dy = dim_of(l, cut.y);
  s.members = m;
  for (int i = 0; i < m; ++i) {
    s.block_dims.push_back(dx);
    s.components.push_back({i, i, m});
  }
  s.block_dims.push_back(dy);
  return s;
}

EnsembleStructure ensemble_product_structure(const SubsystemLayout& l, const Cut& cut, int mx, int my) {
  auto s = cut_structure(l, cut);
  const int dx = dim_of(l, cut.x), dy = dim_of(l, cut.y);
  s.members = mx * my;
  s.weights = WeightScheme::Product;
  s.product_x = mx;
  s.product_y = my;
  for (int a = 0; a < mx; ++a) s.block_dims.push_back(dx);
  for (int b = 0; b < my; ++b) s.block_dims.push_back(dy);
  for (int a = 0; a < mx; ++a)
    for (int b = 0; b < my; ++b) s.components.push_back({a * my + b, a, mx + b});
  return s;
}

Vector basis_state(const SubsystemLayout& l, const std::vector<int>& digits) {
  Vector v = Vector::Zero(l.total_dim());
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < l.size(); ++k) idx = idx * l[k].dim + digits[k];
  v(idx) = 1.0;
  return v;
}

EnsembleStructure classical_structure(const SubsystemLayout& l, ProductScope scope) {
  const int na = l[0].dim, nb = l[2].dim;
  if (l[1].dim < na || l[3].dim < nb)
    throw InputError("the classical family needs ancillas at least as large as the inputs");
  EnsembleStructure s;
  s.layout = l;
  s.x_labels = l.labels();
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      s.fixed_states.push_back(basis_state(l, {a, a, b, b}));
      s.components.push_back({a * nb + b, 0, -1});
    }
  s.members = na * nb;
  if (scope == ProductScope::Ensemble) {
    s.weights = WeightScheme::Product;
    s.product_x = na;
    s.product_y = nb;
  }
  return s;
}

struct FamilySetup {
  std::vector<EnsembleStructure> structures;
};

FamilySetup build_family(const SubsystemLayout& l, const EnsembleFamily& f, double lambda, int m, int side) {
  FamilySetup out;
  auto cuts = f.cuts.empty() ? default_cuts() : f.cuts;
  switch (f.kind) {
    case FamilyKind::Arbitrary:
      out.structures.push_back(arbitrary_structure(l, m));
      break;
    case FamilyKind::Product:
      for (const auto& c : cuts)
        out.structures.push_back(f.scope == ProductScope::Ensemble
                                     ? ensemble_product_structure(l, c, side, side)
                                     : member_product_structure(l, c, m, 1));
      break;
    case FamilyKind::Separable:
      for (const auto& c : cuts) out.structures.push_back(member_product_structure(l, c, m, f.separable_terms));
      break;
    case FamilyKind::ZeroChi:
      out.structures.push_back(zero_chi_structure(l, party_cut(lambda >= 0.5), m));
      break;
    case FamilyKind::Classical:
      out.structures.push_back(classical_structure(l, f.scope));
      break;
  }
  return out;
}

// --------------------------------------------------------------- warm starts

// psi(x, y) = u s v^dagger: x part u*s, y part conj(v)
std::pair<Vector, Vector> factor(const Vector& xy, int dx, int dy) {
  Matrix m(dx, dy);
  for (int x = 0; x < dx; ++x)
    for (int y = 0; y < dy; ++y) m(x, y) = xy(static_cast<Eigen::Index>(x) * dy + y);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s = svd.singularValues()(0);
  return {svd.matrixU().col(0) * s, svd.matrixV().col(0).conjugate()};
}

bool same_ray(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  return std::abs(a.dot(b)) / (na * nb) > 1.0 - 1e-9;
}

struct Desired {
  std::vector<double> w;
  std::vector<Vector> psi;  // canonical order
};

std::vector<double> warm_start(const EnsembleObjective& obj, Desired d, Rng& rng) {
  const auto& s = obj.structure();
  // strongest components first
  std::vector<std::size_t> order(d.w.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return d.w[a] > d.w[b]; });
  Desired sorted;
  for (auto i : order) {
    sorted.w.push_back(d.w[i]);
    sorted.psi.push_back(d.psi[i] / d.psi[i].norm());
  }
  d = std::move(sorted);

  std::vector<double> logits(static_cast<std::size_t>(obj.weight_parameters()), std::log(kTinyWeight));
  std::vector<Vector> blocks;
  for (int dim : s.block_dims) blocks.push_back(random_gaussian_vector(dim, rng));

  if (!s.fixed_states.empty()) {
    std::vector<double> joint(s.fixed_states.size(), 0.0);
    for (std::size_t k = 0; k < joint.size(); ++k)
      for (std::size_t i = 0; i < d.w.size(); ++i) joint[k] += d.w[i] * std::norm(s.fixed_states[k].dot(d.psi[i]));
    if (s.weights == WeightScheme::Product) {
      std::vector<double> p(static_cast<std::size_t>(s.product_x), 0.0), q(static_cast<std::size_t>(s.product_y), 0.0);
      for (int a = 0; a < s.product_x; ++a)
        for (int b = 0; b < s.product_y; ++b) {
          p[static_cast<std::size_t>(a)] += joint[static_cast<std::size_t>(a * s.product_y + b)];
          q[static_cast<std::size_t>(b)] += joint[static_cast<std::size_t>(a * s.product_y + b)];
        }
      for (int a = 0; a < s.product_x; ++a) logits[static_cast<std::size_t>(a)] = std::log(p[static_cast<std::size_t>(a)] + kTinyWeight);
      for (int b = 0; b < s.product_y; ++b)
        logits[static_cast<std::size_t>(s.product_x + b)] = std::log(q[static_cast<std::size_t>(b)] + kTinyWeight);
    } else {
      for (std::size_t k = 0; k < joint.size(); ++k) logits[k] = std::log(joint[k] + kTinyWeight);
    }
    return obj.pack(logits, blocks);
  }

  const bool has_y = s.components.front().y_block >= 0;
  const int dx = s.block_dims[static_cast<std::size_t>(s.components.front().x_block)];
  const int dy = has_y ? s.block_dims[static_cast<std::size_t>(s.components.front().y_block)] : 1;

  if (s.weights == WeightScheme::Product) {
    std::vector<Vector> xs, ys;
    std::vector<double> px, qy;
    for (std::size_t i = 0; i < d.psi.size(); ++i) {
      auto [x, y] = factor(obj.canonical_to_xy(d.psi[i]), dx, dy);
      auto place = [&](std::vector<Vector>& list, std::vector<double>& weight, const Vector& v, int cap) {
        for (std::size_t k = 0; k < list.size(); ++k)
          if (same_ray(list[k], v)) {
            weight[k] += d.w[i];
            return;
          }
        if (static_cast<int>(list.size()) < cap) {
          list.push_back(v);
          weight.push_back(d.w[i]);
        }
      };
      place(xs, px, x, s.product_x);
      place(ys, qy, y, s.product_y);
    }
    for (std::size_t a = 0; a < xs.size(); ++a) {
      blocks[a] = xs[a];
      logits[a] = std::log(px[a]);
    }
    for (std::size_t b = 0; b < ys.size(); ++b) {
      blocks[static_cast<std::size_t>(s.product_x) + b] = ys[b];
      logits[static_cast<std::size_t>(s.product_x) + b] = std::log(qy[b]);
    }
    return obj.pack(logits, blocks);
  }

  // joint weights: desired i goes to the first component of member i
  std::vector<int> first(static_cast<std::size_t>(s.members), -1);
  for (std::size_t c = 0; c < s.components.size(); ++c)
    if (first[static_cast<std::size_t>(s.components[c].member)] < 0)
      first[static_cast<std::size_t>(s.components[c].member)] = static_cast<int>(c);
  std::vector<bool> y_set(s.block_dims.size(), false);
  const std::size_t n = std::min(d.psi.size(), static_cast<std::size_t>(s.members));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(first[i]);
    const auto& comp = s.components[c];
    logits[c] = std::log(d.w[i]);
    if (!has_y) {
      blocks[static_cast<std::size_t>(comp.x_block)] = d.psi[i];
      continue;
    }
    auto [x, y] = factor(obj.canonical_to_xy(d.psi[i]), dx, dy);
    blocks[static_cast<std::size_t>(comp.x_block)] = x;
    if (!y_set[static_cast<std::size_t>(comp.y_block)]) {
      blocks[static_cast<std::size_t>(comp.y_block)] = y;
      y_set[static_cast<std::size_t>(comp.y_block)] = true;
    }
  }
  return obj.pack(logits, blocks);
}

Desired from_ensemble(const Ensemble& e) {
  Desired d;
  for (const auto& m : e.members()) {
    if (!(m.p > 0.0)) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.state.matrix());
    const auto k = es.eigenvalues().size() - 1;
    d.w.push_back(m.p * std::max(es.eigenvalues()(k), 0.0));
    d.psi.push_back(es.eigenvectors().col(k));
  }
  return d;
}

// Weyl-encoded halves of a maximally entangled pair on (sender, ancilla).
std::optional<Desired> superdense(const SubsystemLayout& l, const std::string& sender,
                                  const std::string& ancilla) {
  const auto is = l.index_of(sender), ia = l.index_of(ancilla);
  const int d = l[is].dim;
  if (d < 2 || l[ia].dim < d) return std::nullopt;
  Desired out;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const Matrix w = standard::weyl(d, j, k);
      Vector psi = Vector::Zero(l.total_dim());
      for (int s = 0; s < d; ++s)
        for (int r = 0; r < d; ++r) {
          std::vector<int> digits(l.size(), 0);
          digits[is] = s;
          digits[ia] = r;
          psi += w(s, r) * basis_state(l, digits);
        }
      out.w.push_back(1.0 / (d * d));
      out.psi.push_back(psi / std::sqrt(static_cast<double>(d)));
    }
  return out;
}

// Computational basis inputs with copies in the ancillas where they fit.
Desired copy_basis(const SubsystemLayout& l) {
  Desired out;
  const int na = l[0].dim, nb = l[2].dim;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      out.w.push_back(1.0 / (na * nb));
      out.psi.push_back(basis_state(l, {a, l[1].dim >= na ? a : 0, b, l[3].dim >= nb ? b : 0}));
    }
  return out;
}

// ------------------------------------------------------------------- solver

class CeresAdapter final : public ceres::FirstOrderFunction {
 public:
  explicit CeresAdapter(const EnsembleObjective& obj) : obj_(obj) {}
  bool Evaluate(const double* x, double* cost, double* grad) const override {
    const double v = obj_.evaluate(x, grad, tol::kEntropyRegularization);
    *cost = -v;
    if (grad != nullptr)
      for (int i = 0; i < obj_.num_parameters(); ++i) grad[i] = -grad[i];
    return std::isfinite(v);
  }
  int NumParameters() const override { return obj_.num_parameters(); }

 private:
  const EnsembleObjective& obj_;
};

struct RestartOutcome {
  double value = -1e300;
  std::optional<Ensemble> certificate;
  int iterations = 0;
  bool converged = false;
};

RestartOutcome run_restart(const EnsembleObjective& obj, std::vector<double> x, int max_iters) {
  ceres::GradientProblemSolver::Options options;
  options.max_num_iterations = max_iters;
  options.function_tolerance = 1e-13;
  options.gradient_tolerance = 1e-11;
  options.parameter_tolerance = 1e-13;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  ceres::GradientProblem problem(new CeresAdapter(obj));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);

  RestartOutcome out;
  out.iterations = static_cast<int>(summary.iterations.size());
  out.converged = summary.termination_type == ceres::CONVERGENCE;
  auto cert = obj.certificate(x.data());
  out.value = obj.value_of(cert);
  out.certificate = std::move(cert);
  return out;
}

struct PoolResult {
  double value = -1e300;
  std::optional<Ensemble> certificate;
  int best_index = -1;
  int size = 0;
  int iterations = 0;
  int converged = 0;
};

PoolResult run_pool(const EnsembleObjective& obj, const std::vector<std::vector<double>>& warm, int restarts,
                    const Budget& budget, std::uint64_t stream_base) {
  const int size = std::max(restarts, static_cast<int>(warm.size()));
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(size));
  auto work = [&](int r) {
    std::vector<double> x;
    if (r < static_cast<int>(warm.size())) {
      x = warm[static_cast<std::size_t>(r)];
    } else {
      auto rng = make_rng(budget.seed, stream_base + static_cast<std::uint64_t>(r));
      std::normal_distribution<double> nd(0.0, 1.0);
      x.resize(static_cast<std::size_t>(obj.num_parameters()));
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = nd(rng) * (static_cast<int>(i) < obj.weight_parameters() ? 0.5 : 1.0);
    }
    outcomes[static_cast<std::size_t>(r)] = run_restart(obj, std::move(x), budget.max_iters);
  };

  const int threads = std::min(resolve_threads(budget), size);
  if (threads <= 1) {
    for (int r = 0; r < size; ++r) work(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (int r; (r = next++) < size;) work(r);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  PoolResult res;
  res.size = size;
  for (int r = 0; r < size; ++r) {
    auto& o = outcomes[static_cast<std::size_t>(r)];
    res.iterations += o.iterations;
    res.converged += o.converged ? 1 : 0;
    if (o.value > res.value) {  // strict: ties keep the lower index
      res.value = o.value;
      res.certificate = std::move(o.certificate);
      res.best_index = r;
    }
  }
  return res;
}

std::vector<ObjectiveTerm> delta_terms(const TwoWayChannel& n, const SubsystemLayout& l, double lambda) {
  std::vector<ObjectiveTerm> terms;
  const std::vector<std::string> bob{"B", "Bp"}, alice{"A", "Ap"};
  if (lambda > 0.0) {
    terms.push_back({ObjectiveTerm::Kind::Holevo, lambda, PureStateMap(l, &n, "A", "B", bob)});
    terms.push_back({ObjectiveTerm::Kind::Holevo, -lambda, PureStateMap(l, nullptr, "A", "B", bob)});
  }
  if (lambda < 1.0) {
    terms.push_back({ObjectiveTerm::Kind::Holevo, 1.0 - lambda, PureStateMap(l, &n, "A", "B", alice)});
    terms.push_back({ObjectiveTerm::Kind::Holevo, lambda - 1.0, PureStateMap(l, nullptr, "A", "B", alice)});
  }
  return terms;
}

std::string objective_name(double lambda) {
  if (lambda == 1.0) return "delta_chi_forward";
  if (lambda == 0.0) return "delta_chi_backward";
  return "weighted_delta_chi(lambda=" + std::to_string(round12(lambda)) + ")";
}

int default_members(const TwoWayChannel& n) { return n.dims().in() * n.dims().in(); }

struct SolveOutcome {
  double value = -1e300;
  std::optional<Ensemble> certificate;
  int best_restart = -1;
  int restarts = 0;
  int iterations = 0;
  int converged = 0;
};

// Candidate seeds first, then every structure's restart pool.
SolveOutcome solve(const std::vector<EnsembleStructure>& structures,
                   const std::function<std::vector<ObjectiveTerm>(const SubsystemLayout&)>& make_terms,
                   const std::vector<Desired>& extra_warm, std::span<const Ensemble> candidates,
                   const Budget& budget, std::uint64_t stream_base) {
  SolveOutcome out;
  std::vector<std::unique_ptr<EnsembleObjective>> objs;
  for (const auto& s : structures) objs.push_back(std::make_unique<EnsembleObjective>(s, make_terms(s.layout)));

  std::vector<double> seed_values;
  for (const auto& c : candidates) {
    seed_values.push_back(objs.front()->value_of(c));
    if (seed_values.back() > out.value) {
      out.value = seed_values.back();
      out.certificate = c;
    }
  }
  std::vector<std::size_t> top(candidates.size());
  std::iota(top.begin(), top.end(), std::size_t{0});
  std::stable_sort(top.begin(), top.end(), [&](std::size_t i, std::size_t j) { return seed_values[i] > seed_values[j]; });
  if (top.size() > 2) top.resize(2);
  const int per = std::max(1, (budget.restarts + static_cast<int>(structures.size()) - 1) /
                                  static_cast<int>(structures.size()));
  int offset = 0;
  for (std::size_t k = 0; k < objs.size(); ++k) {
    const std::uint64_t base = stream_base + (static_cast<std::uint64_t>(k) << 16);
    auto rng = make_rng(budget.seed, base + 0xffff);
    std::vector<std::vector<double>> warm;
    for (const auto& d : extra_warm) warm.push_back(warm_start(*objs[k], d, rng));
    for (std::size_t c : top) warm.push_back(warm_start(*objs[k], from_ensemble(candidates[c]), rng));
    auto pool = run_pool(*objs[k], warm, per, budget, base);
    if (pool.value > out.value) {
      out.value = pool.value;
      out.certificate = std::move(pool.certificate);
      out.best_restart = offset + pool.best_index;
    }
    offset += pool.size;
    out.restarts += pool.size;
    out.iterations += pool.iterations;
    out.converged += pool.converged;
  }
  return out;
}

OptimizationReport to_report(SolveOutcome s, std::string objective, std::string family) {
  OptimizationReport r;
  if (!s.certificate) throw InputError("optimisation produced no feasible ensemble");
  r.best_value = s.value;
  r.certificate = std::move(s.certificate);
  r.best_restart = s.best_restart;
  r.restarts = s.restarts;
  r.iterations = s.iterations;
  r.converged_fraction = s.restarts > 0 ? static_cast<double>(s.converged) / s.restarts : 0.0;
  r.objective = std::move(objective);
  r.family = std::move(family);
  return r;
}

bool is_embedded_one_way(const TwoWayChannel& n, Direction d) {
  const auto& c = n.dims();
  return d == Direction::Forward ? (c.b_in == 1 && c.a_out == 1) : (c.a_in == 1 && c.b_out == 1);
}

}  // namespace

OptimizationReport maximize_weighted_delta_chi(const TwoWayChannel& n, double lambda,
                                               const EnsembleFamily& family, const Budget& budget,
                                               std::span<const Ensemble> seeds) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in [0, 1]");
  const auto& cd = n.dims();
  int anc_a = family.ancilla_a, anc_b = family.ancilla_b;
  if (family.kind == FamilyKind::Classical) {
    anc_a = std::max(anc_a, cd.a_in);
    anc_b = std::max(anc_b, cd.b_in);
  }
  if (anc_a < 1 || anc_b < 1) throw InputError("ancilla dimensions must be positive");
  const auto layout = canonical_layout(cd.a_in, anc_a, cd.b_in, anc_b);
  const int m = family.members > 0 ? family.members : default_members(n);

  std::vector<Ensemble> candidates;
  for (const auto& s : seeds) candidates.push_back(pad_ensemble(s, layout));

  std::vector<Desired> warm;
  if (lambda > 0.0)
    if (auto sd = superdense(layout, "A", "Bp")) warm.push_back(*sd);
  if (lambda < 1.0)
    if (auto sd = superdense(layout, "B", "Ap")) warm.push_back(*sd);
  warm.push_back(copy_basis(layout));

  const int d = std::max(cd.a_in, cd.b_in);
  const int side = family.members > 0 ? family.members : d * d;
  const auto setup = build_family(layout, family, lambda, m, side);
  auto terms = [&](const SubsystemLayout& l) { return delta_terms(n, l, lambda); };
  const std::uint64_t base = (static_cast<std::uint64_t>(anc_a) << 40) ^ (static_cast<std::uint64_t>(anc_b) << 32);
  auto out = solve(setup.structures, terms, warm, candidates, budget, base);
  auto r = to_report(std::move(out), objective_name(lambda), to_string(family.kind));
  r.delta_forward = delta_chi_forward(n, *r.certificate);
  r.delta_backward = delta_chi_backward(n, *r.certificate);
  r.levels.push_back({anc_a, anc_b, r.best_value});
  return r;
}

OptimizationReport maximize_delta_chi(const TwoWayChannel& n, Direction dir, const EnsembleFamily& family,
                                      const Budget& budget, std::span<const Ensemble> seeds) {
  return maximize_weighted_delta_chi(n, dir == Direction::Forward ? 1.0 : 0.0, family, budget, seeds);
}

OptimizationReport maximize_with_escalation(const TwoWayChannel& n, double lambda,
                                            const EnsembleFamily& family, const Budget& budget,
                                            std::span<const Ensemble> seeds) {
  const auto& cd = n.dims();
  const int d = std::max(cd.a_in, cd.b_in);
  const int levels = std::clamp(budget.ancilla_levels, 1, 3);
  const bool one_way_fwd = lambda == 1.0 && is_embedded_one_way(n, Direction::Forward);
  const bool one_way_bwd = lambda == 0.0 && is_embedded_one_way(n, Direction::Backward);

  std::vector<Ensemble> carry(seeds.begin(), seeds.end());
  std::optional<OptimizationReport> best;
  std::vector<LevelResult> per_level;
  int restarts = 0, iterations = 0;
  double converged = 0.0;
  int r_dim = 1;
  for (int level = 0; level < levels; ++level, r_dim *= d) {
    EnsembleFamily f = family;
    f.ancilla_a = one_way_fwd ? 1 : r_dim;
    f.ancilla_b = one_way_bwd ? 1 : r_dim;
    const auto layout = canonical_layout(cd.a_in, f.ancilla_a, cd.b_in, f.ancilla_b);
    std::vector<Ensemble> level_seeds;
    for (const auto& s : carry) {
      const auto sd = s.layout().dims(), td = layout.dims();
      bool fits = s.layout().labels() == layout.labels();
      for (std::size_t k = 0; fits && k < sd.size(); ++k) fits = sd[k] <= td[k];
      if (fits) level_seeds.push_back(pad_ensemble(s, layout));
    }
    auto r = maximize_weighted_delta_chi(n, lambda, f, budget, level_seeds);
    per_level.push_back({f.ancilla_a, f.ancilla_b, r.best_value});
    restarts += r.restarts;
    iterations += r.iterations;
    converged += r.converged_fraction * r.restarts;
    carry.push_back(*r.certificate);
    if (!best || r.best_value > best->best_value) best = std::move(r);
  }
  best->levels = std::move(per_level);
  best->restarts = restarts;
  best->iterations = iterations;
  best->converged_fraction = restarts > 0 ? converged / restarts : 0.0;
  return std::move(*best);
}

OptimizationReport one_way_capacity(const TwoWayChannel& n, Direction dir, const Budget& budget,
                                    std::span<const Ensemble> seeds) {
  return maximize_with_escalation(n, dir == Direction::Forward ? 1.0 : 0.0, EnsembleFamily{}, budget, seeds);
}

OptimizationReport hsw_capacity(const OneWayChannel& m, const Budget& budget, std::span<const Ensemble> seeds) {
  const auto n = embed_one_way(m);
  EnsembleFamily f;
  f.members = m.d_in() * m.d_in();
  auto r = maximize_delta_chi(n, Direction::Forward, f, budget, seeds);
  r.objective = "holevo_output_chi";
  return r;
}

OptimizationReport restricted_delta_chi(const OneWayChannel& m, FamilyKind kind, const Budget& budget,
                                        std::span<const Ensemble> seeds, int ancilla) {
  if (kind == FamilyKind::Classical) throw InputError("restricted families are separable, product, zero-chi or arbitrary");
  const auto n = embed_one_way(m);
  EnsembleFamily f;
  f.kind = kind;
  f.members = m.d_in() * m.d_in();
  f.ancilla_a = 1;
  f.ancilla_b = ancilla > 0 ? ancilla : m.d_in();
  f.scope = ProductScope::Member;
  f.cuts = {party_cut(true)};
  return maximize_delta_chi(n, Direction::Forward, f, budget, seeds);
}

double bsst_objective(const OneWayChannel& m, const Matrix& rho) {
  const int d = m.d_in();
  if (rho.rows() != d) throw InputError("input state dimension does not match the channel");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  const Matrix sq = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  Vector psi(d * d);
  for (int a = 0; a < d; ++a)
    for (int r = 0; r < d; ++r) psi(a * d + r) = sq(a, r);
  const SubsystemLayout l({{"A", d, Party::Alice}, {"R", d, Party::Alice}});
  const auto joint = PureState::normalized(psi, l).density();
  const auto out = apply(m, joint, "A");
  const std::vector<std::string> keep_a{"A"}, keep_r{"R"};
  return von_neumann_entropy(partial_trace(joint, keep_r)) + von_neumann_entropy(partial_trace(out, keep_a)) -
         von_neumann_entropy(out);
}

OptimizationReport bsst_capacity(const OneWayChannel& m, const Budget& budget, std::span<const Ensemble> seeds) {
  const auto n = embed_one_way(m);
  const int d = m.d_in();
  const auto layout = canonical_layout(d, d, 1, 1);
  EnsembleStructure s = arbitrary_structure(layout, 1);
  auto terms = [&](const SubsystemLayout& l) {
    std::vector<ObjectiveTerm> t;
    t.push_back({ObjectiveTerm::Kind::Entropy, 1.0, PureStateMap(l, nullptr, "A", "B", {"Ap"})});
    t.push_back({ObjectiveTerm::Kind::Entropy, 1.0, PureStateMap(l, &n, "A", "B", {"B"})});
    t.push_back({ObjectiveTerm::Kind::Entropy, -1.0, PureStateMap(l, &n, "A", "B", std::vector<std::string>{"B", "Ap"})});
    return t;
  };
  Desired phi;
  {
    Vector v = Vector::Zero(d * d);
    for (int k = 0; k < d; ++k) v(k * d + k) = 1.0;
    phi.w = {1.0};
    phi.psi = {v / std::sqrt(static_cast<double>(d))};
  }
  std::vector<Ensemble> candidates;
  for (const auto& e : seeds) candidates.push_back(pad_ensemble(e, layout));
  auto out = solve({s}, terms, {phi}, candidates, budget, 0xb557);
  return to_report(std::move(out), "quantum_mutual_information", "pure-input");
}

json report_to_json(const OptimizationReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"ancilla_a", l.ancilla_a}, {"ancilla_b", l.ancilla_b}, {"value", round12(l.value)}});
  json j = {{"objective", r.objective},
            {"family", r.family},
            {"best_value", round12(r.best_value)},
            {"delta_forward", round12(r.delta_forward)},
            {"delta_backward", round12(r.delta_backward)},
            {"restarts", r.restarts},
            {"iterations", r.iterations},
            {"converged_fraction", round12(r.converged_fraction)},
            {"best_restart", r.best_restart},
            {"levels", levels}};
  if (r.certificate) j["certificate"] = ensemble_to_json(*r.certificate);
  return j;
}

}  // namespace biduct
