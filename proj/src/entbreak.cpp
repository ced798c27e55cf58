#include "biduct/entbreak.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "biduct/errors.hpp"
#include "biduct/holevo.hpp"
#include "biduct/standard_channels.hpp"

namespace biduct {

namespace {

SubsystemLayout single(const std::string& label, int d) { return SubsystemLayout({{label, d, Party::Alice}}); }

}  // namespace

LemmaStarRoutes lemma_star_routes(std::span<const double> p, std::span<const Matrix> sigmas,
                                  std::span<const Matrix> etas) {
  if (p.empty() || sigmas.size() != p.size() || etas.size() != p.size())
    throw InputError("lemma check needs matching, non-empty lists of weights and states");
  validate_probabilities(p);
  const int ds = static_cast<int>(sigmas[0].rows()), de = static_cast<int>(etas[0].rows());
  const auto ls = single("S", ds), le = single("E", de);
  const std::size_t n = p.size();

  std::vector<DensityOperator> sig, eta;
  for (std::size_t i = 0; i < n; ++i) {
    if (sigmas[i].rows() != ds || etas[i].rows() != de) throw InputError("states must share one dimension per side");
    sig.emplace_back(sigmas[i], ls);
    eta.emplace_back(etas[i], le);
  }

  LemmaStarRoutes r{};
  {
    Matrix joint = Matrix::Zero(ds * de, ds * de), avg = Matrix::Zero(ds, ds);
    double mean_eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      joint += p[i] * Eigen::kroneckerProduct(sig[i].matrix(), eta[i].matrix()).eval();
      avg += p[i] * sig[i].matrix();
      mean_eta += p[i] * von_neumann_entropy(eta[i]);
    }
    r.direct = entropy_of_hermitian(joint) - entropy_of_hermitian(avg) - mean_eta;
  }
  {
    std::vector<EnsembleMember> e1, e2;
    for (std::size_t i = 0; i < n; ++i) {
      e1.push_back({p[i], sig[i]});
      e2.push_back({p[i], tensor(sig[i], eta[i])});
    }
    r.holevo = holevo_chi(Ensemble(std::move(e2))) - holevo_chi(Ensemble(std::move(e1)));
  }
  {
    const int dc = static_cast<int>(n);
    Matrix rho = Matrix::Zero(ds * de * dc, ds * de * dc);
    for (std::size_t i = 0; i < n; ++i) {
      Matrix flag = Matrix::Zero(dc, dc);
      flag(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
      rho += p[i] * Eigen::kroneckerProduct(tensor(sig[i], eta[i]).matrix(), flag).eval();
    }
    r.ssa = ssa_gap(rho, ds, de, dc);
  }
  return r;
}

double lemma_star_check(std::span<const double> p, std::span<const Matrix> sigmas, std::span<const Matrix> etas) {
  return lemma_star_routes(p, sigmas, etas).direct;
}

double ssa_gap(const Matrix& rho_abc, int da, int db, int dc) {
  const SubsystemLayout l({{"A", da, Party::Alice}, {"B", db, Party::Alice}, {"C", dc, Party::Alice}});
  const DensityOperator rho(rho_abc, l);
  const std::vector<std::string> ab{"A", "B"}, ac{"A", "C"}, a{"A"};
  return von_neumann_entropy(partial_trace(rho, ab)) + von_neumann_entropy(partial_trace(rho, ac)) -
         von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, a));
}

CollapseReport family_collapse_check(const OneWayChannel& m, const Budget& budget) {
  CollapseReport r;
  r.verdict = is_entanglement_breaking(m);
  const auto z = restricted_delta_chi(m, FamilyKind::ZeroChi, budget);
  const std::vector<Ensemble> zs{*z.certificate};
  const auto p = restricted_delta_chi(m, FamilyKind::Product, budget, zs);
  const std::vector<Ensemble> ps{*p.certificate};
  const auto s = restricted_delta_chi(m, FamilyKind::Separable, budget, ps);
  r.zero_chi = z.best_value;
  r.product = p.best_value;
  r.separable = s.best_value;
  r.nesting_holds = r.zero_chi <= r.product && r.product <= r.separable;
  r.spread = std::max({r.zero_chi, r.product, r.separable}) - std::min({r.zero_chi, r.product, r.separable});
  return r;
}

NegativeControl assisted_gap_control(const OneWayChannel& m, const Budget& budget) {
  const auto z = restricted_delta_chi(m, FamilyKind::ZeroChi, budget);
  const std::vector<Ensemble> zs{*z.certificate};
  const auto a = one_way_capacity(embed_one_way(m), Direction::Forward, budget, zs);
  return {z.best_value, a.best_value, a.best_value - z.best_value};
}

const char* to_string(AdditivityMode m) { return m == AdditivityMode::Ea ? "EA" : "HOLEVO_EB"; }

AdditivityMode additivity_mode_from_string(const std::string& s) {
  if (s == "EA" || s == "ea") return AdditivityMode::Ea;
  if (s == "HOLEVO_EB" || s == "holevo-eb" || s == "holevo_eb") return AdditivityMode::HolevoEb;
  throw InputError("unknown additivity mode: " + s);
}

namespace {

// Members (i, j) with weight p_i q_j and state rho_i (x) eta_j, with the two
// factors' subsystems interleaved label by label: A1 A2, Ap1 Ap2, ...
Ensemble product_certificate(const Ensemble& e1, const Ensemble& e2) {
  const auto d1 = e1.layout().dims(), d2 = e2.layout().dims();
  const std::size_t k = d1.size();
  std::vector<int> dims;
  for (auto v : d1) dims.push_back(v);
  for (auto v : d2) dims.push_back(v);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < k; ++i) {
    order.push_back(i);
    order.push_back(k + i);
  }
  const auto table = permutation_gather(dims, order);
  std::vector<Subsystem> merged;
  for (std::size_t i = 0; i < k; ++i) {
    auto s = e1.layout()[i];
    s.dim = d1[i] * d2[i];
    merged.push_back(s);
  }
  const SubsystemLayout layout(merged);
  std::vector<EnsembleMember> out;
  for (const auto& a : e1.members())
    for (const auto& b : e2.members()) {
      const Matrix kron = Eigen::kroneckerProduct(a.state.matrix(), b.state.matrix()).eval();
      const auto n = static_cast<Eigen::Index>(table.size());
      Matrix r(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          r(i, j) = kron(static_cast<Eigen::Index>(table[i]), static_cast<Eigen::Index>(table[j]));
      out.push_back({a.p * b.p, DensityOperator(r, layout)});
    }
  return Ensemble(std::move(out));
}

}  // namespace

AdditivityReport additivity_check(const OneWayChannel& m1, const OneWayChannel& m2, AdditivityMode mode,
                                  const Budget& budget, bool cross_check) {
  AdditivityReport r;
  r.mode = mode;
  r.budget = json{{"restarts", budget.restarts}, {"max_iters", budget.max_iters}, {"seed", budget.seed},
                  {"ancilla_levels", budget.ancilla_levels}};
  const auto joint_channel = tensor_channels(m1, m2);
  if (mode == AdditivityMode::HolevoEb) {
    for (const auto* m : {&m1, &m2})
      if (is_entanglement_breaking(*m) != EbVerdict::EntanglementBreaking)
        throw InputError("HOLEVO_EB additivity requires entanglement-breaking channels");
    const auto a = hsw_capacity(m1, budget);
    const auto b = hsw_capacity(m2, budget);
    const std::vector<Ensemble> seed{product_certificate(*a.certificate, *b.certificate)};
    const auto j = hsw_capacity(joint_channel, budget, seed);
    r.r1 = a.best_value;
    r.r2 = b.best_value;
    r.joint = j.best_value;
  } else {
    const auto a = bsst_capacity(m1, budget);
    const auto b = bsst_capacity(m2, budget);
    const std::vector<Ensemble> seed{product_certificate(*a.certificate, *b.certificate)};
    const auto j = bsst_capacity(joint_channel, budget, seed);
    r.r1 = a.best_value;
    r.r2 = b.best_value;
    r.joint = j.best_value;
    if (cross_check) {
      r.one_way_1 = one_way_capacity(embed_one_way(m1), Direction::Forward, budget).best_value;
      r.one_way_2 = one_way_capacity(embed_one_way(m2), Direction::Forward, budget).best_value;
      r.cross_check_gap = std::max(std::abs(r.one_way_1 - r.r1), std::abs(r.one_way_2 - r.r2));
    }
  }
  r.gap = r.joint - (r.r1 + r.r2);
  return r;
}

json to_json(const CollapseReport& r) {
  return {{"zero_chi", round12(r.zero_chi)},
          {"product", round12(r.product)},
          {"separable", round12(r.separable)},
          {"spread", round12(r.spread)},
          {"nesting_holds", r.nesting_holds},
          {"eb_verdict", to_string(r.verdict)}};
}

json to_json(const NegativeControl& r) {
  return {{"zero_chi", round12(r.zero_chi)}, {"assisted", round12(r.assisted)}, {"gap", round12(r.gap)}};
}

json to_json(const AdditivityReport& r) {
  json j = {{"mode", to_string(r.mode)},
            {"channel_1", r.channel_1},
            {"channel_2", r.channel_2},
            {"r1", round12(r.r1)},
            {"r2", round12(r.r2)},
            {"joint", round12(r.joint)},
            {"superadditivity_gap", round12(r.gap)},
            {"budget", r.budget}};
  if (r.mode == AdditivityMode::Ea)
    j["cross_check"] = {{"one_way_1", round12(r.one_way_1)},
                        {"one_way_2", round12(r.one_way_2)},
                        {"max_gap", round12(r.cross_check_gap)}};
  return j;
}

}  // namespace biduct
