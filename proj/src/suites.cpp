#include "biduct/suites.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <thread>

#include "biduct/classical.hpp"
#include "biduct/entbreak.hpp"
#include "biduct/errors.hpp"
#include "biduct/random.hpp"
#include "biduct/standard_channels.hpp"

namespace biduct {

namespace {

constexpr double kSlack = 1e-10;
constexpr double kRoutes = 1e-9;
constexpr double kConsistency = 1e-9;
constexpr double kAdditivity = 2e-2;
constexpr double kSpread = 2e-2;
constexpr double kNegativeGap = 0.5;

struct Common {
  std::uint64_t seed;
  int instances;
  Budget budget;
};

Common common(const json& c, int default_instances) {
  if (!c.contains("seed") || !c["seed"].is_number_integer() || c["seed"].get<std::int64_t>() < 0)
    throw InputError("suite config needs a non-negative integer \"seed\"");
  Common out;
  out.seed = c["seed"].get<std::uint64_t>();
  out.instances = c.value("instances", default_instances);
  if (out.instances < 1) throw InputError("\"instances\" must be positive");
  out.budget = budget_from_json(c.value("budget", json::object()), out.seed);
  return out;
}

std::vector<int> int_list(const json& c, const char* key, std::vector<int> fallback) {
  if (!c.contains(key)) return fallback;
  auto v = c[key].get<std::vector<int>>();
  if (v.empty()) throw InputError(std::string("\"") + key + "\" must not be empty");
  for (int x : v)
    if (x < 1) throw InputError(std::string("\"") + key + "\" entries must be positive");
  return v;
}

template <class T>
T pick(const std::vector<T>& v, Rng& rng) {
  std::uniform_int_distribution<std::size_t> u(0, v.size() - 1);
  return v[u(rng)];
}

int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Runs body(i) for every instance; results are written by index so the
// report order never depends on scheduling.
void parallel_for(int n, const Budget& budget, const std::function<void(int)>& body) {
  const int workers = std::min(n, resolve_threads(budget));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Budget instance_budget(const Budget& b, int i) {
  Budget out = b;
  out.seed = b.seed * 1000003ULL + static_cast<std::uint64_t>(i);
  return out;
}

SuiteResult finish(const std::string& name, const json& config, std::vector<json> rows, std::vector<char> bad,
                   json summary) {
  SuiteResult r;
  json instances = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i]["id"] = i;
    rows[i]["ok"] = !bad[i];
    if (bad[i]) ++r.violations;
    instances.push_back(std::move(rows[i]));
  }
  summary["instances"] = rows.size();
  summary["violations"] = r.violations;
  summary["ok"] = r.violations == 0;
  r.report = {{"suite", name}, {"config", config}, {"instances", instances}, {"summary", summary}};
  return r;
}

SuiteResult lemma_star(const json& c) {
  const auto cm = common(c, 1000);
  const auto dims = int_list(c, "dims", {2, 3}), members = int_list(c, "members", {2, 3, 4});
  std::vector<json> rows(static_cast<std::size_t>(cm.instances));
  std::vector<char> bad(rows.size());
  std::vector<double> slack(rows.size()), disagreement(rows.size());
  parallel_for(cm.instances, cm.budget, [&](int i) {
    auto rng = make_rng(cm.seed, static_cast<std::uint64_t>(i));
    const int ds = pick(dims, rng), de = pick(dims, rng), n = pick(members, rng);
    const auto p = random_probabilities(static_cast<std::size_t>(n), rng);
    std::vector<Matrix> sig, eta;
    for (int k = 0; k < n; ++k) {
      sig.push_back(random_density_matrix(ds, rng, uniform_int(1, ds, rng)));
      eta.push_back(random_density_matrix(de, rng, uniform_int(1, de, rng)));
    }
    const auto r = lemma_star_routes(p, sig, eta);
    const auto k = static_cast<std::size_t>(i);
    slack[k] = r.direct;
    disagreement[k] = std::max(std::abs(r.direct - r.holevo), std::abs(r.direct - r.ssa));
    bad[k] = r.direct < -kSlack || disagreement[k] > kRoutes;
    rows[k] = {{"dims", {ds, de}},         {"members", n},
               {"slack", round12(r.direct)}, {"slack_holevo", round12(r.holevo)},
               {"slack_ssa", round12(r.ssa)}, {"route_disagreement", round12(disagreement[k])}};
  });
  json summary = {{"min_slack", round12(*std::min_element(slack.begin(), slack.end()))},
                  {"max_route_disagreement", round12(*std::max_element(disagreement.begin(), disagreement.end()))},
                  {"slack_tolerance", kSlack},
                  {"route_tolerance", kRoutes}};
  return finish("lemma-star", c, std::move(rows), std::move(bad), summary);
}

SuiteResult ssa(const json& c) {
  const auto cm = common(c, 200);
  const auto dims = int_list(c, "dims", {2, 3});
  std::vector<json> rows(static_cast<std::size_t>(cm.instances));
  std::vector<char> bad(rows.size());
  std::vector<double> gaps(rows.size());
  parallel_for(cm.instances, cm.budget, [&](int i) {
    auto rng = make_rng(cm.seed, static_cast<std::uint64_t>(i));
    const int da = pick(dims, rng), db = pick(dims, rng), dc = pick(dims, rng);
    const int d = da * db * dc;
    const Matrix rho = random_density_matrix(d, rng, uniform_int(1, d, rng));
    const auto k = static_cast<std::size_t>(i);
    gaps[k] = ssa_gap(rho, da, db, dc);
    bad[k] = gaps[k] < -kSlack;
    rows[k] = {{"dims", {da, db, dc}}, {"gap", round12(gaps[k])}};
  });
  json summary = {{"min_gap", round12(*std::min_element(gaps.begin(), gaps.end()))}, {"tolerance", kSlack}};
  return finish("ssa", c, std::move(rows), std::move(bad), summary);
}

SuiteResult consistency(const json& c) {
  const auto cm = common(c, 50);
  const int max_alphabet = c.value("max_alphabet", 3);
  if (max_alphabet < 2) throw InputError("\"max_alphabet\" must be at least 2");
  std::vector<json> rows(static_cast<std::size_t>(cm.instances));
  std::vector<char> bad(rows.size());
  std::vector<double> dev(rows.size());
  parallel_for(cm.instances, cm.budget, [&](int i) {
    auto rng = make_rng(cm.seed, static_cast<std::uint64_t>(i));
    Alphabets al;
    do {
      al = {uniform_int(2, max_alphabet, rng), uniform_int(2, max_alphabet, rng), uniform_int(2, max_alphabet, rng),
            uniform_int(2, max_alphabet, rng)};
    } while (al.a * al.b * al.a_out * al.b_out > 64);
    const auto w = random_classical_channel(al, rng);
    const bool product = i % 2 == 1;
    std::optional<JointInputDistribution> d;
    if (product) {
      const auto pa = random_probabilities(static_cast<std::size_t>(al.a), rng);
      const auto qb = random_probabilities(static_cast<std::size_t>(al.b), rng);
      d = JointInputDistribution::product_of(pa, qb);
    } else {
      const auto flat = random_probabilities(static_cast<std::size_t>(al.a * al.b), rng);
      Eigen::MatrixXd p(al.a, al.b);
      for (int a = 0; a < al.a; ++a)
        for (int b = 0; b < al.b; ++b) p(a, b) = flat[static_cast<std::size_t>(a * al.b + b)];
      p /= p.sum();
      d = JointInputDistribution(p);
    }
    const auto r = classical_consistency(w, *d);
    const auto k = static_cast<std::size_t>(i);
    dev[k] = r.deviation;
    bad[k] = r.deviation > kConsistency;
    rows[k] = {{"alphabets", {al.a, al.b, al.a_out, al.b_out}},
               {"product_inputs", product},
               {"delta_forward", round12(r.delta_forward)},
               {"delta_backward", round12(r.delta_backward)},
               {"cmi_forward", round12(r.cmi_forward)},
               {"cmi_backward", round12(r.cmi_backward)},
               {"deviation", round12(r.deviation)}};
  });
  json summary = {{"max_deviation", round12(*std::max_element(dev.begin(), dev.end()))},
                  {"tolerance", kConsistency}};
  return finish("consistency", c, std::move(rows), std::move(bad), summary);
}

OneWayChannel random_qubit_channel(Rng& rng) { return standard::random_channel(2, 2, uniform_int(1, 4, rng), rng); }

OneWayChannel random_measure_prepare(Rng& rng) {
  return standard::random_entanglement_breaking(2, 2, uniform_int(2, 4, rng), rng);
}

SuiteResult additivity(const json& c) {
  const auto cm = common(c, 20);
  const auto mode = additivity_mode_from_string(c.value("mode", std::string("EA")));
  const bool cross = c.value("cross_check", true);
  std::vector<json> rows;
  std::vector<char> bad;
  double worst = 0.0, worst_cross = 0.0;
  for (int i = 0; i < cm.instances; ++i) {
    auto rng = make_rng(cm.seed, static_cast<std::uint64_t>(i));
    const bool eb = mode == AdditivityMode::HolevoEb;
    const auto m1 = eb ? random_measure_prepare(rng) : random_qubit_channel(rng);
    const auto m2 = eb ? random_measure_prepare(rng) : random_qubit_channel(rng);
    auto r = additivity_check(m1, m2, mode, instance_budget(cm.budget, i), cross);
    r.channel_1 = "random-" + std::to_string(i) + "a";
    r.channel_2 = "random-" + std::to_string(i) + "b";
    worst = std::max(worst, std::abs(r.gap));
    worst_cross = std::max(worst_cross, r.cross_check_gap);
    bad.push_back(std::abs(r.gap) > kAdditivity);
    rows.push_back(to_json(r));
  }
  json summary = {{"mode", to_string(mode)}, {"max_abs_gap", round12(worst)}, {"tolerance", kAdditivity}};
  if (mode == AdditivityMode::Ea && cross) summary["max_cross_check_gap"] = round12(worst_cross);
  return finish("additivity", c, std::move(rows), std::move(bad), summary);
}

SuiteResult collapse(const json& c) {
  const auto cm = common(c, 10);
  std::vector<json> rows;
  std::vector<char> bad;
  double worst = 0.0;
  for (int i = 0; i < cm.instances; ++i) {
    auto rng = make_rng(cm.seed, static_cast<std::uint64_t>(i));
    const auto m = random_measure_prepare(rng);
    const auto r = family_collapse_check(m, instance_budget(cm.budget, i));
    worst = std::max(worst, r.spread);
    bad.push_back(r.spread > kSpread || !r.nesting_holds);
    rows.push_back(to_json(r));
  }
  json summary = {{"max_spread", round12(worst)}, {"tolerance", kSpread}};
  if (c.value("negative_control", true)) {
    const auto ctl = assisted_gap_control(standard::identity(2), instance_budget(cm.budget, cm.instances));
    auto row = to_json(ctl);
    row["channel"] = "identity-qubit";
    row["negative_control"] = true;
    bad.push_back(ctl.gap < kNegativeGap);
    rows.push_back(row);
    summary["negative_control_gap"] = round12(ctl.gap);
    summary["negative_control_threshold"] = kNegativeGap;
  }
  return finish("collapse", c, std::move(rows), std::move(bad), summary);
}

}  // namespace

std::vector<std::string> suite_names() { return {"lemma-star", "ssa", "consistency", "additivity", "collapse"}; }

Budget budget_from_json(const json& j, std::uint64_t seed) {
  if (!j.is_object()) throw InputError("\"budget\" must be an object");
  Budget b;
  b.seed = seed;
  b.restarts = j.value("restarts", b.restarts);
  b.max_iters = j.value("max_iters", b.max_iters);
  b.ancilla_levels = j.value("ancilla_levels", b.ancilla_levels);
  b.threads = j.value("threads", b.threads);
  if (b.restarts < 1 || b.max_iters < 1 || b.ancilla_levels < 1 || b.threads < 0)
    throw InputError("budget entries must be positive");
  return b;
}

SuiteResult run_suite(const std::string& name, const json& config) {
  try {
    if (!config.is_object()) throw InputError("suite config must be a JSON object");
    if (name == "lemma-star") return lemma_star(config);
    if (name == "ssa") return ssa(config);
    if (name == "consistency") return consistency(config);
    if (name == "additivity") return additivity(config);
    if (name == "collapse") return collapse(config);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed suite config: ") + e.what());
  }
  throw InputError("unknown suite: " + name);
}

}  // namespace biduct
