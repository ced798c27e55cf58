// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "biduct/classical.hpp"
#include "biduct/entbreak.hpp"
#include "biduct/holevo.hpp"
#include "biduct/optimize.hpp"
#include "biduct/region.hpp"
#include "biduct/standard_channels.hpp"
#include "biduct/suites.hpp"
#include "oracles.hpp"

using namespace biduct;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Budget default_budget(std::uint64_t seed) {
  Budget b;
  b.seed = seed;
  return b;
}

Budget small_budget(std::uint64_t seed) {
  Budget b;
  b.seed = seed;
  b.restarts = 4;
  b.max_iters = 200;
  b.ancilla_levels = 2;
  return b;
}

Outcome suite_outcome(const std::string& name, json config, const std::string& key) {
  const auto r = run_suite(name, config);
  const auto& s = r.report["summary"];
  std::string detail = "violations=" + std::to_string(r.violations);
  if (s.contains(key)) detail += " " + key + "=" + s[key].dump();
  if (s.contains("negative_control_gap")) detail += " negative_control_gap=" + s["negative_control_gap"].dump();
  return {r.ok(), detail};
}

Outcome c1() {
  return suite_outcome("consistency", {{"seed", 101}, {"instances", 50}, {"max_alphabet", 3}}, "max_deviation");
}

Outcome c2() { return suite_outcome("lemma-star", {{"seed", 102}, {"instances", 1000}}, "min_slack"); }

Outcome c3() {
  auto rng = make_rng(103);
  double worst = 0;
  const SubsystemLayout l({{"A", 2, Party::Alice}, {"B", 2, Party::Bob}});
  for (int t = 0; t < 200; ++t) {
    const int na = 2 + t % 2, nb = 2 + (t / 2) % 2;
    const auto flat = random_probabilities(static_cast<std::size_t>(na * nb), rng);
    Eigen::MatrixXd p(na, nb);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) p(a, b) = flat[static_cast<std::size_t>(a * nb + b)];
    std::vector<DensityOperator> states;
    for (int i = 0; i < na * nb; ++i) states.emplace_back(random_density_matrix(4, rng, 1 + i % 4), l);
    const MessageEnsemble me(p, states);
    const double lhs = chi_forward(me.flatten());
    const double rhs = shannon_entropy(me.marginal_b()) + chi_bar_forward(me);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-10, fmt("max |chi - H(p_b) - chi_bar| = %.3g", worst)};
}

Outcome c4() {
  const auto n = standard::swap(2);
  const auto r = one_way_capacity(n, Direction::Forward, default_budget(104));
  const double check = r.certificate ? delta_chi_forward(n, *r.certificate) : -1;
  const bool ok = std::abs(r.best_value - 2.0) <= 1e-3 && std::abs(check - r.best_value) <= 1e-9;
  return {ok, fmt("delta_chi_fwd = %.12g (certificate re-evaluates to %.12g)", r.best_value, check)};
}

Outcome c5() {
  double worst = 0, worst_concavity = 0;
  for (int i = 0; i < 20; ++i) {
    auto rng = make_rng(105, static_cast<std::uint64_t>(i));
    const int rank = 1 + i % 4;
    const auto m = standard::random_channel(2, 2, rank, rng);
    auto b = default_budget(105000 + static_cast<std::uint64_t>(i));
    const double q = bsst_capacity(m, b).best_value;
    const double d = one_way_capacity(embed_one_way(m), Direction::Forward, b).best_value;
    worst = std::max(worst, std::abs(q - d));
    for (int k = 0; k < 5; ++k) {
      const Matrix r1 = random_density_matrix(2, rng), r2 = random_density_matrix(2, rng);
      const double mid = bsst_objective(m, (r1 + r2) / 2.0);
      const double avg = (bsst_objective(m, r1) + bsst_objective(m, r2)) / 2.0;
      worst_concavity = std::max(worst_concavity, avg - mid);
    }
  }
  return {worst <= 1e-2 && worst_concavity <= 1e-9,
          fmt("max |one_way - bsst| = %.3g, max concavity violation = %.3g", worst, worst_concavity)};
}

Outcome c6() {
  return suite_outcome("additivity", {{"seed", 106}, {"instances", 10}, {"mode", "EA"}}, "max_abs_gap");
}

Outcome c7() { return suite_outcome("collapse", {{"seed", 107}, {"instances", 10}}, "max_spread"); }

Outcome c8() {
  return suite_outcome("additivity", {{"seed", 108}, {"instances", 10}, {"mode", "HOLEVO_EB"}}, "max_abs_gap");
}

Outcome c9() {
  // full 1e-4 grid over product inputs (p, q)
  const int n = 10000;
  std::vector<double> h(n + 1);
  for (int i = 0; i <= n; ++i) h[static_cast<std::size_t>(i)] = oracle::binary_entropy(i / double(n));
  double grid = 0;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n; ++k) {
      const double p = i / double(n), q = k / double(n);
      grid = std::max(grid, std::min(q * h[static_cast<std::size_t>(i)], p * h[static_cast<std::size_t>(k)]));
    }
  const auto r = shannon_inner_region(classical_channels::binary_multiplying(), default_budget(109));
  const double got = diagonal_rate(r);
  return {std::abs(got - grid) <= 1e-3 && std::abs(got - 0.6169) <= 1e-3,
          fmt("symmetric rate = %.6f, grid oracle = %.6f", got, grid)};
}

Outcome c10() {
  auto rng = make_rng(110);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> cnt(1, 8);
  int mismatches = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<RateRectangle> rects;
    std::vector<std::pair<double, double>> raw;
    for (int i = cnt(rng); i > 0; --i) {
      const double x = u(rng), y = u(rng);
      rects.push_back(RateRectangle::clipped(x, y, "r"));
      raw.push_back({x, y});
    }
    const auto r = hull_of_rectangles(rects);
    for (int i = 0; i <= 210; ++i)
      for (int k = 0; k <= 210; ++k)
        if (region_contains(r, i * 0.01, k * 0.01) != oracle::in_rectangle_hull(raw, i * 0.01, k * 0.01)) ++mismatches;
  }

  // inner inside outer on every channel sweep
  int outside = 0, sweeps = 0;
  const std::vector<double> ls{0.0, 0.25, 0.5, 0.75, 1.0};
  auto contained = [&](const RateRegion& in, const RateRegion& out) {
    ++sweeps;
    for (const auto& v : in.vertices)
      if (!region_contains(out, v.first, v.second, 1e-9)) ++outside;
  };
  const std::vector<std::pair<std::string, TwoWayChannel>> quantum{
      {"identity", standard::identity_two_way(2, 2)},
      {"swap", standard::swap(2)},
      {"amplitude-damping", embed_one_way(standard::amplitude_damping(0.3))},
  };
  for (const auto& [id, n] : quantum) {
    const auto in = inner_region(n, small_budget(1100), ls, id);
    contained(in, outer_region(n, small_budget(1100), in, ls));
  }
  auto crng = make_rng(111);
  std::vector<ClassicalTwoWayChannel> classical{classical_channels::binary_multiplying()};
  for (int i = 0; i < 3; ++i) classical.push_back(random_classical_channel({2, 2, 2, 2}, crng));
  for (const auto& w : classical)
    contained(shannon_inner_region(w, default_budget(1101)), shannon_outer_region(w, default_budget(1101)));
  return {mismatches == 0 && outside == 0,
          std::to_string(mismatches) + " grid mismatches over 20 sets; " + std::to_string(outside) +
              " inner vertices outside outer over " + std::to_string(sweeps) + " sweeps"};
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(const std::string& args) {
  FILE* p = popen((std::string(BIDUCT_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int s = pclose(p);
  return {WIFEXITED(s) ? WEXITSTATUS(s) : -1, out};
}

std::string without_sidecar(const std::string& text) {
  auto j = json::parse(text);
  j.erase("sidecar");
  return j.dump(2);
}

Outcome c11() {
  const std::string spec = BIDUCT_SPEC_DIR;
  const std::string small = " --budget-restarts 4 --budget-iters 200 --ancilla-levels 2";
  const std::vector<std::string> commands{
      "capacity --spec " + spec + "/amplitude-damping.json --seed 5 --certificate" + small,
      "capacity --spec " + spec + "/swap.json --direction backward --seed 5" + small,
      "region --spec " + spec + "/swap.json --kind inner --lambdas 3 --seed 5" + small,
      "region --spec " + spec + "/bmc.json --kind outer --lambdas 3 --seed 5" + small,
      "region --spec " + spec + "/bmc.json --kind shannon-outer --seed 5",
      "suite lemma-star --seed 5 --instances 50",
      "suite ssa --seed 5 --instances 50",
      "suite consistency --seed 5 --instances 10",
      "suite additivity --seed 5 --instances 2" + small,
      "suite collapse --seed 5 --instances 2" + small,
  };
  int differing = 0;
  std::string which;
  for (const auto& c : commands) {
    const auto a = cli(c), b = cli(c);
    bool same = a.code == 0 && b.code == 0;
    try {
      same = same && without_sidecar(a.out) == without_sidecar(b.out);
    } catch (const std::exception&) {
      same = false;
    }
    if (!same) {
      ++differing;
      which += " [" + c.substr(0, c.find(' ', c.find(' ') + 1)) + "]";
    }
  }
  return {differing == 0,
          std::to_string(commands.size() - differing) + "/" + std::to_string(commands.size()) +
              " commands byte-identical" + which};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"classical reduction identity (50 channels)", c1},
      {"lemma-star suite (1000 instances)", c2},
      {"joint entropy identity (200 message ensembles)", c3},
      {"SWAP one-way capacity = 2", c4},
      {"BSST cross-check (20 qubit channels)", c5},
      {"EA additivity (10 pairs)", c6},
      {"EB collapse (10 channels + negative control)", c7},
      {"EB Holevo additivity (10 pairs)", c8},
      {"Shannon BMC symmetric inner rate", c9},
      {"region geometry and inner within outer", c10},
      {"determinism of stochastic commands", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s  %s: %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), s);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
