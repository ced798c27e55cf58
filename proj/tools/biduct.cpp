// biduct: command-line front end.
//
//   biduct validate --spec FILE
//   biduct capacity --spec FILE --direction forward --seed 1
//   biduct region --spec FILE --kind inner --seed 1 --out region.json
//   biduct suite lemma-star --seed 7
//
// Exit codes: 0 success, 1 invariant or tolerance failure, 2 input error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biduct/channel_spec.hpp"
#include "biduct/classical.hpp"
#include "biduct/errors.hpp"
#include "biduct/optimize.hpp"
#include "biduct/region.hpp"
#include "biduct/suites.hpp"

namespace {

using biduct::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

struct BudgetFlags {
  int restarts = biduct::Budget{}.restarts;
  int iters = biduct::Budget{}.max_iters;
  int ancilla_levels = biduct::Budget{}.ancilla_levels;
  int threads = 0;
  std::optional<std::uint64_t> seed;

  biduct::Budget budget() const {
    if (!seed) throw biduct::InputError("--seed is required for this command");
    if (restarts < 1 || iters < 1 || ancilla_levels < 1 || threads < 0)
      throw biduct::InputError("budget flags must be positive");
    biduct::Budget b;
    b.restarts = restarts;
    b.max_iters = iters;
    b.ancilla_levels = ancilla_levels;
    b.threads = threads;
    b.seed = *seed;
    return b;
  }
};

void add_budget_flags(CLI::App* cmd, BudgetFlags& f) {
  cmd->add_option("--budget-restarts", f.restarts, "Restarts per optimisation")->capture_default_str();
  cmd->add_option("--budget-iters", f.iters, "Iteration cap per restart")->capture_default_str();
  cmd->add_option("--ancilla-levels", f.ancilla_levels, "Ancilla ladder length (1, d, d^2)")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0: BIDUCT_THREADS or hardware)");
  cmd->add_option("--seed", f.seed, "RNG seed (required for stochastic commands)");
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Payload plus a "sidecar" object that holds everything run-dependent.
std::string document(json payload, const Timer& t) {
  payload["sidecar"] = {{"elapsed_seconds", biduct::round12(t.seconds())}};
  return payload.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw biduct::InputError("cannot write " + path);
  out << text;
  if (!out) throw biduct::InputError("failed writing " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

int cmd_validate(const std::string& spec) {
  try {
    const auto c = biduct::load_channel_file(spec);
    std::cout << biduct::validation_report(c).dump(2) << "\n";
    return kOk;
  } catch (const biduct::InvariantError& e) {
    json j = {{"valid", false},
              {"spec", spec},
              {"invariant", e.invariant()},
              {"deviation", biduct::round12(e.deviation())},
              {"detail", e.what()}};
    std::cout << j.dump(2) << "\n";
    return kViolation;
  }
}

json budget_json(const biduct::Budget& b) { return biduct::budget_to_json(b); }

json strip_certificate(json report) {
  report.erase("certificate");
  return report;
}

int cmd_capacity(const std::string& spec, const std::string& direction, const BudgetFlags& flags,
                 const std::string& out, bool with_certificate) {
  const Timer t;
  const auto c = biduct::load_channel_file(spec);
  const auto dir = biduct::direction_from_string(direction);
  const auto b = flags.budget();
  const auto& d = c.two_way.dims();
  const int base = std::max(d.a_in, d.b_in);
  std::fprintf(stderr,
               "note: ancilla dimensions searched: 1..%d^%d; the reported value is a lower bound on the supremum\n",
               base, std::max(0, b.ancilla_levels - 1));

  const auto r = biduct::one_way_capacity(c.two_way, dir, b);
  auto rj = biduct::report_to_json(r);
  if (!with_certificate) rj = strip_certificate(rj);
  json payload = {{"command", "capacity"},
                  {"channel", c.id},
                  {"direction", biduct::to_string(dir)},
                  {"budget", budget_json(b)},
                  {"one_way_capacity", rj}};
  if (c.one_way && dir == biduct::Direction::Forward) {
    const auto q = biduct::bsst_capacity(*c.one_way, b);
    auto qj = biduct::report_to_json(q);
    if (!with_certificate) qj = strip_certificate(qj);
    payload["bsst_capacity"] = qj;
    payload["gap"] = biduct::round12(std::abs(r.best_value - q.best_value));
  }
  emit(document(payload, t), out);
  return kOk;
}

int cmd_region(const std::string& spec, const std::string& kind_name, const BudgetFlags& flags, int lambdas,
               const std::string& out, const std::string& format) {
  const Timer t;
  if (format != "json" && format != "csv") throw biduct::InputError("--format must be json or csv");
  const auto kind = biduct::region_kind_from_string(kind_name);
  const auto c = biduct::load_channel_file(spec);
  const auto b = flags.budget();
  const auto ls = biduct::default_lambdas(lambdas);
  biduct::RateRegion r;
  switch (kind) {
    case biduct::RegionKind::Inner: r = biduct::inner_region(c.two_way, b, ls, c.id); break;
    case biduct::RegionKind::Outer: r = biduct::outer_region(c.two_way, b, ls, c.id); break;
    case biduct::RegionKind::ShannonInner:
    case biduct::RegionKind::ShannonOuter:
      if (!c.classical) throw biduct::InputError(kind_name + " needs a classical channel spec");
      r = kind == biduct::RegionKind::ShannonInner ? biduct::shannon_inner_region(*c.classical, b, ls, c.id)
                                                    : biduct::shannon_outer_region(*c.classical, b, ls, c.id);
      break;
  }
  if (format == "csv") {
    emit(biduct::region_to_csv(r), out);
  } else {
    emit(document(biduct::region_to_json(r), t), out);
  }
  if (!out.empty()) {
    json summary = {{"command", "region"},
                    {"kind", kind_name},
                    {"channel", c.id},
                    {"out", out},
                    {"vertices", r.vertices.size()},
                    {"diagonal_rate", biduct::round12(biduct::diagonal_rate(r))},
                    {"heuristic", r.heuristic}};
    std::cout << summary.dump(2) << "\n";
  }
  return kOk;
}

int cmd_suite(const std::string& name, const std::string& config_path, const BudgetFlags& flags,
              std::optional<int> instances, const std::string& out) {
  const Timer t;
  json config = config_path.empty() ? json::object() : biduct::read_json_file(config_path);
  if (!config.is_object()) throw biduct::InputError("suite config must be a JSON object");
  if (flags.seed) config["seed"] = *flags.seed;
  if (instances) config["instances"] = *instances;
  if (!config.contains("budget")) config["budget"] = json::object();
  auto& bj = config["budget"];
  if (!bj.contains("restarts")) bj["restarts"] = flags.restarts;
  if (!bj.contains("max_iters")) bj["max_iters"] = flags.iters;
  if (!bj.contains("ancilla_levels")) bj["ancilla_levels"] = flags.ancilla_levels;
  if (flags.threads > 0) bj["threads"] = flags.threads;
  const auto r = biduct::run_suite(name, config);
  auto payload = r.report;
  payload["config"].erase("budget");
  payload["config"]["budget"] = bj;
  payload["config"]["budget"].erase("threads");
  emit(document(payload, t), out);
  if (!out.empty()) std::cout << json{{"suite", name}, {"summary", r.report["summary"]}}.dump(2) << "\n";
  return r.ok() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity bounds for two-way quantum channels"};
  app.require_subcommand(1);

  std::string spec, direction = "forward", kind, out, format = "json", config, suite;
  BudgetFlags flags;
  int lambdas = 11;
  bool with_certificate = false;
  std::optional<int> instances;

  auto* validate = app.add_subcommand("validate", "Check a channel spec and report CPTP deviations");
  validate->add_option("--spec", spec, "Channel spec JSON")->required();

  auto* capacity = app.add_subcommand("capacity", "One-way capacity estimate");
  capacity->add_option("--spec", spec, "Channel spec JSON")->required();
  capacity->add_option("--direction", direction, "forward or backward")->capture_default_str();
  capacity->add_option("--out", out, "Write the report here instead of stdout");
  capacity->add_flag("--certificate", with_certificate, "Include the optimal ensembles");
  add_budget_flags(capacity, flags);

  auto* region = app.add_subcommand("region", "Inner/outer rate region");
  region->add_option("--spec", spec, "Channel spec JSON")->required();
  region->add_option("--kind", kind, "inner, outer, shannon-inner or shannon-outer")->required();
  region->add_option("--lambdas", lambdas, "Number of sweep weights")->capture_default_str();
  region->add_option("--out", out, "Output file (stdout if omitted)");
  region->add_option("--format", format, "json or csv")->capture_default_str();
  add_budget_flags(region, flags);

  auto* suite_cmd = app.add_subcommand("suite", "Run a property suite");
  suite_cmd->add_option("name", suite, "lemma-star, ssa, consistency, additivity or collapse")->required();
  suite_cmd->add_option("--config", config, "Suite config JSON");
  suite_cmd->add_option("--instances", instances, "Override the instance count");
  suite_cmd->add_option("--out", out, "Write the report here instead of stdout");
  add_budget_flags(suite_cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*validate) return cmd_validate(spec);
    if (*capacity) return cmd_capacity(spec, direction, flags, out, with_certificate);
    if (*region) return cmd_region(spec, kind, flags, lambdas, out, format);
    if (*suite_cmd) return cmd_suite(suite, config, flags, instances, out);
  } catch (const biduct::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const biduct::InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
