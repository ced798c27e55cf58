#pragma once

// Seeded property suites run from the command line.
//
// Config keys: "seed" (required), "instances", "budget" {"restarts",
// "max_iters", "ancilla_levels", "threads"}, plus per-suite keys:
//   lemma-star   "dims" [2, 3], "members" [2, 3, 4]
//   ssa          "dims" [2, 3]
//   consistency  "max_alphabet" 3
//   additivity   "mode" "EA" | "HOLEVO_EB", "cross_check" true
//   collapse     "negative_control" true

#include <string>
#include <vector>

#include "biduct/json_io.hpp"
#include "biduct/optimize.hpp"

namespace biduct {

struct SuiteResult {
  json report;
  int violations = 0;
  bool ok() const { return violations == 0; }
};

std::vector<std::string> suite_names();

/// Throws InputError for an unknown suite or a malformed config.
SuiteResult run_suite(const std::string& name, const json& config);

Budget budget_from_json(const json& j, std::uint64_t seed);

}  // namespace biduct
