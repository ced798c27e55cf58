#pragma once

// Shannon's bounds for two-way classical channels and their quantum
// embedding.

#include "biduct/classical_channel.hpp"
#include "biduct/optimize.hpp"
#include "biduct/region.hpp"

namespace biduct {

/// (I(A;B'|B), I(B;A'|A)) as an origin-anchored rectangle.
RateRectangle shannon_rectangle(const ClassicalTwoWayChannel& w, const JointInputDistribution& d);

struct ClassicalSweepPoint {
  double lambda;
  JointInputDistribution distribution;
  double value;
};

/// max over input distributions of lambda I(A;B'|B) + (1 - lambda) I(B;A'|A);
/// product distributions when `product` is set. Alphabets are capped at 8.
ClassicalSweepPoint maximize_shannon_weighted(const ClassicalTwoWayChannel& w, double lambda, bool product,
                                              const Budget& budget,
                                              const JointInputDistribution* warm = nullptr);

RateRegion shannon_inner_region(const ClassicalTwoWayChannel& w, const Budget& budget,
                                const std::vector<double>& lambdas = default_lambdas(),
                                const std::string& channel_id = "");
RateRegion shannon_outer_region(const ClassicalTwoWayChannel& w, const Budget& budget,
                                const std::vector<double>& lambdas = default_lambdas(),
                                const std::string& channel_id = "");

/// {p_ab, |a a><a a|_{A,Ap} (x) |b b><b b|_{B,Bp}} on the canonical layout.
Ensemble classical_input_ensemble(const JointInputDistribution& d);

struct ConsistencyResult {
  double delta_forward;
  double delta_backward;
  double cmi_forward;
  double cmi_backward;
  double deviation;  // max of the two absolute differences
};

/// Quantum-stack Delta chi of the classical ensemble through embed_classical
/// against the conditional mutual informations. Requires
/// a * b * a' * b' <= 64.
ConsistencyResult classical_consistency(const ClassicalTwoWayChannel& w, const JointInputDistribution& d);
double classical_consistency_check(const ClassicalTwoWayChannel& w, const JointInputDistribution& d);

}  // namespace biduct
