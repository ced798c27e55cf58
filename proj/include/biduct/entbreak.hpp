#pragma once

// Entanglement-breaking channels: the entropy inequality behind the
// additivity argument, the collapse of the restricted Delta chi families,
// and numerical additivity checks.

#include <span>
#include <string>

#include "biduct/channels.hpp"
#include "biduct/json_io.hpp"
#include "biduct/optimize.hpp"

namespace biduct {

struct LemmaStarRoutes {
  /// S(sum p_i sigma_i (x) eta_i) - S(sum p_i sigma_i) - sum p_i S(eta_i)
  double direct;
  /// chi({p_i, sigma_i (x) eta_i}) - chi({p_i, sigma_i})
  double holevo;
  /// S_AB + S_AC - S_ABC - S_A for rho_ABC = sum p_i sigma_i (x) eta_i (x) |i><i|
  double ssa;
};

/// Throws InputError on mismatched lengths or dimensions and InvariantError
/// on invalid states.
LemmaStarRoutes lemma_star_routes(std::span<const double> p, std::span<const Matrix> sigmas,
                                  std::span<const Matrix> etas);
double lemma_star_check(std::span<const double> p, std::span<const Matrix> sigmas, std::span<const Matrix> etas);

/// S_AB + S_AC - S_ABC - S_A of a tripartite state with the given factor
/// dimensions (A first).
double ssa_gap(const Matrix& rho_abc, int da, int db, int dc);

struct CollapseReport {
  double zero_chi = 0.0;
  double product = 0.0;
  double separable = 0.0;
  double spread = 0.0;
  bool nesting_holds = false;
  EbVerdict verdict = EbVerdict::Inconclusive;
};

/// Delta chi forward over the zero-chi, product and separable families, each
/// seeded with the previous certificate.
CollapseReport family_collapse_check(const OneWayChannel& m, const Budget& budget);

struct NegativeControl {
  double zero_chi;
  double assisted;  // unrestricted ensembles, seeded with the zero-chi optimum
  double gap;
};

NegativeControl assisted_gap_control(const OneWayChannel& m, const Budget& budget);

enum class AdditivityMode { HolevoEb, Ea };
const char* to_string(AdditivityMode m);
AdditivityMode additivity_mode_from_string(const std::string& s);

struct AdditivityReport {
  AdditivityMode mode = AdditivityMode::Ea;
  std::string channel_1;
  std::string channel_2;
  double r1 = 0.0;
  double r2 = 0.0;
  double joint = 0.0;
  double gap = 0.0;  // joint - (r1 + r2)
  /// EA mode: one_way_capacity of each embedded factor and the largest
  /// |one_way - bsst| difference.
  double one_way_1 = 0.0;
  double one_way_2 = 0.0;
  double cross_check_gap = 0.0;
  json budget = json::object();
};

/// HolevoEb: hsw_capacity on each factor and on the product channel, which
/// must both be entanglement breaking (InputError otherwise). Ea:
/// bsst_capacity, with one_way_capacity cross-checks on the factors. The
/// joint search is seeded with the product of the factor certificates.
AdditivityReport additivity_check(const OneWayChannel& m1, const OneWayChannel& m2, AdditivityMode mode,
                                  const Budget& budget, bool cross_check = true);

json to_json(const CollapseReport& r);
json to_json(const NegativeControl& r);
json to_json(const AdditivityReport& r);

}  // namespace biduct
