#pragma once

// Multi-start maximisation of Holevo-type objectives over ensemble families.
//
// Every reported value is a lower bound on the corresponding supremum: the
// search is local, restarted from warm starts and seeded random points.
// Ensembles live on the canonical layout A, Ap (Alice) and B, Bp (Bob),
// where Ap and Bp are ancillas.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biduct/channels.hpp"
#include "biduct/holevo.hpp"
#include "biduct/json_io.hpp"

namespace biduct {

enum class Direction { Forward, Backward };
const char* to_string(Direction d);
Direction direction_from_string(const std::string& s);

enum class FamilyKind { Arbitrary, Product, Separable, ZeroChi, Classical };
const char* to_string(FamilyKind k);
FamilyKind family_from_string(const std::string& s);

/// Product of two independent ensembles (Ensemble) or one product state per
/// member with arbitrary joint weights (Member).
enum class ProductScope { Ensemble, Member };

/// Complementary label sets; X-side states are tensored with Y-side states.
struct Cut {
  std::vector<std::string> x;
  std::vector<std::string> y;
};

struct Budget {
  int restarts = 32;
  int max_iters = 500;
  std::uint64_t seed = 0;
  int ancilla_levels = 3;  // ancilla dims 1, d, d^2 (capped at 3 levels)
  int threads = 0;         // 0: BIDUCT_THREADS, else hardware concurrency
};

struct EnsembleFamily {
  FamilyKind kind = FamilyKind::Arbitrary;
  int members = 0;  // 0: (channel input dimension)^2
  int ancilla_a = 1;
  int ancilla_b = 1;
  int separable_terms = 2;
  ProductScope scope = ProductScope::Ensemble;
  /// Product and separable families: empty means every cut with A in X and
  /// B in Y, the ancillas on either side.
  std::vector<Cut> cuts;
};

struct LevelResult {
  int ancilla_a;
  int ancilla_b;
  double value;
};

struct OptimizationReport {
  double best_value = 0.0;
  std::optional<Ensemble> certificate;
  /// Delta chi of the certificate in each direction, when the objective is
  /// a Delta chi combination.
  double delta_forward = 0.0;
  double delta_backward = 0.0;
  int restarts = 0;
  int iterations = 0;
  double converged_fraction = 0.0;
  /// Index in the restart pool, or -1 when a seed ensemble won.
  int best_restart = -1;
  std::string objective;
  std::string family;
  std::vector<LevelResult> levels;
};

json report_to_json(const OptimizationReport& r);

/// Canonical layout with the given dimensions.
SubsystemLayout canonical_layout(int a, int ap, int b, int bp);
/// Embeds every factor's basis into larger dimensions of `target` (same
/// labels, dims >= the source dims).
Ensemble pad_ensemble(const Ensemble& e, const SubsystemLayout& target);

/// Maximises lambda Delta chi_fwd + (1 - lambda) Delta chi_bwd over the
/// family with fixed ancilla dimensions. Seeds are kept as candidates and
/// used as warm starts, so the result is never below the best seed.
OptimizationReport maximize_weighted_delta_chi(const TwoWayChannel& n, double lambda,
                                               const EnsembleFamily& family, const Budget& budget,
                                               std::span<const Ensemble> seeds = {});

OptimizationReport maximize_delta_chi(const TwoWayChannel& n, Direction dir,
                                      const EnsembleFamily& family, const Budget& budget,
                                      std::span<const Ensemble> seeds = {});

/// Runs the family over the escalating ancilla ladder, each level seeded by
/// the previous one, and records the per-level values.
OptimizationReport maximize_with_escalation(const TwoWayChannel& n, double lambda,
                                            const EnsembleFamily& family, const Budget& budget,
                                            std::span<const Ensemble> seeds = {});

/// sup Delta chi over arbitrary ensembles with the ancilla ladder.
OptimizationReport one_way_capacity(const TwoWayChannel& n, Direction dir, const Budget& budget,
                                    std::span<const Ensemble> seeds = {});

/// sup chi of output ensembles over at most d_in^2 pure inputs.
OptimizationReport hsw_capacity(const OneWayChannel& m, const Budget& budget,
                                std::span<const Ensemble> seeds = {});

/// max over input states of S(rho) + S(M(rho)) - S((M (x) id)(psi_rho)).
OptimizationReport bsst_capacity(const OneWayChannel& m, const Budget& budget,
                                 std::span<const Ensemble> seeds = {});
/// The quantum mutual information objective at one input state.
double bsst_objective(const OneWayChannel& m, const Matrix& rho);

/// Delta chi forward of the embedded one-way channel over a restricted
/// family on A (x) Bp (Ap and B trivial). The default receiver ancilla
/// dimension is d_in.
OptimizationReport restricted_delta_chi(const OneWayChannel& m, FamilyKind kind, const Budget& budget,
                                        std::span<const Ensemble> seeds = {}, int ancilla = 0);

/// Worker count from the budget, BIDUCT_THREADS, or the hardware.
int resolve_threads(const Budget& budget);

}  // namespace biduct
