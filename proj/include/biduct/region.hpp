#pragma once

// Rate regions assembled from origin-anchored rectangles.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biduct/holevo.hpp"
#include "biduct/json_io.hpp"
#include "biduct/optimize.hpp"

namespace biduct {

struct RateRectangle {
  double r_fwd = 0.0;
  double r_bwd = 0.0;
  std::string certificate_id;
  /// Values before clipping at zero; differ from r_fwd/r_bwd only when an
  /// ensemble had a negative Delta chi.
  double raw_fwd = 0.0;
  double raw_bwd = 0.0;

  static RateRectangle clipped(double fwd, double bwd, std::string id);
  bool was_clipped() const { return raw_fwd < 0.0 || raw_bwd < 0.0; }
};

enum class RegionKind { Inner, Outer, ShannonInner, ShannonOuter };
const char* to_string(RegionKind k);
RegionKind region_kind_from_string(const std::string& s);

using Point = std::pair<double, double>;

struct RateRegion {
  RegionKind kind = RegionKind::Inner;
  std::string channel;
  std::string family;
  /// Upper-right boundary from (0, y_max) to (x_max, 0): x non-decreasing,
  /// y non-increasing. A region at the origin is the single vertex (0, 0).
  std::vector<Point> vertices;
  std::vector<RateRectangle> rectangles;
  /// Generating ensembles, parallel to `rectangles` when they were computed
  /// here. Not serialised.
  std::vector<Ensemble> certificates;
  std::vector<double> lambdas;
  json budget = json::object();
  bool heuristic = false;
  /// Outer regions: the one-way capacity estimates that fix the axis
  /// endpoints.
  std::optional<double> axis_forward;
  std::optional<double> axis_backward;
};

/// Boundary of conv({0} and every rectangle). Throws InputError on an empty
/// list.
RateRegion hull_of_rectangles(const std::vector<RateRectangle>& rects, RegionKind kind = RegionKind::Inner);

/// Membership in the closed region, with slack `tol`.
bool region_contains(const RateRegion& r, double x, double y, double tol = 1e-9);

/// Largest t with (t, t) in the region.
double diagonal_rate(const RateRegion& r);

/// Euclidean distance from a point to the region (0 inside).
double distance_to_region(const RateRegion& r, double x, double y);
/// Hausdorff distance between the two regions as planar sets.
double hausdorff_distance(const RateRegion& a, const RateRegion& b);

std::vector<double> default_lambdas(int count = 11);

/// Product ensembles over every cut, one maximisation per weight.
RateRegion inner_region(const TwoWayChannel& n, const Budget& budget,
                        const std::vector<double>& lambdas = default_lambdas(), const std::string& channel_id = "");

/// Arbitrary ensembles, seeded with the inner certificates; the weights 1
/// and 0 use one_way_capacity. Labelled heuristic: each sup is only bounded
/// from below.
RateRegion outer_region(const TwoWayChannel& n, const Budget& budget,
                        const std::vector<double>& lambdas = default_lambdas(), const std::string& channel_id = "");
/// Same, reusing an inner region computed for the same channel; its
/// rectangles are included and its certificates seed every search.
RateRegion outer_region(const TwoWayChannel& n, const Budget& budget, const RateRegion& inner,
                        const std::vector<double>& lambdas = default_lambdas());

json budget_to_json(const Budget& b);
json region_to_json(const RateRegion& r);
RateRegion region_from_json(const json& j);
/// "r_fwd,r_bwd" header followed by one vertex per line.
std::string region_to_csv(const RateRegion& r);

}  // namespace biduct
