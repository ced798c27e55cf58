#include "biduct/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "biduct/errors.hpp"

namespace biduct {

RateRectangle RateRectangle::clipped(double fwd, double bwd, std::string id) {
  RateRectangle r;
  r.raw_fwd = fwd;
  r.raw_bwd = bwd;
  r.r_fwd = std::max(0.0, fwd);
  r.r_bwd = std::max(0.0, bwd);
  r.certificate_id = std::move(id);
  return r;
}

const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Inner: return "inner";
    case RegionKind::Outer: return "outer";
    case RegionKind::ShannonInner: return "shannon-inner";
    case RegionKind::ShannonOuter: return "shannon-outer";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& s) {
  for (auto k : {RegionKind::Inner, RegionKind::Outer, RegionKind::ShannonInner, RegionKind::ShannonOuter})
    if (s == to_string(k)) return k;
  throw InputError("unknown region kind: " + s);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

double segment_distance(const Point& p, const Point& q, double x, double y) {
  const double dx = q.first - p.first, dy = q.second - p.second;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((x - p.first) * dx + (y - p.second) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x - (p.first + t * dx), y - (p.second + t * dy));
}

// Closed polygon: origin, then the boundary polyline.
std::vector<Point> polygon(const RateRegion& r) {
  std::vector<Point> poly{{0.0, 0.0}};
  for (const auto& v : r.vertices)
    if (v != poly.back()) poly.push_back(v);
  if (poly.size() > 1 && poly.back() == poly.front()) poly.pop_back();
  return poly;
}

}  // namespace

RateRegion hull_of_rectangles(const std::vector<RateRectangle>& rects, RegionKind kind) {
  if (rects.empty()) throw InputError("hull of an empty rectangle list");
  std::vector<Point> pts{{0.0, 0.0}};
  for (const auto& r : rects) {
    if (!(r.r_fwd >= 0.0 && r.r_bwd >= 0.0) || !std::isfinite(r.r_fwd) || !std::isfinite(r.r_bwd))
      throw InputError("rectangle extents must be finite and non-negative");
    pts.push_back({r.r_fwd, 0.0});
    pts.push_back({0.0, r.r_bwd});
    pts.push_back({r.r_fwd, r.r_bwd});
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Near-collinear points (rounding noise in optimiser output) are dropped.
  constexpr double kCollinear = 1e-12;
  std::vector<Point> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= -kCollinear) hull.pop_back();
    hull.push_back(p);
  }
  RateRegion out;
  out.kind = kind;
  out.vertices = std::move(hull);
  out.rectangles = rects;
  return out;
}

bool region_contains(const RateRegion& r, double x, double y, double tol) {
  return distance_to_region(r, x, y) <= tol;
}

double distance_to_region(const RateRegion& r, double x, double y) {
  const auto poly = polygon(r);
  if (poly.size() == 1) return std::hypot(x, y);
  if (poly.size() == 2) return segment_distance(poly[0], poly[1], x, y);
  // Clockwise polygon: interior is on the right of every edge.
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    if (cross(p, q, {x, y}) > 0.0) inside = false;
    best = std::min(best, segment_distance(p, q, x, y));
  }
  return inside ? 0.0 : best;
}

double hausdorff_distance(const RateRegion& a, const RateRegion& b) {
  double h = 0.0;
  for (const auto& v : polygon(a)) h = std::max(h, distance_to_region(b, v.first, v.second));
  for (const auto& v : polygon(b)) h = std::max(h, distance_to_region(a, v.first, v.second));
  return h;
}

double diagonal_rate(const RateRegion& r) {
  const auto& vs = r.vertices;
  double xmax = 0.0, ymax = 0.0;
  for (const auto& v : vs) {
    xmax = std::max(xmax, v.first);
    ymax = std::max(ymax, v.second);
  }
  double t = std::min(xmax, ymax);
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    const auto& p = vs[i];
    const auto& q = vs[i + 1];
    const double dx = q.first - p.first, dy = q.second - p.second;
    const double c = dx - dy;
    if (c > 0.0) t = std::min(t, (dx * p.second - dy * p.first) / c);
  }
  return std::max(0.0, t);
}

std::vector<double> default_lambdas(int count) {
  if (count < 2) throw InputError("a lambda sweep needs at least two weights");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(static_cast<double>(k) / (count - 1));
  return out;
}

namespace {

Budget budget_for(const Budget& b, std::size_t k) {
  Budget out = b;
  out.seed = b.seed * 1000003ULL + k;
  return out;
}

std::string lambda_id(const char* family, double lambda) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s/lambda=%.6g", family, lambda);
  return buf;
}

void validate_lambdas(const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw InputError("empty lambda sweep");
  for (double l : lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw InputError("sweep weights must lie in [0, 1]");
}

void add_rectangle(RateRegion& r, const OptimizationReport& rep, std::string id) {
  r.rectangles.push_back(RateRectangle::clipped(rep.delta_forward, rep.delta_backward, std::move(id)));
  r.certificates.push_back(*rep.certificate);
}

RateRegion finish(RateRegion r) {
  auto hull = hull_of_rectangles(r.rectangles, r.kind);
  r.vertices = std::move(hull.vertices);
  return r;
}

}  // namespace

RateRegion inner_region(const TwoWayChannel& n, const Budget& budget, const std::vector<double>& lambdas,
                        const std::string& channel_id) {
  validate_lambdas(lambdas);
  RateRegion r;
  r.kind = RegionKind::Inner;
  r.channel = channel_id;
  r.family = "product";
  r.lambdas = lambdas;
  r.budget = budget_to_json(budget);
  EnsembleFamily f;
  f.kind = FamilyKind::Product;
  f.scope = ProductScope::Ensemble;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    auto rep = maximize_with_escalation(n, lambdas[k], f, budget_for(budget, k), r.certificates);
    add_rectangle(r, rep, lambda_id("product", lambdas[k]));
  }
  return finish(std::move(r));
}

RateRegion outer_region(const TwoWayChannel& n, const Budget& budget, const RateRegion& inner,
                        const std::vector<double>& lambdas) {
  validate_lambdas(lambdas);
  if (inner.certificates.size() != inner.rectangles.size())
    throw InputError("outer_region needs an inner region with its certificates");
  RateRegion r;
  r.kind = RegionKind::Outer;
  r.channel = inner.channel;
  r.family = "arbitrary";
  r.lambdas = lambdas;
  r.heuristic = true;
  r.budget = budget_to_json(budget);
  r.rectangles = inner.rectangles;
  r.certificates = inner.certificates;

  const EnsembleFamily f;
  const std::size_t offset = 1000;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double l = lambdas[k];
    if (l == 0.0 || l == 1.0) continue;
    auto rep = maximize_with_escalation(n, l, f, budget_for(budget, offset + k), r.certificates);
    add_rectangle(r, rep, lambda_id("arbitrary", l));
  }
  auto fwd = one_way_capacity(n, Direction::Forward, budget_for(budget, 2 * offset), r.certificates);
  r.axis_forward = fwd.best_value;
  add_rectangle(r, fwd, "one-way/forward");
  auto bwd = one_way_capacity(n, Direction::Backward, budget_for(budget, 2 * offset + 1), r.certificates);
  r.axis_backward = bwd.best_value;
  add_rectangle(r, bwd, "one-way/backward");
  return finish(std::move(r));
}

RateRegion outer_region(const TwoWayChannel& n, const Budget& budget, const std::vector<double>& lambdas,
                        const std::string& channel_id) {
  return outer_region(n, budget, inner_region(n, budget, lambdas, channel_id), lambdas);
}

json budget_to_json(const Budget& b) {
  return {{"restarts", b.restarts}, {"max_iters", b.max_iters}, {"seed", b.seed}, {"ancilla_levels", b.ancilla_levels}};
}

json region_to_json(const RateRegion& r) {
  json vertices = json::array();
  for (const auto& v : r.vertices) vertices.push_back({round12(v.first), round12(v.second)});
  json rects = json::array();
  for (const auto& q : r.rectangles) {
    json jr = {{"r_fwd", round12(q.r_fwd)}, {"r_bwd", round12(q.r_bwd)}, {"certificate_id", q.certificate_id},
               {"clipped", q.was_clipped()}};
    if (q.was_clipped()) {
      jr["raw_fwd"] = round12(q.raw_fwd);
      jr["raw_bwd"] = round12(q.raw_bwd);
    }
    rects.push_back(std::move(jr));
  }
  json lambdas = json::array();
  for (double l : r.lambdas) lambdas.push_back(round12(l));
  json j = {{"kind", to_string(r.kind)}, {"channel", r.channel},     {"family", r.family},
            {"vertices", vertices},      {"rectangles", rects},      {"lambdas", lambdas},
            {"budget", r.budget},        {"heuristic", r.heuristic}};
  if (r.axis_forward) j["axis_forward"] = round12(*r.axis_forward);
  if (r.axis_backward) j["axis_backward"] = round12(*r.axis_backward);
  return j;
}

RateRegion region_from_json(const json& j) {
  try {
    RateRegion r;
    r.kind = region_kind_from_string(j.at("kind").get<std::string>());
    r.channel = j.value("channel", "");
    r.family = j.value("family", "");
    for (const auto& v : j.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw InputError("vertices must be [x, y] pairs");
      r.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    for (const auto& q : j.value("rectangles", json::array())) {
      auto rect = RateRectangle::clipped(q.value("raw_fwd", q.at("r_fwd").get<double>()),
                                         q.value("raw_bwd", q.at("r_bwd").get<double>()),
                                         q.value("certificate_id", ""));
      r.rectangles.push_back(rect);
    }
    for (const auto& l : j.value("lambdas", json::array())) r.lambdas.push_back(l.get<double>());
    r.budget = j.value("budget", json::object());
    r.heuristic = j.value("heuristic", false);
    if (j.contains("axis_forward")) r.axis_forward = j["axis_forward"].get<double>();
    if (j.contains("axis_backward")) r.axis_backward = j["axis_backward"].get<double>();
    if (r.vertices.empty()) throw InputError("region has no vertices");
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed region JSON: ") + e.what());
  }
}

std::string region_to_csv(const RateRegion& r) {
  std::string out = "r_fwd,r_bwd\n";
  char buf[64];
  for (const auto& v : r.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", v.first, v.second);
    out += buf;
  }
  return out;
}

}  // namespace biduct
