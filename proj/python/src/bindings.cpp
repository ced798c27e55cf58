// Python module _biduct. Structured values cross the boundary as JSON text;
// the biduct package decodes them.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biduct/channel_spec.hpp"
#include "biduct/classical.hpp"
#include "biduct/entbreak.hpp"
#include "biduct/errors.hpp"
#include "biduct/holevo.hpp"
#include "biduct/optimize.hpp"
#include "biduct/region.hpp"
#include "biduct/suites.hpp"

namespace py = pybind11;
using namespace biduct;

namespace {

using Rows = std::vector<std::vector<std::complex<double>>>;

Matrix to_matrix(const Rows& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) throw InputError("matrix must have at least one row");
  Matrix m(n, static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != m.cols()) throw InputError("matrix rows have inconsistent lengths");
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = r[static_cast<std::size_t>(k)];
  }
  return m;
}

std::vector<Matrix> to_matrices(const std::vector<Rows>& ms) {
  std::vector<Matrix> out;
  for (const auto& m : ms) out.push_back(to_matrix(m));
  return out;
}

Budget make_budget(std::uint64_t seed, int restarts, int iters, int levels, int threads) {
  Budget b;
  b.seed = seed;
  b.restarts = restarts;
  b.max_iters = iters;
  b.ancilla_levels = levels;
  b.threads = threads;
  if (restarts < 1 || iters < 1 || levels < 1 || threads < 0) throw InputError("budget values must be positive");
  return b;
}

LoadedChannel load(const std::string& spec_json) { return load_channel_spec(json::parse(spec_json)); }

std::string capacity(const std::string& spec, const std::string& direction, const Budget& b) {
  const auto c = load(spec);
  const auto r = one_way_capacity(c.two_way, direction_from_string(direction), b);
  json j = {{"channel", c.id}, {"direction", direction}, {"one_way_capacity", report_to_json(r)}};
  if (c.one_way && direction_from_string(direction) == Direction::Forward)
    j["bsst_capacity"] = report_to_json(bsst_capacity(*c.one_way, b));
  return j.dump();
}

std::string region(const std::string& spec, const std::string& kind_name, int lambdas, const Budget& b) {
  const auto c = load(spec);
  const auto ls = default_lambdas(lambdas);
  switch (region_kind_from_string(kind_name)) {
    case RegionKind::Inner: return region_to_json(inner_region(c.two_way, b, ls, c.id)).dump();
    case RegionKind::Outer: return region_to_json(outer_region(c.two_way, b, ls, c.id)).dump();
    case RegionKind::ShannonInner:
      if (!c.classical) throw InputError("shannon regions need a classical channel spec");
      return region_to_json(shannon_inner_region(*c.classical, b, ls, c.id)).dump();
    case RegionKind::ShannonOuter:
      if (!c.classical) throw InputError("shannon regions need a classical channel spec");
      return region_to_json(shannon_outer_region(*c.classical, b, ls, c.id)).dump();
  }
  return {};
}

}  // namespace

PYBIND11_MODULE(_biduct, m) {
  m.doc() = "Capacity bounds for two-way quantum channels";

  static py::exception<InvariantError> invariant_exc(m, "InvariantError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvariantError& e) {
      PyErr_SetString(invariant_exc.ptr(), e.what());
    } catch (const InputError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Budget>(m, "Budget")
      .def(py::init(&make_budget), py::arg("seed"), py::arg("restarts") = Budget{}.restarts,
           py::arg("max_iters") = Budget{}.max_iters, py::arg("ancilla_levels") = Budget{}.ancilla_levels,
           py::arg("threads") = 0)
      .def_readonly("seed", &Budget::seed)
      .def_readonly("restarts", &Budget::restarts)
      .def_readonly("max_iters", &Budget::max_iters)
      .def_readonly("ancilla_levels", &Budget::ancilla_levels);

  m.def("validate", [](const std::string& spec) { return validation_report(load(spec)).dump(); }, py::arg("spec"));
  m.def("capacity", &capacity, py::arg("spec"), py::arg("direction"), py::arg("budget"),
        py::call_guard<py::gil_scoped_release>());
  m.def("region", &region, py::arg("spec"), py::arg("kind"), py::arg("lambdas"), py::arg("budget"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_suite", [](const std::string& name, const std::string& config) {
        const auto r = biduct::run_suite(name, json::parse(config));
        return r.report.dump();
      },
      py::arg("name"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("entropy", [](const Rows& rho) { return entropy_of_hermitian(to_matrix(rho)); }, py::arg("rho"));
  m.def(
      "holevo_chi",
      [](const std::vector<double>& p, const std::vector<Rows>& states) {
        if (p.size() != states.size() || p.empty()) throw InputError("need one state per probability");
        const auto ms = to_matrices(states);
        const SubsystemLayout l({{"A", static_cast<int>(ms[0].rows()), Party::Alice}});
        std::vector<EnsembleMember> members;
        for (std::size_t i = 0; i < p.size(); ++i) members.push_back({p[i], DensityOperator(ms[i], l)});
        return biduct::holevo_chi(Ensemble(members));
      },
      py::arg("p"), py::arg("states"));
  m.def(
      "lemma_star_check",
      [](const std::vector<double>& p, const std::vector<Rows>& sigmas, const std::vector<Rows>& etas) {
        return biduct::lemma_star_check(p, to_matrices(sigmas), to_matrices(etas));
      },
      py::arg("p"), py::arg("sigmas"), py::arg("etas"));
  m.def(
      "conditional_mutual_information",
      [](const std::vector<double>& joint, int nx, int ny, int nz) {
        return biduct::conditional_mutual_information(joint, nx, ny, nz);
      },
      py::arg("joint"), py::arg("nx"), py::arg("ny"), py::arg("nz"));
  m.def(
      "hull_of_rectangles",
      [](const std::vector<std::pair<double, double>>& rects) {
        std::vector<RateRectangle> rs;
        for (std::size_t i = 0; i < rects.size(); ++i)
          rs.push_back(RateRectangle::clipped(rects[i].first, rects[i].second, "r" + std::to_string(i)));
        return biduct::hull_of_rectangles(rs).vertices;
      },
      py::arg("rectangles"));
}
