#include "biduct/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "biduct/errors.hpp"

namespace biduct {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

cplx scalar_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError("expected a number or an [re, im] pair, got " + j.dump());
}

json scalar_to_json(cplx z) { return json::array({round12(z.real()), round12(z.imag())}); }

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw InputError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InputError("matrix rows have inconsistent lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("vector must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = scalar_from_json(j[i]);
  return v;
}

json layout_to_json(const SubsystemLayout& layout) {
  json out = json::array();
  for (const auto& s : layout)
    out.push_back({{"label", s.label}, {"dim", s.dim}, {"party", to_string(s.party)}});
  return out;
}

SubsystemLayout layout_from_json(const json& j) {
  if (!j.is_array()) throw InputError("layout must be an array of {label, dim, party}");
  std::vector<Subsystem> systems;
  try {
    for (const auto& rec : j)
      systems.push_back({rec.at("label").get<std::string>(), rec.at("dim").get<int>(),
                         party_from_string(rec.at("party").get<std::string>())});
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed layout record: ") + e.what());
  }
  return SubsystemLayout(std::move(systems));
}

json density_to_json(const DensityOperator& rho) { return matrix_to_json(rho.matrix()); }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace biduct
