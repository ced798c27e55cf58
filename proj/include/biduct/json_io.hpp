#pragma once

// JSON encodings shared by every file format the toolkit reads or writes.
//
// Matrices are row-major nested arrays of [re, im] pairs; vectors are arrays
// of [re, im] pairs; layouts are ordered {label, dim, party} records.

#include <string>

#include <nlohmann/json.hpp>

#include "biduct/qcore.hpp"

namespace biduct {

using json = nlohmann::json;

/// Rounds to 12 significant digits, the precision used for every emitted
/// number.
double round12(double x);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

json layout_to_json(const SubsystemLayout& layout);
SubsystemLayout layout_from_json(const json& j);

json density_to_json(const DensityOperator& rho);

/// Reads and parses a JSON file; throws InputError on I/O or parse failure.
json read_json_file(const std::string& path);

}  // namespace biduct
