#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nagata/config.hpp"
#include "nagata/field.hpp"
#include "nagata/forms.hpp"
#include "nagata/matrix.hpp"

namespace nagata {

using json = nlohmann::json;

Field field_from_json(const json& j);
json field_to_json(const Field& f);

// decimal string, integer, coefficient array, or a polynomial expression in g
Elem elem_from_json(const Field& f, const json& j);
json elem_to_json(const Elem& x);

PointConfig config_from_json(const json& j);
json config_to_json(const PointConfig& cfg);

Matrix matrix_from_json(const Field& f, const json& rows);
json matrix_to_json(const Matrix& m);
// point matrix for a representation: "point_matrix" rows, or the "points" as columns without normalization,
// permuted by "representation_order" (1-based) when present
Matrix representation_matrix_from_json(const json& j);

// form as an expression string or a list of [exponents, coefficient] pairs
MPoly form_from_json(const Field& f, unsigned nvars, const json& j);
json form_to_json(const MPoly& g);
FormSystem system_from_json(const Field& f, const json& j);

json read_json_file(const std::string& path);
std::string default_data_dir();
json load_dataset(const std::string& name, const std::string& data_dir = "");

}  // namespace nagata
