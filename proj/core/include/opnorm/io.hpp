#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "opnorm/estimate.hpp"
#include "opnorm/opspace.hpp"

namespace opnorm::io {

using Json = nlohmann::json;

// Complex entries are written as [re, im]; plain numbers are accepted on input.
// Matrices are arrays of rows. A space basis element is a flat row-major list.

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Spaces are read either from the full object form or from a reference
/// string such as "row:3" or "full:2x2".
Json to_json(const ConcreteOperatorSpace& e);
ConcreteOperatorSpace space_from_json(const Json& j);

Json to_json(const TensorElement& t);
TensorElement tensor_from_json(const Json& j);

Json to_json(const SpaceMap& u);
SpaceMap map_from_json(const Json& j);

/// {"spaces": [s1, s2, s3], "coeffs": [[[c_ijk]]]}.
Json to_json(const Tensor3& t);
Tensor3 tensor3_from_json(const Json& j);

/// The certificate alternative held by a NormEstimate, by name.
const char* certificate_kind(const Certificate& c);
Json certificate_to_json(const Certificate& c);

/// {"value", "bound_kind", "seed", "converged", "iterations", "path",
/// "certificate_kind"} plus "certificate" when requested.
Json to_json(const NormEstimate& e, bool with_certificate = false);

/// Throws IoError.
Json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace opnorm::io
