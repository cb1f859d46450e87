// Copyright 2026 The Obtuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON encodings.
//
//   complex  {"re": x, "im": y}
//   vector   [complex, ...]
//   matrix   [[complex, ...], ...] (rows)
//   system   {"dim": N, "values": [vector, ...], "probabilities": [p, ...]?}
//   tensor   {"dim": D, "entries": [i][j][k] complex, "constant_coordinate": bool?}
//   family   {"samples": [{"h": h, "tensor": tensor} | {"h": h, "system": system}, ...]}
//   limit    {"dim", "M", "Lambda", "V", "poisson": [{"v", "intensity"}], "brownian"}
//
// Parse failures raise Error(ParseError); unreadable files raise Error(IoError).

#pragma once

#include <string>

#include <json.hpp>

#include "obtuse/obtuse_core.hpp"
#include "obtuse/scaling_limit.hpp"
#include "obtuse/simulate.hpp"
#include "obtuse/tensor3.hpp"
#include "obtuse/tensor_diag.hpp"

namespace obtuse::io {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json system_to_json(const ObtuseSystem& s);
/// Values plus the optional probability list, not yet validated.
struct SystemInput {
  std::vector<ComplexVector> values;
  std::vector<double> probabilities;  ///< empty when absent
};
SystemInput system_input_from_json(const Json& j);
ObtuseSystem system_from_json(const Json& j, double tol = kDefaultTol);

Json tensor_to_json(const Tensor3& s);
Tensor3 tensor_from_json(const Json& j);

Json family_to_json(const std::vector<ComplexVector>& vectors);

TensorFamily tensor_family_from_json(const Json& j, double tol = kDefaultTol);

Json limit_spec_to_json(const LimitSpec& spec);
LimitSpec limit_spec_from_json(const Json& j);

Json validation_to_json(const ObtuseValidation& v);
Json symmetry_to_json(const SymmetryReport& r);
Json limit_symmetry_to_json(const LimitSymmetryReport& r);
Json brackets_to_json(const BracketEstimate& b);
Json moments_to_json(const MomentReport& r);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Pretty JSON with 17 significant digits for doubles.
std::string dump(const Json& j);

}  // namespace obtuse::io
