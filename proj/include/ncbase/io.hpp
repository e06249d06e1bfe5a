// Copyright 2026 The ncbase Authors
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

// JSON formats.
//
//   matrix          {"rows": r, "cols": c, "field": "R"|"C", "data": [...]}
//                   data is row major; complex entries are [re, im].
//   system          {"field", "ambient_dim", "basis": [matrix, ...]}
//   functional      {"level", "values": [matrix, ...]}  one value per basis element
//   element         {"level", "coefficients": [matrix, ...]}
//   base space      {"dim", "field": "R", "base_points": [[...], ...], "f1": [...]}
//   operator space  {"field", "shape": [d1, d2], "basis": [matrix, ...]}

#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ncbase/classical.hpp"
#include "ncbase/cones.hpp"
#include "ncbase/opsys.hpp"
#include "ncbase/paulsen.hpp"

namespace ncbase {

using json = nlohmann::json;

/// Malformed input; the message names the file, line and offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

json mat_to_json(const Mat& m, Field field);
Mat mat_from_json(const json& j, const std::string& where = "matrix");

json system_to_json(const OperatorSystem& sys);
OperatorSystem system_from_json(const json& j);

json functional_to_json(const DualElement& phi);
DualElement functional_from_json(const OperatorSystem& sys, const json& j);

json element_to_json(const SysElement& x);
SysElement element_from_json(const OperatorSystem& sys, const json& j);

json base_space_to_json(const ClassicalBaseSpace& sp);
ClassicalBaseSpace base_space_from_json(const json& j);

json operator_space_to_json(const OperatorSpaceRep& v);
OperatorSpaceRep operator_space_from_json(const json& j);

}  // namespace ncbase
