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

#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ncbase/io.hpp"

using namespace ncbase;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ncbase_io_" + name)).string();
}

}  // namespace

TEST_CASE("matrix JSON round trip", "[io]") {
  Rng rng(91);
  const Mat c = gaussian_mat(rng, 2, 3, Field::Complex);
  const Mat back = mat_from_json(mat_to_json(c, Field::Complex));
  CHECK((back - c).norm() == 0.0);
  const json r = mat_to_json(gaussian_mat(rng, 2, 2, Field::Real), Field::Real);
  CHECK(r["field"] == "R");
  CHECK(r["data"][0].is_number());
}

TEST_CASE("malformed matrices name the problem", "[io]") {
  json j = {{"rows", 2}, {"cols", 2}, {"field", "R"}, {"data", {1, 2, 3}}};
  CHECK_THROWS_AS(mat_from_json(j), ParseError);
  j["data"] = {1, 2, 3, "x"};
  CHECK_THROWS_AS(mat_from_json(j), ParseError);
  CHECK_THROWS_WITH(mat_from_json(json::object(), "basis[3]"), Catch::Contains("basis[3]"));
}

TEST_CASE("system, functional and element round trips", "[io]") {
  Rng rng(92);
  for (Field field : {Field::Real, Field::Complex}) {
    const OperatorSystem s = random_system(rng, 3, 4, field);
    const OperatorSystem s2 = system_from_json(system_to_json(s));
    CHECK(s2.dim() == s.dim());
    CHECK(s2.field() == field);
    for (const Mat& b : s.basis()) CHECK(s2.span_residual(b) < 1e-10);

    const DualElement phi = DualElement::from_representer(s, random_selfadjoint(rng, s, 2));
    const DualElement phi2 = functional_from_json(s, functional_to_json(phi));
    CHECK((phi2.representer() - phi.representer()).norm() < 1e-12);

    const SysElement x = SysElement::from_ambient(s, random_element(rng, s, 2));
    CHECK((element_from_json(s, element_to_json(x)).ambient() - x.ambient()).norm() < 1e-12);
  }
}

TEST_CASE("functional with the wrong number of values is rejected", "[io]") {
  const OperatorSystem s = diagonal_system(3);
  const json j = {{"level", 1}, {"values", {mat_to_json(Mat::Identity(1, 1), Field::Real)}}};
  CHECK_THROWS_AS(functional_from_json(s, j), ParseError);
}

TEST_CASE("base space and operator space round trips", "[io]") {
  Rng rng(93);
  const ClassicalBaseSpace sp = ClassicalBaseSpace::simplex(3);
  const ClassicalBaseSpace sp2 = base_space_from_json(base_space_to_json(sp));
  CHECK(sp2.base_points().size() == 3);
  CHECK((sp2.f1() - sp.f1()).norm() == 0.0);
  const OperatorSpaceRep v = random_operator_space(rng, 2, 3, 2, Field::Complex);
  const OperatorSpaceRep v2 = operator_space_from_json(operator_space_to_json(v));
  CHECK(v2.rows() == 2);
  CHECK(v2.cols() == 3);
  CHECK((v2.basis()[1] - v.basis()[1]).norm() < 1e-14);
}

TEST_CASE("files: syntax errors carry a location", "[io]") {
  const std::string p = temp_path("bad.json");
  {
    std::ofstream f(p);
    f << "{\n  \"rows\": 2,\n  \"cols\" 2\n}\n";
  }
  try {
    read_json_file(p);
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK_THAT(std::string(e.what()), Catch::Contains(p + ":3"));
  }
  CHECK_THROWS_AS(read_json_file(temp_path("missing.json")), ParseError);
  const std::string q = temp_path("ok.json");
  write_json_file(q, json{{"a", 1}});
  CHECK(read_json_file(q)["a"] == 1);
  std::remove(p.c_str());
  std::remove(q.c_str());
}
