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

#include "ncbase/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ncbase {

namespace {

const json& field_of(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

int int_of(const json& j, const char* key, const std::string& where) {
  const json& v = field_of(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + ": field \"" + key + "\" must be an integer");
  return v.get<int>();
}

Field field_tag_of(const json& j, const std::string& where) {
  const json& v = field_of(j, "field", where);
  if (!v.is_string()) throw ParseError(where + ": field \"field\" must be \"R\" or \"C\"");
  try {
    return parse_field(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

const json& array_of(const json& j, const char* key, const std::string& where) {
  const json& v = field_of(j, key, where);
  if (!v.is_array()) throw ParseError(where + ": field \"" + key + "\" must be an array");
  return v;
}

std::vector<Mat> mats_of(const json& arr, const std::string& where) {
  std::vector<Mat> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(mat_from_json(arr[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RVec rvec_of(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array of numbers");
  RVec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
    v(i) = arr[i].get<double>();
  }
  return v;
}

json rvec_to_json(const RVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << std::setw(2) << j << "\n";
}

json mat_to_json(const Mat& m, Field field) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (field == Field::Real) {
        data.push_back(m(i, j).real());
      } else {
        data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
      }
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"field", field_tag(field)}, {"data", data}};
}

Mat mat_from_json(const json& j, const std::string& where) {
  const int rows = int_of(j, "rows", where), cols = int_of(j, "cols", where);
  if (rows < 0 || cols < 0) throw ParseError(where + ": negative shape");
  const Field field = j.contains("field") ? field_tag_of(j, where) : Field::Complex;
  const json& data = array_of(j, "data", where);
  if (data.size() != static_cast<std::size_t>(rows) * cols) {
    throw ParseError(where + ": \"data\" has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const json& e = data[static_cast<std::size_t>(i) * cols + c];
      const std::string at = where + ".data[" + std::to_string(i * cols + c) + "]";
      if (e.is_number()) {
        m(i, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        if (field == Field::Real && e[1].get<double>() != 0.0) {
          throw ParseError(at + ": complex entry in a real matrix");
        }
        m(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ParseError(at + ": expected a number or [re, im]");
      }
    }
  return m;
}

json system_to_json(const OperatorSystem& sys) {
  json basis = json::array();
  for (const Mat& b : sys.basis()) basis.push_back(mat_to_json(b, sys.field()));
  return {{"field", field_tag(sys.field())}, {"ambient_dim", sys.ambient_dim()}, {"basis", basis}};
}

OperatorSystem system_from_json(const json& j) {
  const std::string where = "system";
  const Field field = field_tag_of(j, where);
  const int d = int_of(j, "ambient_dim", where);
  const std::vector<Mat> basis = mats_of(array_of(j, "basis", where), where + ".basis");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].rows() != d || basis[i].cols() != d) {
      throw ParseError(where + ".basis[" + std::to_string(i) + "]: expected a " + std::to_string(d) + "x" +
                       std::to_string(d) + " matrix");
    }
  }
  try {
    return OperatorSystem::make(basis, field);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

json functional_to_json(const DualElement& phi) {
  json values = json::array();
  for (const Mat& v : phi.values()) values.push_back(mat_to_json(v, phi.system().field()));
  return {{"level", phi.level()}, {"values", values}};
}

DualElement functional_from_json(const OperatorSystem& sys, const json& j) {
  const std::string where = "functional";
  const int n = int_of(j, "level", where);
  std::vector<Mat> values = mats_of(array_of(j, "values", where), where + ".values");
  if (static_cast<int>(values.size()) != sys.dim()) {
    throw ParseError(where + ": expected " + std::to_string(sys.dim()) + " values, one per basis element");
  }
  for (const Mat& v : values) {
    if (v.rows() != n || v.cols() != n) throw ParseError(where + ": values must be level x level");
  }
  return DualElement(sys, std::move(values));
}

json element_to_json(const SysElement& x) {
  json coeffs = json::array();
  for (const Mat& c : x.coefficients()) coeffs.push_back(mat_to_json(c, x.system().field()));
  return {{"level", x.level()}, {"coefficients", coeffs}};
}

SysElement element_from_json(const OperatorSystem& sys, const json& j) {
  const std::string where = "element";
  const int n = int_of(j, "level", where);
  std::vector<Mat> coeffs = mats_of(array_of(j, "coefficients", where), where + ".coefficients");
  if (static_cast<int>(coeffs.size()) != sys.dim()) {
    throw ParseError(where + ": expected " + std::to_string(sys.dim()) + " coefficients, one per basis element");
  }
  for (const Mat& c : coeffs) {
    if (c.rows() != n || c.cols() != n) throw ParseError(where + ": coefficients must be level x level");
  }
  return SysElement(sys, std::move(coeffs));
}

json base_space_to_json(const ClassicalBaseSpace& sp) {
  json pts = json::array();
  for (const RVec& p : sp.base_points()) pts.push_back(rvec_to_json(p));
  return {{"dim", sp.dim()}, {"field", "R"}, {"base_points", pts}, {"f1", rvec_to_json(sp.f1())}};
}

ClassicalBaseSpace base_space_from_json(const json& j) {
  const std::string where = "base space";
  const int dim = int_of(j, "dim", where);
  if (j.contains("field") && field_tag_of(j, where) != Field::Real) {
    throw ParseError(where + ": only real base spaces are supported");
  }
  const json& arr = array_of(j, "base_points", where);
  std::vector<RVec> pts;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    pts.push_back(rvec_of(arr[i], where + ".base_points[" + std::to_string(i) + "]"));
    if (pts.back().size() != dim) throw ParseError(where + ": base point " + std::to_string(i) + " has the wrong length");
  }
  try {
    if (j.contains("f1")) return ClassicalBaseSpace::make(std::move(pts), rvec_of(j["f1"], where + ".f1"));
    return ClassicalBaseSpace::make(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

json operator_space_to_json(const OperatorSpaceRep& v) {
  json basis = json::array();
  for (const Mat& b : v.basis()) basis.push_back(mat_to_json(b, v.field()));
  return {{"field", field_tag(v.field())}, {"shape", {v.rows(), v.cols()}}, {"basis", basis}};
}

OperatorSpaceRep operator_space_from_json(const json& j) {
  const std::string where = "operator space";
  const Field field = field_tag_of(j, where);
  const json& shape = array_of(j, "shape", where);
  if (shape.size() != 2 || !shape[0].is_number_integer() || !shape[1].is_number_integer()) {
    throw ParseError(where + ": \"shape\" must be [d1, d2]");
  }
  const std::vector<Mat> basis = mats_of(array_of(j, "basis", where), where + ".basis");
  try {
    return OperatorSpaceRep::make(shape[0].get<int>(), shape[1].get<int>(), basis, field);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace ncbase
