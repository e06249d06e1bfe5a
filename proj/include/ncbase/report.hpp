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

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ncbase {

enum class CheckStatus { Pass, Fail, Indeterminate };

const char* to_string(CheckStatus s);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::Indeterminate;
  double observed = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
};

struct Report {
  std::vector<CheckRecord> records;

  /// Records observed <= bound + tolerance.
  void check_le(std::string name, double observed, double bound, double tolerance);
  /// Records observed >= bound - tolerance.
  void check_ge(std::string name, double observed, double bound, double tolerance);
  void add(CheckRecord r) { records.push_back(std::move(r)); }
  void merge(const Report& other, const std::string& prefix = "");

  /// Fail if any record failed, else indeterminate if any was, else pass.
  CheckStatus overall() const;
  nlohmann::json to_json() const;
};

}  // namespace ncbase
