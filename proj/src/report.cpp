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

#include "ncbase/report.hpp"

#include <cmath>

namespace ncbase {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

void Report::check_le(std::string name, double observed, double bound, double tolerance) {
  CheckStatus st = CheckStatus::Indeterminate;
  if (std::isfinite(observed)) st = observed <= bound + tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  records.push_back({std::move(name), st, observed, bound, tolerance});
}

void Report::check_ge(std::string name, double observed, double bound, double tolerance) {
  CheckStatus st = CheckStatus::Indeterminate;
  if (std::isfinite(observed)) st = observed >= bound - tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  records.push_back({std::move(name), st, observed, bound, tolerance});
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (CheckRecord r : other.records) {
    r.name = prefix + r.name;
    records.push_back(std::move(r));
  }
}

CheckStatus Report::overall() const {
  bool indeterminate = false;
  for (const auto& r : records) {
    if (r.status == CheckStatus::Fail) return CheckStatus::Fail;
    if (r.status == CheckStatus::Indeterminate) indeterminate = true;
  }
  return indeterminate ? CheckStatus::Indeterminate : CheckStatus::Pass;
}

nlohmann::json Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    // JSON has no NaN; non-finite observations are reported as null.
    nlohmann::json obs = std::isfinite(r.observed) ? nlohmann::json(r.observed) : nlohmann::json();
    arr.push_back({{"name", r.name},
                   {"status", to_string(r.status)},
                   {"observed", obs},
                   {"bound", r.bound},
                   {"tolerance", r.tolerance}});
  }
  return arr;
}

}  // namespace ncbase
