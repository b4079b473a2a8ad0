// Copyright 2026 The conc-toolkit Authors
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


// Verification suites: families of instances run through the library, each
// either checked exactly (zero violations) or summarized by fitted constants
// that must stay above a floor.

#ifndef CONC_SUITES_HPP_
#define CONC_SUITES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conc/common.hpp"
#include "json.hpp"

namespace conc {

struct SuiteInstance {
  int index = 0;
  std::string descriptor;
  bool pass = true;
  std::map<std::string, double> values;
};

struct SuiteReport {
  std::string id;
  std::uint64_t seed = 0;
  bool exact = false;
  bool passed = false;
  int violations = 0;
  std::vector<SuiteInstance> instances;
  /// Fitted constants, extremes and gate thresholds.
  std::map<std::string, double> summary;
  /// Failed gates, in evaluation order.
  std::vector<std::string> notes;
};

/// Registered suite ids in run order.
const std::vector<std::string>& suite_ids();
bool suite_is_exact(const std::string& id);

/// Default configuration: {"version": 1, "suites": {id: {...}}}.
const nlohmann::json& default_suite_config();
/// Overlays `overrides` onto the defaults key by key; rejects unknown suites
/// and unknown keys.
nlohmann::json merge_suite_config(const nlohmann::json& overrides);

/// Runs one suite. Instances are spread over threads when `exec` is parallel;
/// each draws from its own stream derived from (seed, index) and the report
/// lists them by index, so the result does not depend on the thread count.
SuiteReport run_suite(const std::string& id, const nlohmann::json& config, std::uint64_t seed,
                      Exec exec = Exec::parallel);

nlohmann::json to_json(const SuiteReport& r);

}  // namespace conc

#endif  // CONC_SUITES_HPP_
