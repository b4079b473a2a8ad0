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

// Estimated constants with the direction of the guarantee they carry.

#ifndef CONC_REPORT_HPP_
#define CONC_REPORT_HPP_

#include <map>
#include <string>
#include <vector>

namespace conc {

enum class Direction { upper, lower, two_sided };

const char* to_string(Direction d);

struct ConstantEntry {
  std::string id;
  double value = 0.0;
  Direction direction = Direction::two_sided;
  std::string method;
  /// False when the number came from a heuristic search rather than an
  /// exact table.
  bool certified = false;
  /// Named numbers that reproduce the value (parameters of the best witness,
  /// secondary extremes ...).
  std::map<std::string, double> witnesses;
};

struct ConstantsReport {
  std::vector<ConstantEntry> entries;
  const ConstantEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

}  // namespace conc

#endif  // CONC_REPORT_HPP_
