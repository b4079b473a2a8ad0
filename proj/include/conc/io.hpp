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

#ifndef CONC_IO_HPP_
#define CONC_IO_HPP_

#include <string>
#include <vector>

#include "conc/laplace.hpp"
#include "conc/measure.hpp"
#include "conc/profile.hpp"
#include "conc/report.hpp"
#include "conc/transport.hpp"
#include "json.hpp"

namespace conc::io {

using nlohmann::json;

/// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
json number(double x);
double number_from(const json& j);

json to_json(const Measure1D& mu);
Measure1D measure_from_json(const json& j);
json to_json(const DiscreteSpace& s);
DiscreteSpace space_from_json(const json& j);
json to_json(const ConstantEntry& e);
json to_json(const ConstantsReport& r);
json to_json(const PhiGrid& phi);
json to_json(const LaplaceBound& b);
json to_json(const ConcBound& b);
json to_json(const Profile& p);

/// 12 significant digits; inf / -inf / nan spelled out.
std::string fmt(double x);
/// input,value,exactness
std::string profile_csv(const Profile& p);
/// i,j,mass
std::string plan_csv(const TransportPlan& plan);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Plain SVG line plot, one polyline per series. Non-finite points are skipped.
std::string svg_plot(const std::vector<Series>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label);

json read_json(const std::string& path);
/// Numeric CSV with a header row; non-numeric cells (e.g. an exactness column) are dropped.
std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>& header);
void write_text(const std::string& path, const std::string& text);

}  // namespace conc::io

#endif  // CONC_IO_HPP_
