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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "conc/io.hpp"
#include "doctest.h"

using namespace conc;
using nlohmann::json;

TEST_CASE("non-finite numbers are spelled out") {
  CHECK(io::number(kInfinity) == "inf");
  CHECK(io::number(-kInfinity) == "-inf");
  CHECK(io::number(std::nan("")) == "nan");
  CHECK(io::number(1.5) == 1.5);
  CHECK(is_plus_infinity(io::number_from("inf")));
  CHECK(io::number_from(json(2.25)) == 2.25);
  CHECK_THROWS_AS(io::number_from("many"), Rejection);
  CHECK(io::fmt(kInfinity) == "inf");
  CHECK(io::fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(io::fmt(123456789.123456789) == "123456789.123");
}

TEST_CASE("measure JSON round trip") {
  auto mu = derive_restrict(build_gamma_p(1.5, {513, 1e-60}), -1.0, 4.0);
  auto back = io::measure_from_json(json::parse(io::to_json(mu).dump()));
  REQUIRE(back.size() == mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(back.grid()[i] == mu.grid()[i]);
    CHECK(back.potential()[i] == mu.potential()[i]);
  }
  CHECK(back.log_z() == doctest::Approx(mu.log_z()).epsilon(1e-12));
  CHECK(back.provenance().kind == "restrict");
  CHECK(back.provenance().params.at("p") == mu.provenance().params.at("p"));
  json j = io::to_json(mu);
  j["logZ"] = j["logZ"].get<double>() + 1.0;
  CHECK_THROWS_AS(io::measure_from_json(j), Rejection);
}

TEST_CASE("space JSON round trip keeps the metric checks") {
  auto s = path_space(4);
  auto back = io::space_from_json(io::to_json(s));
  CHECK(back.dist() == s.dist());
  CHECK(back.weights() == s.weights());
  json bad = io::to_json(s);
  bad["dist"][0][3] = 10.0;
  bad["dist"][3][0] = 10.0;
  CHECK_THROWS(io::space_from_json(bad));
}

TEST_CASE("constants and profiles serialize with direction and exactness") {
  ConstantsReport rep;
  rep.entries.push_back({"D_FM", kInfinity, Direction::two_sided, "test", true, {{"w", 1.0}}});
  json j = io::to_json(rep);
  CHECK(j["constants"][0]["value"] == "inf");
  CHECK(j["constants"][0]["direction"] == "two-sided");
  Profile p;
  p.kind = ProfileKind::iso;
  p.x = {0.1, 0.2};
  p.y = {0.1, 0.2};
  CHECK(io::to_json(p)["exactness"] == "exact");
  const std::string csv = io::profile_csv(p);
  CHECK(csv.rfind("input,value,exactness\n", 0) == 0);
  CHECK(csv.find("0.1,0.1,exact\n") != std::string::npos);
}

TEST_CASE("CSV reader keeps numeric columns; SVG has one polyline per series") {
  const auto dir = std::filesystem::temp_directory_path() / "conc_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "p.csv").string();
  io::write_text(path, "input,value,exactness\n1,2,exact\n3,inf,exact\n");
  std::vector<std::string> header;
  auto rows = io::read_csv(path, header);
  CHECK(header == std::vector<std::string>{"input", "value"});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<double>{1, 2});
  CHECK(is_plus_infinity(rows[1][1]));
  const std::string svg = io::svg_plot({{"a", {0, 1, 2}, {0, 1, 4}}, {"b", {0, 1}, {1, kInfinity}}}, "t", "x", "y");
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t count = 0;
  for (std::size_t at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) ++count;
  CHECK(count == 2);
  std::filesystem::remove_all(dir);
}
