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

#include "conc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace conc::io {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  throw Rejection("expected a number, got " + j.dump());
}

namespace {

json numbers(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

std::vector<double> numbers_from(const json& j, const char* what) {
  if (!j.is_array()) throw Rejection(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_from(v));
  return out;
}

json params(const std::map<std::string, double>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = number(v);
  return o;
}

}  // namespace

json to_json(const Measure1D& mu) {
  json j;
  j["grid"] = numbers(mu.grid());
  j["potential"] = numbers(mu.potential());
  j["logZ"] = number(mu.log_z());
  j["kappa"] = number(mu.kappa());
  j["logconcave"] = mu.logconcave();
  j["provenance"] = {{"kind", mu.provenance().kind}, {"params", params(mu.provenance().params)}};
  return j;
}

Measure1D measure_from_json(const json& j) {
  if (!j.contains("grid") || !j.contains("potential")) throw Rejection("measure JSON needs grid and potential");
  Provenance prov;
  if (j.contains("provenance")) {
    const auto& p = j["provenance"];
    if (p.contains("kind")) prov.kind = p["kind"].get<std::string>();
    if (p.contains("params"))
      for (const auto& [k, v] : p["params"].items()) prov.params[k] = number_from(v);
  }
  auto mu = Measure1D::from_potential(numbers_from(j["grid"], "grid"), numbers_from(j["potential"], "potential"), prov);
  if (j.contains("logZ")) {
    const double stored = number_from(j["logZ"]);
    if (std::abs(stored - mu.log_z()) > 1e-9 * (1.0 + std::abs(stored)))
      throw Rejection("stored logZ does not match the potential");
  }
  return mu;
}

json to_json(const DiscreteSpace& s) {
  json d = json::array();
  for (int i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < s.size(); ++k) row.push_back(number(s.d(i, k)));
    d.push_back(row);
  }
  return {{"dist", d}, {"weights", numbers(s.weights())}};
}

DiscreteSpace space_from_json(const json& j) {
  if (!j.contains("dist") || !j.contains("weights")) throw Rejection("space JSON needs dist and weights");
  std::vector<std::vector<double>> d;
  for (const auto& row : j["dist"]) d.push_back(numbers_from(row, "dist row"));
  return DiscreteSpace::create(d, numbers_from(j["weights"], "weights"));
}

json to_json(const ConstantEntry& e) {
  return {{"id", e.id},
          {"value", number(e.value)},
          {"direction", to_string(e.direction)},
          {"method", e.method},
          {"certified", e.certified},
          {"witnesses", params(e.witnesses)}};
}

json to_json(const ConstantsReport& r) {
  json a = json::array();
  for (const auto& e : r.entries) a.push_back(to_json(e));
  return {{"constants", a}};
}

json to_json(const PhiGrid& phi) { return {{"x", numbers(phi.x)}, {"y", numbers(phi.y)}}; }

json to_json(const LaplaceBound& b) {
  return {{"phi_grid", to_json(b.phi)}, {"D", number(b.D)}, {"eps", number(b.eps)}, {"delta", number(b.delta)}};
}

json to_json(const ConcBound& b) {
  return {{"phi_grid", to_json(b.phi)}, {"Dp", number(b.Dp)}, {"zp", number(b.zp)}, {"deltap", number(b.deltap)}};
}

json to_json(const Profile& p) {
  return {{"kind", to_string(p.kind)},
          {"exactness", to_string(p.exactness)},
          {"interp", p.interp == Interp::step ? "step" : "linear"},
          {"x", numbers(p.x)},
          {"y", numbers(p.y)}};
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string profile_csv(const Profile& p) {
  std::string out = "input,value,exactness\n";
  for (std::size_t i = 0; i < p.x.size(); ++i)
    out += fmt(p.x[i]) + "," + fmt(p.y[i]) + "," + to_string(p.exactness) + "\n";
  return out;
}

std::string plan_csv(const TransportPlan& plan) {
  std::string out = "i,j,mass\n";
  for (const auto& e : plan.support) out += std::to_string(e.i) + "," + std::to_string(e.j) + "," + fmt(e.mass) + "\n";
  return out;
}

std::string svg_plot(const std::vector<Series>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = kInfinity, x1 = -kInfinity, y0 = kInfinity, y1 = -kInfinity;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << fmt(x0) << "</text>\n";
  o << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
  o << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y0) << "</text>\n";
  o << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y1) << "</text>\n";
  o << "<text x=\"" << (W + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  o << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 " << H / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    o << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      o << buf;
    }
    o << "\"/>\n";
    o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 16 * (k + 1) << "\" font-size=\"12\" text-anchor=\"end\" fill=\""
      << colors[k % 6] << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Rejection("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Rejection(path + ": " + e.what());
  }
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw Rejection("cannot open " + path);
  std::string line;
  std::vector<std::vector<double>> rows;
  header.clear();
  std::vector<bool> numeric;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (first) {
      header = cells;
      first = false;
      continue;
    }
    if (numeric.empty()) {
      for (const auto& c : cells) {
        char* end = nullptr;
        std::strtod(c.c_str(), &end);
        numeric.push_back(end && *end == '\0' && !c.empty());
      }
    }
    std::vector<double> row;
    for (std::size_t k = 0; k < cells.size() && k < numeric.size(); ++k)
      if (numeric[k]) row.push_back(std::strtod(cells[k].c_str(), nullptr));
    rows.push_back(row);
  }
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < header.size() && k < numeric.size(); ++k)
    if (numeric[k]) kept.push_back(header[k]);
  header = kept;
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Rejection("cannot write " + path);
  out << text;
}

}  // namespace conc::io
