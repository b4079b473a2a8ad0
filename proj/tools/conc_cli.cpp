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


// conc: build measures, compute profiles, transport costs and constants, run
// the verification suites and plot profile tables.
//
// Exit codes: 0 success, 1 a verification suite failed, 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conc/cost.hpp"
#include "conc/functional.hpp"
#include "conc/io.hpp"
#include "conc/measure.hpp"
#include "conc/profile.hpp"
#include "conc/suites.hpp"
#include "conc/transport.hpp"

namespace fs = std::filesystem;
using namespace conc;
using nlohmann::json;

namespace {

struct Common {
  std::string out_dir = ".";
  int jobs = 0;
  std::string config;
};

struct MeasureSource {
  std::string in;
  std::string preset;
  double p = 2.0;
  double a = 0.0;
  std::size_t points = 4097;
};

void add_source(CLI::App* cmd, MeasureSource& src) {
  cmd->add_option("--in", src.in, "measure JSON file");
  cmd->add_option("--preset", src.preset, "gamma_p or gaussian_restricted")
      ->check(CLI::IsMember({"gamma_p", "gaussian_restricted"}));
  cmd->add_option("--p", src.p, "exponent of the gamma_p preset")->capture_default_str();
  cmd->add_option("--a", src.a, "left end of gaussian_restricted")->capture_default_str();
  cmd->add_option("--points", src.points, "grid points for presets")->capture_default_str();
}

Measure1D load_measure(const MeasureSource& src) {
  if (!src.in.empty()) return io::measure_from_json(io::read_json(src.in));
  BuildOptions o;
  o.points = src.points;
  if (src.preset == "gamma_p") return build_gamma_p(src.p, o);
  if (src.preset == "gaussian_restricted") return build_gaussian_restricted(src.a, o);
  throw Rejection("give a measure with --in or --preset");
}

bool is_space(const json& j) { return j.contains("dist"); }

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / name).string();
}

void emit(const Common& c, const std::string& name, const std::string& text) {
  const std::string path = out_path(c, name);
  io::write_text(path, text);
  std::cerr << "wrote " << path << "\n";
}

int cmd_measure_build(const Common& c, const MeasureSource& src, const std::string& potential_csv,
                      const std::string& name) {
  if (!potential_csv.empty()) {
    std::vector<std::string> header;
    auto rows = io::read_csv(potential_csv, header);
    std::vector<double> x, v;
    for (const auto& r : rows) {
      if (r.size() < 2) throw Rejection("potential CSV needs columns x,V");
      x.push_back(r[0]);
      v.push_back(r[1]);
    }
    emit(c, name, io::to_json(build_from_potential(std::move(x), std::move(v))).dump(1) + "\n");
    return 0;
  }
  emit(c, name, io::to_json(load_measure(src)).dump(1) + "\n");
  return 0;
}

struct DeriveArgs {
  std::string op;
  double lo = -kInfinity, hi = kInfinity, shift = 0.0, scale = 1.0, cap = 0.0;
  std::string phi_csv;
};

int cmd_measure_derive(const Common& c, const MeasureSource& src, const DeriveArgs& d, const std::string& name) {
  const Measure1D mu = load_measure(src);
  Measure1D out = [&] {
    if (d.op == "restrict") return derive_restrict(mu, d.lo, d.hi);
    if (d.op == "translate") return derive_translate(mu, d.shift);
    if (d.op == "dilate") return derive_dilate(mu, d.scale);
    // density-ratio: phi sampled at the grid nodes, interpolated from the CSV.
    std::vector<std::string> header;
    auto rows = io::read_csv(d.phi_csv, header);
    Profile table;
    for (const auto& r : rows) {
      if (r.size() < 2) throw Rejection("phi CSV needs columns x,phi");
      table.x.push_back(r[0]);
      table.y.push_back(r[1]);
    }
    table.validate();
    std::vector<double> phi;
    for (double x : mu.grid()) phi.push_back(table(x));
    return derive_density_ratio(mu, phi, d.cap);
  }();
  emit(c, name, io::to_json(out).dump(1) + "\n");
  return 0;
}

int cmd_profile(const Common& c, const std::string& kind, const MeasureSource& src) {
  Profile p;
  if (!src.in.empty() && kind == "conc") {
    json j = io::read_json(src.in);
    if (is_space(j)) p = conc_profile_discrete(io::space_from_json(j));
    else p = conc_profile_1d(io::measure_from_json(j));
  } else {
    const Measure1D mu = load_measure(src);
    p = kind == "iso" ? iso_profile_1d(mu) : conc_profile_1d(mu);
  }
  emit(c, "profile_" + kind + ".csv", io::profile_csv(p));
  emit(c, "profile_" + kind + ".json", io::to_json(p).dump(1) + "\n");
  return 0;
}

struct TransportArgs {
  std::string a, b;
  double p = 2.0;
  double D = 1.0;
};

int cmd_transport(const Common& c, const std::string& what, const TransportArgs& t) {
  const json ja = io::read_json(t.a), jb = io::read_json(t.b);
  if (is_space(ja) != is_space(jb)) throw Rejection("both inputs must be measures of the same kind");
  const CostSpec spec = CostSpec::from_p(t.p);
  json out;
  out["command"] = "transport " + what;
  if (is_space(ja)) {
    const DiscreteSpace sa = io::space_from_json(ja), sb = io::space_from_json(jb);
    if (sa.dist() != sb.dist()) throw Rejection("finite measures must share the metric");
    const auto& nu = sa.weights();
    const auto& mu = sb.weights();
    if (what == "w1") {
      out["W1"] = io::number(w1_discrete(sa, nu, mu));
    } else if (what == "wc") {
      auto plan = wc_discrete_lp(sa, nu, mu, cost_matrix(sa, [&](double d) { return phi(spec, t.D * d); }));
      out["p"] = t.p;
      out["D"] = t.D;
      out["cost"] = io::number(plan.cost);
      out["marginal_residual"] = plan.marginal_residual;
      emit(c, "plan.csv", io::plan_csv(plan));
    } else {
      auto dv = divergences(nu, mu);
      out["H_a_b"] = io::number(dv.h_nu_mu);
      out["H_b_a"] = io::number(dv.h_mu_nu);
      out["TV"] = io::number(dv.tv);
    }
  } else {
    const Measure1D a = io::measure_from_json(ja), b = io::measure_from_json(jb);
    if (what == "w1") {
      out["W1"] = io::number(w1_1d(a, b));
    } else if (what == "wc") {
      out["p"] = t.p;
      out["D"] = t.D;
      out["cost"] = io::number(wc_monotone_1d(a, b, spec, t.D));
    } else {
      out["H_a_b"] = io::number(relative_entropy_1d(a, b));
      out["H_b_a"] = io::number(relative_entropy_1d(b, a));
      out["TV"] = io::number(total_variation_1d(a, b));
    }
  }
  for (const auto& [k, v] : out.items())
    if (k != "command") std::cout << k << "," << (v.is_number() ? io::fmt(v.get<double>()) : v.get<std::string>()) << "\n";
  emit(c, "transport_" + what + ".json", out.dump(1) + "\n");
  return 0;
}

int cmd_constants(const Common& c, const MeasureSource& src, double p) {
  ConstantsReport rep;
  FitOptions fo;
  fo.p = p;
  auto rename = [](ConstantEntry e, const std::string& id) {
    e.id = id;
    return e;
  };
  const std::string ps = io::fmt(p);
  json j = src.in.empty() ? json() : io::read_json(src.in);
  if (!src.in.empty() && is_space(j)) {
    const DiscreteSpace s = io::space_from_json(j);
    rep.entries.push_back(rename(fit_constant(conc_profile_discrete(s), FitTemplate::p_exp_conc, fo), "D_Con_" + ps));
    if (s.size() <= 8) rep.entries.push_back(first_moment_constant(s));
    for (TeMode m : {TeMode::weak_1p, TeMode::one_phi, TeMode::phi_one})
      if (m != TeMode::phi_one || p <= 2.0) rep.entries.push_back(te_constant_estimate(s, {m, p, 1.0}));
  } else {
    const Measure1D mu = load_measure(src);
    rep.entries.push_back(rename(fit_constant(iso_profile_1d(mu), FitTemplate::p_exp_iso, fo), "D_Iso_" + ps));
    rep.entries.push_back(rename(fit_constant(conc_profile_1d(mu), FitTemplate::p_exp_conc, fo), "D_Con_" + ps));
    rep.entries.push_back(first_moment_constant_1d(mu));
    if (mu.size() >= 256) {
      rep.entries.push_back(poincare_constant_1d(mu));
      rep.entries.push_back(logsob_constant_1d(mu));
    }
    const auto ws = default_witnesses_1d(mu);
    for (TeMode m : {TeMode::weak_1p, TeMode::one_phi, TeMode::phi_one})
      if (m != TeMode::phi_one || p <= 2.0) rep.entries.push_back(te_constant_estimate_1d(mu, {m, p, 1.0}, ws));
  }
  for (const auto& e : rep.entries)
    std::cout << e.id << "," << io::fmt(e.value) << "," << to_string(e.direction) << "\n";
  emit(c, "constants.json", io::to_json(rep).dump(1) + "\n");
  return 0;
}

int cmd_verify(const Common& c, std::vector<std::string> ids, std::uint64_t seed) {
  if (ids.empty()) throw Rejection("name at least one suite or 'all'");
  if (ids.size() == 1 && ids[0] == "all") ids = suite_ids();
  for (const auto& id : ids)
    if (std::find(suite_ids().begin(), suite_ids().end(), id) == suite_ids().end())
      throw Rejection("unknown suite id: " + id);
  const json cfg = merge_suite_config(c.config.empty() ? json() : io::read_json(c.config));
  bool all_pass = true;
  json combined = {{"seed", seed}, {"suites", json::array()}};
  for (const auto& id : ids) {
    const SuiteReport r = run_suite(id, cfg, seed);
    const json j = to_json(r);
    emit(c, "verify_" + id + ".json", j.dump(1) + "\n");
    combined["suites"].push_back({{"suite", id}, {"passed", r.passed}, {"violations", r.violations},
                                  {"summary", j["summary"]}, {"notes", r.notes}});
    std::cout << (r.passed ? "PASS " : "FAIL ") << id << " (violations " << r.violations << ")\n";
    for (const auto& n : r.notes) std::cout << "  " << n << "\n";
    all_pass = all_pass && r.passed;
  }
  combined["passed"] = all_pass;
  emit(c, "verify_report.json", combined.dump(1) + "\n");
  return all_pass ? 0 : 1;
}

int cmd_plot(const Common& c, const std::string& csv, const std::string& title) {
  std::vector<std::string> header;
  auto rows = io::read_csv(csv, header);
  if (header.size() < 2) throw Rejection("plot needs at least two numeric columns");
  std::vector<io::Series> series;
  for (std::size_t col = 1; col < header.size(); ++col) {
    io::Series s;
    s.label = header[col];
    for (const auto& r : rows) {
      s.x.push_back(r[0]);
      s.y.push_back(r[col]);
    }
    series.push_back(std::move(s));
  }
  const std::string stem = fs::path(csv).stem().string();
  emit(c, stem + ".svg", io::svg_plot(series, title.empty() ? stem : title, header[0], header[1]));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conc: concentration, isoperimetry and transport-entropy toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--out-dir", common.out_dir, "directory for written artifacts")->capture_default_str();
  app.add_option("--jobs", common.jobs, "worker threads (default: logical cores; CONC_TOOLKIT_JOBS overrides)");
  app.add_option("--config", common.config, "suite config JSON overlay")->check(CLI::ExistingFile);

  MeasureSource src;
  std::string name = "measure.json", potential_csv;
  auto* measure = app.add_subcommand("measure", "build or derive a one-dimensional measure");
  measure->require_subcommand(1);
  auto* build = measure->add_subcommand("build", "build from a preset or a potential CSV");
  add_source(build, src);
  build->add_option("--potential-csv", potential_csv, "CSV with columns x,V")->check(CLI::ExistingFile);
  build->add_option("--name", name, "output file name")->capture_default_str();
  DeriveArgs dargs;
  auto* derive = measure->add_subcommand("derive", "restrict, translate, dilate or reweight a measure");
  add_source(derive, src);
  derive->add_option("--op", dargs.op, "operation")
      ->required()
      ->check(CLI::IsMember({"restrict", "translate", "dilate", "density-ratio"}));
  derive->add_option("--lo", dargs.lo, "restriction lower end");
  derive->add_option("--hi", dargs.hi, "restriction upper end");
  derive->add_option("--shift", dargs.shift, "translation");
  derive->add_option("--scale", dargs.scale, "dilation factor");
  derive->add_option("--phi-csv", dargs.phi_csv, "log density ratio, columns x,phi");
  derive->add_option("--cap", dargs.cap, "bound D on sup log(d mu2/d mu1)");
  derive->add_option("--name", name, "output file name")->capture_default_str();

  std::string profile_kind;
  auto* profile = app.add_subcommand("profile", "isoperimetric or concentration profile as CSV");
  profile->add_option("kind", profile_kind, "iso or conc")->required()->check(CLI::IsMember({"iso", "conc"}));
  add_source(profile, src);

  std::string transport_kind;
  TransportArgs targs;
  auto* transport = app.add_subcommand("transport", "transport costs and divergences between two measures");
  transport->add_option("kind", transport_kind, "w1, wc or divergence")
      ->required()
      ->check(CLI::IsMember({"w1", "wc", "divergence"}));
  transport->add_option("--a", targs.a, "first measure (JSON)")->required()->check(CLI::ExistingFile);
  transport->add_option("--b", targs.b, "second measure (JSON)")->required()->check(CLI::ExistingFile);
  transport->add_option("--p", targs.p, "cost exponent for wc")->capture_default_str();
  transport->add_option("--D", targs.D, "rate D in phi_p(D d)")->capture_default_str();

  std::string constants_kind;
  double constants_p = 1.0;
  auto* constants = app.add_subcommand("constants", "estimate the constants of a measure");
  constants->add_option("kind", constants_kind, "all")->required()->check(CLI::IsMember({"all"}));
  add_source(constants, src);
  constants->add_option("--exponent", constants_p, "exponent p of the p-dependent constants")->capture_default_str();

  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "run verification suites (ids or 'all')");
  verify->add_option("suites", suites, "suite ids")->required();
  verify->add_option("--seed", seed, "64-bit seed")->capture_default_str();

  std::string plot_csv, plot_title;
  auto* plot = app.add_subcommand("plot", "SVG plot of a profile CSV");
  plot->add_option("csv", plot_csv, "CSV file")->required()->check(CLI::ExistingFile);
  plot->add_option("--title", plot_title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  int jobs = common.jobs;
  if (const char* env = std::getenv("CONC_TOOLKIT_JOBS")) {
    try {
      jobs = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: CONC_TOOLKIT_JOBS must be an integer\n";
      return 2;
    }
  }
  set_jobs(jobs);

  try {
    if (build->parsed()) return cmd_measure_build(common, src, potential_csv, name);
    if (derive->parsed()) return cmd_measure_derive(common, src, dargs, name);
    if (profile->parsed()) return cmd_profile(common, profile_kind, src);
    if (transport->parsed()) return cmd_transport(common, transport_kind, targs);
    if (constants->parsed()) return cmd_constants(common, src, constants_p);
    if (verify->parsed()) return cmd_verify(common, suites, seed);
    if (plot->parsed()) return cmd_plot(common, plot_csv, plot_title);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << app.help();
  return 2;
}
