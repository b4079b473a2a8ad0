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


#include "conc/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include "conc/cost.hpp"
#include "conc/functional.hpp"
#include "conc/io.hpp"
#include "conc/laplace.hpp"
#include "conc/measure.hpp"
#include "conc/profile.hpp"
#include "conc/transport.hpp"

namespace conc {

namespace {

using json = nlohmann::json;

const char* kDefaultConfig = R"json({
  "version": 1,
  "suites": {
    "going-down-exact": {"trials": 100, "n_max": 10, "tolerance": 1e-9},
    "iso-stability-shape": {
      "points": 1025,
      "p": [1, 1.5, 2, 3],
      "restrict_u": [0.5, 0.9, 0.99],
      "tilt_t": [0.25, 1],
      "tilt_c": [0, 2],
      "curve_D": [0, 0.5, 1, 2, 4, 8],
      "curve_band": 4,
      "floor": 0.2
    },
    "logsob-stability": {
      "points": 1025,
      "bases": [2, 3],
      "mass": [0.05, 0.1, 0.2, 0.4, 0.6, 0.9],
      "floor": 0.5,
      "chain_floor": 1
    },
    "w1-fm-exact": {"trials": 100, "n_max": 6, "tolerance": 1e-9},
    "w1-stability-chain": {
      "points": 1025,
      "bases": [1, 2, 3],
      "translate": [0.5, 2],
      "dilate": [0.5, 2],
      "up_entropy_max": 1,
      "floor": 0.15
    },
    "conc-te-equiv": {"points": 1025, "p": [1, 1.5, 2, 3], "band": 25},
    "te-jensen-pointwise": {"trials": 100, "n_max": 8, "p": [1, 1.25, 1.5, 2], "tolerance": 1e-9},
    "te-equiv-shape": {"points": 1025, "p": [1, 1.5, 2], "floor": 0.4},
    "hierarchy-gamma-p": {
      "points": 1025,
      "p": [1, 1.5, 2, 3],
      "v_min": 1e-6,
      "iso_floor": 0.5,
      "band": 10
    },
    "bg-duality": {"trials": 50, "n_max": 6, "lambdas": 40, "tolerance": 1e-10}
  }
})json";

std::string describe(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

// Runs make(i) for every index; the first failure by index is rethrown.
std::vector<SuiteInstance> run_instances(int count, Exec exec,
                                         const std::function<SuiteInstance(int)>& make) {
  std::vector<SuiteInstance> out(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  auto one = [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = make(i);
      out[k].index = i;
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  };
  if (exec == Exec::serial) {
    for (int i = 0; i < count; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < count; ++i) one(i);
  }
  for (int i = 0; i < count; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw Rejection("instance " + std::to_string(i) + ": " + errors[static_cast<std::size_t>(i)]);
  return out;
}

struct Extremes {
  double lo = kInfinity, hi = -kInfinity;
  void add(double v) {
    if (std::isnan(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void store(SuiteReport& r, const std::string& key) const {
    r.summary[key + "_min"] = lo;
    r.summary[key + "_max"] = hi;
  }
};

void gate(SuiteReport& r, bool ok, const std::string& what) {
  if (!ok) r.notes.push_back(what);
}

int count_failed(const SuiteReport& r) {
  int n = 0;
  for (const auto& in : r.instances) n += in.pass ? 0 : 1;
  return n;
}

BuildOptions build_options(const json& c) {
  BuildOptions o;
  o.points = c.at("points").get<std::size_t>();
  return o;
}

std::vector<double> reals(const json& c, const char* key) { return c.at(key).get<std::vector<double>>(); }

// Conjugate exponent as 1/q, so p = 1 maps to 0.
double inv_q(double p) { return 1.0 - 1.0 / p; }

// gamma(x) = I(v)/v at x = log(1/v), on the default v grid.
Profile gamma_from_iso(const Measure1D& mu) {
  const std::vector<double> vs = default_iso_grid();
  Profile g;
  g.kind = ProfileKind::bound_gamma;
  g.exactness = mu.logconcave() ? Exactness::exact : Exactness::half_line_upper_bound;
  for (std::size_t k = vs.size(); k-- > 0;) {
    const double v = vs[k];
    g.x.push_back(v == 0.5 ? kLog2 : std::log(1.0 / v));
    g.y.push_back(half_line_iso(mu, v) / v);
  }
  g.validate();
  return g;
}

std::vector<double> concave_tilt(const Measure1D& mu, double t, double c) {
  std::vector<double> phi(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double z = mu.grid()[i] - c;
    phi[i] = -t * z * z;
  }
  return phi;
}

double attained_ratio(const Measure1D& mu2) { return mu2.provenance().params.at("attained"); }

// ---------------------------------------------------------------------------

SuiteReport going_down_exact(const json& c, std::uint64_t seed, Exec exec) {
  const int trials = c.at("trials"), n_max = c.at("n_max");
  const double tol = c.at("tolerance");
  SuiteReport r;
  r.instances = run_instances(trials, exec, [&](int i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const int n = rng.integer(2, n_max);
    const DiscreteSpace s1 = random_space(rng, n);
    const auto& w1 = s1.weights();
    std::vector<double> w2;
    SuiteInstance in;
    if (rng.uniform() < 0.5) {
      w2 = random_simplex(rng, n);
      in.descriptor = "random weights";
    } else {
      const int k = rng.integer(0, n - 1);
      const double t = rng.uniform(-2.0, 2.0);
      double z = 0.0;
      for (int j = 0; j < n; ++j) {
        w2.push_back(w1[static_cast<std::size_t>(j)] * std::exp(t * s1.d(k, j)));
        z += w2.back();
      }
      for (double& w : w2) w /= z;
      in.descriptor = describe("tilt exp(%g d(., x_%g))", t, k);
    }
    const DiscreteSpace s2 = s1.with_weights(w2);
    double D = 0.0;
    for (int j = 0; j < n; ++j)
      D = std::max(D, std::log(w2[static_cast<std::size_t>(j)] / w1[static_cast<std::size_t>(j)]));
    const Profile a1 = conc_profile_discrete(s1, Exec::serial);
    const Profile k2 = conc_profile_discrete(s2, Exec::serial);
    const double r1 = going_down_shift(a1, D);

    std::vector<double> rs;
    auto around = [&](double b) {
      for (double f : {1.0 - 1e-9, 1.0, 1.0 + 1e-9})
        if (b * f > 0.0) rs.push_back(b * f);
    };
    for (std::size_t k = 0; k < a1.x.size(); ++k) {
      around(a1.x[k]);
      if (k + 1 < a1.x.size()) rs.push_back(0.5 * (a1.x[k] + a1.x[k + 1]));
    }
    for (double b : k2.x) around(b - r1);
    rs.push_back(1.5 * a1.x.back() + 1.0);

    double worst = kInfinity;
    int bad = 0;
    for (double rr : rs) {
      const double lhs = k2(rr + r1), rhs = a1(rr) - D;
      if (std::isinf(rhs) && std::isinf(lhs)) continue;
      const double margin = lhs - rhs;
      worst = std::min(worst, margin);
      if (margin < -tol * (1.0 + std::abs(rhs))) ++bad;
    }
    in.pass = bad == 0;
    in.values = {{"n", n}, {"D", D}, {"r1", r1}, {"checks", static_cast<double>(rs.size())},
                 {"min_margin", worst}, {"violations", bad}};
    return in;
  });
  r.violations = count_failed(r);
  Extremes m;
  for (const auto& in : r.instances) m.add(in.values.at("min_margin"));
  r.summary["min_margin"] = m.lo;
  r.summary["instances"] = static_cast<double>(r.instances.size());
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport w1_fm_exact(const json& c, std::uint64_t seed, Exec exec) {
  const int trials = c.at("trials"), n_max = c.at("n_max");
  const double tol = c.at("tolerance");
  SuiteReport r;
  r.instances = run_instances(trials, exec, [&](int i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const int n = rng.integer(2, n_max);
    const DiscreteSpace s1 = random_space(rng, n);
    std::vector<double> w2 = random_simplex(rng, n);
    SuiteInstance in;
    in.descriptor = "random weights";
    if (rng.uniform() < 0.5) {
      // Move part of mu1 onto a single atom.
      const int k = rng.integer(0, n - 1);
      const double t = rng.uniform(0.0, 1.0);
      for (int j = 0; j < n; ++j)
        w2[static_cast<std::size_t>(j)] = (1.0 - t) * s1.weights()[static_cast<std::size_t>(j)] + (j == k ? t : 0.0);
      in.descriptor = describe("mixture with point mass (t = %g, atom %g)", t, k);
    }
    const DiscreteSpace s2 = s1.with_weights(w2);
    const double f1 = first_moment_constant(s1, Exec::serial).value;
    const double f2 = first_moment_constant(s2, Exec::serial).value;
    const double w = w1_discrete(s1, w2, s1.weights());
    const double gap = std::abs(f2 - f1) - w;
    in.pass = gap <= tol * (1.0 + w);
    in.values = {{"n", n}, {"inv_D_FM_1", f1}, {"inv_D_FM_2", f2}, {"W1", w}, {"gap", gap}};
    return in;
  });
  r.violations = count_failed(r);
  Extremes g;
  for (const auto& in : r.instances) g.add(in.values.at("gap"));
  r.summary["max_gap"] = g.hi;
  r.summary["instances"] = static_cast<double>(r.instances.size());
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport te_jensen_pointwise(const json& c, std::uint64_t seed, Exec exec) {
  const int trials = c.at("trials"), n_max = c.at("n_max");
  const double tol = c.at("tolerance");
  const std::vector<double> ps = reals(c, "p");
  SuiteReport r;
  const int count = trials * static_cast<int>(ps.size());
  r.instances = run_instances(count, exec, [&](int i) {
    const double p = ps[static_cast<std::size_t>(i / trials)];
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const int n = rng.integer(2, n_max);
    const DiscreteSpace s = random_space(rng, n);
    const std::vector<double> nu = random_simplex(rng, n);
    const double D = rng.uniform(0.2, 3.0);
    const auto& mu = s.weights();
    const double w1 = w1_discrete(s, nu, mu);
    auto wphi = [&](double e) {
      return wc_discrete_lp(s, nu, mu, cost_matrix(s, [&](double d) { return phi(e, D * d); })).cost;
    };
    const double wp = wphi(p);
    SuiteInstance in;
    in.descriptor = describe("p = %g, n = %g, D = %g", p, n, D);
    int bad = 0;
    double worst = kInfinity;
    auto check = [&](double lhs, double rhs) {
      const double m = rhs - lhs;
      worst = std::min(worst, m);
      if (m < -tol * (1.0 + std::abs(rhs))) ++bad;
    };
    check(phi(p, D * w1), wp);
    for (double s_exp : ps) {
      if (s_exp > p) continue;
      const double ws = s_exp == p ? wp : wphi(s_exp);
      check(phi(s_exp, D * w1), ws);
      check(phi_composed(p, s_exp, ws), wp);
    }
    in.pass = bad == 0;
    in.values = {{"p", p}, {"n", n}, {"D", D}, {"W1", w1}, {"W_phi", wp}, {"min_margin", worst}};
    return in;
  });
  r.violations = count_failed(r);
  Extremes m;
  for (const auto& in : r.instances) m.add(in.values.at("min_margin"));
  r.summary["min_margin"] = m.lo;
  r.summary["instances"] = static_cast<double>(r.instances.size());
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport bg_duality(const json& c, std::uint64_t seed, Exec exec) {
  const int trials = c.at("trials"), n_max = c.at("n_max"), nl = c.at("lambdas");
  const double tol = c.at("tolerance");
  const std::vector<double> lambdas = geometric_grid(0.02, 50.0, static_cast<std::size_t>(nl));
  SuiteReport r;
  r.instances = run_instances(trials, exec, [&](int i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const int n = rng.integer(2, n_max);
    const DiscreteSpace s = random_space(rng, n);
    const auto& mu = s.weights();
    const double D = rng.uniform(0.5, 2.0);
    const double delta = rng.uniform(0.0, 0.5);
    const double expo = std::array<double, 3>{1.5, 2.0, 3.0}[static_cast<std::size_t>(rng.integer(0, 2))];
    const double a = rng.uniform(0.2, 2.0);
    const PhiGrid Phi = PhiGrid::tabulate([&](double x) { return a * std::pow(x, expo); }, 40.0, 4001);

    // Transport side: point masses and the Gibbs tilts of each Laplace maximizer.
    std::vector<LaplaceSup> sups;
    for (double l : lambdas) sups.push_back(laplace_sup_discrete(s, l * D, Exec::serial));
    std::vector<std::vector<double>> witnesses;
    for (int k = 0; k < n; ++k) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(k)] = 1.0;
      witnesses.push_back(e);
    }
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      std::vector<double> nu(static_cast<std::size_t>(n));
      double top = -kInfinity, z = 0.0;
      for (int k = 0; k < n; ++k) top = std::max(top, lambdas[l] * D * sups[l].f[static_cast<std::size_t>(k)]);
      for (int k = 0; k < n; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        nu[uk] = mu[uk] * std::exp(lambdas[l] * D * sups[l].f[uk] - top);
        z += nu[uk];
      }
      for (double& v : nu) v /= z;
      witnesses.push_back(nu);
    }
    double te_excess = -kInfinity;
    for (const auto& nu : witnesses) {
      const double h = relative_entropy(nu, mu);
      te_excess = std::max(te_excess, D * w1_discrete(s, nu, mu) - Phi.inverse(h + delta));
    }
    const double eps = rng.uniform(0.0, 2.0) * std::max(te_excess, 0.05 * D * s.diameter());
    const bool te_holds = te_excess <= eps;

    // Laplace side on the grid, refined near the worst lambda when the
    // verdicts disagree.
    auto excess_at = [&](double l, double sup) {
      const double conj = Phi.conjugate(l);
      if (std::isinf(conj)) return -kInfinity;
      return sup - l * eps - conj - delta;
    };
    double lap_excess = -kInfinity;
    std::size_t arg = 0;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      const double e = excess_at(lambdas[l], sups[l].value);
      if (e > lap_excess) {
        lap_excess = e;
        arg = l;
      }
    }
    if (!te_holds && lap_excess <= tol) {
      double lo = lambdas[arg == 0 ? 0 : arg - 1], hi = lambdas[std::min(arg + 1, lambdas.size() - 1)];
      auto g = [&](double l) { return excess_at(l, laplace_sup_discrete(s, l * D, Exec::serial).value); };
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo), g1 = g(x1), g2 = g(x2);
      for (int it = 0; it < 40; ++it) {
        if (g1 > g2) {
          hi = x2;
          x2 = x1;
          g2 = g1;
          x1 = hi - gr * (hi - lo);
          g1 = g(x1);
        } else {
          lo = x1;
          x1 = x2;
          g1 = g2;
          x2 = lo + gr * (hi - lo);
          g2 = g(x2);
        }
      }
      lap_excess = std::max({lap_excess, g1, g2});
    }
    const bool lap_holds = lap_excess <= tol;
    SuiteInstance in;
    in.descriptor = describe("n = %g, Phi = a x^%g, a = %g", n, expo, a);
    in.pass = te_holds == lap_holds;
    in.values = {{"n", n},           {"D", D},
                 {"delta", delta},   {"eps", eps},
                 {"a", a},           {"exponent", expo},
                 {"te_excess", te_excess}, {"laplace_excess", lap_excess},
                 {"te_holds", te_holds ? 1.0 : 0.0}, {"laplace_holds", lap_holds ? 1.0 : 0.0}};
    return in;
  });
  r.violations = count_failed(r);
  int both_fail = 0, both_hold = 0;
  for (const auto& in : r.instances) {
    if (!in.pass) continue;
    if (in.values.at("te_holds") == 1.0) ++both_hold;
    else ++both_fail;
  }
  r.summary["both_hold"] = both_hold;
  r.summary["both_fail"] = both_fail;
  r.summary["instances"] = static_cast<double>(r.instances.size());
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport conc_te_equiv(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> ps = reals(c, "p");
  const double band = c.at("band");
  SuiteReport r;
  r.instances = run_instances(static_cast<int>(ps.size()), exec, [&](int i) {
    const double p = ps[static_cast<std::size_t>(i)];
    const Measure1D mu = build_gamma_p(p, opts);
    FitOptions fo;
    fo.p = p;
    const double con = fit_constant(conc_profile_1d(mu), FitTemplate::p_exp_conc, fo).value;
    const auto ws = default_witnesses_1d(mu);
    const double wte = te_constant_estimate_1d(mu, {TeMode::weak_1p, p, 1.0}, ws, Exec::serial).value;
    const double te = te_constant_estimate_1d(mu, {TeMode::one_phi, p, 1.0}, ws, Exec::serial).value;
    const double spread = std::max({con, wte, te}) / std::min({con, wte, te});
    SuiteInstance in;
    in.descriptor = describe("Gamma_%g", p);
    in.pass = spread <= band;
    in.values = {{"p", p}, {"D_Con_p", con}, {"D_wTE_1_p", wte}, {"D_TE_1_phi_p", te}, {"spread", spread}};
    return in;
  });
  Extremes s;
  for (const auto& in : r.instances) s.add(in.values.at("spread"));
  s.store(r, "spread");
  r.summary["band"] = band;
  r.violations = count_failed(r);
  gate(r, s.hi <= band, "constant spread exceeds the band");
  return r;
}

// ---------------------------------------------------------------------------

Measure1D shape_measure(const std::string& name, const BuildOptions& opts) {
  if (name == "gamma-1") return build_gamma_p(1.0, opts);
  if (name == "gamma-2") return build_gamma_p(2.0, opts);
  if (name == "gamma-3") return build_gamma_p(3.0, opts);
  if (name == "gaussian-half-line") return build_gaussian_restricted(0.0, opts);
  if (name == "double-well") {
    // V = x^4/4 - x^2/2: V'' >= -1.
    std::vector<double> x = linear_grid(-6.0, 6.0, opts.points), v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::pow(x[i], 4) / 4.0 - x[i] * x[i] / 2.0;
    return build_from_potential(std::move(x), std::move(v));
  }
  throw Rejection("unknown shape measure " + name);
}

SuiteReport te_equiv_shape(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> ps = reals(c, "p");
  const double floor = c.at("floor");
  const std::vector<std::string> gated{"gamma-1", "gamma-2", "gamma-3", "gaussian-half-line"};
  std::vector<std::pair<std::string, double>> cases;
  for (const auto& m : gated)
    for (double p : ps) cases.emplace_back(m, p);
  cases.emplace_back("double-well", 2.0);
  SuiteReport r;
  r.instances = run_instances(static_cast<int>(cases.size()), exec, [&](int i) {
    const auto& [name, p] = cases[static_cast<std::size_t>(i)];
    const Measure1D mu = shape_measure(name, opts);
    const auto ws = default_witnesses_1d(mu);
    const double up = te_constant_estimate_1d(mu, {TeMode::phi_one, p, 1.0}, ws, Exec::serial).value;
    const double down = te_constant_estimate_1d(mu, {TeMode::one_phi, p, 1.0}, ws, Exec::serial).value;
    const bool is_gated = name != "double-well";
    SuiteInstance in;
    in.descriptor = name + describe(", p = %g", p) + (is_gated ? "" : " (kappa = 1, recorded only)");
    in.values = {{"p", p},
                 {"D_TE_phi_p_1", up},
                 {"D_TE_1_phi_p", down},
                 {"ratio", up / down},
                 {"gated", is_gated ? 1.0 : 0.0}};
    in.pass = !is_gated || up / down >= floor;
    return in;
  });
  Extremes fit;
  for (const auto& in : r.instances)
    if (in.values.at("gated") == 1.0) fit.add(in.values.at("ratio"));
  fit.store(r, "ratio");
  r.summary["floor"] = floor;
  r.violations = count_failed(r);
  gate(r, fit.lo >= floor, "fitted TE ratio below the floor");
  return r;
}

// ---------------------------------------------------------------------------

// inf over x of gamma2(x) / x^{1/q} for the power profile gamma1 = x^{1/q}, in closed form.
double c1_closed_form(double p, double D, std::span<const double> xs) {
  double best = kInfinity;
  for (double x : xs) {
    const double g2 = x / (p * (std::pow(x + D, 1.0 / p) - std::pow(kLog2, 1.0 / p)));
    best = std::min(best, g2 / std::pow(x, inv_q(p)));
  }
  return best;
}

SuiteReport iso_stability_shape(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> ps = reals(c, "p"), us = reals(c, "restrict_u"), ts = reals(c, "tilt_t"),
                            cs = reals(c, "tilt_c"), curve_D = reals(c, "curve_D");
  const double band = c.at("curve_band"), floor = c.at("floor");

  struct Case {
    double p;
    int kind;  // 0 curve, 1 restriction, 2 tilt
    double a, b;
  };
  std::vector<Case> cases;
  for (double p : ps) {
    cases.push_back({p, 0, 0, 0});
    for (double u : us) cases.push_back({p, 1, u, 0});
    for (double t : ts)
      for (double cc : cs) cases.push_back({p, 2, t, cc});
  }
  // x grid for the power profile, far enough out that the infimum is resolved.
  const std::vector<double> power_x = geometric_grid(kLog2, 1e4, 800);

  SuiteReport r;
  r.instances = run_instances(static_cast<int>(cases.size()), exec, [&](int i) {
    const Case& k = cases[static_cast<std::size_t>(i)];
    const Measure1D mu1 = build_gamma_p(k.p, opts);
    const Profile g1 = gamma_from_iso(mu1);
    SuiteInstance in;
    if (k.kind == 0) {
      // Pointwise monotonicity in D on the measured profile.
      std::vector<double> xs;
      for (double x : g1.x)
        if (x > kLog2 && x + curve_D.back() <= g1.x.back()) xs.push_back(x);
      int bad = 0;
      std::vector<double> prev;
      for (double D : curve_D) {
        const Profile g2 = iso_stability_transform(g1, D, xs);
        if (!prev.empty())
          for (std::size_t j = 0; j < xs.size(); ++j)
            if (g2.y[j] > prev[j] * (1.0 + 1e-12)) ++bad;
        prev = g2.y;
      }
      // c1 curve through the transform of the power profile.
      Profile power = Profile::tabulate(ProfileKind::bound_gamma, power_x,
                                        [&](double x) { return std::pow(x, inv_q(k.p)); });
      double c0 = 0.0, last = kInfinity, worst_track = 1.0, max_closed_err = 0.0;
      int nonmono = 0;
      std::vector<double> xd;
      for (double x : power_x)
        if (x > kLog2 && x + curve_D.back() <= power_x.back()) xd.push_back(x);
      for (double D : curve_D) {
        const Profile g2 = iso_stability_transform(power, D, xd);
        double c1 = kInfinity;
        for (std::size_t j = 0; j < xd.size(); ++j) {
          c1 = std::min(c1, g2.y[j] / std::pow(xd[j], inv_q(k.p)));
          const double closed = xd[j] / (k.p * (std::pow(xd[j] + D, 1.0 / k.p) - std::pow(kLog2, 1.0 / k.p)));
          max_closed_err = std::max(max_closed_err, std::abs(g2.y[j] / closed - 1.0));
        }
        if (D == curve_D.front()) c0 = c1;
        if (c1 > last * (1.0 + 1e-12)) ++nonmono;
        last = c1;
        const double track = c1 / c0 * (1.0 + std::pow(D, 1.0 / k.p));
        in.values["c1_D" + describe("%g", D)] = c1 / c0;
        in.values["track_D" + describe("%g", D)] = track;
        if (std::max(track, 1.0 / track) > std::max(worst_track, 1.0 / worst_track)) worst_track = track;
      }
      in.descriptor = describe("Gamma_%g: gamma2 monotone in D, c1 curve", k.p);
      in.values["p"] = k.p;
      in.values["gamma2_monotone_violations"] = bad;
      in.values["c1_monotone_violations"] = nonmono;
      in.values["worst_track"] = worst_track;
      in.values["closed_form_rel_err"] = max_closed_err;
      in.pass = bad == 0 && nonmono == 0 && worst_track <= band && worst_track >= 1.0 / band;
      return in;
    }
    Measure1D mu2 = k.kind == 1 ? derive_restrict(mu1, mu1.quantile(k.a), mu1.upper())
                                : derive_density_ratio(mu1, concave_tilt(mu1, k.a, k.b), 50.0);
    const double D = k.kind == 1 ? -std::log(mu2.provenance().params.at("p")) : attained_ratio(mu2);
    in.descriptor = k.kind == 1 ? describe("Gamma_%g restricted to [Q(%g), inf)", k.p, k.a)
                                : describe("Gamma_%g tilted by exp(-%g (x - %g)^2)", k.p, k.a, k.b);
    const Profile g2 = iso_stability_transform(g1, D);
    double fit = kInfinity;
    for (std::size_t j = 0; j < g2.x.size(); ++j) {
      const double v = std::exp(-g2.x[j]);
      if (v > 0.5) continue;
      fit = std::min(fit, half_line_iso(mu2, v) / (v * g2.y[j]));
    }
    FitOptions fo;
    fo.p = k.p;
    const double iso1 = fit_constant(iso_profile_1d(mu1), FitTemplate::p_exp_iso, fo).value;
    const double iso2 = fit_constant(iso_profile_1d(mu2), FitTemplate::p_exp_iso, fo).value;
    const double c1 = c1_closed_form(k.p, D, power_x) / c1_closed_form(k.p, 0.0, power_x);
    in.values = {{"p", k.p}, {"D", D}, {"fit_c", fit}, {"D_Iso_p_ratio", iso2 / iso1},
                 {"ratio_over_c1", iso2 / iso1 / c1}};
    in.pass = fit >= floor;
    return in;
  });
  Extremes fit, track, ratio;
  double mono = 0.0, err = 0.0;
  for (const auto& in : r.instances) {
    if (in.values.count("fit_c")) {
      fit.add(in.values.at("fit_c"));
      ratio.add(in.values.at("ratio_over_c1"));
    } else {
      track.add(in.values.at("worst_track"));
      mono += in.values.at("gamma2_monotone_violations") + in.values.at("c1_monotone_violations");
      err = std::max(err, in.values.at("closed_form_rel_err"));
    }
  }
  fit.store(r, "fit_c");
  track.store(r, "c1_track");
  ratio.store(r, "iso_ratio_over_c1");
  r.summary["monotone_violations"] = mono;
  r.summary["closed_form_rel_err"] = err;
  r.summary["floor"] = floor;
  r.summary["curve_band"] = band;
  r.violations = count_failed(r);
  gate(r, fit.lo >= floor, "fitted stability constant below the floor");
  gate(r, mono == 0.0, "gamma2 or c1 not decreasing in D");
  gate(r, track.hi <= band && track.lo >= 1.0 / band, "c1 curve leaves the band around 1/(1 + D^{1/p})");
  return r;
}

// ---------------------------------------------------------------------------

// Herbst -> going-down -> iso form: (inf_x gamma'(x)/sqrt(x))^2 for the
// restriction with density ratio e^D.
double logsob_chain(double rho, double D) {
  const ConcBound cb = herbst_laplace(rho).conc;
  const double reach = (cb.zp + std::sqrt(80.0 / rho)) / cb.Dp;
  Profile a1 = Profile::tabulate(ProfileKind::bound_alpha, linear_grid(0.0, reach, 4001),
                                 [&](double rr) { return std::max(kLog2, cb.at(rr)); });
  const Profile a2 = conc_going_down(a1, D);
  Profile inc;
  inc.kind = ProfileKind::bound_alpha;
  for (std::size_t i = 0; i < a2.x.size(); ++i) {
    if (a2.y[i] <= kLog2 || (!inc.y.empty() && a2.y[i] <= inc.y.back())) continue;
    inc.x.push_back(a2.x[i]);
    inc.y.push_back(a2.y[i]);
  }
  const IsoForm form = conc_to_iso_form(inc, 0.0, 1.0);
  double g = kInfinity;
  for (std::size_t i = 0; i < form.gamma.x.size(); ++i)
    if (form.gamma.x[i] <= 40.0) g = std::min(g, form.gamma.y[i] / std::sqrt(form.gamma.x[i]));
  return g * g;
}

SuiteReport logsob_stability(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> bases = reals(c, "bases"), masses = reals(c, "mass");
  const double floor = c.at("floor"), chain_floor = c.at("chain_floor");
  std::vector<Measure1D> mus;
  std::vector<double> rhos;
  for (double b : bases) {
    mus.push_back(build_gamma_p(b, opts));
    rhos.push_back(logsob_constant_1d(mus.back(), exec).value);
  }
  struct Case {
    std::size_t base;
    double mass;
    bool central;
  };
  std::vector<Case> cases;
  for (std::size_t b = 0; b < bases.size(); ++b)
    for (double m : masses)
      for (bool central : {false, true}) cases.push_back({b, m, central});

  SuiteReport r;
  r.instances = run_instances(static_cast<int>(cases.size()), exec, [&](int i) {
    const Case& k = cases[static_cast<std::size_t>(i)];
    const Measure1D& mu1 = mus[k.base];
    const double rho1 = rhos[k.base];
    const double lo = k.central ? mu1.quantile(0.5 * (1.0 - k.mass)) : mu1.upper_quantile(k.mass);
    const double hi = k.central ? mu1.quantile(0.5 * (1.0 + k.mass)) : mu1.upper();
    // A fresh grid on [lo, hi] keeps the resolution for small masses.
    std::vector<double> x = linear_grid(lo, hi, opts.points), v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) v[j] = std::pow(std::abs(x[j]), bases[k.base]) / bases[k.base];
    const Measure1D mu2 = build_from_potential(std::move(x), std::move(v));
    const double p = mu1.mass_between(lo, hi);
    const double L = std::log(1.0 / p);
    const double rho2 = logsob_constant_1d(mu2, Exec::serial).value;
    const double chain = logsob_chain(rho1, L);
    const double fit = rho2 * (1.0 + L) / rho1;
    SuiteInstance in;
    in.descriptor = describe(k.central ? "Gamma_%g restricted to the central interval of mass %g"
                                       : "Gamma_%g restricted to the upper tail of mass %g",
                             bases[k.base], k.mass);
    in.values = {{"base_p", bases[k.base]}, {"mass", p}, {"rho1", rho1}, {"rho2_upper", rho2},
                 {"fit_c", fit}, {"chain", chain}, {"upper_over_chain", rho2 / chain}};
    in.pass = fit >= floor && rho2 / chain >= chain_floor;
    return in;
  });
  // The chain value depends on (base, mass) only and must fall as the mass shrinks.
  int nonmono = 0;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    std::vector<std::pair<double, double>> curve;
    for (const auto& in : r.instances)
      if (in.values.at("base_p") == bases[b]) curve.emplace_back(-in.values.at("mass"), in.values.at("chain"));
    std::sort(curve.begin(), curve.end());
    for (std::size_t j = 1; j < curve.size(); ++j)
      if (curve[j].second > curve[j - 1].second * (1.0 + 1e-12)) ++nonmono;
  }
  Extremes fit, ratio;
  for (const auto& in : r.instances) {
    fit.add(in.values.at("fit_c"));
    ratio.add(in.values.at("upper_over_chain"));
  }
  fit.store(r, "fit_c");
  ratio.store(r, "upper_over_chain");
  r.summary["chain_monotone_violations"] = nonmono;
  r.summary["floor"] = floor;
  r.summary["chain_floor"] = chain_floor;
  r.violations = count_failed(r);
  gate(r, fit.lo >= floor, "fitted log-Sobolev constant below the floor");
  gate(r, ratio.lo >= chain_floor, "log-Sobolev estimate below the chain bound");
  gate(r, nonmono == 0, "chain bound not decreasing in log 1/p");
  return r;
}

// ---------------------------------------------------------------------------

struct OneDStats {
  double iso1, fm, con1;
};

OneDStats one_d_stats(const Measure1D& mu) {
  FitOptions fo;
  fo.p = 1.0;
  OneDStats s;
  s.iso1 = fit_constant(iso_profile_1d(mu), FitTemplate::p_exp_iso, fo).value;
  s.fm = 1.0 / first_moment_constant_1d(mu).value;
  s.con1 = fit_constant(conc_profile_1d(mu), FitTemplate::p_exp_conc, fo).value;
  return s;
}

SuiteReport w1_stability_chain(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> bases = reals(c, "bases"), tr = reals(c, "translate"), dl = reals(c, "dilate");
  const double up_max = c.at("up_entropy_max"), floor = c.at("floor");
  struct Case {
    std::size_t base;
    int kind;  // 0 translate, 1 dilate, 2 upper half, 3 tilt
    double a;
  };
  std::vector<Case> cases;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    for (double t : tr) cases.push_back({b, 0, t});
    for (double s : dl) cases.push_back({b, 1, s});
    cases.push_back({b, 2, 0.5});
    cases.push_back({b, 3, 1.0});
  }
  std::vector<Measure1D> mus;
  std::vector<OneDStats> stats;
  for (double b : bases) {
    mus.push_back(build_gamma_p(b, opts));
    stats.push_back(one_d_stats(mus.back()));
  }
  const std::vector<std::string> keys{"c1", "fm_shift", "c2", "c3", "down_c2", "down_c3", "up_c2", "wtc", "tcql"};

  SuiteReport r;
  r.instances = run_instances(static_cast<int>(cases.size()), exec, [&](int i) {
    const Case& k = cases[static_cast<std::size_t>(i)];
    const Measure1D& mu1 = mus[k.base];
    const OneDStats& s1 = stats[k.base];
    SuiteInstance in;
    const double bp = bases[k.base];
    Measure1D mu2 = [&] {
      switch (k.kind) {
        case 0:
          in.descriptor = describe("Gamma_%g translated by %g", bp, k.a);
          return derive_translate(mu1, k.a);
        case 1:
          in.descriptor = describe("Gamma_%g dilated by %g", bp, k.a);
          return derive_dilate(mu1, k.a);
        case 2:
          in.descriptor = describe("Gamma_%g restricted to the upper half", bp);
          return derive_restrict(mu1, mu1.median(), mu1.upper());
        default:
          in.descriptor = describe("Gamma_%g tilted by exp(-%g (x - 1)^2)", bp, k.a);
          return derive_density_ratio(mu1, concave_tilt(mu1, k.a, 1.0), 50.0);
      }
    }();
    const OneDStats s2 = one_d_stats(mu2);
    const double w = w1_1d(mu1, mu2);
    const double h21 = relative_entropy_1d(mu2, mu1), h12 = relative_entropy_1d(mu1, mu2);
    in.values = {{"base_p", bp},
                 {"W1", w},
                 {"H21", h21},
                 {"H12", h12},
                 {"D_Iso_1_2", s2.iso1},
                 {"D_FM_2", s2.fm},
                 {"D_Con_1_2", s2.con1},
                 {"c1", s2.iso1 / s2.fm},
                 {"fm_shift", s2.fm * (1.0 + s1.fm * w) / s1.fm},
                 {"c2", s2.iso1 * (1.0 + s1.con1 * w) / s1.con1},
                 {"c3", s2.iso1 * (1.0 + s1.iso1 * w) / s1.iso1},
                 {"down_c2", s2.iso1 * (1.0 + h21) / s1.con1},
                 {"down_c3", s2.iso1 * (1.0 + h21) / s1.iso1},
                 {"wtc", (h21 + 1.0) / (s1.con1 * w)}};
    if (h12 <= up_max) {
      in.values["up_c2"] = s2.con1 / s1.fm;
      in.values["tcql"] = phi_inverse(1.0, h12) / (s2.con1 * w);
    }
    in.pass = true;
    for (const auto& key : keys)
      if (in.values.count(key) && in.values.at(key) < floor) in.pass = false;
    return in;
  });
  for (const auto& key : keys) {
    Extremes e;
    for (const auto& in : r.instances)
      if (in.values.count(key)) e.add(in.values.at(key));
    e.store(r, key);
    gate(r, e.lo >= floor, "fitted constant " + key + " below the floor");
  }
  r.summary["floor"] = floor;
  r.violations = count_failed(r);
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport hierarchy_gamma_p(const json& c, Exec exec) {
  const BuildOptions opts = build_options(c);
  const std::vector<double> ps = reals(c, "p");
  const double v_min = c.at("v_min"), iso_floor = c.at("iso_floor"), band = c.at("band");
  SuiteReport r;
  r.instances = run_instances(static_cast<int>(ps.size()), exec, [&](int i) {
    const double p = ps[static_cast<std::size_t>(i)];
    const Measure1D mu = build_gamma_p(p, opts);
    const Profile iso = iso_profile_1d(mu);
    Extremes shape;
    for (std::size_t j = 0; j < iso.x.size(); ++j) {
      const double v = iso.x[j];
      if (v < v_min) continue;
      shape.add(iso.y[j] / (v * std::pow(std::log(1.0 / v), inv_q(p))));
    }
    FitOptions fo;
    fo.p = p;
    const double d_iso = fit_constant(iso, FitTemplate::p_exp_iso, fo).value;
    const double d_con = fit_constant(conc_profile_1d(mu), FitTemplate::p_exp_conc, fo).value;
    const auto ws = default_witnesses_1d(mu);
    const double d_te = p <= 2.0
                            ? te_constant_estimate_1d(mu, {TeMode::phi_one, p, 1.0}, ws, Exec::serial).value
                            : te_constant_estimate_1d(mu, {TeMode::s_p, p, p}, ws, Exec::serial).value;
    SuiteInstance in;
    in.descriptor = describe(p <= 2.0 ? "Gamma_%g: Iso, TE(phi_p,1), Con" : "Gamma_%g: Iso, TE(p,p), Con", p);
    in.values = {{"p", p},
                 {"iso_shape_min", shape.lo},
                 {"iso_shape_max", shape.hi},
                 {"D_Iso_p", d_iso},
                 {"D_TE", d_te},
                 {"D_Con_p", d_con},
                 {"iso_over_te", d_iso / d_te},
                 {"te_over_con", d_te / d_con}};
    if (p == 2.0) {
      const double rho = logsob_constant_1d(mu, Exec::serial).value;
      in.values["rho_LS"] = rho;
      in.values["iso_over_ls"] = d_iso / std::sqrt(rho);
    }
    in.pass = shape.lo >= iso_floor && d_iso / d_te <= band && d_te / d_con <= band;
    return in;
  });
  Extremes shape, a, b;
  for (const auto& in : r.instances) {
    shape.add(in.values.at("iso_shape_min"));
    shape.add(in.values.at("iso_shape_max"));
    a.add(in.values.at("iso_over_te"));
    b.add(in.values.at("te_over_con"));
  }
  shape.store(r, "iso_shape");
  a.store(r, "iso_over_te");
  b.store(r, "te_over_con");
  r.summary["iso_floor"] = iso_floor;
  r.summary["band"] = band;
  r.violations = count_failed(r);
  gate(r, shape.lo >= iso_floor, "iso profile shape ratio below its universal lower edge");
  gate(r, a.hi <= band && b.hi <= band, "hierarchy ratios exceed the band");
  return r;
}

const std::vector<std::string> kIds{"going-down-exact",   "iso-stability-shape", "logsob-stability",
                                    "w1-fm-exact",        "w1-stability-chain",  "conc-te-equiv",
                                    "te-jensen-pointwise", "te-equiv-shape",     "hierarchy-gamma-p",
                                    "bg-duality"};

}  // namespace

const std::vector<std::string>& suite_ids() { return kIds; }

bool suite_is_exact(const std::string& id) {
  return id == "going-down-exact" || id == "w1-fm-exact" || id == "te-jensen-pointwise" || id == "bg-duality";
}

const json& default_suite_config() {
  static const json cfg = json::parse(kDefaultConfig);
  return cfg;
}

json merge_suite_config(const json& overrides) {
  json out = default_suite_config();
  if (overrides.is_null()) return out;
  if (!overrides.is_object()) throw Rejection("suite config must be a JSON object");
  if (overrides.contains("version") && overrides.at("version") != out.at("version"))
    throw Rejection("unsupported suite config version");
  if (!overrides.contains("suites")) return out;
  for (const auto& [id, body] : overrides.at("suites").items()) {
    if (!out["suites"].contains(id)) throw Rejection("unknown suite in config: " + id);
    for (const auto& [key, value] : body.items()) {
      if (!out["suites"][id].contains(key)) throw Rejection("unknown key '" + key + "' for suite " + id);
      out["suites"][id][key] = value;
    }
  }
  return out;
}

SuiteReport run_suite(const std::string& id, const json& config, std::uint64_t seed, Exec exec) {
  if (std::find(kIds.begin(), kIds.end(), id) == kIds.end()) throw Rejection("unknown suite id: " + id);
  const json& all = config.contains("suites") ? config.at("suites") : default_suite_config().at("suites");
  const json& c = all.contains(id) ? all.at(id) : default_suite_config().at("suites").at(id);
  SuiteReport r;
  try {
    if (id == "going-down-exact") r = going_down_exact(c, seed, exec);
    else if (id == "iso-stability-shape") r = iso_stability_shape(c, exec);
    else if (id == "logsob-stability") r = logsob_stability(c, exec);
    else if (id == "w1-fm-exact") r = w1_fm_exact(c, seed, exec);
    else if (id == "w1-stability-chain") r = w1_stability_chain(c, exec);
    else if (id == "conc-te-equiv") r = conc_te_equiv(c, exec);
    else if (id == "te-jensen-pointwise") r = te_jensen_pointwise(c, seed, exec);
    else if (id == "te-equiv-shape") r = te_equiv_shape(c, exec);
    else if (id == "hierarchy-gamma-p") r = hierarchy_gamma_p(c, exec);
    else r = bg_duality(c, seed, exec);
  } catch (const json::exception& e) {
    throw Rejection("infeasible config for suite " + id + ": " + e.what());
  }
  r.id = id;
  r.seed = seed;
  r.exact = suite_is_exact(id);
  if (r.violations > 0)
    r.notes.insert(r.notes.begin(), std::to_string(r.violations) + " instance(s) failed");
  r.passed = r.violations == 0 && r.notes.empty();
  return r;
}

json to_json(const SuiteReport& r) {
  auto num = [](double x) { return io::number(x); };
  json inst = json::array();
  for (const auto& in : r.instances) {
    json v = json::object();
    for (const auto& [k, x] : in.values) v[k] = num(x);
    inst.push_back({{"index", in.index}, {"descriptor", in.descriptor}, {"pass", in.pass}, {"values", v}});
  }
  json summary = json::object();
  for (const auto& [k, x] : r.summary) summary[k] = num(x);
  return {{"suite", r.id},         {"seed", r.seed},       {"kind", r.exact ? "exact" : "fitted"},
          {"passed", r.passed},    {"violations", r.violations}, {"summary", summary},
          {"notes", r.notes},      {"instances", inst}};
}

}  // namespace conc
