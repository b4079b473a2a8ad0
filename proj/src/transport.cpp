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

#include "conc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "conc/kernels.hpp"
#include "conc/lp.hpp"

namespace conc {

namespace {

constexpr double kGlNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(double a, double b, F&& f) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += kGlWeights[k] * f(mid + half * kGlNodes[k]);
  return s * half;
}

std::vector<double> merged_nodes(std::span<const double> a, std::span<const double> b, double lo,
                                 double hi) {
  std::vector<double> out;
  out.reserve(a.size() + b.size() + 2);
  out.push_back(lo);
  for (double x : a)
    if (x > lo && x < hi) out.push_back(x);
  for (double x : b)
    if (x > lo && x < hi) out.push_back(x);
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Integral of |g| over [a, b], splitting at a sign change of g.
template <class G>
double abs_integral(double a, double b, G&& g) {
  const double ga = g(a), gb = g(b);
  if (ga * gb < 0.0) {
    double lo = a, hi = b;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((g(mid) < 0.0) == (ga < 0.0)) lo = mid; else hi = mid;
    }
    const double r = 0.5 * (lo + hi);
    return std::abs(gauss8(a, r, g)) + std::abs(gauss8(r, b, g));
  }
  return gauss8(a, b, [&](double x) { return std::abs(g(x)); });
}

// F_mu(x) - F_nu(x), evaluated from the tail that keeps precision.
double cdf_gap(const Measure1D& mu, const Measure1D& nu, double x) {
  if (x > std::max(mu.median(), nu.median())) return nu.survival(x) - mu.survival(x);
  return mu.cdf(x) - nu.cdf(x);
}

// Quadrature nodes (weight, |Q_mu(u) - Q_nu(u)|) for the monotone coupling.
std::vector<std::pair<double, double>> displacement_rule(const Measure1D& mu, const Measure1D& nu) {
  std::vector<std::pair<double, double>> rule;
  auto half = [&](bool upper) {
    std::vector<double> cuts{0.0, 0.5};
    for (const Measure1D* m : {&mu, &nu}) {
      for (std::size_t i = 0; i < m->size(); ++i) {
        const double x = m->grid()[i];
        const double u = upper ? m->survival(x) : m->cdf(x);
        if (u > 0.0 && u < 0.5) cuts.push_back(u);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      const double h = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (int q = 0; q < 8; ++q) {
        const double u = mid + h * kGlNodes[q];
        const double d = upper ? mu.upper_quantile(u) - nu.upper_quantile(u)
                               : mu.quantile(u) - nu.quantile(u);
        rule.emplace_back(h * kGlWeights[q], std::abs(d));
      }
    }
  };
  half(false);
  half(true);
  return rule;
}

double rule_cost(const std::vector<std::pair<double, double>>& rule,
                 const std::function<double(double)>& c) {
  double s = 0.0;
  for (const auto& [w, d] : rule) s += w * c(d);
  return s;
}

}  // namespace

double w1_1d(const Measure1D& mu, const Measure1D& nu) {
  const double lo = std::min(mu.lower(), nu.lower()), hi = std::max(mu.upper(), nu.upper());
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Rejection("measure windows must be finite");
  auto nodes = merged_nodes(mu.grid(), nu.grid(), lo, hi);
  auto g = [&](double x) { return cdf_gap(mu, nu, x); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) total += abs_integral(nodes[k], nodes[k + 1], g);
  return total;
}

double monotone_cost_1d(const Measure1D& mu, const Measure1D& nu,
                        const std::function<double(double)>& c) {
  return rule_cost(displacement_rule(mu, nu), c);
}

double wc_monotone_1d(const Measure1D& mu, const Measure1D& nu, const CostSpec& spec, double D) {
  if (!(D >= 0.0)) throw Rejection("cost rate D must be nonnegative");
  return monotone_cost_1d(mu, nu, [&](double d) { return phi(spec, D * d); });
}

double relative_entropy_1d(const Measure1D& nu, const Measure1D& mu) {
  const double tol = 1e-12 * (1.0 + std::abs(mu.lower()) + std::abs(mu.upper()));
  double outside = 0.0;
  if (nu.lower() < mu.lower() - tol) outside += nu.cdf(mu.lower());
  if (nu.upper() > mu.upper() + tol) outside += nu.survival(mu.upper());
  // Mass below this lives in the truncated tails and is dropped.
  if (outside > 1e-30) return kInfinity;
  const double lo = std::max(nu.lower(), mu.lower()), hi = std::min(nu.upper(), mu.upper());
  auto nodes = merged_nodes(mu.grid(), nu.grid(), lo, hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    total += gauss8(nodes[k], nodes[k + 1], [&](double x) {
      const double lv = -nu.potential_at(x) - nu.log_z();
      const double lm = -mu.potential_at(x) - mu.log_z();
      return std::exp(lv) * (lv - lm);
    });
  }
  return std::max(total, 0.0);
}

double total_variation_1d(const Measure1D& nu, const Measure1D& mu) {
  const double lo = std::min(mu.lower(), nu.lower()), hi = std::max(mu.upper(), nu.upper());
  auto nodes = merged_nodes(mu.grid(), nu.grid(), lo, hi);
  auto g = [&](double x) { return nu.density(x) - mu.density(x); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) total += abs_integral(nodes[k], nodes[k + 1], g);
  return 0.5 * total;
}

// ---------------------------------------------------------------------------

std::vector<double> cost_matrix(const DiscreteSpace& s, const std::function<double(double)>& g) {
  const int n = s.size();
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i) * n + j] = g(s.d(i, j));
  return c;
}

TransportPlan wc_discrete_lp(const DiscreteSpace& s, std::span<const double> nu,
                             std::span<const double> mu, std::span<const double> cost) {
  const auto n = static_cast<std::size_t>(s.size());
  if (n > 400) throw Rejection("transport LP supports at most 400 points");
  validate_probability(nu, n, "source marginal");
  validate_probability(mu, n, "target marginal");
  auto sol = solve_transport(nu, mu, cost);
  TransportPlan plan;
  plan.cost = sol.cost;
  std::vector<double> rows(n, 0.0), cols(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double m = sol.plan[i * n + j];
      if (m <= 0.0) continue;
      plan.support.push_back({static_cast<int>(i), static_cast<int>(j), m});
      rows[i] += m;
      cols[j] += m;
    }
  for (std::size_t i = 0; i < n; ++i)
    plan.marginal_residual = std::max({plan.marginal_residual, std::abs(rows[i] - nu[i]), std::abs(cols[i] - mu[i])});
  return plan;
}

double w1_discrete(const DiscreteSpace& s, std::span<const double> nu, std::span<const double> mu) {
  return wc_discrete_lp(s, nu, mu, s.dist()).cost;
}

KrDual kr_dual(const DiscreteSpace& s, std::span<const double> nu, std::span<const double> mu) {
  const int n = s.size();
  if (n > 400) throw Rejection("transport LP supports at most 400 points");
  validate_probability(nu, static_cast<std::size_t>(n), "source marginal");
  validate_probability(mu, static_cast<std::size_t>(n), "target marginal");
  auto sol = solve_transport(nu, mu, s.dist());
  KrDual out;
  out.primal = sol.cost;
  // c-transform of the column potentials: 1-Lipschitz and dual optimal.
  out.f.assign(static_cast<std::size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double best = kInfinity;
    for (int j = 0; j < n; ++j) best = std::min(best, s.d(x, j) - sol.v[static_cast<std::size_t>(j)]);
    out.f[static_cast<std::size_t>(x)] = best;
  }
  const double shift = out.f[0];
  for (double& v : out.f) v -= shift;
  out.dual = 0.0;
  for (int x = 0; x < n; ++x)
    out.dual += out.f[static_cast<std::size_t>(x)] * (nu[static_cast<std::size_t>(x)] - mu[static_cast<std::size_t>(x)]);
  return out;
}

double relative_entropy(std::span<const double> nu, std::span<const double> mu) {
  if (nu.size() != mu.size()) throw Rejection("divergence inputs differ in length");
  double h = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] <= 0.0) continue;
    if (mu[i] <= 0.0) return kInfinity;
    h += nu[i] * std::log(nu[i] / mu[i]);
  }
  return std::max(h, 0.0);
}

Divergences divergences(std::span<const double> nu, std::span<const double> mu) {
  Divergences d;
  d.h_nu_mu = relative_entropy(nu, mu);
  d.h_mu_nu = relative_entropy(mu, nu);
  double l1 = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) l1 += std::abs(nu[i] - mu[i]);
  d.tv = 0.5 * l1;
  return d;
}

// ---------------------------------------------------------------------------

const char* to_string(TeMode m) {
  switch (m) {
    case TeMode::weak_1p: return "wTE(1,p)";
    case TeMode::one_phi: return "TE(1,phi_p)";
    case TeMode::s_p: return "TE(s,p)";
    case TeMode::phi_one: return "TE(phi_p,1)";
  }
  return "?";
}

namespace {

std::vector<double> gibbs(std::span<const double> mu, std::span<const double> f, double lambda) {
  double top = -kInfinity;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) top = std::max(top, lambda * f[i]);
  std::vector<double> w(mu.size());
  double z = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    w[i] = mu[i] > 0.0 ? mu[i] * std::exp(lambda * f[i] - top) : 0.0;
    z += w[i];
  }
  for (double& x : w) x /= z;
  return w;
}

std::string entry_id(const TeOptions& o) {
  switch (o.mode) {
    case TeMode::weak_1p: return "D_wTE_1_p";
    case TeMode::one_phi: return "D_TE_1_phi_p";
    case TeMode::s_p: return "D_TE_s_p";
    case TeMode::phi_one: return "D_TE_phi_p_1";
  }
  return "?";
}

}  // namespace

std::vector<DiscreteWitness> default_witnesses(const DiscreteSpace& s) {
  const int n = s.size();
  const auto& mu = s.weights();
  std::vector<DiscreteWitness> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    w[static_cast<std::size_t>(i)] = 1.0;
    out.push_back({"point-mass", static_cast<double>(i), w});
    for (double t : {0.25, 0.5, 0.75, 0.9}) {
      std::vector<double> m(mu.begin(), mu.end());
      for (auto& x : m) x *= 1.0 - t;
      m[static_cast<std::size_t>(i)] += t;
      out.push_back({"mixture", t, m});
    }
  }
  // Closed balls around each point.
  for (int i = 0; i < n; ++i) {
    std::vector<double> radii;
    for (int j = 0; j < n; ++j) radii.push_back(s.d(i, j));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) {
      std::vector<double> w(static_cast<std::size_t>(n), 0.0);
      double mass = 0.0;
      int count = 0;
      for (int j = 0; j < n; ++j)
        if (s.d(i, j) <= r) {
          w[static_cast<std::size_t>(j)] = mu[static_cast<std::size_t>(j)];
          mass += mu[static_cast<std::size_t>(j)];
          ++count;
        }
      if (count == n || count == 1 || mass <= 0.0) continue;
      for (double& x : w) x /= mass;
      out.push_back({"ball", r, w});
    }
  }
  std::vector<std::vector<double>> fs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) f[static_cast<std::size_t>(j)] = s.d(i, j);
    fs.push_back(f);
    for (double& x : f) x = -x;
    fs.push_back(f);
  }
  if (n <= 40) {
    for (int i = 0; i < n; ++i) {
      std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
      delta[static_cast<std::size_t>(i)] = 1.0;
      if (mu[static_cast<std::size_t>(i)] >= 1.0) continue;
      fs.push_back(kr_dual(s, delta, mu).f);
    }
  }
  const double scale = 1.0 / std::max(s.diameter(), 1e-12);
  for (const auto& f : fs)
    for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) out.push_back({"gibbs", lam, gibbs(mu, f, lam * scale)});
  return out;
}

double largest_phi_rate(const std::function<double(double)>& cost_at, double entropy) {
  if (!(entropy >= 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (cost_at(hi) <= entropy) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return kInfinity;
  }
  for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cost_at(mid) <= entropy) lo = mid; else hi = mid;
  }
  return hi;
}

ConstantEntry te_constant_estimate(const DiscreteSpace& s, const TeOptions& opts,
                                   const std::vector<DiscreteWitness>& witnesses, Exec exec) {
  const auto& mu = s.weights();
  const std::int64_t count = static_cast<std::int64_t>(witnesses.size());
  std::vector<double> ratio(witnesses.size(), kInfinity);
  const auto dist = s.dist();
  std::vector<double> dist_s;
  if (opts.mode == TeMode::s_p) dist_s = cost_matrix(s, [&](double d) { return std::pow(d, opts.s); });
  auto eval = [&](std::int64_t k) {
    const auto& nu = witnesses[static_cast<std::size_t>(k)].weights;
    const double h = relative_entropy(nu, mu);
    if (std::isinf(h)) return kInfinity;
    switch (opts.mode) {
      case TeMode::weak_1p: {
        const double w = solve_transport(nu, mu, dist).cost;
        if (w <= 1e-14) return kInfinity;
        return (std::pow(h, 1.0 / opts.p) + 1.0) / w;
      }
      case TeMode::one_phi: {
        const double w = solve_transport(nu, mu, dist).cost;
        if (w <= 1e-14) return kInfinity;
        return phi_inverse(opts.p, h) / w;
      }
      case TeMode::s_p: {
        const double w = std::pow(solve_transport(nu, mu, dist_s).cost, 1.0 / opts.s);
        if (w <= 1e-14) return kInfinity;
        return std::pow(h, 1.0 / opts.p) / w;
      }
      case TeMode::phi_one: {
        if (solve_transport(nu, mu, dist).cost <= 1e-14) return kInfinity;
        return largest_phi_rate(
            [&](double D) {
              auto c = cost_matrix(s, [&](double d) { return phi(opts.p, D * d); });
              return solve_transport(nu, mu, c).cost;
            },
            h);
      }
    }
    return kInfinity;
  };
  if (exec == Exec::serial) {
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = eval(k);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = eval(k);
  }
  std::size_t best = witnesses.size();
  for (std::size_t k = 0; k < ratio.size(); ++k)
    if (std::isfinite(ratio[k]) && (best == witnesses.size() || ratio[k] < ratio[best])) best = k;
  if (best == witnesses.size()) throw Rejection("all witnesses are degenerate (zero transport)");
  ConstantEntry e;
  e.id = entry_id(opts);
  e.value = ratio[best];
  e.direction = Direction::upper;
  e.certified = true;
  e.method = std::string("witness minimum, ") + to_string(opts.mode) + ", best family " +
             witnesses[best].family;
  e.witnesses["index"] = static_cast<double>(best);
  e.witnesses["parameter"] = witnesses[best].parameter;
  e.witnesses["p"] = opts.p;
  e.witnesses["entropy"] = relative_entropy(witnesses[best].weights, mu);
  return e;
}

ConstantEntry te_constant_estimate(const DiscreteSpace& s, const TeOptions& opts, Exec exec) {
  return te_constant_estimate(s, opts, default_witnesses(s), exec);
}

// ---------------------------------------------------------------------------

std::vector<Measure1D> default_witnesses_1d(const Measure1D& mu) {
  std::vector<Measure1D> out;
  const std::vector<double> x(mu.grid().begin(), mu.grid().end());
  const auto v = mu.potential();
  const std::size_t n = x.size();
  const double spread = mu.quantile(0.75) - mu.quantile(0.25);
  const double left_slope = (v[1] - v[0]) / (x[1] - x[0]);
  for (double t : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    for (double sign : {1.0, -1.0}) {
      const double shift = sign * t * spread;
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double src = x[i] - shift;
        if (src < mu.lower()) w[i] = v[0] + left_slope * (src - mu.lower());
        else if (src > mu.upper()) w[i] = v[n - 1] + (v[n - 1] - v[n - 2]) / (x[n - 1] - x[n - 2]) * (src - mu.upper());
        else w[i] = mu.potential_at(src);
      }
      out.push_back(Measure1D::from_potential(x, std::move(w), {"translate", {{"t", shift}}}));
    }
  }
  for (double lam : {0.1, 0.25, 0.5, 1.0, 2.0}) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = v[i] - sign * lam / spread * x[i];
      out.push_back(Measure1D::from_potential(x, std::move(w), {"tilt", {{"lambda", sign * lam / spread}}}));
    }
  }
  for (double u : {0.5, 0.25, 0.1, 0.01}) {
    out.push_back(derive_restrict(mu, mu.upper_quantile(u), mu.upper()));
    out.push_back(derive_restrict(mu, mu.lower(), mu.quantile(u)));
  }
  return out;
}

ConstantEntry te_constant_estimate_1d(const Measure1D& mu, const TeOptions& opts,
                                      const std::vector<Measure1D>& witnesses, Exec exec) {
  const std::int64_t count = static_cast<std::int64_t>(witnesses.size());
  std::vector<double> ratio(witnesses.size(), kInfinity);
  auto eval = [&](std::int64_t k) {
    const Measure1D& nu = witnesses[static_cast<std::size_t>(k)];
    const double h = relative_entropy_1d(nu, mu);
    if (std::isinf(h)) return kInfinity;
    auto rule = displacement_rule(nu, mu);
    const double w1 = w1_1d(nu, mu);
    if (w1 <= 1e-14) return kInfinity;
    switch (opts.mode) {
      case TeMode::weak_1p: return (std::pow(h, 1.0 / opts.p) + 1.0) / w1;
      case TeMode::one_phi: return phi_inverse(opts.p, h) / w1;
      case TeMode::s_p: {
        const double ws = std::pow(rule_cost(rule, [&](double d) { return std::pow(d, opts.s); }), 1.0 / opts.s);
        return ws > 1e-14 ? std::pow(h, 1.0 / opts.p) / ws : kInfinity;
      }
      case TeMode::phi_one:
        return largest_phi_rate(
            [&](double D) { return rule_cost(rule, [&](double d) { return phi(opts.p, D * d); }); }, h);
    }
    return kInfinity;
  };
  if (exec == Exec::serial) {
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = eval(k);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < count; ++k) ratio[static_cast<std::size_t>(k)] = eval(k);
  }
  std::size_t best = witnesses.size();
  for (std::size_t k = 0; k < ratio.size(); ++k)
    if (std::isfinite(ratio[k]) && (best == witnesses.size() || ratio[k] < ratio[best])) best = k;
  if (best == witnesses.size()) throw Rejection("all witnesses are degenerate (zero transport)");
  ConstantEntry e;
  e.id = entry_id(opts);
  e.value = ratio[best];
  e.direction = Direction::upper;
  e.certified = true;
  e.method = std::string("witness minimum, ") + to_string(opts.mode) + ", best family " +
             witnesses[best].provenance().kind;
  e.witnesses["index"] = static_cast<double>(best);
  e.witnesses["p"] = opts.p;
  for (const auto& [k, v] : witnesses[best].provenance().params) e.witnesses["witness_" + k] = v;
  return e;
}

ConstantEntry te_constant_estimate_1d(const Measure1D& mu, const TeOptions& opts, Exec exec) {
  return te_constant_estimate_1d(mu, opts, default_witnesses_1d(mu), exec);
}

// ---------------------------------------------------------------------------

double lipschitz_constant(const DiscreteSpace& s, std::span<const double> g) {
  double l = 0.0;
  for (int i = 0; i < s.size(); ++i)
    for (int j = i + 1; j < s.size(); ++j)
      l = std::max(l, std::abs(g[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(j)]) / s.d(i, j));
  return l;
}

namespace {

double log_moment(std::span<const double> w, std::span<const double> g) {
  double top = -kInfinity;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) top = std::max(top, g[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s += w[i] * std::exp(g[i] - top);
  return top + std::log(s);
}

double psi1_ratio(const DiscreteSpace& s, std::span<const double> nu, std::span<const double> mu,
                  std::span<const double> g) {
  const double lip = lipschitz_constant(s, g);
  if (lip <= 0.0) return 0.0;
  return std::abs(log_moment(nu, g) - log_moment(mu, g)) / lip;
}

}  // namespace

Psi1Bound psi1_metric_bound(const DiscreteSpace& s, std::span<const double> nu,
                            std::span<const double> mu,
                            const std::vector<std::vector<double>>& candidates) {
  const auto n = static_cast<std::size_t>(s.size());
  validate_probability(nu, n, "first measure");
  validate_probability(mu, n, "second measure");
  std::vector<std::vector<double>> all = candidates;
  const auto kr = kr_dual(s, nu, mu);
  for (double eps : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    std::vector<double> g(kr.f);
    for (double& x : g) x *= eps;
    all.push_back(std::move(g));
  }
  Psi1Bound out;
  for (const auto& g : all) {
    if (g.size() != n) throw Rejection("candidate function has the wrong length");
    const double r = psi1_ratio(s, nu, mu, g);
    if (r > out.value || out.best_g.empty()) {
      out.value = r;
      out.best_g = g;
    }
  }
  // Coordinate search from the best candidate.
  double step = 0.25 * std::max(s.diameter(), 1e-12) * std::max(lipschitz_constant(s, out.best_g), 1e-6);
  while (step > 1e-9) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {1.0, -1.0}) {
        std::vector<double> g = out.best_g;
        g[i] += dir * step;
        const double r = psi1_ratio(s, nu, mu, g);
        if (r > out.value * (1.0 + 1e-12)) {
          out.value = r;
          out.best_g = std::move(g);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

// ---------------------------------------------------------------------------

ConstantEntry first_moment_constant(const DiscreteSpace& s, Exec exec) {
  const int n = s.size();
  if (n > 8) throw Rejection("exact first-moment constant supports n <= 8; use the heuristic mode");
  const auto& mu = s.weights();
  std::int64_t patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;
  auto eval = [&](std::int64_t code) {
    // Digit 0: f_i >= 0, 1: f_i <= 0, 2: f_i = 0.
    std::vector<int> sign(static_cast<std::size_t>(n));
    double pos_or_zero = 0.0, neg_or_zero = 0.0;
    for (int i = 0; i < n; ++i) {
      sign[static_cast<std::size_t>(i)] = static_cast<int>(code % 3);
      code /= 3;
      const int d = sign[static_cast<std::size_t>(i)];
      if (d != 1) pos_or_zero += mu[static_cast<std::size_t>(i)];
      if (d != 0) neg_or_zero += mu[static_cast<std::size_t>(i)];
    }
    if (pos_or_zero < 0.5 - 1e-12 || neg_or_zero < 0.5 - 1e-12) return -kInfinity;
    LinearProgram lp(n);
    for (int i = 0; i < n; ++i) {
      const int d = sign[static_cast<std::size_t>(i)];
      lp.objective[static_cast<std::size_t>(i)] = d == 0 ? mu[static_cast<std::size_t>(i)] : d == 1 ? -mu[static_cast<std::size_t>(i)] : 0.0;
      std::vector<double> row(static_cast<std::size_t>(n), 0.0);
      row[static_cast<std::size_t>(i)] = 1.0;
      if (d == 0) lp.add(row, Sense::ge, 0.0);
      else if (d == 1) lp.add(row, Sense::le, 0.0);
      else lp.add(row, Sense::eq, 0.0);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        r[static_cast<std::size_t>(i)] = 1.0;
        r[static_cast<std::size_t>(j)] = -1.0;
        lp.add(std::move(r), Sense::le, s.d(i, j));
      }
    }
    auto res = solve_lp(lp);
    if (res.status != LpStatus::optimal) throw Rejection("first-moment pattern LP did not solve");
    return res.value;
  };
  const double inv = std::max(0.0, kernels::max_over(patterns, eval, exec));
  ConstantEntry e;
  e.id = "inv_D_FM";
  e.value = inv;
  e.direction = Direction::two_sided;
  e.certified = true;
  e.method = "sign-pattern LP enumeration";
  e.witnesses["D_FM"] = inv > 0.0 ? 1.0 / inv : kInfinity;
  return e;
}

namespace {

// int |x - m| dmu with m the median.
double absolute_deviation(const Measure1D& mu) {
  const double m = mu.median();
  const double upper = mu.moment_between(m, mu.upper()) - m * mu.survival(m);
  const double lower = m * mu.cdf(m) - mu.moment_between(mu.lower(), m);
  return upper + lower;
}

// int | |x - x0| - med | dmu, on the node weights.
double distance_deviation(const Measure1D& mu, double x0) {
  // Median m of |x - x0|: mu(|x - x0| <= m) = 1/2.
  double lo = 0.0, hi = std::max(mu.upper() - x0, x0 - mu.lower());
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mu.mass_between(x0 - mid, x0 + mid) < 0.5) lo = mid; else hi = mid;
  }
  const double m = 0.5 * (lo + hi);
  const auto& w = mu.node_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += w[i] * std::abs(std::abs(mu.grid()[i] - x0) - m);
  return s;
}

}  // namespace

ConstantEntry first_moment_constant_1d(const Measure1D& mu) {
  ConstantEntry e;
  e.id = "inv_D_FM";
  e.direction = Direction::lower;
  e.certified = false;
  e.method = "candidates x and |x - x0| with local search";
  double best = absolute_deviation(mu);
  e.witnesses["x0"] = kInfinity;
  double best_x0 = mu.median();
  double best_d = -kInfinity;
  for (int k = 1; k < 64; ++k) {
    const double x0 = mu.quantile(k / 64.0);
    const double d = distance_deviation(mu, x0);
    if (d > best_d) {
      best_d = d;
      best_x0 = x0;
    }
  }
  // Golden-section refinement around the best sample.
  double a = best_x0 - 0.1 * (mu.quantile(0.75) - mu.quantile(0.25));
  double b = best_x0 + 0.1 * (mu.quantile(0.75) - mu.quantile(0.25));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (distance_deviation(mu, c) > distance_deviation(mu, d)) b = d; else a = c;
  }
  const double refined = distance_deviation(mu, 0.5 * (a + b));
  if (refined > best_d) {
    best_d = refined;
    best_x0 = 0.5 * (a + b);
  }
  if (best_d > best) {
    best = best_d;
    e.witnesses["x0"] = best_x0;
  }
  e.value = best;
  e.witnesses["D_FM"] = best > 0.0 ? 1.0 / best : kInfinity;
  return e;
}

}  // namespace conc
