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

#include "conc/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "conc/cost.hpp"
#include "conc/transport.hpp"

namespace conc {

namespace {

// log of int_0^h exp(a + (b - a) t / h) dt.
double log_exp_linear(double a, double b, double h) {
  const double d = b - a;
  if (std::abs(d) < 1e-12) return std::log(h) + 0.5 * (a + b);
  if (d > 0.0) return std::log(h) + b + std::log(-std::expm1(-d)) - std::log(d);
  return std::log(h) + a + std::log(-std::expm1(d)) - std::log(-d);
}

double log_sum_exp(const std::vector<double>& terms) {
  double top = -kInfinity;
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

}  // namespace

PhiGrid PhiGrid::tabulate(const std::function<double(double)>& f, double x_max, int points) {
  if (!(x_max > 0.0) || points < 2) throw Rejection("Phi grid needs x_max > 0 and two points");
  PhiGrid g;
  g.x.resize(static_cast<std::size_t>(points));
  g.y.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g.x[static_cast<std::size_t>(i)] = x_max * i / (points - 1);
    g.y[static_cast<std::size_t>(i)] = f(g.x[static_cast<std::size_t>(i)]);
  }
  g.validate();
  return g;
}

void PhiGrid::validate() const {
  if (x.size() < 2 || x.size() != y.size()) throw Rejection("Phi grid needs matching x and y of length >= 2");
  if (x[0] != 0.0 || std::abs(y[0]) > 1e-12) throw Rejection("Phi must start at Phi(0) = 0");
  double prev_slope = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!std::isfinite(y[i + 1])) throw Rejection("Phi values must be finite");
    if (!(x[i + 1] > x[i])) throw Rejection("Phi grid must be strictly increasing");
    const double slope = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (slope < -1e-12) throw Rejection("Phi must be nondecreasing");
    if (slope < prev_slope - 1e-9 * (1.0 + std::abs(prev_slope))) throw Rejection("Phi must be convex");
    prev_slope = slope;
  }
}

double PhiGrid::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  const std::size_t n = x.size();
  if (t >= x[n - 1]) return y[n - 1] + (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]) * (t - x[n - 1]);
  const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
  return y[k] + (y[k + 1] - y[k]) * (t - x[k]) / (x[k + 1] - x[k]);
}

double PhiGrid::inverse(double v) const {
  if (v <= y[0]) return 0.0;
  if (v > y.back()) throw Rejection("Phi^{-1} argument " + std::to_string(v) + " exceeds the tabulated range");
  const auto k = static_cast<std::size_t>(std::lower_bound(y.begin(), y.end(), v) - y.begin());
  return x[k - 1] + (v - y[k - 1]) / (y[k] - y[k - 1]) * (x[k] - x[k - 1]);
}

double PhiGrid::conjugate(double lambda) const {
  const double l[1] = {lambda};
  return legendre_numeric(x, y, l, Exec::serial)[0];
}

std::vector<double> PhiGrid::conjugate(std::span<const double> lambdas) const {
  return legendre_numeric(x, y, lambdas, Exec::serial);
}

double PhiGrid::tail_integral() const {
  const std::size_t n = x.size();
  const double last = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  if (!(last > 0.0)) throw Rejection("exp(-Phi) is not integrable: Phi is flat at the end of its grid");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) s += std::exp(log_exp_linear(-y[i], -y[i + 1], x[i + 1] - x[i]));
  return s + std::exp(-y[n - 1]) / last;
}

void LaplaceBound::validate() const {
  phi.validate();
  if (!(D > 0.0) || !std::isfinite(D)) throw Rejection("Laplace bound needs finite D > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Rejection("Laplace bound needs finite eps >= 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw Rejection("Laplace bound needs finite delta >= 0");
}

double LaplaceBound::exponent(double lambda) const { return lambda * eps + phi.conjugate(lambda) + delta; }

void ConcBound::validate() const {
  phi.validate();
  if (!(Dp >= 0.0) || !std::isfinite(Dp)) throw Rejection("concentration bound needs finite D' >= 0");
  if (!(zp >= 0.0) || !std::isfinite(zp)) throw Rejection("concentration bound needs finite z' >= 0");
  if (!(deltap >= -kLog2 - 1e-15) || !std::isfinite(deltap))
    throw Rejection("concentration bound needs finite delta' >= -log 2");
}

double ConcBound::at(double r) const { return phi(std::max(Dp * r - zp, 0.0)) - deltap; }

ConcBound ConcBound::shift(double z2, double delta2) const {
  validate();
  if (z2 < 0.0 || delta2 < -kLog2) throw Rejection("shift needs z'' >= 0 and delta'' >= -log 2");
  if (z2 == 0.0 && delta2 == -kLog2) throw Rejection("shift needs z'' > 0 or delta'' > -log 2");
  ConcBound out = *this;
  out.zp = z2;
  out.deltap = delta2;
  double rate = Dp;
  // K(r) >= log 2 always, so only max(log 2, bound) has to be dominated.
  for (int k = 0; k <= 4000; ++k) {
    const double r = 1e-6 * std::pow(10.0, k / 400.0);
    const double target = std::max(kLog2, at(r)) + delta2;
    if (target > phi.y.back()) break;
    rate = std::min(rate, (z2 + phi.inverse(target)) / r);
  }
  out.Dp = rate;
  return out;
}

double log_laplace(std::span<const double> mu, std::span<const double> f, double lambda) {
  if (mu.size() != f.size()) throw Rejection("log_laplace: weights and values differ in length");
  if (lambda == 0.0) return 0.0;
  std::vector<double> terms;
  terms.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    const double e = lambda * f[i];
    if (std::isnan(e)) throw Rejection("log_laplace: integrand is not finite");
    if (is_plus_infinity(e)) return kInfinity;
    terms.push_back(std::log(mu[i]) + e);
  }
  return log_sum_exp(terms);
}

double log_laplace(const Measure1D& mu, std::span<const double> f, double lambda) {
  if (f.size() != mu.size()) throw Rejection("log_laplace: f must be given on the measure grid");
  if (lambda == 0.0) return 0.0;
  const auto x = mu.grid();
  const auto v = mu.potential();
  std::vector<double> terms;
  terms.reserve(x.size());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = lambda * f[i] - v[i] - mu.log_z();
    const double b = lambda * f[i + 1] - v[i + 1] - mu.log_z();
    if (std::isnan(a) || std::isnan(b)) throw Rejection("log_laplace: integrand is not finite");
    if (is_plus_infinity(a) || is_plus_infinity(b)) return kInfinity;
    terms.push_back(log_exp_linear(a, b, x[i + 1] - x[i]));
  }
  return log_sum_exp(terms);
}

GibbsCheck gibbs_check(std::span<const double> mu, std::span<const double> psi) {
  validate_probability(mu, mu.size(), "reference measure");
  if (psi.size() != mu.size()) throw Rejection("gibbs_check: psi has the wrong length");
  for (double p : psi)
    if (!std::isfinite(p)) throw Rejection("gibbs_check: psi must be finite");
  GibbsCheck out;
  out.log_moment = log_laplace(mu, psi, 1.0);
  out.theta.assign(mu.size(), 0.0);
  double lin = 0.0, ent = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    const double th = std::exp(psi[i] - out.log_moment);
    out.theta[i] = th;
    lin += mu[i] * th * psi[i];
    if (th > 0.0) ent += mu[i] * th * std::log(th);
  }
  out.sup_value = lin - ent;
  return out;
}

ConcBound laplace_to_conc(const LaplaceBound& b) {
  b.validate();
  ConcBound c;
  c.phi = b.phi;
  c.Dp = b.D;
  c.deltap = b.delta;
  c.zp = b.phi.inverse(kLog2 + b.delta) + 2.0 * b.eps;
  return c;
}

LaplaceBound conc_to_laplace(const ConcBound& b, double tau) {
  b.validate();
  if (!(tau > 0.0 && tau < 1.0)) throw Rejection("tau must lie in (0, 1)");
  LaplaceBound l;
  l.phi = b.phi;
  l.D = tau * b.Dp;
  l.delta = b.deltap + std::log(std::exp(-b.deltap) + tau / (1.0 - tau));
  l.eps = tau * (2.0 * b.zp + b.phi.inverse(kLog2 + b.deltap) + b.phi.tail_integral());
  return l;
}

HerbstBounds herbst_laplace(double rho, double x_max) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Rejection("Herbst bound needs rho > 0");
  HerbstBounds h;
  h.laplace.phi = PhiGrid::tabulate([rho](double t) { return rho * t * t; }, x_max);
  h.conc.phi = h.laplace.phi;
  h.conc.zp = std::sqrt(kLog2 / rho);
  return h;
}

// ---------------------------------------------------------------------------

namespace {

// Oriented spanning tree number `code` to the potential it pins, f[0] = 0.
// Returns false when the tree is not a vertex of the Lipschitz polytope.
bool tree_vertex(const DiscreteSpace& s, std::int64_t code, std::vector<double>& f) {
  const int n = s.size();
  const int edges = n - 1;
  std::uint64_t orient = static_cast<std::uint64_t>(code) & ((1ull << edges) - 1);
  std::int64_t tree = code >> edges;
  int prufer[8] = {0};
  for (int k = 0; k < n - 2; ++k) {
    prufer[k] = static_cast<int>(tree % n);
    tree /= n;
  }
  int degree[8];
  std::fill(degree, degree + n, 1);
  for (int k = 0; k < n - 2; ++k) ++degree[prufer[k]];
  int ea[8], eb[8];
  for (int k = 0; k < n - 2; ++k) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    ea[k] = leaf;
    eb[k] = prufer[k];
    --degree[leaf];
    --degree[prufer[k]];
  }
  int u = -1, w = -1;
  for (int i = 0; i < n; ++i)
    if (degree[i] == 1) (u < 0 ? u : w) = i;
  ea[edges - 1] = u;
  eb[edges - 1] = w;
  // Propagate from node 0; the tree has n - 1 edges so n - 1 sweeps suffice.
  bool known[8] = {false};
  known[0] = true;
  f.assign(static_cast<std::size_t>(n), 0.0);
  for (int pass = 0, done = 1; done < n && pass < n; ++pass) {
    for (int e = 0; e < edges; ++e) {
      const int a = ea[e], b = eb[e];
      const double d = (orient >> e & 1) ? s.d(a, b) : -s.d(a, b);  // f_a - f_b
      if (known[a] && !known[b]) {
        f[static_cast<std::size_t>(b)] = f[static_cast<std::size_t>(a)] - d;
        known[b] = true;
        ++done;
      } else if (known[b] && !known[a]) {
        f[static_cast<std::size_t>(a)] = f[static_cast<std::size_t>(b)] + d;
        known[a] = true;
        ++done;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(j)]) > s.d(i, j) * (1.0 + 1e-12) + 1e-12)
        return false;
  return true;
}

void center(std::span<const double> mu, std::vector<double>& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m += mu[i] * f[i];
  for (double& v : f) v -= m;
}

}  // namespace

LaplaceSup laplace_sup_discrete(const DiscreteSpace& s, double lambda, Exec exec) {
  const int n = s.size();
  if (!(lambda >= 0.0)) throw Rejection("lambda must be nonnegative");
  if (n > 7) return laplace_sup_heuristic(s, lambda);
  LaplaceSup out;
  out.exact = true;
  out.f.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1 || lambda == 0.0) return out;
  const auto& mu = s.weights();
  std::int64_t total = 1;
  for (int k = 0; k < n - 2; ++k) total *= n;
  total <<= (n - 1);
  auto eval = [&](std::int64_t code, std::vector<double>& f) {
    if (!tree_vertex(s, code, f)) return -kInfinity;
    center(mu, f);
    return log_laplace(mu, f, lambda);
  };
  double best = -kInfinity;
  std::int64_t best_code = -1;
  auto consider = [](double v, std::int64_t c, double& bv, std::int64_t& bc) {
    if (v > bv || (v == bv && c < bc)) {
      bv = v;
      bc = c;
    }
  };
  if (exec == Exec::serial) {
    std::vector<double> f;
    for (std::int64_t c = 0; c < total; ++c) consider(eval(c, f), c, best, best_code);
  } else {
#pragma omp parallel
    {
      std::vector<double> f;
      double local = -kInfinity;
      std::int64_t local_code = -1;
#pragma omp for schedule(static)
      for (std::int64_t c = 0; c < total; ++c) consider(eval(c, f), c, local, local_code);
#pragma omp critical
      consider(local, local_code, best, best_code);
    }
  }
  eval(best_code, out.f);
  out.value = best;
  return out;
}

LaplaceSup laplace_sup_heuristic(const DiscreteSpace& s, double lambda, int starts, std::uint64_t seed) {
  const int n = s.size();
  const auto& mu = s.weights();
  LaplaceSup out;
  out.f.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1 || lambda == 0.0) return out;
  out.value = -kInfinity;
  Rng rng(seed);
  for (int k = 0; k < starts; ++k) {
    std::vector<double> f;
    if (k < 2 * std::min(n, starts / 4)) {
      // Distance functions to a point, both signs.
      const int x = (k / 2) * n / std::min(n, starts / 4);
      f.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = (k % 2 ? -1.0 : 1.0) * s.d(i, x);
    } else {
      f = kr_dual(s, random_simplex(rng, n), mu).f;
    }
    center(mu, f);
    double value = log_laplace(mu, f, lambda);
    // Linearize the convex objective; the best linear step is a KR potential
    // between the Gibbs tilt and mu.
    for (int it = 0; it < 100; ++it) {
      std::vector<double> tilt(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        tilt[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)] * std::exp(lambda * f[static_cast<std::size_t>(i)] - value);
      double z = 0.0;
      for (double t : tilt) z += t;
      for (double& t : tilt) t /= z;
      auto g = kr_dual(s, tilt, mu).f;
      center(mu, g);
      const double next = log_laplace(mu, g, lambda);
      if (!(next > value + 1e-14 * (1.0 + std::abs(value)))) break;
      f = std::move(g);
      value = next;
    }
    if (value > out.value) {
      out.value = value;
      out.f = f;
    }
  }
  return out;
}

}  // namespace conc
