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

#include "conc/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "conc/kernels.hpp"

namespace conc {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::upper: return "upper";
    case Direction::lower: return "lower";
    case Direction::two_sided: return "two-sided";
  }
  return "?";
}

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::iso: return "iso";
    case ProfileKind::conc: return "conc";
    case ProfileKind::bound_alpha: return "bound-alpha";
    case ProfileKind::bound_gamma: return "bound-gamma";
  }
  return "?";
}

const char* to_string(Exactness e) {
  switch (e) {
    case Exactness::exact: return "exact";
    case Exactness::half_line_upper_bound: return "half-line-upper-bound";
    case Exactness::candidate_lower_bound: return "candidate-lower-bound";
  }
  return "?";
}

double Profile::operator()(double t) const {
  const std::size_t n = x.size();
  if (n == 0) throw Rejection("empty profile");
  if (interp == Interp::step) {
    // Last k with x[k] < t; t at or below x[0] reads y[0].
    auto it = std::lower_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    return y[k == 0 ? 0 : k - 1];
  }
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (t - x[i]) / (x[i + 1] - x[i]);
  if (w == 0.0) return y[i];
  if (std::isinf(y[i]) || std::isinf(y[i + 1])) return kInfinity;
  return y[i] + w * (y[i + 1] - y[i]);
}

double Profile::inverse(double level) const {
  const std::size_t n = x.size();
  if (n == 0) throw Rejection("empty profile");
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] >= level) {
      if (interp == Interp::step || i == 0) return x[i];
      if (std::isinf(y[i])) return x[i];
      const double w = (level - y[i - 1]) / (y[i] - y[i - 1]);
      return x[i - 1] + w * (x[i] - x[i - 1]);
    }
  }
  std::ostringstream os;
  os << "level " << level << " lies above the profile's range (max " << y.back() << ")";
  throw Rejection(os.str());
}

void Profile::validate() const {
  if (x.size() != y.size() || x.empty()) throw Rejection("profile table is empty or ragged");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw Rejection("profile inputs must be strictly increasing");
}

Profile Profile::tabulate(ProfileKind kind, std::span<const double> xs,
                          const std::function<double(double)>& f) {
  Profile p;
  p.kind = kind;
  p.x.assign(xs.begin(), xs.end());
  p.y.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) p.y[i] = f(xs[i]);
  p.validate();
  return p;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------
// One-dimensional profiles.

double half_line_iso(const Measure1D& mu, double v) {
  if (!(v > 0.0 && v <= 0.5)) {
    std::ostringstream os;
    os << "isoperimetric profile input must lie in (0, 1/2], got " << v;
    throw Rejection(os.str());
  }
  return std::min(mu.density(mu.quantile(v)), mu.density(mu.upper_quantile(v)));
}

std::vector<double> default_iso_grid() {
  std::vector<double> v = geometric_grid(1e-8, 1e-2, 241);
  std::vector<double> rest = linear_grid(1e-2, 0.5, 491);
  v.insert(v.end(), rest.begin() + 1, rest.end());
  return v;
}

Profile iso_profile_1d(const Measure1D& mu, std::span<const double> vs) {
  Profile p = Profile::tabulate(ProfileKind::iso, vs, [&](double v) { return half_line_iso(mu, v); });
  p.exactness = mu.logconcave() ? Exactness::exact : Exactness::half_line_upper_bound;
  return p;
}

Profile iso_profile_1d(const Measure1D& mu) { return iso_profile_1d(mu, default_iso_grid()); }

Profile conc_profile_1d(const Measure1D& mu, std::span<const double> rs) {
  const bool exact = mu.logconcave() && mu.symmetric();
  const double m = mu.median();
  std::vector<std::pair<double, double>> intervals;
  if (!exact) {
    for (int k = 0; k <= 100; ++k) {
      const double u = 0.005 * k;
      intervals.emplace_back(mu.quantile(u), mu.upper_quantile(0.5 - u));
    }
  }
  Profile p = Profile::tabulate(ProfileKind::conc, rs, [&](double r) {
    if (r < 0.0) throw Rejection("concentration radius must be nonnegative");
    double worst = std::max(mu.survival(m + r), mu.cdf(m - r));
    for (const auto& [a, b] : intervals) worst = std::max(worst, mu.cdf(a - r) + mu.survival(b + r));
    if (r == 0.0) worst = std::max(worst, 0.5);
    return worst > 0.0 ? -std::log(worst) : kInfinity;
  });
  p.exactness = exact ? Exactness::exact : Exactness::candidate_lower_bound;
  return p;
}

Profile conc_profile_1d(const Measure1D& mu) {
  const double reach = 0.9 * std::min(mu.upper() - mu.median(), mu.median() - mu.lower());
  return conc_profile_1d(mu, linear_grid(0.0, reach, 2001));
}

// ---------------------------------------------------------------------------
// Finite spaces.

namespace {

struct Levels {
  std::vector<double> values;  // distinct positive distances, ascending
  std::vector<int> rank;       // n x n
};

Levels distance_levels(const DiscreteSpace& s) {
  const int n = s.size();
  Levels out;
  std::vector<double> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back(s.d(i, j));
  std::sort(all.begin(), all.end());
  const double tol = 1e-12 * (1.0 + s.diameter());
  for (double d : all)
    if (out.values.empty() || d > out.values.back() + tol) out.values.push_back(d);
  out.rank.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = s.d(i, j);
      auto it = std::lower_bound(out.values.begin(), out.values.end(), d - tol);
      out.rank[static_cast<std::size_t>(i) * n + j] = static_cast<int>(it - out.values.begin()) + 1;
    }
  return out;
}

Profile step_profile(const Levels& lv, const std::vector<double>& worst) {
  Profile p;
  p.kind = ProfileKind::conc;
  p.interp = Interp::step;
  p.x.push_back(0.0);
  p.x.insert(p.x.end(), lv.values.begin(), lv.values.end());
  for (double w : worst) p.y.push_back(w > 0.0 ? -std::log(w) : kInfinity);
  return p;
}

}  // namespace

Profile conc_profile_discrete(const DiscreteSpace& s, Exec exec) {
  if (s.size() > 22) {
    std::ostringstream os;
    os << "exact concentration profile enumerates 2^n subsets and supports n <= 22 (got n = "
       << s.size() << "); use the sampled mode";
    throw Rejection(os.str());
  }
  Levels lv = distance_levels(s);
  const int levels = static_cast<int>(lv.values.size());
  auto worst = exec == Exec::serial
                   ? kernels::worst_tails_serial(s.size(), lv.rank, s.weights(), levels)
                   : kernels::worst_tails_parallel(s.size(), lv.rank, s.weights(), levels);
  Profile p = step_profile(lv, worst);
  p.exactness = Exactness::exact;
  return p;
}

Profile conc_profile_sampled(const DiscreteSpace& s, Rng& rng, int samples) {
  const int n = s.size();
  Levels lv = distance_levels(s);
  const std::size_t width = lv.values.size() + 1;
  std::vector<double> worst(width, 0.0);
  const auto& w = s.weights();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int t = 0; t < samples; ++t) {
    std::iota(order.begin(), order.end(), 0);
    if (t % 2 == 0) {
      for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(rng.integer(0, i))]);
    } else {
      const int c = rng.integer(0, n - 1);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s.d(c, a) < s.d(c, b); });
    }
    std::vector<int> mind(static_cast<std::size_t>(n), static_cast<int>(width));
    double mass = 0.0;
    for (int a : order) {
      mass += w[static_cast<std::size_t>(a)];
      for (int x = 0; x < n; ++x)
        mind[static_cast<std::size_t>(x)] =
            std::min(mind[static_cast<std::size_t>(x)], lv.rank[static_cast<std::size_t>(a) * n + x]);
      if (mass >= 0.5 - 1e-12) break;
    }
    std::vector<double> out(width, 0.0);
    for (int x = 0; x < n; ++x) {
      const int r = mind[static_cast<std::size_t>(x)];
      if (r > 0) out[static_cast<std::size_t>(r - 1)] += w[static_cast<std::size_t>(x)];
    }
    for (std::size_t k = width - 1; k-- > 0;) out[k] += out[k + 1];
    for (std::size_t k = 0; k < width; ++k) worst[k] = std::max(worst[k], out[k]);
  }
  Profile p = step_profile(lv, worst);
  p.exactness = Exactness::candidate_lower_bound;
  return p;
}

// ---------------------------------------------------------------------------
// Transforms.

namespace {

// int_a^b dy / g(y) for g linear from ga to gb.
double reciprocal_cell(double a, double b, double ga, double gb) {
  const double d = (gb - ga) / ga;
  const double f = std::abs(d) < 1e-8 ? 1.0 - 0.5 * d + d * d / 3.0 : std::log1p(d) / d;
  return (b - a) / ga * f;
}

// Cumulative int_{log 2}^t dy / gamma(y) over a linear gamma table.
class ReciprocalIntegral {
 public:
  explicit ReciprocalIntegral(const Profile& g) : g_(g) {
    g.validate();
    if (g.x.front() > kLog2 + 1e-12)
      throw Rejection("gamma table must start at or below log 2");
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      if (g.x[i] >= kLog2 - 1e-12 && !(g.y[i] > 0.0)) {
        std::ostringstream os;
        os << "gamma hits zero at x = " << g.x[i];
        throw Rejection(os.str());
      }
    }
    start_ = static_cast<std::size_t>(std::upper_bound(g.x.begin(), g.x.end(), kLog2) - g.x.begin());
    // cum_[i] = integral from log 2 to x[i], for i >= start_.
    cum_.assign(g.x.size(), 0.0);
    double prev_x = kLog2, prev_g = g(kLog2), acc = 0.0;
    for (std::size_t i = start_; i < g.x.size(); ++i) {
      acc += reciprocal_cell(prev_x, g.x[i], prev_g, g.y[i]);
      cum_[i] = acc;
      prev_x = g.x[i];
      prev_g = g.y[i];
    }
  }

  double operator()(double t) const {
    if (t > g_.x.back() * (1.0 + 1e-14)) {
      std::ostringstream os;
      os << "integration upper limit " << t << " beyond gamma table (max " << g_.x.back() << ")";
      throw Rejection(os.str());
    }
    if (t <= kLog2) return 0.0;
    auto it = std::upper_bound(g_.x.begin(), g_.x.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - g_.x.begin());  // first x > t
    const double base_x = i == start_ ? kLog2 : g_.x[i - 1];
    const double base = i == start_ ? 0.0 : cum_[i - 1];
    if (t == base_x) return base;
    return base + reciprocal_cell(base_x, t, g_(base_x), g_(t));
  }

  double upper() const { return g_.x.back(); }
  std::size_t start() const { return start_; }

 private:
  const Profile& g_;
  std::size_t start_ = 0;
  std::vector<double> cum_;
};

}  // namespace

Profile iso_to_conc(const Profile& gamma) {
  ReciprocalIntegral J(gamma);
  Profile a;
  a.kind = ProfileKind::bound_alpha;
  a.x.push_back(0.0);
  a.y.push_back(kLog2);
  for (std::size_t i = J.start(); i < gamma.x.size(); ++i) {
    const double r = J(gamma.x[i]);
    if (r <= a.x.back()) continue;
    a.x.push_back(r);
    a.y.push_back(gamma.x[i]);
  }
  a.validate();
  return a;
}

double going_down_shift(const Profile& alpha1, double D) {
  if (!(D >= 0.0)) throw Rejection("density-ratio exponent D must be nonnegative");
  const double level = kLog2 + D;
  if (alpha1.interp == Interp::step) {
    for (std::size_t k = 0; k < alpha1.y.size(); ++k)
      if (alpha1.y[k] > level) return alpha1.x[k];
    throw Rejection("log 2 + D lies above the profile's range");
  }
  return alpha1.inverse(level);
}

Profile conc_going_down(const Profile& alpha1, double D) {
  alpha1.validate();
  const double r1 = going_down_shift(alpha1, D);
  Profile out;
  out.kind = ProfileKind::bound_alpha;
  out.interp = alpha1.interp;
  out.exactness = alpha1.exactness;
  if (alpha1.interp == Interp::step) {
    // Value log 2 on (0, 2 r1], then alpha1(r - r1) - D on the shifted steps.
    out.x.push_back(0.0);
    out.y.push_back(kLog2);
    for (std::size_t k = 0; k < alpha1.x.size(); ++k) {
      const double start = alpha1.x[k] + r1;
      if (start < 2.0 * r1) continue;
      const double v = alpha1.y[k] - D;
      if (start == out.x.back()) out.y.back() = v;
      else {
        out.x.push_back(start);
        out.y.push_back(v);
      }
    }
    return out;
  }
  out.x.push_back(0.0);
  out.y.push_back(kLog2);
  if (r1 > 0.0) {
    out.x.push_back(2.0 * r1);
    out.y.push_back(kLog2);
  }
  for (std::size_t i = 0; i < alpha1.x.size(); ++i) {
    const double r = alpha1.x[i] + r1;
    if (r <= out.x.back()) continue;
    out.x.push_back(r);
    out.y.push_back(alpha1.y[i] - D);
  }
  return out;
}

Profile iso_stability_transform(const Profile& gamma1, double D, std::span<const double> xs) {
  if (!(D >= 0.0)) throw Rejection("density-ratio exponent D must be nonnegative");
  ReciprocalIntegral J(gamma1);
  Profile out;
  out.kind = ProfileKind::bound_gamma;
  for (double x : xs) {
    const double denom = J(x + D);
    if (!(denom > 0.0)) {
      std::ostringstream os;
      os << "transform undefined at x = " << x << " (x + D must exceed log 2)";
      throw Rejection(os.str());
    }
    out.x.push_back(x);
    out.y.push_back(x / denom);
  }
  out.validate();
  return out;
}

Profile iso_stability_transform(const Profile& gamma1, double D,
                                std::optional<GrowthCondition> growth) {
  gamma1.validate();
  if (growth && growth->kappa > 0.0) {
    for (std::size_t i = 0; i < gamma1.x.size(); ++i) {
      const double x = gamma1.x[i];
      if (x < growth->x0) continue;
      const double need = 2.0 * std::sqrt(growth->delta0 * growth->kappa * x);
      if (gamma1.y[i] < need * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "growth condition fails at x = " << x << ": gamma1 = " << gamma1.y[i]
           << " < 2 sqrt(delta0 kappa x) = " << need;
        throw Rejection(os.str());
      }
    }
  }
  std::vector<double> xs;
  for (double x : gamma1.x)
    if (x > 0.0 && x + D > kLog2 * (1.0 + 1e-12) && x + D <= gamma1.x.back()) xs.push_back(x);
  return iso_stability_transform(gamma1, D, std::span<const double>(xs));
}

IsoForm conc_to_iso_form(const Profile& alpha, double kappa, double delta0) {
  alpha.validate();
  if (kappa > 0.0 && !(delta0 > 0.5)) throw Rejection("delta0 must exceed 1/2 when kappa > 0");
  for (std::size_t i = 1; i < alpha.y.size(); ++i)
    if (!(alpha.y[i] > alpha.y[i - 1])) throw Rejection("alpha is not invertible on its table");
  IsoForm out;
  out.gamma.kind = ProfileKind::bound_gamma;
  out.gamma.exactness = alpha.exactness;
  for (std::size_t i = 0; i < alpha.x.size(); ++i) {
    if (alpha.x[i] <= 0.0 || alpha.y[i] <= kLog2) continue;
    out.gamma.x.push_back(alpha.y[i]);
    out.gamma.y.push_back(alpha.y[i] / alpha.x[i]);
  }
  if (kappa <= 0.0) {
    out.feasible = true;
    out.r0 = 0.0;
    return out;
  }
  // Smallest index from which the quadratic lower bound holds to the end.
  std::size_t i0 = alpha.x.size();
  for (std::size_t i = alpha.x.size(); i-- > 0;) {
    if (alpha.y[i] >= delta0 * kappa * alpha.x[i] * alpha.x[i]) i0 = i;
    else break;
  }
  const double rmax = alpha.x.back();
  out.feasible = i0 < alpha.x.size() && alpha.x[i0] <= 0.5 * rmax;
  out.r0 = i0 < alpha.x.size() ? alpha.x[i0] : kInfinity;
  return out;
}

ConstantEntry fit_constant(const Profile& profile, FitTemplate t, const FitOptions& opts) {
  profile.validate();
  ConstantEntry e;
  e.certified = profile.exactness == Exactness::exact;
  e.direction = Direction::upper;
  double best = kInfinity, where = kInfinity;
  auto consider = [&](double v, double at) {
    if (v < best) {
      best = v;
      where = at;
    }
  };
  auto in_range = [&](double v) { return v >= opts.lo && v <= opts.hi; };
  switch (t) {
    case FitTemplate::p_exp_conc: {
      if (profile.kind != ProfileKind::conc && profile.kind != ProfileKind::bound_alpha)
        throw Rejection("p-exp-conc fit needs a concentration profile");
      e.id = "D_Con_p";
      e.method = "grid infimum of (K(r)+1)^{1/p}/r";
      const std::size_t n = profile.x.size();
      for (std::size_t i = 0; i < n; ++i) {
        // Step tables: the infimum over (x_i, x_{i+1}] sits at the right end.
        double r = profile.x[i];
        if (profile.interp == Interp::step) {
          if (i + 1 >= n) break;
          r = profile.x[i + 1];
        }
        const double k = profile.y[i];
        if (r <= 0.0 || !in_range(r) || std::isinf(k)) continue;
        consider(std::pow(std::max(k + 1.0, 0.0), 1.0 / opts.p) / r, r);
      }
      e.witnesses["r"] = where;
      break;
    }
    case FitTemplate::p_exp_iso: {
      if (profile.kind != ProfileKind::iso) throw Rejection("p-exp-iso fit needs an iso profile");
      e.id = "D_Iso_p";
      e.method = "grid infimum of I(v)/I_Gamma_p(v)";
      Measure1D ref = build_gamma_p(opts.p);
      for (std::size_t i = 0; i < profile.x.size(); ++i) {
        const double v = profile.x[i];
        if (!in_range(v) || v <= 0.0 || v > 0.5) continue;
        consider(profile.y[i] / half_line_iso(ref, v), v);
      }
      e.witnesses["v"] = where;
      break;
    }
    case FitTemplate::ratio: {
      if (opts.reference == nullptr) throw Rejection("ratio fit needs a reference profile");
      const Profile& ref = *opts.reference;
      e.id = "ratio";
      e.method = "min and max of profile/reference on the table";
      e.direction = Direction::two_sided;
      double hi = -kInfinity;
      for (std::size_t i = 0; i < profile.x.size(); ++i) {
        const double x = profile.x[i];
        if (!in_range(x) || x < ref.x.front() || x > ref.x.back()) continue;
        const double r = profile.y[i] / ref(x);
        consider(r, x);
        hi = std::max(hi, r);
      }
      e.witnesses["max"] = hi;
      e.witnesses["argmin"] = where;
      break;
    }
  }
  if (std::isinf(best) && best > 0) throw Rejection("fit domain is empty");
  e.value = best;
  return e;
}

}  // namespace conc
