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

#include "conc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace conc {

namespace {

// (1 - exp(-a)) / a for a >= 0, stable near zero.
double one_minus_exp_over(double a) {
  if (a < 1e-300) return 1.0;
  return -std::expm1(-a) / a;
}

// Mass of a cell of width h whose (shifted) potential runs linearly from
// ua to ub: integral of exp(-u).
double cell_integral(double h, double ua, double ub) {
  const double lo = std::min(ua, ub);
  return h * std::exp(-lo) * one_minus_exp_over(std::abs(ub - ua));
}

double second_difference(std::span<const double> x, std::span<const double> v, std::size_t i) {
  const double h0 = x[i] - x[i - 1];
  const double h1 = x[i + 1] - x[i];
  return 2.0 * ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0) / (h0 + h1);
}

// Rounding allowance for a second difference at node i.
double second_difference_slack(std::span<const double> x, std::span<const double> v, std::size_t i) {
  const double h0 = x[i] - x[i - 1];
  const double h1 = x[i + 1] - x[i];
  const double scale = std::max({std::abs(v[i - 1]), std::abs(v[i]), std::abs(v[i + 1]), 1.0});
  const double xs = std::max({std::abs(x[i - 1]), std::abs(x[i + 1]), 1.0});
  // Grid coordinates carry relative rounding too; it enters through the slopes.
  const double slope = std::max(std::abs(v[i + 1] - v[i]) / h1, std::abs(v[i] - v[i - 1]) / h0);
  return 64.0 * 2.2e-16 * (scale / (h0 * h1) + slope * xs / std::min(h0, h1) / (h0 + h1));
}

constexpr double kGaussNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                   0.7966664774136267,  0.9602898564975363};
constexpr double kGaussWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};

}  // namespace

Measure1D Measure1D::from_potential(std::vector<double> grid, std::vector<double> potential,
                                    Provenance provenance) {
  if (grid.size() < 3) throw Rejection("measure grid needs at least 3 points");
  if (grid.size() != potential.size())
    throw Rejection("grid and potential lengths differ");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw Rejection("non-finite grid coordinate");
    if (!std::isfinite(potential[i])) {
      std::ostringstream os;
      os << "non-finite potential at grid point " << i << " (x=" << grid[i] << ")";
      throw Rejection(os.str());
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      std::ostringstream os;
      os << "grid not strictly increasing at index " << i;
      throw Rejection(os.str());
    }
  }

  Measure1D m;
  m.grid_ = std::move(grid);
  m.v_ = std::move(potential);
  m.provenance_ = std::move(provenance);
  const std::size_t n = m.grid_.size();

  const double vmin = *std::min_element(m.v_.begin(), m.v_.end());
  std::vector<double> raw(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    raw[i] = cell_integral(m.grid_[i + 1] - m.grid_[i], m.v_[i] - vmin, m.v_[i + 1] - vmin);
    total += raw[i];
  }
  m.log_z_ = -vmin + std::log(total);
  if (!(m.log_z_ < 700.0))
    throw Rejection("density mass diverges on the grid (log normalization exceeds 700)");

  m.cell_mass_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) m.cell_mass_[i] = raw[i] / total;
  m.cdf_.assign(n, 0.0);
  m.sf_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) m.cdf_[i + 1] = m.cdf_[i] + m.cell_mass_[i];
  for (std::size_t i = n - 1; i-- > 0;) m.sf_[i] = m.sf_[i + 1] + m.cell_mass_[i];

  m.node_weights_.resize(n);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? m.grid_[i] - m.grid_[i - 1] : 0.0;
    const double right = i + 1 < n ? m.grid_[i + 1] - m.grid_[i] : 0.0;
    m.node_weights_[i] = m.density_at(i) * 0.5 * (left + right);
    wsum += m.node_weights_[i];
  }
  for (double& w : m.node_weights_) w /= wsum;

  double min_dd = kInfinity;
  bool convex = true;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dd = second_difference(m.grid_, m.v_, i);
    const double slack = second_difference_slack(m.grid_, m.v_, i);
    if (dd < -slack) convex = false;
    min_dd = std::min(min_dd, dd < 0.0 && dd >= -slack ? 0.0 : dd);
  }
  m.logconcave_ = convex;
  m.median_ = m.quantile(0.5);
  m.kappa_ = std::max(0.0, -min_dd);
  return m;
}

std::size_t Measure1D::cell_of(double x) const {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - grid_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, grid_.size() - 2);
}

double Measure1D::potential_at(double x) const {
  if (x < lower() || x > upper()) return kInfinity;
  const std::size_t i = cell_of(x);
  const double t = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return v_[i] + t * (v_[i + 1] - v_[i]);
}

double Measure1D::density(double x) const {
  const double v = potential_at(x);
  if (is_plus_infinity(v)) return 0.0;
  return std::exp(-v - log_z_);
}

double Measure1D::density_at(std::size_t i) const { return std::exp(-v_[i] - log_z_); }

// mu([x_i, x]) for x inside cell i.
double Measure1D::left_partial(std::size_t i, double x) const {
  const double w = x - grid_[i];
  if (w <= 0.0) return 0.0;
  const double slope = (v_[i + 1] - v_[i]) / (grid_[i + 1] - grid_[i]);
  const double vx = v_[i] + slope * w;
  return cell_integral(w, v_[i] + log_z_, vx + log_z_);
}

// mu([x, x_{i+1}]) for x inside cell i.
double Measure1D::right_partial(std::size_t i, double x) const {
  const double w = grid_[i + 1] - x;
  if (w <= 0.0) return 0.0;
  const double slope = (v_[i + 1] - v_[i]) / (grid_[i + 1] - grid_[i]);
  const double vx = v_[i + 1] - slope * w;
  return cell_integral(w, vx + log_z_, v_[i + 1] + log_z_);
}

double Measure1D::cdf(double x) const {
  if (x <= lower()) return 0.0;
  if (x >= upper()) return 1.0;
  const std::size_t i = cell_of(x);
  return cdf_[i] + left_partial(i, x);
}

double Measure1D::survival(double x) const {
  if (x <= lower()) return 1.0;
  if (x >= upper()) return 0.0;
  const std::size_t i = cell_of(x);
  return sf_[i + 1] + right_partial(i, x);
}

double Measure1D::quantile(double u) const {
  if (u <= 0.0) return lower();
  if (u >= 1.0) return upper();
  const std::size_t n = grid_.size();
  if (u <= 0.5) {
    // cdf_ is nondecreasing; find cell with cdf_[i] <= u < cdf_[i+1].
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    const double r = u - cdf_[i];
    const double rho = density_at(i);
    const double h = grid_[i + 1] - grid_[i];
    const double s = (v_[i + 1] - v_[i]) / h;
    double w;
    if (std::abs(s) * h < 1e-12) {
      w = r / rho;
    } else {
      const double arg = -s * r / rho;
      w = arg <= -1.0 ? h : -std::log1p(arg) / s;
    }
    return grid_[i] + std::clamp(w, 0.0, h);
  }
  return upper_quantile(1.0 - u);
}

double Measure1D::upper_quantile(double t) const {
  if (t >= 1.0) return lower();
  if (t <= 0.0) return upper();
  const std::size_t n = grid_.size();
  // sf_ is nonincreasing; find cell with sf_[i+1] <= t < sf_[i].
  std::size_t lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (sf_[mid] > t) lo = mid; else hi = mid;
  }
  const std::size_t i = lo;
  const double r = t - sf_[i + 1];
  const double rho = density_at(i + 1);
  const double h = grid_[i + 1] - grid_[i];
  const double s = (v_[i + 1] - v_[i]) / h;
  double w;
  if (std::abs(s) * h < 1e-12) {
    w = r / rho;
  } else {
    const double arg = s * r / rho;
    w = arg <= -1.0 ? h : std::log1p(arg) / s;
  }
  return grid_[i + 1] - std::clamp(w, 0.0, h);
}

double Measure1D::mass_between(double a, double b) const {
  if (b <= a) return 0.0;
  a = std::max(a, lower());
  b = std::min(b, upper());
  if (b <= a) return 0.0;
  // Use whichever accumulation keeps the smaller tail accurate.
  if (a > median_) return survival(a) - survival(b);
  return cdf(b) - cdf(a);
}

double Measure1D::moment_between(double a, double b) const {
  a = std::max(a, lower());
  b = std::min(b, upper());
  if (b <= a) return 0.0;
  auto piece = [this](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double t = mid + half * kGaussNodes[k];
      s += kGaussWeights[k] * t * density(t);
    }
    return s * half;
  };
  const std::size_t ia = cell_of(a), ib = cell_of(b);
  if (ia == ib) return piece(a, b);
  double total = piece(a, grid_[ia + 1]);
  for (std::size_t i = ia + 1; i < ib; ++i) total += piece(grid_[i], grid_[i + 1]);
  total += piece(grid_[ib], b);
  return total;
}

bool Measure1D::symmetric(double tol) const {
  const double m = median();
  const double span = upper() - lower();
  if (std::abs((upper() - m) - (m - lower())) > 1e-9 * span) return false;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double mirror = std::clamp(2.0 * m - grid_[i], lower(), upper());
    const double vm = potential_at(mirror);
    if (std::abs(vm - v_[i]) > tol * (1.0 + std::abs(v_[i]))) return false;
  }
  return true;
}

double Measure1D::total_mass() const {
  return std::accumulate(cell_mass_.begin(), cell_mass_.end(), 0.0);
}

double gamma_p_normalizer(double p) {
  return 2.0 * std::pow(p, 1.0 / p - 1.0) * std::tgamma(1.0 / p);
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  std::vector<double> x(points);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) x[i] = lo + h * static_cast<double>(i);
  x.back() = hi;
  return x;
}

}  // namespace

Measure1D build_gamma_p(double p, const BuildOptions& opts) {
  if (!(p >= 1.0 && p <= 8.0)) throw Rejection("gamma_p preset requires p in [1, 8]");
  if (opts.points < 3) throw Rejection("need at least 3 grid points");
  if (!(opts.tail_mass > 0.0 && opts.tail_mass < 1.0)) throw Rejection("tail mass must be in (0,1)");
  const double level = -std::log(opts.tail_mass);
  const double half_width = std::pow(p * level, 1.0 / p);
  std::size_t points = opts.points | 1;  // odd, so the origin is a node
  std::vector<double> x(points);
  const std::size_t mid = points / 2;
  const double h = half_width / static_cast<double>(mid);
  for (std::size_t i = 0; i < points; ++i) {
    x[i] = h * (static_cast<double>(i) - static_cast<double>(mid));
  }
  x.front() = -half_width;
  x.back() = half_width;
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) v[i] = std::pow(std::abs(x[i]), p) / p;
  Provenance prov{"gamma_p", {{"p", p}}};
  // Two-sided tail bound: int_L^inf exp(-x^p/p) <= exp(-L^p/p) / L^{p-1}.
  prov.params["truncated_tail"] =
      2.0 * std::exp(-level) / (std::pow(half_width, p - 1.0) * gamma_p_normalizer(p));
  prov.params["half_width"] = half_width;
  return Measure1D::from_potential(std::move(x), std::move(v), std::move(prov));
}

Measure1D build_gaussian_restricted(double a, const BuildOptions& opts) {
  const double level = -std::log(opts.tail_mass);
  const double right = std::max(std::sqrt(2.0 * level), std::abs(a) + std::sqrt(2.0 * level) * 0.5);
  if (!(a < right - 1.0)) throw Rejection("restriction point too far in the tail");
  std::vector<double> x = uniform_grid(a, right, opts.points);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = 0.5 * x[i] * x[i];
  Provenance prov{"gaussian-restricted", {{"a", a}}};
  // Mass of the full Gaussian retained: P(X >= a).
  prov.params["p"] = 0.5 * std::erfc(a / std::sqrt(2.0));
  return Measure1D::from_potential(std::move(x), std::move(v), std::move(prov));
}

Measure1D build_from_potential(std::vector<double> grid, std::vector<double> potential) {
  return Measure1D::from_potential(std::move(grid), std::move(potential));
}

SemiConvexity check_semi_convexity(const Measure1D& mu, double kappa) {
  if (mu.size() < 3) throw Rejection("semi-convexity check needs at least 3 grid points");
  SemiConvexity out;
  out.holds = true;
  out.min_second_derivative = kInfinity;
  auto x = mu.grid();
  auto v = mu.potential();
  for (std::size_t i = 1; i + 1 < mu.size(); ++i) {
    const double dd = second_difference(x, v, i);
    if (dd < out.min_second_derivative) {
      out.min_second_derivative = dd;
      out.worst_index = i;
      out.worst_x = x[i];
    }
    if (dd < -kappa - second_difference_slack(x, v, i)) out.holds = false;
  }
  return out;
}

Measure1D derive_density_ratio(const Measure1D& mu, std::span<const double> phi, double cap) {
  if (phi.size() != mu.size()) throw Rejection("density-ratio function must live on the measure's grid");
  if (!(cap >= 0.0)) throw Rejection("density-ratio cap D must be nonnegative");
  std::vector<double> x(mu.grid().begin(), mu.grid().end());
  std::vector<double> v(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(phi[i])) throw Rejection("density-ratio function must be finite");
    v[i] = mu.potential()[i] - phi[i];
  }
  Measure1D out = Measure1D::from_potential(std::move(x), std::move(v));
  // log(d mu2 / d mu1) is linear inside cells, so its sup sits on a node.
  double attained = -kInfinity;
  for (std::size_t i = 0; i < mu.size(); ++i)
    attained = std::max(attained, phi[i] + mu.log_z() - out.log_z());
  if (attained > cap + 1e-9) {
    std::ostringstream os;
    os << "density-ratio cap violated after normalization: sup log ratio = " << attained
       << " > D = " << cap;
    throw Rejection(os.str());
  }
  Provenance prov{"density-ratio", {{"D", cap}, {"attained", std::max(attained, 0.0)}}};
  std::vector<double> gx(out.grid().begin(), out.grid().end());
  std::vector<double> gv(out.potential().begin(), out.potential().end());
  return Measure1D::from_potential(std::move(gx), std::move(gv), std::move(prov));
}

Measure1D derive_restrict(const Measure1D& mu, double lo, double hi) {
  lo = std::max(lo, mu.lower());
  hi = std::min(hi, mu.upper());
  const double p = hi > lo ? mu.mass_between(lo, hi) : 0.0;
  if (!(p > 0.0)) throw Rejection("restriction set has zero mass");
  const double eps = 1e-12 * (mu.upper() - mu.lower());
  std::vector<double> x{lo};
  for (double g : mu.grid())
    if (g > lo + eps && g < hi - eps) x.push_back(g);
  x.push_back(hi);
  while (x.size() < 3) {
    std::vector<double> refined;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      refined.push_back(x[i]);
      refined.push_back(0.5 * (x[i] + x[i + 1]));
    }
    refined.push_back(x.back());
    x = std::move(refined);
  }
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = mu.potential_at(x[i]);
  Provenance prov{"restrict", {{"p", p}, {"lo", lo}, {"hi", hi}}};
  return Measure1D::from_potential(std::move(x), std::move(v), std::move(prov));
}

Measure1D derive_translate(const Measure1D& mu, double shift) {
  std::vector<double> x(mu.grid().begin(), mu.grid().end());
  for (double& g : x) g += shift;
  std::vector<double> v(mu.potential().begin(), mu.potential().end());
  return Measure1D::from_potential(std::move(x), std::move(v), {"translate", {{"t", shift}}});
}

Measure1D derive_dilate(const Measure1D& mu, double scale) {
  if (!(scale > 0.0)) throw Rejection("dilation factor must be positive");
  std::vector<double> x(mu.grid().begin(), mu.grid().end());
  for (double& g : x) g *= scale;
  std::vector<double> v(mu.potential().begin(), mu.potential().end());
  return Measure1D::from_potential(std::move(x), std::move(v), {"dilate", {{"scale", scale}}});
}

// ---------------------------------------------------------------------------

void validate_probability(std::span<const double> w, std::size_t n, const char* what) {
  if (w.size() != n) {
    std::ostringstream os;
    os << what << ": expected " << n << " weights, got " << w.size();
    throw Rejection(os.str());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      std::ostringstream os;
      os << what << ": negative or non-finite weight at index " << i + 1;
      throw Rejection(os.str());
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os << what << ": weights sum to " << sum << ", not 1";
    throw Rejection(os.str());
  }
}

DiscreteSpace DiscreteSpace::create(std::vector<double> dist, std::vector<double> weights) {
  const std::size_t nn = dist.size();
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(nn))));
  if (n == 0 || n * n != nn) throw Rejection("distance matrix must be square and nonempty");
  validate_probability(weights, n, "space weights");
  double scale = 0.0;
  for (double d : dist) {
    if (!std::isfinite(d) || d < 0.0) throw Rejection("distances must be finite and nonnegative");
    scale = std::max(scale, d);
  }
  const double tol = 1e-12 * (1.0 + scale);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i * n + i] != 0.0) throw Rejection("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::abs(dist[i * n + j] - dist[j * n + i]) > tol)
        throw Rejection("distance matrix is not symmetric");
      if (!(dist[i * n + j] > 0.0)) {
        std::ostringstream os;
        os << "distinct points " << i + 1 << " and " << j + 1 << " at distance zero";
        throw Rejection(os.str());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double direct = dist[i * n + k];
        const double via = dist[i * n + j] + dist[j * n + k];
        if (direct > via + tol) {
          std::array<int, 3> t{static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                               static_cast<int>(k) + 1};
          std::sort(t.begin(), t.end());
          std::ostringstream os;
          os << "triangle inequality violated for triple (" << t[0] << "," << t[1] << "," << t[2]
             << "): d(" << i + 1 << "," << k + 1 << ")=" << direct << " > d(" << i + 1 << ","
             << j + 1 << ")+d(" << j + 1 << "," << k + 1 << ")=" << via;
          throw MetricViolation(os.str(), t);
        }
      }
    }
  }
  DiscreteSpace s;
  s.n_ = static_cast<int>(n);
  s.dist_ = std::move(dist);
  s.weights_ = std::move(weights);
  return s;
}

DiscreteSpace DiscreteSpace::create(const std::vector<std::vector<double>>& dist,
                                    std::vector<double> weights) {
  std::vector<double> flat;
  for (const auto& row : dist) {
    if (row.size() != dist.size()) throw Rejection("distance matrix must be square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return create(std::move(flat), std::move(weights));
}

double DiscreteSpace::diameter() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

DiscreteSpace DiscreteSpace::with_weights(std::vector<double> weights) const {
  validate_probability(weights, static_cast<std::size_t>(n_), "space weights");
  DiscreteSpace s = *this;
  s.weights_ = std::move(weights);
  return s;
}

DiscreteSpace line_space(std::span<const double> xs, std::vector<double> weights) {
  const std::size_t n = xs.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(xs[i] - xs[j]);
  return DiscreteSpace::create(std::move(d), std::move(weights));
}

DiscreteSpace path_space(int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::iota(xs.begin(), xs.end(), 0.0);
  return line_space(xs, std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

std::vector<double> random_simplex(Rng& rng, int n, double floor) {
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0.0;
  for (double& x : w) {
    x = floor - std::log(1.0 - rng.uniform());
    s += x;
  }
  for (double& x : w) x /= s;
  return w;
}

DiscreteSpace random_space(Rng& rng, int n) {
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> d(un * un, 0.0);
  if (rng.uniform() < 0.5) {
    std::vector<double> px(un), py(un);
    for (std::size_t i = 0; i < un; ++i) {
      px[i] = rng.uniform(0.0, 3.0);
      py[i] = rng.uniform(0.0, 3.0);
    }
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j)
        d[i * un + j] = i == j ? 0.0 : std::max(std::hypot(px[i] - px[j], py[i] - py[j]), 1e-3);
    // Clamping near-coincident points can only break the triangle inequality
    // at the 1e-3 scale; close it with a shortest-path pass.
  } else {
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = i + 1; j < un; ++j)
        d[i * un + j] = d[j * un + i] = rng.uniform(0.5, 2.0);
  }
  for (std::size_t k = 0; k < un; ++k)
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j)
        d[i * un + j] = std::min(d[i * un + j], d[i * un + k] + d[k * un + j]);
  return DiscreteSpace::create(std::move(d), random_simplex(rng, n));
}

std::vector<double> atomize(const Measure1D& mu, int n) {
  if (n < 1) throw Rejection("atomize needs at least one atom");
  std::vector<double> atoms(static_cast<std::size_t>(n));
  std::vector<double> cuts(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) cuts[static_cast<std::size_t>(k)] = mu.quantile(static_cast<double>(k) / n);
  for (int k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double a = cuts[uk], b = cuts[uk + 1];
    const double mass = mu.mass_between(a, b);
    atoms[uk] = mass > 0.0 ? mu.moment_between(a, b) / mass : 0.5 * (a + b);
  }
  return atoms;
}

}  // namespace conc
