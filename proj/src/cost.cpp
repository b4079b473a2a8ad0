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

#include "conc/cost.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conc/kernels.hpp"

namespace conc {

namespace {

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) {
    std::ostringstream os;
    os << what << " must be nonnegative, got " << v;
    throw Rejection(os.str());
  }
}

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Rejection("cost exponent p must be a finite value >= 1");
}

}  // namespace

CostSpec CostSpec::from_p(double p) {
  require_p(p);
  return {p, p == 1.0 ? kInfinity : p / (p - 1.0)};
}

CostSpec CostSpec::from_q(double q) {
  if (is_plus_infinity(q)) return {1.0, kInfinity};
  if (!(q > 1.0)) throw Rejection("dual exponent q must be > 1 or +inf");
  return {q / (q - 1.0), q};
}

double phi(double p, double x) {
  require_p(p);
  require_nonnegative(x, "phi argument");
  if (p >= 2.0) return std::pow(x, p) / p;
  if (x <= 1.0) return 0.5 * x * x;
  return std::pow(x, p) / p + 0.5 - 1.0 / p;
}

double phi(const CostSpec& c, double x) { return phi(c.p, x); }

double phi_derivative(double p, double x) {
  if (p >= 2.0 || x > 1.0) return std::pow(x, p - 1.0);
  return x;
}

double phi_star(double q, double lambda) {
  require_nonnegative(lambda, "conjugate argument");
  if (is_plus_infinity(q)) return lambda <= 1.0 ? 0.5 * lambda * lambda : kInfinity;
  if (!(q > 1.0)) throw Rejection("dual exponent q must be > 1 or +inf");
  if (q <= 2.0) return std::pow(lambda, q) / q;
  if (lambda <= 1.0) return 0.5 * lambda * lambda;
  return std::pow(lambda, q) / q + 0.5 - 1.0 / q;
}

double phi_star(const CostSpec& c, double lambda) { return phi_star(c.q, lambda); }

double phi_inverse(double p, double y) {
  require_p(p);
  require_nonnegative(y, "phi inverse argument");
  if (is_plus_infinity(y)) return kInfinity;
  if (p >= 2.0) return std::pow(p * y, 1.0 / p);
  if (y <= 0.5) return std::sqrt(2.0 * y);
  return std::pow(p * (y - 0.5 + 1.0 / p), 1.0 / p);
}

double phi_inverse(const CostSpec& c, double y) { return phi_inverse(c.p, y); }

double phi_composed(double p, double s, double y) { return phi(p, phi_inverse(s, y)); }

std::vector<double> legendre_numeric(std::span<const double> xs, std::span<const double> fs,
                                     std::span<const double> lambdas, Exec exec) {
  if (xs.empty()) throw Rejection("Legendre transform of an empty grid");
  if (xs.size() != fs.size()) throw Rejection("grid and values differ in length");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(fs[i])) throw Rejection("Legendre transform needs finite grid values");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw Rejection("Legendre grid must be strictly increasing");
  }
  std::vector<double> out(lambdas.size());
  if (exec == Exec::serial)
    kernels::legendre_serial(xs, fs, lambdas, out);
  else
    kernels::legendre_parallel(xs, fs, lambdas, out);
  return out;
}

std::vector<double> legendre_grid(double p, double lambda_max, double tol) {
  require_p(p);
  // Largest maximizer needed: phi_p'(x) = lambda_max.
  double xmax;
  if (lambda_max <= 1.0 && p <= 2.0) xmax = lambda_max;
  else if (p == 1.0) xmax = 1.0;
  else xmax = std::pow(lambda_max, 1.0 / (p - 1.0));
  const double right = 1.5 * std::max(xmax, 1.0) + 1.0;
  std::vector<double> xs{0.0};
  double x = 0.0;
  while (x < right) {
    // Sampling error of a discrete sup near x is about phi''(x) h^2 / 8.
    double curv;
    if (p >= 2.0) curv = (p - 1.0) * std::pow(std::max(x, 1e-3), p - 2.0);
    else if (x <= 1.0) curv = 1.0;
    else curv = (p - 1.0) * std::pow(x, p - 2.0);
    double h = curv > 0.0 ? std::sqrt(8.0 * tol / curv) : 0.05;
    h = std::min({h, 0.05 * std::max(x, 1.0), 1.0});
    if (x < 1.0 && x + h > 1.0) h = 1.0 - x;  // keep the branch point on the grid
    x += h;
    xs.push_back(x);
  }
  return xs;
}

}  // namespace conc
