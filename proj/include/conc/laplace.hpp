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

#ifndef CONC_LAPLACE_HPP_
#define CONC_LAPLACE_HPP_

#include <functional>
#include <span>
#include <vector>

#include "conc/common.hpp"
#include "conc/measure.hpp"

namespace conc {

/// Convex nondecreasing function on [0, x.back()] with Phi(0) = 0, linear between nodes.
struct PhiGrid {
  std::vector<double> x, y;

  static PhiGrid tabulate(const std::function<double(double)>& f, double x_max, int points = 20001);
  void validate() const;
  double operator()(double t) const;
  /// Smallest t with Phi(t) >= v; rejects v beyond the tabulated range.
  double inverse(double v) const;
  /// Discrete Legendre transform; +inf once lambda passes the last secant slope.
  double conjugate(double lambda) const;
  std::vector<double> conjugate(std::span<const double> lambdas) const;
  /// int_0^inf exp(-Phi), exact for the piecewise-linear model, with the last
  /// segment extended linearly.
  double tail_integral() const;
};

/// int exp(lambda D f) dmu <= exp(lambda eps + Phi*(lambda) + delta) for 1-Lipschitz mean-zero f.
struct LaplaceBound {
  PhiGrid phi;
  double D = 1.0;
  double eps = 0.0;
  double delta = 0.0;

  void validate() const;
  /// Right-hand exponent lambda eps + Phi*(lambda) + delta.
  double exponent(double lambda) const;
};

/// K(r) >= Phi((D' r - z')_+) - delta'.
struct ConcBound {
  PhiGrid phi;
  double Dp = 1.0;
  double zp = 0.0;
  double deltap = 0.0;

  void validate() const;
  double at(double r) const;
  /// Equivalent bound with prescribed offsets z'' >= 0 and delta'' >= -log 2 (one strict);
  /// D'' is the largest rate the original bound supports on an r grid.
  ConcBound shift(double z2, double delta2) const;
};

/// log int exp(lambda f) dmu for weights mu and values f, with a max shift.
double log_laplace(std::span<const double> mu, std::span<const double> f, double lambda);
/// Same on a continuous measure, with f given at the grid nodes; exact when f is linear per cell.
double log_laplace(const Measure1D& mu, std::span<const double> f, double lambda);

struct GibbsCheck {
  double sup_value = 0.0;  // int psi theta* dmu - Ent(theta*)
  double log_moment = 0.0;  // log int exp(psi) dmu
  std::vector<double> theta;  // density of the optimal tilt
  double gap() const { return std::abs(sup_value - log_moment); }
};

GibbsCheck gibbs_check(std::span<const double> mu, std::span<const double> psi);

ConcBound laplace_to_conc(const LaplaceBound& b);
LaplaceBound conc_to_laplace(const ConcBound& b, double tau = 0.5);

struct HerbstBounds {
  LaplaceBound laplace;
  ConcBound conc;
};

/// Laplace bound Phi*(lambda) = lambda^2/(4 rho) and the concentration bound
/// K(r) >= rho (r - sqrt(log 2 / rho))_+^2.
HerbstBounds herbst_laplace(double rho, double x_max = 60.0);

struct LaplaceSup {
  double value = 0.0;
  bool exact = false;
  std::vector<double> f;  // maximizer, mean zero
};

/// sup of log int exp(lambda f) dmu over 1-Lipschitz f with int f dmu = 0.
/// Exact through oriented spanning trees for n <= 7, otherwise a multistart
/// ascent that is a lower bound.
LaplaceSup laplace_sup_discrete(const DiscreteSpace& s, double lambda, Exec exec = Exec::parallel);
LaplaceSup laplace_sup_heuristic(const DiscreteSpace& s, double lambda, int starts = 32,
                                 std::uint64_t seed = 1);

}  // namespace conc

#endif  // CONC_LAPLACE_HPP_
