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

// The cost family phi_p, its conjugates phi_{*,q}, and a numeric Legendre
// transform for arbitrary grid functions.

#ifndef CONC_COST_HPP_
#define CONC_COST_HPP_

#include <span>
#include <vector>

#include "conc/common.hpp"

namespace conc {

/// Exponent pair (p, q) with 1/p + 1/q = 1; p = 1 carries q = +inf.
struct CostSpec {
  double p = 2.0;
  double q = 2.0;

  static CostSpec from_p(double p);
  static CostSpec from_q(double q);
  bool q_infinite() const { return is_plus_infinity(q); }
};

/// phi_p(x): x^2/2 on [0,1] and x^p/p + 1/2 - 1/p beyond when p <= 2,
/// x^p/p when p >= 2.
double phi(double p, double x);
double phi(const CostSpec& c, double x);
/// phi_p'(x).
double phi_derivative(double p, double x);
/// The conjugate phi_{*,q}(lambda). Returns +inf for q = inf, lambda > 1.
double phi_star(double q, double lambda);
double phi_star(const CostSpec& c, double lambda);
/// The x >= 0 with phi_p(x) = y.
double phi_inverse(double p, double y);
double phi_inverse(const CostSpec& c, double y);

/// Discrete conjugate f*(lambda) = max_i lambda x_i - f_i over a sorted grid
/// starting at 0. When the maximizer sits at the right edge and lambda
/// exceeds the last secant slope the sup is unbounded, reported as +inf.
/// Ties resolve to the smallest index.
std::vector<double> legendre_numeric(std::span<const double> xs, std::span<const double> fs,
                                     std::span<const double> lambdas,
                                     Exec exec = Exec::parallel);

/// Grid on [0, X] for sampling phi_p before a Legendre transform: step sizes
/// shrink where phi_p'' is large so the discrete sup stays within `tol`, and
/// X covers the maximizers for lambda up to `lambda_max`.
std::vector<double> legendre_grid(double p, double lambda_max, double tol = 1e-6);

/// F_{p,s} = phi_p o phi_s^{-1}.
double phi_composed(double p, double s, double y);

}  // namespace conc

#endif  // CONC_COST_HPP_
