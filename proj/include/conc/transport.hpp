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

// Transport costs, entropy divergences, transport-entropy constants, the
// exponential-moment metric bound and the first-moment constant.

#ifndef CONC_TRANSPORT_HPP_
#define CONC_TRANSPORT_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conc/common.hpp"
#include "conc/cost.hpp"
#include "conc/measure.hpp"
#include "conc/report.hpp"

namespace conc {

// ---- one-dimensional measures ---------------------------------------------

/// int |F_mu - F_nu| dx over the union of both grids.
double w1_1d(const Measure1D& mu, const Measure1D& nu);
/// int_0^1 c(|Q_mu(u) - Q_nu(u)|) du (monotone coupling).
double monotone_cost_1d(const Measure1D& mu, const Measure1D& nu,
                        const std::function<double(double)>& c);
/// Monotone coupling cost for c(x, y) = phi_p(D |x - y|).
double wc_monotone_1d(const Measure1D& mu, const Measure1D& nu, const CostSpec& spec, double D);
/// H(nu | mu) for densities; +inf when nu charges a region outside mu's support.
double relative_entropy_1d(const Measure1D& nu, const Measure1D& mu);
/// Half the L1 distance between the densities.
double total_variation_1d(const Measure1D& nu, const Measure1D& mu);

// ---- finite spaces ---------------------------------------------------------

struct TransportPlan {
  struct Entry {
    int i, j;
    double mass;
  };
  std::vector<Entry> support;
  double cost = 0.0;
  /// Largest deviation of a row or column sum from its marginal.
  double marginal_residual = 0.0;
};

/// Exact optimal plan moving nu (rows) onto mu (columns); `cost` row-major.
TransportPlan wc_discrete_lp(const DiscreteSpace& s, std::span<const double> nu,
                             std::span<const double> mu, std::span<const double> cost);
/// W_1 on the space's metric.
double w1_discrete(const DiscreteSpace& s, std::span<const double> nu, std::span<const double> mu);
/// Cost matrix c(i, j) = g(d(i, j)).
std::vector<double> cost_matrix(const DiscreteSpace& s, const std::function<double(double)>& g);

struct KrDual {
  double primal = 0.0;
  double dual = 0.0;
  /// A 1-Lipschitz f attaining sum f (nu - mu) = dual.
  std::vector<double> f;
};

KrDual kr_dual(const DiscreteSpace& s, std::span<const double> nu, std::span<const double> mu);

struct Divergences {
  double h_nu_mu = 0.0;  // H(nu | mu)
  double h_mu_nu = 0.0;  // H(mu | nu)
  double tv = 0.0;
};

double relative_entropy(std::span<const double> nu, std::span<const double> mu);
Divergences divergences(std::span<const double> nu, std::span<const double> mu);

// ---- transport-entropy constants ------------------------------------------

enum class TeMode { weak_1p, one_phi, s_p, phi_one };

struct TeOptions {
  TeMode mode = TeMode::weak_1p;
  double p = 1.0;
  double s = 1.0;  // for s_p
};

const char* to_string(TeMode m);

/// A witness measure: weights on a finite space.
struct DiscreteWitness {
  std::string family;
  double parameter = 0.0;
  std::vector<double> weights;
};

/// Point masses, point-mass mixtures, ball restrictions and Gibbs tilts of
/// +-d(., x_i) and of Kantorovich potentials.
std::vector<DiscreteWitness> default_witnesses(const DiscreteSpace& s);

/// The smallest ratio RHS/LHS over witnesses: an upper bound on the best
/// constant (direction upper). Witnesses with zero transport are skipped;
/// rejects when none remain.
ConstantEntry te_constant_estimate(const DiscreteSpace& s, const TeOptions& opts,
                                   const std::vector<DiscreteWitness>& witnesses,
                                   Exec exec = Exec::parallel);
ConstantEntry te_constant_estimate(const DiscreteSpace& s, const TeOptions& opts,
                                   Exec exec = Exec::parallel);

/// Witness measures derived from a 1-D measure: translations (shifted
/// potential on the same grid), exponential tilts and half-line restrictions.
std::vector<Measure1D> default_witnesses_1d(const Measure1D& mu);
ConstantEntry te_constant_estimate_1d(const Measure1D& mu, const TeOptions& opts,
                                      const std::vector<Measure1D>& witnesses,
                                      Exec exec = Exec::parallel);
ConstantEntry te_constant_estimate_1d(const Measure1D& mu, const TeOptions& opts,
                                      Exec exec = Exec::parallel);

/// Largest D with W_{c_{phi_p, D}}(nu, mu) <= H(nu|mu) for one pair, given a
/// monotone evaluator cost(D) (bisection in D).
double largest_phi_rate(const std::function<double(double)>& cost_at, double entropy);

// ---- exponential-moment metric ---------------------------------------------

/// Lipschitz constant of g on the space.
double lipschitz_constant(const DiscreteSpace& s, std::span<const double> g);

struct Psi1Bound {
  double value = 0.0;
  std::vector<double> best_g;
};

/// max over candidates g of |log int e^g dnu - log int e^g dmu| / ||g||_Lip.
/// Always adds eps * f for the Kantorovich potential f (eps from 1e-6 to 1)
/// and refines the best candidate by coordinate search.
Psi1Bound psi1_metric_bound(const DiscreteSpace& s, std::span<const double> nu,
                            std::span<const double> mu,
                            const std::vector<std::vector<double>>& candidates = {});

// ---- first-moment constant -------------------------------------------------

/// Exact 1/D_FM = sup over 1-Lipschitz f of int |f - med f| dmu (n <= 8),
/// by enumerating sign patterns in {+, -, 0}^n. Value 0 means D_FM = +inf.
ConstantEntry first_moment_constant(const DiscreteSpace& s, Exec exec = Exec::parallel);
/// Lower bound on 1/D_FM from f = +-x and f = |x - x0| candidates.
ConstantEntry first_moment_constant_1d(const Measure1D& mu);

}  // namespace conc

#endif  // CONC_TRANSPORT_HPP_
